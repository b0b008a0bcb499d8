#include "bspf/swe.hpp"

#include "bspf/error.hpp"

#include <algorithm>
#include <string>

namespace bspf {

SweState make_swe_state(const Grid& gx, const Grid& gy) {
    return SweState{Field2D(gx, gy), Field2D(gx, gy), Field2D(gx, gy)};
}

std::vector<double> flatten(const SweState& s) {
    const Eigen::Index sz = s.eta.values().size();
    std::vector<double> v(static_cast<std::size_t>(3 * sz));
    std::copy_n(s.eta.values().data(), sz, v.begin());
    std::copy_n(s.mm.values().data(), sz, v.begin() + sz);
    std::copy_n(s.nn.values().data(), sz, v.begin() + 2 * sz);
    return v;
}

SweState unflatten(const Grid& gx, const Grid& gy, std::span<const double> v) {
    SweState s = make_swe_state(gx, gy);
    const Eigen::Index sz = s.eta.values().size();
    if (static_cast<Eigen::Index>(v.size()) != 3 * sz) throw Error(ErrorKind::dimension_mismatch, "packed state has the wrong length");
    std::copy_n(v.begin(), sz, s.eta.values().data());
    std::copy_n(v.begin() + sz, sz, s.mm.values().data());
    std::copy_n(v.begin() + 2 * sz, sz, s.nn.values().data());
    return s;
}

double total_volume(const Field2D& eta) {
    const std::vector<double> wx = eta.grid_x().trapezoid_weights();
    const std::vector<double> wy = eta.grid_y().trapezoid_weights();
    const Eigen::Map<const Eigen::VectorXd> vx(wx.data(), static_cast<Eigen::Index>(wx.size()));
    const Eigen::Map<const Eigen::VectorXd> vy(wy.data(), static_cast<Eigen::Index>(wy.size()));
    return vy.dot(eta.values() * vx);
}

double check_depth(const RowMatrix& h, const RowMatrix& eta) {
    const double hmin = (h + eta).minCoeff();
    if (!(hmin > 0.0)) throw Error(ErrorKind::drying, "total depth is not positive (min " + std::to_string(hmin) + ")");
    return hmin;
}

}  // namespace bspf
