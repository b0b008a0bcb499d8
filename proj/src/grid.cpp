#include "bspf/grid.hpp"

#include "bspf/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace bspf {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_domain: return "invalid-domain";
        case ErrorKind::non_monotone_map: return "non-monotone-map";
        case ErrorKind::non_finite_sample: return "non-finite-sample";
        case ErrorKind::insufficient_basis: return "insufficient-basis";
        case ErrorKind::out_of_domain: return "out-of-domain";
        case ErrorKind::index_out_of_range: return "index-out-of-range";
        case ErrorKind::singular_kkt: return "singular-kkt";
        case ErrorKind::solver_failure: return "solver-failure";
        case ErrorKind::dimension_mismatch: return "dimension-mismatch";
        case ErrorKind::grid_too_small: return "grid-too-small";
        case ErrorKind::step_underflow: return "step-underflow";
        case ErrorKind::nan_detected: return "nan-detected";
        case ErrorKind::drying: return "drying-error";
        case ErrorKind::invalid_config: return "invalid-config";
    }
    return "unknown";
}

Grid::Grid(double a, double b, int n_points) : a_(a), b_(b), n_(n_points) {
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
        throw Error(ErrorKind::invalid_domain, "grid requires finite a < b");
    }
    if (n_points < 2) {
        throw Error(ErrorKind::invalid_domain, "grid requires at least 2 points");
    }
    dx_ = (b - a) / (n_points - 1);
}

std::vector<double> Grid::points() const {
    std::vector<double> x(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) x[static_cast<std::size_t>(j)] = point(j);
    return x;
}

std::vector<double> Grid::trapezoid_weights() const {
    std::vector<double> w(static_cast<std::size_t>(n_), dx_);
    w.front() = 0.5 * dx_;
    w.back() = 0.5 * dx_;
    return w;
}

Grid make_grid(double a, double b, int n) { return Grid(a, b, n); }

double GridMap::inverse(double xi, double tol) const {
    if (xi < a || xi > b) throw Error(ErrorKind::out_of_domain, "inverse map argument outside [a,b]");
    double lo = a;
    double hi = b;
    for (int it = 0; it < 200 && hi - lo > tol * (b - a); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (forward(mid) < xi) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> GridMap::mapped_points(const Grid& grid) const {
    std::vector<double> xi(static_cast<std::size_t>(grid.size()));
    for (int j = 0; j < grid.size(); ++j) xi[static_cast<std::size_t>(j)] = forward(grid.point(j));
    return xi;
}

void GridMap::validate_on(const Grid& grid) const {
    if (std::abs(grid.a() - a) > 1e-12 * (1.0 + std::abs(a)) ||
        std::abs(grid.b() - b) > 1e-12 * (1.0 + std::abs(b))) {
        throw Error(ErrorKind::invalid_domain, "map domain differs from grid domain");
    }
    if (std::abs(forward(a) - a) > 1e-12 * (1.0 + std::abs(a)) ||
        std::abs(forward(b) - b) > 1e-12 * (1.0 + std::abs(b))) {
        throw Error(ErrorKind::invalid_domain, "map does not fix the endpoints");
    }
    for (int j = 0; j < grid.size(); ++j) {
        const double d = derivative(grid.point(j));
        if (!(d > 0.0) || !std::isfinite(d)) {
            std::ostringstream msg;
            msg << "g'(x_" << j << ") = " << d;
            throw Error(ErrorKind::non_monotone_map, msg.str());
        }
    }
}

GridMap make_identity_map(const Grid& grid) {
    return GridMap{[](double x) { return x; }, [](double) { return 1.0; }, "identity", grid.a(),
                   grid.b()};
}

GridMap make_sigmoid_composite_map(const Grid& grid, std::span<const double> centers,
                                   std::span<const double> widths,
                                   std::span<const double> strengths) {
    if (centers.size() != widths.size() || centers.size() != strengths.size()) {
        throw Error(ErrorKind::dimension_mismatch, "centers, widths and strengths differ in length");
    }
    if (centers.empty()) {
        return make_identity_map(grid);
    }
    for (std::size_t i = 0; i < centers.size(); ++i) {
        if (!(widths[i] > 0.0)) throw Error(ErrorKind::invalid_config, "sigmoid width must be positive");
    }

    struct Bump {
        double c, w, s;
    };
    std::vector<Bump> bumps;
    for (std::size_t i = 0; i < centers.size(); ++i) bumps.push_back({centers[i], widths[i], strengths[i]});

    auto raw = [bumps](double x) {
        double g = x;
        for (const auto& bp : bumps) g -= bp.s * bp.w * std::tanh((x - bp.c) / bp.w);
        return g;
    };
    auto raw_d = [bumps](double x) {
        double d = 1.0;
        for (const auto& bp : bumps) {
            const double sech = 1.0 / std::cosh((x - bp.c) / bp.w);
            d -= bp.s * sech * sech;
        }
        return d;
    };

    const double a = grid.a();
    const double b = grid.b();
    const double ra = raw(a);
    const double scale = (b - a) / (raw(b) - ra);
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw Error(ErrorKind::non_monotone_map, "composite map reverses the interval");
    }

    GridMap map;
    map.a = a;
    map.b = b;
    map.forward = [raw, ra, scale, a, b](double x) {
        if (x == b) return b;
        return a + (raw(x) - ra) * scale;
    };
    map.derivative = [raw_d, scale](double x) { return raw_d(x) * scale; };
    std::ostringstream label;
    label << "sigmoid-composite(" << bumps.size() << ")";
    map.label = label.str();

    const int n_scan = 10 * grid.size();
    for (int k = 0; k <= n_scan; ++k) {
        const double x = a + (b - a) * k / n_scan;
        if (!(map.derivative(x) > 0.0)) {
            throw Error(ErrorKind::non_monotone_map, "g' changes sign on the grid");
        }
    }
    map.validate_on(grid);
    return map;
}

Field::Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.size()) {
        throw Error(ErrorKind::dimension_mismatch, "field length differs from grid size");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error(ErrorKind::non_finite_sample, "field holds a non-finite value");
    }
}

Field::Field(Grid grid) : grid_(grid), values_(static_cast<std::size_t>(grid.size()), 0.0) {}

double Field::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

Field2D::Field2D(Grid grid_x, Grid grid_y, RowMatrix values)
    : gx_(grid_x), gy_(grid_y), values_(std::move(values)) {
    if (values_.rows() != gy_.size() || values_.cols() != gx_.size()) {
        throw Error(ErrorKind::dimension_mismatch, "2D field shape differs from (Ny, Nx)");
    }
}

Field2D::Field2D(Grid grid_x, Grid grid_y)
    : gx_(grid_x), gy_(grid_y), values_(RowMatrix::Zero(grid_y.size(), grid_x.size())) {}

Field sample(const Grid& grid, const std::function<double(double)>& fn) {
    std::vector<double> v(static_cast<std::size_t>(grid.size()));
    for (int j = 0; j < grid.size(); ++j) {
        const double y = fn(grid.point(j));
        if (!std::isfinite(y)) {
            std::ostringstream msg;
            msg << "f(x_" << j << ") is not finite";
            throw Error(ErrorKind::non_finite_sample, msg.str());
        }
        v[static_cast<std::size_t>(j)] = y;
    }
    return Field(grid, std::move(v));
}

Field2D sample(const Grid& gx, const Grid& gy, const std::function<double(double, double)>& fn) {
    RowMatrix v(gy.size(), gx.size());
    for (int i = 0; i < gy.size(); ++i) {
        for (int j = 0; j < gx.size(); ++j) {
            const double y = fn(gx.point(j), gy.point(i));
            if (!std::isfinite(y)) throw Error(ErrorKind::non_finite_sample, "2D sample is not finite");
            v(i, j) = y;
        }
    }
    return Field2D(gx, gy, std::move(v));
}

void write_csv(std::ostream& os, const Field& field) {
    os << "x,value\n" << std::scientific << std::setprecision(16);
    for (int j = 0; j < field.size(); ++j) os << field.grid().point(j) << ',' << field[j] << '\n';
}

void write_csv(std::ostream& os, const Field2D& field) {
    os << std::scientific << std::setprecision(16) << "y\\x";
    for (int j = 0; j < field.nx(); ++j) os << ',' << field.grid_x().point(j);
    os << '\n';
    for (int i = 0; i < field.ny(); ++i) {
        os << field.grid_y().point(i);
        for (int j = 0; j < field.nx(); ++j) os << ',' << field.values()(i, j);
        os << '\n';
    }
}

}  // namespace bspf
