#include "bspf/baselines.hpp"

#include "bspf/error.hpp"
#include "fftw_lock.hpp"

#include <fftw3.h>

#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>
#include <numbers>

namespace bspf {

ChebyshevGrid make_chebyshev_grid(double a, double b, int n_points) {
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) throw Error(ErrorKind::invalid_domain, "Chebyshev grid needs a < b");
    if (n_points < 2) throw Error(ErrorKind::grid_too_small, "Chebyshev grid needs at least 2 points");
    ChebyshevGrid g{a, b, n_points, std::vector<double>(static_cast<std::size_t>(n_points))};
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int j = 0; j < n_points; ++j) {
        g.points[static_cast<std::size_t>(j)] = mid + half * std::cos(std::numbers::pi * j / (n_points - 1));
    }
    g.points.front() = b;
    g.points.back() = a;
    return g;
}

struct ChebyshevWorkspace::Plan {
    int n;
    double* buf = nullptr;
    fftw_plan dct = nullptr;

    explicit Plan(int n_points) : n(n_points) {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        buf = fftw_alloc_real(static_cast<std::size_t>(n));
        dct = fftw_plan_r2r_1d(n, buf, buf, FFTW_REDFT00, FFTW_ESTIMATE);
    }
    ~Plan() {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(dct);
        fftw_free(buf);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
};

ChebyshevWorkspace::ChebyshevWorkspace(ChebyshevGrid grid)
    : grid_(std::move(grid)), plan_(std::make_unique<Plan>(grid_.n_points)),
      coeffs_(static_cast<std::size_t>(grid_.n_points) + 1) {}

ChebyshevWorkspace::~ChebyshevWorkspace() = default;
ChebyshevWorkspace::ChebyshevWorkspace(ChebyshevWorkspace&&) noexcept = default;
ChebyshevWorkspace& ChebyshevWorkspace::operator=(ChebyshevWorkspace&&) noexcept = default;

ChebyshevWorkspace::ChebyshevWorkspace(const ChebyshevWorkspace& other)
    : grid_(other.grid_), plan_(std::make_unique<Plan>(other.grid_.n_points)), coeffs_(other.coeffs_) {}

void ChebyshevWorkspace::transform(std::span<double> buffer) {
    std::copy(buffer.begin(), buffer.end(), plan_->buf);
    fftw_execute(plan_->dct);
    std::copy(plan_->buf, plan_->buf + plan_->n, buffer.begin());
}

std::vector<double> ChebyshevWorkspace::coefficients(std::span<const double> f) {
    const int n = grid_.n_points;
    if (static_cast<int>(f.size()) != n) throw Error(ErrorKind::dimension_mismatch, "sample length differs from Chebyshev grid");
    std::vector<double> a(f.begin(), f.end());
    transform(a);
    const double s = 1.0 / (n - 1);
    for (double& v : a) v *= s;
    a.front() *= 0.5;
    a.back() *= 0.5;
    return a;
}

void ChebyshevWorkspace::differentiate(std::span<const double> f, std::span<double> out) {
    const int n = grid_.n_points;
    if (static_cast<int>(out.size()) != n) throw Error(ErrorKind::dimension_mismatch, "output length differs from Chebyshev grid");
    const std::vector<double> a = coefficients(f);
    std::vector<double>& b = coeffs_;
    std::fill(b.begin(), b.end(), 0.0);
    // b_{k-1} = b_{k+1} + 2k a_k, top down
    double next = 0.0;
    double next2 = 0.0;
    for (int k = n - 1; k >= 1; --k) {
        const double v = next2 + 2.0 * k * a[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(k - 1)] = v;
        next2 = next;
        next = v;
    }
    b[0] *= 0.5;
    for (int k = 1; k < n - 1; ++k) b[static_cast<std::size_t>(k)] *= 0.5;
    std::span<double> v(b.data(), static_cast<std::size_t>(n));
    transform(v);
    const double scale = 2.0 / (grid_.b - grid_.a);
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = scale * v[static_cast<std::size_t>(j)];
}

void ChebyshevWorkspace::antiderivative(std::span<const double> fprime, std::span<double> out, BoundaryValue bc) {
    const int n = grid_.n_points;
    if (static_cast<int>(out.size()) != n) throw Error(ErrorKind::dimension_mismatch, "output length differs from Chebyshev grid");
    const std::vector<double> a = coefficients(fprime);
    auto at = [&](int k) { return k < n ? a[static_cast<std::size_t>(k)] : 0.0; };
    std::vector<double>& c = coeffs_;
    c[0] = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double lower = k == 1 ? 2.0 * at(0) : at(k - 1);
        c[static_cast<std::size_t>(k)] = (lower - at(k + 1)) / (2.0 * k);
    }
    const double top = c[static_cast<std::size_t>(n)];
    std::vector<double> v(c.begin(), c.begin() + n);
    for (int k = 1; k < n - 1; ++k) v[static_cast<std::size_t>(k)] *= 0.5;
    transform(v);
    const double scale = 0.5 * (grid_.b - grid_.a);
    for (int j = 0; j < n; ++j) {
        const double tn = std::cos(std::numbers::pi * static_cast<double>(n) * j / (n - 1));
        out[static_cast<std::size_t>(j)] = scale * (v[static_cast<std::size_t>(j)] + top * tn);
    }
    const std::size_t ref = bc.at == Endpoint::a ? static_cast<std::size_t>(n - 1) : 0;
    const double shift = bc.value - out[ref];
    for (double& x : out) x += shift;
}

std::vector<double> chebyshev_differentiate(const ChebyshevGrid& grid, std::span<const double> f) {
    ChebyshevWorkspace ws(grid);
    std::vector<double> out(f.size());
    ws.differentiate(f, out);
    return out;
}

std::vector<double> chebyshev_antiderivative(const ChebyshevGrid& grid, std::span<const double> fprime,
                                             BoundaryValue bc) {
    ChebyshevWorkspace ws(grid);
    std::vector<double> out(fprime.size());
    ws.antiderivative(fprime, out, bc);
    return out;
}

Field simpson_integrate(const Field& fprime, BoundaryValue bc) {
    const Grid& g = fprime.grid();
    const int n = g.size();
    if (n < 3) throw Error(ErrorKind::grid_too_small, "Simpson integration needs N >= 3");
    const double h = g.spacing();
    const std::vector<double>& f = fprime.values();
    std::vector<double> F(static_cast<std::size_t>(n), 0.0);
    auto at = [&](int j) { return f[static_cast<std::size_t>(j)]; };
    for (int j = 2; j < n; j += 2) {
        F[static_cast<std::size_t>(j)] = F[static_cast<std::size_t>(j - 2)] + h / 3.0 * (at(j - 2) + 4.0 * at(j - 1) + at(j));
    }
    if (n >= 4) {
        F[1] = h / 24.0 * (9.0 * at(0) + 19.0 * at(1) - 5.0 * at(2) + at(3));
    } else {
        F[1] = h / 12.0 * (5.0 * at(0) + 8.0 * at(1) - at(2));
    }
    for (int j = 3; j < n; j += 2) {
        F[static_cast<std::size_t>(j)] = F[static_cast<std::size_t>(j - 3)] +
                                          3.0 * h / 8.0 * (at(j - 3) + 3.0 * at(j - 2) + 3.0 * at(j - 1) + at(j));
    }
    const double shift = bc.value - (bc.at == Endpoint::a ? F.front() : F.back());
    for (double& v : F) v += shift;
    return Field(g, std::move(F));
}

namespace {

// Centred difference at (i, j) of a row-major (ny x nx) array along x or y.
// The wall node's ghost equals sign * (its inner neighbour).
inline double dx_at(const double* q, int nx, int i, int j, double sign, double inv2dx) {
    const double* row = q + static_cast<std::ptrdiff_t>(i) * nx;
    if (j == 0) return (1.0 - sign) * row[1] * inv2dx;
    if (j == nx - 1) return (sign - 1.0) * row[nx - 2] * inv2dx;
    return (row[j + 1] - row[j - 1]) * inv2dx;
}

inline double dy_at(const double* q, int nx, int ny, int i, int j, double sign, double inv2dy) {
    const std::ptrdiff_t at = static_cast<std::ptrdiff_t>(i) * nx + j;
    if (i == 0) return (1.0 - sign) * q[at + nx] * inv2dy;
    if (i == ny - 1) return (sign - 1.0) * q[at - nx] * inv2dy;
    return (q[at + nx] - q[at - nx]) * inv2dy;
}

constexpr double kEven = 1.0;
constexpr double kOdd = -1.0;

}  // namespace

FdSweStepper::FdSweStepper(Grid gx, Grid gy, RowMatrix bathymetry, SweParams params)
    : gx_(std::move(gx)), gy_(std::move(gy)), h_(std::move(bathymetry)), params_(params) {
    if (gx_.size() < 3 || gy_.size() < 3) throw Error(ErrorKind::grid_too_small, "FD shallow water needs at least 3 points per axis");
    if (h_.rows() != gy_.size() || h_.cols() != gx_.size()) throw Error(ErrorKind::dimension_mismatch, "bathymetry shape differs from grid");
    const std::size_t sz = static_cast<std::size_t>(h_.size());
    for (auto* v : {&hh_, &aa_, &bb_, &cc_, &fric_}) v->resize(sz);
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &y_}) v->resize(3 * sz);
}

void FdSweStepper::rhs(std::span<const double> u, std::span<double> dudt) {
    const int nx = gx_.size();
    const int ny = gy_.size();
    const std::size_t sz = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    if (u.size() != 3 * sz || dudt.size() != 3 * sz) throw Error(ErrorKind::dimension_mismatch, "packed state has the wrong length");
    const double* eta = u.data();
    const double* m = eta + sz;
    const double* nf = m + sz;
    const double* h = h_.data();
    const double g = params_.gravity;
    const double ga2 = g * params_.manning_alpha * params_.manning_alpha;
    double hmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < sz; ++k) {
        const double H = h[k] + eta[k];
        hmin = std::min(hmin, H);
        hh_[k] = H;
        aa_[k] = m[k] * m[k] / H;
        bb_[k] = m[k] * nf[k] / H;
        cc_[k] = nf[k] * nf[k] / H;
        const double sp = std::sqrt(m[k] * m[k] + nf[k] * nf[k]);
        fric_[k] = sp == 0.0 ? 0.0 : ga2 * sp / (H * H * std::cbrt(H));
    }
    if (!(hmin > 0.0)) throw Error(ErrorKind::drying, "total depth is not positive (min " + std::to_string(hmin) + ")");

    const double ix = 0.5 / gx_.spacing();
    const double iy = 0.5 / gy_.spacing();
    double* de = dudt.data();
    double* dm = de + sz;
    double* dn = dm + sz;
    for (int i = 0; i < ny; ++i) {
        for (int j = 0; j < nx; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * nx + j;
            de[k] = -(dx_at(m, nx, i, j, kOdd, ix) + dy_at(nf, nx, ny, i, j, kOdd, iy));
            const double H = hh_[k];
            if (j == 0 || j == nx - 1) {
                dm[k] = 0.0;
            } else {
                dm[k] = -(dx_at(aa_.data(), nx, i, j, kEven, ix) + dy_at(bb_.data(), nx, ny, i, j, kOdd, iy)) -
                        g * H * dx_at(eta, nx, i, j, kEven, ix) - fric_[k] * m[k];
            }
            if (i == 0 || i == ny - 1) {
                dn[k] = 0.0;
            } else {
                dn[k] = -(dx_at(bb_.data(), nx, i, j, kOdd, ix) + dy_at(cc_.data(), nx, ny, i, j, kEven, iy)) -
                        g * H * dy_at(eta, nx, ny, i, j, kEven, iy) - fric_[k] * nf[k];
            }
        }
    }
}

void FdSweStepper::step(std::span<double> u, double dt) {
    if (!(dt > 0.0)) throw Error(ErrorKind::invalid_config, "dt must be positive");
    const std::size_t n = u.size();
    rhs(u, k1_);
    for (std::size_t i = 0; i < n; ++i) y_[i] = u[i] + 0.5 * dt * k1_[i];
    rhs(y_, k2_);
    for (std::size_t i = 0; i < n; ++i) y_[i] = u[i] + 0.5 * dt * k2_[i];
    rhs(y_, k3_);
    for (std::size_t i = 0; i < n; ++i) y_[i] = u[i] + dt * k3_[i];
    rhs(y_, k4_);
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
        u[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
        finite = finite && std::isfinite(u[i]);
    }
    if (!finite) throw Error(ErrorKind::nan_detected, "FD shallow-water step produced non-finite values");
}

double FdSweStepper::cfl(std::span<const double> u, double dt) const {
    const std::size_t sz = static_cast<std::size_t>(h_.size());
    double hmax = 0.0;
    for (std::size_t k = 0; k < sz; ++k) hmax = std::max(hmax, h_.data()[k] + u[k]);
    return dt * std::sqrt(params_.gravity * hmax) / std::min(gx_.spacing(), gy_.spacing());
}

SweState fd_swe_rhs(const SweState& s, const RowMatrix& bathymetry, const SweParams& params) {
    FdSweStepper st(s.eta.grid_x(), s.eta.grid_y(), bathymetry, params);
    const std::vector<double> u = flatten(s);
    std::vector<double> du(u.size());
    st.rhs(u, du);
    return unflatten(s.eta.grid_x(), s.eta.grid_y(), du);
}

double fd_swe_cfl(const SweState& s, const RowMatrix& bathymetry, double dt, const SweParams& params) {
    const double hmax = (bathymetry + s.eta.values()).maxCoeff();
    const double h = std::min(s.eta.grid_x().spacing(), s.eta.grid_y().spacing());
    return dt * std::sqrt(params.gravity * std::max(hmax, 0.0)) / h;
}

namespace {

void warn_cfl(double cfl) {
    static std::atomic<bool> warned{false};
    if (cfl > 1.0 && !warned.exchange(true)) std::clog << "warning: FD shallow-water step exceeds CFL 1 (" << cfl << ")\n";
}

}  // namespace

SweState fd_swe_step(const SweState& s, const RowMatrix& bathymetry, double dt, const SweParams& params) {
    warn_cfl(fd_swe_cfl(s, bathymetry, dt, params));
    FdSweStepper st(s.eta.grid_x(), s.eta.grid_y(), bathymetry, params);
    std::vector<double> u = flatten(s);
    st.step(u, dt);
    return unflatten(s.eta.grid_x(), s.eta.grid_y(), u);
}

void FdSweStepper::check_cfl(std::span<const double> u, double dt) const { warn_cfl(cfl(u, dt)); }

}  // namespace bspf
