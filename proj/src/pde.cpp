#include "bspf/pde.hpp"

#include "bspf/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bspf {

namespace {

using RowArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double rms_scaled(std::span<const double> v, std::span<const double> u, std::span<const double> w, double atol,
                  double rtol) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double sc = atol + rtol * std::max(std::abs(u[i]), std::abs(w[i]));
        const double q = v[i] / sc;
        s += q * q;
    }
    return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

}  // namespace

Trajectory integrate_rk45(const RhsFn& rhs, std::vector<double> u, double t0, double t1, const Rk45Options& opt) {
    if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0)) throw Error(ErrorKind::invalid_config, "tolerances must be positive");
    if (!(t1 > t0)) throw Error(ErrorKind::invalid_config, "t1 must exceed t0");
    std::vector<double> outs;
    for (double t : opt.output_times) {
        if (t < t0 || t > t1) throw Error(ErrorKind::invalid_config, "output time outside the integration span");
        outs.push_back(t);
    }
    std::sort(outs.begin(), outs.end());
    outs.erase(std::unique(outs.begin(), outs.end()), outs.end());
    if (outs.empty() || outs.back() < t1) outs.push_back(t1);

    const std::size_t n = u.size();
    const double span = t1 - t0;
    Trajectory traj;
    std::size_t next_out = 0;
    if (outs.front() == t0) {
        traj.times.push_back(t0);
        traj.states.push_back(u);
        ++next_out;
    }

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y(n), ynew(n), err(n);
    auto eval = [&](double t, const std::vector<double>& x, std::vector<double>& k) {
        rhs(t, x, k);
        ++traj.rhs_evals;
    };

    double t = t0;
    eval(t, u, k1);

    double h = opt.first_step;
    if (!(h > 0.0)) {
        const double d0 = rms_scaled(u, u, u, opt.abs_tol, opt.rel_tol);
        const double d1 = rms_scaled(k1, u, u, opt.abs_tol, opt.rel_tol);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, span);
        for (std::size_t i = 0; i < n; ++i) y[i] = u[i] + h0 * k1[i];
        eval(t + h0, y, k2);
        for (std::size_t i = 0; i < n; ++i) err[i] = (k2[i] - k1[i]) / h0;
        const double d2 = rms_scaled(err, u, u, opt.abs_tol, opt.rel_tol);
        const double dm = std::max(d1, d2);
        if (dm <= 1e-15) {
            h = span;
        } else {
            h = std::min(100.0 * h0, std::pow(0.01 / dm, 0.2));
        }
    }
    h = std::min(h, opt.max_step);

    while (next_out < outs.size()) {
        const double target = outs[next_out];
        double step = std::min(h, target - t);
        const bool lands = step >= target - t;
        if (step < 1e-12 * span) throw Error(ErrorKind::step_underflow, "step size fell below 1e-12 of the span at t=" + std::to_string(t));

        for (std::size_t i = 0; i < n; ++i) y[i] = u[i] + step * a21 * k1[i];
        eval(t + c2 * step, y, k2);
        for (std::size_t i = 0; i < n; ++i) y[i] = u[i] + step * (a31 * k1[i] + a32 * k2[i]);
        eval(t + c3 * step, y, k3);
        for (std::size_t i = 0; i < n; ++i) y[i] = u[i] + step * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        eval(t + c4 * step, y, k4);
        for (std::size_t i = 0; i < n; ++i) y[i] = u[i] + step * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        eval(t + c5 * step, y, k5);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = u[i] + step * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        }
        eval(t + step, y, k6);
        for (std::size_t i = 0; i < n; ++i) {
            ynew[i] = u[i] + step * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        }
        const double tn = lands ? target : t + step;
        eval(tn, ynew, k7);
        for (std::size_t i = 0; i < n; ++i) {
            err[i] = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        }
        const double en = rms_scaled(err, u, ynew, opt.abs_tol, opt.rel_tol);

        if (std::isfinite(en) && en <= 1.0 && all_finite(ynew)) {
            ++traj.accepted;
            t = tn;
            u.swap(ynew);
            if (opt.post_step) {
                opt.post_step(t, u);
                eval(t, u, k1);
            } else {
                k1.swap(k7);
            }
            if (lands) {
                traj.times.push_back(t);
                traj.states.push_back(u);
                ++next_out;
            }
            const double fac = en == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 10.0);
            // A step shortened to hit an output time says little about the next one.
            h = std::min(opt.max_step, std::max(h, step) * (lands && step < h ? 1.0 : fac));
        } else {
            ++traj.rejected;
            const double fac = std::isfinite(en) ? std::clamp(0.9 * std::pow(en, -0.2), 0.2, 1.0) : 0.2;
            h = step * fac;
        }
    }
    return traj;
}

Trajectory integrate_rk4(const RhsFn& rhs, std::vector<double> u, double t0, const Rk4Options& opt) {
    if (!(opt.dt > 0.0)) throw Error(ErrorKind::invalid_config, "dt must be positive");
    if (opt.n_steps < 0) throw Error(ErrorKind::invalid_config, "step count must be non-negative");
    const std::size_t n = u.size();
    Trajectory traj;
    traj.times.push_back(t0);
    traj.states.push_back(u);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), y(n);
    const double dt = opt.dt;
    for (long s = 0; s < opt.n_steps; ++s) {
        const double t = t0 + static_cast<double>(s) * dt;
        rhs(t, u, k1);
        for (std::size_t i = 0; i < n; ++i) y[i] = u[i] + 0.5 * dt * k1[i];
        rhs(t + 0.5 * dt, y, k2);
        for (std::size_t i = 0; i < n; ++i) y[i] = u[i] + 0.5 * dt * k2[i];
        rhs(t + 0.5 * dt, y, k3);
        for (std::size_t i = 0; i < n; ++i) y[i] = u[i] + dt * k3[i];
        rhs(t + dt, y, k4);
        traj.rhs_evals += 4;
        for (std::size_t i = 0; i < n; ++i) u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        const double tn = t0 + static_cast<double>(s + 1) * dt;
        if (opt.post_step) opt.post_step(tn, u);
        if (!all_finite(u)) throw Error(ErrorKind::nan_detected, "non-finite state after step " + std::to_string(s + 1));
        ++traj.accepted;
        const bool last = s + 1 == opt.n_steps;
        if (last || (opt.snapshot_every > 0 && (s + 1) % opt.snapshot_every == 0)) {
            traj.times.push_back(tn);
            traj.states.push_back(u);
        }
    }
    return traj;
}

// ---------------------------------------------------------------- Burgers

void validate(const BurgersParams& p) {
    if (!(p.nu > 0.0)) throw Error(ErrorKind::invalid_config, "viscosity must be positive");
    if (!(p.b > p.a)) throw Error(ErrorKind::invalid_config, "Burgers requires b > a");
}

double burgers_exact(const BurgersParams& p, double x, double t) {
    const double eta = p.a / p.nu * (x - p.b * t - p.c);
    // e^eta = inf gives the right limit b - a.
    return (p.b - p.a) + 2.0 * p.a / (1.0 + std::exp(eta));
}

double burgers_exact_dt(const BurgersParams& p, double x, double t) {
    const double eta = p.a / p.nu * (x - p.b * t - p.c);
    const double ch = std::cosh(0.5 * eta);
    return p.a * p.a * p.b / (2.0 * p.nu) / (ch * ch);
}

void validate(const BurgersConfig& cfg) {
    validate(cfg.params);
    if (!(cfg.x_max > cfg.x_min)) throw Error(ErrorKind::invalid_domain, "x_max must exceed x_min");
    if (!(cfg.t_end > 0.0)) throw Error(ErrorKind::invalid_config, "t_end must be positive");
    if (cfg.n < 2 * cfg.p) throw Error(ErrorKind::insufficient_basis, "n must be at least 2p");
    if (cfg.m < cfg.p) throw Error(ErrorKind::invalid_config, "m must be at least p");
    if (cfg.m > cfg.n_points) throw Error(ErrorKind::invalid_config, "m must not exceed N");
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0)) throw Error(ErrorKind::invalid_config, "tolerances must be positive");
}

namespace {

std::shared_ptr<const PeriodizationPlan> make_plan(const Grid& g, int p, int n, int m, std::optional<double> beta,
                                                   double lambda) {
    return std::make_shared<const PeriodizationPlan>(build_plan(g, p, n, m, beta, lambda));
}

std::vector<double> default_output_times(double t_end) {
    std::vector<double> out;
    const long k = std::lround(std::floor(t_end / 0.1 + 1e-9));
    for (long i = 0; i <= k; ++i) out.push_back(0.1 * static_cast<double>(i));
    if (out.back() < t_end - 1e-12) out.push_back(t_end);
    return out;
}

}  // namespace

BurgersProblem::BurgersProblem(const BurgersConfig& cfg)
    : cfg_((validate(cfg), cfg)),
      op_(make_plan(Grid(cfg.x_min, cfg.x_max, cfg.n_points), cfg.p, cfg.n, cfg.m, cfg.beta, cfg.lambda), {}, {},
          cfg.filter_alpha, cfg.filter_order),
      ux_(static_cast<std::size_t>(cfg.n_points)),
      uxx_(static_cast<std::size_t>(cfg.n_points)),
      tmp_(static_cast<std::size_t>(cfg.n_points)) {}

std::vector<double> BurgersProblem::initial_state() const {
    const Grid& g = op_.grid();
    std::vector<double> u(static_cast<std::size_t>(g.size()));
    for (int j = 0; j < g.size(); ++j) u[static_cast<std::size_t>(j)] = burgers_exact(cfg_.params, g.point(j), 0.0);
    return u;
}

void BurgersProblem::rhs(double t, std::span<const double> u, std::span<double> dudt) {
    const BurgersParams& p = cfg_.params;
    const BcOverride ov[2] = {{0, burgers_exact(p, cfg_.x_min, t)}, {cfg_.p, burgers_exact(p, cfg_.x_max, t)}};
    op_.differentiate(u, ux_, ov);
    op_.differentiate(ux_, uxx_);
    for (std::size_t j = 0; j < u.size(); ++j) dudt[j] = p.nu * uxx_[j] - u[j] * ux_[j];
    dudt.front() = burgers_exact_dt(p, cfg_.x_min, t);
    dudt.back() = burgers_exact_dt(p, cfg_.x_max, t);
}

void BurgersProblem::post_step(double t, std::span<double> u) {
    const BurgersParams& p = cfg_.params;
    const double left = burgers_exact(p, cfg_.x_min, t);
    const double right = burgers_exact(p, cfg_.x_max, t);
    if (cfg_.filter) {
        const BcOverride ov[2] = {{0, left}, {cfg_.p, right}};
        op_.filter(u, tmp_, ov);
        std::copy(tmp_.begin(), tmp_.end(), u.begin());
    }
    u.front() = left;
    u.back() = right;
}

Field burgers_rhs(BurgersProblem& problem, const Field& u, double t) {
    if (!(u.grid() == problem.grid())) throw Error(ErrorKind::dimension_mismatch, "field is not on the Burgers grid");
    std::vector<double> out(static_cast<std::size_t>(u.size()));
    problem.rhs(t, u.span(), out);
    return Field(u.grid(), std::move(out));
}

BurgersResult run_burgers(const BurgersConfig& cfg) {
    BurgersProblem problem(cfg);
    Rk45Options opt;
    opt.rel_tol = cfg.rel_tol;
    opt.abs_tol = cfg.abs_tol;
    opt.output_times = cfg.output_times.empty() ? default_output_times(cfg.t_end) : cfg.output_times;
    opt.post_step = [&](double t, std::span<double> u) { problem.post_step(t, u); };
    auto rhs = [&](double t, std::span<const double> u, std::span<double> du) { problem.rhs(t, u, du); };

    BurgersResult res{problem.grid(), integrate_rk45(rhs, problem.initial_state(), 0.0, cfg.t_end, opt), {}, {}, 0.0};
    const Grid& g = res.grid;
    for (std::size_t s = 0; s < res.trajectory.times.size(); ++s) {
        const double t = res.trajectory.times[s];
        double emax = 0.0;
        int at = 0;
        for (int j = 0; j < g.size(); ++j) {
            const double e = std::abs(res.trajectory.states[s][static_cast<std::size_t>(j)] - burgers_exact(cfg.params, g.point(j), t));
            if (e > emax) {
                emax = e;
                at = j;
            }
        }
        res.max_error.push_back(emax);
        res.max_error_index.push_back(at);
        res.max_error_overall = std::max(res.max_error_overall, emax);
    }
    return res;
}

ChebyshevBurgersResult run_chebyshev_burgers(const BurgersConfig& cfg) {
    validate(cfg.params);
    ChebyshevBurgersResult res{make_chebyshev_grid(cfg.x_min, cfg.x_max, cfg.n_points), {}, {}, 0.0};
    const ChebyshevGrid& g = res.grid;
    const BurgersParams& p = cfg.params;
    ChebyshevWorkspace ws(g);
    const std::size_t n = static_cast<std::size_t>(g.n_points);
    std::vector<double> ux(n), uxx(n);

    // Node 0 is x_max, node N-1 is x_min.
    auto rhs = [&](double t, std::span<const double> u, std::span<double> du) {
        ws.differentiate(u, ux);
        ws.differentiate(ux, uxx);
        for (std::size_t j = 0; j < n; ++j) du[j] = p.nu * uxx[j] - u[j] * ux[j];
        du.front() = burgers_exact_dt(p, g.b, t);
        du.back() = burgers_exact_dt(p, g.a, t);
    };
    Rk45Options opt;
    opt.rel_tol = cfg.rel_tol;
    opt.abs_tol = cfg.abs_tol;
    opt.output_times = cfg.output_times.empty() ? default_output_times(cfg.t_end) : cfg.output_times;
    opt.post_step = [&](double t, std::span<double> u) {
        u.front() = burgers_exact(p, g.b, t);
        u.back() = burgers_exact(p, g.a, t);
    };
    std::vector<double> u0(n);
    for (std::size_t j = 0; j < n; ++j) u0[j] = burgers_exact(p, g.points[j], 0.0);
    res.trajectory = integrate_rk45(rhs, std::move(u0), 0.0, cfg.t_end, opt);
    for (std::size_t s = 0; s < res.trajectory.times.size(); ++s) {
        double emax = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            emax = std::max(emax, std::abs(res.trajectory.states[s][j] - burgers_exact(p, g.points[j], res.trajectory.times[s])));
        }
        res.max_error.push_back(emax);
        res.max_error_overall = std::max(res.max_error_overall, emax);
    }
    return res;
}

// ---------------------------------------------------------------- shallow water

void validate(const SweConfig& cfg) {
    if (!(cfg.length > 0.0)) throw Error(ErrorKind::invalid_domain, "domain length must be positive");
    if (!(cfg.dt > 0.0)) throw Error(ErrorKind::invalid_config, "dt must be positive");
    if (!(cfg.t_end >= 0.0)) throw Error(ErrorKind::invalid_config, "t_end must be non-negative");
    if (!(cfg.params.manning_alpha >= 0.0)) throw Error(ErrorKind::invalid_config, "Manning coefficient must be non-negative");
    if (!(cfg.flat_depth >= 0.0)) throw Error(ErrorKind::invalid_config, "flat depth must be non-negative");
    if (!(cfg.params.gravity > 0.0)) throw Error(ErrorKind::invalid_config, "gravity must be positive");
    if (cfg.n_points < 3) throw Error(ErrorKind::grid_too_small, "shallow water needs at least 3 points per axis");
    if (cfg.n < 2 * cfg.p) throw Error(ErrorKind::insufficient_basis, "n must be at least 2p");
    if (cfg.m < cfg.p) throw Error(ErrorKind::invalid_config, "m must be at least p");
    if (cfg.m > cfg.n_points) throw Error(ErrorKind::invalid_config, "m must not exceed N");
}

double swe_bathymetry(double x, double length) {
    const double c = 0.5 * length;
    return 50.0 - 25.0 * std::tanh((x - c) / 10.0);
}

double swe_initial_eta(double x, double y, double length) {
    const double c = 0.5 * length;
    return std::exp(-(x - c) * (x - c) / 10.0 - (y - c) * (y - c) / 10.0);
}

RowMatrix swe_bathymetry_matrix(const SweConfig& cfg) {
    const Grid g(0.0, cfg.length, cfg.n_points);
    RowMatrix h(cfg.n_points, cfg.n_points);
    for (int j = 0; j < cfg.n_points; ++j) {
        h.col(j).setConstant(cfg.flat_depth > 0.0 ? cfg.flat_depth : swe_bathymetry(g.point(j), cfg.length));
    }
    return h;
}

SweProblem::SweProblem(const SweConfig& cfg)
    : cfg_((validate(cfg), cfg)),
      grid_(0.0, cfg.length, cfg.n_points),
      h_(swe_bathymetry_matrix(cfg)),
      op_(make_plan(grid_, cfg.p, cfg.n, cfg.m, cfg.beta, cfg.lambda), {}, {}, cfg.filter_alpha, cfg.filter_order) {
}

SweState SweProblem::initial_state() const {
    SweState s = make_swe_state(grid_, grid_);
    s.eta = sample(grid_, grid_, [&](double x, double y) { return swe_initial_eta(x, y, cfg_.length); });
    return s;
}

SweState SweProblem::rhs(const SweState& s) {
    const RowMatrix& eta = s.eta.values();
    const RowMatrix& m = s.mm.values();
    const RowMatrix& nf = s.nn.values();
    check_depth(h_, eta);
    const BcOverride wall[2] = {{0, 0.0}, {cfg_.p, 0.0}};
    const double g = cfg_.params.gravity;

    const RowArray H = (h_ + eta).array();
    const RowMatrix mm_h = (m.array().square() / H).matrix();
    const RowMatrix mn_h = (m.array() * nf.array() / H).matrix();
    const RowMatrix nn_h = (nf.array().square() / H).matrix();

    RowMatrix a, b;
    SweState out = make_swe_state(grid_, grid_);

    apply_along_axis(op_, m, a, Axis::x, AxisOperation::differentiate, wall);
    apply_along_axis(op_, nf, b, Axis::y, AxisOperation::differentiate, wall);
    out.eta.values() = -(a + b);

    const double ga2 = g * cfg_.params.manning_alpha * cfg_.params.manning_alpha;
    const auto speed = (m.array().square() + nf.array().square()).sqrt();
    const RowArray fric = ga2 * speed / (H.square() * H.unaryExpr([](double v) { return std::cbrt(v); }));

    RowMatrix e;
    apply_along_axis(op_, mm_h, a, Axis::x, AxisOperation::differentiate, wall);
    apply_along_axis(op_, mn_h, b, Axis::y, AxisOperation::differentiate, wall);
    apply_along_axis(op_, eta, e, Axis::x, AxisOperation::differentiate);
    out.mm.values() = (-(a + b).array() - g * H * e.array() - fric * m.array()).matrix();

    apply_along_axis(op_, mn_h, a, Axis::x, AxisOperation::differentiate, wall);
    apply_along_axis(op_, nn_h, b, Axis::y, AxisOperation::differentiate, wall);
    apply_along_axis(op_, eta, e, Axis::y, AxisOperation::differentiate);
    out.nn.values() = (-(a + b).array() - g * H * e.array() - fric * nf.array()).matrix();

    const int last = grid_.size() - 1;
    out.mm.values().col(0).setZero();
    out.mm.values().col(last).setZero();
    out.nn.values().row(0).setZero();
    out.nn.values().row(last).setZero();
    return out;
}

void SweProblem::filter(SweState& s) {
    const BcOverride wall[2] = {{0, 0.0}, {cfg_.p, 0.0}};
    RowMatrix tmp;
    auto pass = [&](RowMatrix& q, Axis axis, std::span<const BcOverride> ov) {
        apply_along_axis(op_, q, tmp, axis, AxisOperation::filter, ov);
        q.swap(tmp);
    };
    pass(s.eta.values(), Axis::x, {});
    pass(s.eta.values(), Axis::y, {});
    pass(s.mm.values(), Axis::x, wall);
    pass(s.mm.values(), Axis::y, {});
    pass(s.nn.values(), Axis::x, {});
    pass(s.nn.values(), Axis::y, wall);
    const int last = grid_.size() - 1;
    s.mm.values().col(0).setZero();
    s.mm.values().col(last).setZero();
    s.nn.values().row(0).setZero();
    s.nn.values().row(last).setZero();
}

SweState swe_rhs(SweProblem& problem, const SweState& s) { return problem.rhs(s); }

namespace {

long step_count(const SweConfig& cfg) { return std::lround(cfg.t_end / cfg.dt); }

}  // namespace

SweResult run_swe(const SweConfig& cfg) {
    SweProblem problem(cfg);
    const Grid& g = problem.grid();
    Rk4Options opt;
    opt.dt = cfg.dt;
    opt.n_steps = step_count(cfg);
    opt.snapshot_every = cfg.snapshot_every;
    if (cfg.filter) {
        opt.post_step = [&](double, std::span<double> u) {
            SweState s = unflatten(g, g, u);
            problem.filter(s);
            const std::vector<double> v = flatten(s);
            std::copy(v.begin(), v.end(), u.begin());
        };
    }
    auto rhs = [&](double, std::span<const double> u, std::span<double> du) {
        const std::vector<double> v = flatten(problem.rhs(unflatten(g, g, u)));
        std::copy(v.begin(), v.end(), du.begin());
    };
    Trajectory traj = integrate_rk4(rhs, flatten(problem.initial_state()), 0.0, opt);
    std::vector<SweState> snaps;
    std::vector<double> volume;
    for (const auto& st : traj.states) {
        snaps.push_back(unflatten(g, g, st));
        volume.push_back(total_volume(snaps.back().eta));
    }
    SweState last = snaps.back();
    return SweResult{std::move(last), traj.times, std::move(snaps), std::move(volume), traj.accepted};
}

SweResult run_fd_swe(const SweConfig& cfg) {
    validate(cfg);
    const Grid g(0.0, cfg.length, cfg.n_points);
    const RowMatrix h = swe_bathymetry_matrix(cfg);
    SweState s0 = make_swe_state(g, g);
    s0.eta = sample(g, g, [&](double x, double y) { return swe_initial_eta(x, y, cfg.length); });
    FdSweStepper stepper(g, g, h, cfg.params);
    std::vector<double> u = flatten(s0);
    stepper.check_cfl(u, cfg.dt);

    std::vector<double> times, volume;
    std::vector<SweState> snaps;
    auto record = [&](double t) {
        times.push_back(t);
        snaps.push_back(unflatten(g, g, u));
        volume.push_back(total_volume(snaps.back().eta));
    };
    record(0.0);
    const long steps = step_count(cfg);
    for (long k = 0; k < steps; ++k) {
        stepper.step(u, cfg.dt);
        const bool last = k + 1 == steps;
        if (last || (cfg.snapshot_every > 0 && (k + 1) % cfg.snapshot_every == 0)) record(static_cast<double>(k + 1) * cfg.dt);
    }
    SweState final_state = snaps.back();
    return SweResult{std::move(final_state), std::move(times), std::move(snaps), std::move(volume), steps};
}

std::vector<double> profile_at_y(const SweState& s, double y0) {
    const Grid& gy = s.eta.grid_y();
    const long i = std::clamp(std::lround((y0 - gy.a()) / gy.spacing()), 0L, static_cast<long>(gy.size() - 1));
    const auto row = s.eta.values().row(i);
    return std::vector<double>(row.data(), row.data() + row.size());
}

}  // namespace bspf
