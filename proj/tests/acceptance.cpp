#include "bspf/baselines.hpp"
#include "bspf/boundary.hpp"
#include "bspf/bspline.hpp"
#include "bspf/experiments.hpp"
#include "bspf/operators.hpp"
#include "bspf/pde.hpp"
#include "bspf/periodizer.hpp"
#include "bspf/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace bspf;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double local_slope(double n0, double e0, double n1, double e1) { return std::log(e1 / e0) / std::log(n1 / n0); }

// ------------------------------------------------------------------ 1

Outcome differentiation_benchmark() {
    ExperimentConfig cfg = default_config(Experiment::diff_bench);
    cfg.methods = {Method::bspf};
    cfg.sizes = {2000};
    int passed = 0;
    std::ostringstream os;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        cfg.seed = seed;
        const double e = run_convergence(cfg).rows.at(0).error_interior;
        if (e <= 1e-8) ++passed;
        os << "seed " << seed << ": " << fmt("%.3e", e) << "  ";
    }
    os << "(" << passed << "/3 <= 1e-8)";
    return {passed >= 2, os.str()};
}

// ------------------------------------------------------------------ 2

Outcome convergence_regimes() {
    const int m = 8;
    ExperimentConfig cfg = default_config(Experiment::diff_bench);
    cfg.methods = {Method::bspf};
    cfg.noise = false;
    cfg.bspf = {8, 44, m, 3.0, 0.0};
    const ConvergenceReport rep = run_convergence(cfg);
    std::vector<double> n, e;
    for (const auto& r : rep.rows) {
        n.push_back(r.n_points);
        e.push_back(r.error_interior);
    }
    std::ostringstream os;
    os << "errors";
    for (double v : e) os << " " << fmt("%.2e", v);

    // floor: trailing points that no longer decrease at first order
    std::size_t last = e.size();
    while (last >= 2 && local_slope(n[last - 2], e[last - 2], n[last - 1], e[last - 1]) > -1.0) --last;
    // super-algebraic region: leading intervals steeper than twice the algebraic rate
    const double steep = -2.0 * (m - 1);
    std::size_t start = 0;
    while (start + 1 < last && local_slope(n[start], e[start], n[start + 1], e[start + 1]) < steep) ++start;
    const std::size_t tail = last - start;
    if (start == 0 || tail < 3) {
        os << "; no super-algebraic/algebraic split (lead " << start << ", tail " << tail << ")";
        return {false, os.str()};
    }
    const std::vector<double> tn(n.begin() + static_cast<long>(start), n.begin() + static_cast<long>(last));
    const std::vector<double> te(e.begin() + static_cast<long>(start), e.begin() + static_cast<long>(last));
    const double slope = fitted_slope(tn, te);
    os << "; super-algebraic up to N=" << n[start] << ", tail slope " << fmt("%.2f", slope) << " (target "
       << -(m - 1) << " +- 1)";
    return {std::abs(slope + (m - 1)) <= 1.0, os.str()};
}

// ------------------------------------------------------------------ 3

Outcome mapped_grid() {
    ExperimentConfig cfg = default_config(Experiment::map_bench);
    cfg.sizes = {800};
    const MapBenchRow r = run_map_bench(cfg).at(0);
    const double gain = r.uniform_error / r.mapped_error;
    return {gain >= 10.0, "uniform " + fmt("%.3e", r.uniform_error) + ", mapped " + fmt("%.3e", r.mapped_error) +
                              ", gain " + fmt("%.1f", gain)};
}

// ------------------------------------------------------------------ 4

Outcome integration_benchmark() {
    ExperimentConfig cfg = default_config(Experiment::int_bench);
    cfg.noise = false;
    cfg.methods = {Method::bspf, Method::chebyshev};
    const ConvergenceReport rep = run_convergence(cfg);
    std::vector<double> bs;
    double bs2000 = 0.0, ch2000 = 0.0;
    for (const auto& r : rep.rows) {
        if (r.method == Method::bspf) bs.push_back(r.error_norm);
        if (r.n_points == 2000) (r.method == Method::bspf ? bs2000 : ch2000) = r.error_norm;
    }
    bool ratios = true;
    double worst = INFINITY;
    for (std::size_t k = 0; k + 1 < bs.size() && bs[k] > 1e-10; ++k) {
        worst = std::min(worst, bs[k] / bs[k + 1]);
        if (bs[k] / bs[k + 1] < 5.0) ratios = false;
    }

    ExperimentConfig simp = cfg;
    simp.methods = {Method::simpson};
    simp.sizes = {16000, 24000, 32000, 48000, 64000};
    const double slope = run_convergence(simp).slopes.at("simpson");

    std::ostringstream os;
    os << "bspf";
    for (double v : bs) os << " " << fmt("%.2e", v);
    os << " (min ratio above 1e-10: " << fmt("%.1f", worst) << "); simpson slope " << fmt("%.2f", slope)
       << "; N=2000 chebyshev " << fmt("%.2e", ch2000) << " vs bspf " << fmt("%.2e", bs2000);
    return {ratios && std::abs(slope + 4.0) <= 0.3 && ch2000 > bs2000, os.str()};
}

// ------------------------------------------------------------------ 5

Outcome complexity() {
    ExperimentConfig cfg = default_config(Experiment::timing);
    cfg.repetitions = 11;
    const TimingReport rep = run_timing(cfg);
    std::vector<const TimingRow*> bspf;
    double tb = 0.0, tc = 0.0;
    const int n16 = (1 << 16) + 1;
    for (const auto& r : rep.rows) {
        if (r.method == Method::bspf) bspf.push_back(&r);
        if (r.n_points == n16) (r.method == Method::bspf ? tb : tc) = r.median_time;
    }
    std::sort(bspf.begin(), bspf.end(), [](auto* x, auto* y) { return x->n_points < y->n_points; });
    const double c1 = bspf[bspf.size() - 2]->time_per_nlogn;
    const double c2 = bspf.back()->time_per_nlogn;
    const double resid = std::max(c1, c2) / std::min(c1, c2);
    const double rel = tb / tc;
    std::ostringstream os;
    os << "t/(N log N) at 2^16, 2^17: " << fmt("%.3e", c1) << ", " << fmt("%.3e", c2) << " (factor "
       << fmt("%.2f", resid) << "); bspf/chebyshev at 2^16: " << fmt("%.2f", rel) << "; exponent "
       << fmt("%.2f", rep.exponents.at("bspf"));
    return {resid <= 2.0 && rel <= 4.0 && rel >= 0.25, os.str()};
}

// ------------------------------------------------------------------ 6

Outcome burgers() {
    const BurgersConfig cfg;
    const BurgersResult r = run_burgers(cfg);
    int worst_offset = 0;
    for (std::size_t s = 0; s < r.trajectory.times.size(); ++s) {
        if (!(r.max_error[s] > 0.0)) continue;
        const double front = cfg.params.c + cfg.params.b * r.trajectory.times[s];
        const int idx = static_cast<int>(std::lround((front - cfg.x_min) / r.grid.spacing()));
        worst_offset = std::max(worst_offset, std::abs(r.max_error_index[s] - idx));
    }
    return {r.max_error_overall <= 1e-9 && worst_offset <= 10,
            "max error " + fmt("%.3e", r.max_error_overall) + ", worst front offset " +
                std::to_string(worst_offset) + " points, " + std::to_string(r.trajectory.accepted) + " steps"};
}

// ------------------------------------------------------------------ 7

Outcome burgers_mesh() {
    std::vector<double> eb, ec;
    for (int n : {200, 400, 800}) {
        BurgersConfig cfg;
        cfg.n_points = n;
        cfg.t_end = 0.02;
        cfg.output_times = {0.02};
        eb.push_back(run_burgers(cfg).max_error_overall);
        ec.push_back(run_chebyshev_burgers(cfg).max_error_overall);
    }
    const bool decreasing = eb[0] > eb[1] && eb[1] > eb[2];
    const double gb = eb[0] / eb[2];
    const double gc = ec[0] / ec[2];
    std::ostringstream os;
    os << "bspf " << fmt("%.2e", eb[0]) << " " << fmt("%.2e", eb[1]) << " " << fmt("%.2e", eb[2]) << "; chebyshev "
       << fmt("%.2e", ec[0]) << " " << fmt("%.2e", ec[1]) << " " << fmt("%.2e", ec[2]) << "; reduction 200->800 "
       << fmt("%.1e", gb) << " vs " << fmt("%.1e", gc);
    return {decreasing && gb > gc, os.str()};
}

// ------------------------------------------------------------------ 8

double relative_l2(const std::vector<double>& x, const std::vector<double>& ref, int stride) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double r = ref[j * static_cast<std::size_t>(stride)];
        num += (x[j] - r) * (x[j] - r);
        den += r * r;
    }
    return std::sqrt(num / den);
}

Outcome shallow_water() {
    SweConfig cfg;
    const SweResult bspf = run_swe(cfg);
    const SweResult fd = run_fd_swe(cfg);
    SweConfig fine = cfg;
    fine.n_points = 1601;
    fine.dt = 0.002;
    const SweResult ref = run_fd_swe(fine);

    const std::vector<double> pr = profile_at_y(ref.final_state, 50.0);
    const double eb = relative_l2(profile_at_y(bspf.final_state, 50.0), pr, 8);
    const double ef = relative_l2(profile_at_y(fd.final_state, 50.0), pr, 8);
    const double drift = std::abs(bspf.volume.back() - bspf.volume.front()) / std::abs(bspf.volume.front());
    std::ostringstream os;
    os << "profile rel L2 vs FD1601: bspf " << fmt("%.4f", eb) << ", FD201 " << fmt("%.4f", ef)
       << "; volume drift " << fmt("%.2e", drift);
    return {eb <= 0.02 && ef > eb && drift < 1e-5, os.str()};
}

// ------------------------------------------------------------------ 9

struct Check {
    std::string name;
    std::function<double()> measure;  // returns a discrepancy
    double tol;
};

double partition_of_unity() {
    const Grid g(0.0, 2.0 * kPi, 101);
    double worst = 0.0;
    for (auto beta : {std::optional<double>{}, std::optional<double>{3.0}}) {
        const KnotVector kv = build_knots(g, 11, 44, beta);
        for (int j = 0; j <= 400; ++j) {
            const double x = 2.0 * kPi * j / 400.0;
            const Eigen::MatrixXd b = eval_basis(kv, x, 1);
            worst = std::max({worst, std::abs(b.col(0).sum() - 1.0), std::abs(b.col(1).sum()) * 1e-3});
            if ((b.col(0).array() < -1e-14).any()) worst = INFINITY;
        }
    }
    return worst;
}

double local_support() {
    const Grid g(-1.0, 2.0, 51);
    const KnotVector kv = build_knots(g, 5, 17, 2.0);
    const auto& z = kv.knots();
    double worst = 0.0;
    for (int j = 0; j <= 300; ++j) {
        const double x = -1.0 + 3.0 * j / 300.0;
        const Eigen::MatrixXd b = eval_basis(kv, x, 0);
        for (int i = 0; i < kv.n_basis(); ++i) {
            const bool inside = x >= z[static_cast<std::size_t>(i)] && x <= z[static_cast<std::size_t>(i + 6)];
            if (!inside) worst = std::max(worst, std::abs(b(i, 0)));
        }
    }
    return worst;
}

double clamped_interpolation() {
    const Grid g(0.5, 3.0, 41);
    const KnotVector kv = build_knots(g, 7, 20, 3.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd c(kv.n_basis());
    for (auto& v : c) v = u(rng);
    const double fa = eval_basis(kv, 0.5, 0).col(0).dot(c);
    const double fb = eval_basis(kv, 3.0, 0).col(0).dot(c);
    return std::max(std::abs(fa - c(0)), std::abs(fb - c(c.size() - 1)));
}

double stencil_exactness() {
    double worst = 0.0;
    for (int m : {4, 8, 12}) {
        const int npts = 2 * m;
        const Grid g(-0.3, 1.7, npts);
        const BoundaryStencil st(g, m);
        const int deg = m - 1;
        std::vector<double> coef(static_cast<std::size_t>(deg + 1));
        for (int k = 0; k <= deg; ++k) coef[static_cast<std::size_t>(k)] = 1.0 / (k + 1);
        auto deriv_at = [&](double x, int order) {
            double s = 0.0;
            for (int k = order; k <= deg; ++k) {
                double f = 1.0;
                for (int q = 0; q < order; ++q) f *= k - q;
                s += coef[static_cast<std::size_t>(k)] * f * std::pow(x - 0.2, k - order);
            }
            return s;
        };
        std::vector<double> f(static_cast<std::size_t>(npts));
        for (int j = 0; j < npts; ++j) f[static_cast<std::size_t>(j)] = deriv_at(g.point(j), 0);
        const BoundaryData d = estimate_boundary_derivatives(st, f, m);
        for (int k = 0; k < m; ++k) {
            const double ea = deriv_at(g.a(), k), eb = deriv_at(g.b(), k);
            worst = std::max(worst, std::abs(d.d(k) - ea) / (1.0 + std::abs(ea)));
            worst = std::max(worst, std::abs(d.d(m + k) - eb) / (1.0 + std::abs(eb)));
        }
    }
    return worst;
}

double constraint_satisfaction() {
    double worst = 0.0;
    const TestFunction tf = make_test_function(NoiseSpec{.seed = 4});
    for (auto [p, n, m, npts] : {std::tuple{11, 44, 16, 2000}, {8, 32, 8, 800}, {4, 16, 4, 201}, {3, 6, 5, 64}}) {
        const Grid g(0.0, 2.0 * kPi, npts);
        const PeriodizationPlan plan = build_plan(g, p, n, m, 3.0);
        const Field f = sample(g, tf.f);
        const BoundaryData d = estimate_boundary_derivatives(plan.stencil(), f, p);
        const SplineCoefficients c = plan.solve(f.span(), d);
        const Eigen::MatrixXd& cm = plan.constraint().c;
        const Eigen::VectorXd res = cm * c.p_vec - d.d;
        const Eigen::VectorXd scale = cm.cwiseAbs() * c.p_vec.cwiseAbs();
        for (int k = 0; k < res.size(); ++k) worst = std::max(worst, std::abs(res(k)) / (1.0 + scale(k)));
    }
    return worst;
}

double spectral_round_trips() {
    const Grid g(0.0, 1.0, 257);
    SpectralWorkspace ws(g);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(257), out(257);
    for (auto& x : v) x = u(rng);
    v.back() = v.front();
    ws.round_trip(v, out);
    double worst = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) worst = std::max(worst, std::abs(out[j] - v[j]));

    // differentiate then integrate a smooth non-periodic function
    const Grid h(0.0, 2.0 * kPi, 2000);
    BspfOperator op(std::make_shared<PeriodizationPlan>(build_plan(h, 11, 44, 16, 3.0)));
    const TestFunction tf = make_test_function();
    const Field f = sample(h, tf.f);
    const Field back = op.antiderivative(op.differentiate(f), BoundaryValue{Endpoint::a, f[0]});
    for (int j = 0; j < h.size(); ++j) worst = std::max(worst, std::abs(back[j] - f[j]));
    return worst;
}

double operator_linearity() {
    const Grid g(-1.0, 1.0, 400);
    BspfOperator op(std::make_shared<PeriodizationPlan>(build_plan(g, 8, 32, 8)));
    const Field f = sample(g, [](double x) { return std::exp(x) * std::sin(5 * x); });
    const Field h = sample(g, [](double x) { return 1.0 / (2.0 + x); });
    const double a = 2.5, b = -0.75;
    std::vector<double> comb(400);
    for (int j = 0; j < 400; ++j) comb[static_cast<std::size_t>(j)] = a * f[j] + b * h[j];
    const Field lc = op.differentiate(Field(g, comb));
    const Field lf = op.differentiate(f), lh = op.differentiate(h);
    const Field ic = op.antiderivative(Field(g, comb), {});
    const Field ifn = op.antiderivative(f, {}), ih = op.antiderivative(h, {});
    double worst = 0.0, scale = 1.0;
    for (int j = 0; j < 400; ++j) {
        scale = std::max(scale, std::abs(lc[j]));
        worst = std::max(worst, std::abs(lc[j] - (a * lf[j] + b * lh[j])));
        worst = std::max(worst, std::abs(ic[j] - (a * ifn[j] + b * ih[j])));
    }
    return worst / scale;
}

double seeded_determinism() {
    ExperimentConfig cfg = default_config(Experiment::diff_bench);
    cfg.methods = {Method::bspf, Method::chebyshev};
    cfg.sizes = {1000, 1500};
    cfg.seed = 9;
    const ConvergenceReport r1 = run_convergence(cfg);
    const ConvergenceReport r2 = run_convergence(cfg);
    double worst = 0.0;
    for (std::size_t k = 0; k < r1.rows.size(); ++k) {
        worst = std::max(worst, std::abs(r1.rows[k].error_norm - r2.rows[k].error_norm));
    }
    const NoiseModes a = draw_noise(NoiseSpec{.seed = 9}), b = draw_noise(NoiseSpec{.seed = 9});
    if (a.kappa != b.kappa || a.amp != b.amp || a.phase != b.phase) worst = INFINITY;
    return worst;
}

Outcome structural_suites() {
    const std::vector<Check> checks = {
        {"partition of unity", partition_of_unity, 1e-13},
        {"local support", local_support, 0.0},
        {"clamped interpolation", clamped_interpolation, 1e-14},
        {"stencil exactness", stencil_exactness, 1e-6},
        {"C P = d", constraint_satisfaction, 1e-8},
        {"round trips", spectral_round_trips, 1e-8},
        {"linearity", operator_linearity, 1e-12},
        {"determinism", seeded_determinism, 0.0},
    };
    bool ok = true;
    std::ostringstream os;
    for (const auto& c : checks) {
        const double v = c.measure();
        const bool pass = v <= c.tol;
        ok = ok && pass;
        os << c.name << " " << fmt("%.1e", v) << (pass ? "" : " [over]") << "; ";
    }
    return {ok, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const std::vector<Criterion> all = {
        {1, "differentiation benchmark", differentiation_benchmark},
        {2, "convergence regimes", convergence_regimes},
        {3, "mapped grid", mapped_grid},
        {4, "integration benchmark", integration_benchmark},
        {5, "complexity", complexity},
        {6, "burgers", burgers},
        {7, "burgers mesh convergence", burgers_mesh},
        {8, "shallow water", shallow_water},
        {9, "structural suites", structural_suites},
    };
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail
                  << " [" << fmt("%.1f", secs) << " s]" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
