#include "bspf/experiments.hpp"

#include "bspf/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace bspf {

using nlohmann::json;

const char* version() { return BSPF_VERSION; }

void validate(const NoiseSpec& s) {
    if (s.n_modes <= 0) throw Error(ErrorKind::invalid_config, "noise needs at least one mode");
    if (!(s.freq_lo <= s.freq_hi) || !(s.amp_lo <= s.amp_hi) || !(s.phase_lo <= s.phase_hi)) {
        throw Error(ErrorKind::invalid_config, "noise ranges must be ordered");
    }
}

double uniform53(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

NoiseModes draw_noise(const NoiseSpec& spec) {
    validate(spec);
    std::mt19937_64 rng(spec.seed);
    const auto n = static_cast<std::size_t>(spec.n_modes);
    NoiseModes m{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (double& v : m.kappa) v = spec.freq_lo + (spec.freq_hi - spec.freq_lo) * uniform53(rng);
    for (double& v : m.amp) v = spec.amp_lo + (spec.amp_hi - spec.amp_lo) * uniform53(rng);
    for (double& v : m.phase) v = spec.phase_lo + (spec.phase_hi - spec.phase_lo) * uniform53(rng);
    return m;
}

TestFunction make_test_function(std::optional<NoiseSpec> noise) {
    std::shared_ptr<const NoiseModes> modes;
    if (noise) modes = std::make_shared<const NoiseModes>(draw_noise(*noise));
    TestFunction tf;
    tf.f = [modes](double x) {
        double v = std::sin(x / (1.02 + std::cos(x)));
        if (modes) {
            for (std::size_t i = 0; i < modes->kappa.size(); ++i) v += modes->amp[i] * std::cos(modes->kappa[i] * x + modes->phase[i]);
        }
        return v;
    };
    tf.df = [modes](double x) {
        const double d = 1.02 + std::cos(x);
        double v = std::cos(x / d) * (d + x * std::sin(x)) / (d * d);
        if (modes) {
            for (std::size_t i = 0; i < modes->kappa.size(); ++i) {
                v -= modes->amp[i] * modes->kappa[i] * std::sin(modes->kappa[i] * x + modes->phase[i]);
            }
        }
        return v;
    };
    return tf;
}

const char* to_string(Experiment e) {
    switch (e) {
        case Experiment::diff_bench: return "diff-bench";
        case Experiment::int_bench: return "int-bench";
        case Experiment::map_bench: return "map-bench";
        case Experiment::timing: return "timing";
        case Experiment::burgers: return "burgers";
        case Experiment::swe: return "swe";
    }
    return "?";
}

const char* to_string(Method m) {
    switch (m) {
        case Method::bspf: return "bspf";
        case Method::chebyshev: return "chebyshev";
        case Method::simpson: return "simpson";
        case Method::fd: return "fd";
    }
    return "?";
}

Experiment parse_experiment(const std::string& s) {
    for (Experiment e : {Experiment::diff_bench, Experiment::int_bench, Experiment::map_bench, Experiment::timing,
                         Experiment::burgers, Experiment::swe}) {
        if (s == to_string(e)) return e;
    }
    throw Error(ErrorKind::invalid_config, "unknown experiment '" + s + "'");
}

Method parse_method(const std::string& s) {
    for (Method m : {Method::bspf, Method::chebyshev, Method::simpson, Method::fd}) {
        if (s == to_string(m)) return m;
    }
    throw Error(ErrorKind::invalid_config, "unknown method '" + s + "'");
}

ExperimentConfig default_config(Experiment e) {
    ExperimentConfig c;
    c.experiment = e;
    switch (e) {
        case Experiment::diff_bench:
            c.methods = {Method::bspf, Method::chebyshev};
            break;
        case Experiment::int_bench:
            c.methods = {Method::bspf, Method::chebyshev, Method::simpson};
            break;
        case Experiment::map_bench:
            c.sizes = {400, 600, 800};
            c.map = {{0.0, std::numbers::pi, 2.0 * std::numbers::pi}, {0.3, 1.0, 0.3}, {0.6, 0.85, 0.6}};
            c.noise = false;
            break;
        case Experiment::timing:
            c.methods = {Method::bspf, Method::chebyshev};
            c.sizes.clear();
            for (int k = 10; k <= 17; ++k) c.sizes.push_back((1 << k) + 1);
            c.noise = false;
            break;
        case Experiment::burgers:
            c.sizes.clear();
            c.noise = false;
            c.bspf = {8, 32, 8, std::nullopt, 0.0};
            break;
        case Experiment::swe:
            c.sizes.clear();
            c.noise = false;
            c.bspf = {4, 16, 4, std::nullopt, 0.0};
            break;
    }
    return c;
}

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw Error(ErrorKind::invalid_config, where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; })) {
            throw Error(ErrorKind::invalid_config, "unknown key '" + it.key() + "' in " + where);
        }
    }
}

template <class T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void get_beta(const json& j, std::optional<double>& beta) {
    if (!j.contains("beta")) return;
    if (j.at("beta").is_null()) {
        beta.reset();
    } else {
        beta = j.at("beta").get<double>();
    }
}

void get_range(const json& j, const char* key, double& lo, double& hi) {
    if (!j.contains(key)) return;
    const auto v = j.at(key).get<std::vector<double>>();
    if (v.size() != 2) throw Error(ErrorKind::invalid_config, std::string(key) + " must have two entries");
    lo = v[0];
    hi = v[1];
}

json beta_json(const std::optional<double>& beta) { return beta ? json(*beta) : json(nullptr); }

}  // namespace

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
    check_keys(j, {"experiment", "method", "methods", "domain", "bspf", "sizes", "noise", "seed", "repetitions", "map",
                   "burgers", "swe", "output_dir"},
               "config");
    try {
        if (j.contains("experiment")) {
            const Experiment e = parse_experiment(j.at("experiment").get<std::string>());
            if (e != c.experiment) c = default_config(e);
        }
        if (j.contains("method")) c.methods = {parse_method(j.at("method").get<std::string>())};
        if (j.contains("methods")) {
            c.methods.clear();
            for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
        }
        get_range(j, "domain", c.a, c.b);
        if (j.contains("bspf")) {
            const json& b = j.at("bspf");
            check_keys(b, {"p", "n", "m", "beta", "lambda"}, "bspf");
            get_if(b, "p", c.bspf.p);
            get_if(b, "n", c.bspf.n);
            get_if(b, "m", c.bspf.m);
            get_beta(b, c.bspf.beta);
            get_if(b, "lambda", c.bspf.lambda);
        }
        get_if(j, "sizes", c.sizes);
        if (j.contains("noise")) {
            const json& nz = j.at("noise");
            if (nz.is_boolean()) {
                c.noise = nz.get<bool>();
            } else {
                check_keys(nz, {"enabled", "n_modes", "freq_range", "amp_range", "phase_range"}, "noise");
                get_if(nz, "enabled", c.noise);
                get_if(nz, "n_modes", c.noise_spec.n_modes);
                get_range(nz, "freq_range", c.noise_spec.freq_lo, c.noise_spec.freq_hi);
                get_range(nz, "amp_range", c.noise_spec.amp_lo, c.noise_spec.amp_hi);
                get_range(nz, "phase_range", c.noise_spec.phase_lo, c.noise_spec.phase_hi);
            }
        }
        get_if(j, "seed", c.seed);
        get_if(j, "repetitions", c.repetitions);
        if (j.contains("map")) {
            const json& m = j.at("map");
            check_keys(m, {"centers", "widths", "strengths"}, "map");
            get_if(m, "centers", c.map.centers);
            get_if(m, "widths", c.map.widths);
            get_if(m, "strengths", c.map.strengths);
        }
        if (j.contains("burgers")) {
            const json& b = j.at("burgers");
            check_keys(b, {"a", "b", "c", "nu", "x_min", "x_max", "n_points", "t_end", "rel_tol", "abs_tol", "filter",
                           "filter_alpha", "filter_order", "output_times"},
                       "burgers");
            BurgersConfig& bc = c.burgers;
            get_if(b, "a", bc.params.a);
            get_if(b, "b", bc.params.b);
            get_if(b, "c", bc.params.c);
            get_if(b, "nu", bc.params.nu);
            get_if(b, "x_min", bc.x_min);
            get_if(b, "x_max", bc.x_max);
            get_if(b, "n_points", bc.n_points);
            get_if(b, "t_end", bc.t_end);
            get_if(b, "rel_tol", bc.rel_tol);
            get_if(b, "abs_tol", bc.abs_tol);
            get_if(b, "filter", bc.filter);
            get_if(b, "filter_alpha", bc.filter_alpha);
            get_if(b, "filter_order", bc.filter_order);
            get_if(b, "output_times", bc.output_times);
        }
        if (j.contains("swe")) {
            const json& s = j.at("swe");
            check_keys(s, {"length", "n_points", "dt", "t_end", "gravity", "manning_alpha", "filter", "filter_alpha",
                           "filter_order", "snapshot_every", "flat_depth"},
                       "swe");
            SweConfig& sc = c.swe;
            get_if(s, "length", sc.length);
            get_if(s, "n_points", sc.n_points);
            get_if(s, "dt", sc.dt);
            get_if(s, "t_end", sc.t_end);
            get_if(s, "gravity", sc.params.gravity);
            get_if(s, "manning_alpha", sc.params.manning_alpha);
            get_if(s, "filter", sc.filter);
            get_if(s, "filter_alpha", sc.filter_alpha);
            get_if(s, "filter_order", sc.filter_order);
            get_if(s, "snapshot_every", sc.snapshot_every);
            get_if(s, "flat_depth", sc.flat_depth);
        }
        get_if(j, "output_dir", c.output_dir);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::invalid_config, std::string("config: ") + e.what());
    }
    return c;
}

json to_json(const ExperimentConfig& c) {
    json methods = json::array();
    for (Method m : c.methods) methods.push_back(to_string(m));
    const BurgersConfig& b = c.burgers;
    const SweConfig& s = c.swe;
    return json{
        {"experiment", to_string(c.experiment)},
        {"methods", methods},
        {"domain", {c.a, c.b}},
        {"bspf", {{"p", c.bspf.p}, {"n", c.bspf.n}, {"m", c.bspf.m}, {"beta", beta_json(c.bspf.beta)}, {"lambda", c.bspf.lambda}}},
        {"sizes", c.sizes},
        {"noise",
         {{"enabled", c.noise},
          {"n_modes", c.noise_spec.n_modes},
          {"freq_range", {c.noise_spec.freq_lo, c.noise_spec.freq_hi}},
          {"amp_range", {c.noise_spec.amp_lo, c.noise_spec.amp_hi}},
          {"phase_range", {c.noise_spec.phase_lo, c.noise_spec.phase_hi}}}},
        {"seed", c.seed},
        {"repetitions", c.repetitions},
        {"map", {{"centers", c.map.centers}, {"widths", c.map.widths}, {"strengths", c.map.strengths}}},
        {"burgers",
         {{"a", b.params.a}, {"b", b.params.b}, {"c", b.params.c}, {"nu", b.params.nu}, {"x_min", b.x_min},
          {"x_max", b.x_max}, {"n_points", b.n_points}, {"t_end", b.t_end}, {"rel_tol", b.rel_tol},
          {"abs_tol", b.abs_tol}, {"filter", b.filter}, {"filter_alpha", b.filter_alpha},
          {"filter_order", b.filter_order}, {"output_times", b.output_times}}},
        {"swe",
         {{"length", s.length}, {"n_points", s.n_points}, {"dt", s.dt}, {"t_end", s.t_end},
          {"gravity", s.params.gravity}, {"manning_alpha", s.params.manning_alpha}, {"filter", s.filter},
          {"filter_alpha", s.filter_alpha}, {"filter_order", s.filter_order}, {"snapshot_every", s.snapshot_every}, {"flat_depth", s.flat_depth}}},
        {"output_dir", c.output_dir},
    };
}

namespace {

// The pde drivers take their discretization from the experiment's bspf block.
BurgersConfig resolved_burgers(const ExperimentConfig& c) {
    BurgersConfig b = c.burgers;
    b.p = c.bspf.p;
    b.n = c.bspf.n;
    b.m = c.bspf.m;
    b.beta = c.bspf.beta;
    b.lambda = c.bspf.lambda;
    return b;
}

SweConfig resolved_swe(const ExperimentConfig& c) {
    SweConfig s = c.swe;
    s.p = c.bspf.p;
    s.n = c.bspf.n;
    s.m = c.bspf.m;
    s.beta = c.bspf.beta;
    s.lambda = c.bspf.lambda;
    return s;
}

void check_bspf(const BspfParams& b, int n_points) {
    if (b.p < 1) throw Error(ErrorKind::invalid_config, "p must be at least 1");
    if (b.n < 2 * b.p) throw Error(ErrorKind::insufficient_basis, "n must be at least 2p");
    if (b.m < b.p) throw Error(ErrorKind::invalid_config, "m must be at least p");
    if (b.m > n_points) throw Error(ErrorKind::invalid_config, "m must not exceed N (" + std::to_string(n_points) + ")");
    if (!(b.lambda >= 0.0)) throw Error(ErrorKind::invalid_config, "lambda must be non-negative");
}

void check_methods(const ExperimentConfig& c, std::initializer_list<Method> allowed) {
    if (c.methods.empty()) throw Error(ErrorKind::invalid_config, "no method selected");
    for (Method m : c.methods) {
        if (std::find(allowed.begin(), allowed.end(), m) == allowed.end()) {
            throw Error(ErrorKind::invalid_config,
                        std::string("method ") + to_string(m) + " is not available for " + to_string(c.experiment));
        }
    }
}

}  // namespace

void validate(const ExperimentConfig& c) {
    if (!(c.b > c.a)) throw Error(ErrorKind::invalid_domain, "domain must satisfy a < b");
    if (c.noise) validate(c.noise_spec);
    if (c.repetitions < 1) throw Error(ErrorKind::invalid_config, "repetitions must be at least 1");
    switch (c.experiment) {
        case Experiment::diff_bench: check_methods(c, {Method::bspf, Method::chebyshev}); break;
        case Experiment::int_bench: check_methods(c, {Method::bspf, Method::chebyshev, Method::simpson}); break;
        case Experiment::map_bench: check_methods(c, {Method::bspf}); break;
        case Experiment::timing: check_methods(c, {Method::bspf, Method::chebyshev}); break;
        case Experiment::burgers: check_methods(c, {Method::bspf, Method::chebyshev}); break;
        case Experiment::swe: check_methods(c, {Method::bspf, Method::fd}); break;
    }
    const bool sweep = c.experiment == Experiment::diff_bench || c.experiment == Experiment::int_bench ||
                       c.experiment == Experiment::map_bench || c.experiment == Experiment::timing;
    if (sweep) {
        if (c.sizes.empty()) throw Error(ErrorKind::invalid_config, "sizes must not be empty");
        for (int n : c.sizes) {
            if (n < 3) throw Error(ErrorKind::grid_too_small, "every size must be at least 3");
            if (std::find(c.methods.begin(), c.methods.end(), Method::bspf) != c.methods.end()) check_bspf(c.bspf, n);
        }
    }
    if (c.experiment == Experiment::map_bench) {
        if (c.map.centers.size() != c.map.widths.size() || c.map.centers.size() != c.map.strengths.size()) {
            throw Error(ErrorKind::dimension_mismatch, "map centers, widths and strengths differ in length");
        }
        for (int n : c.sizes) make_sigmoid_composite_map(Grid(c.a, c.b, n), c.map.centers, c.map.widths, c.map.strengths);
    }
    if (c.experiment == Experiment::burgers) {
        validate(resolved_burgers(c));
    }
    if (c.experiment == Experiment::swe) {
        validate(resolved_swe(c));
    }
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int k = 0;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (!(y[i] > 0.0) || !(x[i] > 0.0)) continue;
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++k;
    }
    if (k < 2) return std::nan("");
    const double den = k * sxx - sx * sx;
    return den == 0.0 ? std::nan("") : (k * sxy - sx * sy) / den;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::optional<NoiseSpec> noise_of(const ExperimentConfig& c) {
    if (!c.noise) return std::nullopt;
    NoiseSpec s = c.noise_spec;
    s.seed = c.seed;
    return s;
}

std::shared_ptr<const PeriodizationPlan> plan_for(const ExperimentConfig& c, const Grid& g) {
    return std::make_shared<const PeriodizationPlan>(build_plan(g, c.bspf.p, c.bspf.n, c.bspf.m, c.bspf.beta, c.bspf.lambda));
}

// Trapezoidal L2 norm over nodes given in either order.
double l2_norm(const std::vector<double>& x, const std::vector<double>& e) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * std::abs(x[i + 1] - x[i]) * (e[i] * e[i] + e[i + 1] * e[i + 1]);
    return std::sqrt(s);
}

double linf(const std::vector<double>& e, std::size_t skip) {
    double m = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i != skip) m = std::max(m, std::abs(e[i]));
    }
    return m;
}

ConvergenceRow convergence_point(const ExperimentConfig& c, const TestFunction& tf, Method method, int n_points) {
    const bool integrate = c.experiment == Experiment::int_bench;
    ConvergenceRow row;
    row.n_points = n_points;
    row.method = method;
    std::vector<double> x, approx, exact;
    std::size_t right = 0;
    if (method == Method::chebyshev) {
        const ChebyshevGrid g = make_chebyshev_grid(c.a, c.b, n_points);
        x = g.points;
        std::vector<double> in(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) in[j] = integrate ? tf.df(x[j]) : tf.f(x[j]);
        ChebyshevWorkspace ws(g);
        approx.resize(x.size());
        const auto t0 = Clock::now();
        if (integrate) {
            ws.antiderivative(in, approx, {Endpoint::a, tf.f(c.a)});
        } else {
            ws.differentiate(in, approx);
        }
        row.wall_time = seconds_since(t0);
        right = 0;
    } else {
        const Grid g(c.a, c.b, n_points);
        x = g.points();
        const Field in = sample(g, integrate ? tf.df : tf.f);
        const auto t0 = Clock::now();
        if (method == Method::simpson) {
            approx = simpson_integrate(in, {Endpoint::a, tf.f(c.a)}).values();
        } else {
            auto plan = plan_for(c, g);
            BspfOperator op(plan);
            approx = integrate ? op.antiderivative(in, {Endpoint::a, tf.f(c.a)}).values() : op.differentiate(in).values();
        }
        row.wall_time = seconds_since(t0);
        right = x.size() - 1;
    }
    exact.resize(x.size());
    std::vector<double> err(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        exact[j] = integrate ? tf.f(x[j]) : tf.df(x[j]);
        err[j] = approx[j] - exact[j];
    }
    if (integrate) {
        row.error_norm = l2_norm(x, err);
        std::vector<double> xi = x, ei = err;
        xi.erase(xi.begin() + static_cast<long>(right));
        ei.erase(ei.begin() + static_cast<long>(right));
        row.error_interior = l2_norm(xi, ei);
    } else {
        row.error_norm = linf(err, err.size());
        row.error_interior = linf(err, right);
    }
    return row;
}

}  // namespace

ConvergenceReport run_convergence(const ExperimentConfig& c) {
    if (c.experiment != Experiment::diff_bench && c.experiment != Experiment::int_bench) {
        throw Error(ErrorKind::invalid_config, "convergence sweeps need diff-bench or int-bench");
    }
    validate(c);
    const TestFunction tf = make_test_function(noise_of(c));
    ConvergenceReport rep;
    for (Method m : c.methods) {
        std::vector<double> ns, es;
        for (int n : c.sizes) {
            try {
                rep.rows.push_back(convergence_point(c, tf, m, n));
            } catch (const std::exception& e) {
                rep.partial = true;
                rep.failure = std::string(to_string(m)) + " N=" + std::to_string(n) + ": " + e.what();
                return rep;
            }
            ns.push_back(n);
            es.push_back(rep.rows.back().error_norm);
        }
        rep.slopes[to_string(m)] = fitted_slope(ns, es);
    }
    return rep;
}

std::vector<MapBenchRow> run_map_bench(const ExperimentConfig& c) {
    if (c.experiment != Experiment::map_bench) throw Error(ErrorKind::invalid_config, "map bench needs experiment map-bench");
    validate(c);
    const TestFunction tf = make_test_function(noise_of(c));
    std::vector<MapBenchRow> rows;
    for (int n : c.sizes) {
        const Grid g(c.a, c.b, n);
        auto plan = plan_for(c, g);
        MapBenchRow row;
        row.n_points = n;
        {
            BspfOperator op(plan);
            const Field d = op.differentiate(sample(g, tf.f));
            for (int j = 0; j + 1 < n; ++j) row.uniform_error = std::max(row.uniform_error, std::abs(d[j] - tf.df(g.point(j))));
        }
        {
            GridMap map = make_sigmoid_composite_map(g, c.map.centers, c.map.widths, c.map.strengths);
            const std::vector<double> xi = map.mapped_points(g);
            std::vector<double> f(xi.size());
            for (std::size_t j = 0; j < xi.size(); ++j) f[j] = tf.f(xi[j]);
            BspfOperator op(plan, map);
            const Field d = op.differentiate_mapped(Field(g, f));
            for (int j = 0; j + 1 < n; ++j) {
                row.mapped_error = std::max(row.mapped_error, std::abs(d[j] - tf.df(xi[static_cast<std::size_t>(j)])));
            }
        }
        rows.push_back(row);
    }
    return rows;
}

TimingReport run_timing(const ExperimentConfig& c) {
    if (c.experiment != Experiment::timing) throw Error(ErrorKind::invalid_config, "timing needs experiment timing");
    validate(c);
    const TestFunction tf = make_test_function(noise_of(c));
    TimingReport rep;
    for (Method m : c.methods) {
        std::vector<double> xs, ts;
        for (int n : c.sizes) {
            std::vector<double> times;
            if (m == Method::bspf) {
                const Grid g(c.a, c.b, n);
                BspfOperator op(plan_for(c, g));
                const Field f = sample(g, tf.f);
                std::vector<double> out(static_cast<std::size_t>(n));
                op.differentiate(f.span(), out);
                for (int r = 0; r < c.repetitions; ++r) {
                    const auto t0 = Clock::now();
                    op.differentiate(f.span(), out);
                    times.push_back(seconds_since(t0));
                }
            } else {
                const ChebyshevGrid g = make_chebyshev_grid(c.a, c.b, n);
                ChebyshevWorkspace ws(g);
                std::vector<double> f(g.points.size()), out(g.points.size());
                for (std::size_t j = 0; j < f.size(); ++j) f[j] = tf.f(g.points[j]);
                ws.differentiate(f, out);
                for (int r = 0; r < c.repetitions; ++r) {
                    const auto t0 = Clock::now();
                    ws.differentiate(f, out);
                    times.push_back(seconds_since(t0));
                }
            }
            std::sort(times.begin(), times.end());
            const double med = times.size() % 2 ? times[times.size() / 2]
                                                : 0.5 * (times[times.size() / 2 - 1] + times[times.size() / 2]);
            const double nlogn = n * std::log2(static_cast<double>(n));
            rep.rows.push_back({n, m, med, med / nlogn});
            xs.push_back(nlogn);
            ts.push_back(med);
        }
        rep.exponents[to_string(m)] = fitted_slope(xs, ts);
    }
    return rep;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream os(p);
    if (!os) throw Error(ErrorKind::invalid_config, "cannot write " + p.string());
    os << std::scientific << std::setprecision(16);
    return os;
}

json slopes_json(const std::map<std::string, double>& s) {
    json j = json::object();
    for (const auto& [k, v] : s) j[k] = std::isfinite(v) ? json(v) : json(nullptr);
    return j;
}

void run_burgers_experiment(const ExperimentConfig& c, const std::filesystem::path& dir, json& man) {
    const BurgersConfig bc = resolved_burgers(c);
    json results = json::object();
    for (Method m : c.methods) {
        const std::string tag = to_string(m);
        std::vector<double> times, max_err;
        std::vector<double> x;
        std::vector<std::vector<double>> states;
        json r;
        if (m == Method::bspf) {
            const BurgersResult res = run_burgers(bc);
            x = res.grid.points();
            times = res.trajectory.times;
            states = res.trajectory.states;
            max_err = res.max_error;
            r["max_error"] = res.max_error_overall;
            r["accepted_steps"] = res.trajectory.accepted;
            r["rejected_steps"] = res.trajectory.rejected;
            json loc = json::array();
            for (std::size_t s = 0; s < times.size(); ++s) {
                const double front = bc.params.c + bc.params.b * times[s];
                loc.push_back({{"t", times[s]}, {"x_max_error", x[static_cast<std::size_t>(res.max_error_index[s])]}, {"front", front}});
            }
            r["max_error_location"] = loc;
        } else {
            const ChebyshevBurgersResult res = run_chebyshev_burgers(bc);
            x = res.grid.points;
            times = res.trajectory.times;
            states = res.trajectory.states;
            max_err = res.max_error;
            r["max_error"] = res.max_error_overall;
            r["accepted_steps"] = res.trajectory.accepted;
            r["rejected_steps"] = res.trajectory.rejected;
        }
        std::ofstream os = open_out(dir / ("burgers_error_" + tag + ".csv"));
        os << "t\\x";
        for (double xv : x) os << ',' << xv;
        os << '\n';
        for (std::size_t s = 0; s < times.size(); ++s) {
            os << times[s];
            for (std::size_t j = 0; j < x.size(); ++j) os << ',' << std::abs(states[s][j] - burgers_exact(bc.params, x[j], times[s]));
            os << '\n';
        }
        std::ofstream ms = open_out(dir / ("burgers_max_error_" + tag + ".csv"));
        ms << "t,max_error\n";
        for (std::size_t s = 0; s < times.size(); ++s) ms << times[s] << ',' << max_err[s] << '\n';
        results[tag] = r;
    }
    man["results"] = results;
}

void run_swe_experiment(const ExperimentConfig& c, const std::filesystem::path& dir, json& man) {
    const SweConfig sc = resolved_swe(c);
    json results = json::object();
    for (Method m : c.methods) {
        const std::string tag = to_string(m);
        const SweResult res = m == Method::bspf ? run_swe(sc) : run_fd_swe(sc);
        const double y_mid = 0.5 * sc.length;
        const std::vector<double> prof = profile_at_y(res.final_state, y_mid);
        const Grid& gx = res.final_state.eta.grid_x();
        std::ofstream ps = open_out(dir / ("swe_profile_" + tag + ".csv"));
        ps << "x,eta\n";
        for (int j = 0; j < gx.size(); ++j) ps << gx.point(j) << ',' << prof[static_cast<std::size_t>(j)] << '\n';
        std::ofstream fs = open_out(dir / ("swe_eta_final_" + tag + ".csv"));
        write_csv(fs, res.final_state.eta);
        for (std::size_t s = 1; s + 1 < res.snapshots.size(); ++s) {
            std::ostringstream name;
            name << "swe_eta_" << tag << "_t" << std::fixed << std::setprecision(3) << res.times[s] << ".csv";
            std::ofstream ss = open_out(dir / name.str());
            write_csv(ss, res.snapshots[s].eta);
        }
        const double v0 = res.volume.front();
        const double v1 = res.volume.back();
        results[tag] = {{"steps", res.steps},
                        {"volume_initial", v0},
                        {"volume_final", v1},
                        {"volume_drift_relative", std::abs(v1 - v0) / std::abs(v0)}};
    }
    man["results"] = results;
}

}  // namespace

json run_experiment(const ExperimentConfig& c) {
    json man;
    man["version"] = version();
    man["experiment"] = to_string(c.experiment);
    man["config"] = to_json(c);
    man["seed"] = c.seed;
    man["status"] = "ok";
    const std::filesystem::path dir(c.output_dir);
    std::filesystem::create_directories(dir);
    auto write_manifest = [&] {
        std::ofstream ms(dir / "manifest.json");
        ms << man.dump(2) << '\n';
    };
    try {
        validate(c);
        switch (c.experiment) {
            case Experiment::diff_bench:
            case Experiment::int_bench: {
                const ConvergenceReport rep = run_convergence(c);
                std::ofstream os = open_out(dir / "convergence.csv");
                os << "N,method,error_norm,error_interior,wall_time\n";
                for (const auto& r : rep.rows) {
                    os << r.n_points << ',' << to_string(r.method) << ',' << r.error_norm << ',' << r.error_interior << ','
                       << r.wall_time << '\n';
                }
                man["norm"] = c.experiment == Experiment::diff_bench ? "linf" : "l2";
                man["slopes"] = slopes_json(rep.slopes);
                man["partial"] = rep.partial;
                if (rep.partial) {
                    man["status"] = "failed";
                    man["failure"] = rep.failure;
                }
                break;
            }
            case Experiment::map_bench: {
                const auto rows = run_map_bench(c);
                std::ofstream os = open_out(dir / "map_bench.csv");
                os << "N,uniform_error,mapped_error\n";
                for (const auto& r : rows) os << r.n_points << ',' << r.uniform_error << ',' << r.mapped_error << '\n';
                break;
            }
            case Experiment::timing: {
                const TimingReport rep = run_timing(c);
                std::ofstream os = open_out(dir / "timing.csv");
                os << "N,method,median_time,time_per_nlogn\n";
                for (const auto& r : rep.rows) {
                    os << r.n_points << ',' << to_string(r.method) << ',' << r.median_time << ',' << r.time_per_nlogn << '\n';
                }
                man["nlogn_exponents"] = slopes_json(rep.exponents);
                break;
            }
            case Experiment::burgers: run_burgers_experiment(c, dir, man); break;
            case Experiment::swe: run_swe_experiment(c, dir, man); break;
        }
    } catch (const std::exception& e) {
        man["status"] = "failed";
        man["failure"] = e.what();
        write_manifest();
        throw;
    }
    write_manifest();
    return man;
}

}  // namespace bspf
