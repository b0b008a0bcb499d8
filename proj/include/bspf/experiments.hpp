#pragma once

#include "bspf/pde.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace bspf {

const char* version();

/// Random cosine modes eps(x) = sum_i A_i cos(kappa_i x + phi_i), all ranges uniform.
struct NoiseSpec {
    int n_modes = 1000;
    double freq_lo = 1.0;
    double freq_hi = 100.0;
    double amp_lo = 0.0;
    double amp_hi = 0.01;
    double phase_lo = 0.0;
    double phase_hi = 2.0 * std::numbers::pi;
    std::uint64_t seed = 0;
};

void validate(const NoiseSpec& spec);

struct NoiseModes {
    std::vector<double> kappa;
    std::vector<double> amp;
    std::vector<double> phase;
};

/// Uniform double in [0, 1) from the top 53 bits of one mt19937_64 draw.
double uniform53(std::mt19937_64& rng);

/// Draws all kappa, then all A, then all phi from mt19937_64(seed).
NoiseModes draw_noise(const NoiseSpec& spec);

struct TestFunction {
    std::function<double(double)> f;
    std::function<double(double)> df;
};

/// f(x) = sin(x / (1.02 + cos x)) + eps(x) and its closed-form derivative.
TestFunction make_test_function(std::optional<NoiseSpec> noise = {});

enum class Experiment { diff_bench, int_bench, map_bench, timing, burgers, swe };
enum class Method { bspf, chebyshev, simpson, fd };

const char* to_string(Experiment e);
const char* to_string(Method m);
Experiment parse_experiment(const std::string& s);
Method parse_method(const std::string& s);

struct BspfParams {
    int p = 11;
    int n = 44;
    int m = 16;
    std::optional<double> beta = 3.0;
    double lambda = 0.0;
};

struct MapParams {
    std::vector<double> centers;
    std::vector<double> widths;
    std::vector<double> strengths;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::diff_bench;
    std::vector<Method> methods{Method::bspf};
    double a = 0.0;
    double b = 2.0 * std::numbers::pi;
    BspfParams bspf;
    std::vector<int> sizes{1000, 1500, 2000, 2500, 3000};
    bool noise = true;
    NoiseSpec noise_spec;  // its seed is replaced by `seed`
    std::uint64_t seed = 1;
    int repetitions = 5;
    MapParams map;
    BurgersConfig burgers;
    SweConfig swe;
    std::string output_dir = "out";
};

/// Default parameters for the given experiment.
ExperimentConfig default_config(Experiment e);
/// Overlays keys present in `j` on `base`. Unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base);
nlohmann::json to_json(const ExperimentConfig& cfg);
/// Checks every run the config would perform (n >= 2p, m >= p, m <= N, ...).
void validate(const ExperimentConfig& cfg);

struct ConvergenceRow {
    int n_points = 0;
    Method method = Method::bspf;
    double error_norm = 0.0;
    double error_interior = 0.0;  // excludes the last grid point
    double wall_time = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    std::map<std::string, double> slopes;  // per method, log-log fit of error vs N
    bool partial = false;
    std::string failure;
};

/// Least-squares slope of log y against log x over pairs with y > 0.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Differentiation (L-infinity) or integration (L2) sweeps over cfg.sizes.
ConvergenceReport run_convergence(const ExperimentConfig& cfg);

struct MapBenchRow {
    int n_points = 0;
    double uniform_error = 0.0;
    double mapped_error = 0.0;
};
/// BSPF on the uniform grid and on the mapped grid at each size; L-infinity
/// errors excluding the last point.
std::vector<MapBenchRow> run_map_bench(const ExperimentConfig& cfg);

struct TimingRow {
    int n_points = 0;
    Method method = Method::bspf;
    double median_time = 0.0;
    double time_per_nlogn = 0.0;
};

struct TimingReport {
    std::vector<TimingRow> rows;
    std::map<std::string, double> exponents;  // fitted exponent of t against N log N
};

TimingReport run_timing(const ExperimentConfig& cfg);

/// Writes CSV files and manifest.json into cfg.output_dir and returns the manifest.
nlohmann::json run_experiment(const ExperimentConfig& cfg);

}  // namespace bspf
