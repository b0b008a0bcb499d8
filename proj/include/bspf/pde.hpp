#pragma once

#include "bspf/baselines.hpp"
#include "bspf/grid.hpp"
#include "bspf/operators.hpp"
#include "bspf/swe.hpp"

#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace bspf {

using RhsFn = std::function<void(double t, std::span<const double> u, std::span<double> dudt)>;
/// Called after every accepted step; may modify the state in place.
using StepHook = std::function<void(double t, std::span<double> u)>;

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    long accepted = 0;
    long rejected = 0;
    long rhs_evals = 0;
};

struct Rk45Options {
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;
    /// Sorted times in [t0, t1] at which the state is recorded; t1 is always recorded.
    std::vector<double> output_times;
    StepHook post_step;
    double first_step = 0.0;  // 0 picks one automatically
    double max_step = std::numeric_limits<double>::infinity();
};

/// Dormand-Prince 5(4) with PI-free step control on the mixed RMS error norm.
/// Steps are shortened to land exactly on output times.
Trajectory integrate_rk45(const RhsFn& rhs, std::vector<double> u0, double t0, double t1, const Rk45Options& opt);

struct Rk4Options {
    double dt = 1e-3;
    long n_steps = 0;
    /// Record every k-th step (0: only the initial and final states).
    long snapshot_every = 0;
    StepHook post_step;
};

/// Classical fixed-step RK4. Throws nan_detected naming the failing step.
Trajectory integrate_rk4(const RhsFn& rhs, std::vector<double> u0, double t0, const Rk4Options& opt);

// ---------------------------------------------------------------- Burgers

/// Traveling front u = (a + b + (b - a) e^eta) / (1 + e^eta), eta = (a/nu)(x - b t - c).
/// Moves with speed b from u = a + b (left) to u = b - a (right).
struct BurgersParams {
    double a = 0.4;
    double b = 0.6;
    double c = std::numbers::pi;
    double nu = 0.01;
};

void validate(const BurgersParams& p);
double burgers_exact(const BurgersParams& p, double x, double t);
double burgers_exact_dt(const BurgersParams& p, double x, double t);

struct BurgersConfig {
    BurgersParams params;
    double x_min = 0.0;
    double x_max = 2.0 * std::numbers::pi;
    int n_points = 800;
    double t_end = 2.0;
    int p = 8;
    int n = 32;
    int m = 8;
    std::optional<double> beta;
    double lambda = 0.0;
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;
    bool filter = true;
    double filter_alpha = 36.0;
    int filter_order = 36;
    std::vector<double> output_times;  // empty: every 0.1 up to t_end
};

void validate(const BurgersConfig& cfg);

/// Grid, operator and parameters of one Burgers discretization.
class BurgersProblem {
public:
    explicit BurgersProblem(const BurgersConfig& cfg);

    const BurgersConfig& config() const noexcept { return cfg_; }
    const Grid& grid() const noexcept { return op_.grid(); }
    BspfOperator& op() noexcept { return op_; }

    /// nu u_xx - u u_x with u_xx as two first-derivative passes. The exact
    /// Dirichlet values enter the first pass as overrides of d_0 and d_p, and
    /// the two boundary entries of the result are the exact du/dt.
    void rhs(double t, std::span<const double> u, std::span<double> dudt);
    /// Residual filter followed by resetting the boundary values.
    void post_step(double t, std::span<double> u);
    std::vector<double> initial_state() const;

private:
    BurgersConfig cfg_;
    BspfOperator op_;
    std::vector<double> ux_;
    std::vector<double> uxx_;
    std::vector<double> tmp_;
};

Field burgers_rhs(BurgersProblem& problem, const Field& u, double t);

struct BurgersResult {
    Grid grid;
    Trajectory trajectory;
    /// max_x |u - exact| per recorded time.
    std::vector<double> max_error;
    std::vector<int> max_error_index;
    double max_error_overall = 0.0;
};

BurgersResult run_burgers(const BurgersConfig& cfg);

/// Same problem on Chebyshev-Gauss-Lobatto points with the same RK45 and the
/// same boundary treatment. Errors are measured on those points.
struct ChebyshevBurgersResult {
    ChebyshevGrid grid;
    Trajectory trajectory;
    std::vector<double> max_error;
    double max_error_overall = 0.0;
};

ChebyshevBurgersResult run_chebyshev_burgers(const BurgersConfig& cfg);

// ---------------------------------------------------------------- shallow water

struct SweConfig {
    double length = 100.0;
    int n_points = 201;
    double dt = 1e-3;
    double t_end = 2.0;
    SweParams params;
    /// Positive: constant depth instead of the tanh bathymetry.
    double flat_depth = 0.0;
    int p = 4;
    int n = 16;
    int m = 4;
    std::optional<double> beta;
    double lambda = 0.0;
    bool filter = true;
    double filter_alpha = 36.0;
    int filter_order = 36;
    long snapshot_every = 0;
};

void validate(const SweConfig& cfg);

/// h(x) = 50 - 25 tanh((x - 50)/10) and eta0 = exp(-((x-50)^2 + (y-50)^2)/10),
/// centred for a domain of side `length`.
double swe_bathymetry(double x, double length = 100.0);
double swe_initial_eta(double x, double y, double length = 100.0);
RowMatrix swe_bathymetry_matrix(const SweConfig& cfg);

/// BSPF discretization of the wall-bounded shallow-water system on a square grid.
class SweProblem {
public:
    explicit SweProblem(const SweConfig& cfg);

    const SweConfig& config() const noexcept { return cfg_; }
    const Grid& grid() const noexcept { return grid_; }
    const RowMatrix& bathymetry() const noexcept { return h_; }
    BspfOperator& op() noexcept { return op_; }

    SweState initial_state() const;
    /// Time derivative; every spatial derivative goes through apply_along_axis.
    SweState rhs(const SweState& s);
    /// Residual filter along x and y on all three fields.
    void filter(SweState& s);

private:
    SweConfig cfg_;
    Grid grid_;
    RowMatrix h_;
    BspfOperator op_;
};

SweState swe_rhs(SweProblem& problem, const SweState& s);

struct SweResult {
    SweState final_state;
    std::vector<double> times;
    std::vector<SweState> snapshots;
    std::vector<double> volume;  // total volume at each snapshot
    long steps = 0;
};

/// BSPF run with RK4 and optional per-step filter.
SweResult run_swe(const SweConfig& cfg);
/// Finite-difference reference with the same physics, grid size and dt from cfg.
SweResult run_fd_swe(const SweConfig& cfg);

/// eta along the grid row closest to y = y0.
std::vector<double> profile_at_y(const SweState& s, double y0);

}  // namespace bspf
