#pragma once

#include "bspf/boundary.hpp"
#include "bspf/bspline.hpp"
#include "bspf/grid.hpp"

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include <optional>
#include <span>
#include <vector>

namespace bspf {

enum class PlanMode { determined, regularized };

/// Control coefficients P of the boundary-matching spline, plus the Lagrange
/// multipliers of the constrained fit in regularized mode.
struct SplineCoefficients {
    Eigen::VectorXd p_vec;
    std::optional<Eigen::VectorXd> multipliers;
};

/// Everything that depends on the grid and knots only: basis samples, the
/// boundary stencil, the constraint matrix and the factorized solve.
///
/// Regularized mode (n > 2p) solves the equality-constrained fit
///   [ 2(Q + lambda I)  -C^T ] [P ]   [2 D W f]
///   [       C          0    ] [mu] = [   d   ],  Q = D W D^T,
/// with W the trapezoidal weights, by elimination: C pins the first and last p
/// coefficients through two small triangular blocks, evaluated in closed form as
/// the polar form of the end Taylor polynomials, and the remaining n - 2p solve
/// an SPD system. Determined mode (n == 2p) is the first step alone.
class PeriodizationPlan {
public:
    PeriodizationPlan(const Grid& grid, int p, int n, int m, std::optional<double> beta, double lambda);

    const Grid& grid() const noexcept { return basis_.grid(); }
    const BsplineBasis& basis() const noexcept { return basis_; }
    const BoundaryStencil& stencil() const noexcept { return stencil_; }
    const ConstraintMatrix& constraint() const noexcept { return constraint_; }
    PlanMode mode() const noexcept { return mode_; }
    double lambda() const noexcept { return lambda_; }
    int degree() const noexcept { return basis_.degree(); }
    int n_basis() const noexcept { return basis_.n_basis(); }
    const std::vector<double>& quad_weights() const noexcept { return weights_; }
    /// Smallest of the end blocks' diagonal ratios and the Gram rcond.
    double rcond() const noexcept { return rcond_; }

    /// Solves for P given boundary data already estimated/overridden. The
    /// multipliers cost two extra passes over the grid and are optional.
    SplineCoefficients solve(std::span<const double> f, const BoundaryData& data, bool with_multipliers = true) const;

private:
    BsplineBasis basis_;
    BoundaryStencil stencil_;
    ConstraintMatrix constraint_;
    PlanMode mode_;
    double lambda_;
    std::vector<double> weights_;
    Eigen::VectorXd row_scale_;
    Eigen::MatrixXd left_tri_;
    Eigen::MatrixXd right_tri_;
    Eigen::MatrixXd left_polar_;
    Eigen::MatrixXd right_polar_;
    Eigen::LLT<Eigen::MatrixXd> gram_;
    double rcond_ = 0.0;
};

PeriodizationPlan build_plan(const Grid& grid, int p, int n, int m, std::optional<double> beta = {},
                             double lambda = 0.0);

/// Estimates d with the plan's stencil, applies overrides and solves.
SplineCoefficients solve_coefficients(const PeriodizationPlan& plan, std::span<const double> f,
                                      std::span<const BcOverride> overrides = {});
SplineCoefficients solve_coefficients(const PeriodizationPlan& plan, const Field& f,
                                      std::span<const BcOverride> overrides = {});

/// f_s (order 0) or f_s' (order 1) on the plan's grid.
Field evaluate_spline(const PeriodizationPlan& plan, const SplineCoefficients& coeffs, int deriv_order);

/// sum_i P_i int_a^x B_{i,p}, zero at x = a.
Field spline_antiderivative(const PeriodizationPlan& plan, const SplineCoefficients& coeffs);

}  // namespace bspf
