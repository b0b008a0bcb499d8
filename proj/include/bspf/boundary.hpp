#pragma once

#include "bspf/bspline.hpp"
#include "bspf/grid.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace bspf {

/// Replaces entry `index` of the boundary derivative vector d. Index k < p is
/// the k-th derivative at a, index p + k the k-th derivative at b.
struct BcOverride {
    int index = 0;
    double value = 0.0;
};

/// Largest supported one-sided stencil; monomial Taylor systems beyond this
/// lose all precision in double arithmetic.
inline constexpr int kMaxStencilWidth = 20;
/// Widths above this trigger the conditioning warning.
inline constexpr int kStencilWarnWidth = 16;

/// One-sided Taylor systems at both ends of a uniform grid:
///   A^L_{j,k} = (x_j - a)^k / k!,  A^R_{j,k} = (x_{N-1-j} - b)^k / k!.
/// The inverses are formed once from the closed-form inverse of the integer
/// Vandermonde matrix V_{j,k} = j^k, whose entries are the monomial
/// coefficients of the Lagrange polynomials on nodes 0..m-1.
class BoundaryStencil {
public:
    BoundaryStencil(const Grid& grid, int m);

    int width() const noexcept { return m_; }
    const Grid& grid() const noexcept { return grid_; }
    const Eigen::MatrixXd& vandermonde_left_inv() const noexcept { return left_inv_; }
    const Eigen::MatrixXd& vandermonde_right_inv() const noexcept { return right_inv_; }

    Eigen::MatrixXd vandermonde_left() const;
    Eigen::MatrixXd vandermonde_right() const;

    /// 1-norm condition number of the column-equilibrated Vandermonde matrix.
    double condition_estimate() const noexcept { return cond_; }
    bool ill_conditioned() const noexcept { return cond_ > 1e15 || m_ > kStencilWarnWidth; }

private:
    Grid grid_;
    int m_;
    Eigen::MatrixXd left_inv_;
    Eigen::MatrixXd right_inv_;
    double cond_ = 1.0;
};

BoundaryStencil build_stencil(const Grid& grid, int m);

/// d = [f(a), f'(a), ..., f^{(p-1)}(a), f(b), ..., f^{(p-1)}(b)].
struct BoundaryData {
    int p = 0;
    Eigen::VectorXd d;
    std::vector<BcOverride> overrides;
};

/// Solves both m x m Taylor systems and keeps orders 0..p-1 of each.
BoundaryData estimate_boundary_derivatives(const BoundaryStencil& stencil, std::span<const double> f, int p);
BoundaryData estimate_boundary_derivatives(const BoundaryStencil& stencil, const Field& f, int p);

/// Returns a copy with the listed entries of d replaced.
BoundaryData apply_bc_overrides(BoundaryData data, std::span<const BcOverride> overrides);

/// Row k < p holds B^{(k)}_{i,p}(a), row p + k holds B^{(k)}_{i,p}(b).
struct ConstraintMatrix {
    Eigen::MatrixXd c;
};

ConstraintMatrix build_constraint_matrix(const KnotVector& knots);

}  // namespace bspf
