#pragma once

#include "bspf/grid.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace bspf {

/// Clamped knot sequence z_0..z_{n+p} with p+1 repeated knots at each end.
class KnotVector {
public:
    KnotVector(int degree, std::vector<double> knots, std::optional<double> clustering_beta = {});

    int degree() const noexcept { return p_; }
    int n_basis() const noexcept { return n_; }
    const std::vector<double>& knots() const noexcept { return z_; }
    double knot(int i) const noexcept { return z_[static_cast<std::size_t>(i)]; }
    std::optional<double> clustering_beta() const noexcept { return beta_; }
    double a() const noexcept { return z_.front(); }
    double b() const noexcept { return z_.back(); }

    /// Index s in [p, n-1] with z_s <= x < z_{s+1}; x == b maps to the last
    /// non-empty span (left-limit convention).
    int find_span(double x) const;

    /// Degree p+1 clamped knots {a, z_0..z_{n+p}, b} carrying the antiderivatives.
    KnotVector elevated() const;

private:
    int p_;
    int n_;
    std::vector<double> z_;
    std::optional<double> beta_;
};

/// Uniform interior knots, or tanh clustering toward both ends when beta is set:
/// zeta(u) = (tanh(beta (2u-1)) / tanh(beta) + 1) / 2 on u = i/(n-p), scaled to [a,b].
KnotVector build_knots(const Grid& grid, int degree, int n_basis, std::optional<double> beta = {});

/// Values and derivatives of the p+1 basis functions that are nonzero on the
/// span containing x. Row k holds derivative order k; column r belongs to
/// basis index span - p + r.
struct LocalBasis {
    int span = 0;
    Eigen::MatrixXd ders;
};

LocalBasis eval_basis_local(const KnotVector& knots, double x, int max_deriv);

/// Dense n x (max_deriv+1) matrix: column k holds B_{i,p}^{(k)}(x) for all i.
Eigen::MatrixXd eval_basis(const KnotVector& knots, double x, int max_deriv);

/// Entry i is the integral of B_{i,p} from a to x, computed through the
/// degree p+1 basis on the elevated knots:
///   int_a^x B_{i,p} = (z_{i+p+1} - z_i)/(p+1) * sum_{j>i} Bhat_{j,p+1}(x).
Eigen::VectorXd basis_antiderivative(const KnotVector& knots, double x);

/// Basis sampled on a grid. design(i, j) = B_{i,p}(x_j), design_d1 the first
/// derivatives, antiderivative(i, j) = int_a^{x_j} B_{i,p}.
class BsplineBasis {
public:
    BsplineBasis(KnotVector knots, Grid grid);

    const KnotVector& knots() const noexcept { return knots_; }
    const KnotVector& antiderivative_knots() const noexcept { return elevated_; }
    const Grid& grid() const noexcept { return grid_; }
    int n_basis() const noexcept { return knots_.n_basis(); }
    int degree() const noexcept { return knots_.degree(); }

    const Eigen::MatrixXd& design() const noexcept { return design_; }
    const Eigen::MatrixXd& design_d1() const noexcept { return design_d1_; }
    const Eigen::MatrixXd& antiderivative() const noexcept { return anti_; }

    /// out_j = sum_i coeffs_i B^{(order)}_{i,p}(x_j), order in {0, 1}. O(pN).
    void evaluate(const Eigen::VectorXd& coeffs, int order, std::span<double> out) const;

    /// out_i = sum_j B_{i,p}(x_j) w_j f_j. O(pN).
    Eigen::VectorXd weighted_projection(std::span<const double> f, std::span<const double> w) const;

private:
    KnotVector knots_;
    KnotVector elevated_;
    Grid grid_;
    Eigen::MatrixXd design_;
    Eigen::MatrixXd design_d1_;
    Eigen::MatrixXd anti_;
    // Banded copies for O(pN) products: first nonzero row and p+1 values per column.
    std::vector<int> first_;
    Eigen::MatrixXd band0_;
    Eigen::MatrixXd band1_;
};

BsplineBasis build_design_matrices(const KnotVector& knots, const Grid& grid);

}  // namespace bspf
