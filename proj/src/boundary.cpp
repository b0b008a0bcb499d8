#include "bspf/boundary.hpp"

#include "bspf/error.hpp"

#include <cmath>
#include <iostream>

namespace bspf {

namespace {

// Inverse of V_{j,k} = j^k on nodes 0..m-1. Row k, column j is the t^k
// coefficient of l_j(t) = prod_{i != j} (t - i) / (j - i). The numerator
// coefficients are integers (Stirling-type) and exact in long double for m <= 20.
Eigen::MatrixXd integer_vandermonde_inverse(int m) {
    Eigen::MatrixXd inv(m, m);
    std::vector<long double> poly(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        std::fill(poly.begin(), poly.end(), 0.0L);
        poly[0] = 1.0L;
        int degree = 0;
        long double denom = 1.0L;
        for (int i = 0; i < m; ++i) {
            if (i == j) continue;
            // poly *= (t - i)
            for (int k = degree + 1; k >= 1; --k) {
                poly[static_cast<std::size_t>(k)] =
                    poly[static_cast<std::size_t>(k - 1)] - static_cast<long double>(i) * poly[static_cast<std::size_t>(k)];
            }
            poly[0] = -static_cast<long double>(i) * poly[0];
            ++degree;
            denom *= static_cast<long double>(j - i);
        }
        for (int k = 0; k < m; ++k) inv(k, j) = static_cast<double>(poly[static_cast<std::size_t>(k)] / denom);
    }
    return inv;
}

double norm1(const Eigen::MatrixXd& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

BoundaryStencil::BoundaryStencil(const Grid& grid, int m) : grid_(grid), m_(m) {
    if (m < 2) throw Error(ErrorKind::invalid_config, "stencil width must be at least 2");
    if (m > grid.size()) throw Error(ErrorKind::invalid_config, "stencil width exceeds grid size");
    if (m > kMaxStencilWidth) throw Error(ErrorKind::invalid_config, "stencil width above 20 is not supported");

    const Eigen::MatrixXd vinv = integer_vandermonde_inverse(m);
    const double h = grid.spacing();
    left_inv_.resize(m, m);
    right_inv_.resize(m, m);
    double fact = 1.0;
    double hk = 1.0;
    for (int k = 0; k < m; ++k) {
        if (k > 0) {
            fact *= k;
            hk *= h;
        }
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        left_inv_.row(k) = vinv.row(k) * (fact / hk);
        right_inv_.row(k) = vinv.row(k) * (sign * fact / hk);
    }

    // Equilibrated matrix Vhat_{j,k} = (j/(m-1))^k and its inverse diag((m-1)^k) V^{-1}.
    Eigen::MatrixXd vhat(m, m);
    Eigen::MatrixXd vhat_inv = vinv;
    for (int k = 0; k < m; ++k) {
        for (int j = 0; j < m; ++j) vhat(j, k) = std::pow(static_cast<double>(j) / (m - 1), k);
        vhat_inv.row(k) *= std::pow(static_cast<double>(m - 1), k);
    }
    cond_ = norm1(vhat) * norm1(vhat_inv);
    if (ill_conditioned()) {
        std::clog << "bspf: warning: boundary stencil m=" << m << " is ill-conditioned (cond ~ " << cond_
                  << ")\n";
    }
}

Eigen::MatrixXd BoundaryStencil::vandermonde_left() const {
    Eigen::MatrixXd a(m_, m_);
    for (int j = 0; j < m_; ++j) {
        const double dx = grid_.point(j) - grid_.a();
        double term = 1.0;
        for (int k = 0; k < m_; ++k) {
            if (k > 0) term *= dx / k;
            a(j, k) = term;
        }
    }
    return a;
}

Eigen::MatrixXd BoundaryStencil::vandermonde_right() const {
    Eigen::MatrixXd a(m_, m_);
    const int N = grid_.size();
    for (int j = 0; j < m_; ++j) {
        const double dx = grid_.point(N - 1 - j) - grid_.b();
        double term = 1.0;
        for (int k = 0; k < m_; ++k) {
            if (k > 0) term *= dx / k;
            a(j, k) = term;
        }
    }
    return a;
}

BoundaryStencil build_stencil(const Grid& grid, int m) { return BoundaryStencil(grid, m); }

BoundaryData estimate_boundary_derivatives(const BoundaryStencil& stencil, std::span<const double> f, int p) {
    const int m = stencil.width();
    const int N = stencil.grid().size();
    if (p < 1 || p > m) throw Error(ErrorKind::invalid_config, "estimate requires 1 <= p <= m");
    if (static_cast<int>(f.size()) != N) throw Error(ErrorKind::dimension_mismatch, "field size differs from stencil grid");

    BoundaryData out;
    out.p = p;
    out.d.resize(2 * p);
    const auto& li = stencil.vandermonde_left_inv();
    const auto& ri = stencil.vandermonde_right_inv();
    // Rows k >= 1 annihilate constants, so the end sample is subtracted first;
    // constant data then gives exactly zero derivatives.
    const double fa = f.front();
    const double fb = f.back();
    out.d(0) = fa;
    out.d(p) = fb;
    for (int k = 1; k < p; ++k) {
        double left = 0.0;
        double right = 0.0;
        for (int j = 1; j < m; ++j) {
            left += li(k, j) * (f[static_cast<std::size_t>(j)] - fa);
            right += ri(k, j) * (f[static_cast<std::size_t>(N - 1 - j)] - fb);
        }
        out.d(k) = left;
        out.d(p + k) = right;
    }
    if (!out.d.allFinite()) throw Error(ErrorKind::non_finite_sample, "boundary derivative estimate is not finite");
    return out;
}

BoundaryData estimate_boundary_derivatives(const BoundaryStencil& stencil, const Field& f, int p) {
    return estimate_boundary_derivatives(stencil, f.span(), p);
}

BoundaryData apply_bc_overrides(BoundaryData data, std::span<const BcOverride> overrides) {
    for (const auto& ov : overrides) {
        if (ov.index < 0 || ov.index >= data.d.size()) {
            throw Error(ErrorKind::index_out_of_range, "boundary override index outside [0, 2p)");
        }
        data.d(ov.index) = ov.value;
        data.overrides.push_back(ov);
    }
    return data;
}

ConstraintMatrix build_constraint_matrix(const KnotVector& knots) {
    const int p = knots.degree();
    const int n = knots.n_basis();
    ConstraintMatrix out;
    out.c = Eigen::MatrixXd::Zero(2 * p, n);
    if (p == 0) return out;
    const Eigen::MatrixXd left = eval_basis(knots, knots.a(), p - 1);
    const Eigen::MatrixXd right = eval_basis(knots, knots.b(), p - 1);
    for (int k = 0; k < p; ++k) {
        out.c.row(k) = left.col(k).transpose();
        out.c.row(p + k) = right.col(k).transpose();
    }
    return out;
}

}  // namespace bspf
