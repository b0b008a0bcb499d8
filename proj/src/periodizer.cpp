#include "bspf/periodizer.hpp"

#include "bspf/error.hpp"

#include <cmath>
#include <algorithm>

namespace bspf {

namespace {

// Row k gives the coefficient k places in from a clamped end (end = 0 for a,
// n for b) as a combination of the derivatives there: the polar form of
// sum_i d_i (x - e)^i / i! at the k interior knots nearest the end,
// e_i(t - e) / (i! C(p, i)).
Eigen::MatrixXd polar_form_matrix(const std::vector<double>& z, int p, int end) {
    const bool left = end == 0;
    const long double e = left ? z.front() : z.back();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, p);
    std::vector<long double> sym(static_cast<std::size_t>(p) + 1, 0.0L);
    sym[0] = 1.0L;
    long double binom = 1.0L;  // C(p, i), i = k below
    std::vector<long double> scale(static_cast<std::size_t>(p));
    long double fact = 1.0L;
    for (int i = 0; i < p; ++i) {
        if (i > 0) {
            fact *= i;
            binom = binom * (p - i + 1) / i;
        }
        scale[static_cast<std::size_t>(i)] = 1.0L / (fact * binom);
    }
    for (int k = 0; k < p; ++k) {
        if (k > 0) {
            const std::size_t idx = left ? static_cast<std::size_t>(p + k) : static_cast<std::size_t>(end - k);
            const long double t = static_cast<long double>(z[idx]) - e;
            for (int i = k; i >= 1; --i) sym[static_cast<std::size_t>(i)] += t * sym[static_cast<std::size_t>(i - 1)];
        }
        for (int i = 0; i <= k; ++i) {
            out(k, i) = static_cast<double>(sym[static_cast<std::size_t>(i)] * scale[static_cast<std::size_t>(i)]);
        }
    }
    return out;
}

}  // namespace

PeriodizationPlan::PeriodizationPlan(const Grid& grid, int p, int n, int m, std::optional<double> beta,
                                     double lambda)
    : basis_(build_knots(grid, p, n, beta), grid),
      stencil_(grid, m),
      constraint_(build_constraint_matrix(basis_.knots())),
      mode_(n == 2 * p ? PlanMode::determined : PlanMode::regularized),
      lambda_(lambda),
      weights_(grid.trapezoid_weights()) {
    if (m < p) throw Error(ErrorKind::invalid_config, "stencil width m must be at least p");
    if (!(lambda >= 0.0)) throw Error(ErrorKind::invalid_config, "lambda must be non-negative");

    const Eigen::MatrixXd& c = constraint_.c;
    row_scale_.resize(2 * p);
    for (int k = 0; k < 2 * p; ++k) {
        const double mx = c.row(k).cwiseAbs().maxCoeff();
        if (!(mx > 0.0)) throw Error(ErrorKind::singular_kkt, "constraint row vanishes");
        row_scale_(k) = 1.0 / mx;
    }
    // Derivatives 0..p-1 at a only touch B_0..B_{p-1}, those at b only
    // B_{n-p}..B_{n-1}; since n >= 2p the two blocks are disjoint. At a clamped
    // end B_j^{(k)} vanishes for j > k, so each block is triangular (the right
    // one after reversing its columns) and is solved by substitution.
    left_tri_ = row_scale_.head(p).asDiagonal() * c.block(0, 0, p, p);
    right_tri_ = row_scale_.tail(p).asDiagonal() * c.block(p, n - p, p, p).rowwise().reverse();
    rcond_ = 1.0;
    for (const Eigen::MatrixXd* t : {&left_tri_, &right_tri_}) {
        const double upper = t->triangularView<Eigen::StrictlyUpper>().toDenseMatrix().cwiseAbs().maxCoeff();
        if (upper > 1e-12) throw Error(ErrorKind::singular_kkt, "end constraint block is not triangular");
        const Eigen::VectorXd diag = t->diagonal().cwiseAbs();
        rcond_ = std::min(rcond_, diag.minCoeff() / diag.maxCoeff());
    }
    // Substitution through these blocks cancels entries of size ~h^-p. The
    // coefficients they determine are the polar form of the end Taylor
    // polynomial instead, which is evaluated directly.
    const std::vector<double>& z = basis_.knots().knots();
    left_polar_ = polar_form_matrix(z, p, 0);
    right_polar_ = polar_form_matrix(z, p, n);

    const int ni = n - 2 * p;
    if (ni > 0) {
        const Eigen::MatrixXd& dm = basis_.design();
        const Eigen::Map<const Eigen::VectorXd> w(weights_.data(), static_cast<Eigen::Index>(weights_.size()));
        const auto mid = dm.middleRows(p, ni);
        Eigen::MatrixXd gram = mid * w.asDiagonal() * mid.transpose();
        gram.diagonal().array() += lambda_;
        gram_.compute(gram);
        if (gram_.info() != Eigen::Success) throw Error(ErrorKind::singular_kkt, "interior Gram matrix is not positive definite");
        rcond_ = std::min(rcond_, gram_.rcond());
    }
    if (!(rcond_ > 0.0) || !left_tri_.allFinite() || !right_tri_.allFinite()) {
        throw Error(ErrorKind::singular_kkt, "spline system is numerically singular");
    }
}

SplineCoefficients PeriodizationPlan::solve(std::span<const double> f, const BoundaryData& data,
                                            bool with_multipliers) const {
    const int p = degree();
    const int n = n_basis();
    const int ni = n - 2 * p;
    if (data.d.size() != 2 * p) throw Error(ErrorKind::dimension_mismatch, "boundary data length differs from 2p");
    if (static_cast<int>(f.size()) != grid().size()) throw Error(ErrorKind::dimension_mismatch, "sample length differs from N");
    // Constants are exact in the spline space (all P_i equal), so the value at a
    // is taken out first; the derivative rows of C then carry no offset.
    const double shift = data.d(0);
    Eigen::VectorXd d = data.d;
    d(0) -= shift;
    d(p) -= shift;

    SplineCoefficients out;
    out.p_vec = Eigen::VectorXd::Zero(n);
    out.p_vec.head(p) = left_polar_ * d.head(p);
    out.p_vec.tail(p) = (right_polar_ * d.tail(p)).reverse();

    std::vector<double> r;
    if (mode_ == PlanMode::regularized) {
        r.resize(f.size());
        basis_.evaluate(out.p_vec, 0, r);
        for (std::size_t j = 0; j < r.size(); ++j) r[j] = (f[j] - shift) - r[j];
        Eigen::VectorXd proj = basis_.weighted_projection(r, weights_);
        // the ridge term penalizes P itself, including the removed constant
        if (lambda_ > 0.0) proj.segment(p, ni).array() -= lambda_ * shift;
        out.p_vec.segment(p, ni) = gram_.solve(proj.segment(p, ni));
    }
    out.p_vec.array() += shift;
    if (mode_ == PlanMode::regularized && with_multipliers) {
        // Stationarity 2(Q + lambda I)P - 2DWf = C^T mu, read off the boundary columns.
        basis_.evaluate(out.p_vec, 0, r);
        for (std::size_t j = 0; j < r.size(); ++j) r[j] -= f[j];
        const Eigen::VectorXd g = 2.0 * (basis_.weighted_projection(r, weights_) + lambda_ * out.p_vec);
        Eigen::VectorXd mu(2 * p);
        mu.head(p) = left_tri_.triangularView<Eigen::Lower>().transpose().solve(g.head(p));
        mu.tail(p) = right_tri_.triangularView<Eigen::Lower>().transpose().solve(Eigen::VectorXd(g.tail(p).reverse()));
        out.multipliers = row_scale_.cwiseProduct(mu);
    }
    if (!out.p_vec.allFinite()) throw Error(ErrorKind::solver_failure, "spline coefficients are not finite");
    return out;
}

PeriodizationPlan build_plan(const Grid& grid, int p, int n, int m, std::optional<double> beta, double lambda) {
    if (n < 2 * p) throw Error(ErrorKind::insufficient_basis, "n must be at least 2p");
    if (m < p) throw Error(ErrorKind::invalid_config, "m must be at least p");
    if (m > grid.size()) throw Error(ErrorKind::invalid_config, "m must not exceed N");
    return PeriodizationPlan(grid, p, n, m, beta, lambda);
}

SplineCoefficients solve_coefficients(const PeriodizationPlan& plan, std::span<const double> f,
                                      std::span<const BcOverride> overrides) {
    BoundaryData data = estimate_boundary_derivatives(plan.stencil(), f, plan.degree());
    if (!overrides.empty()) data = apply_bc_overrides(std::move(data), overrides);
    return plan.solve(f, data);
}

SplineCoefficients solve_coefficients(const PeriodizationPlan& plan, const Field& f,
                                      std::span<const BcOverride> overrides) {
    if (!(f.grid() == plan.grid())) throw Error(ErrorKind::dimension_mismatch, "field is not on the plan grid");
    return solve_coefficients(plan, f.span(), overrides);
}

Field evaluate_spline(const PeriodizationPlan& plan, const SplineCoefficients& coeffs, int deriv_order) {
    std::vector<double> out(static_cast<std::size_t>(plan.grid().size()));
    plan.basis().evaluate(coeffs.p_vec, deriv_order, out);
    return Field(plan.grid(), std::move(out));
}

Field spline_antiderivative(const PeriodizationPlan& plan, const SplineCoefficients& coeffs) {
    const Eigen::VectorXd v = plan.basis().antiderivative().transpose() * coeffs.p_vec;
    return Field(plan.grid(), std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace bspf
