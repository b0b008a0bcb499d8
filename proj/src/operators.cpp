#include "bspf/operators.hpp"

#include "bspf/error.hpp"

namespace bspf {

BspfOperator::BspfOperator(std::shared_ptr<const PeriodizationPlan> plan, std::optional<GridMap> map,
                           std::vector<BcOverride> bc_overrides, double filter_alpha, int filter_order)
    : plan_(std::move(plan)),
      ws_(plan_->grid(), filter_alpha, filter_order),
      map_(std::move(map)),
      overrides_(std::move(bc_overrides)) {
    const Grid& g = plan_->grid();
    gprime_.assign(static_cast<std::size_t>(g.size()), 1.0);
    if (map_) {
        map_->validate_on(g);
        for (int j = 0; j < g.size(); ++j) gprime_[static_cast<std::size_t>(j)] = map_->derivative(g.point(j));
    }
    for (const auto& ov : overrides_) {
        if (ov.index < 0 || ov.index >= 2 * plan_->degree()) {
            throw Error(ErrorKind::index_out_of_range, "operator override index outside [0, 2p)");
        }
    }
    scratch_a_.resize(static_cast<std::size_t>(g.size()));
    scratch_b_.resize(static_cast<std::size_t>(g.size()));
}

SplineCoefficients BspfOperator::solve(std::span<const double> f, std::span<const BcOverride> overrides) {
    const PeriodizationPlan& plan = *plan_;
    BoundaryData data = estimate_boundary_derivatives(plan.stencil(), f, plan.degree());
    if (!overrides_.empty()) data = apply_bc_overrides(std::move(data), overrides_);
    if (!overrides.empty()) data = apply_bc_overrides(std::move(data), overrides);
    return plan.solve(f, data, false);
}

Decomposition BspfOperator::decompose(std::span<const double> f, std::span<const BcOverride> overrides) {
    Decomposition out;
    out.coeffs = solve(f, overrides);
    out.spline.resize(f.size());
    out.residual.resize(f.size());
    plan_->basis().evaluate(out.coeffs.p_vec, 0, out.spline);
    for (std::size_t j = 0; j < f.size(); ++j) out.residual[j] = f[j] - out.spline[j];
    return out;
}

void BspfOperator::differentiate(std::span<const double> f, std::span<double> out,
                                 std::span<const BcOverride> overrides) {
    const std::size_t n = static_cast<std::size_t>(grid().size());
    if (f.size() != n || out.size() != n) throw Error(ErrorKind::dimension_mismatch, "operator input size");
    const SplineCoefficients c = solve(f, overrides);
    const auto& basis = plan_->basis();
    basis.evaluate(c.p_vec, 0, scratch_a_);
    for (std::size_t j = 0; j < n; ++j) scratch_a_[j] = f[j] - scratch_a_[j];
    ws_.derivative(scratch_a_, out);
    basis.evaluate(c.p_vec, 1, scratch_b_);
    for (std::size_t j = 0; j < n; ++j) out[j] += scratch_b_[j];
}

void BspfOperator::antiderivative(std::span<const double> fprime, std::span<double> out, BoundaryValue bc,
                                  std::span<const BcOverride> overrides) {
    const std::size_t n = static_cast<std::size_t>(grid().size());
    if (fprime.size() != n || out.size() != n) throw Error(ErrorKind::dimension_mismatch, "operator input size");
    const SplineCoefficients c = solve(fprime, overrides);
    const auto& basis = plan_->basis();
    basis.evaluate(c.p_vec, 0, scratch_a_);
    for (std::size_t j = 0; j < n; ++j) scratch_a_[j] = fprime[j] - scratch_a_[j];
    ws_.antiderivative(scratch_a_, out);
    const Eigen::VectorXd is = basis.antiderivative().transpose() * c.p_vec;
    for (std::size_t j = 0; j < n; ++j) out[j] += is(static_cast<Eigen::Index>(j));
    const double shift = bc.at == Endpoint::a ? bc.value - out[0] : bc.value - out[n - 1];
    for (std::size_t j = 0; j < n; ++j) out[j] += shift;
}

void BspfOperator::filter(std::span<const double> u, std::span<double> out, std::span<const BcOverride> overrides) {
    const std::size_t n = static_cast<std::size_t>(grid().size());
    if (u.size() != n || out.size() != n) throw Error(ErrorKind::dimension_mismatch, "operator input size");
    const SplineCoefficients c = solve(u, overrides);
    plan_->basis().evaluate(c.p_vec, 0, scratch_b_);
    for (std::size_t j = 0; j < n; ++j) scratch_a_[j] = u[j] - scratch_b_[j];
    ws_.filter(scratch_a_, out);
    for (std::size_t j = 0; j < n; ++j) out[j] += scratch_b_[j];
}

void BspfOperator::check_grid(const Field& f) const {
    if (!(f.grid() == grid())) throw Error(ErrorKind::dimension_mismatch, "field is not on the operator grid");
}

Field BspfOperator::differentiate(const Field& f, std::span<const BcOverride> overrides) {
    check_grid(f);
    std::vector<double> out(static_cast<std::size_t>(f.size()));
    differentiate(f.span(), out, overrides);
    return Field(f.grid(), std::move(out));
}

Field BspfOperator::antiderivative(const Field& fprime, BoundaryValue bc, std::span<const BcOverride> overrides) {
    check_grid(fprime);
    std::vector<double> out(static_cast<std::size_t>(fprime.size()));
    antiderivative(fprime.span(), out, bc, overrides);
    return Field(fprime.grid(), std::move(out));
}

Field BspfOperator::filter(const Field& u, std::span<const BcOverride> overrides) {
    check_grid(u);
    std::vector<double> out(static_cast<std::size_t>(u.size()));
    filter(u.span(), out, overrides);
    return Field(u.grid(), std::move(out));
}

Field BspfOperator::differentiate_mapped(const Field& f_on_mapped) {
    if (!map_) throw Error(ErrorKind::invalid_config, "operator has no grid map");
    check_grid(f_on_mapped);
    std::vector<double> out(static_cast<std::size_t>(f_on_mapped.size()));
    differentiate(f_on_mapped.span(), out);
    for (std::size_t j = 0; j < out.size(); ++j) {
        if (gprime_[j] == 0.0) throw Error(ErrorKind::non_monotone_map, "g' vanishes on the grid");
        out[j] /= gprime_[j];
    }
    return Field(f_on_mapped.grid(), std::move(out));
}

Field BspfOperator::antiderivative_mapped(const Field& f_on_mapped, BoundaryValue bc) {
    if (!map_) throw Error(ErrorKind::invalid_config, "operator has no grid map");
    check_grid(f_on_mapped);
    std::vector<double> integrand(static_cast<std::size_t>(f_on_mapped.size()));
    for (std::size_t j = 0; j < integrand.size(); ++j) integrand[j] = f_on_mapped.values()[j] * gprime_[j];
    std::vector<double> out(integrand.size());
    antiderivative(integrand, out, bc);
    return Field(f_on_mapped.grid(), std::move(out));
}

Field differentiate(BspfOperator& op, const Field& f) { return op.differentiate(f); }
Field antiderivative(BspfOperator& op, const Field& fprime, BoundaryValue bc) { return op.antiderivative(fprime, bc); }
Field differentiate_mapped(BspfOperator& op, const Field& f) { return op.differentiate_mapped(f); }
Field antiderivative_mapped(BspfOperator& op, const Field& f, BoundaryValue bc) {
    return op.antiderivative_mapped(f, bc);
}

void apply_along_axis(BspfOperator& op, const RowMatrix& u, RowMatrix& out, Axis axis, AxisOperation operation,
                      std::span<const BcOverride> overrides) {
    const Eigen::Index line_len = axis == Axis::x ? u.cols() : u.rows();
    const Eigen::Index n_lines = axis == Axis::x ? u.rows() : u.cols();
    if (line_len != op.grid().size()) throw Error(ErrorKind::dimension_mismatch, "operator grid differs from axis length");
    out.resize(u.rows(), u.cols());

    auto run = [&](std::span<const double> in, std::span<double> res) {
        if (operation == AxisOperation::differentiate) {
            op.differentiate(in, res, overrides);
        } else {
            op.filter(in, res, overrides);
        }
    };

    if (axis == Axis::x) {
        for (Eigen::Index i = 0; i < n_lines; ++i) {
            run(std::span<const double>(u.row(i).data(), static_cast<std::size_t>(line_len)),
                std::span<double>(out.row(i).data(), static_cast<std::size_t>(line_len)));
        }
    } else {
        std::vector<double> in(static_cast<std::size_t>(line_len));
        std::vector<double> res(static_cast<std::size_t>(line_len));
        for (Eigen::Index j = 0; j < n_lines; ++j) {
            for (Eigen::Index i = 0; i < line_len; ++i) in[static_cast<std::size_t>(i)] = u(i, j);
            run(in, res);
            for (Eigen::Index i = 0; i < line_len; ++i) out(i, j) = res[static_cast<std::size_t>(i)];
        }
    }
}

Field2D apply_along_axis(BspfOperator& op, const Field2D& u, Axis axis, AxisOperation operation,
                         std::span<const BcOverride> overrides) {
    const Grid& g = axis == Axis::x ? u.grid_x() : u.grid_y();
    if (!(g == op.grid())) throw Error(ErrorKind::dimension_mismatch, "operator grid differs from the chosen axis");
    RowMatrix out;
    apply_along_axis(op, u.values(), out, axis, operation, overrides);
    return Field2D(u.grid_x(), u.grid_y(), std::move(out));
}

}  // namespace bspf
