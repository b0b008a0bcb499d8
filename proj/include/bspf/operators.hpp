#pragma once

#include "bspf/boundary.hpp"
#include "bspf/grid.hpp"
#include "bspf/periodizer.hpp"
#include "bspf/spectral.hpp"

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace bspf {

enum class Endpoint { a, b };

/// Value the antiderivative must take at one endpoint.
struct BoundaryValue {
    Endpoint at = Endpoint::a;
    double value = 0.0;
};

/// f = f_s + r on the plan grid.
struct Decomposition {
    SplineCoefficients coeffs;
    std::vector<double> spline;
    std::vector<double> residual;
};

/// BSPF operator: spline part handled analytically, periodic residual by FFT.
///   f'   = f_s' + F^{-1}[i w F(f - f_s)]
///   I[f] = I[f_s] + F^{-1}[F(f - f_s) / (i w)] + S
///
/// The plan is shared and immutable. The spectral workspace and scratch
/// buffers are owned, so one operator serves one worker; copies are
/// independent and cheap relative to plan construction.
class BspfOperator {
public:
    explicit BspfOperator(std::shared_ptr<const PeriodizationPlan> plan, std::optional<GridMap> map = {},
                          std::vector<BcOverride> bc_overrides = {}, double filter_alpha = 36.0,
                          int filter_order = 36);

    const PeriodizationPlan& plan() const noexcept { return *plan_; }
    std::shared_ptr<const PeriodizationPlan> shared_plan() const noexcept { return plan_; }
    const Grid& grid() const noexcept { return plan_->grid(); }
    SpectralWorkspace& workspace() noexcept { return ws_; }
    const std::optional<GridMap>& map() const noexcept { return map_; }
    const std::vector<BcOverride>& bc_overrides() const noexcept { return overrides_; }
    /// g'(x_j); all ones without a map.
    const std::vector<double>& map_derivative() const noexcept { return gprime_; }

    /// Per-call overrides are applied after the operator's own, so they win.
    Decomposition decompose(std::span<const double> f, std::span<const BcOverride> overrides = {});
    void differentiate(std::span<const double> f, std::span<double> out, std::span<const BcOverride> overrides = {});
    void antiderivative(std::span<const double> fprime, std::span<double> out, BoundaryValue bc,
                        std::span<const BcOverride> overrides = {});
    /// Exponential filter applied to the residual only; f_s passes through.
    void filter(std::span<const double> u, std::span<double> out, std::span<const BcOverride> overrides = {});

    Field differentiate(const Field& f, std::span<const BcOverride> overrides = {});
    Field antiderivative(const Field& fprime, BoundaryValue bc, std::span<const BcOverride> overrides = {});
    Field filter(const Field& u, std::span<const BcOverride> overrides = {});
    /// df/dxi at xi_j = g(x_j) from samples f(g(x_j)): F'(x_j) / g'(x_j).
    Field differentiate_mapped(const Field& f_on_mapped);
    /// int f dxi = int F g' dx + S, with bc given at the (fixed) endpoint.
    Field antiderivative_mapped(const Field& f_on_mapped, BoundaryValue bc);

private:
    SplineCoefficients solve(std::span<const double> f, std::span<const BcOverride> overrides);
    void check_grid(const Field& f) const;

    std::shared_ptr<const PeriodizationPlan> plan_;
    SpectralWorkspace ws_;
    std::optional<GridMap> map_;
    std::vector<BcOverride> overrides_;
    std::vector<double> gprime_;
    std::vector<double> scratch_a_;
    std::vector<double> scratch_b_;
};

Field differentiate(BspfOperator& op, const Field& f);
Field antiderivative(BspfOperator& op, const Field& fprime, BoundaryValue bc);
Field differentiate_mapped(BspfOperator& op, const Field& f_on_mapped);
Field antiderivative_mapped(BspfOperator& op, const Field& f_on_mapped, BoundaryValue bc);

enum class Axis { x, y };
enum class AxisOperation { differentiate, filter };

/// Applies the 1D operator independently to every row (axis x) or column
/// (axis y) of u. Identical to looping the 1D call.
Field2D apply_along_axis(BspfOperator& op, const Field2D& u, Axis axis,
                         AxisOperation operation = AxisOperation::differentiate,
                         std::span<const BcOverride> overrides = {});
void apply_along_axis(BspfOperator& op, const RowMatrix& u, RowMatrix& out, Axis axis, AxisOperation operation,
                      std::span<const BcOverride> overrides = {});

}  // namespace bspf
