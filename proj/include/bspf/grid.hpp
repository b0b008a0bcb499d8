#pragma once

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bspf {

/// Uniform grid on [a, b] with both endpoints included:
/// x_j = a + j*dx, dx = (b - a) / (N - 1), j = 0..N-1.
class Grid {
public:
    Grid(double a, double b, int n_points);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    int size() const noexcept { return n_; }
    double spacing() const noexcept { return dx_; }
    double length() const noexcept { return b_ - a_; }

    /// Last point returns b exactly.
    double point(int j) const noexcept { return j == n_ - 1 ? b_ : a_ + j * dx_; }
    std::vector<double> points() const;

    /// Trapezoidal weights: dx/2 at both ends, dx elsewhere.
    std::vector<double> trapezoid_weights() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double a_;
    double b_;
    int n_;
    double dx_;
};

Grid make_grid(double a, double b, int n);

/// Analytic coordinate map xi = g(x) with g(a) = a, g(b) = b and g' > 0.
struct GridMap {
    std::function<double(double)> forward;
    std::function<double(double)> derivative;
    std::string label;
    double a = 0.0;
    double b = 1.0;

    /// Inverse by bisection; requires a <= xi <= b.
    double inverse(double xi, double tol = 1e-14) const;

    /// Mapped points g(x_j).
    std::vector<double> mapped_points(const Grid& grid) const;

    /// Throws non_monotone_map if g'(x_j) <= 0 for some grid point, or
    /// invalid_domain if the domain or endpoint fixing does not match.
    void validate_on(const Grid& grid) const;
};

GridMap make_identity_map(const Grid& grid);

/// Composite of tanh bumps g_raw(x) = x - sum_i s_i w_i tanh((x - c_i) / w_i),
/// renormalized by the affine map that restores g(a) = a, g(b) = b. Each bump
/// lowers g' near c_i, concentrating mapped points there. Strengths are in
/// [0, 1); the combined map must stay strictly increasing.
GridMap make_sigmoid_composite_map(const Grid& grid, std::span<const double> centers,
                                   std::span<const double> widths,
                                   std::span<const double> strengths);

/// Sampled values of a function on a grid.
class Field {
public:
    Field(Grid grid, std::vector<double> values);
    explicit Field(Grid grid);  // zeros

    const Grid& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::span<const double> span() const noexcept { return values_; }
    int size() const noexcept { return static_cast<int>(values_.size()); }
    double operator[](int j) const noexcept { return values_[static_cast<std::size_t>(j)]; }

    double max_abs() const noexcept;

private:
    Grid grid_;
    std::vector<double> values_;
};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Values on a tensor grid stored as (Ny x Nx): row i is y_i, column j is x_j.
class Field2D {
public:
    Field2D(Grid grid_x, Grid grid_y, RowMatrix values);
    Field2D(Grid grid_x, Grid grid_y);  // zeros

    const Grid& grid_x() const noexcept { return gx_; }
    const Grid& grid_y() const noexcept { return gy_; }
    const RowMatrix& values() const noexcept { return values_; }
    RowMatrix& values() noexcept { return values_; }
    int nx() const noexcept { return gx_.size(); }
    int ny() const noexcept { return gy_.size(); }

private:
    Grid gx_;
    Grid gy_;
    RowMatrix values_;
};

Field sample(const Grid& grid, const std::function<double(double)>& fn);
Field2D sample(const Grid& gx, const Grid& gy, const std::function<double(double, double)>& fn);

/// CSV with header `x,value`; values in scientific notation.
void write_csv(std::ostream& os, const Field& field);
/// Dense CSV: header `y\x,x_0,...`, then one row per y_i.
void write_csv(std::ostream& os, const Field2D& field);

}  // namespace bspf
