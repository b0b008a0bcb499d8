#pragma once

#include "bspf/grid.hpp"
#include "bspf/operators.hpp"
#include "bspf/swe.hpp"

#include <memory>
#include <span>
#include <vector>

namespace bspf {

/// Chebyshev-Gauss-Lobatto nodes mapped to [a, b] in descending order:
/// x_j = (a + b)/2 + (b - a)/2 cos(pi j / (N - 1)), so x_0 = b and x_{N-1} = a.
struct ChebyshevGrid {
    double a = -1.0;
    double b = 1.0;
    int n_points = 0;
    std::vector<double> points;
};

ChebyshevGrid make_chebyshev_grid(double a, double b, int n_points);

/// DCT-I based Chebyshev collocation derivative and antiderivative.
/// Holds one FFTW plan; not safe for concurrent use.
class ChebyshevWorkspace {
public:
    explicit ChebyshevWorkspace(ChebyshevGrid grid);
    ~ChebyshevWorkspace();
    ChebyshevWorkspace(const ChebyshevWorkspace& other);
    ChebyshevWorkspace& operator=(const ChebyshevWorkspace&) = delete;
    ChebyshevWorkspace(ChebyshevWorkspace&&) noexcept;
    ChebyshevWorkspace& operator=(ChebyshevWorkspace&&) noexcept;

    const ChebyshevGrid& grid() const noexcept { return grid_; }

    /// Chebyshev coefficients a_k with f = sum_k a_k T_k(xi).
    std::vector<double> coefficients(std::span<const double> f);
    void differentiate(std::span<const double> f, std::span<double> out);
    void antiderivative(std::span<const double> fprime, std::span<double> out, BoundaryValue bc);

private:
    struct Plan;
    void transform(std::span<double> buffer);

    ChebyshevGrid grid_;
    std::unique_ptr<Plan> plan_;
    std::vector<double> coeffs_;
};

std::vector<double> chebyshev_differentiate(const ChebyshevGrid& grid, std::span<const double> f);
std::vector<double> chebyshev_antiderivative(const ChebyshevGrid& grid, std::span<const double> fprime,
                                             BoundaryValue bc);

/// Cumulative composite Simpson antiderivative on a uniform grid. Even indices
/// use Simpson pairs from a; odd indices j >= 3 end with a 3/8 panel and j = 1
/// uses the four-point cubic rule, so every index is exact for cubics.
Field simpson_integrate(const Field& fprime, BoundaryValue bc);

/// Wall-bounded shallow-water right-hand side with centred second-order
/// differences; ghost values mirror eta, H and tangential flux evenly and the
/// normal flux oddly.
SweState fd_swe_rhs(const SweState& s, const RowMatrix& bathymetry, const SweParams& params);

/// dt sqrt(g max H) / min(dx, dy).
double fd_swe_cfl(const SweState& s, const RowMatrix& bathymetry, double dt, const SweParams& params);

/// Buffered RK4 stepper for the FD scheme on packed (eta, M, N) vectors; see flatten().
class FdSweStepper {
public:
    FdSweStepper(Grid gx, Grid gy, RowMatrix bathymetry, SweParams params);

    void rhs(std::span<const double> u, std::span<double> dudt);
    void step(std::span<double> u, double dt);
    double cfl(std::span<const double> u, double dt) const;
    /// Warns once per process on std::clog when cfl(u, dt) > 1.
    void check_cfl(std::span<const double> u, double dt) const;

private:
    Grid gx_;
    Grid gy_;
    RowMatrix h_;
    SweParams params_;
    std::vector<double> hh_, aa_, bb_, cc_, fric_;
    std::vector<double> k1_, k2_, k3_, k4_, y_;
};

/// One classical RK4 step of fd_swe_rhs. Warns on std::clog if the CFL number exceeds 1.
SweState fd_swe_step(const SweState& s, const RowMatrix& bathymetry, double dt, const SweParams& params);

}  // namespace bspf
