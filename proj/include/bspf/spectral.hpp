#pragma once

#include "bspf/grid.hpp"

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace bspf {

/// Real FFT workspace for one period of a grid field.
///
/// The grid holds N points including both endpoints, so the transform runs on
/// the first N-1 samples with period L = b - a. After every operation the
/// value at index N-1 is the periodic image of index 0 (plus the mean ramp for
/// the antiderivative). Not safe for concurrent use; copies own fresh plans.
class SpectralWorkspace {
public:
    explicit SpectralWorkspace(const Grid& grid, double filter_alpha = 36.0, int filter_order = 36);
    ~SpectralWorkspace();
    SpectralWorkspace(const SpectralWorkspace& other);
    SpectralWorkspace& operator=(const SpectralWorkspace& other);
    SpectralWorkspace(SpectralWorkspace&&) noexcept;
    SpectralWorkspace& operator=(SpectralWorkspace&&) noexcept;

    const Grid& grid() const noexcept { return grid_; }
    int n_fft() const noexcept { return n_fft_; }
    double period() const noexcept { return grid_.length(); }
    /// omega_k = 2 pi k / L for k = 0..n_fft/2.
    const std::vector<double>& omega() const noexcept { return omega_; }
    double filter_alpha() const noexcept { return alpha_; }
    int filter_order() const noexcept { return order_; }
    /// exp(-alpha (k / k_max)^s), k_max = n_fft / 2.
    double filter_factor(int k) const noexcept;

    /// Spectral derivative; Nyquist mode dropped.
    void derivative(std::span<const double> r, std::span<double> out);
    /// Antiderivative: 1/(i omega) on k > 0, zero mode added back as mean*(x - a),
    /// normalized to 0 at x = a.
    void antiderivative(std::span<const double> r, std::span<double> out);
    void filter(std::span<const double> u, std::span<double> out);
    /// Forward then inverse transform with no multiplier.
    void round_trip(std::span<const double> u, std::span<double> out);

    /// Unnormalized coefficients (length n_fft/2 + 1) after the last call, including any
    /// derivative or filter scaling already applied to them.
    std::span<const std::complex<double>> last_spectrum() const;

private:
    struct Plans;

    void forward(std::span<const double> u);
    void backward(std::span<double> out);

    Grid grid_;
    int n_fft_;
    double alpha_;
    int order_;
    std::vector<double> omega_;
    std::unique_ptr<Plans> plans_;
};

Field fourier_derivative(SpectralWorkspace& ws, const Field& r);
Field fourier_antiderivative(SpectralWorkspace& ws, const Field& r);
Field exponential_filter(SpectralWorkspace& ws, const Field& u);

}  // namespace bspf
