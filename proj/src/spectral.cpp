#include "bspf/spectral.hpp"

#include "bspf/error.hpp"
#include "fftw_lock.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace bspf {

std::mutex& detail::fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct SpectralWorkspace::Plans {
    int n;
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_complex* work = nullptr;  // c2r overwrites its input
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;

    explicit Plans(int n_fft) : n(n_fft) {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        real = fftw_alloc_real(static_cast<std::size_t>(n));
        spec = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
        work = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
        r2c = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
        c2r = fftw_plan_dft_c2r_1d(n, work, real, FFTW_ESTIMATE);
    }
    ~Plans() {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(r2c);
        fftw_destroy_plan(c2r);
        fftw_free(real);
        fftw_free(spec);
        fftw_free(work);
    }
    Plans(const Plans&) = delete;
    Plans& operator=(const Plans&) = delete;
};

SpectralWorkspace::SpectralWorkspace(const Grid& grid, double filter_alpha, int filter_order)
    : grid_(grid), n_fft_(grid.size() - 1), alpha_(filter_alpha), order_(filter_order) {
    if (n_fft_ < 2) throw Error(ErrorKind::grid_too_small, "spectral workspace needs N >= 3");
    omega_.resize(static_cast<std::size_t>(n_fft_ / 2 + 1));
    for (std::size_t k = 0; k < omega_.size(); ++k) {
        omega_[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / grid_.length();
    }
    plans_ = std::make_unique<Plans>(n_fft_);
}

SpectralWorkspace::~SpectralWorkspace() = default;
SpectralWorkspace::SpectralWorkspace(SpectralWorkspace&&) noexcept = default;
SpectralWorkspace& SpectralWorkspace::operator=(SpectralWorkspace&&) noexcept = default;

SpectralWorkspace::SpectralWorkspace(const SpectralWorkspace& other)
    : grid_(other.grid_),
      n_fft_(other.n_fft_),
      alpha_(other.alpha_),
      order_(other.order_),
      omega_(other.omega_),
      plans_(std::make_unique<Plans>(other.n_fft_)) {}

SpectralWorkspace& SpectralWorkspace::operator=(const SpectralWorkspace& other) {
    if (this != &other) {
        SpectralWorkspace copy(other);
        *this = std::move(copy);
    }
    return *this;
}

double SpectralWorkspace::filter_factor(int k) const noexcept {
    const double kmax = n_fft_ / 2;
    return std::exp(-alpha_ * std::pow(k / kmax, order_));
}

void SpectralWorkspace::forward(std::span<const double> u) {
    if (static_cast<int>(u.size()) != n_fft_ + 1) {
        throw Error(ErrorKind::dimension_mismatch, "spectral input length differs from grid size");
    }
    std::copy(u.begin(), u.begin() + n_fft_, plans_->real);
    fftw_execute(plans_->r2c);
}

void SpectralWorkspace::backward(std::span<double> out) {
    if (static_cast<int>(out.size()) != n_fft_ + 1) {
        throw Error(ErrorKind::dimension_mismatch, "spectral output length differs from grid size");
    }
    std::copy_n(&plans_->spec[0][0], 2 * (n_fft_ / 2 + 1), &plans_->work[0][0]);
    fftw_execute(plans_->c2r);
    const double scale = 1.0 / n_fft_;
    for (int j = 0; j < n_fft_; ++j) out[static_cast<std::size_t>(j)] = plans_->real[j] * scale;
    out[static_cast<std::size_t>(n_fft_)] = out[0];
}

void SpectralWorkspace::derivative(std::span<const double> r, std::span<double> out) {
    forward(r);
    fftw_complex* s = plans_->spec;
    const int nk = n_fft_ / 2 + 1;
    for (int k = 0; k < nk; ++k) {
        const double w = omega_[static_cast<std::size_t>(k)];
        const double re = s[k][0];
        const double im = s[k][1];
        s[k][0] = -w * im;
        s[k][1] = w * re;
    }
    if (n_fft_ % 2 == 0) {
        s[n_fft_ / 2][0] = 0.0;
        s[n_fft_ / 2][1] = 0.0;
    }
    backward(out);
}

void SpectralWorkspace::antiderivative(std::span<const double> r, std::span<double> out) {
    forward(r);
    fftw_complex* s = plans_->spec;
    const double mean = s[0][0] / n_fft_;
    s[0][0] = 0.0;
    s[0][1] = 0.0;
    const int nk = n_fft_ / 2 + 1;
    for (int k = 1; k < nk; ++k) {
        // (re + i im) / (i w) = (im - i re) / w
        const double w = omega_[static_cast<std::size_t>(k)];
        const double re = s[k][0];
        const double im = s[k][1];
        s[k][0] = im / w;
        s[k][1] = -re / w;
    }
    if (n_fft_ % 2 == 0) {
        s[n_fft_ / 2][0] = 0.0;
        s[n_fft_ / 2][1] = 0.0;
    }
    backward(out);
    const double base = out[0];
    const double h = grid_.spacing();
    for (int j = 0; j <= n_fft_; ++j) {
        const double x_rel = j == n_fft_ ? grid_.length() : j * h;
        out[static_cast<std::size_t>(j)] += mean * x_rel - base;
    }
}

void SpectralWorkspace::filter(std::span<const double> u, std::span<double> out) {
    forward(u);
    fftw_complex* s = plans_->spec;
    const int nk = n_fft_ / 2 + 1;
    for (int k = 1; k < nk; ++k) {
        const double f = filter_factor(k);
        s[k][0] *= f;
        s[k][1] *= f;
    }
    backward(out);
}

void SpectralWorkspace::round_trip(std::span<const double> u, std::span<double> out) {
    forward(u);
    backward(out);
}

std::span<const std::complex<double>> SpectralWorkspace::last_spectrum() const {
    return {reinterpret_cast<const std::complex<double>*>(plans_->spec), static_cast<std::size_t>(n_fft_ / 2 + 1)};
}

namespace {

template <class Op>
Field apply_field(SpectralWorkspace& ws, const Field& in, Op op) {
    if (!(in.grid() == ws.grid())) throw Error(ErrorKind::dimension_mismatch, "field is not on the workspace grid");
    std::vector<double> out(static_cast<std::size_t>(in.size()));
    op(in.span(), std::span<double>(out));
    return Field(in.grid(), std::move(out));
}

}  // namespace

Field fourier_derivative(SpectralWorkspace& ws, const Field& r) {
    return apply_field(ws, r, [&](auto in, auto out) { ws.derivative(in, out); });
}

Field fourier_antiderivative(SpectralWorkspace& ws, const Field& r) {
    return apply_field(ws, r, [&](auto in, auto out) { ws.antiderivative(in, out); });
}

Field exponential_filter(SpectralWorkspace& ws, const Field& u) {
    return apply_field(ws, u, [&](auto in, auto out) { ws.filter(in, out); });
}

}  // namespace bspf
