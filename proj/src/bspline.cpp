#include "bspf/bspline.hpp"

#include "bspf/error.hpp"

#include <algorithm>
#include <cmath>

namespace bspf {

KnotVector::KnotVector(int degree, std::vector<double> knots, std::optional<double> clustering_beta)
    : p_(degree), z_(std::move(knots)), beta_(clustering_beta) {
    if (p_ < 0) throw Error(ErrorKind::invalid_config, "degree must be non-negative");
    n_ = static_cast<int>(z_.size()) - p_ - 1;
    if (n_ < p_ + 1) throw Error(ErrorKind::insufficient_basis, "knot vector needs n >= p+1");
    for (std::size_t i = 1; i < z_.size(); ++i) {
        if (z_[i] < z_[i - 1]) throw Error(ErrorKind::invalid_config, "knots must be non-decreasing");
    }
    for (int i = 0; i <= p_; ++i) {
        if (z_[static_cast<std::size_t>(i)] != z_.front() ||
            z_[z_.size() - 1 - static_cast<std::size_t>(i)] != z_.back()) {
            throw Error(ErrorKind::invalid_config, "knot vector is not clamped");
        }
    }
    if (!(z_.back() > z_.front())) throw Error(ErrorKind::invalid_domain, "empty knot domain");
}

int KnotVector::find_span(double x) const {
    if (x < a() || x > b() || std::isnan(x)) {
        throw Error(ErrorKind::out_of_domain, "basis evaluation outside [a,b]");
    }
    if (x >= z_[static_cast<std::size_t>(n_)]) return n_ - 1;
    // Largest s with z_s <= x, restricted to [p, n-1].
    const auto it = std::upper_bound(z_.begin() + p_, z_.begin() + n_ + 1, x);
    return static_cast<int>(it - z_.begin()) - 1;
}

KnotVector KnotVector::elevated() const {
    std::vector<double> z;
    z.reserve(z_.size() + 2);
    z.push_back(z_.front());
    z.insert(z.end(), z_.begin(), z_.end());
    z.push_back(z_.back());
    return KnotVector(p_ + 1, std::move(z), beta_);
}

KnotVector build_knots(const Grid& grid, int degree, int n_basis, std::optional<double> beta) {
    if (degree < 1) throw Error(ErrorKind::invalid_config, "degree must be at least 1");
    if (n_basis < 2 * degree) {
        throw Error(ErrorKind::insufficient_basis, "n_basis must be at least 2*degree");
    }
    if (n_basis < degree + 1) throw Error(ErrorKind::insufficient_basis, "n_basis must exceed degree");
    const double a = grid.a();
    const double b = grid.b();
    const int n_interior = n_basis - degree - 1;
    const int segments = n_basis - degree;

    std::vector<double> z;
    z.reserve(static_cast<std::size_t>(n_basis + degree + 1));
    for (int i = 0; i <= degree; ++i) z.push_back(a);
    for (int i = 1; i <= n_interior; ++i) {
        const double u = static_cast<double>(i) / segments;
        double zeta = u;
        if (beta && *beta != 0.0) {

            const double s = 2.0 * u - 1.0;
            zeta = 0.5 * (std::tanh(*beta * s) / std::tanh(*beta) + 1.0);
        }
        z.push_back(a + (b - a) * zeta);
    }
    for (int i = 0; i <= degree; ++i) z.push_back(b);
    return KnotVector(degree, std::move(z), beta);
}

// Cox-de Boor triangle with derivatives (The NURBS Book, A2.3). On a span of
// positive width every divisor below is a positive knot difference, which is
// the zero-width-term-is-zero convention applied implicitly.
LocalBasis eval_basis_local(const KnotVector& knots, double x, int max_deriv) {
    const int p = knots.degree();
    if (max_deriv < 0 || max_deriv > p) {
        throw Error(ErrorKind::invalid_config, "derivative order must be in [0, p]");
    }
    const int span = knots.find_span(x);
    const auto& z = knots.knots();

    Eigen::MatrixXd ndu(p + 1, p + 1);
    std::vector<double> left(static_cast<std::size_t>(p + 1)), right(static_cast<std::size_t>(p + 1));
    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[static_cast<std::size_t>(j)] = x - z[static_cast<std::size_t>(span + 1 - j)];
        right[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(span + j)] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right[static_cast<std::size_t>(r + 1)] + left[static_cast<std::size_t>(j - r)];
            const double temp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right[static_cast<std::size_t>(r + 1)] * temp;
            saved = left[static_cast<std::size_t>(j - r)] * temp;
        }
        ndu(j, j) = saved;
    }

    LocalBasis out;
    out.span = span;
    out.ders = Eigen::MatrixXd::Zero(max_deriv + 1, p + 1);
    for (int j = 0; j <= p; ++j) out.ders(0, j) = ndu(j, p);
    // Clamped ends interpolate exactly; the recursion can be off by an ulp there.
    if (x == z.front() || x == z.back()) {
        out.ders.row(0).setZero();
        out.ders(0, x == z.front() ? 0 : p) = 1.0;
    }

    Eigen::MatrixXd a(2, p + 1);
    for (int r = 0; r <= p; ++r) {
        int s1 = 0;
        int s2 = 1;
        a.setZero();
        a(0, 0) = 1.0;
        for (int k = 1; k <= max_deriv; ++k) {
            double d = 0.0;
            const int rk = r - k;
            const int pk = p - k;
            if (r >= k) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                d = a(s2, 0) * ndu(rk, pk);
            }
            const int j1 = rk >= -1 ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                d += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
                d += a(s2, k) * ndu(r, pk);
            }
            out.ders(k, r) = d;
            std::swap(s1, s2);
        }
    }
    double factor = p;
    for (int k = 1; k <= max_deriv; ++k) {
        out.ders.row(k) *= factor;
        factor *= (p - k);
    }
    return out;
}

Eigen::MatrixXd eval_basis(const KnotVector& knots, double x, int max_deriv) {
    const LocalBasis local = eval_basis_local(knots, x, max_deriv);
    const int p = knots.degree();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(knots.n_basis(), max_deriv + 1);
    for (int r = 0; r <= p; ++r) {
        for (int k = 0; k <= max_deriv; ++k) out(local.span - p + r, k) = local.ders(k, r);
    }
    return out;
}

namespace {

Eigen::VectorXd antiderivative_on(const KnotVector& knots, const KnotVector& up, double x) {
    const int p = knots.degree();
    const int n = knots.n_basis();
    const LocalBasis local = eval_basis_local(up, x, 0);

    // Tail sums T_j = sum_{l >= j} Bhat_l(x) over the n+1 elevated functions.
    Eigen::VectorXd bhat = Eigen::VectorXd::Zero(n + 1);
    for (int r = 0; r <= p + 1; ++r) bhat(local.span - (p + 1) + r) = local.ders(0, r);
    Eigen::VectorXd out(n);
    double tail = 0.0;
    for (int i = n - 1; i >= 0; --i) {
        tail += bhat(i + 1);
        out(i) = (knots.knot(i + p + 1) - knots.knot(i)) / (p + 1) * tail;
    }
    return out;
}

}  // namespace

Eigen::VectorXd basis_antiderivative(const KnotVector& knots, double x) {
    return antiderivative_on(knots, knots.elevated(), x);
}

BsplineBasis::BsplineBasis(KnotVector knots, Grid grid)
    : knots_(std::move(knots)), elevated_(knots_.elevated()), grid_(grid) {
    if (std::abs(knots_.a() - grid_.a()) > 1e-12 * (1.0 + std::abs(grid_.a())) ||
        std::abs(knots_.b() - grid_.b()) > 1e-12 * (1.0 + std::abs(grid_.b()))) {
        throw Error(ErrorKind::invalid_domain, "knot span differs from grid domain");
    }
    const int n = knots_.n_basis();
    const int p = knots_.degree();
    const int N = grid_.size();
    design_ = Eigen::MatrixXd::Zero(n, N);
    design_d1_ = Eigen::MatrixXd::Zero(n, N);
    anti_ = Eigen::MatrixXd::Zero(n, N);
    first_.resize(static_cast<std::size_t>(N));
    band0_.resize(p + 1, N);
    band1_.resize(p + 1, N);

    for (int j = 0; j < N; ++j) {
        const double x = grid_.point(j);
        const LocalBasis local = eval_basis_local(knots_, x, std::min(1, p));
        const int first = local.span - p;
        first_[static_cast<std::size_t>(j)] = first;
        for (int r = 0; r <= p; ++r) {
            band0_(r, j) = local.ders(0, r);
            band1_(r, j) = p >= 1 ? local.ders(1, r) : 0.0;
            design_(first + r, j) = band0_(r, j);
            design_d1_(first + r, j) = band1_(r, j);
        }
        anti_.col(j) = antiderivative_on(knots_, elevated_, x);
    }
}

void BsplineBasis::evaluate(const Eigen::VectorXd& coeffs, int order, std::span<double> out) const {
    if (order != 0 && order != 1) throw Error(ErrorKind::invalid_config, "spline evaluation order must be 0 or 1");
    if (coeffs.size() != n_basis() || static_cast<int>(out.size()) != grid_.size()) {
        throw Error(ErrorKind::dimension_mismatch, "spline evaluation size mismatch");
    }
    const Eigen::MatrixXd& band = order == 0 ? band0_ : band1_;
    const int p = degree();
    for (int j = 0; j < grid_.size(); ++j) {
        const int first = first_[static_cast<std::size_t>(j)];
        double s = 0.0;
        for (int r = 0; r <= p; ++r) s += coeffs(first + r) * band(r, j);
        out[static_cast<std::size_t>(j)] = s;
    }
}

Eigen::VectorXd BsplineBasis::weighted_projection(std::span<const double> f, std::span<const double> w) const {
    const int p = degree();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_basis());
    for (int j = 0; j < grid_.size(); ++j) {
        const double fw = f[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(j)];
        const int first = first_[static_cast<std::size_t>(j)];
        for (int r = 0; r <= p; ++r) out(first + r) += band0_(r, j) * fw;
    }
    return out;
}

BsplineBasis build_design_matrices(const KnotVector& knots, const Grid& grid) {
    return BsplineBasis(knots, grid);
}

}  // namespace bspf
