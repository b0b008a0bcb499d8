#include "bspf/experiments.hpp"
#include "bspf/operators.hpp"

#include "support.hpp"

#include <random>

using namespace bspf;
using testing::max_abs;
using testing::max_abs_diff;
using testing::pi;

namespace {

std::shared_ptr<const PeriodizationPlan> plan_for(const Grid& g, int p, int n, int m, std::optional<double> beta = {}) {
    return std::make_shared<const PeriodizationPlan>(build_plan(g, p, n, m, beta));
}

std::shared_ptr<const PeriodizationPlan> benchmark_plan(const Grid& g) { return plan_for(g, 11, 44, 16, 3.0); }

}  // namespace

TEST_CASE("derivative of constants and lines") {
    const Grid g = make_grid(0.0, 2.0 * pi, 400);
    BspfOperator op(benchmark_plan(g));
    CHECK(op.differentiate(sample(g, [](double) { return -3.25; })).max_abs() < 1e-10);
    const Field d = op.differentiate(sample(g, [](double x) { return x; }));
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(d[j] - 1.0) < 1e-8);
}

TEST_CASE("noisy benchmark function at N = 2000") {
    const Grid g = make_grid(0.0, 2.0 * pi, 2000);
    NoiseSpec ns;
    ns.seed = 1;
    const TestFunction tf = make_test_function(ns);
    BspfOperator op(benchmark_plan(g));
    const Field d = op.differentiate(sample(g, tf.f));
    double err = 0;
    for (int j = 0; j + 1 < g.size(); ++j) err = std::max(err, std::abs(d[j] - tf.df(g.point(j))));
    CHECK(err <= 1e-8);
}

TEST_CASE("derivative at the left end of the benchmark function") {
    // f = sin(x / (1.02 + cos x)) has f'(0) = 1/2.02
    const Grid g = make_grid(0.0, 2.0 * pi, 2000);
    BspfOperator op(benchmark_plan(g));
    const Field d = op.differentiate(sample(g, make_test_function().f));
    CHECK(std::abs(d[0] - 1.0 / 2.02) < 1e-10);
}

TEST_CASE("antiderivative examples") {
    const Grid g = make_grid(0.0, 2.0 * pi, 600);
    BspfOperator op(benchmark_plan(g));
    const Field z = op.antiderivative(Field(g), {Endpoint::a, 5.0});
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(z[j] - 5.0) < 1e-12);

    const Field s = op.antiderivative(sample(g, [](double x) { return std::cos(x); }), {Endpoint::a, 0.0});
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(s[j] - std::sin(g.point(j))) < 1e-9);

    const Field r = op.antiderivative(sample(g, [](double x) { return std::cos(x); }), {Endpoint::b, 2.0});
    CHECK(r[g.size() - 1] == doctest::Approx(2.0).epsilon(1e-14));
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(r[j] - (std::sin(g.point(j)) + 2.0)) < 1e-9);
}

TEST_CASE("antiderivative of the benchmark derivative converges") {
    const TestFunction tf = make_test_function();
    std::vector<double> errs;
    for (int n : {1000, 1500, 2000}) {
        const Grid g = make_grid(0.0, 2.0 * pi, n);
        BspfOperator op(benchmark_plan(g));
        const Field f = op.antiderivative(sample(g, tf.df), {Endpoint::a, tf.f(0.0)});
        double e = 0;
        for (int j = 0; j < n; ++j) e = std::max(e, std::abs(f[j] - tf.f(g.point(j))));
        errs.push_back(e);
    }
    CHECK(errs[1] < errs[0] / 5.0);
    CHECK(errs[2] < errs[1] / 5.0);
    CHECK(errs[2] < 1e-10);
}

TEST_CASE("differentiate then integrate recovers the function") {
    const Grid g = make_grid(-1.0, 2.0, 300);
    BspfOperator op(plan_for(g, 8, 32, 10));
    auto f = [](double x) { return std::exp(std::sin(x)) * std::cos(3 * x); };
    const Field u = sample(g, f);
    const Field back = op.antiderivative(op.differentiate(u), {Endpoint::a, u[0]});
    CHECK(max_abs_diff(back.values(), u.values()) < 1e-8);
}

TEST_CASE("linearity") {
    const Grid g = make_grid(0.0, 3.0, 257);
    BspfOperator op(plan_for(g, 8, 32, 10, 2.0));
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> f(257), h(257), c(257);
        for (auto& v : f) v = nd(rng);
        for (auto& v : h) v = nd(rng);
        const double al = nd(rng), be = nd(rng);
        for (int j = 0; j < 257; ++j) c[j] = al * f[j] + be * h[j];
        std::vector<double> df(257), dh(257), dc(257);
        op.differentiate(f, df);
        op.differentiate(h, dh);
        op.differentiate(c, dc);
        double scale = 0, diff = 0;
        for (int j = 0; j < 257; ++j) {
            const double rhs = al * df[j] + be * dh[j];
            scale = std::max(scale, std::abs(al * df[j]) + std::abs(be * dh[j]));
            diff = std::max(diff, std::abs(dc[j] - rhs));
        }
        CHECK(diff <= 1e-10 * scale);
    }
}

TEST_CASE("algebraic tail of the differentiation error") {
    // e^{sin x} cos 3x on [0, 3]: non-periodic, analytic
    auto f = [](double x) { return std::exp(std::sin(x)) * std::cos(3 * x); };
    auto df = [](double x) { return std::exp(std::sin(x)) * (std::cos(x) * std::cos(3 * x) - 3 * std::sin(3 * x)); };
    const int m = 6;
    std::vector<double> ns, errs;
    for (int n : {200, 283, 400, 566, 800}) {
        const Grid g = make_grid(0.0, 3.0, n);
        BspfOperator op(plan_for(g, 6, 12, m));
        const Field d = op.differentiate(sample(g, f));
        double e = 0;
        for (int j = 0; j < n; ++j) e = std::max(e, std::abs(d[j] - df(g.point(j))));
        ns.push_back(n);
        errs.push_back(e);
    }
    for (double e : errs) CHECK(e > 1e-12);
    CHECK(fitted_slope(ns, errs) == doctest::Approx(-(m - 1)).epsilon(1.0 / (m - 1)));
}

TEST_CASE("algebraic tail of the integration error") {
    auto f = [](double x) { return std::exp(std::sin(x)) * std::cos(3 * x); };
    auto df = [](double x) { return std::exp(std::sin(x)) * (std::cos(x) * std::cos(3 * x) - 3 * std::sin(3 * x)); };
    const int m = 4;
    std::vector<double> ns, errs;
    for (int n : {100, 141, 200, 283, 400}) {
        const Grid g = make_grid(0.0, 3.0, n);
        BspfOperator op(plan_for(g, 4, 8, m));
        const Field u = op.antiderivative(sample(g, df), {Endpoint::a, f(0.0)});
        double e = 0;
        for (int j = 0; j < n; ++j) e = std::max(e, std::abs(u[j] - f(g.point(j))));
        ns.push_back(n);
        errs.push_back(e);
    }
    for (double e : errs) CHECK(e > 1e-13);
    CHECK(fitted_slope(ns, errs) == doctest::Approx(-(m + 1)).epsilon(1.0 / (m + 1)));
}

TEST_CASE("operator overrides and per-call precedence") {
    const Grid g = make_grid(0.0, 1.0, 201);
    auto f = [](double x) { return std::sin(2 * x) + x * x; };
    BspfOperator plain(plan_for(g, 4, 12, 6));
    BspfOperator pinned(plain.shared_plan(), {}, {{1, 7.0}});
    const Field u = sample(g, f);
    const Decomposition a = plain.decompose(u.span());
    const Decomposition b = pinned.decompose(u.span());
    CHECK(a.spline != b.spline);
    const BcOverride own[1] = {{1, 7.0}};
    CHECK(plain.decompose(u.span(), own).spline == b.spline);
    // the per-call value wins over the stored one
    const BcOverride back[1] = {{1, 2.0}};
    const Decomposition c = pinned.decompose(u.span(), back);
    const BcOverride direct[1] = {{1, 2.0}};
    CHECK(plain.decompose(u.span(), direct).spline == c.spline);
}

TEST_CASE("decomposition sums to the input") {
    const Grid g = make_grid(0.0, 2.0, 150);
    BspfOperator op(plan_for(g, 5, 14, 7));
    const Field u = sample(g, [](double x) { return std::cosh(x) - 0.3 * x; });
    const Decomposition d = op.decompose(u.span());
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(d.spline[j] + d.residual[j] - u[j]) < 1e-13);
    CHECK(std::abs(d.residual.front()) < 1e-12);
    CHECK(std::abs(d.residual.back()) < 1e-12);
}

TEST_CASE("mapped operators with the identity map") {
    const Grid g = make_grid(0.0, 2.0 * pi, 500);
    auto plan = benchmark_plan(g);
    BspfOperator plain(plan);
    BspfOperator ident(plan, make_identity_map(g));
    const Field u = sample(g, make_test_function().f);
    CHECK(max_abs_diff(ident.differentiate_mapped(u).values(), plain.differentiate(u).values()) < 1e-12);
    CHECK(max_abs_diff(ident.antiderivative_mapped(u, {Endpoint::a, 1.0}).values(),
                       plain.antiderivative(u, {Endpoint::a, 1.0}).values()) < 1e-12);
}

TEST_CASE("mapped operators on polynomials") {
    const Grid g = make_grid(0.0, 2.0 * pi, 400);
    const double c[] = {pi}, w[] = {0.8}, s[] = {0.7};
    const GridMap map = make_sigmoid_composite_map(g, c, w, s);
    BspfOperator op(plan_for(g, 8, 32, 12), map);
    const std::vector<double> xi = map.mapped_points(g);
    std::vector<double> sq(xi.size()), one(xi.size(), 1.0);
    for (std::size_t j = 0; j < xi.size(); ++j) sq[j] = xi[j] * xi[j];
    const Field d = op.differentiate_mapped(Field(g, sq));
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(d[j] - 2.0 * xi[static_cast<std::size_t>(j)]) < 1e-7);

    const Field lin = op.antiderivative_mapped(Field(g, one), {Endpoint::a, 0.0});
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(lin[j] - xi[static_cast<std::size_t>(j)]) < 1e-8);

    std::vector<double> fv(xi.size());
    for (std::size_t j = 0; j < xi.size(); ++j) fv[j] = std::sin(xi[j]) + 0.5 * xi[j];
    const Field back = op.antiderivative_mapped(op.differentiate_mapped(Field(g, fv)), {Endpoint::a, fv[0]});
    CHECK(max_abs_diff(back.values(), fv) < 1e-7);
}

TEST_CASE("refinement map improves the benchmark derivative") {
    const Grid g = make_grid(0.0, 2.0 * pi, 800);
    const TestFunction tf = make_test_function();
    const std::vector<double> c{0.0, pi, 2.0 * pi}, w{0.3, 1.0, 0.3}, s{0.6, 0.85, 0.6};
    const GridMap map = make_sigmoid_composite_map(g, c, w, s);
    auto plan = benchmark_plan(g);
    BspfOperator mapped(plan, map);
    const std::vector<double> xi = map.mapped_points(g);
    std::vector<double> fv(xi.size());
    for (std::size_t j = 0; j < xi.size(); ++j) fv[j] = tf.f(xi[j]);
    const Field d = mapped.differentiate_mapped(Field(g, fv));
    double err = 0;
    for (int j = 0; j < g.size(); ++j) err = std::max(err, std::abs(d[j] - tf.df(xi[static_cast<std::size_t>(j)])));
    CHECK(err <= 1e-8);
}

TEST_CASE("mapped operator rejects a foreign map domain") {
    const Grid g = make_grid(0.0, 1.0, 100);
    GridMap bad = make_identity_map(make_grid(0.0, 2.0, 100));
    CHECK(testing::error_kind_of([&] { BspfOperator(plan_for(g, 3, 8, 4), bad); }) == ErrorKind::invalid_domain);
    BspfOperator op(plan_for(g, 3, 8, 4));
    CHECK(testing::error_kind_of([&] { op.differentiate_mapped(Field(g)); }) == ErrorKind::invalid_config);
    CHECK(testing::error_kind_of([&] { op.differentiate(Field(make_grid(0.0, 1.0, 99))); }) ==
          ErrorKind::dimension_mismatch);
}

TEST_CASE("apply along axis") {
    const Grid gx = make_grid(0.0, 2.0 * pi, 120);
    const Grid gy = make_grid(0.0, 1.0, 40);
    BspfOperator opx(plan_for(gx, 6, 20, 8));
    BspfOperator opy(plan_for(gy, 4, 10, 5));

    const Field2D s = sample(gx, gy, [](double x, double) { return std::sin(x); });
    const Field2D ds = apply_along_axis(opx, s, Axis::x);
    for (int i = 0; i < gy.size(); ++i)
        for (int j = 0; j < gx.size(); ++j) CHECK(std::abs(ds.values()(i, j) - std::cos(gx.point(j))) < 1e-8);

    const Field2D xy = sample(gx, gy, [](double x, double y) { return x * y; });
    const Field2D dy = apply_along_axis(opy, xy, Axis::y);
    for (int i = 0; i < gy.size(); ++i)
        for (int j = 0; j < gx.size(); ++j) CHECK(std::abs(dy.values()(i, j) - gx.point(j)) < 1e-10);

    // bit-for-bit equal to per-line calls
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    RowMatrix u(gy.size(), gx.size());
    for (Eigen::Index k = 0; k < u.size(); ++k) u.data()[k] = nd(rng);
    const BcOverride ov[1] = {{0, 0.0}};
    for (AxisOperation operation : {AxisOperation::differentiate, AxisOperation::filter}) {
        RowMatrix bx, by;
        apply_along_axis(opx, u, bx, Axis::x, operation, ov);
        apply_along_axis(opy, u, by, Axis::y, operation, ov);
        for (int i = 0; i < gy.size(); ++i) {
            std::vector<double> line(u.row(i).data(), u.row(i).data() + gx.size()), out(gx.size());
            if (operation == AxisOperation::differentiate) opx.differentiate(line, out, ov);
            else opx.filter(line, out, ov);
            for (int j = 0; j < gx.size(); ++j) CHECK(out[j] == bx(i, j));
        }
        for (int j = 0; j < gx.size(); ++j) {
            std::vector<double> line(gy.size()), out(gy.size());
            for (int i = 0; i < gy.size(); ++i) line[i] = u(i, j);
            if (operation == AxisOperation::differentiate) opy.differentiate(line, out, ov);
            else opy.filter(line, out, ov);
            for (int i = 0; i < gy.size(); ++i) CHECK(out[i] == by(i, j));
        }
    }

    CHECK(testing::error_kind_of([&] { apply_along_axis(opy, s, Axis::x); }) == ErrorKind::dimension_mismatch);
}

TEST_CASE("filter keeps smooth data and the spline part") {
    const Grid g = make_grid(0.0, 1.0, 301);
    BspfOperator op(plan_for(g, 6, 20, 8));
    const Field u = sample(g, [](double x) { return std::exp(x) * std::sin(5 * x); });
    CHECK(max_abs_diff(op.filter(u).values(), u.values()) < 1e-12);
    const Field lin = sample(g, [](double x) { return 2 - x; });
    CHECK(max_abs_diff(op.filter(lin).values(), lin.values()) < 1e-12);
}

TEST_CASE("operator copies are independent") {
    const Grid g = make_grid(0.0, 1.0, 64);
    BspfOperator a(plan_for(g, 4, 10, 5));
    BspfOperator b = a;
    const Field u = sample(g, [](double x) { return std::cos(4 * x); });
    CHECK(a.differentiate(u).values() == b.differentiate(u).values());
    CHECK(&a.plan() == &b.plan());
}
