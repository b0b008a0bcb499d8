#include "bspf/grid.hpp"

#include "support.hpp"

#include <random>
#include <sstream>

using namespace bspf;
using testing::pi;

TEST_CASE("make_grid endpoints and spacing") {
    const Grid g = make_grid(0.0, 2.0 * pi, 3);
    CHECK(g.point(0) == 0.0);
    CHECK(g.point(1) == doctest::Approx(pi).epsilon(1e-15));
    CHECK(g.point(2) == 2.0 * pi);

    const Grid h = make_grid(0.0, 2.0 * pi, 2000);
    CHECK(h.spacing() == doctest::Approx(2.0 * pi / 1999.0).epsilon(1e-15));
    CHECK(h.point(1999) == 2.0 * pi);

    const Grid u = make_grid(-1.0, 1.0, 5);
    const std::vector<double> want{-1.0, -0.5, 0.0, 0.5, 1.0};
    CHECK(testing::max_abs_diff(u.points(), want) == 0.0);
}

TEST_CASE("make_grid rejects bad domains") {
    CHECK(testing::error_kind_of([] { make_grid(1.0, 1.0, 10); }) == ErrorKind::invalid_domain);
    CHECK(testing::error_kind_of([] { make_grid(2.0, 1.0, 10); }) == ErrorKind::invalid_domain);
    CHECK(testing::error_kind_of([] { make_grid(0.0, 1.0, 1); }) == ErrorKind::invalid_domain);
}

TEST_CASE("trapezoid weights") {
    const Grid g = make_grid(0.0, 1.0, 11);
    const auto w = g.trapezoid_weights();
    CHECK(w.front() == doctest::Approx(0.05));
    CHECK(w.back() == doctest::Approx(0.05));
    CHECK(w[5] == doctest::Approx(0.1));
    double s = 0;
    for (double v : w) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("identity map") {
    const Grid g = make_grid(0.0, 2.0 * pi, 50);
    const GridMap m = make_sigmoid_composite_map(g, {}, {}, {});
    for (double x : g.points()) {
        CHECK(m.forward(x) == x);
        CHECK(m.derivative(x) == 1.0);
    }
}

TEST_CASE("sigmoid composite map clusters and stays monotone") {
    const Grid g = make_grid(0.0, 2.0 * pi, 400);
    const std::vector<double> c{pi}, w{0.5}, s{0.7};
    const GridMap m = make_sigmoid_composite_map(g, c, w, s);
    CHECK(m.forward(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(m.forward(2.0 * pi) - 2.0 * pi) < 1e-12);

    double gmin = 1e300;
    for (int k = 0; k <= 4000; ++k) gmin = std::min(gmin, m.derivative(2.0 * pi * k / 4000.0));
    CHECK(gmin > 0.0);

    const auto xi = m.mapped_points(g);
    const double mid_spacing = xi[200] - xi[199];
    const double end_spacing = xi[1] - xi[0];
    CHECK(mid_spacing < 0.5 * end_spacing);
}

TEST_CASE("three-center map refines near all centers") {
    const Grid g = make_grid(0.0, 2.0 * pi, 800);
    const std::vector<double> c{0.0, pi, 2.0 * pi}, w{0.3, 1.0, 0.3}, s{0.6, 0.85, 0.6};
    const GridMap m = make_sigmoid_composite_map(g, c, w, s);
    const auto xi = m.mapped_points(g);
    std::vector<double> dxi(xi.size() - 1);
    for (std::size_t j = 0; j + 1 < xi.size(); ++j) dxi[j] = xi[j + 1] - xi[j];
    const double quarter = dxi[200];
    CHECK(dxi.front() < quarter);
    CHECK(dxi.back() < quarter);
    CHECK(std::min(dxi[399], dxi[400]) < quarter);
}

TEST_CASE("non-monotone map is rejected") {
    const Grid g = make_grid(0.0, 2.0 * pi, 100);
    const std::vector<double> c{pi}, w{0.5}, s{1.5};
    CHECK(testing::error_kind_of([&] { make_sigmoid_composite_map(g, c, w, s); }) == ErrorKind::non_monotone_map);
}

TEST_CASE("map inverse and derivative") {
    const Grid g = make_grid(0.0, 2.0 * pi, 300);
    const std::vector<double> c{0.0, pi, 2.0 * pi}, w{0.3, 0.6, 0.3}, s{0.6, 0.6, 0.6};
    const GridMap m = make_sigmoid_composite_map(g, c, w, s);
    for (double x : g.points()) CHECK(std::abs(m.inverse(m.forward(x)) - x) < 1e-10);
    for (int j = 1; j + 1 < g.size(); ++j) {
        const double x = g.point(j);
        const double fd = (m.forward(x + 1e-6) - m.forward(x - 1e-6)) / 2e-6;
        CHECK(std::abs(fd - m.derivative(x)) < 1e-6 * std::abs(m.derivative(x)));
    }
}

TEST_CASE("sample") {
    const Grid g = make_grid(0.0, 2.0 * pi, 5);
    const Field ones = sample(g, [](double) { return 1.0; });
    for (double v : ones.values()) CHECK(v == 1.0);

    const Field s = sample(g, [](double x) { return std::sin(x); });
    const std::vector<double> want{0.0, 1.0, 0.0, -1.0, 0.0};
    CHECK(testing::max_abs_diff(s.values(), want) < 1e-15);

    CHECK(testing::error_kind_of([&] { sample(g, [](double) { return std::nan(""); }); }) ==
          ErrorKind::non_finite_sample);
}

TEST_CASE("sample of the oscillatory test function matches pointwise evaluation") {
    const Grid g = make_grid(0.0, 2.0 * pi, 2000);
    auto f = [](double x) { return std::sin(x / (1.02 + std::cos(x))); };
    const Field s = sample(g, f);
    for (int j = 0; j < g.size(); ++j) CHECK(s[j] == f(g.point(j)));
}

TEST_CASE("field shape checks") {
    const Grid g = make_grid(0.0, 1.0, 4);
    CHECK(testing::error_kind_of([&] { Field(g, std::vector<double>(3, 0.0)); }) == ErrorKind::dimension_mismatch);
    CHECK(testing::error_kind_of([&] { Field2D(g, g, RowMatrix::Zero(3, 4)); }) == ErrorKind::dimension_mismatch);
}

TEST_CASE("csv output") {
    const Grid g = make_grid(0.0, 1.0, 3);
    std::ostringstream os;
    write_csv(os, sample(g, [](double x) { return 2.0 * x; }));
    const std::string s = os.str();
    CHECK(s.rfind("x,value\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 4);
    CHECK(s.find('e') != std::string::npos);
}
