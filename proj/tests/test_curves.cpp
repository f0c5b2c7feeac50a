#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

using namespace testing;

namespace {

Mat3s random_matrix(std::mt19937& rng) {
    std::uniform_int_distribution<int> d(-3, 3);
    Mat3s m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = ExactScalar(d(rng));
    return m;
}

}  // namespace

TEST_CASE("substitute_linear examples") {
    CHECK(substitute_linear(form("x"), identity3<ExactScalar>()) == form("x"));
    Mat3s swap = mat({1, 0, 0, 0, 0, 1, 0, 1, 0});
    CHECK(substitute_linear(form("y^2 + x*z"), swap) == form("z^2 + x*y"));
    Mat3s kill_x = mat({0, 0, 0, 0, 1, 0, 0, 0, 1});
    Form g = substitute_linear(form("y^2 + x*z"), kill_x);
    CHECK(g == form("y^2"));
    for (const auto& [m, c] : g.terms()) CHECK(m[0] == 0);
}

TEST_CASE("substitute_linear composes") {
    std::mt19937 rng(11);
    Form f = form("x^3 - 2*x*y*z + y^2*z + 5*z^3");
    for (int k = 0; k < 10; ++k) {
        Mat3s a = random_matrix(rng), b = random_matrix(rng);
        Mat3s ab = a * b;
        CHECK(substitute_linear(f, ab) == substitute_linear(substitute_linear(f, a), b));
    }
}

TEST_CASE("curve construction") {
    PlaneCurve q = quintic();
    CHECK(q.degree() == 5);
    CHECK(q.form() == form("y*((y^2 + x*z)^2 - 4*x*y*z^2)"));
    CHECK(q.is_linear_factor(0));
    CHECK(!q.is_linear_factor(1));
    PlaneCurve dbl({{form("y^2 + x*z"), 2}});
    CHECK(dbl.degree() == 4);
    CHECK(dbl.form() == form("(y^2 + x*z)^2"));
    CHECK(error_kind([] { PlaneCurve({{form("x^2 + y"), 1}}); }) == "InvalidCurve");
}

TEST_CASE("tangent cones") {
    TowerContext ctx;
    auto tc = tangent_cone(quintic(), pt(0, 0, 1), ctx);
    CHECK(tc.multiplicity == 3);
    CHECK(projectively_equal(tc.cone, form("x*y*(x - 4*y)")));
    CHECK(tc.lines.size() == 3);

    auto tp = tangent_cone(quintic(), pt(1, 0, 0), ctx);
    CHECK(tp.multiplicity == 3);
    CHECK(projectively_equal(tp.cone, form("y*z^2")));
    REQUIRE(tp.lines.size() == 2);
    int total = 0;
    for (const auto& [l, m] : tp.lines) total += m;
    CHECK(total == 3);

    auto smooth = tangent_cone(curve({"z*x - y^2"}), pt(1, 0, 0), ctx);
    CHECK(smooth.multiplicity == 1);
    CHECK(projectively_equal(smooth.cone, form("z")));

    CHECK(error_kind([&] { tangent_cone(quintic(), pt(1, 2, 3), ctx); }) == "PointNotOnCurve");
}

TEST_CASE("multiplicity agrees with the partial-derivative oracle") {
    TowerContext ctx;
    std::vector<std::pair<PlaneCurve, Point>> cases = {
        {septic(), pt(1, 0, 0)},   {septic(), pt(0, 0, 1)}, {septic(), pt(1, -4, -8)}, {quintic(), pt(0, 0, 1)},
        {quintic(), pt(1, 0, 0)},  {nodal(), pt(1, 0, 0)},  {nodal(), pt(1, 1, 1)},    {curve({"x*z - y^2"}), pt(1, 0, 0)},
    };
    for (const auto& [c, p] : cases) {
        int m = oracle::multiplicity(c.form(), p);
        CHECK(tangent_cone(c, p, ctx).multiplicity == m);
        CHECK(multiplicity_at(c.form(), p) == m);
    }
}

TEST_CASE("flag normalizer") {
    CHECK(flag_normalizer(Flag{pt(1, 0, 0), Line{0, 0, 1}}) == identity3<ExactScalar>());
    Mat3s m = flag_normalizer(Flag{pt(0, 0, 1), Line{0, 1, 0}});
    CHECK(same_point(transform_point(m, pt(1, 0, 0)), pt(0, 0, 1)));
    CHECK(projectively_equal(substitute_linear(form("y"), m), form("z")));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK((m(i, j).is_zero() || m(i, j) == ExactScalar(1)));

    TowerContext ctx;
    Point r = pt(1, -4, -8);
    auto tc = tangent_cone(septic(), r, ctx);
    REQUIRE(tc.lines.size() == 2);
    for (const auto& [l, mult] : tc.lines) {
        Mat3s n = flag_normalizer(Flag{r, l});
        CHECK(rank3(n) == 3);
        CHECK(same_point(transform_point(n, pt(1, 0, 0)), r));
        CHECK(projectively_equal(substitute_linear(line_form(l), n), form("z")));
    }
    CHECK(error_kind([] { flag_normalizer(Flag{pt(1, 0, 0), Line{1, 0, 0}}); }) == "DegenerateFlag");
}

TEST_CASE("hessian flex test") {
    CHECK(hessian_flex_test(septic(), pt(823543, 87808, 12288)) == PointKind::Flex);
    CHECK(hessian_flex_test(septic(), pt(1, -4, -8)) == PointKind::Singular);
    PlaneCurve conic = curve({"y^2 + x*z"});
    CHECK(hessian_flex_test(conic, pt(1, 0, 0)) == PointKind::Smooth);
    CHECK(hessian_flex_test(conic, pt(0, 0, 1)) == PointKind::Smooth);
    CHECK(hessian_flex_test(conic, pt(-1, 1, 1)) == PointKind::Smooth);
    CHECK(error_kind([&] { hessian_flex_test(conic, pt(1, 1, 1)); }) == "PointNotOnCurve");
}

TEST_CASE("special point search on the septic") {
    auto pts = find_special_points(septic(), 1);
    auto has = [&](const Point& p, PointKind k) {
        for (const auto& s : pts)
            if (same_point(s.point, p) && s.kind == k) return true;
        return false;
    };
    CHECK(has(pt(1, 0, 0), PointKind::Singular));
    CHECK(has(pt(0, 0, 1), PointKind::Singular));
    CHECK(has(pt(1, -4, -8), PointKind::Singular));
    CHECK(has(pt(823543, 87808, 12288), PointKind::Flex));
}

TEST_CASE("univariate roots") {
    TowerContext ctx;
    TPoly p = parse_series("(t - 1)^2*(t + 3)*(t^2 + 1)", ctx);
    auto roots = find_roots(p, ctx);
    int total = 0;
    for (const auto& [r, m] : roots) {
        CHECK(p.eval(r).is_zero());
        total += m;
    }
    CHECK(total == 5);
    CHECK(rational_roots(parse_series("2*t^2 - 3*t + 1", ctx)).size() == 2);
}
