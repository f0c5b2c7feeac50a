#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace testing;

namespace {

TruncH random_series(std::mt19937& rng, bool zero_constant) {
    std::uniform_int_distribution<int> d(-5, 5);
    TruncH h;
    for (int k = zero_constant ? 1 : 0; k <= TruncH::kOrder; ++k) h[k] = q(d(rng), 1 + std::abs(d(rng)));
    return h;
}

TruncH H(const std::vector<Rational>& c, int first) { return TruncH::from_coefficients(c, first); }

Rational line_curve_closed_form(int m1, int m2, int d2) {
    Rational D = d2, a = m1, b = m2;
    auto p = [&](int e) {
        Rational r(1);
        for (int k = 0; k < e; ++k) r *= D;
        return r;
    };
    return (D - 2) * D * b * b * b * b * b * b *
           (28 * (p(4) + 2 * p(3) + 4 * p(2) - 22 * D - 33) * a * a +
            8 * (p(5) + 2 * p(4) + 4 * p(3) + 8 * p(2) - 411 * D + 744) * a * b +
            (p(6) + 2 * p(5) + 4 * p(4) + 8 * p(3) - 1356 * p(2) + 5280 * D - 5319) * b * b);
}

}  // namespace

TEST_CASE("truncated ring axioms") {
    std::mt19937 rng(17);
    for (int k = 0; k < 30; ++k) {
        TruncH a = random_series(rng, false), b = random_series(rng, false), c = random_series(rng, false);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        TruncH u = random_series(rng, true), v = random_series(rng, true);
        CHECK((u + v).exp() == u.exp() * v.exp());
        CHECK(u.exp() * (-u).exp() == TruncH(1));
    }
    CHECK(error_kind([] { TruncH(1).exp(); }) == "NonzeroConstant");
}

TEST_CASE("contribution formulas") {
    CHECK(contribution_type_II(1, 7, 7) ==
          H({Rational(-7, 10), Rational(371, 180), Rational(-71, 30), Rational(49, 30)}, 5));
    CHECK(contribution_flex(1) == H({Rational(-1, 48), Rational(3, 70), Rational(-197, 4480)}, 6));
    CHECK(contribution_node(1, 1).scaled(2) == H({Rational(-1, 6), Rational(101, 280), Rational(-25, 64)}, 6));
    CHECK(contribution_raw({0, 0, 0, Rational(-577, 30), Rational(5779, 70), Rational(-6353, 35)}) ==
          H({Rational(-577, 30), Rational(5779, 70), Rational(-6353, 35)}, 6));
    CHECK(contribution_type_I(0, {1, 2}, 3).is_zero());
    CHECK(contribution_type_II(0, 3, 3).is_zero());

    for (int m1 = 1; m1 < 4; ++m1)
        for (int m2 = 1; m2 < 4; ++m2) {
            TruncH c = contribution_type_I(m1, {m2}, m1 + m2);
            CHECK(c[3] == q(-m1 * m1 * m1, 6));
            CHECK(c[4] == q(m1 * m1 * m1 * m1, 8));
            CHECK(c[5] == q(-m1 * m1 * m1 * m1 * m1, 20));
        }
}

TEST_CASE("two lines") {
    for (int m1 = 1; m1 < 5; ++m1)
        for (int m2 = 1; m2 < 5; ++m2) {
            int n = m1 + m2;
            TruncH app = app_assemble(n, {contribution_type_I(m1, {m2}, n), contribution_type_I(m2, {m1}, n)});
            TruncH want = H({1, m1, q(m1 * m1, 2)}, 0) * H({1, m2, q(m2 * m2, 2)}, 0);
            CHECK(app == want);
            OrbitDegree od = predegree_and_degree(app, 4, m1 == m2 ? 2 : 1);
            CHECK(od.predegree == 6 * m1 * m1 * m2 * m2);
            if (m1 == m2) CHECK(od.degree == 3 * m1 * m1 * m1 * m1);
        }
}

TEST_CASE("stars") {
    for (int d = 3; d < 8; ++d) {
        std::vector<TruncH> c;
        for (int k = 0; k < d; ++k) c.push_back(contribution_type_I(1, std::vector<int>(d - 1, 1), d));
        c.push_back(contribution_star_typeIII(d));
        TruncH app = app_assemble(d, c);
        OrbitDegree od = predegree_and_degree(app, 5, 1);
        CHECK(od.predegree == (d - 2) * (d - 1) * d * (d * d + 3 * d - 3));
        int A = d == 3 ? 6 : 4;
        CHECK(predegree_and_degree(app, 5, A).degree == q((d - 2) * (d - 1) * d * (d * d + 3 * d - 3), A));
    }
}

TEST_CASE("line and smooth curve closed form") {
    for (int d2 = 3; d2 < 7; ++d2)
        for (int m1 = 1; m1 < 4; ++m1)
            for (int m2 = 1; m2 < 3; ++m2) {
                int n = m1 + m2 * d2;
                std::vector<TruncH> c{contribution_type_I(m1, std::vector<int>(d2, m2), n), contribution_type_II(m2, d2, n)};
                for (int k = 0; k < 3 * d2 * (d2 - 2); ++k) c.push_back(contribution_flex(m2));
                for (int k = 0; k < d2; ++k) c.push_back(contribution_node(m1, m2));
                CHECK(predegree_and_degree(app_assemble(n, c), 8, 1).predegree == line_curve_closed_form(m1, m2, d2));
            }
}

TEST_CASE("septic degree") {
    std::vector<TruncH> c{
        contribution_type_II(1, 7, 7),
        contribution_flex(1),
        contribution_node(1, 1).scaled(2),
        contribution_raw({0, 0, 0, Rational(-577, 30), Rational(5779, 70), Rational(-6353, 35)}),
        contribution_raw({0, 0, 0, Rational(-3059, 240), Rational(2199, 40), Rational(-15775, 128)}),
    };
    TruncH app = app_assemble(7, c);
    CHECK(app[8] == Rational(145139, 13440));
    OrbitDegree od = predegree_and_degree(app, 8, 1);
    CHECK(od.predegree == 435417);
    CHECK(od.degree == 435417);
}

TEST_CASE("predegree errors") {
    TruncH app = app_assemble(2, {contribution_type_I(1, {1}, 2), contribution_type_I(1, {1}, 2)});
    CHECK(error_kind([&] { predegree_and_degree(app, 5, 1); }) == "ZeroLeadingCoefficient");
    CHECK(error_kind([&] { predegree_and_degree(app, 9, 1); }) == "InvalidDimension");
    CHECK(error_kind([&] { predegree_and_degree(TruncH::monomial(Rational(1, 7), 1), 1, 1); }) == "NonIntegralPredegree");
}

TEST_CASE("nodal curves from two smooth curves") {
    for (int d1 = 2; d1 < 6; ++d1)
        for (int d2 = d1; d2 < 7; ++d2) {
            int d = d1 + d2, n = d1 * d2;
            std::vector<TruncH> c{contribution_type_II(1, d1, d), contribution_type_II(1, d2, d)};
            for (int k = 0; k < 3 * d1 * (d1 - 2) + 3 * d2 * (d2 - 2); ++k) c.push_back(contribution_flex(1));
            for (int k = 0; k < n; ++k) c.push_back(contribution_node(1, 1).scaled(2));
            Integer D = d;
            Integer want = D * D * D * D * D * D * D * D - 1372 * D * D * D * D + 7992 * D * D * D - 15879 * D * D +
                           10638 * D - 24 * n * (35 * D * D - 174 * D + 213);
            CHECK(predegree_and_degree(app_assemble(d, c), 8, 1).predegree == want);
        }
}
