#include <numeric>
#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace testing;

namespace {

std::mt19937 rng_for(unsigned salt) { return std::mt19937(property_seed * 2654435761u + salt); }

int pick(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
int pick_nonzero(std::mt19937& rng, int bound) {
    int v = pick(rng, 1, bound);
    return pick(rng, 0, 1) ? v : -v;
}

const Flag kOrigin{Point{1, 0, 0}, Line{0, 0, 1}};

Form homogenize(const Form& f) {
    int d = f.degree();
    Form out;
    for (const auto& [m, c] : f.terms()) out.add_term({d - m[1] - m[2], m[1], m[2]}, c);
    return out;
}

Form at_z1(const Form& f) {
    Form out;
    for (const auto& [m, c] : f.terms()) out.add_term({m[0], m[1], 0}, c);
    return out;
}

// Factors (z - p(y))^k - w^k y^e through (1:0:0); every branch there is a graph over y.
PlaneCurve random_curve(std::mt19937& rng) {
    Form y = var_y(), z = var_z();
    int nf = pick(rng, 1, 3);
    std::vector<std::pair<Form, int>> fs;
    Form shared = y.scaled(ExactScalar(pick(rng, -2, 2))) + (y * y).scaled(ExactScalar(pick(rng, -1, 1)));
    int total = 0;
    while (static_cast<int>(fs.size()) < nf) {
        int k = nf == 1 && pick(rng, 0, 2) == 0 ? 4 : pick(rng, 1, 2);
        int e = pick(rng, k + 1, k + 4);
        if (std::gcd(e, k) != 1) continue;
        Form p = pick(rng, 0, 1) ? shared : y.scaled(ExactScalar(pick(rng, -2, 2)));
        ExactScalar w(pick_nonzero(rng, 3));
        Form f = homogenize((z - p).pow(k) - y.pow(e).scaled(w.pow(k)));
        bool dup = false;
        for (const auto& [g, m] : fs) dup = dup || projectively_equal(g, f);
        if (dup || total + f.degree() > 14) continue;
        total += f.degree();
        fs.emplace_back(f, pick(rng, 0, 4) == 0 ? 2 : 1);
    }
    return PlaneCurve(fs);
}

// Tangent branch pairs z = p(y) +- w y^(e/2) sharing the truncation p.
PlaneCurve random_cusp_curve(std::mt19937& rng) {
    Form y = var_y(), z = var_z();
    Form p = (y * y).scaled(ExactScalar(pick_nonzero(rng, 2))) + y.pow(3).scaled(ExactScalar(pick(rng, -2, 2)));
    std::vector<std::pair<Form, int>> fs;
    int e = 2 * pick(rng, 2, 4) + 1;
    fs.emplace_back(homogenize((z - p).pow(2) - y.pow(e).scaled(ExactScalar(pick_nonzero(rng, 3)).pow(2))), 1);
    if (pick(rng, 0, 1)) fs.emplace_back(homogenize(z - p - y.pow(e - 1).scaled(ExactScalar(pick_nonzero(rng, 2)))), 1);
    return PlaneCurve(fs);
}

TPoly random_tpoly(std::mt19937& rng, int max_degree, bool unit) {
    std::vector<ExactScalar> c;
    int n = pick(rng, 0, max_degree);
    for (int k = 0; k <= n; ++k) c.push_back(ExactScalar(pick(rng, -3, 3)));
    if (unit) {
        if (c.empty()) c.push_back(ExactScalar(1));
        if (c[0].is_zero()) c[0] = ExactScalar(pick_nonzero(rng, 2));
    }
    return TPoly(c);
}

Mat3s constant_part(const Mat3t& m) {
    Mat3s out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out(i, j) = m(i, j).coeff(0);
    return out;
}

// A germ whose value at 0 is invertible.
Mat3t random_unit_germ(std::mt19937& rng) {
    for (;;) {
        Mat3t m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = random_tpoly(rng, 2, false);
        if (!constant_part(m).determinant().is_zero()) return m;
    }
}

MatrixGerm random_germ(std::mt19937& rng) {
    for (;;) {
        Mat3t m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = random_tpoly(rng, 3, false).shifted(i == j ? pick(rng, 0, 1) : pick(rng, 0, 3));
        if (!m.determinant().is_zero()) return MatrixGerm(m);
    }
}

bool proportional(const Form& a, const Form& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a.scaled(b.leading_coeff()) == b.scaled(a.leading_coeff());
}

ExactScalar binomial(const Rational& lambda, int k) {
    Rational out(1);
    for (int j = 0; j < k; ++j) {
        out *= (lambda - j) / (j + 1);
        out.canonicalize();
    }
    return ExactScalar(out);
}

struct Dominant {
    Rational order;
    Form term;
};

// Lowest t-term of z' - branch(y') with x' = 1, y' = t^a + t^b y, z' = r + s t^b y + t^c z.
Dominant branch_limit(const PuiseuxBranch& br, int a, int b, int c, const TPoly& r, const ExactScalar& s) {
    std::map<Rational, Form> by_order;
    for (int j = 0; j <= r.degree(); ++j) by_order[Rational(j)] += Form(r.coeff(j));
    by_order[Rational(b)] += var_y().scaled(s);
    by_order[Rational(c)] += var_z();
    for (const auto& [lambda, gamma] : br.terms) {
        for (int k = 0;; ++k) {
            Rational e = a * lambda + (b - a) * k;
            e.canonicalize();
            if (e > c) break;
            ExactScalar coef = gamma * binomial(lambda, k);
            if (!coef.is_zero()) by_order[e] -= var_y().pow(k).scaled(coef);
        }
    }
    for (const auto& [e, f] : by_order)
        if (!f.is_zero()) return {e, f};
    return {Rational(c), var_z()};
}

struct SideKey {
    LatticePoint start, end;
    int b, c, segments;
    friend bool operator==(const SideKey&, const SideKey&) = default;
};

std::vector<SideKey> keys(const NewtonPolygonData& np) {
    std::vector<SideKey> out;
    for (const auto& s : np.sides_in_range()) out.push_back({s.start, s.end, s.b, s.c, s.segments});
    return out;
}

Mat3s random_flag_fixing(std::mt19937& rng) {
    Mat3s m = Mat3s::Zero();
    for (int i = 0; i < 3; ++i) {
        m(i, i) = ExactScalar(pick_nonzero(rng, 3));
        for (int j = i + 1; j < 3; ++j) m(i, j) = ExactScalar(pick(rng, -3, 3));
    }
    return m;
}

struct Report {
    PlaneCurve curve;
    PncReport pnc;
};

std::vector<Report> reports() {
    static std::vector<Report> cache = [] {
        std::vector<Report> out;
        TowerContext c1, c2, c3;
        out.push_back({septic(), assemble_pnc(septic(), {pt(1, 0, 0), pt(0, 0, 1), pt(1, -4, -8), pt(823543, 87808, 12288)}, c1)});
        out.push_back({quintic(), assemble_pnc(quintic(), {}, c2)});
        out.push_back({nodal(), assemble_pnc(nodal(), {pt(1, 0, 0)}, c3)});
        std::mt19937 rng = rng_for(77);
        for (int k = 0; k < 4; ++k) {
            PlaneCurve c = random_curve(rng);
            TowerContext ctx;
            out.push_back({c, assemble_pnc(c, {pt(1, 0, 0)}, ctx)});
        }
        return out;
    }();
    return cache;
}

std::optional<Mat3t> diagonal_part(const MatrixGerm& g) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j && !g(i, j).is_zero()) return std::nullopt;
    return g.matrix();
}

}  // namespace

TEST_CASE("branch limits multiply to the flat limit") {
    std::mt19937 rng = rng_for(1);
    int checked = 0;
    while (checked < 24) {
        PlaneCurve c = random_curve(rng);
        int a = pick(rng, 1, 3), b = pick(rng, a + 1, a + 3), cc = pick(rng, b + 1, b + 4);
        TPoly r = TPoly(std::vector<ExactScalar>{0, ExactScalar(pick(rng, -2, 2)), ExactScalar(pick(rng, -2, 2))});
        ExactScalar s(pick(rng, -2, 2));
        Mat3t m = Mat3t::Zero();
        m(0, 0) = TPoly(ExactScalar(1));
        m(1, 0) = TPoly::monomial(ExactScalar(1), a);
        m(1, 1) = TPoly::monomial(ExactScalar(1), b);
        m(2, 0) = r;
        m(2, 1) = TPoly::monomial(s, b);
        m(2, 2) = TPoly::monomial(ExactScalar(1), cc);
        MatrixGerm g(m);

        TowerContext ctx;
        Rational precision = Rational(cc, a) + 1;
        precision.canonicalize();
        auto branches = puiseux_branches_local(c.factors(), precision, ctx);
        int expected = 0;
        for (const auto& [f, mult] : c.factors()) {
            int dz = 0;
            for (const auto& [mm, cf] : f.terms()) dz = std::max(dz, mm[2]);
            expected += mult * dz;
        }
        REQUIRE(static_cast<int>(branches.size()) == expected);

        Form product(ExactScalar(1));
        Rational order(0);
        for (const auto& br : branches) {
            REQUIRE(!br.swapped);
            Rational need(cc, a);
            need.canonicalize();
            CHECK(br.known_through(need));
            Dominant d = branch_limit(br, a, b, cc, r, s);
            product *= d.term;
            order += d.order;
        }
        order.canonicalize();
        FlatLimit fl = flat_limit(c, g);
        CHECK(order == Rational(fl.weight));
        CHECK(proportional(product, at_x1(fl.limit)));
        ++checked;
    }
}

TEST_CASE("flat limit is unchanged by reparametrization and right composition") {
    std::mt19937 rng = rng_for(2);
    std::vector<Form> probes = {septic().form(), quintic().form(), nodal().form(), form("x*y*z + y^3 + x^2*z")};
    std::vector<TPoly> shifts = {TPoly(std::vector<ExactScalar>{0, 1, 1}), TPoly(std::vector<ExactScalar>{0, 2, 3})};
    for (int n = 0; n < 10; ++n) {
        MatrixGerm g = random_germ(rng);
        Mat3t unit = random_unit_germ(rng);
        MatrixGerm right = g * MatrixGerm(unit);
        for (const Form& f : probes) {
            FlatLimit base = flat_limit(f, g);
            for (const auto& tu : shifts) {
                Mat3t m;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) m(i, j) = g(i, j).compose(tu);
                FlatLimit re = flat_limit(f, MatrixGerm(m));
                CHECK(re.weight == base.weight);
                CHECK(projectively_equal(re.limit, base.limit));
            }
            FlatLimit rc = flat_limit(f, right);
            CHECK(rc.weight == base.weight);
            CHECK(projectively_equal(rc.limit, substitute_linear(base.limit, constant_part(unit))));
        }
    }
}

TEST_CASE("standardize_germ contract on random U lambda V germs") {
    std::mt19937 rng = rng_for(3);
    std::vector<Form> probes = {septic().form(), quintic().form(), form("x*y*z + y^3 + x^2*z")};
    for (int n = 0; n < 24; ++n) {
        std::array<int, 3> e{pick(rng, 0, 3), pick(rng, 0, 5), pick(rng, 0, 7)};
        MatrixGerm g = MatrixGerm(random_unit_germ(rng)) * MatrixGerm::diagonal(e[0], e[1], e[2]) *
                       MatrixGerm(random_unit_germ(rng));
        Standardization s = standardize_germ(g);
        std::sort(e.begin(), e.end());
        CHECK(s.sigma.b - s.sigma.a == e[1] - e[0]);
        CHECK(s.sigma.c - s.sigma.a == e[2] - e[0]);
        MatrixGerm back = s.left * s.sigma.matrix() * s.right;
        for (const Form& f : probes) {
            FlatLimit l1 = flat_limit(f, g), l2 = flat_limit(f, back);
            CHECK(l1.weight == l2.weight);
            CHECK(projectively_equal(l1.limit, l2.limit));
        }
    }
}

TEST_CASE("sides in range survive flag-fixing coordinate changes") {
    std::mt19937 rng = rng_for(4);
    std::vector<std::pair<PlaneCurve, Flag>> cases = {
        {septic(), kOrigin},
        {septic(), Flag{pt(0, 0, 1), Line{1, 0, 0}}},
        {quintic(), kOrigin},
        {nodal(), kOrigin},
        {nodal(), Flag{pt(1, 0, 0), Line{0, 1, 0}}},
    };
    for (int k = 0; k < 4; ++k) cases.push_back({random_curve(rng), kOrigin});
    for (const auto& [c, flag] : cases) {
        NewtonPolygonData np = newton_polygon(c, flag);
        Form local = substitute_linear(c.form(), np.frame);
        for (int n = 0; n < 10; ++n) {
            Mat3s u = random_flag_fixing(rng);
            CHECK(keys(newton_polygon_local(substitute_linear(local, u))) == keys(np));
            if (same_point(flag.point, pt(1, 0, 0)) && flag.line == Line{0, 0, 1}) {
                std::vector<std::pair<Form, int>> moved;
                for (const auto& [f, m] : c.factors()) moved.emplace_back(substitute_linear(f, u), m);
                CHECK(keys(newton_polygon(PlaneCurve(moved), kOrigin)) == keys(np));
            }
        }
    }
}

TEST_CASE("every truncation has a = ell * h") {
    std::mt19937 rng = rng_for(5);
    std::vector<std::pair<PlaneCurve, Flag>> cases = {{septic(), kOrigin}, {quintic(), kOrigin}, {nodal(), kOrigin}};
    for (int k = 0; k < 10; ++k) cases.push_back({random_curve(rng), kOrigin});
    for (int k = 0; k < 20; ++k) cases.push_back({random_cusp_curve(rng), kOrigin});
    int seen = 0;
    for (const auto& [c, flag] : cases) {
        TowerContext ctx;
        auto br = puiseux_branches(c, flag, Rational(12), ctx);
        for (const auto& ch : characteristics(br))
            for (const auto& g : ch.groups) {
                if (g.truncation.empty()) continue;
                Truncation t = truncation_type(ch.value, g.truncation);
                CHECK(t.a == t.ell * t.h);
                ++seen;
            }
    }
    for (const auto& rep : reports())
        for (const auto& comp : rep.pnc.components)
            for (const auto& mk : comp.markings)
                if (comp.type == PncType::V) {
                    Truncation t = truncation_type(comp.detail.characteristic, mk.truncation);
                    CHECK(t.a == t.ell * t.h);
                    ++seen;
                }
    CHECK(seen >= 20);
}

TEST_CASE("marker weights recomputed from flat limits") {
    int iv = 0, v = 0;
    for (const auto& rep : reports()) {
        for (const auto& comp : rep.pnc.components) {
            for (const auto& mk : comp.markings) {
                FlatLimit fl = flat_limit(rep.curve, mk.germ);
                CHECK(fl.weight == mk.weight);
                CHECK(projectively_equal(fl.limit, mk.limit));
                if (comp.type == PncType::V) {
                    CHECK(Rational(fl.weight) == comp.detail.a * comp.detail.W);
                    ++v;
                }
                if (comp.type != PncType::IV) continue;
                MatrixGerm local = inverse3(mk.frame) * mk.germ * mk.frame;
                auto d = diagonal_part(local);
                REQUIRE(d.has_value());
                int b = (*d)(1, 1).valuation() - (*d)(0, 0).valuation();
                int c = (*d)(2, 2).valuation() - (*d)(0, 0).valuation();
                NewtonPolygonData np = newton_polygon_local(substitute_linear(rep.curve.form(), mk.frame));
                const PolygonSide* side = nullptr;
                for (const auto& s : np.sides)
                    if (s.b * c == s.c * b) side = &s;
                REQUIRE(side);
                int j0 = side->start.j, k0 = side->start.k, j1 = side->end.j, k1 = side->end.k;
                int S = side->segments;
                Rational cross(j1 * k0 - j0 * k1, S);
                cross.canonicalize();
                Rational area = Rational(j1 * k0 - j0 * k1, 2);
                area.canonicalize();
                Rational twice = 2 * area / S;
                twice.canonicalize();
                CHECK(Rational(fl.weight) == cross);
                CHECK(Rational(fl.weight) == twice);
                ++iv;
            }
        }
    }
    CHECK(iv >= 6);
    CHECK(v >= 2);
}

TEST_CASE("type V conic factors are pairwise quadritangent") {
    int pairs = 0, markers = 0;
    for (const auto& rep : reports()) {
        for (const auto& comp : rep.pnc.components) {
            if (comp.type != PncType::V) continue;
            TowerContext ctx;
            if (rep.curve.tower()) ctx = TowerContext(rep.curve.tower());
            std::vector<ExactScalar> candidates;
            for (const auto& zeta : nth_roots(ExactScalar(1), 4 * comp.detail.a, ctx))
                for (const auto& g : comp.detail.gamma) candidates.push_back(zeta * g);
            for (const auto& mk : comp.markings) {
                int g = static_cast<int>(comp.detail.gamma.size());
                Form Q = divide_exact(mk.frame_limit, var_x().pow(rep.curve.degree() - 2 * g));
                ExactScalar lead = Q.coeff({g, 0, g});
                REQUIRE(!lead.is_zero());
                ExactScalar alpha = Q.coeff({g - 1, 2, g - 1}) / (ExactScalar(g) * lead);
                ExactScalar beta = Q.coeff({g, 1, g - 1}) / (ExactScalar(g) * lead);
                Form u = var_x() * var_z() + var_y().pow(2).scaled(alpha) + (var_x() * var_y()).scaled(beta);
                TPoly P;
                for (const auto& [m, cf] : Q.terms())
                    if (m[1] == 0) P += TPoly::monomial(cf, m[2]);
                std::vector<std::pair<ExactScalar, int>> roots;
                int found = 0;
                for (const auto& w : candidates) {
                    bool dup = false;
                    for (const auto& [r0, m0] : roots) dup = dup || r0 == w;
                    if (dup) continue;
                    int mult = 0;
                    TPoly lin(std::vector<ExactScalar>{-w, 1}), quo, rem;
                    for (;;) {
                        divmod(P, lin, quo, rem);
                        if (!rem.is_zero()) break;
                        P = quo;
                        ++mult;
                    }
                    if (mult == 0) continue;
                    roots.emplace_back(w, mult);
                    found += mult;
                }
                REQUIRE(found == g);
                std::vector<Form> conics;
                Form product(lead);
                for (const auto& [w, mult] : roots) {
                    conics.push_back(u - var_x().pow(2).scaled(w));
                    product *= conics.back().pow(mult);
                }
                CHECK(product == Q);
                for (std::size_t i = 0; i < conics.size(); ++i)
                    for (std::size_t j = i + 1; j < conics.size(); ++j) {
                        TPoly res = resultant_y(at_z1(conics[i]), at_z1(conics[j]));
                        CHECK(!res.is_zero());
                        CHECK(res.degree() == 4);
                        CHECK(res.valuation() == 4);
                        ++pairs;
                    }
                ++markers;
            }
        }
    }
    CHECK(markers >= 3);
    CHECK(pairs >= 3);
}
