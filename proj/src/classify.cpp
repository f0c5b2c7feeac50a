#include <algorithm>

#include "curveorbit/germs.hpp"
#include "curveorbit/log.hpp"

namespace curveorbit {

namespace {

Point column(const Mat3s& m, int j) { return Point{m(0, j), m(1, j), m(2, j)}; }

bool is_zero_point(const Point& p) { return p[0].is_zero() && p[1].is_zero() && p[2].is_zero(); }

GermClass verdict(GermVerdict v, std::string detail) {
    GermClass out;
    out.verdict = v;
    out.detail = std::move(detail);
    return out;
}

bool has_slope(const Form& local, int b, int c) {
    NewtonPolygonData np = newton_polygon_local(local);
    for (const auto& s : np.sides_in_range())
        if (static_cast<long>(s.b) * c == static_cast<long>(s.c) * b) return true;
    return false;
}

}  // namespace

GermClass classify_germ(const PlaneCurve& curve, const MatrixGerm& g, TowerContext& ctx) {
    const Mat3s& c0 = g.center();
    int rank = g.center_rank();
    if (rank == 3) throw DomainError("InvalidGerm", "center is invertible");
    if (rank == 2) {
        Point u, v;
        bool have_u = false;
        for (int j = 0; j < 3; ++j) {
            Point col = column(c0, j);
            if (is_zero_point(col)) continue;
            if (!have_u) {
                u = col;
                have_u = true;
            } else if (!is_zero_point(cross(u, col))) {
                v = col;
                break;
            }
        }
        Line image = normalize_point(cross(u, v));
        for (std::size_t k = 0; k < curve.factors().size(); ++k)
            if (curve.is_linear_factor(k) && projectively_equal(curve.factors()[k].first, line_form(image))) {
                GermClass out = verdict(GermVerdict::TypeI, "image of the center is a line of the curve");
                out.line = image;
                return out;
            }
        return verdict(GermVerdict::RankTwoLimit, "rank-2 center; the limit is a star");
    }

    Point p;
    for (int j = 0; j < 3; ++j)
        if (!is_zero_point(column(c0, j))) {
            p = normalize_point(column(c0, j));
            break;
        }
    if (!curve.form().eval(p).is_zero())
        return verdict(GermVerdict::DegenerateLimit, "image of the center is off the curve; the limit is a multiple line");

    Standardization st = standardize_germ(g);
    const StandardGerm& sg = st.sigma;
    int b = sg.b - sg.a, c = sg.c - sg.a;
    Mat3s qinv = inverse3(st.left);
    Line flag_line = normalize_point(Point{qinv(2, 0), qinv(2, 1), qinv(2, 2)});
    Form local = substitute_linear(curve.form(), st.left);

    GermClass out;
    out.point = p;
    out.line = flag_line;
    out.b = b;
    out.c = c;
    if (sg.q.is_zero() && sg.r.is_zero() && sg.s.is_zero()) {
        if (b == c) {
            out.verdict = GermVerdict::Type1PS;
            out.equal_weights = true;
            out.detail = "equal weights";
            return out;
        }
        if (has_slope(local, b, c)) {
            out.verdict = GermVerdict::Type1PS;
            out.detail = "one-parameter subgroup along a polygon side";
        } else {
            out.verdict = GermVerdict::RankTwoLimit;
            out.detail = "-b/c is not a slope of the polygon";
        }
        return out;
    }
    if (sg.q.is_zero()) return verdict(GermVerdict::RankTwoLimit, "q vanishes");
    if (b == c) return verdict(GermVerdict::RankTwoLimit, "b equals c");

    int alpha = sg.q.valuation();
    ExactScalar lc = sg.q.coeff(alpha);
    ExactScalar rho = nth_roots(lc, alpha, ctx).front();
    int n = c + 2;
    TPoly unit = sg.q.shifted(-alpha).scaled(lc.inverse());
    TPoly tau = (series_root(unit, alpha, n) * TPoly::monomial(rho, 1)).truncated(n);
    TPoly t_of_tau = series_reversion(tau, n);
    TPoly r1 = sg.r.compose(t_of_tau, c);
    TPoly s1 = sg.s.compose(t_of_tau, c - b);

    SeriesTerms trunc;
    for (int e = 0; e <= r1.degree(); ++e)
        if (!r1.coeff(e).is_zero()) trunc.emplace_back(Rational(e) / alpha, r1.coeff(e));
    if (trunc.empty()) return verdict(GermVerdict::RankTwoLimit, "r vanishes after reparametrization");
    Rational big_c = Rational(c) / alpha, big_b = Rational(b) / alpha;
    Rational lambda0 = trunc.front().first;
    if (!(big_c > lambda0) || lambda0 <= 1) return verdict(GermVerdict::RankTwoLimit, "C does not exceed lambda0");
    if (big_b != (big_c - lambda0) / 2 + 1) return verdict(GermVerdict::RankTwoLimit, "B differs from (C - lambda0)/2 + 1");
    TPoly deriv;
    for (const auto& [e, gam] : trunc) {
        Rational x = (e - 1) * alpha;
        if (x.get_den() != 1 || x >= c - b) continue;
        deriv += TPoly::monomial(gam * ExactScalar(e), static_cast<int>(x.get_num().get_si()));
    }
    if (deriv != s1) return verdict(GermVerdict::RankTwoLimit, "s does not match the derivative of the truncation");

    std::vector<std::pair<Form, int>> factors;
    for (const auto& [f, m] : curve.factors()) factors.emplace_back(substitute_linear(f, st.left), m);
    Rational prec = big_c * 2 + 2;
    std::vector<PuiseuxBranch> branches;
    for (int attempt = 0;; ++attempt) {
        branches = puiseux_branches_local(factors, prec, ctx);
        bool known = std::all_of(branches.begin(), branches.end(),
                                 [&](const PuiseuxBranch& br) { return !br.tangent() || br.known_through(big_c); });
        if (known) break;
        if (attempt == 3) throw DomainError("PrecisionExhausted", "branches not known through the characteristic");
        prec *= 2;
    }
    std::vector<ExactScalar> gammas;
    for (const auto& br : branches) {
        if (!br.tangent()) continue;
        SeriesTerms below;
        for (const auto& t : br.terms)
            if (t.first < big_c) below.push_back(t);
        if (below.size() != trunc.size()) continue;
        bool same = true;
        for (std::size_t k = 0; k < below.size() && same; ++k)
            same = below[k].first == trunc[k].first && below[k].second == trunc[k].second;
        if (same) gammas.push_back(br.coeff(big_c));
    }
    if (gammas.empty()) return verdict(GermVerdict::RankTwoLimit, "no branch has this truncation");
    bool distinct = std::any_of(gammas.begin(), gammas.end(), [&](const ExactScalar& x) { return !(x == gammas.front()); });
    if (!distinct) return verdict(GermVerdict::DegenerateLimit, "a single conic");
    out.verdict = GermVerdict::TypeV;
    out.characteristic = big_c;
    out.truncation = trunc;
    out.b = b;
    out.c = c;
    out.detail = "quadritangent conics";
    return out;
}

}  // namespace curveorbit
