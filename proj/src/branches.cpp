#include "curveorbit/branches.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "curveorbit/log.hpp"

namespace curveorbit {

namespace {

Integer den_of(const Rational& r) { return r.get_den(); }

Integer lcm_int(const Integer& a, const Integer& b) {
    Integer out;
    mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

int to_int(const Rational& r) {
    if (r.get_den() != 1) throw DomainError("NotIntegral", "expected an integer");
    return static_cast<int>(r.get_num().get_si());
}

// Lower boundary from the leftmost lowest point to the lowest leftmost point.
std::vector<LatticePoint> lower_hull(std::vector<LatticePoint> pts) {
    std::map<int, int> lowest;
    for (const auto& p : pts) {
        auto it = lowest.find(p.j);
        if (it == lowest.end() || p.k < it->second) lowest[p.j] = p.k;
    }
    int kmin = std::numeric_limits<int>::max();
    for (const auto& [j, k] : lowest) kmin = std::min(kmin, k);
    std::vector<LatticePoint> hull;
    for (const auto& [j, k] : lowest) {
        if (!hull.empty() && k >= hull.back().k) continue;
        LatticePoint p{j, k};
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            long cr = static_cast<long>(b.j - a.j) * (p.k - a.k) - static_cast<long>(b.k - a.k) * (p.j - a.j);
            if (cr > 0) break;
            hull.pop_back();
        }
        hull.push_back(p);
        if (k == kmin) break;
    }
    return hull;
}

using BiPoly = std::map<std::pair<int, int>, ExactScalar>;

void bi_add(BiPoly& p, int j, int k, const ExactScalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = p.emplace(std::make_pair(j, k), c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) p.erase(it);
    }
}

// Local equation at x = 1; with swap the roles of y and z are exchanged.
BiPoly local_poly(const Form& f, bool swap) {
    BiPoly out;
    for (const auto& [m, c] : f.terms()) bi_add(out, swap ? m[2] : m[1], swap ? m[1] : m[2], c);
    return out;
}

struct RawBranch {
    SeriesTerms terms;
    Rational precision;
    bool exact = false;
};

struct Expander {
    Rational precision;
    TowerContext& ctx;
    std::vector<RawBranch> out;

    // Solutions w of p(u, w) = 0 with positive valuation, where u = y^(1/n) and
    // the branch is terms + u^e * w. At the top level edges are filtered by slope.
    void run(const BiPoly& p, int n, int e, const SeriesTerms& terms, int top_filter, int depth) {
        if (depth > 200) throw DomainError("PrecisionExhausted", "Newton-Puiseux recursion too deep");
        std::map<int, int> jmin;
        for (const auto& [jk, c] : p) {
            auto [j, k] = jk;
            auto it = jmin.find(k);
            if (it == jmin.end() || j < it->second) jmin[k] = j;
        }
        if (jmin.empty()) throw DomainError("ZeroPolynomial", "local equation vanishes");
        int kmin = jmin.begin()->first;
        for (int z = 0; z < kmin; ++z) out.push_back({terms, precision, true});
        std::vector<LatticePoint> pts;
        for (const auto& [k, j] : jmin) pts.push_back({k, j});
        std::vector<LatticePoint> hull = lower_hull(pts);
        for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
            int k1 = hull[h].j, j1 = hull[h].k, k2 = hull[h + 1].j, j2 = hull[h + 1].k;
            Rational mu = Rational(j1 - j2) / (k2 - k1);
            Rational next = (Rational(e) + mu) / n;
            if (top_filter == 1 && next < 1) continue;
            if (top_filter == 2 && next <= 1) continue;
            if (next >= precision) {
                for (int z = k1; z < k2; ++z) out.push_back({terms, next, false});
                continue;
            }
            std::vector<ExactScalar> ec(k2 - k1 + 1);
            for (const auto& [jk, c] : p) {
                auto [j, k] = jk;
                if (k < k1 || k > k2) continue;
                if (Rational(j) + mu * (k - k1) == j1) ec[k - k1] += c;
            }
            auto roots = find_roots(TPoly(ec), ctx);
            int count = 0;
            for (const auto& [g, m] : roots) count += m;
            if (count != k2 - k1)
                throw DomainError("RootNotRepresentable", "edge polynomial does not split over the tower");
            int pp = to_int(Rational(mu.get_num())), qq = to_int(Rational(mu.get_den()));
            int shift = qq * j1 + pp * k1;
            for (const auto& [g, m] : roots) {
                BiPoly np;
                for (const auto& [jk, c] : p) {
                    auto [j, k] = jk;
                    Integer binom = 1;
                    ExactScalar gp = g.pow(k);
                    ExactScalar ginv = g.inverse();
                    for (int i = 0; i <= k; ++i) {
                        bi_add(np, qq * j + pp * k - shift, i, c * ExactScalar(binom) * gp);
                        binom = binom * (k - i) / (i + 1);
                        gp *= ginv;
                    }
                }
                SeriesTerms nt = terms;
                nt.emplace_back(next, g);
                run(np, n * qq, e * qq + pp, nt, 0, depth + 1);
            }
        }
    }
};

bool same_terms(const SeriesTerms& a, const SeriesTerms& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].first != b[i].first || !(a[i].second == b[i].second)) return false;
    return true;
}

SeriesTerms below(const SeriesTerms& s, const Rational& bound) {
    SeriesTerms out;
    for (const auto& t : s)
        if (t.first < bound) out.push_back(t);
    return out;
}

}  // namespace

std::vector<PolygonSide> NewtonPolygonData::sides_in_range() const {
    std::vector<PolygonSide> out;
    for (const auto& s : sides)
        if (s.in_range()) out.push_back(s);
    return out;
}

NewtonPolygonData newton_polygon_local(const Form& f) {
    NewtonPolygonData out;
    out.degree = f.degree();
    out.frame = identity3<ExactScalar>();
    out.flag = Flag{Point{ExactScalar(1), ExactScalar(0), ExactScalar(0)}, Line{ExactScalar(0), ExactScalar(0), ExactScalar(1)}};
    for (const auto& [m, c] : f.terms()) out.support.push_back({m[1], m[2]});
    if (!f.coeff({out.degree, 0, 0}).is_zero())
        throw DomainError("PointNotOnCurve", "the flag point is not on the curve");
    std::sort(out.support.begin(), out.support.end(),
              [](const LatticePoint& a, const LatticePoint& b) { return a.j != b.j ? a.j < b.j : a.k < b.k; });
    out.vertices = lower_hull(out.support);
    for (std::size_t h = 0; h + 1 < out.vertices.size(); ++h) {
        PolygonSide s;
        s.start = out.vertices[h];
        s.end = out.vertices[h + 1];
        int dj = s.end.j - s.start.j, dk = s.start.k - s.end.k;
        s.segments = std::gcd(dj, dk);
        s.b = dk / s.segments;
        s.c = dj / s.segments;
        int level = s.b * s.start.j + s.c * s.start.k;
        for (const auto& [m, c] : f.terms())
            if (s.b * m[1] + s.c * m[2] == level && m[1] >= s.start.j && m[1] <= s.end.j) s.polynomial.add_term(m, c);
        out.sides.push_back(std::move(s));
    }
    return out;
}

NewtonPolygonData newton_polygon(const PlaneCurve& c, const Flag& flag, const std::optional<Point>& aux) {
    if (!c.form().eval(flag.point).is_zero())
        throw DomainError("PointNotOnCurve", to_string(flag.point) + " is not on the curve");
    Mat3s m = flag_normalizer(flag, aux);
    NewtonPolygonData out = newton_polygon_local(substitute_linear(c.form(), m));
    out.flag = flag;
    out.frame = m;
    return out;
}

SideLimit side_limit(const NewtonPolygonData& poly, const PolygonSide& side, TowerContext& ctx) {
    if (!side.in_range()) throw DomainError("SideOutOfRange", "side slope is not between -1 and 0");
    SideLimit out;
    out.limit = normalized(side.polynomial);
    SideDecomposition& d = out.parts;
    d.r = side.start.j;
    d.q = side.end.k;
    d.segments = side.segments;
    d.b = side.b;
    d.c = side.c;
    d.qbar = poly.degree - d.r - d.q - d.segments * d.c;
    std::vector<ExactScalar> coeffs(d.segments + 1);
    for (const auto& [m, c] : side.polynomial.terms()) {
        int s = (side.end.j - m[1]) / side.c;
        coeffs[d.segments - s] = c;
    }
    for (const auto& [root, mult] : find_roots(TPoly(coeffs), ctx))
        for (int k = 0; k < mult; ++k) d.rho.push_back(-root);
    if (static_cast<int>(d.rho.size()) != d.segments)
        throw DomainError("RootNotRepresentable", "side polynomial does not split over the tower");
    std::sort(d.rho.begin(), d.rho.end());
    return out;
}

std::optional<Rational> PuiseuxBranch::leading_exponent() const {
    if (terms.empty()) return std::nullopt;
    return terms.front().first;
}

bool PuiseuxBranch::tangent() const {
    if (swapped) return false;
    return terms.empty() ? exact || precision > 1 : terms.front().first > 1;
}

ExactScalar PuiseuxBranch::coeff(const Rational& e) const {
    for (const auto& [x, c] : terms)
        if (x == e) return c;
    return ExactScalar(0);
}

std::vector<PuiseuxBranch> puiseux_branches_local(const std::vector<std::pair<Form, int>>& factors,
                                                  const Rational& precision, TowerContext& ctx) {
    std::vector<PuiseuxBranch> out;
    Point origin{ExactScalar(1), ExactScalar(0), ExactScalar(0)};
    int next_tag = 0;
    for (std::size_t fi = 0; fi < factors.size(); ++fi) {
        const auto& [f, mult] = factors[fi];
        if (!f.eval(origin).is_zero()) continue;
        std::vector<PuiseuxBranch> mine;
        for (int swap = 0; swap < 2; ++swap) {
            Expander ex{precision, ctx, {}};
            ex.run(local_poly(f, swap), 1, 0, {}, swap ? 2 : 1, 0);
            for (auto& rb : ex.out) {
                PuiseuxBranch b;
                b.terms = std::move(rb.terms);
                b.precision = rb.precision;
                b.exact = rb.exact;
                b.swapped = swap;
                b.factor = static_cast<int>(fi);
                b.seq = static_cast<int>(mine.size());
                mine.push_back(std::move(b));
            }
        }
        int m = multiplicity_at(f, origin);
        if (static_cast<int>(mine.size()) != m)
            throw DomainError("PrecisionExhausted", "found " + std::to_string(mine.size()) + " branches, expected " +
                                                        std::to_string(m));
        std::vector<int> tag(mine.size(), -1);
        for (std::size_t i = 0; i < mine.size(); ++i) {
            if (tag[i] >= 0) continue;
            tag[i] = next_tag;
            for (std::size_t j = i + 1; j < mine.size(); ++j) {
                if (tag[j] >= 0 || mine[i].swapped != mine[j].swapped) continue;
                Rational bound = std::min(mine[i].exact ? precision : mine[i].precision,
                                          mine[j].exact ? precision : mine[j].precision);
                SeriesTerms a = below(mine[i].terms, bound), b = below(mine[j].terms, bound);
                if (a.empty() || b.empty()) continue;
                Integer e = 1;
                for (const auto& t : a) e = lcm_int(e, den_of(t.first));
                for (const auto& t : b) e = lcm_int(e, den_of(t.first));
                if (siblings(a, b, static_cast<int>(e.get_si()))) tag[j] = next_tag;
            }
            ++next_tag;
        }
        for (std::size_t i = 0; i < mine.size(); ++i) mine[i].local_factor = tag[i];
        for (int copy = 0; copy < mult; ++copy)
            for (auto b : mine) {
                b.copy = copy;
                out.push_back(b);
            }
    }
    return out;
}

std::vector<PuiseuxBranch> puiseux_branches(const PlaneCurve& c, const Flag& flag, const Rational& precision,
                                            TowerContext& ctx, const std::optional<Point>& aux) {
    if (!c.form().eval(flag.point).is_zero())
        throw DomainError("PointNotOnCurve", to_string(flag.point) + " is not on the curve");
    Mat3s m = flag_normalizer(flag, aux);
    std::vector<std::pair<Form, int>> local;
    for (const auto& [f, k] : c.factors()) local.emplace_back(substitute_linear(f, m), k);
    return puiseux_branches_local(local, precision, ctx);
}

std::optional<Rational> first_difference(const PuiseuxBranch& a, const PuiseuxBranch& b) {
    std::vector<Rational> exps;
    for (const auto& t : a.terms) exps.push_back(t.first);
    for (const auto& t : b.terms) exps.push_back(t.first);
    std::sort(exps.begin(), exps.end());
    for (const auto& e : exps) {
        if (!a.known_through(e) || !b.known_through(e)) return std::nullopt;
        if (!(a.coeff(e) == b.coeff(e))) return e;
    }
    return std::nullopt;
}

std::vector<Characteristic> characteristics(const std::vector<PuiseuxBranch>& branches) {
    std::vector<std::size_t> tan;
    for (std::size_t i = 0; i < branches.size(); ++i)
        if (branches[i].tangent()) tan.push_back(i);
    std::vector<Rational> values;
    for (std::size_t x = 0; x < tan.size(); ++x)
        for (std::size_t y = x + 1; y < tan.size(); ++y) {
            const auto& a = branches[tan[x]];
            const auto& b = branches[tan[y]];
            if (a.factor == b.factor && a.seq == b.seq) continue;
            auto v = first_difference(a, b);
            if (!v) {
                if (a.exact && b.exact) continue;
                throw DomainError("PrecisionExhausted", "branches not separated at the working precision");
            }
            auto l0 = a.leading_exponent();
            if (l0 && *l0 < *v && std::find(values.begin(), values.end(), *v) == values.end()) values.push_back(*v);
        }
    std::sort(values.begin(), values.end());
    std::vector<Characteristic> out;
    for (const auto& cv : values) {
        Characteristic ch{cv, {}};
        std::vector<TruncationGroup> groups;
        for (std::size_t i : tan) {
            const auto& br = branches[i];
            if (!br.known_through(cv)) throw DomainError("PrecisionExhausted", "branch not known through characteristic");
            SeriesTerms tr = below(br.terms, cv);
            auto it = std::find_if(groups.begin(), groups.end(),
                                   [&](const TruncationGroup& g) { return same_terms(g.truncation, tr); });
            if (it == groups.end()) {
                groups.push_back({tr, {}, {}});
                it = groups.end() - 1;
            }
            it->members.push_back(i);
            it->gamma.push_back(br.coeff(cv));
        }
        for (auto& g : groups) {
            if (g.truncation.empty() || g.members.size() < 2) continue;
            bool distinct = false;
            for (const auto& x : g.gamma)
                if (!(x == g.gamma.front())) distinct = true;
            if (distinct) ch.groups.push_back(std::move(g));
        }
        if (!ch.groups.empty()) out.push_back(std::move(ch));
    }
    return out;
}

Truncation truncation_type(const Rational& characteristic, const SeriesTerms& terms) {
    if (terms.empty()) throw DomainError("EmptyTruncation", "truncation has no terms");
    Truncation t;
    t.characteristic = characteristic;
    t.terms = terms;
    t.lambda0 = terms.front().first;
    if (!(t.lambda0 < characteristic)) throw DomainError("InvalidTruncation", "leading exponent must be below C");
    t.big_b = (characteristic - t.lambda0) / 2 + 1;
    Integer a = lcm_int(den_of(t.big_b), den_of(characteristic)), ell = 1;
    for (const auto& [e, c] : terms) ell = lcm_int(ell, den_of(e));
    a = lcm_int(a, ell);
    t.a = static_cast<int>(a.get_si());
    t.b = to_int(t.big_b * t.a);
    t.c = to_int(characteristic * t.a);
    t.ell = static_cast<int>(ell.get_si());
    int h = t.a;
    for (const auto& [e, c] : terms) h = std::gcd(h, to_int(e * t.a));
    t.h = h;
    return t;
}

bool siblings(const SeriesTerms& f, const SeriesTerms& g, int a) {
    if (f.size() != g.size()) return false;
    std::vector<int> ks;
    std::vector<ExactScalar> ratios;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i].first != g[i].first) return false;
        Rational ka = f[i].first * a;
        if (ka.get_den() != 1) return false;
        ks.push_back(to_int(ka));
        ratios.push_back(g[i].second / f[i].second);
    }
    // Bezout: gcd = x0 * a + sum x_i k_i, tracked incrementally.
    long gcur = a;
    std::vector<long> coef(ks.size(), 0);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        long old_r = gcur, r = ks[i], old_s = 1, s = 0, old_t = 0, t = 1;
        while (r != 0) {
            long qt = old_r / r;
            std::tie(old_r, r) = std::make_pair(r, old_r - qt * r);
            std::tie(old_s, s) = std::make_pair(s, old_s - qt * s);
            std::tie(old_t, t) = std::make_pair(t, old_t - qt * t);
        }
        if (old_r < 0) {
            old_r = -old_r;
            old_s = -old_s;
            old_t = -old_t;
        }
        for (std::size_t j = 0; j < i; ++j) coef[j] *= old_s;
        coef[i] = old_t;
        gcur = old_r;
    }
    ExactScalar eta(1);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        ExactScalar base = coef[i] < 0 ? ratios[i].inverse() : ratios[i];
        eta *= base.pow(static_cast<int>(std::abs(coef[i])));
    }
    if (!eta.pow(static_cast<int>(a / gcur)).is_one()) return false;
    for (std::size_t i = 0; i < ks.size(); ++i)
        if (!(eta.pow(static_cast<int>(ks[i] / gcur)) == ratios[i])) return false;
    return true;
}

std::vector<std::vector<std::size_t>> sibling_classes(const std::vector<Truncation>& truncations) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < truncations.size(); ++i) {
        const auto& t = truncations[i];
        bool placed = false;
        for (auto& cls : out) {
            const auto& r = truncations[cls.front()];
            if (r.a == t.a && r.b == t.b && r.c == t.c && r.characteristic == t.characteristic &&
                siblings(r.terms, t.terms, t.a)) {
                cls.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) out.push_back({i});
    }
    return out;
}

std::string to_string(const SeriesTerms& s, const std::string& var) {
    if (s.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : s) {
        std::string mono = var;
        if (e != 1) mono += e.get_den() == 1 ? "^" + e.get_str() : "^(" + e.get_str() + ")";
        if (e == 0) mono.clear();
        std::string cs = c.to_string();
        bool compound = !c.is_rational() && c.terms().size() > 1;
        std::string term;
        if (mono.empty())
            term = compound ? "(" + cs + ")" : cs;
        else if (c.is_one())
            term = mono;
        else if ((-c).is_one())
            term = "-" + mono;
        else
            term = (compound ? "(" + cs + ")" : cs) + "*" + mono;
        if (!out.empty() && term[0] != '-') out += "+";
        out += term;
    }
    return out;
}

}  // namespace curveorbit
