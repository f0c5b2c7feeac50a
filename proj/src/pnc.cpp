#include "curveorbit/pnc.hpp"

#include <algorithm>

#include "curveorbit/log.hpp"

namespace curveorbit {

namespace {

const Point kOrigin{ExactScalar(1), ExactScalar(0), ExactScalar(0)};

MatrixGerm conjugate(const Mat3s& m, const MatrixGerm& d) { return m * d * inverse3(m); }

PncMarking make_marking(const PlaneCurve& c, const Mat3s& frame, const MatrixGerm& local_germ, const Rational& contrib) {
    PncMarking mk;
    mk.frame = frame;
    mk.germ = conjugate(frame, local_germ);
    FlatLimit fl = flat_limit(c, mk.germ);
    mk.limit = fl.limit;
    mk.weight = fl.weight;
    mk.frame_limit = flat_limit(substitute_linear(c.form(), frame), local_germ).limit;
    mk.contribution = contrib;
    return mk;
}

Point point_on_line(const Line& l) {
    for (int k = 0; k < 3; ++k) {
        Point e{ExactScalar(0), ExactScalar(0), ExactScalar(0)};
        e[k] = ExactScalar(1);
        Point p = cross(l, e);
        if (!p[0].is_zero() || !p[1].is_zero() || !p[2].is_zero()) return normalize_point(p);
    }
    throw DomainError("DegenerateFlag", "zero line");
}

bool same_p1(const P1Point& a, const P1Point& b) { return (a[0] * b[1] - a[1] * b[0]).is_zero(); }

P1Point apply2(const Mat2<ExactScalar>& m, const P1Point& p) {
    return {m(0, 0) * p[0] + m(0, 1) * p[1], m(1, 0) * p[0] + m(1, 1) * p[1]};
}

// Matrix sending (1:0), (0:1), (1:1) to s0, s1, s2.
Mat2<ExactScalar> frame2(const P1Point& s0, const P1Point& s1, const P1Point& s2) {
    ExactScalar det = s0[0] * s1[1] - s0[1] * s1[0];
    ExactScalar lam = (s2[0] * s1[1] - s2[1] * s1[0]) / det;
    ExactScalar mu = (s0[0] * s2[1] - s0[1] * s2[0]) / det;
    Mat2<ExactScalar> m;
    m << lam * s0[0], mu * s1[0], lam * s0[1], mu * s1[1];
    return m;
}

bool same_multiset(std::vector<ExactScalar> a, std::vector<ExactScalar> b) {
    if (a.size() != b.size()) return false;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
    return true;
}

std::vector<ExactScalar> canonical_ratios(std::vector<ExactScalar> rho) {
    std::vector<ExactScalar> best;
    for (std::size_t k = 0; k < rho.size(); ++k) {
        std::vector<ExactScalar> r;
        ExactScalar inv = rho[k].inverse();
        for (const auto& x : rho) r.push_back(x * inv);
        std::sort(r.begin(), r.end());
        if (best.empty() || std::lexicographical_compare(r.begin(), r.end(), best.begin(), best.end())) best = r;
    }
    return best;
}

bool same_scalars(const std::vector<ExactScalar>& a, const std::vector<ExactScalar>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
    return true;
}

TPoly truncated_eval(const SeriesTerms& f, int a, int bound, int shift, bool derivative) {
    TPoly out;
    for (const auto& [e, g] : f) {
        Rational ex = derivative ? Rational((e - 1) * a + shift) : Rational(e * a + shift);
        if (ex.get_den() != 1) throw DomainError("NotIntegral", "truncation exponent not integral");
        int k = static_cast<int>(ex.get_num().get_si());
        if (k >= bound) continue;
        out += TPoly::monomial(derivative ? g * ExactScalar(e) : g, k);
    }
    return out;
}

Rational branch_weight(const PuiseuxBranch& br, const SeriesTerms& f, const Rational& cval) {
    if (!br.tangent()) return Rational(1);
    std::vector<Rational> exps;
    for (const auto& t : f) exps.push_back(t.first);
    for (const auto& t : br.terms)
        if (t.first < cval) exps.push_back(t.first);
    std::sort(exps.begin(), exps.end());
    for (const auto& e : exps) {
        ExactScalar fe(0);
        for (const auto& t : f)
            if (t.first == e) fe = t.second;
        if (!(br.coeff(e) == fe)) return e;
    }
    return cval;
}

std::vector<PuiseuxBranch> branches_with_retry(const std::vector<std::pair<Form, int>>& factors, int m,
                                               TowerContext& ctx, std::vector<Characteristic>& chars) {
    Rational prec(2 * m + 2);
    for (int attempt = 0;; ++attempt) {
        try {
            auto br = puiseux_branches_local(factors, prec, ctx);
            chars = characteristics(br);
            return br;
        } catch (const DomainError& e) {
            if (e.kind() != "PrecisionExhausted" || attempt == 3) throw;
            prec *= 2;
            log_info("raising branch precision to " + prec.get_str());
        }
    }
}

}  // namespace

const char* to_string(PncType t) {
    switch (t) {
        case PncType::I: return "I";
        case PncType::II: return "II";
        case PncType::III: return "III";
        case PncType::IV: return "IV";
        case PncType::V: return "V";
    }
    return "?";
}

Rational PncReport::total() const {
    Rational s(0);
    for (const auto& c : components) s += c.multiplicity;
    return s;
}

int pgl2_stabilizer_count(const std::vector<std::pair<P1Point, int>>& points) {
    std::vector<std::pair<P1Point, int>> pts;
    for (const auto& [p, m] : points) {
        auto it = std::find_if(pts.begin(), pts.end(), [&](const auto& q) { return same_p1(q.first, p); });
        if (it == pts.end())
            pts.emplace_back(p, m);
        else
            it->second += m;
    }
    if (pts.size() < 3) throw DomainError("InfiniteStabilizer", "fewer than three distinct points");
    Mat2<ExactScalar> src = frame2(pts[0].first, pts[1].first, pts[2].first);
    Mat2<ExactScalar> src_inv = src.inverse();
    int count = 0;
    std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                Mat2<ExactScalar> m = frame2(pts[i].first, pts[j].first, pts[k].first) * src_inv;
                bool ok = true;
                for (const auto& [p, mult] : pts) {
                    P1Point img = apply2(m, p);
                    auto it = std::find_if(pts.begin(), pts.end(), [&](const auto& q) { return same_p1(q.first, img); });
                    if (it == pts.end() || it->second != mult) {
                        ok = false;
                        break;
                    }
                }
                if (ok) ++count;
            }
    return count;
}

int u_automorphism_count(const std::vector<ExactScalar>& rho) {
    if (rho.empty()) return 1;
    for (const auto& r : rho)
        if (r.is_zero()) throw DomainError("DegenerateTuple", "rho values must be nonzero");
    std::vector<ExactScalar> seen;
    ExactScalar inv = rho.front().inverse();
    for (const auto& r : rho) {
        ExactScalar u = r * inv;
        if (std::any_of(seen.begin(), seen.end(), [&](const ExactScalar& s) { return s == u; })) continue;
        if (!root_of_unity_order(u, static_cast<int>(rho.size()))) continue;
        std::vector<ExactScalar> img;
        for (const auto& x : rho) img.push_back(u * x);
        if (same_multiset(img, rho)) seen.push_back(u);
    }
    return static_cast<int>(seen.size());
}

int affine_automorphism_count(const std::vector<ExactScalar>& gamma) {
    std::vector<ExactScalar> support;
    for (const auto& g : gamma)
        if (std::none_of(support.begin(), support.end(), [&](const ExactScalar& s) { return s == g; }))
            support.push_back(g);
    if (support.size() < 2) throw DomainError("DegenerateTuple", "all values are equal");
    const ExactScalar &g0 = support[0], &g1 = support[1];
    int maps = 0;
    for (std::size_t i = 0; i < support.size(); ++i)
        for (std::size_t j = 0; j < support.size(); ++j) {
            if (i == j) continue;
            ExactScalar u = (support[j] - support[i]) / (g1 - g0);
            ExactScalar v = support[i] - u * g0;
            std::vector<ExactScalar> img;
            for (const auto& x : gamma) img.push_back(u * x + v);
            if (same_multiset(img, gamma)) ++maps;
        }
    return 2 * maps;
}

Form type_V_limit_formula(int degree, const Truncation& t, const std::vector<ExactScalar>& gamma) {
    Form x = var_x(), y = var_y(), z = var_z();
    ExactScalar g0, gmid;
    Rational mid = (t.lambda0 + t.characteristic) / 2;
    for (const auto& [e, g] : t.terms) {
        if (e == t.lambda0) g0 = g;
        if (e == mid) gmid = g;
    }
    ExactScalar cy2 = ExactScalar(t.lambda0 * (t.lambda0 - 1) / 2) * g0;
    ExactScalar cyx = ExactScalar(mid) * gmid;
    Form out = x.pow(degree - 2 * static_cast<int>(gamma.size()));
    for (const auto& gc : gamma) out *= z * x - (y * y).scaled(cy2) - (y * x).scaled(cyx) - (x * x).scaled(gc);
    return out;
}

std::vector<PncComponent> type_I_components(const PlaneCurve& c) {
    std::vector<PncComponent> out;
    for (std::size_t k = 0; k < c.factors().size(); ++k) {
        if (!c.is_linear_factor(k)) continue;
        const Form& f = c.factors()[k].first;
        Line l{f.coeff({1, 0, 0}), f.coeff({0, 1, 0}), f.coeff({0, 0, 1})};
        Mat3s m = flag_normalizer(Flag{point_on_line(l), l});
        PncComponent comp;
        comp.type = PncType::I;
        comp.factor = static_cast<int>(k);
        comp.detail.m = c.factors()[k].second;
        comp.multiplicity = comp.detail.m;
        PncMarking mk = make_marking(c, m, MatrixGerm::diagonal(0, 0, 1), comp.multiplicity);
        mk.line = normalize_point(l);
        comp.markings.push_back(mk);
        out.push_back(std::move(comp));
    }
    return out;
}

namespace {

PncComponent type_II_for_factor(const PlaneCurve& c, std::size_t k, std::optional<Point> w) {
    const Form& f = c.factors()[k].first;
    if (w) {
        w = normalize_point(*w);
        if (!f.eval(*w).is_zero() || hessian_flex_test(c, *w) != PointKind::Smooth)
            throw DomainError("NoWitnessPoint", "supplied witness " + to_string(*w) + " is not a smooth non-flex point of the factor");
    } else {
        w = find_witness_point(c, k);
    }
    if (!w) throw DomainError("NoWitnessPoint", "no rational smooth non-flex point found on factor " + std::to_string(k));
    Line tl = normalize_point(Line{f.derivative(0).eval(*w), f.derivative(1).eval(*w), f.derivative(2).eval(*w)});
    Mat3s m = flag_normalizer(Flag{*w, tl});
    PncComponent comp;
    comp.type = PncType::II;
    comp.factor = static_cast<int>(k);
    comp.point = w;
    comp.detail.m = c.factors()[k].second;
    comp.multiplicity = 2 * comp.detail.m;
    PncMarking mk = make_marking(c, m, MatrixGerm::diagonal(0, 1, 2), comp.multiplicity);
    mk.line = tl;
    comp.markings.push_back(mk);
    return comp;
}

std::optional<Point> witness_for(const std::map<int, Point>& witnesses, std::size_t k) {
    if (auto it = witnesses.find(static_cast<int>(k)); it != witnesses.end()) return it->second;
    return std::nullopt;
}

}  // namespace

std::vector<PncComponent> type_II_components(const PlaneCurve& c, const std::map<int, Point>& witnesses) {
    std::vector<PncComponent> out;
    for (std::size_t k = 0; k < c.factors().size(); ++k)
        if (!c.is_linear_factor(k)) out.push_back(type_II_for_factor(c, k, witness_for(witnesses, k)));
    return out;
}

std::vector<PncComponent> type_III_components(const PlaneCurve& c, const std::vector<Point>& points, TowerContext& ctx) {
    std::vector<PncComponent> out;
    for (const auto& p0 : points) {
        Point p = normalize_point(p0);
        TangentCone tc = tangent_cone(c, p, ctx);
        if (tc.lines.size() < 3) continue;
        Mat3s m = flag_normalizer(Flag{p, tc.lines.front().first});
        TangentCone local = tangent_cone(substitute_linear(c.form(), m), kOrigin, ctx);
        std::vector<std::pair<P1Point, int>> dirs;
        for (const auto& [l, mult] : local.lines) dirs.push_back({P1Point{l[1], l[2]}, mult});
        PncComponent comp;
        comp.type = PncType::III;
        comp.point = p;
        comp.detail.m = tc.multiplicity;
        comp.detail.A = pgl2_stabilizer_count(dirs);
        comp.multiplicity = comp.detail.m * comp.detail.A;
        comp.markings.push_back(make_marking(c, m, MatrixGerm::diagonal(0, 1, 1), comp.multiplicity));
        out.push_back(std::move(comp));
    }
    return out;
}

std::vector<PncComponent> type_IV_components(const PlaneCurve& c, const Point& p0, TowerContext& ctx) {
    std::vector<PncComponent> out;
    Point p = normalize_point(p0);
    TangentCone tc = tangent_cone(c, p, ctx);
    for (const auto& [line, lm] : tc.lines) {
        Mat3s m = flag_normalizer(Flag{p, line});
        NewtonPolygonData np = newton_polygon_local(substitute_linear(c.form(), m));
        np.flag = Flag{p, line};
        np.frame = m;
        for (const auto& side : np.sides_in_range()) {
            SideLimit sl = side_limit(np, side, ctx);
            const SideDecomposition& d = sl.parts;
            bool constant_rho = std::all_of(d.rho.begin(), d.rho.end(), [&](const ExactScalar& r) { return r == d.rho.front(); });
            if (2 * d.b == d.c && d.r == 0 && d.q == 0 && constant_rho) continue;
            PncComponent comp;
            comp.type = PncType::IV;
            comp.point = p;
            comp.detail.m = tc.multiplicity;
            comp.detail.S = d.segments;
            comp.detail.b = d.b;
            comp.detail.c = d.c;
            comp.detail.side = d;
            comp.detail.A = u_automorphism_count(d.rho);
            int w = (side.end.j * side.start.k - side.start.j * side.end.k) / d.segments;
            comp.multiplicity = w * comp.detail.A;
            PncMarking mk = make_marking(c, m, MatrixGerm::diagonal(0, d.b, d.c), comp.multiplicity);
            mk.line = line;
            comp.markings.push_back(mk);
            out.push_back(std::move(comp));
        }
    }
    return out;
}

std::vector<PncComponent> type_V_components(const PlaneCurve& c, const Point& p0, TowerContext& ctx,
                                            std::vector<std::string>* warnings) {
    std::vector<PncComponent> out;
    Point p = normalize_point(p0);
    TangentCone tc = tangent_cone(c, p, ctx);
    for (const auto& [line, lm] : tc.lines) {
        if (lm < 2) continue;
        Mat3s m = flag_normalizer(Flag{p, line});
        std::vector<std::pair<Form, int>> local;
        for (const auto& [f, k] : c.factors()) local.emplace_back(substitute_linear(f, m), k);
        std::vector<Characteristic> chars;
        std::vector<PuiseuxBranch> branches = branches_with_retry(local, tc.multiplicity, ctx, chars);
        for (const auto& ch : chars) {
            std::vector<Truncation> trs;
            for (const auto& g : ch.groups) trs.push_back(truncation_type(ch.value, g.truncation));
            auto classes = sibling_classes(trs);
            for (const auto& cls : classes) {
                const TruncationGroup& rep = ch.groups[cls.front()];
                const Truncation& t = trs[cls.front()];
                PncComponent comp;
                comp.type = PncType::V;
                comp.point = p;
                comp.detail.m = tc.multiplicity;
                comp.detail.S = static_cast<int>(rep.members.size());
                comp.detail.characteristic = ch.value;
                comp.detail.a = t.a;
                comp.detail.b = t.b;
                comp.detail.c = t.c;
                comp.detail.ell = t.ell;
                comp.detail.gamma = rep.gamma;
                comp.detail.A = affine_automorphism_count(rep.gamma);
                comp.detail.W = 0;
                for (const auto& br : branches) {
                    Rational w = branch_weight(br, t.terms, ch.value);
                    comp.detail.branch_weights.push_back(w);
                    comp.detail.W += w;
                }
                comp.multiplicity = comp.detail.W * t.ell * comp.detail.A;
                for (std::size_t idx : cls) {
                    const Truncation& ti = trs[idx];
                    Mat3t g = Mat3t::Constant(TPoly());
                    g(0, 0) = TPoly(ExactScalar(1));
                    g(1, 0) = TPoly::monomial(ExactScalar(1), ti.a);
                    g(1, 1) = TPoly::monomial(ExactScalar(1), ti.b);
                    g(2, 0) = truncated_eval(ti.terms, ti.a, ti.c, 0, false);
                    g(2, 1) = truncated_eval(ti.terms, ti.a, ti.c, ti.b, true);
                    g(2, 2) = TPoly::monomial(ExactScalar(1), ti.c);
                    bool first = idx == cls.front();
                    PncMarking mk = make_marking(c, m, MatrixGerm(g), first ? comp.multiplicity : Rational(0));
                    mk.line = line;
                    mk.truncation = ti.terms;
                    mk.sibling = !first;
                    comp.markings.push_back(mk);
                }
                out.push_back(std::move(comp));
            }
            if (warnings) {
                for (std::size_t x = 0; x < classes.size(); ++x)
                    for (std::size_t y = x + 1; y < classes.size(); ++y) {
                        const Truncation &tx = trs[classes[x].front()], &ty = trs[classes[y].front()];
                        if (tx.a == ty.a && tx.b == ty.b && tx.c == ty.c)
                            warnings->push_back("type V classes " + to_string(tx.terms) + " and " + to_string(ty.terms) +
                                                " at " + to_string(p) + " share (a,b,c) but are not siblings; reported separately");
                    }
            }
        }
    }
    return out;
}

PncReport assemble_pnc(const PlaneCurve& c, const std::vector<Point>& points, TowerContext& ctx, const PncOptions& options) {
    PncReport rep;
    auto guard = [&](const std::string& where, auto&& fn) {
        try {
            fn();
        } catch (const DomainError& e) {
            rep.errors.push_back({where, e.kind(), e.what()});
        }
    };
    if (points.empty()) {
        rep.warnings.push_back("no points supplied; using the automatic rational search for singular points and flexes");
        guard("special points", [&] { rep.points = find_special_points(c, options.seed); });
    } else {
        for (const auto& p : points) {
            guard("point " + to_string(p), [&] {
                PointKind k = hessian_flex_test(c, p);
                if (k == PointKind::Smooth)
                    rep.warnings.push_back("point " + to_string(p) + " is a smooth non-flex point; skipped");
                else
                    rep.points.push_back({normalize_point(p), k});
            });
        }
    }
    auto append = [&](std::vector<PncComponent> v) {
        for (auto& x : v) {
            // S bounds the order of u in the rho search, a the order of the sibling roots.
            int order = x.type == PncType::IV ? x.detail.S : x.type == PncType::V ? x.detail.a : 0;
            if (order > options.max_order) {
                std::string where = std::string("type ") + to_string(x.type) + (x.point ? " at " + to_string(*x.point) : "");
                rep.errors.push_back({where, "RootOrderBound",
                                      "needs roots of unity of order " + std::to_string(order) + ", above the bound " +
                                          std::to_string(options.max_order)});
                continue;
            }
            rep.components.push_back(std::move(x));
        }
    };
    guard("type I", [&] { append(type_I_components(c)); });
    for (std::size_t k = 0; k < c.factors().size(); ++k) {
        if (c.is_linear_factor(k)) continue;
        guard("type II factor " + std::to_string(k),
              [&] { rep.components.push_back(type_II_for_factor(c, k, witness_for(options.witnesses, k))); });
    }
    std::vector<Point> singular;
    for (const auto& sp : rep.points)
        if (sp.kind == PointKind::Singular) singular.push_back(sp.point);
    guard("type III", [&] { append(type_III_components(c, singular, ctx)); });

    std::vector<PncComponent> fours;
    for (const auto& sp : rep.points)
        guard("type IV at " + to_string(sp.point), [&] {
            for (auto& comp : type_IV_components(c, sp.point, ctx)) fours.push_back(std::move(comp));
        });
    std::vector<PncComponent> merged;
    for (auto& comp : fours) {
        const SideDecomposition& d = *comp.detail.side;
        auto key = canonical_ratios(d.rho);
        auto it = std::find_if(merged.begin(), merged.end(), [&](const PncComponent& o) {
            const SideDecomposition& e = *o.detail.side;
            return same_point(*o.point, *comp.point) && e.qbar == d.qbar && e.r == d.r && e.q == d.q && e.b == d.b &&
                   e.c == d.c && e.segments == d.segments && same_scalars(canonical_ratios(e.rho), key);
        });
        if (it == merged.end()) {
            merged.push_back(std::move(comp));
        } else {
            it->multiplicity += comp.multiplicity;
            for (auto& mk : comp.markings) it->markings.push_back(std::move(mk));
        }
    }
    append(std::move(merged));

    for (const auto& sp : rep.points) {
        if (sp.kind != PointKind::Singular) continue;
        guard("type V at " + to_string(sp.point), [&] { append(type_V_components(c, sp.point, ctx, &rep.warnings)); });
    }
    return rep;
}

}  // namespace curveorbit
