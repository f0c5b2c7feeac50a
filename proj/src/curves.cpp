#include "curveorbit/curves.hpp"

#include <algorithm>
#include <random>

#include "curveorbit/log.hpp"

namespace curveorbit {

Point normalize_point(Point p) {
    for (int k = 0; k < 3; ++k)
        if (!p[k].is_zero()) {
            ExactScalar inv = p[k].inverse();
            for (auto& x : p) x = x * inv;
            return p;
        }
    return p;
}

Point cross(const Point& a, const Point& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

bool same_point(const Point& a, const Point& b) {
    Point c = cross(a, b);
    return c[0].is_zero() && c[1].is_zero() && c[2].is_zero();
}

ExactScalar dot(const Line& l, const Point& p) { return l[0] * p[0] + l[1] * p[1] + l[2] * p[2]; }

Form line_form(const Line& l) {
    Form f;
    for (int k = 0; k < 3; ++k) {
        Mono3 m{0, 0, 0};
        m[k] = 1;
        f.add_term(m, l[k]);
    }
    return f;
}

Point transform_point(const Mat3s& m, const Point& p) {
    Point out;
    for (int r = 0; r < 3; ++r) out[r] = m(r, 0) * p[0] + m(r, 1) * p[1] + m(r, 2) * p[2];
    return out;
}

std::string to_string(const Point& p) {
    return "(" + p[0].to_string() + " : " + p[1].to_string() + " : " + p[2].to_string() + ")";
}

PlaneCurve::PlaneCurve(std::vector<std::pair<Form, int>> factors, TowerPtr tower)
    : factors_(std::move(factors)), tower_(std::move(tower)) {
    if (factors_.empty()) throw DomainError("InvalidCurve", "curve has no factors");
    form_ = Form(ExactScalar(1));
    support_ = Form(ExactScalar(1));
    for (const auto& [f, m] : factors_) {
        if (f.is_zero() || f.degree() < 1 || !f.is_homogeneous())
            throw DomainError("InvalidCurve", "factor " + to_string(f) + " is not a nonconstant form");
        if (m < 1) throw DomainError("InvalidCurve", "multiplicity must be positive");
        for (const auto& [mono, c] : f.terms()) tower_ = common_tower(tower_, c.tower());
        degree_ += f.degree() * m;
        form_ = form_ * f.pow(m);
        support_ = support_ * f;
    }
}

namespace {

Form translated(const Form& f, const Point& p) {
    std::array<Form, 3> images;
    for (int k = 0; k < 3; ++k) images[k] = Form::var(k) + Form(p[k]);
    return compose(f, images);
}

// Coefficients of f(x0, y, 1) as a polynomial in y, for f with no z.
TPoly restrict_x(const Form& f, const ExactScalar& x0) {
    std::vector<ExactScalar> c;
    for (const auto& [m, v] : f.terms()) {
        if (static_cast<int>(c.size()) <= m[1]) c.resize(m[1] + 1);
        c[m[1]] += v * x0.pow(m[0]);
    }
    return TPoly(std::move(c));
}

Form dehomogenize_z(const Form& f) {
    Form out;
    for (const auto& [m, c] : f.terms()) out.add_term({m[0], m[1], 0}, c);
    return out;
}

ExactScalar univariate_resultant(TPoly a, TPoly b) {
    if (a.is_zero() || b.is_zero()) return ExactScalar();
    ExactScalar acc(1);
    while (true) {
        int m = a.degree(), n = b.degree();
        if (n == 0) return acc * b.lead().pow(m);
        TPoly q, r;
        divmod(a, b, q, r);
        if (r.is_zero()) return ExactScalar();
        if ((static_cast<long>(m) * n) % 2 == 1) acc = -acc;
        acc = acc * b.lead().pow(m - r.degree());
        a = std::move(b);
        b = std::move(r);
    }
}

TPoly interpolate(const std::vector<ExactScalar>& xs, std::vector<ExactScalar> ys) {
    std::size_t n = xs.size();
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) ys[i] = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - j]);
    TPoly out;
    for (std::size_t k = n; k-- > 0;) {
        TPoly lin(std::vector<ExactScalar>{-xs[k], ExactScalar(1)});
        out = out * lin + TPoly(ys[k]);
    }
    return out;
}

int degree_in(const Form& f, int var) {
    int d = -1;
    for (const auto& [m, c] : f.terms()) d = std::max(d, m[var]);
    return d;
}

std::array<ExactScalar, 3> gradient_at(const Form& f, const Point& p) {
    return {f.derivative(0).eval(p), f.derivative(1).eval(p), f.derivative(2).eval(p)};
}

bool is_singular_at(const Form& f, const Point& p) {
    auto g = gradient_at(f, p);
    return g[0].is_zero() && g[1].is_zero() && g[2].is_zero();
}

ExactScalar hessian_at(const Form& f, const Point& p) {
    Mat3s h;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) h(i, j) = f.derivative(i).derivative(j).eval(p);
    return h.determinant();
}

void push_point(std::vector<Point>& pts, const Point& p) {
    Point n = normalize_point(p);
    for (const auto& q : pts)
        if (same_point(q, n)) return;
    pts.push_back(n);
}

// Rational common zeros of f and g (both in generic position) with z = 1,
// then points at infinity of f that satisfy pred.
std::vector<Point> common_points(const Form& fh, const Form& gh) {
    std::vector<Point> out;
    Form f = dehomogenize_z(fh), g = dehomogenize_z(gh);
    TPoly r = resultant_y(f, g);
    if (r.is_zero()) {
        log_warn("resultant vanishes identically; common components skipped");
        return out;
    }
    for (const auto& x0 : rational_roots(r)) {
        TPoly a = restrict_x(f, ExactScalar(x0)), b = restrict_x(g, ExactScalar(x0));
        TPoly h = poly_gcd(a, b);
        if (h.degree() < 1) continue;
        for (const auto& y0 : rational_roots(h)) push_point(out, {ExactScalar(x0), ExactScalar(y0), ExactScalar(1)});
    }
    Form inf;
    for (const auto& [m, c] : fh.terms())
        if (m[2] == 0) inf.add_term(m, c);
    if (inf.eval({ExactScalar(1), ExactScalar(0), ExactScalar(0)}).is_zero())
        push_point(out, {ExactScalar(1), ExactScalar(0), ExactScalar(0)});
    TPoly ix;
    {
        std::vector<ExactScalar> c;
        for (const auto& [m, v] : inf.terms()) {
            if (static_cast<int>(c.size()) <= m[0]) c.resize(m[0] + 1);
            c[m[0]] += v;
        }
        ix = TPoly(std::move(c));
    }
    if (!ix.is_zero())
        for (const auto& x0 : rational_roots(ix)) push_point(out, {ExactScalar(x0), ExactScalar(1), ExactScalar(0)});
    return out;
}

std::vector<Rational> small_rationals(int height) {
    std::vector<Rational> out{Rational(0)};
    for (int h = 1; h <= height; ++h)
        for (int den = 1; den <= h; ++den) {
            int num = h;
            for (int pass = 0; pass < 2; ++pass) {
                int a = pass == 0 ? num : den, b = pass == 0 ? den : num;
                if (std::gcd(a, b) != 1 || (pass == 1 && a == b)) continue;
                Rational r(a, b);
                out.push_back(r);
                out.push_back(-r);
            }
        }
    std::vector<Rational> uniq;
    for (const auto& r : out)
        if (std::find(uniq.begin(), uniq.end(), r) == uniq.end()) uniq.push_back(r);
    return uniq;
}

}  // namespace

int multiplicity_at(const Form& f, const Point& p) {
    if (!f.eval(p).is_zero()) return 0;
    return translated(f, p).min_degree();
}

TangentCone tangent_cone(const Form& f, const Point& p0, TowerContext& ctx) {
    Point p = normalize_point(p0);
    if (p[0].is_zero() && p[1].is_zero() && p[2].is_zero()) throw DomainError("InvalidPoint", "zero point");
    if (!f.eval(p).is_zero()) throw DomainError("PointNotOnCurve", to_string(p) + " is not on the curve");
    TangentCone out;
    Form g = translated(f, p);
    out.multiplicity = g.min_degree();
    out.cone = g.homogeneous_part(out.multiplicity);
    int j = 0;
    while (p[j].is_zero()) ++j;
    int k = (j + 1) % 3, l = (j + 2) % 3;
    if (k > l) std::swap(k, l);
    std::vector<ExactScalar> hc;
    for (const auto& [m, c] : out.cone.terms()) {
        if (m[j] != 0) continue;
        if (static_cast<int>(hc.size()) <= m[k]) hc.resize(m[k] + 1);
        hc[m[k]] += c;
    }
    TPoly h(std::move(hc));
    auto unit = [](int idx) {
        Point e{ExactScalar(0), ExactScalar(0), ExactScalar(0)};
        e[idx] = ExactScalar(1);
        return e;
    };
    for (const auto& [s0, mult] : find_roots(h, ctx)) {
        Point r = unit(l);
        r[k] = s0;
        out.lines.emplace_back(normalize_point(cross(p, r)), mult);
    }
    if (out.multiplicity > h.degree()) out.lines.emplace_back(normalize_point(cross(p, unit(k))), out.multiplicity - h.degree());
    return out;
}

TangentCone tangent_cone(const PlaneCurve& c, const Point& p, TowerContext& ctx) {
    ctx.absorb(c.tower());
    return tangent_cone(c.form(), p, ctx);
}

Mat3s flag_normalizer(const Flag& flag, const std::optional<Point>& aux) {
    const Point p = normalize_point(flag.point);
    const Line& L = flag.line;
    bool zero_p = p[0].is_zero() && p[1].is_zero() && p[2].is_zero();
    bool zero_l = L[0].is_zero() && L[1].is_zero() && L[2].is_zero();
    if (zero_p || zero_l) throw DomainError("DegenerateFlag", "zero point or line");
    if (!dot(L, p).is_zero()) throw DomainError("DegenerateFlag", to_string(p) + " does not lie on the flag line");
    auto unit = [](int idx) {
        Point e{ExactScalar(0), ExactScalar(0), ExactScalar(0)};
        e[idx] = ExactScalar(1);
        return e;
    };
    Point second;
    bool found = false;
    if (aux) {
        if (!dot(L, *aux).is_zero() || same_point(*aux, p))
            throw DomainError("DegenerateFlag", "auxiliary point must lie on the line and differ from the point");
        second = normalize_point(*aux);
        found = true;
    } else {
        for (int k = 0; k < 3 && !found; ++k) {
            Point q = cross(L, unit(k));
            if (q[0].is_zero() && q[1].is_zero() && q[2].is_zero()) continue;
            if (same_point(q, p)) continue;
            second = normalize_point(q);
            found = true;
        }
    }
    if (!found) throw DomainError("DegenerateFlag", "no second point on the line");
    Point third;
    for (int k = 0; k < 3; ++k)
        if (!dot(L, unit(k)).is_zero()) {
            third = unit(k);
            break;
        }
    Mat3s m;
    for (int r = 0; r < 3; ++r) {
        m(r, 0) = p[r];
        m(r, 1) = second[r];
        m(r, 2) = third[r];
    }
    return m;
}

const char* to_string(PointKind k) {
    switch (k) {
        case PointKind::Smooth: return "smooth";
        case PointKind::Flex: return "flex";
        case PointKind::Singular: return "singular";
    }
    return "?";
}

PointKind hessian_flex_test(const PlaneCurve& c, const Point& p) {
    const Form& g = c.support();
    if (!g.eval(p).is_zero()) throw DomainError("PointNotOnCurve", to_string(p) + " is not on the curve");
    if (is_singular_at(g, p)) return PointKind::Singular;
    return hessian_at(g, p).is_zero() ? PointKind::Flex : PointKind::Smooth;
}

TPoly resultant_y(const Form& f, const Form& g) {
    int df = degree_in(f, 1), dg = degree_in(g, 1);
    for (const auto* h : {&f, &g}) {
        int d = degree_in(*h, 1);
        for (const auto& [m, c] : h->terms())
            if (m[1] == d && m[0] != 0) throw DomainError("NotGeneric", "leading coefficient in y is not constant");
    }
    int bound = std::max(0, f.degree()) * std::max(0, g.degree());
    if (df <= 0 && dg <= 0) bound = 0;
    std::vector<ExactScalar> xs, ys;
    for (int k = 0; k <= bound; ++k) {
        ExactScalar x0(k);
        xs.push_back(x0);
        ys.push_back(univariate_resultant(restrict_x(f, x0), restrict_x(g, x0)));
    }
    return interpolate(xs, ys);
}

// Removes the rational line components of f. Assumes f(0,1,0) != 0, so every
// component is a graph y = a*x + b*z.
Form strip_rational_lines(Form f) {
    bool found = true;
    while (found && f.degree() >= 2) {
        found = false;
        TPoly at0 = restrict_x(dehomogenize_z(f), ExactScalar(0));
        TPoly at1 = restrict_x(dehomogenize_z(f), ExactScalar(1));
        if (at0.degree() < 1 || at1.degree() < 1) break;
        for (const auto& b : rational_roots(at0)) {
            for (const auto& ab : rational_roots(at1)) {
                Form l = var_y() - var_x().scaled(ExactScalar(ab - b)) - var_z().scaled(ExactScalar(b));
                try {
                    f = divide_exact(f, l);
                    found = true;
                } catch (const DomainError&) {
                }
                if (found) break;
            }
            if (found) break;
        }
    }
    return f;
}

std::vector<SpecialPoint> find_special_points(const PlaneCurve& c, unsigned seed, bool include_flexes) {
    const Form& g = c.support();
    std::vector<const Form*> curved;
    for (const auto& [f, m] : c.factors())
        if (f.degree() >= 3) curved.push_back(&f);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> dist(-3, 3);
    Mat3s t;
    bool ok = false;
    for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t(i, j) = ExactScalar(attempt == 0 ? (i == j ? 1 : 0) : dist(rng));
        if (attempt == 0) continue;
        if (t.determinant().is_zero()) continue;
        Point e2{t(0, 1), t(1, 1), t(2, 1)};
        if (g.eval(e2).is_zero()) continue;
        ok = true;
        for (const Form* f : curved)
            if (hessian(*f).eval(e2).is_zero()) ok = false;
    }
    if (!ok) throw DomainError("SearchFailed", "no generic coordinate change found");
    std::vector<SpecialPoint> out;
    auto add = [&](const Point& q, PointKind kind) {
        Point n = normalize_point(q);
        for (const auto& s : out)
            if (same_point(s.point, n)) return;
        out.push_back({n, kind});
    };
    Form gt = substitute_linear(g, t);
    for (const auto& q : common_points(gt, gt.derivative(1)))
        if (is_singular_at(gt, q)) add(transform_point(t, q), PointKind::Singular);
    if (include_flexes) {
        for (const Form* f : curved) {
            Form ft = strip_rational_lines(substitute_linear(*f, t));
            if (ft.degree() < 3) continue;
            for (const auto& q : common_points(ft, hessian(ft))) {
                Point orig = transform_point(t, q);
                if (hessian_flex_test(c, orig) == PointKind::Flex) add(orig, PointKind::Flex);
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const SpecialPoint& a, const SpecialPoint& b) {
        if (a.kind != b.kind) return a.kind == PointKind::Singular;
        auto ha = point_height(a.point), hb = point_height(b.point);
        return ha && hb && *ha < *hb;
    });
    return out;
}

std::optional<Integer> point_height(const Point& p) {
    Integer l = 1;
    for (const auto& x : p) {
        if (!x.is_rational()) return std::nullopt;
        Rational r = x.to_rational();
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den_mpz_t());
    }
    Integer g = 0, h = 0;
    std::array<Integer, 3> v;
    for (int k = 0; k < 3; ++k) {
        Rational r = p[k].to_rational() * l;
        v[k] = r.get_num();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v[k].get_mpz_t());
    }
    if (g == 0) return std::nullopt;
    for (auto& x : v) h = std::max(h, Integer(abs(x) / g));
    return h;
}

std::optional<Point> find_witness_point(const PlaneCurve& c, std::size_t k) {
    const Form& f = c.factors().at(k).first;
    const Form& g = c.support();
    std::optional<Point> best;
    std::optional<Integer> best_h;
    auto consider = [&](const Point& q) {
        if (is_singular_at(g, q) || hessian_at(g, q).is_zero()) return;
        auto h = point_height(q);
        if (!h) return;
        if (!best_h || *h < *best_h) {
            best_h = h;
            best = normalize_point(q);
        }
    };
    for (const auto& a : small_rationals(6)) {
        ExactScalar x0(a);
        for (int orient = 0; orient < 2; ++orient) {
            std::vector<ExactScalar> coeffs;
            for (const auto& [m, v] : f.terms()) {
                int e = orient == 0 ? m[1] : m[0];
                int fixed = orient == 0 ? m[0] : m[1];
                if (static_cast<int>(coeffs.size()) <= e) coeffs.resize(e + 1);
                coeffs[e] += v * x0.pow(fixed);
            }
            TPoly u(std::move(coeffs));
            if (u.is_zero() || u.degree() < 1) continue;
            for (const auto& r : rational_roots(u)) {
                Point q = orient == 0 ? Point{x0, ExactScalar(r), ExactScalar(1)} : Point{ExactScalar(r), x0, ExactScalar(1)};
                consider(q);
            }
        }
    }
    return best;
}

}  // namespace curveorbit
