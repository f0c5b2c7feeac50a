#include "curveorbit/germs.hpp"

#include <algorithm>

#include "curveorbit/log.hpp"

namespace curveorbit {

namespace {

TPoly tpow(int e) { return TPoly::monomial(ExactScalar(1), e); }

int val_mod(const TPoly& p, int n) {
    int v = p.valuation();
    return (v < 0 || v >= n) ? n : v;
}

// Quotient p / t^k for p divisible by t^k.
TPoly div_t(const TPoly& p, int k) { return p.shifted(-k); }

struct SmithResult {
    Mat3t u, v;
    std::array<int, 3> exps{};
    bool ok = false;
};

// alpha = U diag(t^a, t^b, t^c) V modulo t^n, a <= b <= c.
SmithResult smith(const Mat3t& alpha, int n) {
    SmithResult res;
    Mat3t a = alpha;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = a(i, j).truncated(n);
    Mat3t u = identity3<TPoly>(), v = identity3<TPoly>();
    for (int k = 0; k < 3; ++k) {
        int best = n, bi = -1, bj = -1;
        for (int i = k; i < 3; ++i)
            for (int j = k; j < 3; ++j) {
                int vv = val_mod(a(i, j), n);
                if (vv < best) {
                    best = vv;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) return res;
        if (bi != k) {
            a.row(k).swap(a.row(bi));
            u.col(k).swap(u.col(bi));
        }
        if (bj != k) {
            a.col(k).swap(a.col(bj));
            v.row(k).swap(v.row(bj));
        }
        TPoly w = div_t(a(k, k), best);
        TPoly winv = series_inverse(w, n);
        for (int j = 0; j < 3; ++j) a(k, j) = (a(k, j) * winv).truncated(n);
        for (int i = 0; i < 3; ++i) u(i, k) = (u(i, k) * w).truncated(n);
        for (int i = k + 1; i < 3; ++i) {
            if (a(i, k).is_zero()) continue;
            TPoly f = div_t(a(i, k), best);
            for (int j = 0; j < 3; ++j) a(i, j) = (a(i, j) - f * a(k, j)).truncated(n);
            for (int r = 0; r < 3; ++r) u(r, k) = (u(r, k) + f * u(r, i)).truncated(n);
        }
        for (int j = k + 1; j < 3; ++j) {
            if (a(k, j).is_zero()) continue;
            TPoly f = div_t(a(k, j), best);
            for (int i = 0; i < 3; ++i) a(i, j) = (a(i, j) - f * a(i, k)).truncated(n);
            for (int c = 0; c < 3; ++c) v(k, c) = (v(k, c) + f * v(j, c)).truncated(n);
        }
        res.exps[k] = best;
    }
    res.u = u;
    res.v = v;
    res.ok = true;
    return res;
}

std::optional<Standardization> try_standardize(const MatrixGerm& g, int n) {
    SmithResult sm = smith(g.matrix(), n);
    if (!sm.ok) return std::nullopt;
    auto [a, b, c] = sm.exps;
    if (a + b + c != g.determinant().valuation() || 2 * c - a > n) return std::nullopt;

    Mat3s q0 = germ_at_zero(sm.u);
    Mat3s q0inv = inverse3(q0);
    Mat3t h1;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            TPoly acc;
            for (int k = 0; k < 3; ++k) acc += sm.u(k, j).scaled(q0inv(i, k));
            h1(i, j) = acc.truncated(n);
        }
    const TPoly &h11 = h1(0, 0), &h12 = h1(0, 1), &h21 = h1(1, 0), &h22 = h1(1, 1), &h31 = h1(2, 0),
                &h32 = h1(2, 1);
    TPoly q = (h21 * series_inverse(h11, n)).truncated(b - a);
    TPoly g21 = (h21 - q * h11).truncated(n), g22 = (h22 - q * h12).truncated(n);
    TPoly dinv = series_inverse((h11 * g22 - g21 * h12).truncated(n), n);
    TPoly r = ((h31 * g22 - g21 * h32) * dinv).truncated(c - a);
    TPoly s = ((h11 * h32 - h12 * h31) * dinv).truncated(c - b);

    Mat3t hinv = identity3<TPoly>();
    hinv(1, 0) = -q;
    hinv(2, 0) = q * s - r;
    hinv(2, 1) = -s;
    std::array<int, 3> lam{a, b, c};
    Mat3s j0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            TPoly gik;
            for (int m = 0; m < 3; ++m) gik += hinv(i, m) * h1(m, k);
            gik = gik.truncated(n);
            int shift = lam[i] - lam[k];
            if (shift > 0) {
                int vv = gik.valuation();
                if (vv >= 0 && vv < shift) return std::nullopt;
                j0(i, k) = gik.coeff(shift);
            } else {
                j0(i, k) = shift == 0 ? gik.coeff(0) : ExactScalar(0);
            }
        }
    if (j0.determinant().is_zero()) return std::nullopt;

    Standardization out;
    out.left = q0;
    out.right = j0 * germ_at_zero(sm.v);
    out.sigma = StandardGerm{a, b, c, q, r, s};

    if (a < b && b == c) {
        StandardGerm& sg = out.sigma;
        auto apply = [&](const Mat2<ExactScalar>& e2) {
            Mat3s e = identity3<ExactScalar>(), einv;
            e.block<2, 2>(1, 1) = e2;
            einv = inverse3(e);
            out.left = out.left * einv;
            out.right = e * out.right;
            TPoly nq = sg.q.scaled(e2(0, 0)) + sg.r.scaled(e2(0, 1));
            TPoly nr = sg.q.scaled(e2(1, 0)) + sg.r.scaled(e2(1, 1));
            sg.q = nq;
            sg.r = nr;
        };
        Mat2<ExactScalar> swap;
        swap << ExactScalar(0), ExactScalar(1), ExactScalar(1), ExactScalar(0);
        while (!sg.r.is_zero()) {
            if (sg.q.is_zero() || sg.r.valuation() < sg.q.valuation()) {
                apply(swap);
                continue;
            }
            if (sg.r.valuation() > sg.q.valuation()) break;
            int v = sg.q.valuation();
            Mat2<ExactScalar> el;
            el << ExactScalar(1), ExactScalar(0), -(sg.r.coeff(v) / sg.q.coeff(v)), ExactScalar(1);
            apply(el);
        }
    }
    return out;
}

}  // namespace

MatrixGerm::MatrixGerm() : MatrixGerm(identity3<TPoly>()) {}

MatrixGerm::MatrixGerm(Mat3t m) : m_(std::move(m)) {
    if (m_.determinant().is_zero()) throw DomainError("SingularGerm", "germ determinant vanishes identically");
    center_ = germ_at_zero(m_);
    rank_ = rank3(center_);
}

MatrixGerm MatrixGerm::diagonal(int a, int b, int c) {
    Mat3t m = Mat3t::Constant(TPoly());
    m(0, 0) = tpow(a);
    m(1, 1) = tpow(b);
    m(2, 2) = tpow(c);
    return MatrixGerm(m);
}

TPoly MatrixGerm::determinant() const { return m_.determinant(); }

MatrixGerm operator*(const Mat3s& a, const MatrixGerm& g) {
    Mat3t out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            TPoly acc;
            for (int k = 0; k < 3; ++k) acc += g.m_(k, j).scaled(a(i, k));
            out(i, j) = acc;
        }
    return MatrixGerm(out);
}

MatrixGerm operator*(const MatrixGerm& g, const Mat3s& a) {
    Mat3t out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            TPoly acc;
            for (int k = 0; k < 3; ++k) acc += g.m_(i, k).scaled(a(k, j));
            out(i, j) = acc;
        }
    return MatrixGerm(out);
}

MatrixGerm operator*(const MatrixGerm& g, const MatrixGerm& h) { return MatrixGerm(Mat3t(g.m_ * h.m_)); }

MatrixGerm normalized(const MatrixGerm& g) {
    int best = -1;
    ExactScalar lead;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int v = g(i, j).valuation();
            if (v >= 0 && (best < 0 || v < best)) {
                best = v;
                lead = g(i, j).coeff(v);
            }
        }
    Mat3t out = g.matrix();
    ExactScalar inv = lead.inverse();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out(i, j) = out(i, j).scaled(inv);
    return MatrixGerm(out);
}

std::string to_string(const MatrixGerm& g) {
    std::string out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i || j) out += ", ";
            out += to_string(g(i, j));
        }
    return out;
}

FlatLimit flat_limit(const Form& f, const MatrixGerm& g) {
    Poly3<TPoly> e = substitute_linear(f, g.matrix());
    int w = -1;
    for (const auto& [m, c] : e.terms()) {
        int v = c.valuation();
        if (w < 0 || v < w) w = v;
    }
    if (w < 0) throw DomainError("ZeroLimit", "F o alpha vanishes identically");
    Form raw;
    for (const auto& [m, c] : e.terms()) raw.add_term(m, c.coeff(w));
    FlatLimit out;
    out.weight = w;
    out.scale = raw.leading_coeff();
    out.limit = normalized(raw);
    if (g.center_rank() == 1) {
        const Mat3s& c0 = g.center();
        for (int i = 0; i < 3 && !out.kernel; ++i)
            if (!c0(i, 0).is_zero() || !c0(i, 1).is_zero() || !c0(i, 2).is_zero())
                out.kernel = Line{c0(i, 0), c0(i, 1), c0(i, 2)};
    }
    log_debug("flat limit weight " + std::to_string(w) + ": " + to_string(out.limit));
    return out;
}

FlatLimit flat_limit(const PlaneCurve& c, const MatrixGerm& g) { return flat_limit(c.form(), g); }

KernelStar detect_kernel_star(const FlatLimit& limit) {
    KernelStar out;
    if (!limit.kernel) return out;
    const Form& g = limit.limit;
    int d = g.degree();
    std::vector<std::array<ExactScalar, 3>> rows;
    for (int i = 0; i < d; ++i)
        for (int j = 0; i + j < d; ++j) {
            Form p = g;
            int k = d - 1 - i - j;
            for (int s = 0; s < i; ++s) p = p.derivative(0);
            for (int s = 0; s < j; ++s) p = p.derivative(1);
            for (int s = 0; s < k; ++s) p = p.derivative(2);
            rows.push_back({p.coeff({1, 0, 0}), p.coeff({0, 1, 0}), p.coeff({0, 0, 1})});
        }
    auto basis = nullspace3(rows);
    const Line& ker = *limit.kernel;
    if (basis.size() == 1) {
        if (dot(ker, basis[0]).is_zero()) {
            out.star = true;
            out.center = normalize_point(basis[0]);
        }
    } else if (basis.size() == 2) {
        out.star = true;
        out.multiple_line = true;
        Line ell = cross(basis[0], basis[1]);
        Point p = cross(ell, ker);
        if (p[0].is_zero() && p[1].is_zero() && p[2].is_zero()) p = basis[0];
        out.center = normalize_point(p);
    }
    return out;
}

MatrixGerm StandardGerm::matrix() const {
    Mat3t m = Mat3t::Constant(TPoly());
    m(0, 0) = tpow(a);
    m(1, 0) = q.shifted(a);
    m(1, 1) = tpow(b);
    m(2, 0) = r.shifted(a);
    m(2, 1) = s.shifted(b);
    m(2, 2) = tpow(c);
    return MatrixGerm(m);
}

MatrixGerm StandardGerm::scaled_matrix() const { return StandardGerm{0, b - a, c - a, q, r, s}.matrix(); }

Standardization standardize_germ(const MatrixGerm& g, std::optional<int> truncation_order) {
    int n = truncation_order ? *truncation_order : 4 * (g.determinant().valuation() + 1);
    if (n < 1) throw DomainError("TruncationTooSmall", "truncation order must be positive");
    for (int attempt = 0; attempt < 2; ++attempt, n *= 2) {
        if (auto res = try_standardize(g, n)) return *res;
        log_info("standardize: truncation order " + std::to_string(n) + " too small, retrying");
    }
    throw DomainError("TruncationTooSmall", "Smith reduction did not stabilize at order " + std::to_string(n / 2));
}

const char* to_string(GermVerdict v) {
    switch (v) {
        case GermVerdict::TypeI: return "TypeI";
        case GermVerdict::Type1PS: return "Type1PS";
        case GermVerdict::TypeV: return "TypeV";
        case GermVerdict::RankTwoLimit: return "RankTwoLimit";
        case GermVerdict::DegenerateLimit: return "DegenerateLimit";
    }
    return "?";
}

}  // namespace curveorbit
