#include "curveorbit/upoly.hpp"

#include <numeric>

namespace curveorbit {

void divmod(const TPoly& a, const TPoly& b, TPoly& q, TPoly& r) {
    if (b.is_zero()) throw DomainError("DivisionByZero", "polynomial division by zero");
    std::vector<ExactScalar> rem = a.coeffs();
    std::vector<ExactScalar> quo(a.degree() >= b.degree() ? a.degree() - b.degree() + 1 : 0);
    ExactScalar lead_inv = b.lead().inverse();
    const auto& bc = b.coeffs();
    while (!rem.empty() && rem.size() >= bc.size()) {
        std::size_t shift = rem.size() - bc.size();
        ExactScalar f = rem.back() * lead_inv;
        quo[shift] = f;
        for (std::size_t i = 0; i < bc.size(); ++i) rem[shift + i] -= f * bc[i];
        rem.pop_back();
        while (!rem.empty() && rem.back().is_zero()) rem.pop_back();
    }
    q = TPoly(std::move(quo));
    r = TPoly(std::move(rem));
}

TPoly monic(const TPoly& p) {
    if (p.is_zero()) return p;
    return p.scaled(p.lead().inverse());
}

TPoly poly_gcd(TPoly a, TPoly b) {
    while (!b.is_zero()) {
        TPoly q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = monic(r);
    }
    return monic(a);
}

TPoly series_inverse(const TPoly& u, int n) {
    ExactScalar u0 = u.coeff(0);
    if (u0.is_zero()) throw DomainError("DivisionByZero", "series inverse of a non-unit");
    ExactScalar inv0 = u0.inverse();
    std::vector<ExactScalar> v(n);
    if (n > 0) v[0] = inv0;
    for (int k = 1; k < n; ++k) {
        ExactScalar acc;
        for (int j = 1; j <= k && j <= u.degree(); ++j)
            if (!u.coeff(j).is_zero()) acc += u.coeff(j) * v[k - j];
        v[k] = -acc * inv0;
    }
    return TPoly(std::move(v));
}

TPoly series_root(const TPoly& u, int k, int n) {
    if (!u.coeff(0).is_one()) throw DomainError("RootNotRepresentable", "series root needs constant term 1");
    TPoly x = (u - TPoly(ExactScalar(1))).truncated(n);
    TPoly acc(ExactScalar(1)), power(ExactScalar(1));
    Rational binom(1), alpha(1, k);
    for (int j = 1; j < n; ++j) {
        binom *= (alpha - (j - 1));
        binom /= j;
        power = (power * x).truncated(n);
        if (power.is_zero()) break;
        acc += power.scaled(ExactScalar(binom));
    }
    return acc.truncated(n);
}

TPoly series_reversion(const TPoly& f, int n) {
    if (f.valuation() != 1) throw DomainError("InvalidSeries", "reversion needs a series of order one");
    TPoly w = f.shifted(-1);
    TPoly g = TPoly::monomial(w.coeff(0).inverse(), 1).truncated(n);
    for (int it = 0; it < n; ++it) {
        TPoly wg = w.compose(g, n);
        TPoly next = series_inverse(wg, n).shifted(1).truncated(n);
        if (next == g) break;
        g = std::move(next);
    }
    return g;
}

std::string to_string(const TPoly& p, const std::string& var) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int k = 0; k <= p.degree(); ++k) {
        const ExactScalar& c = p.coeffs()[k];
        if (c.is_zero()) continue;
        std::string cs = c.to_string();
        bool compound = !c.is_rational() && c.terms().size() > 1;
        std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
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

std::vector<std::pair<TPoly, int>> squarefree_decomposition(const TPoly& p) {
    std::vector<std::pair<TPoly, int>> out;
    if (p.degree() <= 0) return out;
    TPoly f = monic(p);
    TPoly d = f.derivative();
    TPoly a = poly_gcd(f, d);
    TPoly b, c, tmp;
    divmod(f, a, b, tmp);
    divmod(d, a, c, tmp);
    TPoly dd = c - b.derivative();
    for (int i = 1; b.degree() > 0; ++i) {
        TPoly ai = poly_gcd(b, dd);
        TPoly bn, cn;
        divmod(b, ai, bn, tmp);
        divmod(dd, ai, cn, tmp);
        if (ai.degree() > 0) out.emplace_back(ai, i);
        b = bn;
        dd = cn - b.derivative();
    }
    return out;
}

namespace {

bool all_rational(const TPoly& p) {
    for (const auto& c : p.coeffs())
        if (!c.is_rational()) return false;
    return true;
}

std::vector<Integer> integer_coefficients(const TPoly& p) {
    Integer l = 1;
    for (const auto& c : p.coeffs()) {
        Rational r = c.to_rational();
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den_mpz_t());
    }
    std::vector<Integer> out;
    Integer g = 0;
    for (const auto& c : p.coeffs()) {
        Rational r = c.to_rational() * l;
        out.push_back(r.get_num());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.back().get_mpz_t());
    }
    if (g != 0)
        for (auto& x : out) x /= g;
    return out;
}

bool is_prime(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Integer eval_mod(const std::vector<Integer>& a, const Integer& x, const Integer& m) {
    Integer acc = 0;
    for (std::size_t k = a.size(); k-- > 0;) {
        acc = acc * x + a[k];
        acc %= m;
    }
    if (acc < 0) acc += m;
    return acc;
}

std::optional<Rational> reconstruct(const Integer& r, const Integer& m, const Integer& nbound, const Integer& dbound) {
    Integer r0 = m, r1 = r, s0 = 0, s1 = 1;
    while (abs(r1) > nbound) {
        Integer q = r0 / r1;
        Integer r2 = r0 - q * r1, s2 = s0 - q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if (s1 == 0 || abs(s1) > dbound) return std::nullopt;
    Rational out(r1, s1);
    out.canonicalize();
    return out;
}

}  // namespace

std::vector<Rational> rational_roots(const TPoly& p) {
    if (!all_rational(p)) throw DomainError("NotRational", "rational root search needs rational coefficients");
    std::vector<Rational> out;
    if (p.is_zero()) return out;
    int v = p.valuation();
    if (v > 0) out.push_back(Rational(0));
    TPoly q = p.shifted(-v);
    if (q.degree() <= 0) return out;
    TPoly g = poly_gcd(q, q.derivative());
    if (g.degree() > 0) {
        TPoly rem;
        divmod(q, g, q, rem);
    }
    if (q.degree() == 1) {
        out.push_back((-q.coeff(0) / q.coeff(1)).to_rational());
        return out;
    }
    std::vector<Integer> a = integer_coefficients(q);
    std::vector<Integer> da;
    for (std::size_t k = 1; k < a.size(); ++k) da.push_back(a[k] * static_cast<long>(k));
    Integer nbound = abs(a.front()), dbound = abs(a.back());
    Integer bound = 2 * nbound * dbound + 1;
    int tried = 0;
    for (unsigned long ell = 1009; tried < 64; ell += 2) {
        if (!is_prime(ell)) continue;
        ++tried;
        Integer L = ell;
        if (a.back() % L == 0) continue;
        std::vector<unsigned long> am;
        for (const auto& x : a) {
            Integer r = x % L;
            if (r < 0) r += L;
            am.push_back(r.get_ui());
        }
        std::vector<unsigned long> roots;
        bool bad = false;
        for (unsigned long x = 0; x < ell && !bad; ++x) {
            unsigned long acc = 0;
            for (std::size_t k = am.size(); k-- > 0;) acc = (acc * x + am[k]) % ell;
            if (acc != 0) continue;
            if (eval_mod(da, Integer(x), L) == 0) bad = true;
            roots.push_back(x);
        }
        if (bad) continue;
        for (unsigned long r0 : roots) {
            Integer r = r0, M = L;
            while (M < bound) {
                Integer M2 = M * M;
                Integer fr = eval_mod(a, r, M2), dfr = eval_mod(da, r, M2), inv;
                mpz_invert(inv.get_mpz_t(), dfr.get_mpz_t(), M2.get_mpz_t());
                r = (r - fr * inv) % M2;
                if (r < 0) r += M2;
                M = M2;
            }
            if (auto cand = reconstruct(r, M, nbound, dbound)) {
                if (q.eval(ExactScalar(*cand)).is_zero()) out.push_back(*cand);
            }
        }
        return out;
    }
    throw DomainError("RootSearchFailed", "no suitable prime for rational root search");
}

namespace {

std::vector<ExactScalar> solve_squarefree(TPoly a, TowerContext& ctx) {
    std::vector<ExactScalar> out;
    int target = a.degree();
    if (target <= 0) return out;
    if (all_rational(a)) {
        for (const auto& r : rational_roots(a)) {
            out.emplace_back(r);
            TPoly lin(std::vector<ExactScalar>{ExactScalar(-r), ExactScalar(1)}), rem;
            divmod(a, lin, a, rem);
        }
    }
    if (a.degree() == 1) {
        out.push_back(-a.coeff(0) / a.coeff(1));
    } else if (a.degree() == 2) {
        ExactScalar A = a.coeff(2), B = a.coeff(1), C = a.coeff(0);
        ExactScalar disc = B * B - ExactScalar(4) * A * C;
        for (const auto& s : nth_roots(disc, 2, ctx)) out.push_back((-B + s) / (ExactScalar(2) * A));
    } else if (a.degree() > 2) {
        int k = 0;
        for (int j = 1; j <= a.degree(); ++j)
            if (!a.coeff(j).is_zero()) k = std::gcd(k, j);
        if (k <= 1)
            throw DomainError("RootNotRepresentable", "cannot solve " + to_string(a, "X"));
        std::vector<ExactScalar> bc;
        for (int j = 0; j <= a.degree(); j += k) bc.push_back(a.coeff(j));
        for (const auto& [s, m] : find_roots(TPoly(std::move(bc)), ctx))
            for (const auto& r : nth_roots(s, k, ctx)) out.push_back(r);
    }
    if (static_cast<int>(out.size()) != target)
        throw DomainError("RootNotRepresentable", "found " + std::to_string(out.size()) + " of " +
                                                      std::to_string(target) + " roots");
    return out;
}

}  // namespace

std::vector<std::pair<ExactScalar, int>> find_roots(const TPoly& p, TowerContext& ctx) {
    if (p.is_zero()) throw DomainError("ZeroPolynomial", "roots of the zero polynomial");
    std::vector<std::pair<ExactScalar, int>> out;
    int v = p.valuation();
    if (v > 0) out.emplace_back(ExactScalar(), v);
    for (const auto& [f, m] : squarefree_decomposition(p.shifted(-v)))
        for (const auto& r : solve_squarefree(f, ctx)) out.emplace_back(r, m);
    return out;
}

}  // namespace curveorbit
