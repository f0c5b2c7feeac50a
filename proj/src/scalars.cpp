#include "curveorbit/scalars.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <ostream>

namespace curveorbit {

namespace {

Exponents padded(const Exponents& e, std::size_t n) {
    Exponents out(e);
    out.resize(n, 0);
    return out;
}

Terms pad_terms(const Terms& t, std::size_t n) {
    Terms out;
    out.reserve(t.size());
    for (const auto& [e, c] : t) out.emplace_back(padded(e, n), c);
    return out;
}

void add_reduced(std::map<Exponents, Rational>& acc, Exponents m, const Rational& c, const Tower* tower) {
    std::size_t k = m.size();
    while (k-- > 0) {
        const auto& g = tower->generator(k);
        if (m[k] >= g.degree) {
            m[k] -= g.degree;
            for (const auto& [e2, c2] : g.value) {
                Exponents mm(m);
                for (std::size_t j = 0; j < e2.size(); ++j) mm[j] += e2[j];
                add_reduced(acc, std::move(mm), c * c2, tower);
            }
            return;
        }
    }
    auto [it, fresh] = acc.emplace(std::move(m), c);
    if (!fresh) it->second += c;
}

Terms from_map(std::map<Exponents, Rational>& acc) {
    Terms out;
    out.reserve(acc.size());
    for (auto& [e, c] : acc)
        if (sgn(c) != 0) out.emplace_back(e, std::move(c));
    return out;
}

int smallest_prime_factor(int n) {
    for (int p = 2; p * p <= n; ++p)
        if (n % p == 0) return p;
    return n;
}

using SPoly = std::vector<ExactScalar>;

void trim(SPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

SPoly poly_sub(const SPoly& a, const SPoly& b) {
    SPoly out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    trim(out);
    return out;
}

SPoly poly_mul(const SPoly& a, const SPoly& b) {
    if (a.empty() || b.empty()) return {};
    SPoly out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!b[j].is_zero()) out[i + j] += a[i] * b[j];
    }
    trim(out);
    return out;
}

void poly_divmod(const SPoly& a, const SPoly& b, SPoly& q, SPoly& r) {
    r = a;
    q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, ExactScalar());
    ExactScalar lead_inv = b.back().inverse();
    while (!r.empty() && r.size() >= b.size()) {
        std::size_t shift = r.size() - b.size();
        ExactScalar f = r.back() * lead_inv;
        q[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= f * b[i];
        r.pop_back();
        trim(r);
    }
    trim(q);
}

}  // namespace

TowerPtr Tower::extend(const TowerPtr& base, const std::string& name, int degree, const Terms& value) {
    if (degree < 2) throw DomainError("InvalidRadical", "radical degree must be at least 2");
    auto t = std::make_shared<Tower>();
    if (base) t->gens_ = base->gens_;
    for (const auto& g : t->gens_)
        if (g.name == name) throw DomainError("InvalidRadical", "duplicate radical name " + name);
    std::size_t n = t->gens_.size();
    Terms v;
    for (const auto& [e, c] : value) {
        for (std::size_t j = n; j < e.size(); ++j)
            if (e[j] != 0) throw DomainError("InvalidRadical", "radical value must lie in the previous tower");
        Exponents ee(e);
        ee.resize(n, 0);
        v.emplace_back(std::move(ee), c);
    }
    if (v.empty()) throw DomainError("InvalidRadical", "radical value must be nonzero");
    t->gens_.push_back({name, degree, std::move(v)});
    t->parent_ = base;
    return t;
}

std::optional<std::size_t> Tower::find(const std::string& name) const {
    for (std::size_t k = 0; k < gens_.size(); ++k)
        if (gens_[k].name == name) return k;
    return std::nullopt;
}

std::size_t tower_size(const TowerPtr& t) { return t ? t->size() : 0; }

bool is_prefix(const TowerPtr& a, const TowerPtr& b) {
    if (!a || a == b) return true;
    if (!b || a->size() > b->size()) return false;
    const Tower* walk = b.get();
    while (walk && walk->size() > a->size()) walk = walk->parent().get();
    if (walk == a.get()) return true;
    for (std::size_t k = 0; k < a->size(); ++k) {
        const auto& ga = a->generator(k);
        const auto& gb = b->generator(k);
        if (ga.name != gb.name || ga.degree != gb.degree || ga.value != gb.value) return false;
    }
    return true;
}

TowerPtr common_tower(const TowerPtr& a, const TowerPtr& b) {
    if (a == b) return a;
    if (is_prefix(a, b)) return b;
    if (is_prefix(b, a)) return a;
    throw DomainError("IncompatibleTower", "values come from unrelated radical towers");
}

ExactScalar::ExactScalar(const Rational& v) {
    if (sgn(v) == 0) return;
    terms_.emplace_back(Exponents{}, v);
    terms_.back().second.canonicalize();
}

ExactScalar::ExactScalar(TowerPtr tower, Terms terms) : tower_(std::move(tower)) {
    std::size_t n = tower_size(tower_);
    std::map<Exponents, Rational> acc;
    for (auto& [e, c] : terms) {
        if (e.size() > n) throw DomainError("IncompatibleTower", "exponent vector longer than tower");
        c.canonicalize();
        add_reduced(acc, padded(e, n), c, tower_.get());
    }
    terms_ = from_map(acc);
}

ExactScalar ExactScalar::generator(const TowerPtr& tower, std::size_t k) {
    Exponents e(tower_size(tower), 0);
    e.at(k) = 1;
    return ExactScalar(tower, Terms{{e, Rational(1)}});
}

bool ExactScalar::is_one() const {
    return terms_.size() == 1 && terms_[0].second == 1 &&
           std::all_of(terms_[0].first.begin(), terms_[0].first.end(), [](int x) { return x == 0; });
}

bool ExactScalar::is_rational() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const auto& e = terms_[0].first;
    return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
}

Rational ExactScalar::to_rational() const {
    if (!is_rational()) throw DomainError("NotRational", to_string() + " is not rational");
    return terms_.empty() ? Rational(0) : terms_[0].second;
}

ExactScalar ExactScalar::lifted(const TowerPtr& t) const {
    if (t == tower_) return *this;
    if (!is_prefix(tower_, t)) throw DomainError("IncompatibleTower", "cannot lift into a non-extension tower");
    ExactScalar out;
    out.tower_ = t;
    out.terms_ = pad_terms(terms_, tower_size(t));
    return out;
}

ExactScalar ExactScalar::operator-() const {
    ExactScalar out(*this);
    for (auto& tc : out.terms_) tc.second = -tc.second;
    return out;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
    if (o.terms_.empty()) return *this;
    TowerPtr t = common_tower(tower_, o.tower_);
    std::size_t n = tower_size(t);
    if (t != tower_) {
        terms_ = pad_terms(terms_, n);
        tower_ = t;
    }
    const Terms& ot = (o.tower_ == t) ? o.terms_ : pad_terms(o.terms_, n);
    Terms out;
    out.reserve(terms_.size() + ot.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < ot.size()) {
        if (j == ot.size() || (i < terms_.size() && terms_[i].first < ot[j].first)) {
            out.push_back(std::move(terms_[i++]));
        } else if (i == terms_.size() || ot[j].first < terms_[i].first) {
            out.push_back(ot[j++]);
        } else {
            Rational s = terms_[i].second + ot[j].second;
            if (sgn(s) != 0) out.emplace_back(std::move(terms_[i].first), std::move(s));
            ++i;
            ++j;
        }
    }
    terms_ = std::move(out);
    return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) { return *this += -o; }

ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
    if (a.terms_.empty() || b.terms_.empty()) return ExactScalar();
    if (a.is_rational() && b.is_rational()) {
        ExactScalar out(a.terms_[0].second * b.terms_[0].second);
        return out.lifted(common_tower(a.tower_, b.tower_));
    }
    TowerPtr t = common_tower(a.tower_, b.tower_);
    std::size_t n = tower_size(t);
    if (b.is_rational() || a.is_rational()) {
        const ExactScalar& s = a.is_rational() ? b : a;
        const Rational& r = a.is_rational() ? a.terms_[0].second : b.terms_[0].second;
        ExactScalar out = s.lifted(t);
        for (auto& tc : out.terms_) tc.second *= r;
        return out;
    }
    Terms at = pad_terms(a.terms_, n), bt = pad_terms(b.terms_, n);
    std::map<Exponents, Rational> acc;
    for (const auto& [ea, ca] : at)
        for (const auto& [eb, cb] : bt) {
            Exponents m(n);
            for (std::size_t k = 0; k < n; ++k) m[k] = ea[k] + eb[k];
            add_reduced(acc, std::move(m), ca * cb, t.get());
        }
    ExactScalar out;
    out.tower_ = t;
    out.terms_ = from_map(acc);
    return out;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) { return *this = *this * o; }
ExactScalar& ExactScalar::operator/=(const ExactScalar& o) { return *this = *this / o; }

ExactScalar ExactScalar::inverse() const {
    if (is_zero()) throw DomainError("DivisionByZero", "inverse of zero");
    if (is_rational()) return ExactScalar(1 / terms_[0].second).lifted(tower_);
    std::size_t n = tower_size(tower_);
    std::size_t top = n - 1;
    const TowerPtr& parent = tower_->parent();
    bool uses_top = std::any_of(terms_.begin(), terms_.end(), [&](const auto& tc) { return tc.first[top] != 0; });
    const auto& g = tower_->generator(top);
    SPoly coeffs(static_cast<std::size_t>(g.degree));
    std::vector<Terms> parts(g.degree);
    for (const auto& [e, c] : terms_) {
        Exponents low(e.begin(), e.end() - 1);
        parts[e[top]].emplace_back(std::move(low), c);
    }
    for (int k = 0; k < g.degree; ++k) coeffs[k] = ExactScalar(parent, parts[k]);
    if (!uses_top) return coeffs[0].inverse().lifted(tower_);
    trim(coeffs);
    SPoly modulus(g.degree + 1);
    modulus[0] = -ExactScalar(parent, g.value);
    modulus[g.degree] = ExactScalar(1).lifted(parent);
    SPoly r0 = modulus, r1 = coeffs, s0, s1{ExactScalar(1)};
    while (!r1.empty()) {
        SPoly q, r;
        poly_divmod(r0, r1, q, r);
        SPoly s2 = poly_sub(s0, poly_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r0.size() != 1)
        throw DomainError("ZeroDivisor", to_string() + " is a zero divisor; relation for " + g.name + " is reducible");
    ExactScalar scale = r0[0].inverse();
    ExactScalar out = ExactScalar().lifted(tower_);
    ExactScalar gen = generator(tower_, top);
    ExactScalar power = ExactScalar(1).lifted(tower_);
    for (std::size_t k = 0; k < s0.size(); ++k) {
        if (!s0[k].is_zero()) out += (s0[k] * scale).lifted(tower_) * power;
        power = power * gen;
    }
    return out;
}

ExactScalar ExactScalar::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    ExactScalar result = ExactScalar(1).lifted(tower_), base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

bool operator==(const ExactScalar& a, const ExactScalar& b) {
    if (a.tower_ == b.tower_) return a.terms_ == b.terms_;
    if (a.terms_.size() != b.terms_.size()) return false;
    TowerPtr t = common_tower(a.tower_, b.tower_);
    return pad_terms(a.terms_, tower_size(t)) == pad_terms(b.terms_, tower_size(t));
}

bool operator<(const ExactScalar& a, const ExactScalar& b) {
    TowerPtr t = common_tower(a.tower_, b.tower_);
    Terms at = pad_terms(a.terms_, tower_size(t)), bt = pad_terms(b.terms_, tower_size(t));
    std::size_t n = std::min(at.size(), bt.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (at[i].first != bt[i].first) return at[i].first < bt[i].first;
        int c = cmp(at[i].second, bt[i].second);
        if (c != 0) return c < 0;
    }
    return at.size() < bt.size();
}

std::string ExactScalar::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
        std::string mono;
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (e[k] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += tower_->generator(k).name;
            if (e[k] > 1) mono += "^" + std::to_string(e[k]);
        }
        std::string term;
        if (mono.empty())
            term = c.get_str();
        else if (c == 1)
            term = mono;
        else if (c == -1)
            term = "-" + mono;
        else
            term = c.get_str() + "*" + mono;
        if (!out.empty() && term[0] != '-') out += "+";
        out += term;
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const ExactScalar& s) { return os << s.to_string(); }

ExactScalar TowerContext::adjoin(int degree, const ExactScalar& value) {
    absorb(value.tower());
    std::string name;
    if (value.is_rational()) {
        Rational v = value.to_rational();
        if (degree == 2 && v == -1)
            name = "i";
        else if (degree == 2 && v.get_den() == 1)
            name = (v > 0 ? "sqrt" : "sqrtm") + Integer(abs(v.get_num())).get_str();
    }
    auto taken = [&](const std::string& s) { return tower_ && tower_->find(s).has_value(); };
    if (name.empty() || taken(name)) {
        std::size_t k = tower_size(tower_) + 1;
        while (taken("r" + std::to_string(k))) ++k;
        name = "r" + std::to_string(k);
    }
    tower_ = Tower::extend(tower_, name, degree, value.lifted(tower_).terms());
    return ExactScalar::generator(tower_, tower_size(tower_) - 1);
}

std::optional<int> root_of_unity_order(const ExactScalar& u, int max_order) {
    if (u.is_zero()) return std::nullopt;
    ExactScalar p = u;
    for (int k = 1; k <= max_order; ++k) {
        if (p.is_one()) return k;
        p = p * u;
    }
    return std::nullopt;
}

std::optional<Rational> rational_root(const Rational& v, int n) {
    if (n <= 0) return std::nullopt;
    if (sgn(v) == 0) return Rational(0);
    if (sgn(v) < 0 && n % 2 == 0) return std::nullopt;
    Integer num = abs(v.get_num()), den = v.get_den(), rn, rd;
    if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), n)) return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), n)) return std::nullopt;
    Rational r(rn, rd);
    r.canonicalize();
    return sgn(v) < 0 ? Rational(-r) : r;
}

namespace {

// Searches roots of the form q * g with q rational and g a tower monomial.
std::optional<ExactScalar> monomial_root(const ExactScalar& c, int p, const TowerPtr& tower) {
    std::size_t n = tower_size(tower);
    Exponents e(n, 0);
    while (true) {
        ExactScalar g(tower, Terms{{e, Rational(1)}});
        try {
            ExactScalar ratio = c / g.pow(p);
            if (ratio.is_rational())
                if (auto q = rational_root(ratio.to_rational(), p)) return ExactScalar(*q) * g;
        } catch (const DomainError&) {
        }
        std::size_t k = 0;
        while (k < n && ++e[k] == tower->generator(k).degree) e[k++] = 0;
        if (k == n) break;
    }
    return std::nullopt;
}

void push_unique(std::vector<ExactScalar>& out, const ExactScalar& v) {
    for (const auto& w : out)
        if (w == v) return;
    out.push_back(v);
}

std::vector<ExactScalar> prime_roots_of_unity(int p, TowerContext& ctx) {
    std::vector<ExactScalar> out{ExactScalar(1)};
    if (p == 2) {
        out.push_back(ExactScalar(-1));
        return out;
    }
    if (p == 3) {
        auto s = monomial_root(ExactScalar(-3), 2, ctx.tower());
        if (!s && ctx.allow_extension()) s = ctx.adjoin(2, ExactScalar(-3));
        if (s) {
            ExactScalar w = (ExactScalar(-1) + *s) / ExactScalar(2);
            out.push_back(w);
            out.push_back(w * w);
        }
        return out;
    }
    std::size_t n = tower_size(ctx.tower());
    Exponents e(n, 0);
    while (n > 0) {
        std::size_t k = 0;
        while (k < n && ++e[k] == ctx.tower()->generator(k).degree) e[k++] = 0;
        if (k == n) break;
        ExactScalar g(ctx.tower(), Terms{{e, Rational(1)}});
        for (const ExactScalar& z : {g, -g})
            if (z.pow(p).is_one()) push_unique(out, z);
    }
    return out;
}

// Adjoins a p-th root of c. A rational c = num/den is reduced to an integer
// with small p-th power factors removed, so new generators get readable names.
ExactScalar adjoin_reduced(const ExactScalar& c, int p, TowerContext& ctx) {
    if (!c.is_rational()) return ctx.adjoin(p, c);
    Rational v = c.to_rational();
    Integer den = v.get_den();
    Integer k = v.get_num(), s = 1, dp;
    mpz_pow_ui(dp.get_mpz_t(), den.get_mpz_t(), p - 1);
    k *= dp;
    for (long q = 2; q < 1000; ++q) {
        Integer qp;
        mpz_ui_pow_ui(qp.get_mpz_t(), q, p);
        while (k % qp == 0) {
            k /= qp;
            s *= q;
        }
    }
    return ExactScalar(Rational(s) / den) * ctx.adjoin(p, ExactScalar(k));
}

std::vector<ExactScalar> prime_roots(const ExactScalar& c, int p, TowerContext& ctx) {
    auto r = monomial_root(c, p, ctx.tower());
    if (!r) {
        if (!ctx.allow_extension())
            throw DomainError("RootNotRepresentable",
                              "no " + std::to_string(p) + "-th root of " + c.to_string() + " in the current tower");
        r = adjoin_reduced(c, p, ctx);
    }
    std::vector<ExactScalar> out;
    for (const auto& z : prime_roots_of_unity(p, ctx)) push_unique(out, *r * z);
    return out;
}

}  // namespace

std::vector<ExactScalar> nth_roots(const ExactScalar& c, int n, TowerContext& ctx) {
    if (n <= 0) throw std::invalid_argument("nth_roots: n must be positive");
    ctx.absorb(c.tower());
    if (c.is_zero()) return {ExactScalar()};
    if (n == 1) return {c};
    int p = smallest_prime_factor(n);
    std::vector<ExactScalar> base = prime_roots(c, p, ctx);
    if (p == n) return base;
    std::vector<ExactScalar> out;
    for (const auto& r : base)
        for (const auto& s : nth_roots(r, n / p, ctx)) push_unique(out, s);
    return out;
}

std::vector<ExactScalar> nth_roots(const ExactScalar& c, int n, bool allow_extension) {
    TowerContext ctx(c.tower(), allow_extension);
    return nth_roots(c, n, ctx);
}

}  // namespace curveorbit
