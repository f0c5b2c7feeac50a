#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "curveorbit/scalars.hpp"

namespace curveorbit {

// Dense univariate polynomial over a commutative ring R, low degree first.
template <class R>
class UPoly {
public:
    UPoly() = default;
    UPoly(int c) : UPoly(R(c)) {}
    UPoly(const R& c) {
        if (!is_zero_coeff(c)) c_.push_back(c);
    }
    explicit UPoly(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }

    static UPoly monomial(const R& c, int e) {
        UPoly p;
        if (is_zero_coeff(c)) return p;
        p.c_.assign(e + 1, R(0));
        p.c_[e] = c;
        return p;
    }
    static UPoly variable() { return monomial(R(1), 1); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    // Order of vanishing at 0; -1 for the zero polynomial.
    int valuation() const {
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (!is_zero_coeff(c_[k])) return static_cast<int>(k);
        return -1;
    }
    R coeff(int k) const { return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : R(0); }
    const R& lead() const { return c_.back(); }
    const std::vector<R>& coeffs() const { return c_; }
    void set_coeff(int k, const R& v) {
        if (k >= static_cast<int>(c_.size())) c_.resize(k + 1, R(0));
        c_[k] = v;
        trim();
    }

    UPoly operator-() const {
        UPoly out(*this);
        for (auto& x : out.c_) x = -x;
        return out;
    }
    UPoly& operator+=(const UPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    UPoly& operator-=(const UPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    UPoly& operator*=(const UPoly& o) { return *this = *this * o; }
    friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
    friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.c_.empty() || b.c_.empty()) return UPoly();
        std::vector<R> out(a.c_.size() + b.c_.size() - 1, R(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (is_zero_coeff(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                if (!is_zero_coeff(b.c_[j])) out[i + j] += a.c_[i] * b.c_[j];
        }
        return UPoly(std::move(out));
    }
    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

    UPoly scaled(const R& s) const {
        UPoly out(*this);
        for (auto& x : out.c_) x = x * s;
        out.trim();
        return out;
    }
    // Reduction modulo t^n.
    UPoly truncated(int n) const {
        if (n <= 0) return UPoly();
        UPoly out(*this);
        if (static_cast<int>(out.c_.size()) > n) out.c_.resize(n);
        out.trim();
        return out;
    }
    // Multiplication by t^k; k < 0 drops the low terms.
    UPoly shifted(int k) const {
        if (c_.empty()) return UPoly();
        std::vector<R> out;
        if (k >= 0) {
            out.assign(k, R(0));
            out.insert(out.end(), c_.begin(), c_.end());
        } else if (-k < static_cast<int>(c_.size())) {
            out.assign(c_.begin() + (-k), c_.end());
        }
        return UPoly(std::move(out));
    }
    UPoly derivative() const {
        std::vector<R> out;
        for (std::size_t k = 1; k < c_.size(); ++k) out.push_back(c_[k] * R(static_cast<int>(k)));
        return UPoly(std::move(out));
    }
    R eval(const R& x) const {
        R acc(0);
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
        return acc;
    }
    // p(q(t)); with n > 0 the result is reduced modulo t^n throughout.
    UPoly compose(const UPoly& q, int n = -1) const {
        UPoly acc;
        for (std::size_t k = c_.size(); k-- > 0;) {
            acc = acc * q + UPoly(c_[k]);
            if (n > 0) acc = acc.truncated(n);
        }
        return acc;
    }
    UPoly pow(int e) const {
        UPoly out(R(1)), base(*this);
        while (e > 0) {
            if (e & 1) out = out * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return out;
    }

private:
    static bool is_zero_coeff(const R& x) {
        if constexpr (requires { x.is_zero(); })
            return x.is_zero();
        else
            return x == R(0);
    }
    void trim() {
        while (!c_.empty() && is_zero_coeff(c_.back())) c_.pop_back();
    }

    std::vector<R> c_;
};

using TPoly = UPoly<ExactScalar>;

// Field operations over ExactScalar.
void divmod(const TPoly& a, const TPoly& b, TPoly& q, TPoly& r);
TPoly poly_gcd(TPoly a, TPoly b);
TPoly monic(const TPoly& p);
// Inverse of a power series unit modulo t^n.
TPoly series_inverse(const TPoly& u, int n);
// u^(1/k) modulo t^n for a unit u whose constant term is 1.
TPoly series_root(const TPoly& u, int k, int n);
// Compositional inverse of t*w(t) with w(0) = 1, modulo t^n.
TPoly series_reversion(const TPoly& f, int n);
std::string to_string(const TPoly& p, const std::string& var = "t");

// Squarefree decomposition: pairs (factor, multiplicity).
std::vector<std::pair<TPoly, int>> squarefree_decomposition(const TPoly& p);

// All roots with multiplicity. Linear, quadratic and binomial-type factors and
// rational roots are handled; anything else throws RootNotRepresentable.
std::vector<std::pair<ExactScalar, int>> find_roots(const TPoly& p, TowerContext& ctx);

// Distinct rational roots of a polynomial with rational coefficients.
std::vector<Rational> rational_roots(const TPoly& p);

}  // namespace curveorbit
