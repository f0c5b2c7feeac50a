#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "curveorbit/matrix.hpp"

namespace curveorbit {

using Mono3 = std::array<int, 3>;

// Graded lex with x > y > z; the first key in a map is the leading monomial.
struct GradedLexDesc {
    bool operator()(const Mono3& a, const Mono3& b) const {
        int da = a[0] + a[1] + a[2], db = b[0] + b[1] + b[2];
        if (da != db) return da > db;
        return a > b;
    }
};

// Sparse polynomial in x, y, z over a commutative ring R.
template <class R>
class Poly3 {
public:
    using Map = std::map<Mono3, R, GradedLexDesc>;

    Poly3() = default;
    Poly3(const R& c) { add_term({0, 0, 0}, c); }
    static Poly3 monomial(const R& c, const Mono3& m) {
        Poly3 p;
        p.add_term(m, c);
        return p;
    }
    static Poly3 var(int k) {
        Mono3 m{0, 0, 0};
        m[k] = 1;
        return monomial(R(1), m);
    }

    const Map& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    R coeff(const Mono3& m) const {
        auto it = t_.find(m);
        return it == t_.end() ? R(0) : it->second;
    }
    void add_term(const Mono3& m, const R& c) {
        if (is_zero_coeff(c)) return;
        auto [it, fresh] = t_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (is_zero_coeff(it->second)) t_.erase(it);
        }
    }
    int degree() const { return t_.empty() ? -1 : deg(t_.begin()->first); }
    int min_degree() const {
        int d = -1;
        for (const auto& [m, c] : t_) d = (d < 0 || deg(m) < d) ? deg(m) : d;
        return d;
    }
    bool is_homogeneous() const { return t_.empty() || degree() == min_degree(); }
    Poly3 homogeneous_part(int d) const {
        Poly3 out;
        for (const auto& [m, c] : t_)
            if (deg(m) == d) out.t_.emplace(m, c);
        return out;
    }
    const Mono3& leading_monomial() const { return t_.begin()->first; }
    const R& leading_coeff() const { return t_.begin()->second; }

    Poly3 operator-() const {
        Poly3 out(*this);
        for (auto& [m, c] : out.t_) c = -c;
        return out;
    }
    Poly3& operator+=(const Poly3& o) {
        for (const auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    Poly3& operator-=(const Poly3& o) {
        for (const auto& [m, c] : o.t_) add_term(m, -c);
        return *this;
    }
    friend Poly3 operator+(Poly3 a, const Poly3& b) { return a += b; }
    friend Poly3 operator-(Poly3 a, const Poly3& b) { return a -= b; }
    friend Poly3 operator*(const Poly3& a, const Poly3& b) {
        Poly3 out;
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_) out.add_term({ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]}, ca * cb);
        return out;
    }
    Poly3& operator*=(const Poly3& o) { return *this = *this * o; }
    friend bool operator==(const Poly3& a, const Poly3& b) { return a.t_ == b.t_; }
    friend bool operator!=(const Poly3& a, const Poly3& b) { return !(a == b); }

    Poly3 scaled(const R& s) const {
        Poly3 out;
        for (const auto& [m, c] : t_) out.add_term(m, c * s);
        return out;
    }
    Poly3 pow(int e) const {
        Poly3 out(R(1)), base(*this);
        while (e > 0) {
            if (e & 1) out = out * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return out;
    }
    Poly3 derivative(int k) const {
        Poly3 out;
        for (const auto& [m, c] : t_) {
            if (m[k] == 0) continue;
            Mono3 mm = m;
            --mm[k];
            out.add_term(mm, c * R(m[k]));
        }
        return out;
    }
    R eval(const std::array<R, 3>& p) const {
        R acc(0);
        for (const auto& [m, c] : t_) {
            R term = c;
            for (int k = 0; k < 3; ++k)
                for (int e = 0; e < m[k]; ++e) term = term * p[k];
            acc += term;
        }
        return acc;
    }

private:
    static int deg(const Mono3& m) { return m[0] + m[1] + m[2]; }
    static bool is_zero_coeff(const R& x) {
        if constexpr (requires { x.is_zero(); })
            return x.is_zero();
        else
            return x == R(0);
    }

    Map t_;
};

using Form = Poly3<ExactScalar>;

// F(images[0], images[1], images[2]) with coefficients of F mapped into R.
template <class R, class S>
Poly3<R> compose(const Poly3<S>& f, const std::array<Poly3<R>, 3>& images) {
    std::array<std::vector<Poly3<R>>, 3> powers;
    for (int k = 0; k < 3; ++k) powers[k].push_back(Poly3<R>(R(1)));
    Poly3<R> out;
    for (const auto& [m, c] : f.terms()) {
        Poly3<R> term{R(c)};
        for (int k = 0; k < 3; ++k) {
            while (static_cast<int>(powers[k].size()) <= m[k]) powers[k].push_back(powers[k].back() * images[k]);
            if (m[k] > 0) term = term * powers[k][m[k]];
        }
        out += term;
    }
    return out;
}

// F o M: the new x is row 0 of M applied to (x, y, z), and so on.
template <class R, class S>
Poly3<R> substitute_linear(const Poly3<S>& f, const Mat3<R>& m) {
    std::array<Poly3<R>, 3> images;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            Mono3 mono{0, 0, 0};
            mono[c] = 1;
            images[r].add_term(mono, m(r, c));
        }
    return compose(f, images);
}

// Scales so that the graded-lex leading coefficient is 1.
Form normalized(const Form& f);
bool projectively_equal(const Form& a, const Form& b);
Form hessian(const Form& f);
// f / g when g divides f exactly; throws NotDivisible otherwise.
Form divide_exact(Form f, const Form& g);
std::string to_string(const Form& f);

inline Form var_x() { return Form::var(0); }
inline Form var_y() { return Form::var(1); }
inline Form var_z() { return Form::var(2); }

}  // namespace curveorbit
