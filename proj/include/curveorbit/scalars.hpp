#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curveorbit/errors.hpp"

namespace curveorbit {

using Integer = mpz_class;
using Rational = mpq_class;
using ExactRational = Rational;

class Tower;
using TowerPtr = std::shared_ptr<const Tower>;
using Exponents = std::vector<int>;
// Sparse element of Q[g_1..g_k]; sorted by exponent vector, no zero coefficients.
using Terms = std::vector<std::pair<Exponents, Rational>>;

// Linear tower Q(g_1)(g_2)... with relations g_k^{n_k} = c_k, c_k in the previous level.
// Immutable; a tower whose generator list starts with another's is an extension of it.
class Tower {
public:
    struct Generator {
        std::string name;
        int degree;
        Terms value;
    };

    static TowerPtr extend(const TowerPtr& base, const std::string& name, int degree, const Terms& value);

    std::size_t size() const { return gens_.size(); }
    const Generator& generator(std::size_t k) const { return gens_[k]; }
    const TowerPtr& parent() const { return parent_; }
    std::optional<std::size_t> find(const std::string& name) const;

private:
    std::vector<Generator> gens_;
    TowerPtr parent_;
};

std::size_t tower_size(const TowerPtr& t);
// True when every generator of a appears, in order, at the start of b.
bool is_prefix(const TowerPtr& a, const TowerPtr& b);
TowerPtr common_tower(const TowerPtr& a, const TowerPtr& b);

class ExactScalar {
public:
    ExactScalar() = default;
    ExactScalar(int v) : ExactScalar(Rational(v)) {}
    ExactScalar(long v) : ExactScalar(Rational(v)) {}
    ExactScalar(const Integer& v) : ExactScalar(Rational(v)) {}
    ExactScalar(const Rational& v);
    ExactScalar(TowerPtr tower, Terms terms);

    static ExactScalar generator(const TowerPtr& tower, std::size_t k);

    const TowerPtr& tower() const { return tower_; }
    const Terms& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    bool is_rational() const;
    Rational to_rational() const;
    ExactScalar lifted(const TowerPtr& t) const;

    ExactScalar operator-() const;
    ExactScalar& operator+=(const ExactScalar& o);
    ExactScalar& operator-=(const ExactScalar& o);
    ExactScalar& operator*=(const ExactScalar& o);
    ExactScalar& operator/=(const ExactScalar& o);
    friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);
    friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) { return a * b.inverse(); }

    ExactScalar inverse() const;
    ExactScalar pow(long e) const;

    friend bool operator==(const ExactScalar& a, const ExactScalar& b);
    friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }
    // Total order used for canonical sorting; not a field order.
    friend bool operator<(const ExactScalar& a, const ExactScalar& b);

    std::string to_string() const;

private:
    TowerPtr tower_;
    Terms terms_;
};

std::ostream& operator<<(std::ostream& os, const ExactScalar& s);

// Owns the growing tower used by one computation. Roots that need a new
// radical extend it when extensions are allowed.
class TowerContext {
public:
    explicit TowerContext(TowerPtr base = nullptr, bool allow_extension = true)
        : tower_(std::move(base)), allow_extension_(allow_extension) {}

    const TowerPtr& tower() const { return tower_; }
    bool allow_extension() const { return allow_extension_; }
    void absorb(const TowerPtr& t) { tower_ = common_tower(tower_, t); }
    // Adjoins g with g^degree = value and returns g.
    ExactScalar adjoin(int degree, const ExactScalar& value);

private:
    TowerPtr tower_;
    bool allow_extension_;
};

std::optional<int> root_of_unity_order(const ExactScalar& u, int max_order);

// All n-th roots of c found in the context tower, extending it when allowed
// and no root is present. Throws RootNotRepresentable otherwise.
std::vector<ExactScalar> nth_roots(const ExactScalar& c, int n, TowerContext& ctx);
std::vector<ExactScalar> nth_roots(const ExactScalar& c, int n, bool allow_extension = false);

// Rational r with r^n = v, if it exists.
std::optional<Rational> rational_root(const Rational& v, int n);

}  // namespace curveorbit
