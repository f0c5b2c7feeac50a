#pragma once

#include <array>
#include <string>
#include <vector>

#include "curveorbit/scalars.hpp"

namespace curveorbit {

// Polynomial in H modulo H^9.
class TruncH {
public:
    static constexpr int kOrder = 8;

    TruncH() = default;
    TruncH(const Rational& constant) {
        c_[0] = constant;
        c_[0].canonicalize();
    }
    static TruncH monomial(const Rational& c, int e);
    static TruncH from_coefficients(const std::vector<Rational>& coeffs, int first_exponent = 0);

    const Rational& operator[](int k) const { return c_[k]; }
    Rational& operator[](int k) { return c_[k]; }
    bool is_zero() const;

    TruncH& operator+=(const TruncH& o);
    TruncH& operator-=(const TruncH& o);
    TruncH& operator*=(const TruncH& o);
    friend TruncH operator+(TruncH a, const TruncH& b) { return a += b; }
    friend TruncH operator-(TruncH a, const TruncH& b) { return a -= b; }
    friend TruncH operator*(TruncH a, const TruncH& b) { return a *= b; }
    friend TruncH operator-(const TruncH& a) { return TruncH() - a; }
    friend bool operator==(const TruncH& a, const TruncH& b) { return a.c_ == b.c_; }

    TruncH scaled(const Rational& s) const;
    // Requires a zero constant term.
    TruncH exp() const;
    TruncH antiderivative() const;
    TruncH pow(int e) const;

private:
    std::array<Rational, kOrder + 1> c_{};
};

std::string to_string(const TruncH& p);

// exp(a H)
TruncH exp_linear(const Rational& a);

TruncH app_assemble(int n, const std::vector<TruncH>& contributions);

struct OrbitDegree {
    Integer predegree;
    Rational degree;
};
OrbitDegree predegree_and_degree(const TruncH& app, int orbit_dim, int stabilizer_order);

// A line of multiplicity m meeting the rest of the curve with the given multiplicities.
TruncH contribution_type_I(int m, const std::vector<int>& intersections, int n);
TruncH contribution_type_II(int m, int delta, int n);
TruncH contribution_flex(int m);
// Intersection of a line of multiplicity m1 with a nonsingular branch of multiplicity m2.
TruncH contribution_node(int m1, int m2);
TruncH contribution_star_typeIII(int d);
// Coefficients of H^3 .. H^8.
TruncH contribution_raw(const std::vector<Rational>& coeffs);

}  // namespace curveorbit
