#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "curveorbit/curves.hpp"

namespace curveorbit {

struct LatticePoint {
    int j = 0;
    int k = 0;
    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

// One side of the polygon, from (j0,k0) to (j1,k1) with j0 < j1 and k0 > k1.
struct PolygonSide {
    LatticePoint start;
    LatticePoint end;
    int b = 0;
    int c = 0;
    int segments = 0;
    // Restriction of F to the side, as a form in the normalized frame.
    Form polynomial;
    Rational slope() const { return Rational(-b) / c; }
    bool in_range() const { return b < c; }
};

struct NewtonPolygonData {
    Flag flag;
    // Frame from flag_normalizer; the local equation is F o frame at x = 1.
    Mat3s frame;
    int degree = 0;
    std::vector<LatticePoint> support;
    std::vector<LatticePoint> vertices;
    std::vector<PolygonSide> sides;

    std::vector<PolygonSide> sides_in_range() const;
};

NewtonPolygonData newton_polygon(const PlaneCurve& c, const Flag& flag, const std::optional<Point>& aux = std::nullopt);
// Polygon of a form already written in a frame where the flag is ((1:0:0), z = 0).
NewtonPolygonData newton_polygon_local(const Form& f);

// G = x^qbar y^r z^q prod_j (y^c + rho_j x^(c-b) z^b)
struct SideDecomposition {
    int qbar = 0;
    int r = 0;
    int q = 0;
    int segments = 0;
    int b = 0;
    int c = 0;
    std::vector<ExactScalar> rho;
};

struct SideLimit {
    Form limit;
    SideDecomposition parts;
};

SideLimit side_limit(const NewtonPolygonData& poly, const PolygonSide& side, TowerContext& ctx);

using SeriesTerms = std::vector<std::pair<Rational, ExactScalar>>;

// z = sum gamma y^lambda in the normalized frame, or y = sum gamma z^lambda when swapped.
struct PuiseuxBranch {
    SeriesTerms terms;
    // Terms with exponent below this bound are final.
    Rational precision;
    // The series is a finite exact solution.
    bool exact = false;
    bool swapped = false;
    int factor = 0;
    // Copy index among repeated copies of a multiple factor.
    int copy = 0;
    // Index of the branch within its factor; repeated copies share it.
    int seq = 0;
    int local_factor = 0;

    std::optional<Rational> leading_exponent() const;
    // Tangent to z = 0.
    bool tangent() const;
    ExactScalar coeff(const Rational& e) const;
    bool known_through(const Rational& e) const { return exact || precision > e; }
};

std::vector<PuiseuxBranch> puiseux_branches(const PlaneCurve& c, const Flag& flag, const Rational& precision,
                                            TowerContext& ctx, const std::optional<Point>& aux = std::nullopt);
// Branches of the factors already in a normalized frame at (1:0:0) with flag line z = 0.
std::vector<PuiseuxBranch> puiseux_branches_local(const std::vector<std::pair<Form, int>>& factors,
                                                  const Rational& precision, TowerContext& ctx);

// First exponent where two series differ; absent when they agree to the known precision.
std::optional<Rational> first_difference(const PuiseuxBranch& a, const PuiseuxBranch& b);

struct TruncationGroup {
    SeriesTerms truncation;
    std::vector<std::size_t> members;
    std::vector<ExactScalar> gamma;
};

struct Characteristic {
    Rational value;
    std::vector<TruncationGroup> groups;
};

// Input: the branches at one point; only those tangent to z = 0 take part.
std::vector<Characteristic> characteristics(const std::vector<PuiseuxBranch>& branches);

struct Truncation {
    Rational characteristic;
    SeriesTerms terms;
    Rational lambda0;
    Rational big_b;
    int a = 0;
    int b = 0;
    int c = 0;
    int ell = 0;
    int h = 0;
};

Truncation truncation_type(const Rational& characteristic, const SeriesTerms& terms);

// True when g(y) is obtained from f(y) by y^(1/a) -> xi y^(1/a) for some a-th root of unity xi.
bool siblings(const SeriesTerms& f, const SeriesTerms& g, int a);
std::vector<std::vector<std::size_t>> sibling_classes(const std::vector<Truncation>& truncations);

std::string to_string(const SeriesTerms& s, const std::string& var = "y");

}  // namespace curveorbit
