#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "curveorbit/forms.hpp"

namespace curveorbit {

using Point = std::array<ExactScalar, 3>;
// Coefficients (a, b, c) of the linear form a*x + b*y + c*z.
using Line = std::array<ExactScalar, 3>;

struct Flag {
    Point point;
    Line line;
};

// Scales so that the first nonzero entry is 1.
Point normalize_point(Point p);
bool same_point(const Point& a, const Point& b);
Point cross(const Point& a, const Point& b);
ExactScalar dot(const Line& l, const Point& p);
Form line_form(const Line& l);
Point transform_point(const Mat3s& m, const Point& p);
std::string to_string(const Point& p);

// A plane curve given as a product of factors with multiplicities.
class PlaneCurve {
public:
    PlaneCurve() = default;
    PlaneCurve(std::vector<std::pair<Form, int>> factors, TowerPtr tower = nullptr);

    const std::vector<std::pair<Form, int>>& factors() const { return factors_; }
    const TowerPtr& tower() const { return tower_; }
    int degree() const { return degree_; }
    // Expanded product with multiplicities.
    const Form& form() const { return form_; }
    // Product of the distinct factors.
    const Form& support() const { return support_; }
    bool is_linear_factor(std::size_t k) const { return factors_[k].first.degree() == 1; }

private:
    std::vector<std::pair<Form, int>> factors_;
    TowerPtr tower_;
    int degree_ = 0;
    Form form_;
    Form support_;
};

struct TangentCone {
    int multiplicity = 0;
    // Lowest-order part of F(p + v), a form in v.
    Form cone;
    std::vector<std::pair<Line, int>> lines;
};

int multiplicity_at(const Form& f, const Point& p);
TangentCone tangent_cone(const Form& f, const Point& p, TowerContext& ctx);
TangentCone tangent_cone(const PlaneCurve& c, const Point& p, TowerContext& ctx);

// M with M(1,0,0)^T proportional to the flag point and L o M proportional to z.
Mat3s flag_normalizer(const Flag& flag, const std::optional<Point>& aux = std::nullopt);

enum class PointKind { Smooth, Flex, Singular };
const char* to_string(PointKind k);
PointKind hessian_flex_test(const PlaneCurve& c, const Point& p);

struct SpecialPoint {
    Point point;
    PointKind kind;
};

// Rational singular points and rational flexes of the support.
std::vector<SpecialPoint> find_special_points(const PlaneCurve& c, unsigned seed, bool include_flexes = true);

// Smallest-height rational point of factor k that is a smooth non-flex point of the support.
std::optional<Point> find_witness_point(const PlaneCurve& c, std::size_t k);

// Height of a point: the largest absolute coordinate of its primitive integer representative.
std::optional<Integer> point_height(const Point& p);

// Resultant in y of two polynomials in x, y (z = 1) with rational coefficients,
// as a polynomial in x. Both must have a constant nonzero leading coefficient in y.
TPoly resultant_y(const Form& f, const Form& g);

}  // namespace curveorbit
