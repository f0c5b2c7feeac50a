#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curveorbit/germs.hpp"

namespace curveorbit {

enum class PncType { I, II, III, IV, V };
const char* to_string(PncType t);

using P1Point = std::array<ExactScalar, 2>;

struct PncDetail {
    int m = 0;
    int A = 0;
    int S = 0;
    Rational W;
    int ell = 0;
    int a = 0;
    int b = 0;
    int c = 0;
    Rational characteristic;
    std::optional<SideDecomposition> side;
    std::vector<ExactScalar> gamma;
    std::vector<Rational> branch_weights;
};

struct PncMarking {
    MatrixGerm germ;
    // Flat limit of the germ in the input coordinates.
    Form limit;
    // The same limit in the flag frame.
    Form frame_limit;
    Mat3s frame;
    std::optional<Line> line;
    int weight = 0;
    Rational contribution;
    SeriesTerms truncation;
    // A sibling germ marking an already counted type V component.
    bool sibling = false;
};

struct PncComponent {
    PncType type = PncType::I;
    std::optional<int> factor;
    std::optional<Point> point;
    Rational multiplicity;
    PncDetail detail;
    std::vector<PncMarking> markings;
};

struct PncError {
    std::string where;
    std::string kind;
    std::string message;
};

struct PncOptions {
    unsigned seed = 1;
    // Witness points for type II, keyed by factor index.
    std::map<int, Point> witnesses;
    int max_order = 24;
};

struct PncReport {
    std::vector<SpecialPoint> points;
    std::vector<PncComponent> components;
    std::vector<std::string> warnings;
    std::vector<PncError> errors;
    Rational total() const;
};

std::vector<PncComponent> type_I_components(const PlaneCurve& c);
std::vector<PncComponent> type_II_components(const PlaneCurve& c, const std::map<int, Point>& witnesses = {});
std::vector<PncComponent> type_III_components(const PlaneCurve& c, const std::vector<Point>& points, TowerContext& ctx);
std::vector<PncComponent> type_IV_components(const PlaneCurve& c, const Point& p, TowerContext& ctx);
std::vector<PncComponent> type_V_components(const PlaneCurve& c, const Point& p, TowerContext& ctx,
                                            std::vector<std::string>* warnings = nullptr);

// Moebius maps preserving a weighted point set on P^1.
int pgl2_stabilizer_count(const std::vector<std::pair<P1Point, int>>& points);
// Scalars u with u * rho = rho as multisets.
int u_automorphism_count(const std::vector<ExactScalar>& rho);
// Twice the number of maps g -> u g + v preserving the multiset.
int affine_automorphism_count(const std::vector<ExactScalar>& gamma);

// Predicted type V limit in the flag frame.
Form type_V_limit_formula(int degree, const Truncation& t, const std::vector<ExactScalar>& gamma);

// Points default to the automatic search when empty.
PncReport assemble_pnc(const PlaneCurve& c, const std::vector<Point>& points, TowerContext& ctx,
                       const PncOptions& options = {});

}  // namespace curveorbit
