#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curveorbit/germs.hpp"
#include "curveorbit/orbitdeg.hpp"

namespace curveorbit {

// Text inputs share one scalar grammar: integers, p/q, i, and declared radicals
// (`radical s^2 = 2`). Errors are ParseError with 1-based line and column.

std::string read_text_file(const std::string& path);

// Lines `factor: <poly>` or `factor: (<poly>) ^ <m>`.
PlaneCurve parse_curve(const std::string& text, TowerContext& ctx);
// Nine comma-separated entries in t, row-major.
MatrixGerm parse_germ(const std::string& text, TowerContext& ctx);

struct PointHint {
    Point point;
    std::optional<Line> tangent;
};

struct PointsInput {
    std::vector<PointHint> points;
    // `witness: (a : b : c)` lines, for the type II search.
    std::vector<Point> witnesses;
};

// Lines `point: (a : b : c)`, optionally followed by `tangent: <linear form>`.
PointsInput parse_points(const std::string& text, TowerContext& ctx);

// "(a : b : c)"
Point parse_point(const std::string& text, TowerContext& ctx);
// A linear form such as "y - 2*z".
Line parse_line(const std::string& text, TowerContext& ctx);
Form parse_form(const std::string& text, TowerContext& ctx);
TPoly parse_series(const std::string& text, TowerContext& ctx);

struct ContributionSpec {
    std::string label;
    TruncH value;
};

struct AppInput {
    std::optional<int> n;
    std::optional<int> dim;
    std::optional<int> stabilizer;
    std::vector<ContributionSpec> contributions;
};

// `n:`, `dim:`, `stabilizer:` and `contrib:` lines. A contribution is either
// rationals c3 .. c8 or one of typeI(m, n, m1, ..), typeII(m, delta, n), flex(m),
// node(m1, m2), star(d), optionally followed by `* k`.
AppInput parse_contributions(const std::string& text);
ContributionSpec parse_contribution(const std::string& text, int line = 1, int column = 1);

}  // namespace curveorbit
