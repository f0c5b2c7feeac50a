#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "curveorbit/branches.hpp"

namespace curveorbit {

// Exit codes: 0 success, 1 usage or parse error, 2 domain error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Lattice picture of the support: 'o' vertex, '+' point on a side with b < c,
// '*' other support point, '.' empty. Row k is printed top down.
std::string ascii_polygon(const NewtonPolygonData& np);

}  // namespace curveorbit
