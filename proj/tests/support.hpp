#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "curveorbit/io.hpp"
#include "curveorbit/pnc.hpp"

namespace testing {

using namespace curveorbit;

#ifndef CURVEORBIT_TEST_DATA
#define CURVEORBIT_TEST_DATA "tests/data"
#endif

inline std::string data_path(const std::string& name) { return std::string(CURVEORBIT_TEST_DATA) + "/" + name; }

inline Form form(const std::string& s, TowerContext& ctx) { return parse_form(s, ctx); }
inline Form form(const std::string& s) {
    TowerContext ctx;
    return parse_form(s, ctx);
}

inline PlaneCurve curve(const std::vector<std::string>& factors) {
    std::vector<std::pair<Form, int>> fs;
    for (const auto& f : factors) fs.emplace_back(form(f), 1);
    return PlaneCurve(fs);
}

inline PlaneCurve septic() { return curve({"x^3*z^4 - 2*x^2*y^3*z^2 + x*y^6 - 4*x*y^5*z - y^7"}); }
inline PlaneCurve quintic() { return curve({"y", "(y^2 + x*z)^2 - 4*x*y*z^2"}); }
inline PlaneCurve nodal() { return curve({"x^2*y - z^3", "x^2*z - y^3"}); }

// Reduced p/q; mpq_class(p, q) alone is not canonical.
inline Rational q(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Point pt(int a, int b, int c) { return Point{ExactScalar(a), ExactScalar(b), ExactScalar(c)}; }

inline MatrixGerm germ(const std::string& text) {
    TowerContext ctx;
    return parse_germ(text, ctx);
}

inline Mat3s mat(const std::vector<Rational>& e) {
    Mat3s m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = ExactScalar(e[3 * i + j]);
    return m;
}

// Part of a form at x = 1, kept as a form with no x.
inline Form at_x1(const Form& f) {
    Form out;
    for (const auto& [m, c] : f.terms()) out.add_term({0, m[1], m[2]}, c);
    return out;
}

// Kind of the DomainError thrown by f, or "" when none is thrown.
template <class F>
std::string error_kind(F&& f) {
    try {
        f();
    } catch (const DomainError& e) {
        return e.kind();
    }
    return "";
}

// Seed of the randomized property cases.
inline unsigned property_seed = 20261015;

inline unsigned env_seed(unsigned fallback) {
    if (const char* s = std::getenv("CURVEORBIT_SEED")) return static_cast<unsigned>(std::strtoul(s, nullptr, 10));
    return fallback;
}

}  // namespace testing

namespace testing {

// Applies CURVEORBIT_SEED and a --seed=N argument, which is removed from argv.
inline std::vector<char*> take_seed(int argc, char** argv) {
    property_seed = env_seed(property_seed);
    std::vector<char*> rest;
    for (int k = 0; k < argc; ++k) {
        std::string a = argv[k];
        if (a.rfind("--seed=", 0) == 0) {
            property_seed = static_cast<unsigned>(std::stoul(a.substr(7)));
            continue;
        }
        rest.push_back(argv[k]);
    }
    return rest;
}

}  // namespace testing
