#pragma once

// Brute-force reference computations. They share only the scalar type with the
// library and use different methods from the code under test.

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "curveorbit/germs.hpp"

namespace oracle {

using curveorbit::ExactScalar;
using curveorbit::Rational;

// Dense polynomial in x, y, z, t over Q.
using Mono4 = std::array<int, 4>;
using Poly4 = std::map<Mono4, Rational>;

inline void add(Poly4& p, const Mono4& m, const Rational& c) {
    if (c == 0) return;
    Rational& slot = p[m];
    slot += c;
    if (slot == 0) p.erase(m);
}

inline Poly4 mul(const Poly4& a, const Poly4& b) {
    Poly4 out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) add(out, {ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]}, ca * cb);
    return out;
}

struct Limit {
    int weight = -1;
    // Coefficients of t^weight, keyed by (i, j, k).
    std::map<std::array<int, 3>, Rational> form;
};

// F(alpha(t) (x,y,z)^T) expanded monomial by monomial; rational data only.
inline Limit flat_limit(const curveorbit::Form& f, const curveorbit::MatrixGerm& g) {
    std::array<Poly4, 3> image;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const curveorbit::TPoly& e = g(i, j);
            for (int k = 0; k <= e.degree(); ++k) {
                Mono4 m{0, 0, 0, k};
                m[j] = 1;
                if (!e.coeff(k).is_zero()) add(image[i], m, e.coeff(k).to_rational());
            }
        }
    Poly4 total;
    for (const auto& [mono, c] : f.terms()) {
        Poly4 term;
        term[{0, 0, 0, 0}] = c.to_rational();
        for (int v = 0; v < 3; ++v)
            for (int e = 0; e < mono[v]; ++e) term = mul(term, image[v]);
        for (const auto& [m, cc] : term) add(total, m, cc);
    }
    Limit out;
    for (const auto& [m, c] : total)
        if (out.weight < 0 || m[3] < out.weight) out.weight = m[3];
    for (const auto& [m, c] : total)
        if (m[3] == out.weight) out.form[{m[0], m[1], m[2]}] = c;
    return out;
}

// Proportionality of a library form and an oracle form.
inline bool proportional(const curveorbit::Form& a, const std::map<std::array<int, 3>, Rational>& b) {
    if (a.terms().size() != b.size() || b.empty()) return false;
    const auto& [m0, c0] = *b.begin();
    ExactScalar a0 = a.coeff(m0);
    if (a0.is_zero()) return false;
    for (const auto& [m, c] : b)
        if (!(a.coeff(m) * ExactScalar(c0) == a0 * ExactScalar(c))) return false;
    return true;
}

using P1 = std::array<ExactScalar, 2>;

inline ExactScalar bracket(const P1& u, const P1& v) { return u[0] * v[1] - u[1] * v[0]; }

// Cross-ratio equality cr(a,b,c,d) = cr(a',b',c',d') without division.
inline bool same_cross_ratio(const std::array<P1, 4>& p, const std::array<P1, 4>& q) {
    ExactScalar l = bracket(p[0], p[2]) * bracket(p[1], p[3]) * bracket(q[0], q[3]) * bracket(q[1], q[2]);
    ExactScalar r = bracket(q[0], q[2]) * bracket(q[1], q[3]) * bracket(p[0], p[3]) * bracket(p[1], p[2]);
    return l == r;
}

// Permutations of the distinct points, preserving multiplicities and every
// cross-ratio with the first three points.
inline int pgl2_count(const std::vector<std::pair<P1, int>>& pts) {
    std::vector<int> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    int count = 0;
    do {
        bool ok = true;
        for (std::size_t i = 0; i < pts.size() && ok; ++i) ok = pts[i].second == pts[idx[i]].second;
        for (std::size_t l = 3; l < pts.size() && ok; ++l)
            ok = same_cross_ratio({pts[0].first, pts[1].first, pts[2].first, pts[l].first},
                                  {pts[idx[0]].first, pts[idx[1]].first, pts[idx[2]].first, pts[idx[l]].first});
        if (ok) ++count;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return count;
}

// Distinct u realized by a permutation with rho[perm[i]] = u * rho[i].
inline int u_count(const std::vector<ExactScalar>& rho) {
    std::vector<int> idx(rho.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<ExactScalar> found;
    do {
        bool ok = true;
        for (std::size_t i = 1; i < rho.size() && ok; ++i) ok = rho[idx[i]] * rho[0] == rho[idx[0]] * rho[i];
        if (ok && std::none_of(found.begin(), found.end(), [&](const ExactScalar& v) { return v == rho[idx[0]]; }))
            found.push_back(rho[idx[0]]);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return static_cast<int>(found.size());
}

// Twice the number of distinct affine maps realized by permutations.
inline int affine_count(const std::vector<ExactScalar>& g) {
    std::size_t i0 = 0, i1 = 1;
    while (i1 < g.size() && g[i1] == g[i0]) ++i1;
    std::vector<int> idx(g.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::pair<ExactScalar, ExactScalar>> maps;
    do {
        ExactScalar a = g[idx[i0]], b = g[idx[i1]];
        if (a == b) continue;
        bool ok = true;
        for (std::size_t i = 0; i < g.size() && ok; ++i) ok = (g[idx[i]] - a) * (g[i1] - g[i0]) == (b - a) * (g[i] - g[i0]);
        if (ok && std::none_of(maps.begin(), maps.end(), [&](const auto& m) { return m.first == a && m.second == b; }))
            maps.emplace_back(a, b);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return 2 * static_cast<int>(maps.size());
}

// Vertices of the lower-left boundary: support points P such that some
// direction (b, c) with b, c > 0 is minimized uniquely at P.
inline std::set<std::pair<int, int>> newton_vertices(const std::vector<std::pair<int, int>>& support) {
    std::set<std::pair<int, int>> out;
    int jmin = 1 << 30, kmin = 1 << 30;
    for (const auto& [j, k] : support) {
        jmin = std::min(jmin, j);
        kmin = std::min(kmin, k);
    }
    for (int b = 1; b <= 60; ++b)
        for (int c = 1; c <= 60; ++c) {
            long best = 1L << 40;
            std::vector<std::pair<int, int>> arg;
            for (const auto& [j, k] : support) {
                long v = static_cast<long>(b) * j + static_cast<long>(c) * k;
                if (v < best) {
                    best = v;
                    arg = {{j, k}};
                } else if (v == best) {
                    arg.push_back({j, k});
                }
            }
            if (arg.size() == 1) out.insert(arg.front());
        }
    // The two ends, where the boundary turns into the axis rays.
    std::pair<int, int> left{1 << 30, 0}, bottom{0, 1 << 30};
    for (const auto& [j, k] : support) {
        if (j == jmin && (left.first != jmin || k < left.second)) left = {j, k};
        if (k == kmin && (bottom.second != kmin || j < bottom.first)) bottom = {j, k};
    }
    out.insert(left);
    out.insert(bottom);
    return out;
}

// Least m with some order-m partial derivative nonzero at p.
inline int multiplicity(const curveorbit::Form& f, const curveorbit::Point& p) {
    std::vector<curveorbit::Form> layer{f};
    for (int m = 0; m <= f.degree(); ++m) {
        for (const auto& g : layer)
            if (!g.eval(p).is_zero()) return m;
        std::vector<curveorbit::Form> next;
        for (const auto& g : layer)
            for (int v = 0; v < 3; ++v) next.push_back(g.derivative(v));
        layer = std::move(next);
    }
    return -1;
}

}  // namespace oracle
