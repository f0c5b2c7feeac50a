#include "curveorbit/orbitdeg.hpp"

#include <sstream>

#include "curveorbit/errors.hpp"

namespace curveorbit {

TruncH TruncH::monomial(const Rational& c, int e) {
    TruncH p;
    if (e >= 0 && e <= kOrder) {
        p.c_[e] = c;
        p.c_[e].canonicalize();
    }
    return p;
}

TruncH TruncH::from_coefficients(const std::vector<Rational>& coeffs, int first_exponent) {
    TruncH p;
    for (std::size_t k = 0; k < coeffs.size(); ++k) p += monomial(coeffs[k], first_exponent + static_cast<int>(k));
    return p;
}

bool TruncH::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

TruncH& TruncH::operator+=(const TruncH& o) {
    for (int k = 0; k <= kOrder; ++k) c_[k] += o.c_[k];
    return *this;
}

TruncH& TruncH::operator-=(const TruncH& o) {
    for (int k = 0; k <= kOrder; ++k) c_[k] -= o.c_[k];
    return *this;
}

TruncH& TruncH::operator*=(const TruncH& o) {
    std::array<Rational, kOrder + 1> r{};
    for (int i = 0; i <= kOrder; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; i + j <= kOrder; ++j) r[i + j] += c_[i] * o.c_[j];
    }
    c_ = r;
    return *this;
}

TruncH TruncH::scaled(const Rational& s) const {
    TruncH p = *this;
    for (auto& x : p.c_) x *= s;
    return p;
}

TruncH TruncH::exp() const {
    if (c_[0] != 0) throw DomainError("NonzeroConstant", "exp needs a zero constant term");
    TruncH sum(1), term(1);
    for (int k = 1; k <= kOrder; ++k) {
        term = (term * *this).scaled(Rational(1, k));
        sum += term;
    }
    return sum;
}

TruncH TruncH::antiderivative() const {
    TruncH p;
    for (int k = 0; k < kOrder; ++k) p.c_[k + 1] = c_[k] / (k + 1);
    return p;
}

TruncH TruncH::pow(int e) const {
    TruncH r(1);
    for (int k = 0; k < e; ++k) r *= *this;
    return r;
}

std::string to_string(const TruncH& p) {
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k <= TruncH::kOrder; ++k) {
        const Rational& c = p[k];
        if (c == 0) continue;
        Rational a = abs(c);
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        if (k == 0) {
            os << a;
            continue;
        }
        if (a != 1) os << a << "*";
        os << "H";
        if (k > 1) os << "^" << k;
    }
    if (first) os << "0";
    return os.str();
}

TruncH exp_linear(const Rational& a) { return TruncH::monomial(a, 1).exp(); }

TruncH app_assemble(int n, const std::vector<TruncH>& contributions) {
    TruncH s(1);
    for (const auto& c : contributions) s += c;
    return exp_linear(n) * s;
}

OrbitDegree predegree_and_degree(const TruncH& app, int orbit_dim, int stabilizer_order) {
    if (orbit_dim < 0 || orbit_dim > TruncH::kOrder) throw DomainError("InvalidDimension", "orbit dimension must lie in 0..8");
    if (stabilizer_order <= 0) throw DomainError("InvalidStabilizer", "stabilizer order must be positive");
    const Rational& lead = app[orbit_dim];
    if (lead == 0)
        throw DomainError("ZeroLeadingCoefficient", "coefficient of H^" + std::to_string(orbit_dim) + " vanishes");
    Integer fact = 1;
    for (int k = 2; k <= orbit_dim; ++k) fact *= k;
    Rational pre = lead * fact;
    if (pre.get_den() != 1)
        throw DomainError("NonIntegralPredegree", "predegree " + pre.get_str() + " is not an integer");
    OrbitDegree out;
    out.predegree = pre.get_num();
    out.degree = pre / stabilizer_order;
    return out;
}

namespace {

TruncH conic_factor(int m) {
    return TruncH::from_coefficients({Rational(1), Rational(m), Rational(m * m) / 2});
}

}  // namespace

TruncH contribution_type_I(int m, const std::vector<int>& intersections, int n) {
    Rational m3 = Rational(m) * m * m;
    TruncH integrand = TruncH::monomial(-m3 / 2, 2) * exp_linear(-n);
    for (int mi : intersections) integrand *= conic_factor(mi);
    return integrand.antiderivative();
}

TruncH contribution_type_II(int m, int delta, int n) {
    Rational mm(m), nn(n);
    TruncH inner = TruncH::from_coefficients(
        {Rational(1, 20), -(5 * nn + 18 * mm) / 360, (9 * nn + 8 * mm) * mm / 420, -nn * mm * mm / 60}, 5);
    Rational m5 = mm * mm * mm * mm * mm;
    return inner.scaled(-2 * m5 * delta);
}

TruncH contribution_flex(int m) {
    Rational p = 1;
    for (int k = 0; k < 6; ++k) p *= m;
    return TruncH::from_coefficients({-p / 48, 3 * p * m / 70, -197 * p * m * m / 4480}, 6);
}

TruncH contribution_node(int m1, int m2) {
    Rational a(m1), b(m2);
    TruncH inner = TruncH::from_coefficients({-(a + b) / 72, (20 * a * a + 45 * a * b + 36 * b * b) / 1680,
                                              -(10 * a * a * a + 35 * a * a * b + 48 * a * b * b + 32 * b * b * b) / 1920},
                                             6);
    return inner.scaled(a * b * b * b * (a + 2 * b));
}

TruncH contribution_star_typeIII(int d) {
    Rational dd(d);
    Rational k = -dd * dd * (dd - 1) * (dd - 2) * (dd * dd + 3 * dd - 3) / 30;
    return TruncH::from_coefficients({Rational(1, 24), -dd / 28, dd * dd / 64}, 6).scaled(k);
}

TruncH contribution_raw(const std::vector<Rational>& coeffs) {
    if (coeffs.size() > 6) throw DomainError("InvalidContribution", "at most six coefficients (H^3 .. H^8)");
    return TruncH::from_coefficients(coeffs, 3);
}

}  // namespace curveorbit
