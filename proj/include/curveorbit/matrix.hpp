#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "curveorbit/upoly.hpp"

namespace curveorbit::detail {

template <class T>
struct ExactNumTraits : Eigen::GenericNumTraits<T> {
    using Real = T;
    using NonInteger = T;
    using Nested = T;
    using Literal = T;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 30,
        MulCost = 60
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

}  // namespace curveorbit::detail

namespace Eigen {
template <>
struct NumTraits<curveorbit::ExactScalar> : curveorbit::detail::ExactNumTraits<curveorbit::ExactScalar> {};
template <>
struct NumTraits<curveorbit::TPoly> : curveorbit::detail::ExactNumTraits<curveorbit::TPoly> {};
}  // namespace Eigen

namespace curveorbit {

template <class R>
using Mat3 = Eigen::Matrix<R, 3, 3>;
template <class R>
using Mat2 = Eigen::Matrix<R, 2, 2>;
using Mat3s = Mat3<ExactScalar>;
using Mat3t = Mat3<TPoly>;

template <class R>
Mat3<R> identity3() {
    Mat3<R> m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = R(i == j ? 1 : 0);
    return m;
}

// Determinant of a 3x3 array over any commutative ring, e.g. a Hessian of forms.
template <class R>
R det3(const std::array<std::array<R, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3s inverse3(const Mat3s& m);
int rank3(const Mat3s& m);
Mat3t to_germ(const Mat3s& m);
Mat3s germ_at_zero(const Mat3t& m);
// Basis of {v : r . v = 0 for every row r}.
std::vector<std::array<ExactScalar, 3>> nullspace3(std::vector<std::array<ExactScalar, 3>> rows);

}  // namespace curveorbit
