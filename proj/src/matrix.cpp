#include "curveorbit/matrix.hpp"

#include <algorithm>

namespace curveorbit {

Mat3s inverse3(const Mat3s& m) {
    if (m.determinant().is_zero()) throw DomainError("SingularMatrix", "matrix is not invertible");
    return m.inverse();
}

int rank3(const Mat3s& m) {
    Mat3s a = m;
    int rank = 0;
    for (int col = 0; col < 3 && rank < 3; ++col) {
        int piv = -1;
        for (int r = rank; r < 3; ++r)
            if (!a(r, col).is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        a.row(rank).swap(a.row(piv));
        ExactScalar inv = a(rank, col).inverse();
        for (int r = rank + 1; r < 3; ++r) {
            if (a(r, col).is_zero()) continue;
            ExactScalar f = a(r, col) * inv;
            for (int c = col; c < 3; ++c) a(r, c) -= f * a(rank, c);
        }
        ++rank;
    }
    return rank;
}

Mat3t to_germ(const Mat3s& m) {
    Mat3t out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out(i, j) = TPoly(m(i, j));
    return out;
}

Mat3s germ_at_zero(const Mat3t& m) {
    Mat3s out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out(i, j) = m(i, j).coeff(0);
    return out;
}

std::vector<std::array<ExactScalar, 3>> nullspace3(std::vector<std::array<ExactScalar, 3>> rows) {
    std::vector<int> pivots;
    std::size_t rank = 0;
    for (int col = 0; col < 3; ++col) {
        std::size_t piv = rows.size();
        for (std::size_t r = rank; r < rows.size(); ++r)
            if (!rows[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        ExactScalar inv = rows[rank][col].inverse();
        for (auto& x : rows[rank]) x *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col].is_zero()) continue;
            ExactScalar f = rows[r][col];
            for (int c = 0; c < 3; ++c) rows[r][c] -= f * rows[rank][c];
        }
        pivots.push_back(col);
        ++rank;
    }
    std::vector<std::array<ExactScalar, 3>> out;
    for (int free = 0; free < 3; ++free) {
        if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
        std::array<ExactScalar, 3> v{ExactScalar(0), ExactScalar(0), ExactScalar(0)};
        v[free] = ExactScalar(1);
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -rows[k][free];
        out.push_back(v);
    }
    return out;
}

}  // namespace curveorbit
