#pragma once

#include <optional>
#include <string>

#include "curveorbit/branches.hpp"

namespace curveorbit {

// 3x3 matrix of polynomials in t with nonzero determinant.
class MatrixGerm {
public:
    MatrixGerm();
    explicit MatrixGerm(Mat3t m);
    static MatrixGerm diagonal(int a, int b, int c);

    const Mat3t& matrix() const { return m_; }
    const TPoly& operator()(int i, int j) const { return m_(i, j); }
    const Mat3s& center() const { return center_; }
    int center_rank() const { return rank_; }
    TPoly determinant() const;

    friend MatrixGerm operator*(const Mat3s& a, const MatrixGerm& g);
    friend MatrixGerm operator*(const MatrixGerm& g, const Mat3s& a);
    friend MatrixGerm operator*(const MatrixGerm& g, const MatrixGerm& h);
    friend bool operator==(const MatrixGerm& a, const MatrixGerm& b) { return a.m_ == b.m_; }

private:
    Mat3t m_;
    Mat3s center_;
    int rank_ = 3;
};

// Scales so the first entry of least valuation has lowest coefficient 1.
MatrixGerm normalized(const MatrixGerm& g);
std::string to_string(const MatrixGerm& g);

struct FlatLimit {
    int weight = 0;
    Form limit;
    // Coefficient of t^weight in F o alpha equals scale * limit.
    ExactScalar scale;
    // Kernel of a rank-1 center, as a line in the source plane.
    std::optional<Line> kernel;
};

FlatLimit flat_limit(const Form& f, const MatrixGerm& g);
FlatLimit flat_limit(const PlaneCurve& c, const MatrixGerm& g);

struct KernelStar {
    bool star = false;
    std::optional<Point> center;
    // The limit is a single multiple line; every point of the kernel line works.
    bool multiple_line = false;
};

KernelStar detect_kernel_star(const FlatLimit& limit);

// Rows (t^a,0,0), (q t^a,t^b,0), (r t^a,s t^b,t^c).
struct StandardGerm {
    int a = 0;
    int b = 0;
    int c = 0;
    TPoly q, r, s;

    MatrixGerm matrix() const;
    // The same germ divided by t^a.
    MatrixGerm scaled_matrix() const;
};

struct Standardization {
    Mat3s left;
    StandardGerm sigma;
    Mat3s right;
};

// alpha is equivalent to left * sigma * right. The default order is 4(val det + 1).
Standardization standardize_germ(const MatrixGerm& g, std::optional<int> truncation_order = std::nullopt);

enum class GermVerdict { TypeI, Type1PS, TypeV, RankTwoLimit, DegenerateLimit };
const char* to_string(GermVerdict v);

struct GermClass {
    GermVerdict verdict = GermVerdict::DegenerateLimit;
    // TypeI: the image line. Type1PS and TypeV: the flag.
    std::optional<Line> line;
    std::optional<Point> point;
    int b = 0;
    int c = 0;
    bool equal_weights = false;
    Rational characteristic;
    SeriesTerms truncation;
    std::string detail;
};

GermClass classify_germ(const PlaneCurve& c, const MatrixGerm& g, TowerContext& ctx);

}  // namespace curveorbit
