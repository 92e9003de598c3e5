#pragma once

#include <vector>

#include "ibt/polynomial.hpp"

namespace ibt {

class Mat {
public:
    Mat() = default;
    Mat(const Ctx& c, long rows, long cols)
        : ctx_(c), rows_(rows), cols_(cols),
          e_((size_t)(rows * cols), FieldElement::zero(c)) {}

    static Mat identity(const Ctx& c, long n);

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    const Ctx& ctx() const { return ctx_; }

    FieldElement& at(long i, long j) { return e_[(size_t)(i * cols_ + j)]; }
    const FieldElement& at(long i, long j) const { return e_[(size_t)(i * cols_ + j)]; }

    Mat frobenius(long k = 1) const;
    Mat transpose() const;
    std::vector<FieldElement> col(long j) const;
    std::vector<FieldElement> row(long i) const;

private:
    Ctx ctx_;
    long rows_ = 0, cols_ = 0;
    std::vector<FieldElement> e_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat mat_scale(const Mat& a, const FieldElement& c);
std::vector<FieldElement> mat_apply(const Mat& a, const std::vector<FieldElement>& x);
Mat mat_coerce(const Mat& a, const Ctx& dst);
bool mat_equal_at_precision(const Mat& a, const Mat& b);

// every entry certified of valuation >= 0; false when an entry is certified
// negative; PrecisionExhausted when an entry is only known to vanish beyond
// a negative bound
bool mat_is_integral(const Mat& a);

// monic char polynomial det(x*I - A), coefficients ascending, by the
// division-free bordered-minor recursion (no pivoting, so per-entry
// precision tracking stays exact)
Poly charpoly(const Mat& a);

FieldElement det(const Mat& a);

// Gauss-Jordan with smallest-valuation pivoting; PrecisionExhausted when a
// pivot cannot be certified, DivisionByZero when the matrix is exactly
// singular
Mat inverse(const Mat& a);

// basis of the right kernel at working precision (reduced echelon with
// smallest-valuation pivoting; remaining near-zero entries are treated as
// zero, which is what "at precision" means)
std::vector<std::vector<FieldElement>> kernel_basis(const Mat& a);

struct SNF {
    Mat U, V;               // U * A * V = diag(pi^exps) at working precision
    std::vector<long> exps; // pi-valuations of the diagonal, ascending
};

// global smallest-valuation pivoting (row-major on ties); the exponents are
// exact valuations of the pivots and the partial sums match the minimal
// valuations of minors; PrecisionExhausted when the remaining block can be
// neither certified zero nor pivoted
SNF smith_normal_form(const Mat& a);

} // namespace ibt
