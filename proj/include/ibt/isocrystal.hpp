#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ibt/matrix.hpp"

namespace ibt {

// F = b.(id (x) sigma) acting on K^n for K the unramified coefficient field
// of b; the frobenius power s defining the linear operator F^s is the
// residue degree of that field.  The matrix must be invertible (certified).
class Isocrystal {
public:
    explicit Isocrystal(Mat b);

    const Ctx& ctx() const { return b_.ctx(); }
    const Mat& matrix() const { return b_; }
    long n() const { return b_.rows(); }
    long s() const { return ctx()->m(); }
    Rat det_valuation() const { return det_val_; }

    const std::vector<Rat>& cached_newton_point() const;

private:
    Mat b_;
    Rat det_val_;
    mutable std::optional<std::vector<Rat>> np_;
};

// b sigma(b) ... sigma^{order-1}(b)
Mat twisted_power(const Isocrystal& x, long order);

// valuations of the eigenvalues of F^s divided by s: the n slopes, ascending
// with multiplicity
std::vector<Rat> newton_point(const Isocrystal& x);

// sum of the squared slopes; the displacement lower bound of the associated
// isometry
Rat min_nu(const Isocrystal& x);

// the slopes must sum to the valuation of det(b); exact check
bool slope_determinant_identity(const Isocrystal& x);

struct IsoclineBlock {
    Rat slope;
    long mult;
    Mat basis; // n x mult, columns span the summand
    Mat block; // mult x mult, F restricted to the summand in that basis
};

// Split K^n into the F-stable summands of constant slope, via the kernels of
// the slope factors of the characteristic polynomial of a twisted power of
// integral slopes.  The result is verified: the assembled basis must be
// invertible, F must be block diagonal in it at working precision, and each
// block must be isoclinic of the expected slope; DecompositionUnverified
// otherwise.
std::vector<IsoclineBlock> isocline_decomposition(const Isocrystal& x);

// b' = g b sigma(g)^{-1} over the joined coefficient field (g unramified,
// certified invertible)
Isocrystal sigma_conjugate(const Isocrystal& x, const Mat& g);

// block-diagonal representative over Q_p: for each (slope a/h, multiplicity
// k h) in ascending slope order, k blocks of size h with ones on the
// subdiagonal and p^a in the top-right corner
Isocrystal standard_form(long p, std::vector<std::pair<Rat, long>> slopes, long N = 40);

// F^r acts as p^{r lambda} on every slope-lambda summand (checked at working
// precision; false in particular whenever some r*lambda is not an integer)
bool is_decent(const Isocrystal& x, long r);

} // namespace ibt
