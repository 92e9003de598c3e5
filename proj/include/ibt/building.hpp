#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ibt/isocrystal.hpp"

namespace ibt {

inline constexpr long kDefaultDenominatorCap = 12;

// A point of the building realized as a diagonalizable norm: on the columns
// B_1..B_n of an invertible basis matrix, alpha(sum x_i B_i) =
// max_i |x_i| p^{-c_i}.  Exponents are rationals with a capped common
// denominator; the basis may live in a ramified extension (geodesic points
// between norms of different denominators do), in which case |.| is the
// unique extension of the p-adic absolute value.
class Norm {
public:
    Norm(Mat basis, std::vector<Rat> exponents, long den_cap = kDefaultDenominatorCap);

    const Ctx& ctx() const { return basis_.ctx(); }
    const Mat& basis() const { return basis_; }
    const std::vector<Rat>& exponents() const { return c_; }
    long n() const { return basis_.rows(); }
    // lcm of the exponent denominators
    long exponent_denominator() const;

private:
    Mat basis_;
    std::vector<Rat> c_;
};

// representation normal form: each column scaled so its smallest-valuation
// entry (first on ties) becomes exactly 1 with the exponent shifted to
// match, then columns sorted by exponent with a lexicographic tiebreak
Norm canonicalize(const Norm& a);

// -log_p alpha(x); nullopt for x = 0; PrecisionExhausted when a coordinate
// vanishes at precision without its bound deciding the maximum
std::optional<Rat> norm_eval(const Norm& a, const std::vector<FieldElement>& x);

// invariant vector of the ordered pair: the exponent differences e - c read
// in a common adapted basis, sorted descending.  Computed from the elementary
// divisors of the transition between the unit-ball lattices over the
// Eisenstein extension matching the common exponent denominator.
std::vector<Rat> rel_position(const Norm& a, const Norm& b);

Rat distance_squared(const Norm& a, const Norm& b);

// pushforward by g: alpha(g^{-1} .), i.e. basis g B with the same exponents
Norm group_act(const Mat& g, const Norm& a);

// pushforward by the semilinear F = b sigma: basis b sigma(B), same exponents
Norm fb_act(const Isocrystal& x, const Norm& a);

// multiply the norm by p^mu: exponents c - mu
Norm scale_by_power(const Norm& a, const Rat& mu);

// point dividing the geodesic from a to b in ratio t : 1-t (t in [0,1]);
// realized on a common adapted basis over the Eisenstein extension
Norm geodesic_point(const Norm& a, const Norm& b, const Rat& t);

// restriction of the norm to the column span of W (full column rank),
// written in W-coordinates
Norm restrict_norm(const Norm& a, const Mat& W);

struct LeviAdaptResult {
    bool adapted;
    Norm alpha_M; // direct sum of the restrictions to the given summands
};

// W_1..W_r must have full column rank and jointly span; alpha is adapted to
// the decomposition iff it equals the direct sum of its restrictions
LeviAdaptResult levi_adapt(const Norm& a, const std::vector<Mat>& summands);

// O-lattice {x : alpha(x) <= p^{-e}} = span{p^{ceil(e - c_i)} B_i}; the basis
// must be unramified so the coordinates have integral valuations
Mat ball_lattice(const Norm& a, const Rat& e);

// (sum of exponents - val_p det(basis)) / n: the position of det(alpha) on
// the R-factor of the extended building
Rat det_component(const Norm& a);

// true when rel_position(a, b) vanishes
bool norms_equal(const Norm& a, const Norm& b);

// canonical upper-triangular basis of the lattice spanned by the columns:
// diagonal p^{a_i}, entries right of the diagonal reduced mod p^{a_i};
// the basis must be unramified and of full rank
Mat hnf_lattice(const Mat& basis);

// stable text key of an hnf basis, for hashing and dedup
std::string lattice_key(const Mat& hnf);

bool lattice_equal(const Mat& a, const Mat& b);

} // namespace ibt
