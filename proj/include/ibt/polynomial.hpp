#pragma once

#include <vector>

#include "ibt/field.hpp"

namespace ibt {

// Dense polynomial, coefficient of x^i at index i.
using Poly = std::vector<FieldElement>;

// index of the last coefficient that is not exact zero; -1 for the zero poly
long poly_deg(const Poly& f);
Poly poly_trim(Poly f);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& f, const FieldElement& c);
FieldElement poly_eval(const Poly& f, const FieldElement& x);

struct NPSegment {
    Rat slope; // common valuation of the roots on this segment
    long mult;
};

// Valuations of the roots, ascending with multiplicities, read off the lower
// convex hull of the coefficient valuations.  Trailing exact zeros are
// stripped (roots at 0 are not reported).  A coefficient that is only known
// to vanish at precision is accepted when its certified bound stays on or
// above the hull and rejected with PrecisionExhausted otherwise; the leading
// coefficient and the lowest nonzero one must be certified nonzero.
std::vector<NPSegment> newton_polygon(const Poly& f);

// Factor f (nonvanishing constant term; normalized monic internally) into
// one monic factor per distinct root valuation, by repeatedly splitting off
// the factor of smallest valuation through a linear Hensel lift of the
// reduction.  Splitting is only possible along integral valuations; a
// polygon with two or more segments and a fractional one throws
// SlopeNotIntegral.  The product of the returned factors is checked against
// the input at working precision.
std::vector<Poly> slope_factorization(const Poly& f);

} // namespace ibt
