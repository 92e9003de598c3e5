#pragma once

#include <vector>

namespace ibt {

// Conway polynomial of F_{p^m}, coefficients low -> high, length m+1, monic.
// Throws NoConwayPolynomial if (p, m) is outside the shipped table.
// Table contents are produced by tools/gen_conway.py.
const std::vector<long>& conway_polynomial(long p, long m);

bool has_conway_polynomial(long p, long m);

} // namespace ibt
