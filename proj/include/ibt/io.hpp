#pragma once

#include "ibt/building.hpp"
#include "ibt/isocrystal.hpp"
#include "ibt/minset.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace ibt {

using Json = nlohmann::ordered_json;

// integers as JSON numbers when they fit in 64 bits, decimal strings otherwise
Json int_to_json(const Int& v);
Int json_to_int(const Json& j);

Json context_to_json(const Ctx& c); // {"p","m","N","d"}
Ctx context_from_json(const Json& j);

// {"valuation": "a/b", "unit": [[coeff,...], ...]} with outer index the
// pi-digit and inner the generator coefficients; exact zero uses "INFINITY",
// an element only bounded away from zero carries "valuation_at_least" instead,
// and elements with tracked precision loss carry "loss" (pi-digits).
Json field_to_json(const FieldElement& x);
FieldElement field_from_json(const Ctx& c, const Json& j);

// row-major array of field element objects
Json mat_to_json(const Mat& a);
Mat mat_from_json(const Ctx& c, const Json& j);

// entry expressions for hand-written instances: integers, "p^k" monomials,
// and polynomials in the residue generator z, e.g. "z^2 + 3*z - p^-1"
FieldElement parse_entry(const Ctx& c, const Json& j);
Mat mat_from_entries(const Ctx& c, const Json& j);

Json isocrystal_to_json(const Isocrystal& x); // {"p","s","n","b"}
Isocrystal isocrystal_from_json(const Json& j, long N = 40);

Json newton_point_to_json(const std::vector<Rat>& np); // [{"num","den","mult"}]
std::vector<Rat> newton_point_from_json(const Json& j);

Json norm_to_json(const Norm& a); // {"basis":…, "exponents": ["0","1/2",…]}
Norm norm_from_json(const Ctx& c, const Json& j, long den_cap = kDefaultDenominatorCap);

Json rel_position_to_json(const std::vector<Rat>& r); // ["2","1",…]

Json lattice_to_json(const Mat& m); // {"basis": …}
Mat lattice_from_json(const Ctx& c, const Json& j);

Json decomposition_to_json(const std::vector<IsoclineBlock>& dec);

// stable 64-bit FNV-1a hash of the canonical instance serialization
unsigned long long instance_hash(const Isocrystal& x);

// the normalization every report embeds: how exponents and distance are read
std::string metric_convention();

// common report envelope: schema_version, instance, hash, seed, metric
Json report_header(const std::string& kind, const Isocrystal& x, unsigned long long seed);

Json scan_report_to_json(const Isocrystal& x, const ScanReport& r);
Json verification_report_to_json(const Isocrystal& x, const VerificationReport& r);

} // namespace ibt
