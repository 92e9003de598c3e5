#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ibt/building.hpp"

namespace ibt {

// deterministic seed mixing, used to derive per-sample and per-check streams
inline unsigned long long splitmix64(unsigned long long x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// squared building distance from the norm to its image under b.sigma
Rat displacement_squared(const Isocrystal& x, const Norm& a);

// image of the norm under the r-th power of b.sigma
Norm fb_act_power(const Isocrystal& x, const Norm& a, long r);
Rat displacement_squared_power(const Isocrystal& x, const Norm& a, long r);

// exact membership in the displacement-minimizing locus: the norm must be
// adapted to the isocline decomposition and the twisted action must scale
// each slope-lambda summand by p^lambda
bool is_in_min(const Isocrystal& x, const Norm& a);
bool is_in_min(const Isocrystal& x, const std::vector<IsoclineBlock>& dec, const Norm& a);

// membership in the minimizing locus of the r-th power of the isometry,
// through the same per-summand characterization with slopes r*lambda
bool is_in_min_power(const Isocrystal& x, const std::vector<IsoclineBlock>& dec,
                     const Norm& a, long r);

// cyclic-block shape of a companion-form instance: height and corner
// p-exponent per block, in matrix order
struct StandardBlock {
    long offset;
    long height;
    long corner; // the block acts cyclically with p^corner in the top corner
};
std::vector<StandardBlock> standard_blocks(const Isocrystal& x);

// minimizing norm on the standard basis: one base exponent per cyclic
// block; within a block of height h and corner a the exponents step by a/h
Norm min_point(const Isocrystal& x, const std::vector<Rat>& shifts);

struct ApartmentProjection {
    Norm point; // a minimizing norm
    Rat dist2;  // squared distance inside the apartment, an upper bound for
                // the squared distance to the minimizing locus
};
// Euclidean projection of the exponent vector onto the per-block
// arithmetic-progression subspace of the standard apartment
ApartmentProjection apartment_min_projection(const Isocrystal& x, const std::vector<Rat>& c);

struct ScanSample {
    long index = 0;
    bool jittered = false; // basis moved off the standard apartment
    Rat displacement2;
    bool has_ratio = false;
    Rat ratio; // displacement^2 / apartment-projection bound^2
};

struct ScanReport {
    long samples = 0;
    unsigned long long seed = 0;
    Rat min_nu2;
    Rat min_displacement2;
    bool has_kappa2 = false; // false = no off-minimum apartment sample (ratio inf)
    Rat kappa2;
    long violations = 0;
    bool pass = false;
    std::vector<ScanSample> records;
};

// samples random apartment exponents and jittered bases, checks the exact
// displacement lower bound on each, and reports the least observed ratio of
// displacement^2 to the squared apartment distance from the minimizing locus
ScanReport kappa_scan(const Isocrystal& x, long samples, unsigned long long seed);

// random integral basis change with unit determinant: permutation x unit
// lower x unit diagonal x unit upper, entries from a small window
Mat sample_unimodular(const Ctx& c, long n, std::mt19937_64& rng);

// random exponent vector with denominators from {1,2,3,4,6} and small
// numerators
std::vector<Rat> sample_exponents(long n, std::mt19937_64& rng);

// a random element of the twisted centralizer {g : g b = b sigma(g)}, built
// from the constructive families of a companion-form instance (central
// scalars, powers of b, per-block norm-field units, the 2x2 twisted family
// on height-2 blocks, permutations of equal blocks) and verified against the
// defining equation at working precision
Mat sample_j_element(const Isocrystal& x, std::mt19937_64& rng);

struct CrystalCheck {
    bool ok = false;
    std::string note; // "SlopeRange" when slopes leave [0,1]
};

// stability of the lattice under both F and p F^{-1}
CrystalCheck is_crystal(const Isocrystal& x, const Mat& lattice);

// ball of a minimizing norm at value exponent e (radius p^{-e}), certified
// stable; the norm must lie in the minimizing locus
Mat minimal_crystal_ball(const Isocrystal& x, const Norm& a, const Rat& e);

// all stable lattices M with p^radius M0 <= M <= p^-radius M0, via
// Hermite-form representatives in deterministic order
std::vector<Mat> enumerate_crystals(const Isocrystal& x, long radius);

// minimality in the sense of the ball characterization: the lattice splits
// into its slope components and each component is a single twisted-power
// translate class (checked per reduced slope a/h by F^h L = p^a L)
bool is_minimal_crystal(const Isocrystal& x, const Mat& lattice);

// bounded search for g in the twisted centralizer with g M1 = M2; returns
// the witness, or nothing when the bounded search is exhausted (which is not
// a proof of non-isomorphism)
std::optional<Mat> crystal_isomorphism(const Isocrystal& x, const Mat& m1, const Mat& m2);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string witness; // populated on failure, empty otherwise
};

struct VerificationReport {
    std::string suite;
    std::string instance;
    unsigned long long seed = 0;
    std::vector<CheckResult> checks;
    bool pass = false;
};

// "p=2, s=1, n=2, slopes=(1/2 x2)"
std::string instance_label(const Isocrystal& x);

// suites: prop1 (convexity and power scaling of the minimizing locus), thm2
// (lower bound, equality at minimizing points, centralizer stabilization,
// conjugation transport), bound37 (kappa scan with doubling stability),
// remark6 (enumerated stable lattices vs balls of minimizing norms)
VerificationReport verify_suite(const Isocrystal& x, const std::string& suite,
                                unsigned long long seed);

} // namespace ibt
