#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "ibt/errors.hpp"

namespace ibt {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat rat(const Int& num, const Int& den) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Int rat_num(const Rat& q) { return q.get_num(); }
inline Int rat_den(const Rat& q) { return q.get_den(); }

inline bool rat_is_integer(const Rat& q) { return q.get_den() == 1; }

inline long rat_den_long(const Rat& q) {
    if (!q.get_den().fits_slong_p()) throw InvalidParams("denominator too large");
    return q.get_den().get_si();
}

// floor(q) as Int
inline Int rat_floor(const Rat& q) {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

inline Int rat_ceil(const Rat& q) {
    Int r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

// Parses "a", "a/b", with optional sign. Used by all JSON readers.
Rat rat_parse(const std::string& s);

inline long lcm_long(long a, long b) {
    Int g;
    mpz_lcm(g.get_mpz_t(), Int(a).get_mpz_t(), Int(b).get_mpz_t());
    if (!g.fits_slong_p()) throw InvalidParams("lcm overflow");
    return g.get_si();
}

// lcm of exponent denominators; 1 for an empty list
inline long common_denominator(const std::vector<Rat>& qs) {
    long d = 1;
    for (const auto& q : qs) d = lcm_long(d, rat_den_long(q));
    return d;
}

} // namespace ibt
