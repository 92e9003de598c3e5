#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ibt/errors.hpp"
#include "ibt/rational.hpp"
#include "ibt/residue.hpp"

namespace ibt {

class FieldContext;
using Ctx = std::shared_ptr<const FieldContext>;

// Unramified extension Q_{p^m} of Q_p (residue generator a root of the Conway
// polynomial), optionally with a totally ramified Eisenstein piece pi^d = p
// adjoined.  Precision is N base-p digits on unit parts; all arithmetic
// tracks per-element loss and fails loudly when a unit part can no longer be
// certified.  Immutable; obtained from make_field and shared by elements.
class FieldContext {
public:
    long p() const { return p_; }
    long m() const { return m_; }
    long N() const { return N_; }
    long d() const { return d_; }
    const Int& pN() const { return pN_; }
    const std::vector<long>& minpoly() const { return minpoly_; }
    const ResidueField& residue_field() const { return res_; }

    // sigma^k(zeta)^i as a zeta-polynomial (length m), k in [0,m), i in [0,m)
    const std::vector<Int>& frob_pow(long k, long i) const { return frob_zeta_pows_[k][i]; }

    bool same_as(const FieldContext& o) const {
        return p_ == o.p_ && m_ == o.m_ && N_ == o.N_ && d_ == o.d_;
    }

    std::string describe() const;

private:
    friend Ctx make_field(long, long, long, long);
    FieldContext(long p, long m, long N, long d);

    long p_, m_, N_, d_;
    Int pN_;
    std::vector<long> minpoly_;
    ResidueField res_;
    std::vector<std::vector<std::vector<Int>>> frob_zeta_pows_;
};

// Cached, validated construction. Throws NoConwayPolynomial / PrecisionTooSmall /
// InvalidParams.  The documented precision floor is N >= 4.
Ctx make_field(long p, long m, long N = 40, long d = 1);

// Smallest common context two contexts embed into (same p and N; lcm of m, d).
Ctx join_context(const Ctx& a, const Ctx& b);

enum class ElemState { Zero, NearZero, Regular };

struct ValInfo {
    enum Kind { Exact, AtLeast, Infinite } kind;
    Rat v; // Exact: the valuation; AtLeast: certified lower bound; Infinite: unset
};

// One element of the fraction field: pi^w * unit with the unit tracked to a
// per-element number of trusted pi-adic digits (rel).  Exact zero and
// "indistinguishable from zero at precision" are distinct states.
class FieldElement {
public:
    FieldElement() = default;

    static FieldElement zero(const Ctx& c);
    static FieldElement one(const Ctx& c);
    static FieldElement from_int(const Ctx& c, const Int& v);
    static FieldElement from_int(const Ctx& c, long v) { return from_int(c, Int(v)); }
    static FieldElement from_rat(const Ctx& c, const Rat& q);
    // p^e with e*d integral (so the power lies in the value group)
    static FieldElement p_power(const Ctx& c, const Rat& e);
    static FieldElement pi_power(const Ctx& c, long w);
    static FieldElement generator(const Ctx& c); // zeta
    static FieldElement near_zero(const Ctx& c, long pi_bound);
    // raw constructor: value = pi^w * digits, digits trusted to rel pi-digits
    static FieldElement make(const Ctx& c, long w, std::vector<Int> digits, long rel);

    const Ctx& ctx() const { return ctx_; }
    ElemState state() const { return state_; }
    bool is_exact_zero() const { return state_ == ElemState::Zero; }
    bool is_zeroish() const { return state_ != ElemState::Regular; }

    ValInfo val_info() const;
    // exact valuation; DivisionByZero on exact zero, PrecisionExhausted when
    // only a lower bound is known
    Rat valuation() const;
    long pi_valuation() const; // same, in units of 1/d (Regular only)
    long rel() const { return rel_; }
    long near_zero_bound() const { return zbound_; }
    // p-digit loss relative to a fresh element
    long loss_pdigits() const;

    // digits with untrusted tails masked to zero (canonical for serialization)
    std::vector<Int> trusted_digits() const;
    const std::vector<Int>& raw_digits() const { return digits_; }

    // residue of a valuation-zero element in F_{p^m}
    ResidueField::Elem residue() const;

    FieldElement operator-() const;
    friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
    FieldElement inv() const;
    FieldElement pow(long e) const;

    // multiply by pi^k (exact, shifts valuation)
    FieldElement shift(long k) const;

    FieldElement frobenius(long k = 1) const;

    // true when a - b cannot be distinguished from zero at working precision
    friend bool equal_at_precision(const FieldElement& a, const FieldElement& b);

    // deterministic representation order for canonical forms (not a field order)
    friend bool repr_less(const FieldElement& a, const FieldElement& b);

    std::string str() const; // debugging aid

private:
    Ctx ctx_;
    ElemState state_ = ElemState::Zero;
    long w_ = 0;      // pi-adic valuation (Regular)
    long rel_ = 0;    // trusted pi-digits of the unit part (Regular)
    long zbound_ = 0; // NearZero: value == 0 mod pi^zbound_
    std::vector<Int> digits_; // d*m coefficients, digit j coeff i at [j*m+i]

    void normalize();
};

// Embedding into a compatible larger context (same p and N, m | m', d | d').
// Unramified part goes through the Conway-compatible generator power map,
// Hensel-lifted; pi maps to pi'^{d'/d}.  Throws IncompatibleTower.
FieldElement extend_field(const FieldElement& x, const Ctx& dst);

// Convenience: coerce x into dst if needed (no-op when contexts are equal).
FieldElement coerce(const FieldElement& x, const Ctx& dst);

} // namespace ibt
