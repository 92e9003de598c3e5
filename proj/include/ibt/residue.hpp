#pragma once

#include <vector>

#include "ibt/errors.hpp"

namespace ibt {

// Arithmetic in the residue field F_{p^m} = F_p[z]/(minpoly) with small
// coefficient vectors, plus the polynomial operations over F_{p^m} needed by
// Hensel lifting.  Elements are coefficient vectors of length m with entries
// in [0, p).
class ResidueField {
public:
    using Elem = std::vector<long>;

    ResidueField(long p, std::vector<long> minpoly);

    long p() const { return p_; }
    long m() const { return m_; }

    Elem zero() const { return Elem(m_, 0); }
    Elem one() const;
    Elem gen() const; // z (or the root of the degree-1 minpoly when m = 1)
    Elem from_int(long v) const;

    bool is_zero(const Elem& a) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem inv(const Elem& a) const; // DivisionByZero on 0
    Elem pow(Elem a, unsigned long e) const;

    // polynomials over F_{p^m}, coefficient lists low -> high
    using Poly = std::vector<Elem>;

    static int pdeg(const Poly& f);
    Poly pmul(const Poly& a, const Poly& b) const;
    Poly padd(const Poly& a, const Poly& b) const;
    Poly psub(const Poly& a, const Poly& b) const;
    // division with remainder by a nonzero divisor
    void pdivmod(const Poly& a, const Poly& b, Poly& q, Poly& r) const;
    Poly pmod(const Poly& a, const Poly& b) const;
    // g = gcd(a,b) monic, plus Bezout coefficients s,t with s*a + t*b = g
    Poly pxgcd(const Poly& a, const Poly& b, Poly& s, Poly& t) const;
    Poly pmonic(const Poly& a) const;

private:
    long p_;
    long m_;
    std::vector<long> minpoly_; // length m_+1, monic
};

} // namespace ibt
