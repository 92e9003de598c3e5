#include "ibt/residue.hpp"

namespace ibt {

namespace {
long mod(long a, long p) {
    long r = a % p;
    return r < 0 ? r + p : r;
}
} // namespace

ResidueField::ResidueField(long p, std::vector<long> minpoly)
    : p_(p), m_(static_cast<long>(minpoly.size()) - 1), minpoly_(std::move(minpoly)) {
    if (m_ < 1) throw InvalidParams("residue field minpoly must have degree >= 1");
    for (auto& c : minpoly_) c = mod(c, p_);
    if (minpoly_.back() != 1) throw InvalidParams("residue field minpoly must be monic");
}

ResidueField::Elem ResidueField::one() const {
    Elem e(m_, 0);
    e[0] = 1;
    return e;
}

ResidueField::Elem ResidueField::gen() const {
    Elem e(m_, 0);
    if (m_ == 1) {
        e[0] = mod(-minpoly_[0], p_); // the root itself
    } else {
        e[1] = 1;
    }
    return e;
}

ResidueField::Elem ResidueField::from_int(long v) const {
    Elem e(m_, 0);
    e[0] = mod(v, p_);
    return e;
}

bool ResidueField::is_zero(const Elem& a) const {
    for (long c : a)
        if (c != 0) return false;
    return true;
}

ResidueField::Elem ResidueField::add(const Elem& a, const Elem& b) const {
    Elem r(m_);
    for (long i = 0; i < m_; ++i) r[i] = mod(a[i] + b[i], p_);
    return r;
}

ResidueField::Elem ResidueField::sub(const Elem& a, const Elem& b) const {
    Elem r(m_);
    for (long i = 0; i < m_; ++i) r[i] = mod(a[i] - b[i], p_);
    return r;
}

ResidueField::Elem ResidueField::neg(const Elem& a) const {
    Elem r(m_);
    for (long i = 0; i < m_; ++i) r[i] = mod(-a[i], p_);
    return r;
}

ResidueField::Elem ResidueField::mul(const Elem& a, const Elem& b) const {
    std::vector<long> prod(2 * m_ - 1, 0);
    for (long i = 0; i < m_; ++i) {
        if (a[i] == 0) continue;
        for (long j = 0; j < m_; ++j) prod[i + j] = mod(prod[i + j] + a[i] * b[j], p_);
    }
    for (long i = 2 * m_ - 2; i >= m_; --i) {
        long c = prod[i];
        if (c == 0) continue;
        prod[i] = 0;
        for (long j = 0; j < m_; ++j) prod[i - m_ + j] = mod(prod[i - m_ + j] - c * minpoly_[j], p_);
    }
    prod.resize(m_);
    return prod;
}

ResidueField::Elem ResidueField::pow(Elem a, unsigned long e) const {
    Elem r = one();
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

ResidueField::Elem ResidueField::inv(const Elem& a) const {
    if (is_zero(a)) throw DivisionByZero("inverse of zero residue");
    // order of F_{p^m}^* is p^m - 1; for m <= 12 and p <= 7 this fits easily
    unsigned long order = 1;
    for (long i = 0; i < m_; ++i) order *= static_cast<unsigned long>(p_);
    return pow(a, order - 2);
}

int ResidueField::pdeg(const Poly& f) {
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) {
        for (long c : f[i])
            if (c != 0) return i;
    }
    return -1;
}

ResidueField::Poly ResidueField::padd(const Poly& a, const Poly& b) const {
    Poly r(std::max(a.size(), b.size()), zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = add(r[i], b[i]);
    return r;
}

ResidueField::Poly ResidueField::psub(const Poly& a, const Poly& b) const {
    Poly r(std::max(a.size(), b.size()), zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = sub(r[i], b[i]);
    return r;
}

ResidueField::Poly ResidueField::pmul(const Poly& a, const Poly& b) const {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, zero());
    for (size_t i = 0; i < a.size(); ++i) {
        if (is_zero(a[i])) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = add(r[i + j], mul(a[i], b[j]));
    }
    return r;
}

void ResidueField::pdivmod(const Poly& a, const Poly& b, Poly& q, Poly& r) const {
    int db = pdeg(b);
    if (db < 0) throw DivisionByZero("polynomial division by zero");
    Elem lead_inv = inv(b[db]);
    r = a;
    int dr = pdeg(r);
    q.assign(dr >= db ? dr - db + 1 : 0, zero());
    while (dr >= db) {
        Elem c = mul(r[dr], lead_inv);
        q[dr - db] = c;
        for (int i = 0; i <= db; ++i) r[dr - db + i] = sub(r[dr - db + i], mul(c, b[i]));
        dr = pdeg(r);
    }
    r.resize(dr + 1);
}

ResidueField::Poly ResidueField::pmod(const Poly& a, const Poly& b) const {
    Poly q, r;
    pdivmod(a, b, q, r);
    return r;
}

ResidueField::Poly ResidueField::pmonic(const Poly& a) const {
    int d = pdeg(a);
    if (d < 0) return {};
    Elem c = inv(a[d]);
    Poly r(a.begin(), a.begin() + d + 1);
    for (auto& e : r) e = mul(e, c);
    return r;
}

ResidueField::Poly ResidueField::pxgcd(const Poly& a, const Poly& b, Poly& s, Poly& t) const {
    // extended Euclid, invariants r0 = s0*a + t0*b, r1 = s1*a + t1*b
    Poly r0 = a, r1 = b;
    Poly s0 = {one()}, s1 = {};
    Poly t0 = {}, t1 = {one()};
    while (pdeg(r1) >= 0) {
        Poly q, rem;
        pdivmod(r0, r1, q, rem);
        Poly s2 = psub(s0, pmul(q, s1));
        Poly t2 = psub(t0, pmul(q, t1));
        r0 = r1; r1 = rem;
        s0 = s1; s1 = s2;
        t0 = t1; t1 = t2;
    }
    int d = pdeg(r0);
    if (d < 0) { s = {}; t = {}; return {}; }
    Elem c = inv(r0[d]);
    auto scale = [&](Poly& f) {
        for (auto& e : f) e = mul(e, c);
    };
    scale(r0); r0.resize(d + 1);
    s = s0; scale(s);
    t = t0; scale(t);
    return r0;
}

} // namespace ibt
