#include "ibt/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace ibt {

long poly_deg(const Poly& f) {
    for (long i = (long)f.size() - 1; i >= 0; --i)
        if (!f[i].is_exact_zero()) return i;
    return -1;
}

Poly poly_trim(Poly f) {
    f.resize((size_t)(poly_deg(f) + 1));
    return f;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly c(std::max(a.size(), b.size()));
    for (size_t i = 0; i < c.size(); ++i) {
        if (i < a.size() && i < b.size())
            c[i] = a[i] + b[i];
        else
            c[i] = (i < a.size()) ? a[i] : b[i];
    }
    return c;
}

Poly poly_sub(const Poly& a, const Poly& b) {
    Poly nb(b.size());
    for (size_t i = 0; i < b.size(); ++i) nb[i] = -b[i];
    return poly_add(a, nb);
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Ctx c = a[0].ctx() ? a[0].ctx() : b[0].ctx();
    Poly r(a.size() + b.size() - 1, FieldElement::zero(c));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_exact_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (b[j].is_exact_zero()) continue;
            r[i + j] = r[i + j] + a[i] * b[j];
        }
    }
    return r;
}

Poly poly_scale(const Poly& f, const FieldElement& c) {
    Poly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) r[i] = f[i] * c;
    return r;
}

FieldElement poly_eval(const Poly& f, const FieldElement& x) {
    FieldElement r = FieldElement::zero(x.ctx());
    for (long i = (long)f.size() - 1; i >= 0; --i) r = r * x + f[i];
    return r;
}

namespace {

struct HullPoint {
    long i;
    Rat v;
};

Rat cross(const HullPoint& a, const HullPoint& b, const HullPoint& c) {
    return Rat(b.i - a.i) * (c.v - a.v) - (b.v - a.v) * Rat(c.i - a.i);
}

// hull value at index i (i between first and last hull x-coordinates)
Rat hull_value(const std::vector<HullPoint>& hull, long i) {
    for (size_t k = 0; k + 1 < hull.size(); ++k)
        if (i >= hull[k].i && i <= hull[k + 1].i) {
            Rat s = (hull[k + 1].v - hull[k].v) / Rat(hull[k + 1].i - hull[k].i);
            return hull[k].v + s * Rat(i - hull[k].i);
        }
    return hull.back().v;
}

} // namespace

std::vector<NPSegment> newton_polygon(const Poly& f0) {
    Poly f = poly_trim(f0);
    if (f.empty()) throw InvalidParams("newton polygon of the zero polynomial");
    long n = (long)f.size() - 1;
    if (f[n].is_zeroish())
        throw PrecisionExhausted("leading coefficient is zero at working precision; degree uncertain");
    long i0 = 0;
    while (f[i0].is_exact_zero()) ++i0;
    if (f[i0].state() == ElemState::NearZero)
        throw PrecisionExhausted(
            "lowest potentially nonzero coefficient vanishes at working precision; "
            "root valuations uncertain");
    if (i0 == n) return {};

    std::vector<HullPoint> hull;
    for (long i = i0; i <= n; ++i) {
        if (f[i].state() != ElemState::Regular) continue;
        HullPoint pt{i, f[i].valuation()};
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), pt) <= 0)
            hull.pop_back();
        hull.push_back(pt);
    }
    // certified-vanishing coefficients must not dip below the hull
    for (long i = i0; i <= n; ++i) {
        if (f[i].state() != ElemState::NearZero) continue;
        Rat bound = rat(f[i].near_zero_bound(), f[i].ctx()->d());
        if (bound < hull_value(hull, i)) {
            std::ostringstream os;
            os << "coefficient of x^" << i << " is zero to precision (bound " << rat_str(bound)
               << ") but the polygon needs valuation >= " << rat_str(hull_value(hull, i))
               << "; increase precision";
            throw PrecisionExhausted(os.str());
        }
    }

    std::vector<NPSegment> out;
    for (size_t k = 0; k + 1 < hull.size(); ++k) {
        Rat s = (hull[k + 1].v - hull[k].v) / Rat(hull[k + 1].i - hull[k].i);
        out.push_back({-s, hull[k + 1].i - hull[k].i});
    }
    std::sort(out.begin(), out.end(), [](const NPSegment& a, const NPSegment& b) { return a.slope < b.slope; });
    return out;
}

namespace {

using RPoly = ResidueField::Poly;

RPoly residue_poly(const Poly& f, long upto) {
    const ResidueField& R = f[0].ctx()->residue_field();
    RPoly r((size_t)(upto + 1), R.zero());
    for (long i = 0; i <= upto && i < (long)f.size(); ++i) r[i] = f[i].residue();
    return r;
}

Poly lift_int_poly(const Ctx& c, const std::vector<std::vector<Int>>& coeffs, long pdigits) {
    Poly f(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) {
        std::vector<Int> digits((size_t)(c->d() * c->m()), Int(0));
        for (long t = 0; t < c->m(); ++t) digits[t] = coeffs[i][t];
        f[i] = FieldElement::make(c, 0, std::move(digits), pdigits * c->d());
    }
    return f;
}

void accumulate(std::vector<Int>& acc, const ResidueField::Elem& e, const Int& pk) {
    for (size_t t = 0; t < acc.size(); ++t)
        if (e[t]) acc[t] += pk * e[t];
}

// split monic integral g (unit roots and positive-valuation roots, both
// present) as (unit-root factor) * (rest), to pdigits base-p digits
void hensel_split(const Poly& g, long h, long pdigits, Poly& Aout, Poly& Bout) {
    const Ctx& c = g[0].ctx();
    const ResidueField& R = c->residue_field();
    long n = (long)g.size() - 1;

    RPoly gbar = residue_poly(g, n);
    // gbar = y^{n-h} * Abar with Abar(0) != 0
    RPoly Abar(gbar.begin() + (n - h), gbar.end());
    for (long i = 0; i < n - h; ++i)
        if (!R.is_zero(gbar[i]))
            throw Error("internal", "reduction is not divisible by the expected power of y");
    RPoly Bbar((size_t)(n - h + 1), R.zero());
    Bbar[n - h] = R.one();
    RPoly S, T;
    RPoly gcd = R.pxgcd(Abar, Bbar, S, T);
    if (ResidueField::pdeg(gcd) != 0)
        throw Error("internal", "unit and non-unit parts are not coprime");
    // normalize Bezout pair so that S*Abar + T*Bbar = 1 exactly
    auto ginv = R.inv(gcd[0]);
    for (auto& e : S) e = R.mul(e, ginv);
    for (auto& e : T) e = R.mul(e, ginv);

    // integer-coefficient accumulators for A (degree h, monic) and B
    std::vector<std::vector<Int>> Acc((size_t)(h + 1), std::vector<Int>((size_t)c->m(), Int(0)));
    std::vector<std::vector<Int>> Bcc((size_t)(n - h + 1), std::vector<Int>((size_t)c->m(), Int(0)));
    for (long i = 0; i <= h; ++i)
        for (long t = 0; t < c->m(); ++t) Acc[i][t] = Abar[i][t];
    Bcc[n - h][0] = 1;

    Int pk(1);
    for (long k = 1; k < pdigits; ++k) {
        pk *= c->p();
        Poly A = lift_int_poly(c, Acc, pdigits);
        Poly B = lift_int_poly(c, Bcc, pdigits);
        Poly E = poly_sub(g, poly_mul(A, B));
        RPoly ebar((size_t)n, R.zero());
        bool all_zero = true;
        for (long i = 0; i < n; ++i) {
            if (i < (long)E.size()) {
                FieldElement shifted = E[i].shift(-k * c->d());
                auto vi = shifted.val_info();
                if (vi.kind == ValInfo::Exact && vi.v < 0)
                    throw Error("internal", "hensel congruence invariant violated");
                ebar[i] = shifted.residue();
            }
            if (!R.is_zero(ebar[i])) all_zero = false;
        }
        if (all_zero) continue;
        RPoly abar = R.pmod(R.pmul(T, ebar), Abar);
        RPoly rem, bbar;
        R.pdivmod(R.psub(ebar, R.pmul(abar, Bbar)), Abar, bbar, rem);
        if (ResidueField::pdeg(rem) >= 0)
            throw Error("internal", "hensel correction division is not exact");
        for (long i = 0; i <= ResidueField::pdeg(abar) && i <= h; ++i) accumulate(Acc[i], abar[i], pk);
        for (long i = 0; i <= ResidueField::pdeg(bbar) && i <= n - h; ++i) accumulate(Bcc[i], bbar[i], pk);
    }
    Aout = lift_int_poly(c, Acc, pdigits);
    Bout = lift_int_poly(c, Bcc, pdigits);
}

// certified absolute pi-precision of a coefficient
long abs_prec(const FieldElement& x) {
    long cap = x.ctx()->d() * x.ctx()->N();
    switch (x.state()) {
    case ElemState::Zero:
        return cap;
    case ElemState::NearZero:
        return std::min(cap, x.near_zero_bound());
    default:
        return std::min(cap, x.pi_valuation() + x.rel());
    }
}

} // namespace

std::vector<Poly> slope_factorization(const Poly& f0) {
    Poly f = poly_trim(f0);
    if (poly_deg(f) < 1) throw InvalidParams("cannot slope-factor a constant");
    if (f[0].is_exact_zero())
        throw InvalidParams("constant term vanishes; divide out the power of x first");
    const Ctx& c = f[0].ctx();
    if (f.back().is_zeroish())
        throw PrecisionExhausted("leading coefficient is zero at working precision");
    Poly fm = poly_scale(f, f.back().inv());

    std::vector<Poly> out;
    Poly work = fm;
    while (true) {
        auto segs = newton_polygon(work);
        if (segs.size() <= 1) {
            out.push_back(work);
            break;
        }
        for (const auto& s : segs)
            if (!rat_is_integer(s.slope))
                throw SlopeNotIntegral("cannot split at fractional root valuation " + rat_str(s.slope) +
                                       "; pass to a twisted power with integral valuations instead");
        long lam = (long)rat_num(segs[0].slope).get_si();
        long h = segs[0].mult;
        long n = poly_deg(work);

        // g(y) = work(p^lam y) / p^{lam n}: unit roots are the smallest-slope part
        Poly g((size_t)(n + 1));
        long prec = c->N() * c->d();
        for (long i = 0; i <= n; ++i) {
            g[i] = work[i].shift(lam * (i - n) * c->d());
            prec = std::min(prec, abs_prec(g[i]));
        }
        long pdigits = prec / c->d();
        if (pdigits < 2)
            throw PrecisionExhausted("not enough certified digits to split the polygon");

        Poly A, B;
        hensel_split(g, h, pdigits, A, B);
        // undo the substitution on both factors
        Poly facA((size_t)(h + 1)), facB((size_t)(n - h + 1));
        for (long i = 0; i <= h; ++i) facA[i] = A[i].shift(lam * (h - i) * c->d());
        for (long i = 0; i <= n - h; ++i) facB[i] = B[i].shift(lam * (n - h - i) * c->d());
        out.push_back(facA);
        work = facB;
    }

    Poly prod = out[0];
    for (size_t i = 1; i < out.size(); ++i) prod = poly_mul(prod, out[i]);
    Poly diff = poly_sub(prod, fm);
    for (const auto& e : diff)
        if (!e.is_zeroish())
            throw DecompositionUnverified(
                "product of slope factors does not reproduce the input at working precision");
    return out;
}

} // namespace ibt
