#include "ibt/field.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "ibt/conway.hpp"

namespace ibt {

namespace {

using V = std::vector<Int>;

Int pow_int(long base, long e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), (unsigned long)base, (unsigned long)e);
    return r;
}

void reduce_vec(V& v, const Int& mod) {
    for (auto& x : v) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
}

long vp_int(const Int& x, long p, long cap) {
    if (x == 0) return cap;
    Int t, pp(p);
    long v = (long)mpz_remove(t.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t());
    return std::min(v, cap);
}

// ---- arithmetic in Z[zeta]/(minpoly) mod an integer modulus -------------

struct ZRing {
    long p, m;
    const std::vector<long>& mp;
    const Int& mod;
    const ResidueField& res;
};

void zr_reduce(const ZRing& R, V& a) {
    for (long k = (long)a.size() - 1; k >= R.m; --k) {
        if (a[k] == 0) continue;
        Int c = a[k];
        a[k] = 0;
        for (long j = 0; j < R.m; ++j)
            if (R.mp[j] != 0) mpz_submul_ui(a[k - R.m + j].get_mpz_t(), c.get_mpz_t(), (unsigned long)R.mp[j]);
    }
    a.resize(R.m);
    reduce_vec(a, R.mod);
}

V zr_mul(const ZRing& R, const V& a, const V& b) {
    V c(2 * R.m - 1, Int(0));
    for (long i = 0; i < R.m; ++i) {
        if (a[i] == 0) continue;
        for (long j = 0; j < R.m; ++j) {
            if (b[j] == 0) continue;
            mpz_addmul(c[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        }
    }
    zr_reduce(R, c);
    return c;
}

V zr_sub(const ZRing& R, const V& a, const V& b) {
    V c(R.m);
    for (long i = 0; i < R.m; ++i) c[i] = a[i] - b[i];
    reduce_vec(c, R.mod);
    return c;
}

bool zr_is_zero(const V& a) {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

V zr_lift(const ZRing& R, const ResidueField::Elem& e) {
    V v(R.m, Int(0));
    for (long i = 0; i < R.m; ++i) v[i] = e[i];
    return v;
}

ResidueField::Elem zr_residue(const ZRing& R, const V& a) {
    ResidueField::Elem e(R.m, 0);
    for (long i = 0; i < R.m; ++i) {
        Int r;
        mpz_fdiv_r_ui(r.get_mpz_t(), a[i].get_mpz_t(), (unsigned long)R.p);
        e[i] = r.get_si();
    }
    return e;
}

V zr_inv(const ZRing& R, const V& u) {
    auto r = zr_residue(R, u);
    if (R.res.is_zero(r)) throw Error("internal", "zr_inv of non-unit");
    V v = zr_lift(R, R.res.inv(r));
    V one(R.m, Int(0));
    one[0] = 1;
    for (int it = 0; it < 64; ++it) {
        V uv = zr_mul(R, u, v);
        if (zr_is_zero(zr_sub(R, uv, one))) return v;
        V t = zr_sub(R, one, uv);
        t[0] += 1; // t = 2 - u v
        reduce_vec(t, R.mod);
        v = zr_mul(R, v, t);
    }
    throw Error("internal", "zr_inv did not converge");
}

// Horner evaluation of a polynomial with small integer coefficients
V zr_eval_long(const ZRing& R, const std::vector<long>& f, const V& y) {
    V r(R.m, Int(0));
    for (long i = (long)f.size() - 1; i >= 0; --i) {
        r = zr_mul(R, r, y);
        r[0] += f[i];
    }
    reduce_vec(r, R.mod);
    return r;
}

V zr_eval_int(const ZRing& R, const V& coeffs, const V& y) {
    V r(R.m, Int(0));
    for (long i = (long)coeffs.size() - 1; i >= 0; --i) {
        r = zr_mul(R, r, y);
        r[0] += coeffs[i];
    }
    reduce_vec(r, R.mod);
    return r;
}

// Newton lift of a simple root of f (small integer coefficients) from a
// residue-field seed, to the full modulus of R.
V zr_newton_root(const ZRing& R, const std::vector<long>& f, const ResidueField::Elem& seed) {
    std::vector<long> df(f.size() > 1 ? f.size() - 1 : 1, 0);
    for (size_t i = 1; i < f.size(); ++i) df[i - 1] = (long)i * f[i];
    V y = zr_lift(R, seed);
    for (int it = 0; it < 64; ++it) {
        V fy = zr_eval_long(R, f, y);
        if (zr_is_zero(fy)) return y;
        V dfy = zr_eval_long(R, df, y);
        y = zr_sub(R, y, zr_mul(R, fy, zr_inv(R, dfy)));
    }
    throw Error("internal", "newton root lift did not converge");
}

// ---- synthesized degree-1 minimal polynomials for primes off the table --

bool is_primitive_root(long g, long p) {
    long n = p - 1;
    std::vector<long> fac;
    long t = n;
    for (long q = 2; q * q <= t; ++q)
        if (t % q == 0) {
            fac.push_back(q);
            while (t % q == 0) t /= q;
        }
    if (t > 1) fac.push_back(t);
    for (long q : fac) {
        Int r;
        mpz_powm_ui(r.get_mpz_t(), Int(g).get_mpz_t(), (unsigned long)(n / q), Int(p).get_mpz_t());
        if (r == 1) return false;
    }
    return true;
}

std::vector<long> degree_one_minpoly(long p) {
    if (p == 2) return {1, 1}; // x + 1, root 1
    for (long g = 2; g < p; ++g)
        if (is_primitive_root(g, p)) return {p - g, 1};
    throw Error("internal", "no primitive root found");
}

} // namespace

// ---- FieldContext --------------------------------------------------------

FieldContext::FieldContext(long p, long m, long N, long d)
    : p_(p), m_(m), N_(N), d_(d),
      pN_(pow_int(p, N)),
      minpoly_(has_conway_polynomial(p, m) ? conway_polynomial(p, m) : degree_one_minpoly(p)),
      res_(p, minpoly_) {
    ZRing R{p_, m_, minpoly_, pN_, res_};
    frob_zeta_pows_.resize(m_);
    V gen(m_, Int(0));
    if (m_ == 1)
        gen[0] = (p_ - minpoly_[0]) % p_;
    else
        gen[1] = 1;
    V cur = gen;
    V sigma_gen;
    if (m_ >= 2) {
        auto seed = res_.pow(res_.gen(), (unsigned long)p_);
        sigma_gen = zr_newton_root(R, minpoly_, seed);
    }
    for (long k = 0; k < m_; ++k) {
        if (k > 0) cur = zr_eval_int(R, sigma_gen, cur);
        auto& pows = frob_zeta_pows_[k];
        pows.resize(m_);
        V one(m_, Int(0));
        one[0] = 1;
        pows[0] = one;
        for (long i = 1; i < m_; ++i) pows[i] = zr_mul(R, pows[i - 1], cur);
    }
    if (m_ >= 2) {
        V back = zr_eval_int(R, sigma_gen, cur);
        if (!zr_is_zero(zr_sub(R, back, gen)))
            throw Error("internal", "frobenius does not have the expected order");
        if (!zr_is_zero(zr_eval_long(R, minpoly_, sigma_gen)))
            throw Error("internal", "frobenius image is not a root of the minimal polynomial");
    }
}

std::string FieldContext::describe() const {
    std::ostringstream os;
    os << "Q_" << p_;
    if (m_ > 1) os << "^" << m_;
    if (d_ > 1) os << "(pi), pi^" << d_ << "=" << p_;
    os << " @ O(" << p_ << "^" << N_ << ")";
    return os.str();
}

Ctx make_field(long p, long m, long N, long d) {
    if (p < 2 || p > 999983) throw InvalidParams("prime must lie in [2, 999983], got " + std::to_string(p));
    {
        Int pp(p);
        if (!mpz_probab_prime_p(pp.get_mpz_t(), 40))
            throw InvalidParams(std::to_string(p) + " is not prime");
    }
    if (m < 1 || m > 64) throw InvalidParams("residue degree must lie in [1, 64], got " + std::to_string(m));
    if (d < 1 || d > 256) throw InvalidParams("ramification index must lie in [1, 256], got " + std::to_string(d));
    if (N < 4) throw PrecisionTooSmall("precision must be at least 4 digits, got " + std::to_string(N));
    if (N > 256) throw InvalidParams("precision must be at most 256 digits, got " + std::to_string(N));
    if (m >= 2 && !has_conway_polynomial(p, m))
        throw NoConwayPolynomial("no residue generator table entry for p=" + std::to_string(p) +
                                 ", m=" + std::to_string(m) +
                                 " (available: p=2,3 up to m=12; p=5 up to m=8; p=7 up to m=4)");

    static std::mutex mu;
    static std::map<std::tuple<long, long, long, long>, Ctx> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto key = std::make_tuple(p, m, N, d);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Ctx c(new FieldContext(p, m, N, d));
    cache.emplace(key, c);
    return c;
}

Ctx join_context(const Ctx& a, const Ctx& b) {
    if (a->same_as(*b)) return a;
    if (a->p() != b->p())
        throw IncompatibleTower("cannot join fields over different primes");
    if (a->N() != b->N())
        throw IncompatibleTower("cannot join fields at different working precisions");
    return make_field(a->p(), lcm_long(a->m(), b->m()), a->N(), lcm_long(a->d(), b->d()));
}

// ---- digit-vector helpers (length d*m, digit j coeff i at [j*m+i]) -------

namespace {

V u_zero(const FieldContext& C) { return V(C.d() * C.m(), Int(0)); }

V u_one(const FieldContext& C) {
    V v = u_zero(C);
    v[0] = 1;
    return v;
}

V u_add(const FieldContext& C, const V& a, const V& b) {
    V c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    reduce_vec(c, C.pN());
    return c;
}

V u_neg(const FieldContext& C, const V& a) {
    V c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = (a[i] == 0) ? Int(0) : Int(C.pN() - a[i]);
    return c;
}

V u_mul(const FieldContext& C, const V& a, const V& b, const Int* mod = nullptr) {
    const Int& M = mod ? *mod : C.pN();
    long d = C.d(), m = C.m();
    std::vector<V> conv((size_t)(2 * d - 1), V(2 * m - 1, Int(0)));
    for (long j1 = 0; j1 < d; ++j1)
        for (long j2 = 0; j2 < d; ++j2) {
            auto& t = conv[j1 + j2];
            for (long i1 = 0; i1 < m; ++i1) {
                const Int& x = a[j1 * m + i1];
                if (x == 0) continue;
                for (long i2 = 0; i2 < m; ++i2) {
                    const Int& y = b[j2 * m + i2];
                    if (y == 0) continue;
                    mpz_addmul(t[i1 + i2].get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
                }
            }
        }
    for (long l = 2 * d - 2; l >= d; --l)
        for (long i = 0; i < 2 * m - 1; ++i)
            if (conv[l][i] != 0) mpz_addmul_ui(conv[l - d][i].get_mpz_t(), conv[l][i].get_mpz_t(), (unsigned long)C.p());
    ZRing R{C.p(), m, C.minpoly(), M, C.residue_field()};
    V out((size_t)(d * m));
    for (long l = 0; l < d; ++l) {
        V t(conv[l].begin(), conv[l].end());
        zr_reduce(R, t);
        for (long i = 0; i < m; ++i) out[l * m + i] = t[i];
    }
    return out;
}

// pi-adic valuation of the digit vector, capped at d*N
long u_pival(const FieldContext& C, const V& u) {
    long best = C.d() * C.N();
    for (long j = 0; j < C.d() && best > j; ++j) {
        long v = C.N();
        for (long i = 0; i < C.m() && v > 0; ++i)
            v = std::min(v, vp_int(u[j * C.m() + i], C.p(), C.N()));
        best = std::min(best, C.d() * v + j);
    }
    return best;
}

V u_shift_up(const FieldContext& C, const V& u, long k) {
    long d = C.d(), m = C.m();
    long q = k / d, r = k % d;
    V out = u_zero(C);
    Int pq = pow_int(C.p(), q);
    for (long j = 0; j < d; ++j) {
        long jj = j + r;
        Int extra = pq;
        if (jj >= d) {
            jj -= d;
            extra *= C.p();
        }
        for (long i = 0; i < m; ++i)
            if (u[j * m + i] != 0) out[jj * m + i] = u[j * m + i] * extra;
    }
    reduce_vec(out, C.pN());
    return out;
}

// exact division by pi^t; requires u_pival(u) >= t
V u_shift_dn(const FieldContext& C, const V& u, long t) {
    long d = C.d(), m = C.m();
    long q = t / d, r = t % d;
    V out = u_zero(C);
    Int pq = pow_int(C.p(), q);
    Int pq1 = pq * C.p();
    for (long j = 0; j < d; ++j) {
        long jj;
        const Int& den = (j < r) ? pq1 : pq;
        jj = (j < r) ? (d - r + j) : (j - r);
        for (long i = 0; i < m; ++i) {
            const Int& x = u[j * m + i];
            if (x == 0) continue;
            if (!mpz_divisible_p(x.get_mpz_t(), den.get_mpz_t()))
                throw Error("internal", "inexact digit shift");
            mpz_divexact(out[jj * m + i].get_mpz_t(), x.get_mpz_t(), den.get_mpz_t());
        }
    }
    return out;
}

ResidueField::Elem u_residue0(const FieldContext& C, const V& u) {
    ResidueField::Elem e(C.m(), 0);
    for (long i = 0; i < C.m(); ++i) {
        Int r;
        mpz_fdiv_r_ui(r.get_mpz_t(), u[i].get_mpz_t(), (unsigned long)C.p());
        e[i] = r.get_si();
    }
    return e;
}

// inverse of a digit-vector unit (residue of digit 0 nonzero), by Newton
// iteration with doubling precision and a full-precision polish
V u_inv(const FieldContext& C, const V& u) {
    auto r0 = u_residue0(C, u);
    if (C.residue_field().is_zero(r0)) throw Error("internal", "u_inv of non-unit");
    V v = u_zero(C);
    auto inv0 = C.residue_field().inv(r0);
    for (long i = 0; i < C.m(); ++i) v[i] = inv0[i];
    long target = C.d() * C.N();
    long c = 1;
    while (c < target) {
        c = std::min(2 * c, target);
        long pdig = std::min(C.N(), (c + C.d() - 1) / C.d() + 1);
        Int mod = pow_int(C.p(), pdig);
        V uv = u_mul(C, u, v, &mod);
        V t = u_zero(C);
        t[0] = 2;
        for (size_t i = 0; i < t.size(); ++i) t[i] -= uv[i];
        reduce_vec(t, mod);
        v = u_mul(C, v, t, &mod);
    }
    for (int polish = 0; polish < 3; ++polish) {
        V uv = u_mul(C, u, v);
        V diff = u_add(C, uv, u_neg(C, u_one(C)));
        bool ok = true;
        for (const auto& x : diff)
            if (x != 0) {
                ok = false;
                break;
            }
        if (ok) return v;
        V t = u_zero(C);
        t[0] = 2;
        for (size_t i = 0; i < t.size(); ++i) t[i] -= uv[i];
        reduce_vec(t, C.pN());
        v = u_mul(C, v, t);
    }
    throw Error("internal", "u_inv did not converge");
}

V u_sigma(const FieldContext& C, const V& u, long k) {
    long m = C.m();
    if (m == 1 || k % m == 0) return u;
    k = ((k % m) + m) % m;
    V out = u_zero(C);
    for (long j = 0; j < C.d(); ++j)
        for (long i = 0; i < m; ++i) {
            const Int& x = u[j * m + i];
            if (x == 0) continue;
            const V& pw = C.frob_pow(k, i);
            for (long t = 0; t < m; ++t)
                if (pw[t] != 0) mpz_addmul(out[j * m + t].get_mpz_t(), x.get_mpz_t(), pw[t].get_mpz_t());
        }
    reduce_vec(out, C.pN());
    return out;
}

} // namespace

// ---- FieldElement --------------------------------------------------------

FieldElement FieldElement::zero(const Ctx& c) {
    FieldElement x;
    x.ctx_ = c;
    x.state_ = ElemState::Zero;
    return x;
}

FieldElement FieldElement::near_zero(const Ctx& c, long pi_bound) {
    FieldElement x;
    x.ctx_ = c;
    x.state_ = ElemState::NearZero;
    x.zbound_ = pi_bound;
    return x;
}

FieldElement FieldElement::make(const Ctx& c, long w, std::vector<Int> digits, long rel) {
    if ((long)digits.size() != c->d() * c->m())
        throw InvalidParams("digit vector has wrong length");
    rel = std::min(rel, c->d() * c->N());
    if (rel < 1) throw InvalidParams("relative precision must be positive");
    reduce_vec(digits, c->pN());
    long t = u_pival(*c, digits);
    if (t >= rel) return near_zero(c, w + rel);
    FieldElement x;
    x.ctx_ = c;
    x.state_ = ElemState::Regular;
    x.w_ = w + t;
    x.rel_ = rel - t;
    x.digits_ = (t > 0) ? u_shift_dn(*c, digits, t) : std::move(digits);
    return x;
}

FieldElement FieldElement::one(const Ctx& c) {
    FieldElement x;
    x.ctx_ = c;
    x.state_ = ElemState::Regular;
    x.w_ = 0;
    x.rel_ = c->d() * c->N();
    x.digits_ = u_one(*c);
    return x;
}

FieldElement FieldElement::from_int(const Ctx& c, const Int& v) {
    if (v == 0) return zero(c);
    Int u;
    Int pp(c->p());
    long q = (long)mpz_remove(u.get_mpz_t(), v.get_mpz_t(), pp.get_mpz_t());
    V digits = u_zero(*c);
    mpz_fdiv_r(digits[0].get_mpz_t(), u.get_mpz_t(), c->pN().get_mpz_t());
    FieldElement x;
    x.ctx_ = c;
    x.state_ = ElemState::Regular;
    x.w_ = c->d() * q;
    x.rel_ = c->d() * c->N();
    x.digits_ = std::move(digits);
    return x;
}

FieldElement FieldElement::from_rat(const Ctx& c, const Rat& q) {
    if (q == 0) return zero(c);
    return from_int(c, rat_num(q)) / from_int(c, rat_den(q));
}

FieldElement FieldElement::p_power(const Ctx& c, const Rat& e) {
    Rat we = e * c->d();
    if (!rat_is_integer(we))
        throw InvalidParams("exponent " + rat_str(e) + " does not lie in the value group (1/" +
                            std::to_string(c->d()) + ")Z");
    Int wi = rat_num(we);
    if (!wi.fits_slong_p()) throw InvalidParams("exponent too large");
    return pi_power(c, wi.get_si());
}

FieldElement FieldElement::pi_power(const Ctx& c, long w) {
    FieldElement x = one(c);
    x.w_ = w;
    return x;
}

FieldElement FieldElement::generator(const Ctx& c) {
    if (c->m() == 1) {
        long g = (c->p() - c->minpoly()[0]) % c->p();
        return from_int(c, g);
    }
    V digits = u_zero(*c);
    digits[1] = 1;
    FieldElement x;
    x.ctx_ = c;
    x.state_ = ElemState::Regular;
    x.w_ = 0;
    x.rel_ = c->d() * c->N();
    x.digits_ = std::move(digits);
    return x;
}

ValInfo FieldElement::val_info() const {
    switch (state_) {
    case ElemState::Zero:
        return {ValInfo::Infinite, Rat(0)};
    case ElemState::NearZero:
        return {ValInfo::AtLeast, rat(zbound_, ctx_->d())};
    default:
        return {ValInfo::Exact, rat(w_, ctx_->d())};
    }
}

Rat FieldElement::valuation() const {
    if (state_ == ElemState::Zero)
        throw DivisionByZero("valuation of exact zero is infinite");
    if (state_ == ElemState::NearZero)
        throw PrecisionExhausted("valuation not determined: value vanishes to precision (>= " +
                                 rat_str(rat(zbound_, ctx_->d())) + ")");
    return rat(w_, ctx_->d());
}

long FieldElement::pi_valuation() const {
    if (state_ != ElemState::Regular)
        valuation(); // throws with the right diagnostics
    return w_;
}

long FieldElement::loss_pdigits() const {
    if (state_ != ElemState::Regular) return 0;
    return ctx_->d() * ctx_->N() - rel_;
}

std::vector<Int> FieldElement::trusted_digits() const {
    V out = digits_;
    long d = ctx_->d(), m = ctx_->m();
    for (long j = 0; j < d; ++j) {
        long k = (rel_ - j + d - 1) / d;
        if (rel_ - j <= 0) k = 0;
        k = std::max(0L, std::min(k, ctx_->N()));
        Int mod = pow_int(ctx_->p(), k);
        for (long i = 0; i < m; ++i)
            if (k == 0)
                out[j * m + i] = 0;
            else
                mpz_fdiv_r(out[j * m + i].get_mpz_t(), out[j * m + i].get_mpz_t(), mod.get_mpz_t());
    }
    return out;
}

ResidueField::Elem FieldElement::residue() const {
    const auto& res = ctx_->residue_field();
    if (state_ == ElemState::Zero) return res.zero();
    if (state_ == ElemState::NearZero) {
        if (zbound_ >= 1) return res.zero();
        throw PrecisionExhausted("residue undetermined at this precision");
    }
    if (w_ < 0) throw InvalidParams("residue of an element of negative valuation");
    if (w_ >= 1) return res.zero();
    return u_residue0(*ctx_, digits_);
}

FieldElement FieldElement::operator-() const {
    FieldElement x = *this;
    if (state_ == ElemState::Regular) x.digits_ = u_neg(*ctx_, digits_);
    return x;
}

static void require_join(FieldElement& a, FieldElement& b) {
    if (a.ctx()->same_as(*b.ctx())) return;
    Ctx j = join_context(a.ctx(), b.ctx());
    a = coerce(a, j);
    b = coerce(b, j);
}

FieldElement operator+(const FieldElement& a0, const FieldElement& b0) {
    FieldElement a = a0, b = b0;
    require_join(a, b);
    const Ctx& c = a.ctx_;
    if (a.state_ == ElemState::Zero) return b;
    if (b.state_ == ElemState::Zero) return a;
    if (a.state_ == ElemState::NearZero && b.state_ == ElemState::NearZero)
        return FieldElement::near_zero(c, std::min(a.zbound_, b.zbound_));
    if (a.state_ == ElemState::NearZero || b.state_ == ElemState::NearZero) {
        const FieldElement& z = (a.state_ == ElemState::NearZero) ? a : b;
        const FieldElement& r = (a.state_ == ElemState::NearZero) ? b : a;
        if (r.w_ >= z.zbound_) return FieldElement::near_zero(c, z.zbound_);
        FieldElement x = r;
        long abs = std::min(r.w_ + r.rel_, z.zbound_);
        x.rel_ = abs - r.w_;
        return x;
    }
    long wl = std::min(a.w_, b.w_);
    long abs = std::min(a.w_ + a.rel_, b.w_ + b.rel_);
    V da = (a.w_ > wl) ? u_shift_up(*c, a.digits_, a.w_ - wl) : a.digits_;
    V db = (b.w_ > wl) ? u_shift_up(*c, b.digits_, b.w_ - wl) : b.digits_;
    V s = u_add(*c, da, db);
    long t = u_pival(*c, s);
    if (t >= abs - wl) return FieldElement::near_zero(c, abs);
    FieldElement x;
    x.ctx_ = c;
    x.state_ = ElemState::Regular;
    x.w_ = wl + t;
    x.rel_ = abs - x.w_;
    x.digits_ = (t > 0) ? u_shift_dn(*c, s, t) : std::move(s);
    return x;
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }

FieldElement operator*(const FieldElement& a0, const FieldElement& b0) {
    FieldElement a = a0, b = b0;
    require_join(a, b);
    const Ctx& c = a.ctx_;
    if (a.state_ == ElemState::Zero || b.state_ == ElemState::Zero)
        return FieldElement::zero(c);
    if (a.state_ == ElemState::NearZero || b.state_ == ElemState::NearZero) {
        long za = (a.state_ == ElemState::NearZero) ? a.zbound_ : a.w_;
        long zb = (b.state_ == ElemState::NearZero) ? b.zbound_ : b.w_;
        return FieldElement::near_zero(c, za + zb);
    }
    FieldElement x;
    x.ctx_ = c;
    x.state_ = ElemState::Regular;
    x.w_ = a.w_ + b.w_;
    x.rel_ = std::min(a.rel_, b.rel_);
    x.digits_ = u_mul(*c, a.digits_, b.digits_);
    return x;
}

FieldElement FieldElement::inv() const {
    if (state_ == ElemState::Zero) throw DivisionByZero("division by exact zero");
    if (state_ == ElemState::NearZero)
        throw PrecisionExhausted("cannot invert a value indistinguishable from zero at working precision");
    FieldElement x;
    x.ctx_ = ctx_;
    x.state_ = ElemState::Regular;
    x.w_ = -w_;
    x.rel_ = rel_;
    x.digits_ = u_inv(*ctx_, digits_);
    return x;
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inv(); }

FieldElement FieldElement::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    FieldElement r = one(ctx_);
    FieldElement base = *this;
    while (e > 0) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

FieldElement FieldElement::shift(long k) const {
    FieldElement x = *this;
    if (state_ == ElemState::NearZero)
        x.zbound_ += k;
    else if (state_ == ElemState::Regular)
        x.w_ += k;
    return x;
}

FieldElement FieldElement::frobenius(long k) const {
    if (state_ != ElemState::Regular) return *this;
    FieldElement x = *this;
    x.digits_ = u_sigma(*ctx_, digits_, k);
    return x;
}

bool equal_at_precision(const FieldElement& a, const FieldElement& b) {
    return (a - b).is_zeroish();
}

bool repr_less(const FieldElement& a, const FieldElement& b) {
    auto rank = [](const FieldElement& x) {
        switch (x.state_) {
        case ElemState::Zero:
            return 0;
        case ElemState::NearZero:
            return 1;
        default:
            return 2;
        }
    };
    if (rank(a) != rank(b)) return rank(a) < rank(b);
    if (a.state_ == ElemState::Zero) return false;
    if (a.state_ == ElemState::NearZero) return a.zbound_ < b.zbound_;
    if (a.w_ != b.w_) return a.w_ < b.w_;
    V da = a.trusted_digits(), db = b.trusted_digits();
    for (size_t i = 0; i < da.size() && i < db.size(); ++i) {
        int c = cmp(da[i], db[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

std::string FieldElement::str() const {
    std::ostringstream os;
    if (state_ == ElemState::Zero) return "0";
    if (state_ == ElemState::NearZero) {
        os << "O(pi^" << zbound_ << ")";
        return os.str();
    }
    os << "pi^" << w_ << "*(";
    V td = trusted_digits();
    bool first = true;
    for (long j = 0; j < ctx_->d(); ++j)
        for (long i = 0; i < ctx_->m(); ++i) {
            const Int& x = td[j * ctx_->m() + i];
            if (x == 0) continue;
            if (!first) os << " + ";
            first = false;
            os << x.get_str();
            if (i) os << "*z" << (i > 1 ? "^" + std::to_string(i) : "");
            if (j) os << "*pi" << (j > 1 ? "^" + std::to_string(j) : "");
        }
    if (first) os << "0";
    os << ") + O(pi^" << (w_ + rel_) << ")";
    return os.str();
}

// ---- embeddings ----------------------------------------------------------

namespace {

struct EmbeddingData {
    std::vector<V> gen_pows; // images of zeta_src^i as zeta_dst polynomials
};

const EmbeddingData& get_embedding(const Ctx& src, const Ctx& dst) {
    static std::mutex mu;
    static std::map<std::tuple<long, long, long, long, long, long>, EmbeddingData> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto key = std::make_tuple(src->p(), src->m(), src->d(), dst->m(), dst->d(), dst->N());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    EmbeddingData e;
    long ms = src->m(), md = dst->m();
    ZRing R{dst->p(), md, dst->minpoly(), dst->pN(), dst->residue_field()};
    V one(md, Int(0));
    one[0] = 1;
    if (ms == 1) {
        e.gen_pows = {one};
    } else {
        const auto& rf = dst->residue_field();
        Int exp = (pow_int(dst->p(), md) - 1) / (pow_int(dst->p(), ms) - 1);
        if (!exp.fits_ulong_p()) throw InvalidParams("embedding exponent overflow");
        auto seed = rf.pow(rf.gen(), exp.get_ui());
        {
            // compatibility of the residue generators
            auto acc = rf.zero();
            const auto& mp = src->minpoly();
            for (long i = (long)mp.size() - 1; i >= 0; --i) {
                acc = rf.mul(acc, seed);
                acc = rf.add(acc, rf.from_int(mp[i]));
            }
            if (!rf.is_zero(acc))
                throw IncompatibleTower("residue generators are not compatible between these fields");
        }
        V img = zr_newton_root(R, src->minpoly(), seed);
        e.gen_pows.resize(ms);
        e.gen_pows[0] = one;
        for (long i = 1; i < ms; ++i) e.gen_pows[i] = zr_mul(R, e.gen_pows[i - 1], img);
    }
    return cache.emplace(key, std::move(e)).first->second;
}

} // namespace

FieldElement extend_field(const FieldElement& x, const Ctx& dst) {
    const Ctx& src = x.ctx();
    if (src->same_as(*dst)) {
        FieldElement y = x;
        return y;
    }
    if (src->p() != dst->p()) throw IncompatibleTower("different primes");
    if (dst->m() % src->m() != 0)
        throw IncompatibleTower("residue degree " + std::to_string(src->m()) +
                                " does not divide " + std::to_string(dst->m()));
    if (dst->d() % src->d() != 0)
        throw IncompatibleTower("ramification " + std::to_string(src->d()) +
                                " does not divide " + std::to_string(dst->d()));
    if (dst->N() != src->N())
        throw IncompatibleTower("embeddings require equal working precision");
    long ed = dst->d() / src->d();
    if (x.state() == ElemState::Zero) return FieldElement::zero(dst);
    if (x.state() == ElemState::NearZero)
        return FieldElement::near_zero(dst, x.near_zero_bound() * ed);

    const auto& emb = get_embedding(src, dst);
    long ms = src->m(), md = dst->m();
    V out((size_t)(dst->d() * md), Int(0));
    const V& u = x.raw_digits();
    for (long j = 0; j < src->d(); ++j) {
        long jj = j * ed;
        for (long i = 0; i < ms; ++i) {
            const Int& cxi = u[j * ms + i];
            if (cxi == 0) continue;
            const V& pw = emb.gen_pows[i];
            for (long t = 0; t < md; ++t)
                if (pw[t] != 0) mpz_addmul(out[jj * md + t].get_mpz_t(), cxi.get_mpz_t(), pw[t].get_mpz_t());
        }
    }
    reduce_vec(out, dst->pN());
    return FieldElement::make(dst, x.pi_valuation() * ed, std::move(out),
                              std::min(x.rel() * ed, dst->d() * dst->N()));
}

FieldElement coerce(const FieldElement& x, const Ctx& dst) {
    if (x.ctx()->same_as(*dst)) return x;
    return extend_field(x, dst);
}

} // namespace ibt
