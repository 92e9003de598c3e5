#include "ibt/building.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ibt {

Norm::Norm(Mat basis, std::vector<Rat> exponents, long den_cap)
    : basis_(std::move(basis)), c_(std::move(exponents)) {
    if (basis_.rows() != basis_.cols() || basis_.rows() < 1)
        throw InvalidParams("norm basis must be square and nonempty");
    if ((long)c_.size() != basis_.rows())
        throw InvalidParams("exponent count must match the dimension");
    for (auto& q : c_) q.canonicalize();
    long den = 1;
    for (const auto& q : c_) den = lcm_long(den, rat_den_long(q));
    if (den_cap >= 1 && den > den_cap)
        throw DenominatorCapExceeded("common exponent denominator " + std::to_string(den) +
                                     " exceeds the cap " + std::to_string(den_cap));
    FieldElement dt = det(basis_);
    if (dt.is_exact_zero()) throw InvalidParams("norm basis must be invertible");
    if (dt.is_zeroish())
        throw PrecisionExhausted("norm basis determinant vanishes at working precision; "
                                 "cannot certify invertibility");
}

long Norm::exponent_denominator() const { return common_denominator(c_); }

Norm canonicalize(const Norm& a) {
    Mat B = a.basis();
    std::vector<Rat> c = a.exponents();
    long n = a.n();
    for (long j = 0; j < n; ++j) {
        long best = -1;
        for (long i = 0; i < n; ++i) {
            const auto& x = B.at(i, j);
            if (x.state() != ElemState::Regular) continue;
            if (best < 0 || x.pi_valuation() < B.at(best, j).pi_valuation()) best = i;
        }
        if (best < 0)
            throw PrecisionExhausted("a basis column vanishes at working precision");
        FieldElement piv = B.at(best, j);
        FieldElement inv = piv.inv();
        for (long i = 0; i < n; ++i) B.at(i, j) = B.at(i, j) * inv;
        c[(size_t)j] -= piv.valuation();
    }
    std::vector<long> idx((size_t)n);
    std::iota(idx.begin(), idx.end(), 0L);
    std::sort(idx.begin(), idx.end(), [&](long x, long y) {
        if (c[(size_t)x] != c[(size_t)y]) return c[(size_t)x] < c[(size_t)y];
        for (long i = 0; i < n; ++i) {
            if (repr_less(B.at(i, x), B.at(i, y))) return true;
            if (repr_less(B.at(i, y), B.at(i, x))) return false;
        }
        return false;
    });
    Mat B2(B.ctx(), n, n);
    std::vector<Rat> c2((size_t)n);
    for (long j = 0; j < n; ++j) {
        c2[(size_t)j] = c[(size_t)idx[(size_t)j]];
        for (long i = 0; i < n; ++i) B2.at(i, j) = B.at(i, idx[(size_t)j]);
    }
    return Norm(std::move(B2), std::move(c2), 0);
}

std::optional<Rat> norm_eval(const Norm& a, const std::vector<FieldElement>& x) {
    if ((long)x.size() != a.n()) throw InvalidParams("vector length does not match the dimension");
    Ctx jo = a.ctx();
    for (const auto& e : x) jo = join_context(jo, e.ctx());
    Mat Binv = inverse(mat_coerce(a.basis(), jo));
    std::vector<FieldElement> xx((size_t)a.n());
    for (size_t i = 0; i < xx.size(); ++i) xx[i] = coerce(x[i], jo);
    auto coords = mat_apply(Binv, xx);
    bool have = false, have_bound = false;
    Rat best, bound_min;
    for (long i = 0; i < a.n(); ++i) {
        auto vi = coords[(size_t)i].val_info();
        if (vi.kind == ValInfo::Infinite) continue;
        Rat q = vi.v + a.exponents()[(size_t)i];
        if (vi.kind == ValInfo::Exact) {
            if (!have || q < best) best = q;
            have = true;
        } else {
            if (!have_bound || q < bound_min) bound_min = q;
            have_bound = true;
        }
    }
    if (!have) {
        if (have_bound)
            throw PrecisionExhausted("all coordinates vanish at working precision; "
                                     "norm value undetermined");
        return std::nullopt;
    }
    if (have_bound && bound_min < best)
        throw PrecisionExhausted("a coordinate vanishes at precision and its certified bound "
                                 "does not decide the norm value");
    return best;
}

namespace {

struct CommonData {
    Ctx E;
    long d;
    Mat F;                  // adapted basis of the first norm's unit ball
    std::vector<long> exps; // ascending; second ball = span pi^{exps[i]} F_i
};

Mat scaled_ball_basis(const Norm& a, const Ctx& E, long d) {
    Mat A = mat_coerce(a.basis(), E);
    long n = a.n();
    for (long j = 0; j < n; ++j) {
        Rat e = a.exponents()[(size_t)j] * d;
        FieldElement s = FieldElement::pi_power(E, -rat_num(e).get_si());
        for (long i = 0; i < n; ++i) A.at(i, j) = A.at(i, j) * s;
    }
    return A;
}

CommonData common_position(const Norm& a, const Norm& b, bool need_basis) {
    if (a.n() != b.n()) throw InvalidParams("norms live in different dimensions");
    Ctx j0 = join_context(a.ctx(), b.ctx());
    long d = lcm_long(j0->d(), lcm_long(a.exponent_denominator(), b.exponent_denominator()));
    Ctx E = make_field(j0->p(), j0->m(), j0->N(), d);
    Mat Adot = scaled_ball_basis(a, E, d);
    Mat Bdot = scaled_ball_basis(b, E, d);
    Mat T = inverse(Adot) * Bdot;
    SNF s = smith_normal_form(T);
    if ((long)s.exps.size() != a.n())
        throw PrecisionExhausted("transition between the norms cannot be certified invertible");
    CommonData cd;
    cd.E = E;
    cd.d = d;
    cd.exps = s.exps;
    if (need_basis) cd.F = Adot * inverse(s.U);
    return cd;
}

} // namespace

std::vector<Rat> rel_position(const Norm& a, const Norm& b) {
    auto cd = common_position(a, b, false);
    std::vector<Rat> r;
    r.reserve(cd.exps.size());
    for (long e : cd.exps) r.push_back(rat(-e, cd.d));
    return r;
}

Rat distance_squared(const Norm& a, const Norm& b) {
    Rat s(0);
    for (const auto& r : rel_position(a, b)) s += r * r;
    return s;
}

Norm group_act(const Mat& g, const Norm& a) {
    if (g.rows() != a.n() || g.cols() != a.n())
        throw InvalidParams("acting matrix has the wrong size");
    Ctx jo = join_context(g.ctx(), a.ctx());
    return Norm(mat_coerce(g, jo) * mat_coerce(a.basis(), jo), a.exponents(), 0);
}

Norm fb_act(const Isocrystal& x, const Norm& a) {
    if (x.n() != a.n()) throw InvalidParams("the twisted action has the wrong size");
    Ctx jo = join_context(x.ctx(), a.ctx());
    Mat nb = mat_coerce(x.matrix(), jo) * mat_coerce(a.basis(), jo).frobenius();
    return Norm(std::move(nb), a.exponents(), 0);
}

Norm scale_by_power(const Norm& a, const Rat& mu) {
    std::vector<Rat> c = a.exponents();
    for (auto& q : c) q -= mu;
    return Norm(a.basis(), std::move(c), 0);
}

Norm geodesic_point(const Norm& a, const Norm& b, const Rat& t) {
    if (t < 0 || t > 1) throw InvalidParams("geodesic parameter must lie in [0, 1]");
    auto cd = common_position(a, b, true);
    std::vector<Rat> ce((size_t)a.n());
    for (size_t i = 0; i < ce.size(); ++i) ce[i] = t * rat(-cd.exps[i], cd.d);
    return Norm(cd.F, std::move(ce), 0);
}

Norm restrict_norm(const Norm& a, const Mat& W) {
    if (W.rows() != a.n() || W.cols() < 1 || W.cols() > a.n())
        throw InvalidParams("summand basis has the wrong shape");
    Ctx j0 = join_context(a.ctx(), W.ctx());
    long d = lcm_long(j0->d(), a.exponent_denominator());
    Ctx E = make_field(j0->p(), j0->m(), j0->N(), d);
    Mat Adot = scaled_ball_basis(a, E, d);
    Mat Y = inverse(Adot) * mat_coerce(W, E);
    SNF s = smith_normal_form(Y);
    if ((long)s.exps.size() != W.cols())
        throw InvalidParams("summand basis does not have certified full column rank");
    std::vector<Rat> ce((size_t)W.cols());
    for (size_t i = 0; i < ce.size(); ++i) ce[i] = rat(s.exps[i], d);
    Mat V(E, W.cols(), W.cols());
    for (long i = 0; i < W.cols(); ++i)
        for (long j = 0; j < W.cols(); ++j) V.at(i, j) = s.V.at(i, j);
    return Norm(std::move(V), std::move(ce), 0);
}

LeviAdaptResult levi_adapt(const Norm& a, const std::vector<Mat>& summands) {
    if (summands.empty()) throw InvalidParams("at least one summand is required");
    long total = 0;
    for (const auto& w : summands) {
        if (w.rows() != a.n()) throw InvalidParams("summand basis has the wrong number of rows");
        total += w.cols();
    }
    if (total != a.n()) throw InvalidParams("summand dimensions must add up to the dimension");

    std::vector<Norm> restrictions;
    restrictions.reserve(summands.size());
    Ctx jo = a.ctx();
    for (const auto& w : summands) {
        restrictions.push_back(restrict_norm(a, w));
        jo = join_context(jo, restrictions.back().ctx());
        jo = join_context(jo, w.ctx());
    }
    Mat assembled(jo, a.n(), a.n());
    std::vector<Rat> ce;
    ce.reserve((size_t)a.n());
    long off = 0;
    for (size_t k = 0; k < summands.size(); ++k) {
        Mat wk = mat_coerce(summands[k], jo);
        Mat vk = mat_coerce(restrictions[k].basis(), jo);
        Mat cols = wk * vk;
        for (long j = 0; j < cols.cols(); ++j) {
            for (long i = 0; i < a.n(); ++i) assembled.at(i, off + j) = cols.at(i, j);
            ce.push_back(restrictions[k].exponents()[(size_t)j]);
        }
        off += cols.cols();
    }
    Norm alpha_M(std::move(assembled), std::move(ce), 0);
    bool adapted = norms_equal(a, alpha_M);
    return {adapted, std::move(alpha_M)};
}

Mat ball_lattice(const Norm& a, const Rat& e) {
    if (a.ctx()->d() != 1)
        throw InvalidParams("ball lattices require an unramified basis; "
                            "re-express the norm on one first");
    Mat L = a.basis();
    for (long j = 0; j < a.n(); ++j) {
        Int k = rat_ceil(e - a.exponents()[(size_t)j]);
        if (!k.fits_slong_p()) throw ScaleTooLarge("ball radius exponent overflows");
        FieldElement s = FieldElement::pi_power(a.ctx(), k.get_si());
        for (long i = 0; i < a.n(); ++i) L.at(i, j) = L.at(i, j) * s;
    }
    return L;
}

Rat det_component(const Norm& a) {
    Rat s(0);
    for (const auto& q : a.exponents()) s += q;
    s -= det(a.basis()).valuation();
    return s / a.n();
}

bool norms_equal(const Norm& a, const Norm& b) {
    for (const auto& r : rel_position(a, b))
        if (r != 0) return false;
    return true;
}

namespace {

// canonical representative mod p^a and the corresponding quotient, for an
// integral element of an unramified field
void split_mod_ppow(const FieldElement& x, long a, FieldElement& rem, FieldElement& quot) {
    const Ctx& c = x.ctx();
    if (a <= 0) {
        rem = FieldElement::zero(c);
        quot = x.shift(-a);
        return;
    }
    if (x.state() == ElemState::Zero) {
        rem = FieldElement::zero(c);
        quot = FieldElement::zero(c);
        return;
    }
    if (x.state() == ElemState::NearZero) {
        if (x.near_zero_bound() < a)
            throw PrecisionExhausted("cannot reduce an entry that vanishes at precision "
                                     "below the pivot modulus");
        rem = FieldElement::zero(c);
        quot = FieldElement::near_zero(c, x.near_zero_bound() - a);
        return;
    }
    long w = x.pi_valuation();
    if (w < 0) throw InvalidParams("lattice entries must be integral");
    long abs = w + x.rel();
    if (abs < a || a > c->N())
        throw PrecisionExhausted("not enough certified digits to reduce modulo the pivot");
    Int pa, pw;
    mpz_ui_pow_ui(pa.get_mpz_t(), (unsigned long)c->p(), (unsigned long)a);
    mpz_ui_pow_ui(pw.get_mpz_t(), (unsigned long)c->p(), (unsigned long)w);
    std::vector<Int> vd = x.raw_digits();
    std::vector<Int> rd(vd.size()), qd(vd.size());
    bool rzero = true;
    for (size_t i = 0; i < vd.size(); ++i) {
        Int v = vd[i] * pw;
        mpz_fdiv_qr(qd[i].get_mpz_t(), rd[i].get_mpz_t(), v.get_mpz_t(), pa.get_mpz_t());
        if (rd[i] != 0) rzero = false;
    }
    rem = rzero ? FieldElement::zero(c)
                : FieldElement::make(c, 0, std::move(rd), c->d() * c->N());
    if (abs == a)
        quot = FieldElement::near_zero(c, 0);
    else
        quot = FieldElement::make(c, 0, std::move(qd), abs - a);
}

} // namespace

Mat hnf_lattice(const Mat& basis) {
    const Ctx& c = basis.ctx();
    if (c->d() != 1) throw InvalidParams("lattice bases must be unramified");
    if (basis.rows() != basis.cols())
        throw InvalidParams("lattice bases must be square");
    long n = basis.rows();
    Mat H = basis;
    std::vector<long> col_of_row((size_t)n, -1);
    std::vector<bool> used((size_t)n, false);
    for (long r = n - 1; r >= 0; --r) {
        long best = -1;
        for (long j = 0; j < n; ++j) {
            if (used[(size_t)j]) continue;
            const auto& x = H.at(r, j);
            if (x.state() != ElemState::Regular) continue;
            if (best < 0 || x.pi_valuation() < H.at(r, best).pi_valuation()) best = j;
        }
        if (best < 0) {
            bool all_exact = true;
            for (long j = 0; j < n && all_exact; ++j)
                if (!used[(size_t)j] && !H.at(r, j).is_exact_zero()) all_exact = false;
            if (all_exact) throw DivisionByZero("lattice basis is singular");
            throw PrecisionExhausted("cannot certify a pivot for the lattice normal form");
        }
        FieldElement piv = H.at(r, best);
        if (piv.pi_valuation() < 0) throw InvalidParams("lattice entries must be integral");
        long a = piv.pi_valuation();
        FieldElement unit_inv = FieldElement::pi_power(c, a) * piv.inv();
        for (long i = 0; i < n; ++i) H.at(i, best) = H.at(i, best) * unit_inv;
        for (long j = 0; j < n; ++j) {
            if (used[(size_t)j] || j == best) continue;
            const FieldElement& e = H.at(r, j);
            if (e.is_exact_zero()) continue;
            FieldElement f = e.shift(-a);
            for (long i = 0; i < n; ++i) H.at(i, j) = H.at(i, j) - f * H.at(i, best);
        }
        used[(size_t)best] = true;
        col_of_row[(size_t)r] = best;
    }
    Mat H2(c, n, n);
    for (long r = 0; r < n; ++r)
        for (long i = 0; i < n; ++i) H2.at(i, r) = H.at(i, col_of_row[(size_t)r]);
    // entries above the diagonal reduced mod the pivot below them
    for (long j = n - 1; j >= 0; --j) {
        for (long i = j - 1; i >= 0; --i) {
            long ai = H2.at(i, i).pi_valuation();
            FieldElement rem, quot;
            split_mod_ppow(H2.at(i, j), ai, rem, quot);
            if (!quot.is_exact_zero()) {
                FieldElement q = quot;
                for (long t = 0; t < n; ++t) H2.at(t, j) = H2.at(t, j) - q * H2.at(t, i);
            }
            H2.at(i, j) = rem;
        }
        // sharpen the sub-diagonal zeros: they are exact by construction
        for (long i = j + 1; i < n; ++i)
            if (H2.at(i, j).is_zeroish()) H2.at(i, j) = FieldElement::zero(c);
    }
    return H2;
}

std::string lattice_key(const Mat& hnf) {
    std::ostringstream os;
    os << hnf.rows() << "x" << hnf.cols() << ";";
    for (long i = 0; i < hnf.rows(); ++i)
        for (long j = 0; j < hnf.cols(); ++j) {
            const auto& x = hnf.at(i, j);
            if (x.is_zeroish()) {
                os << "0,";
                continue;
            }
            os << "v" << x.pi_valuation() << ":";
            for (const auto& dgt : x.trusted_digits()) os << dgt.get_str(36) << ".";
            os << ",";
        }
    return os.str();
}

bool lattice_equal(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    Ctx jo = join_context(a.ctx(), b.ctx());
    Mat A = mat_coerce(a, jo), B = mat_coerce(b, jo);
    long shift = 0;
    for (const Mat* m : {&A, &B})
        for (long i = 0; i < m->rows(); ++i)
            for (long j = 0; j < m->cols(); ++j) {
                const auto& x = m->at(i, j);
                long v;
                if (x.state() == ElemState::Regular) v = x.pi_valuation();
                else if (x.state() == ElemState::NearZero) v = x.near_zero_bound();
                else continue;
                if (v < -shift) shift = -v;
            }
    if (shift > 0) {
        FieldElement s = FieldElement::pi_power(jo, shift);
        A = mat_scale(A, s);
        B = mat_scale(B, s);
    }
    return mat_equal_at_precision(hnf_lattice(A), hnf_lattice(B));
}

} // namespace ibt
