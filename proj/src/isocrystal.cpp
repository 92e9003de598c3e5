#include "ibt/isocrystal.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ibt {

Isocrystal::Isocrystal(Mat b) : b_(std::move(b)) {
    if (b_.rows() != b_.cols() || b_.rows() < 1)
        throw InvalidParams("isocrystal matrix must be square and nonempty");
    if (ctx()->d() != 1)
        throw InvalidParams("isocrystal coefficients must lie in an unramified field");
    FieldElement dt = det(b_);
    if (dt.is_exact_zero()) throw InvalidParams("isocrystal matrix must be invertible");
    if (dt.is_zeroish())
        throw PrecisionExhausted("matrix determinant vanishes at working precision; "
                                 "cannot certify invertibility");
    det_val_ = dt.valuation();
}

const std::vector<Rat>& Isocrystal::cached_newton_point() const {
    if (!np_) np_ = newton_point(*this);
    return *np_;
}

Mat twisted_power(const Isocrystal& x, long order) {
    if (order < 1) throw InvalidParams("twisted power order must be positive");
    Mat r = x.matrix();
    for (long k = 1; k < order; ++k) r = r * x.matrix().frobenius(k);
    return r;
}

std::vector<Rat> newton_point(const Isocrystal& x) {
    Mat pis = twisted_power(x, x.s());
    auto segs = newton_polygon(charpoly(pis));
    std::vector<Rat> out;
    for (const auto& seg : segs)
        for (long i = 0; i < seg.mult; ++i) out.push_back(seg.slope / x.s());
    if ((long)out.size() != x.n())
        throw Error("internal", "slope multiplicities do not sum to the dimension");
    return out;
}

Rat min_nu(const Isocrystal& x) {
    Rat s(0);
    for (const auto& l : x.cached_newton_point()) s += l * l;
    return s;
}

bool slope_determinant_identity(const Isocrystal& x) {
    Rat s(0);
    for (const auto& l : x.cached_newton_point()) s += l;
    return s == x.det_valuation();
}

namespace {

Mat mat_poly_eval(const Poly& f, const Mat& a) {
    long n = a.rows();
    Mat r(a.ctx(), n, n);
    for (long i = (long)f.size() - 1; i >= 0; --i) {
        r = r * a;
        for (long t = 0; t < n; ++t) r.at(t, t) = r.at(t, t) + f[(size_t)i];
    }
    return r;
}

Mat columns_to_mat(const Ctx& c, long n, const std::vector<std::vector<FieldElement>>& cols) {
    Mat m(c, n, (long)cols.size());
    for (size_t j = 0; j < cols.size(); ++j)
        for (long i = 0; i < n; ++i) m.at(i, (long)j) = cols[j][(size_t)i];
    return m;
}

} // namespace

std::vector<IsoclineBlock> isocline_decomposition(const Isocrystal& x) {
    const Ctx& c = x.ctx();
    long n = x.n();
    auto np = x.cached_newton_point();

    std::vector<std::pair<Rat, long>> groups;
    for (const auto& l : np) {
        if (!groups.empty() && groups.back().first == l)
            groups.back().second++;
        else
            groups.push_back({l, 1});
    }
    if (groups.size() == 1) {
        IsoclineBlock blk{groups[0].first, n, Mat::identity(c, n), x.matrix()};
        return {blk};
    }

    long den = 1;
    for (const auto& g : groups) den = lcm_long(den, rat_den_long(g.first));
    long order = x.s() * den;
    Mat piM = twisted_power(x, order);
    auto factors = slope_factorization(charpoly(piM));
    if (factors.size() != groups.size())
        throw DecompositionUnverified("slope factor count does not match the distinct slopes");

    std::vector<std::vector<std::vector<FieldElement>>> kernels;
    for (size_t j = 0; j < groups.size(); ++j) {
        auto segs = newton_polygon(factors[j]);
        if (segs.size() != 1 || segs[0].slope != groups[j].first * order ||
            segs[0].mult != groups[j].second)
            throw DecompositionUnverified("slope factor does not have the expected root valuations");
        auto ker = kernel_basis(mat_poly_eval(factors[j], piM));
        if ((long)ker.size() != groups[j].second)
            throw DecompositionUnverified("summand dimension does not match the slope multiplicity");
        kernels.push_back(std::move(ker));
    }

    std::vector<std::vector<FieldElement>> all_cols;
    for (const auto& ker : kernels)
        for (const auto& v : ker) all_cols.push_back(v);
    Mat P = columns_to_mat(c, n, all_cols);
    Mat Pinv;
    try {
        Pinv = inverse(P);
    } catch (const DivisionByZero&) {
        throw DecompositionUnverified("summands do not span the whole space");
    }
    Mat T = Pinv * x.matrix() * P.frobenius();

    std::vector<IsoclineBlock> out;
    long off = 0;
    for (size_t j = 0; j < groups.size(); ++j) {
        long h = groups[j].second;
        Mat blk(c, h, h);
        for (long a = 0; a < h; ++a)
            for (long b = 0; b < h; ++b) blk.at(a, b) = T.at(off + a, off + b);
        Mat basis(c, n, h);
        for (long i = 0; i < n; ++i)
            for (long b = 0; b < h; ++b) basis.at(i, b) = P.at(i, off + b);
        out.push_back({groups[j].first, h, basis, blk});
        off += h;
    }
    // off-block entries of T must vanish at precision (stability of the summands)
    off = 0;
    for (size_t j = 0; j < groups.size(); ++j) {
        long h = groups[j].second;
        for (long i = 0; i < n; ++i)
            for (long b = 0; b < h; ++b) {
                if (i >= off && i < off + h) continue;
                if (!T.at(i, off + b).is_zeroish())
                    throw DecompositionUnverified("summands are not stable under the twisted action");
            }
        off += h;
    }
    // each block must be isoclinic of its slope
    for (const auto& blk : out) {
        Isocrystal sub(blk.block);
        for (const auto& l : newton_point(sub))
            if (l != blk.slope)
                throw DecompositionUnverified("summand is not isoclinic of the expected slope");
    }
    return out;
}

Isocrystal sigma_conjugate(const Isocrystal& x, const Mat& g) {
    if (g.rows() != x.n() || g.cols() != x.n())
        throw InvalidParams("conjugating matrix has the wrong size");
    if (g.ctx()->d() != 1)
        throw InvalidParams("conjugating matrix must be unramified");
    Ctx jo = join_context(x.ctx(), g.ctx());
    Mat gj = mat_coerce(g, jo);
    Mat bj = mat_coerce(x.matrix(), jo);
    return Isocrystal(gj * bj * inverse(gj.frobenius()));
}

Isocrystal standard_form(long p, std::vector<std::pair<Rat, long>> slopes, long N) {
    if (slopes.empty()) throw InvalidParams("at least one slope is required");
    std::sort(slopes.begin(), slopes.end());
    for (size_t i = 1; i < slopes.size(); ++i)
        if (slopes[i].first == slopes[i - 1].first)
            throw InvalidParams("duplicate slope in the list; merge the multiplicities");
    Ctx c = make_field(p, 1, N, 1);
    long n = 0;
    for (const auto& sl : slopes) {
        if (sl.second < 1) throw InvalidMultiplicity("multiplicities must be positive");
        long h = rat_den_long(sl.first);
        if (sl.second % h != 0) {
            std::ostringstream os;
            os << "multiplicity " << sl.second << " of slope " << rat_str(sl.first)
               << " must be a multiple of its denominator " << h;
            throw InvalidMultiplicity(os.str());
        }
        n += sl.second;
    }
    Mat b(c, n, n);
    long off = 0;
    for (const auto& sl : slopes) {
        long h = rat_den_long(sl.first);
        Int a = rat_num(sl.first);
        long copies = sl.second / h;
        for (long k = 0; k < copies; ++k) {
            for (long i = 0; i + 1 < h; ++i) b.at(off + i + 1, off + i) = FieldElement::one(c);
            if (!a.fits_slong_p()) throw InvalidParams("slope numerator too large");
            b.at(off, off + h - 1) = FieldElement::pi_power(c, a.get_si());
            off += h;
        }
    }
    return Isocrystal(b);
}

bool is_decent(const Isocrystal& x, long r) {
    if (r < 1) throw InvalidParams("frobenius power must be positive");
    auto blocks = isocline_decomposition(x);
    for (const auto& blk : blocks)
        if (!rat_is_integer(blk.slope * r)) return false;

    Mat pir = twisted_power(x, r);
    // restrict to each summand: P^{-1} pir sigma^r(P) must be the scalar p^{r lambda}
    long n = x.n();
    const Ctx& c = x.ctx();
    Mat P(c, n, n);
    long off = 0;
    for (const auto& blk : blocks) {
        for (long i = 0; i < n; ++i)
            for (long b = 0; b < blk.mult; ++b) P.at(i, off + b) = blk.basis.at(i, b);
        off += blk.mult;
    }
    Mat T = inverse(P) * pir * P.frobenius(r);
    off = 0;
    for (const auto& blk : blocks) {
        Rat e = blk.slope * r;
        FieldElement scalar = FieldElement::pi_power(c, rat_num(e).get_si());
        for (long a = 0; a < blk.mult; ++a)
            for (long b = 0; b < blk.mult; ++b) {
                const FieldElement& t = T.at(off + a, off + b);
                if (a == b) {
                    if (!equal_at_precision(t, scalar)) return false;
                } else if (!t.is_zeroish()) {
                    return false;
                }
            }
        off += blk.mult;
    }
    return true;
}

} // namespace ibt
