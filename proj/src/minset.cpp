#include "ibt/minset.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace ibt {

namespace {

long rnd_range(std::mt19937_64& rng, long lo, long hi) {
    return lo + (long)(rng() % (unsigned long long)(hi - lo + 1));
}

std::mt19937_64 sample_rng(unsigned long long seed, unsigned long long index) {
    return std::mt19937_64(splitmix64(seed + splitmix64(index)));
}

} // namespace

Rat displacement_squared(const Isocrystal& x, const Norm& a) {
    return distance_squared(a, fb_act(x, a));
}

Norm fb_act_power(const Isocrystal& x, const Norm& a, long r) {
    if (r < 0) throw InvalidParams("negative twisted powers are not supported");
    if (r == 0) return a;
    if (x.n() != a.n()) throw InvalidParams("the twisted action has the wrong size");
    Ctx jo = join_context(x.ctx(), a.ctx());
    Mat pr = mat_coerce(twisted_power(x, r), jo);
    return Norm(pr * mat_coerce(a.basis(), jo).frobenius(r), a.exponents(), 0);
}

Rat displacement_squared_power(const Isocrystal& x, const Norm& a, long r) {
    return distance_squared(a, fb_act_power(x, a, r));
}

bool is_in_min(const Isocrystal&, const std::vector<IsoclineBlock>& dec, const Norm& a) {
    std::vector<Mat> bases;
    bases.reserve(dec.size());
    for (const auto& blk : dec) bases.push_back(blk.basis);
    if (!levi_adapt(a, bases).adapted) return false;
    for (const auto& blk : dec) {
        Norm r = restrict_norm(a, blk.basis);
        Isocrystal sub(blk.block);
        if (!norms_equal(fb_act(sub, r), scale_by_power(r, blk.slope))) return false;
    }
    return true;
}

bool is_in_min(const Isocrystal& x, const Norm& a) {
    return is_in_min(x, isocline_decomposition(x), a);
}

bool is_in_min_power(const Isocrystal&, const std::vector<IsoclineBlock>& dec,
                     const Norm& a, long r) {
    if (r < 1) throw InvalidParams("the power must be positive");
    std::vector<Mat> bases;
    bases.reserve(dec.size());
    for (const auto& blk : dec) bases.push_back(blk.basis);
    if (!levi_adapt(a, bases).adapted) return false;
    for (const auto& blk : dec) {
        Norm rr = restrict_norm(a, blk.basis);
        Isocrystal sub(blk.block);
        if (!norms_equal(fb_act_power(sub, rr, r), scale_by_power(rr, blk.slope * r)))
            return false;
    }
    return true;
}

std::vector<StandardBlock> standard_blocks(const Isocrystal& x) {
    const Mat& b = x.matrix();
    const Ctx& c = x.ctx();
    long n = x.n();
    std::vector<StandardBlock> blocks;
    long i0 = 0;
    while (i0 < n) {
        long h = 1;
        while (i0 + h < n && !b.at(i0 + h, i0 + h - 1).is_exact_zero()) ++h;
        const FieldElement& corner = b.at(i0, i0 + h - 1);
        auto vi = corner.val_info();
        if (vi.kind != ValInfo::Exact || !rat_is_integer(vi.v))
            throw InvalidParams("matrix is not in companion block form");
        long aexp = rat_num(vi.v).get_si();
        if (!equal_at_precision(corner, FieldElement::p_power(c, aexp)))
            throw InvalidParams("matrix is not in companion block form");
        for (long j = i0; j < i0 + h; ++j)
            for (long i = 0; i < n; ++i) {
                const FieldElement& e = b.at(i, j);
                if (i == i0 && j == i0 + h - 1) continue;
                if (i == j + 1 && j < i0 + h - 1) {
                    if (!equal_at_precision(e, FieldElement::one(c)))
                        throw InvalidParams("matrix is not in companion block form");
                } else if (!e.is_exact_zero()) {
                    throw InvalidParams("matrix is not in companion block form");
                }
            }
        blocks.push_back({i0, h, aexp});
        i0 += h;
    }
    return blocks;
}

Norm min_point(const Isocrystal& x, const std::vector<Rat>& shifts) {
    auto blocks = standard_blocks(x);
    if (shifts.size() != blocks.size())
        throw InvalidParams("expected one base exponent per companion block");
    std::vector<Rat> c((size_t)x.n());
    for (size_t j = 0; j < blocks.size(); ++j)
        for (long i = 0; i < blocks[j].height; ++i)
            c[(size_t)(blocks[j].offset + i)] =
                shifts[j] + Rat(i) * rat(blocks[j].corner, blocks[j].height);
    return Norm(Mat::identity(x.ctx(), x.n()), std::move(c), 0);
}

ApartmentProjection apartment_min_projection(const Isocrystal& x, const std::vector<Rat>& c) {
    auto blocks = standard_blocks(x);
    if ((long)c.size() != x.n())
        throw InvalidParams("exponent count does not match the dimension");
    std::vector<Rat> ch((size_t)x.n());
    Rat dist2(0);
    for (const auto& blk : blocks) {
        Rat lam = rat(blk.corner, blk.height);
        Rat t(0);
        for (long i = 0; i < blk.height; ++i) t += c[(size_t)(blk.offset + i)] - Rat(i) * lam;
        t /= blk.height;
        for (long i = 0; i < blk.height; ++i) {
            size_t k = (size_t)(blk.offset + i);
            ch[k] = t + Rat(i) * lam;
            Rat df = c[k] - ch[k];
            dist2 += df * df;
        }
    }
    return {Norm(Mat::identity(x.ctx(), x.n()), std::move(ch), 0), dist2};
}

std::vector<Rat> sample_exponents(long n, std::mt19937_64& rng) {
    static const long dens[5] = {1, 2, 3, 4, 6};
    std::vector<Rat> c((size_t)n);
    for (long i = 0; i < n; ++i) {
        long den = dens[rnd_range(rng, 0, 4)];
        c[(size_t)i] = rat(rnd_range(rng, -6 * den, 6 * den), den);
    }
    return c;
}

Mat sample_unimodular(const Ctx& c, long n, std::mt19937_64& rng) {
    Mat lo = Mat::identity(c, n), up = Mat::identity(c, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < i; ++j) {
            lo.at(i, j) = FieldElement::from_int(c, Int(rnd_range(rng, -9, 9)));
            up.at(j, i) = FieldElement::from_int(c, Int(rnd_range(rng, -9, 9)));
        }
    std::vector<long> perm((size_t)n);
    std::iota(perm.begin(), perm.end(), 0L);
    for (long i = n - 1; i > 0; --i)
        std::swap(perm[(size_t)i], perm[(size_t)rnd_range(rng, 0, i)]);
    Mat pm(c, n, n);
    for (long i = 0; i < n; ++i) pm.at(perm[(size_t)i], i) = FieldElement::one(c);
    Mat di = Mat::identity(c, n);
    long p = c->p();
    for (long i = 0; i < n; ++i) {
        long u = rnd_range(rng, 1, p - 1) + p * rnd_range(rng, 0, 3);
        di.at(i, i) = FieldElement::from_int(c, Int(u));
    }
    return pm * (lo * (di * up));
}

ScanReport kappa_scan(const Isocrystal& x, long samples, unsigned long long seed) {
    if (samples < 1) throw EmptySample("at least one sample is required");
    standard_blocks(x); // the projection needs a companion-form instance
    ScanReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.min_nu2 = min_nu(x);
    long n = x.n();
    bool have_disp = false, have_kappa = false;
    for (long i = 0; i < samples; ++i) {
        auto rng = sample_rng(seed, (unsigned long long)i);
        ScanSample s;
        s.index = i;
        s.jittered = (i % 3 == 2);
        auto c = sample_exponents(n, rng);
        Norm alpha(Mat::identity(x.ctx(), n), c, 0);
        if (s.jittered) {
            alpha = group_act(sample_unimodular(x.ctx(), n, rng), alpha);
            s.displacement2 = displacement_squared(x, alpha);
        } else {
            s.displacement2 = displacement_squared(x, alpha);
            auto proj = apartment_min_projection(x, c);
            if (proj.dist2 != 0) {
                s.has_ratio = true;
                s.ratio = s.displacement2 / proj.dist2;
            }
        }
        if (s.displacement2 < rep.min_nu2) ++rep.violations;
        if (!have_disp || s.displacement2 < rep.min_displacement2) {
            rep.min_displacement2 = s.displacement2;
            have_disp = true;
        }
        if (s.has_ratio && (!have_kappa || s.ratio < rep.kappa2)) {
            rep.kappa2 = s.ratio;
            have_kappa = true;
        }
        rep.records.push_back(std::move(s));
    }
    rep.has_kappa2 = have_kappa;
    rep.pass = rep.violations == 0 && (!have_kappa || rep.kappa2 > 0);
    return rep;
}

namespace {

FieldElement random_unit(const Ctx& e, std::mt19937_64& rng) {
    for (;;) {
        std::vector<Int> digits((size_t)(e->d() * e->m()), Int(0));
        for (long i = 0; i < e->m(); ++i)
            digits[(size_t)i] =
                Int(rnd_range(rng, 0, e->p() - 1) + e->p() * rnd_range(rng, 0, 2));
        bool all_zero = true;
        for (const auto& dg : digits)
            if (dg != 0) all_zero = false;
        if (all_zero) continue;
        FieldElement u = FieldElement::make(e, 0, std::move(digits), e->d() * e->N());
        if (u.state() == ElemState::Regular && u.pi_valuation() == 0) return u;
    }
}

Mat embed_block(const Ctx& e, long n, long off, const Mat& g) {
    Mat out = Mat::identity(e, n);
    for (long i = 0; i < g.rows(); ++i)
        for (long j = 0; j < g.cols(); ++j) out.at(off + i, off + j) = coerce(g.at(i, j), e);
    return out;
}

bool in_twisted_centralizer(const Isocrystal& x, const Mat& g) {
    Ctx jo = join_context(g.ctx(), x.ctx());
    Mat lhs = mat_coerce(g, jo) * mat_coerce(x.matrix(), jo);
    Mat rhs = mat_coerce(x.matrix(), jo) * mat_coerce(g, jo).frobenius();
    return mat_equal_at_precision(lhs, rhs);
}

} // namespace

Mat sample_j_element(const Isocrystal& x, std::mt19937_64& rng) {
    auto blocks = standard_blocks(x);
    long n = x.n(), p = x.ctx()->p(), prec = x.ctx()->N();
    Mat g;
    for (int attempt = 0; attempt < 16 && g.rows() == 0; ++attempt) {
        long fam = rnd_range(rng, 0, 4);
        try {
            switch (fam) {
            case 0: { // central scalar u p^k
                const Ctx& c = x.ctx();
                FieldElement s =
                    FieldElement::from_int(c, Int(rnd_range(rng, 1, p - 1))) *
                    FieldElement::p_power(c, rnd_range(rng, -2, 2));
                g = mat_scale(Mat::identity(c, n), s);
                break;
            }
            case 1: { // power of the matrix itself
                long k = rnd_range(rng, -2, 2);
                g = Mat::identity(x.ctx(), n);
                if (k != 0) {
                    Mat step = k > 0 ? x.matrix() : inverse(x.matrix());
                    for (long t = 0; t < (k > 0 ? k : -k); ++t) g = g * step;
                }
                break;
            }
            case 2: { // norm-field unit acting as (u, su, ..., s^{h-1}u) on one block
                const auto& blk = blocks[(size_t)rnd_range(rng, 0, (long)blocks.size() - 1)];
                Ctx f = make_field(p, blk.height, prec);
                Ctx e = join_context(f, x.ctx());
                FieldElement u = coerce(random_unit(f, rng), e);
                Mat gb(e, blk.height, blk.height);
                for (long i = 0; i < blk.height; ++i) gb.at(i, i) = u.frobenius(i);
                g = embed_block(e, n, blk.offset, gb);
                break;
            }
            case 3: { // twisted 2x2 family on a height-2 block
                std::vector<const StandardBlock*> twos;
                for (const auto& b2 : blocks)
                    if (b2.height == 2) twos.push_back(&b2);
                if (twos.empty()) break;
                const auto& blk = *twos[(size_t)rnd_range(rng, 0, (long)twos.size() - 1)];
                Ctx f = make_field(p, 2, prec);
                Ctx e = join_context(f, x.ctx());
                FieldElement u = coerce(random_unit(f, rng), e);
                FieldElement v = coerce(random_unit(f, rng), e);
                if (rnd_range(rng, 0, 3) == 0) v = FieldElement::zero(e);
                Mat gb(e, 2, 2);
                gb.at(0, 0) = u;
                gb.at(0, 1) = FieldElement::p_power(e, blk.corner) * v.frobenius();
                gb.at(1, 0) = v;
                gb.at(1, 1) = u.frobenius();
                g = embed_block(e, n, blk.offset, gb);
                break;
            }
            case 4: { // swap two identical blocks
                std::map<std::pair<long, long>, std::vector<size_t>> groups;
                for (size_t j = 0; j < blocks.size(); ++j)
                    groups[{blocks[j].height, blocks[j].corner}].push_back(j);
                std::vector<std::pair<size_t, size_t>> swaps;
                for (const auto& kv : groups)
                    for (size_t t = 0; t + 1 < kv.second.size(); ++t)
                        swaps.push_back({kv.second[t], kv.second[t + 1]});
                if (swaps.empty()) break;
                auto pick = swaps[(size_t)rnd_range(rng, 0, (long)swaps.size() - 1)];
                const auto& ba = blocks[pick.first];
                const auto& bb = blocks[pick.second];
                std::vector<long> dest((size_t)n);
                std::iota(dest.begin(), dest.end(), 0L);
                for (long t = 0; t < ba.height; ++t) {
                    dest[(size_t)(ba.offset + t)] = bb.offset + t;
                    dest[(size_t)(bb.offset + t)] = ba.offset + t;
                }
                Mat pm(x.ctx(), n, n);
                for (long i = 0; i < n; ++i)
                    pm.at(dest[(size_t)i], i) = FieldElement::one(x.ctx());
                g = pm;
                break;
            }
            }
        } catch (const NoConwayPolynomial&) {
            g = Mat();
        }
    }
    if (g.rows() == 0) g = Mat::identity(x.ctx(), n);
    if (!in_twisted_centralizer(x, g))
        throw NotInJ("candidate fails the twisted centralizer equation");
    return g;
}

CrystalCheck is_crystal(const Isocrystal& x, const Mat& lattice) {
    const auto& np = x.cached_newton_point();
    for (const auto& lam : np)
        if (lam < 0 || lam > 1) return {false, "SlopeRange"};
    if (lattice.rows() != x.n() || lattice.cols() != x.n())
        throw InvalidParams("lattice basis must be square of the instance dimension");
    Ctx jo = join_context(x.ctx(), lattice.ctx());
    Mat m = mat_coerce(lattice, jo);
    Mat minv = inverse(m);
    Mat b = mat_coerce(x.matrix(), jo);
    if (!mat_is_integral(minv * (b * m.frobenius()))) return {false, ""};
    Mat back = (inverse(b) * m).frobenius(jo->m() - 1);
    if (!mat_is_integral(minv * mat_scale(back, FieldElement::p_power(jo, 1))))
        return {false, ""};
    return {true, ""};
}

Mat minimal_crystal_ball(const Isocrystal& x, const Norm& a, const Rat& e) {
    const auto& np = x.cached_newton_point();
    for (const auto& lam : np)
        if (lam < 0 || lam > 1)
            throw SlopeRange("stable lattices require slopes within [0, 1]");
    if (!is_in_min(x, a)) throw NotInMin("the norm does not minimize the displacement");
    Mat l = ball_lattice(a, e);
    auto cc = is_crystal(x, l);
    if (!cc.ok)
        throw Error("internal", "ball of a minimizing norm failed the stability check");
    return l;
}

std::vector<Mat> enumerate_crystals(const Isocrystal& x, long radius) {
    long n = x.n(), p = x.ctx()->p();
    if (n > 3 || p > 3 || radius > 2 || radius < 0 || x.ctx()->m() != 1)
        throw ScaleTooLarge(
            "enumeration is limited to prime-field instances with n <= 3, p <= 3, radius <= 2");
    long k = 2 * radius;
    std::vector<long> ppow((size_t)(n * k + 1));
    ppow[0] = 1;
    for (size_t t = 1; t < ppow.size(); ++t) ppow[t] = ppow[t - 1] * p;
    std::vector<std::pair<long, long>> pos; // above-diagonal slots, row-major
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j) pos.push_back({i, j});

    std::vector<Mat> out;
    std::vector<long> a((size_t)n, 0);
    std::vector<std::vector<long>> h((size_t)n, std::vector<long>((size_t)n, 0));
    FieldElement scale = FieldElement::p_power(x.ctx(), -radius);

    auto window_ok = [&]() {
        // p^{2 radius} H^{-1} integral, via the adjugate of the triangular H
        long det = ppow[(size_t)std::accumulate(a.begin(), a.end(), 0L)];
        long p2r = ppow[(size_t)k];
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) {
                // cofactor C_{ji}: delete row j, column i
                long c2[3][3];
                long r2 = 0;
                for (long r = 0; r < n; ++r) {
                    if (r == j) continue;
                    long c3 = 0;
                    for (long cc = 0; cc < n; ++cc) {
                        if (cc == i) continue;
                        c2[r2][c3] = (r == cc) ? ppow[(size_t)a[(size_t)r]]
                                               : (r < cc ? h[(size_t)r][(size_t)cc] : 0);
                        ++c3;
                    }
                    ++r2;
                }
                long minor = 1;
                if (n - 1 == 1) minor = c2[0][0];
                else if (n - 1 == 2) minor = c2[0][0] * c2[1][1] - c2[0][1] * c2[1][0];
                long adj = (((i + j) % 2) ? -minor : minor);
                if (((long long)adj * p2r) % det != 0) return false;
            }
        return true;
    };

    std::function<void(size_t)> emit_entries = [&](size_t slot) {
        if (slot == pos.size()) {
            if (!window_ok()) return;
            Mat m(x.ctx(), n, n);
            for (long i = 0; i < n; ++i) {
                m.at(i, i) = FieldElement::from_int(x.ctx(), Int(ppow[(size_t)a[(size_t)i]]));
                for (long j = i + 1; j < n; ++j)
                    m.at(i, j) = FieldElement::from_int(x.ctx(), Int(h[(size_t)i][(size_t)j]));
            }
            m = mat_scale(m, scale);
            if (is_crystal(x, m).ok) out.push_back(std::move(m));
            return;
        }
        auto [i, j] = pos[slot];
        long mod = ppow[(size_t)a[(size_t)i]];
        for (long v = 0; v < mod; ++v) {
            h[(size_t)i][(size_t)j] = v;
            emit_entries(slot + 1);
        }
    };

    std::function<void(size_t)> emit_diag = [&](size_t i) {
        if (i == (size_t)n) {
            emit_entries(0);
            return;
        }
        for (long v = 0; v <= k; ++v) {
            a[i] = v;
            emit_diag(i + 1);
        }
    };
    emit_diag(0);
    return out;
}

namespace {

std::vector<Rat> random_shifts(const Isocrystal& x, std::mt19937_64& rng) {
    std::vector<Rat> shifts;
    for (const auto& blk : standard_blocks(x))
        shifts.push_back(rat(rnd_range(rng, -4 * blk.height, 4 * blk.height), blk.height));
    return shifts;
}

std::string scaled_lattice_key(const Mat& l) {
    long minv = LONG_MAX;
    for (long i = 0; i < l.rows(); ++i)
        for (long j = 0; j < l.cols(); ++j) {
            const auto& x = l.at(i, j);
            if (x.state() == ElemState::Regular) minv = std::min(minv, x.pi_valuation());
            else if (x.state() == ElemState::NearZero)
                minv = std::min(minv, x.near_zero_bound());
        }
    if (minv == LONG_MAX) throw InvalidParams("zero lattice basis");
    long t = minv < 0 ? -minv : 0;
    Mat s = t > 0 ? mat_scale(l, FieldElement::pi_power(l.ctx(), t)) : l;
    return "s" + std::to_string(t) + ";" + lattice_key(hnf_lattice(s));
}

} // namespace

bool is_minimal_crystal(const Isocrystal& x, const Mat& lattice) {
    if (!is_crystal(x, lattice).ok) return false;
    auto dec = isocline_decomposition(x);
    Ctx jo = join_context(x.ctx(), lattice.ctx());
    Mat m = mat_coerce(lattice, jo);
    long n = x.n();
    // assembled basis of the direct sum of the slope components
    Mat pall(jo, n, n);
    long off = 0;
    for (const auto& blk : dec) {
        for (long j = 0; j < blk.mult; ++j)
            for (long i = 0; i < n; ++i) pall.at(i, off + j) = coerce(blk.basis.at(i, j), jo);
        off += blk.mult;
    }
    Mat pall_inv = inverse(pall);
    Mat coords = pall_inv * m;
    Mat assembled(jo, n, n);
    std::vector<Mat> comps;
    long col = 0;
    off = 0;
    for (const auto& blk : dec) {
        // rows of coords outside the block must die on the component
        Mat outside(jo, n - blk.mult, n);
        long r2 = 0;
        for (long i = 0; i < n; ++i) {
            if (i >= off && i < off + blk.mult) continue;
            for (long j = 0; j < n; ++j) outside.at(r2, j) = coords.at(i, j);
            ++r2;
        }
        SNF s = smith_normal_form(outside);
        long rank = (long)s.exps.size();
        if (n - rank != blk.mult) return false;
        Mat comp = m * s.V; // O-kernel columns after the first `rank`
        Mat g(jo, n, blk.mult);
        for (long j = 0; j < blk.mult; ++j)
            for (long i = 0; i < n; ++i) {
                assembled.at(i, col + j) = comp.at(i, rank + j);
                g.at(i, j) = comp.at(i, rank + j);
            }
        comps.push_back(std::move(g));
        col += blk.mult;
        off += blk.mult;
    }
    if (!lattice_equal(m, assembled)) return false;
    // on each component the h-fold twisted translate must shift by exactly p^a
    off = 0;
    for (size_t bi = 0; bi < dec.size(); ++bi) {
        const auto& blk = dec[bi];
        long h = rat_den_long(blk.slope);
        long aexp = rat_num(blk.slope * h).get_si();
        Mat zc = pall_inv * comps[bi];
        Mat z(jo, blk.mult, blk.mult);
        for (long i = 0; i < blk.mult; ++i)
            for (long j = 0; j < blk.mult; ++j) z.at(i, j) = zc.at(off + i, j);
        Isocrystal sub(blk.block);
        Mat bh = mat_coerce(twisted_power(sub, h), jo);
        Mat lhs = bh * z.frobenius(h);
        Mat rhs = mat_scale(z, FieldElement::p_power(jo, aexp));
        if (!lattice_equal(lhs, rhs)) return false;
        off += blk.mult;
    }
    return true;
}

std::optional<Mat> crystal_isomorphism(const Isocrystal& x, const Mat& m1, const Mat& m2) {
    long n = x.n(), p = x.ctx()->p();
    if (n > 3 || p > 3 || x.ctx()->m() != 1)
        throw ScaleTooLarge(
            "isomorphism search is limited to prime-field instances with n <= 3, p <= 3");
    auto blocks = standard_blocks(x);
    long prec = x.ctx()->N();

    std::vector<Mat> gens;
    const Ctx& c = x.ctx();
    gens.push_back(mat_scale(Mat::identity(c, n), FieldElement::p_power(c, 1)));
    gens.push_back(mat_scale(Mat::identity(c, n), FieldElement::p_power(c, -1)));
    gens.push_back(x.matrix());
    gens.push_back(inverse(x.matrix()));
    for (const auto& blk : blocks) {
        for (long e : {1L, -1L}) {
            Mat g = Mat::identity(c, n);
            for (long i = 0; i < blk.height; ++i)
                g.at(blk.offset + i, blk.offset + i) = FieldElement::p_power(c, e);
            gens.push_back(g);
        }
    }
    for (const auto& blk : blocks) {
        if (blk.height != 2) continue;
        Ctx e;
        try {
            e = join_context(make_field(p, 2, prec), c);
        } catch (const NoConwayPolynomial&) {
            continue;
        }
        FieldElement zero = FieldElement::zero(e), one = FieldElement::one(e);
        FieldElement zeta = e->m() > 1 ? FieldElement::generator(e) : one;
        std::vector<std::pair<FieldElement, FieldElement>> uv = {
            {one, zero}, {zeta, zero}, {zero, one}, {one, one}, {zeta, one}};
        for (const auto& [u, v] : uv) {
            Mat gb(e, 2, 2);
            gb.at(0, 0) = u;
            gb.at(0, 1) = FieldElement::p_power(e, blk.corner) * v.frobenius();
            gb.at(1, 0) = v;
            gb.at(1, 1) = u.frobenius();
            if (u.is_exact_zero() && v.is_exact_zero()) continue;
            Mat g = embed_block(e, n, blk.offset, gb);
            gens.push_back(g);
            gens.push_back(inverse(g));
        }
    }
    { // swaps of identical blocks and slope-0 singleton transvections
        std::map<std::pair<long, long>, std::vector<size_t>> groups;
        for (size_t j = 0; j < blocks.size(); ++j)
            groups[{blocks[j].height, blocks[j].corner}].push_back(j);
        for (const auto& kv : groups) {
            for (size_t t = 0; t + 1 < kv.second.size(); ++t) {
                const auto& ba = blocks[kv.second[t]];
                const auto& bb = blocks[kv.second[t + 1]];
                std::vector<long> dest((size_t)n);
                std::iota(dest.begin(), dest.end(), 0L);
                for (long q = 0; q < ba.height; ++q) {
                    dest[(size_t)(ba.offset + q)] = bb.offset + q;
                    dest[(size_t)(bb.offset + q)] = ba.offset + q;
                }
                Mat pm(c, n, n);
                for (long i = 0; i < n; ++i) pm.at(dest[(size_t)i], i) = FieldElement::one(c);
                gens.push_back(pm);
            }
            if (kv.first.first == 1 && kv.second.size() >= 2) {
                for (size_t t = 0; t + 1 < kv.second.size(); ++t) {
                    long i = blocks[kv.second[t]].offset, j = blocks[kv.second[t + 1]].offset;
                    for (long sgn : {1L, -1L}) {
                        Mat tv = Mat::identity(c, n);
                        tv.at(i, j) = FieldElement::from_int(c, Int(sgn));
                        gens.push_back(tv);
                    }
                }
            }
        }
    }
    std::vector<Mat> verified;
    for (const auto& g : gens)
        if (in_twisted_centralizer(x, g)) verified.push_back(g);

    Ctx emax = c;
    for (const auto& g : verified) emax = join_context(emax, g.ctx());
    Mat ma = mat_coerce(m1, emax), mb = mat_coerce(m2, emax);
    std::string target = scaled_lattice_key(mb);

    std::vector<Mat> frontier = {Mat::identity(emax, n)};
    std::set<std::string> seen = {scaled_lattice_key(ma)};
    if (seen.count(target)) {
        if (lattice_equal(ma, mb)) return Mat::identity(emax, n);
    }
    const int kMaxDepth = 5;
    const size_t kMaxWidth = 4000;
    for (int depth = 0; depth < kMaxDepth && !frontier.empty(); ++depth) {
        std::vector<Mat> next;
        for (const auto& g : frontier) {
            for (const auto& gen : verified) {
                Mat g2 = mat_coerce(gen, emax) * g;
                Mat l2 = g2 * ma;
                std::string key = scaled_lattice_key(l2);
                if (key == target && lattice_equal(l2, mb) && in_twisted_centralizer(x, g2))
                    return g2;
                if (seen.count(key) || seen.size() > kMaxWidth) continue;
                seen.insert(key);
                next.push_back(std::move(g2));
            }
        }
        frontier = std::move(next);
    }
    return std::nullopt;
}

std::string instance_label(const Isocrystal& x) {
    const auto& np = x.cached_newton_point();
    std::ostringstream os;
    os << "p=" << x.ctx()->p() << ", s=" << x.s() << ", n=" << x.n() << ", slopes=(";
    size_t i = 0;
    bool first = true;
    while (i < np.size()) {
        size_t j = i;
        while (j < np.size() && np[j] == np[i]) ++j;
        if (!first) os << ", ";
        os << rat_str(np[i]) << " x" << (j - i);
        first = false;
        i = j;
    }
    os << ")";
    return os.str();
}

VerificationReport verify_suite(const Isocrystal& x, const std::string& suite,
                                unsigned long long seed) {
    VerificationReport rep;
    rep.suite = suite;
    rep.instance = instance_label(x);
    rep.seed = seed;
    auto add = [&](const std::string& name, bool ok, const std::string& wit) {
        rep.checks.push_back({name, ok, ok ? std::string() : wit});
    };

    if (suite == "prop1") {
        auto blocks = standard_blocks(x);
        auto dec = isocline_decomposition(x);
        (void)blocks;
        {
            auto rng = sample_rng(seed, 1);
            bool ok = true;
            std::string wit;
            for (int t = 0; t < 20 && ok; ++t) {
                Norm a = min_point(x, random_shifts(x, rng));
                Norm b2 = min_point(x, random_shifts(x, rng));
                if (!is_in_min(x, dec, geodesic_point(a, b2, rat(1, 2)))) {
                    ok = false;
                    wit = "midpoint escaped the minimizing locus at trial " + std::to_string(t);
                }
            }
            add("midpoint-convexity", ok, wit);
        }
        {
            auto rng = sample_rng(seed, 2);
            Rat nu = min_nu(x);
            bool ok1 = true, ok2 = true;
            std::string w1, w2;
            for (int t = 0; t < 10; ++t) {
                Norm a = min_point(x, random_shifts(x, rng));
                for (long s : {2L, 3L}) {
                    if (ok1 && displacement_squared_power(x, a, s) != nu * s * s) {
                        ok1 = false;
                        w1 = "power displacement mismatch at trial " + std::to_string(t) +
                             ", power " + std::to_string(s);
                    }
                    if (ok2 && !is_in_min_power(x, dec, a, s)) {
                        ok2 = false;
                        w2 = "minimizer escaped the power minimizing locus at trial " +
                             std::to_string(t) + ", power " + std::to_string(s);
                    }
                }
            }
            add("power-displacement-scaling", ok1, w1);
            add("minimizers-persist-under-powers", ok2, w2);
        }
    } else if (suite == "thm2") {
        auto dec = isocline_decomposition(x);
        Rat nu = min_nu(x);
        {
            auto rng = sample_rng(seed, 3);
            bool ok = true;
            std::string wit;
            for (int t = 0; t < 50 && ok; ++t) {
                Norm a(Mat::identity(x.ctx(), x.n()), sample_exponents(x.n(), rng), 0);
                if (t % 2) a = group_act(sample_unimodular(x.ctx(), x.n(), rng), a);
                if (displacement_squared(x, a) < nu) {
                    ok = false;
                    wit = "displacement fell below the slope bound at trial " + std::to_string(t);
                }
            }
            add("displacement-lower-bound", ok, wit);
        }
        {
            auto rng = sample_rng(seed, 4);
            bool ok = true;
            std::string wit;
            for (int t = 0; t < 20 && ok; ++t) {
                Norm a = min_point(x, random_shifts(x, rng));
                if (displacement_squared(x, a) != nu || !is_in_min(x, dec, a)) {
                    ok = false;
                    wit = "constructed minimizer failed at trial " + std::to_string(t);
                }
            }
            add("equality-at-minimizers", ok, wit);
        }
        {
            auto rng = sample_rng(seed, 5);
            bool ok = true;
            std::string wit;
            for (int t = 0; t < 20 && ok; ++t) {
                Mat g = sample_j_element(x, rng);
                Norm a = min_point(x, random_shifts(x, rng));
                if (!is_in_min(x, dec, group_act(g, a))) {
                    ok = false;
                    wit = "centralizer element moved a minimizer out at trial " +
                          std::to_string(t);
                }
            }
            add("centralizer-stabilizes", ok, wit);
        }
        {
            auto rng = sample_rng(seed, 6);
            bool ok = true;
            std::string wit;
            for (int t = 0; t < 10 && ok; ++t) {
                Mat g = sample_unimodular(x.ctx(), x.n(), rng);
                Isocrystal moved = sigma_conjugate(x, g);
                auto dec2 = isocline_decomposition(moved);
                Norm a = min_point(x, random_shifts(x, rng));
                if (!is_in_min(moved, dec2, group_act(g, a))) {
                    ok = false;
                    wit = "conjugation transport failed at trial " + std::to_string(t);
                }
            }
            add("conjugation-transport", ok, wit);
        }
    } else if (suite == "bound37") {
        ScanReport r1 = kappa_scan(x, 40, seed);
        ScanReport r2 = kappa_scan(x, 80, seed);
        add("scan-inequalities", r1.violations == 0 && r2.violations == 0,
            "a sample violated the exact displacement bound");
        add("scan-kappa-positive", r1.pass && r2.pass, "observed ratio not positive");
        bool stable = true;
        if (r1.has_kappa2 && r2.has_kappa2)
            stable = r2.kappa2 <= r1.kappa2 && r1.kappa2 <= 2 * r2.kappa2;
        add("kappa-doubling-stability", stable,
            "minimum ratio moved by more than a factor 2 under sample doubling");
    } else if (suite == "remark6") {
        auto blocks = standard_blocks(x);
        const auto& np = x.cached_newton_point();
        for (const auto& lam : np)
            if (lam < 0 || lam > 1)
                throw ScaleTooLarge("the lattice suite requires slopes within [0, 1]");
        std::map<std::pair<long, long>, long> per_slope;
        for (const auto& blk : blocks) ++per_slope[{blk.height, blk.corner}];
        for (const auto& kv : per_slope)
            if (kv.second != 1)
                throw ScaleTooLarge("the lattice suite requires one block per slope");
        long radius = 1;
        auto crystals = enumerate_crystals(x, radius);
        std::set<std::string> minimal_keys;
        std::vector<Mat> minimal;
        for (const auto& m : crystals)
            if (is_minimal_crystal(x, m)) {
                std::string key = scaled_lattice_key(m);
                if (minimal_keys.insert(key).second) minimal.push_back(m);
            }
        bool balls_ok = true;
        std::string ball_wit;
        std::set<std::string> ball_keys;
        std::vector<std::vector<Rat>> grids;
        for (const auto& blk : blocks) {
            std::vector<Rat> g;
            for (long t = -2 * blk.height; t <= 2 * blk.height; ++t)
                g.push_back(rat(t, blk.height));
            grids.push_back(std::move(g));
        }
        std::vector<size_t> idx(grids.size(), 0);
        FieldElement pr = FieldElement::p_power(x.ctx(), radius);
        for (;;) {
            std::vector<Rat> shifts;
            for (size_t j = 0; j < grids.size(); ++j) shifts.push_back(grids[j][idx[j]]);
            Norm a = min_point(x, shifts);
            Mat l = ball_lattice(a, Rat(0));
            bool in_window =
                mat_is_integral(mat_scale(l, pr)) && mat_is_integral(mat_scale(inverse(l), pr));
            if (in_window) {
                if (!is_crystal(x, l).ok) {
                    balls_ok = false;
                    ball_wit = "ball of a minimizer failed stability";
                }
                ball_keys.insert(scaled_lattice_key(l));
            }
            size_t j = 0;
            while (j < idx.size() && ++idx[j] == grids[j].size()) idx[j++] = 0;
            if (j == idx.size()) break;
        }
        add("balls-are-stable", balls_ok, ball_wit);
        add("minimal-lattices-are-balls", minimal_keys == ball_keys,
            "minimal lattices: " + std::to_string(minimal_keys.size()) +
                ", distinct balls: " + std::to_string(ball_keys.size()));
        bool conn = true;
        std::string cw;
        for (size_t i = 1; i < minimal.size() && conn; ++i)
            if (!crystal_isomorphism(x, minimal[0], minimal[i])) {
                conn = false;
                cw = "no witness found between minimal lattices 0 and " + std::to_string(i);
            }
        add("minimal-lattices-connected", conn, cw);
    } else {
        throw UnknownSuite("unknown suite: " + suite);
    }

    rep.pass = true;
    for (const auto& ch : rep.checks) rep.pass = rep.pass && ch.pass;
    return rep;
}

} // namespace ibt
