#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ibt/polynomial.hpp"

#include <algorithm>
#include <random>

using namespace ibt;

namespace {

Poly linear(const Ctx& c, const FieldElement& root) {
    return {-root, FieldElement::one(c)};
}

Poly pmul(const Ctx& c, const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, FieldElement::zero(c));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    return out;
}

} // namespace

TEST_CASE("newton polygon of a two term quadratic") {
    auto F = make_field(3, 1, 40, 1);
    auto fe = [&](long v) { return FieldElement::from_int(F, v); };
    Poly f = {fe(-3), fe(-3), fe(1)};
    auto segs = newton_polygon(f);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].slope == Rat(1, 2));
    CHECK(segs[0].mult == 2);
}

TEST_CASE("distinct integral slopes split into linear factors") {
    auto F = make_field(3, 1, 40, 1);
    auto fe = [&](long v) { return FieldElement::from_int(F, v); };
    Poly g = {fe(-27), fe(39), fe(-13), fe(1)};
    auto segs = newton_polygon(g);
    REQUIRE(segs.size() == 3);
    CHECK(segs[0].slope == 0);
    CHECK(segs[1].slope == 1);
    CHECK(segs[2].slope == 2);

    auto facs = slope_factorization(g);
    REQUIRE(facs.size() == 3);
    for (auto& fc : facs) CHECK(poly_deg(fc) == 1);
    for (long r : {1L, 3L, 9L}) {
        bool hit = false;
        for (auto& fc : facs) hit = hit || poly_eval(fc, fe(r)).is_zeroish();
        CHECK(hit);
    }
}

TEST_CASE("repeated slopes stay in one factor") {
    auto F = make_field(3, 1, 40, 1);
    auto fe = [&](long v) { return FieldElement::from_int(F, v); };
    Poly h = {fe(-9), fe(19), fe(-11), fe(1)};
    auto fh = slope_factorization(h);
    REQUIRE(fh.size() == 2);
    CHECK(poly_deg(fh[0]) == 2);
    CHECK(poly_deg(fh[1]) == 1);
    CHECK(poly_eval(fh[0], fe(1)).is_zeroish());
    CHECK(poly_eval(fh[1], fe(9)).is_zeroish());
}

TEST_CASE("a fractional slope beside another segment is refused") {
    auto F = make_field(3, 1, 40, 1);
    auto fe = [&](long v) { return FieldElement::from_int(F, v); };
    Poly k = {fe(3), fe(-3), fe(-1), fe(1)};
    auto segs = newton_polygon(k);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].slope == 0);
    CHECK(segs[1].slope == Rat(1, 2));
    CHECK_THROWS_AS(slope_factorization(k), SlopeNotIntegral);
}

TEST_CASE("negative slopes factor like any other") {
    auto F = make_field(3, 1, 40, 1);
    Poly neg = {FieldElement::from_rat(F, Rat(1, 3)), FieldElement::from_rat(F, Rat(-4, 3)),
                FieldElement::one(F)};
    auto fn = slope_factorization(neg);
    REQUIRE(fn.size() == 2);
    CHECK(poly_eval(fn[0], FieldElement::from_rat(F, Rat(1, 3))).is_zeroish());
    CHECK(poly_eval(fn[1], FieldElement::one(F)).is_zeroish());
}

TEST_CASE("near zero coefficients above the hull are tolerated") {
    auto F = make_field(3, 1, 40, 1);
    auto fe = [&](long v) { return FieldElement::from_int(F, v); };
    auto nz = fe(5) - fe(5);
    REQUIRE(nz.state() == ElemState::NearZero);
    Poly t = {fe(-27), fe(39), nz + fe(-13), fe(1)};
    auto segs = newton_polygon(t);
    CHECK(segs.size() == 3);
}

TEST_CASE("slopes of a product of linear factors are the root valuations") {
    for (long p : {2L, 3L, 5L}) {
        Ctx F = make_field(p, 1, 40, 1);
        std::mt19937_64 rng(900 + p);
        for (int trial = 0; trial < 40; ++trial) {
            long deg = 2 + (long)(rng() % 4);
            std::vector<Rat> vals;
            Poly f = {FieldElement::one(F)};
            for (long i = 0; i < deg; ++i) {
                long w = (long)(rng() % 7) - 3;
                long u = 1 + (long)(rng() % (p - 1 > 0 ? p - 1 : 1));
                auto root = FieldElement::from_int(F, u) * FieldElement::pi_power(F, w);
                vals.push_back(Rat(w));
                f = pmul(F, f, linear(F, root));
            }
            std::sort(vals.begin(), vals.end());
            auto segs = newton_polygon(f);
            std::vector<Rat> got;
            for (auto& s : segs)
                for (long k = 0; k < s.mult; ++k) got.push_back(s.slope);
            CHECK(got == vals);
        }
    }
}

TEST_CASE("slope factors multiply back to the original polynomial") {
    Ctx F = make_field(3, 1, 40, 1);
    std::mt19937_64 rng(321);
    int factored = 0;
    for (int trial = 0; trial < 60; ++trial) {
        long deg = 2 + (long)(rng() % 4);
        Poly f = {FieldElement::one(F)};
        for (long i = 0; i < deg; ++i) {
            long w = (long)(rng() % 5) - 2;
            long u = 1 + (long)(rng() % 2);
            f = pmul(F, f, linear(F, FieldElement::from_int(F, u) * FieldElement::pi_power(F, w)));
        }
        auto facs = slope_factorization(f);
        Poly prod = {FieldElement::one(F)};
        for (auto& fc : facs) prod = pmul(F, prod, fc);
        REQUIRE(prod.size() == f.size());
        for (size_t i = 0; i < f.size(); ++i) CHECK((prod[i] - f[i]).is_zeroish());
        if (facs.size() > 1) ++factored;
        for (auto& fc : facs) {
            auto segs = newton_polygon(fc);
            CHECK(segs.size() == 1);
        }
    }
    CHECK(factored > 10);
}

TEST_CASE("hull slopes are weakly increasing and account for the determinant") {
    Ctx F = make_field(5, 1, 40, 1);
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 60; ++trial) {
        long deg = 1 + (long)(rng() % 5);
        Poly f(deg + 1, FieldElement::zero(F));
        f[deg] = FieldElement::one(F);
        for (long i = 0; i < deg; ++i) {
            long a = (long)(rng() % 9) - 4;
            if (a == 0) continue;
            f[i] = FieldElement::from_int(F, a) * FieldElement::pi_power(F, (long)(rng() % 6) - 2);
        }
        if (f[0].is_zeroish()) f[0] = FieldElement::one(F);
        auto segs = newton_polygon(f);
        long total = 0;
        Rat weighted;
        for (size_t i = 0; i < segs.size(); ++i) {
            if (i > 0) CHECK(segs[i - 1].slope < segs[i].slope);
            total += segs[i].mult;
            weighted += segs[i].slope * segs[i].mult;
        }
        CHECK(total == deg);
        CHECK(weighted == f[0].valuation() - f[deg].valuation());
    }
}
