#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ibt/minset.hpp"

#include <random>

using namespace ibt;

TEST_CASE("companion block layout of standard forms") {
    Isocrystal x12 = standard_form(3, {{rat(1, 2), 2}});
    auto blocks = standard_blocks(x12);
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0].offset == 0);
    CHECK(blocks[0].height == 2);
    CHECK(blocks[0].corner == 1);

    Isocrystal x03 = standard_form(3, {{rat(0), 1}, {rat(1, 2), 2}});
    auto blocks3 = standard_blocks(x03);
    REQUIRE(blocks3.size() == 2);
    CHECK(blocks3[0].height == 1);
    CHECK(blocks3[0].corner == 0);
    CHECK(blocks3[1].offset == 1);
    CHECK(blocks3[1].height == 2);
    CHECK(blocks3[1].corner == 1);

    Mat m = Mat::identity(x12.ctx(), 2);
    m.at(0, 1) = FieldElement::one(x12.ctx());
    CHECK_THROWS_AS(standard_blocks(Isocrystal(m)), InvalidParams);
}

TEST_CASE("minimizing norms achieve the slope displacement") {
    Isocrystal x12 = standard_form(3, {{rat(1, 2), 2}});
    Norm mp = min_point(x12, {rat(0)});
    CHECK(mp.exponents()[0] == 0);
    CHECK(mp.exponents()[1] == rat(1, 2));
    CHECK(min_nu(x12) == rat(1, 2));
    CHECK(displacement_squared(x12, mp) == rat(1, 2));
    CHECK(is_in_min(x12, mp));

    Norm a00(Mat::identity(x12.ctx(), 2), {rat(0), rat(0)}, 0);
    CHECK(displacement_squared(x12, a00) == 1);
    CHECK_FALSE(is_in_min(x12, a00));

    // shifted base points stay minimizing
    for (long t = -3; t <= 3; ++t) {
        Norm shifted = min_point(x12, {rat(t, 2)});
        CHECK(displacement_squared(x12, shifted) == rat(1, 2));
        CHECK(is_in_min(x12, shifted));
    }
}

TEST_CASE("apartment projection finds the nearest minimizer") {
    Isocrystal x12 = standard_form(3, {{rat(1, 2), 2}});
    auto proj = apartment_min_projection(x12, {rat(0), rat(0)});
    CHECK(proj.point.exponents()[0] == rat(-1, 4));
    CHECK(proj.point.exponents()[1] == rat(1, 4));
    CHECK(proj.dist2 == rat(1, 8));
    CHECK(is_in_min(x12, proj.point));

    // already minimizing points project onto themselves
    auto fixed = apartment_min_projection(x12, {rat(0), rat(1, 2)});
    CHECK(fixed.dist2 == 0);
}

TEST_CASE("displacement of a power scales quadratically at minimizers") {
    Isocrystal x12 = standard_form(3, {{rat(1, 2), 2}});
    auto dec = isocline_decomposition(x12);
    Norm mp = min_point(x12, {rat(0)});
    CHECK(displacement_squared_power(x12, mp, 2) == rat(2));
    CHECK(displacement_squared_power(x12, mp, 3) == rat(9, 2));
    CHECK(is_in_min_power(x12, dec, mp, 2));
    CHECK(is_in_min_power(x12, dec, mp, 3));
    CHECK(displacement_squared_power(x12, mp, 0) == 0);
    CHECK_THROWS_AS(displacement_squared_power(x12, mp, -1), InvalidParams);
}

TEST_CASE("scans are deterministic and doubling extends the sample") {
    Isocrystal x12 = standard_form(3, {{rat(1, 2), 2}});
    ScanReport r1 = kappa_scan(x12, 30, 12345);
    ScanReport r1b = kappa_scan(x12, 30, 12345);
    CHECK(r1.pass);
    CHECK(r1.violations == 0);
    CHECK(r1.min_nu2 == rat(1, 2));
    REQUIRE(r1.records.size() == 30);
    REQUIRE(r1b.records.size() == 30);
    CHECK(r1b.kappa2 == r1.kappa2);
    CHECK(r1b.min_displacement2 == r1.min_displacement2);
    for (size_t i = 0; i < 30; ++i)
        CHECK(r1.records[i].displacement2 == r1b.records[i].displacement2);
    ScanReport r2 = kappa_scan(x12, 60, 12345);
    CHECK(r2.pass);
    for (size_t i = 0; i < 30; ++i)
        CHECK(r1.records[i].displacement2 == r2.records[i].displacement2);
    CHECK(r1.has_kappa2);
    CHECK(r2.has_kappa2);
    CHECK(r2.kappa2 <= r1.kappa2);
    CHECK(r2.kappa2 > 0);
}

TEST_CASE("sampled centralizer elements preserve the minimizing locus") {
    Isocrystal x12 = standard_form(3, {{rat(1, 2), 2}});
    Isocrystal x03 = standard_form(3, {{rat(0), 1}, {rat(1, 2), 2}});
    auto dec12 = isocline_decomposition(x12);
    auto dec3 = isocline_decomposition(x03);
    Norm mp = min_point(x12, {rat(0)});
    Norm mp3 = min_point(x03, {rat(0), rat(0)});
    std::mt19937_64 rng(99);
    for (int t = 0; t < 12; ++t) {
        Mat g = sample_j_element(x12, rng);
        CHECK(is_in_min(x12, dec12, group_act(g, mp)));
    }
    for (int t = 0; t < 12; ++t) {
        Mat g = sample_j_element(x03, rng);
        CHECK(is_in_min(x03, dec3, group_act(g, mp3)));
    }
}

TEST_CASE("lattice stability under the twisted endomorphism") {
    Isocrystal x12 = standard_form(3, {{rat(1, 2), 2}});
    Isocrystal y = standard_form(3, {{rat(0), 1}, {rat(1), 1}});
    CHECK(is_crystal(x12, Mat::identity(x12.ctx(), 2)).ok);
    CHECK(is_crystal(y, Mat::identity(y.ctx(), 2)).ok);

    Mat m(y.ctx(), 2, 2);
    m.at(0, 0) = FieldElement::one(y.ctx());
    m.at(1, 0) = FieldElement::one(y.ctx());
    m.at(1, 1) = FieldElement::p_power(y.ctx(), 1);
    auto cc = is_crystal(y, m);
    CHECK_FALSE(cc.ok);
    CHECK(cc.note.empty());

    Isocrystal z2 = standard_form(3, {{rat(2), 1}});
    auto cz = is_crystal(z2, Mat::identity(z2.ctx(), 1));
    CHECK_FALSE(cz.ok);
    CHECK(cz.note == "SlopeRange");
}

TEST_CASE("balls of minimizers are stable lattices") {
    Isocrystal x12 = standard_form(3, {{rat(1, 2), 2}});
    Norm mp = min_point(x12, {rat(0)});
    Mat l = minimal_crystal_ball(x12, mp, rat(0));
    CHECK(lattice_equal(l, Mat::identity(x12.ctx(), 2)));

    Norm a00(Mat::identity(x12.ctx(), 2), {rat(0), rat(0)}, 0);
    CHECK_THROWS_AS(minimal_crystal_ball(x12, a00, rat(0)), NotInMin);

    Isocrystal z2 = standard_form(3, {{rat(2), 1}});
    Norm nz(Mat::identity(z2.ctx(), 1), {rat(0)}, 0);
    CHECK_THROWS_AS(minimal_crystal_ball(z2, nz, rat(0)), SlopeRange);
}

TEST_CASE("enumeration finds exactly the stable lattices in the window") {
    Isocrystal y = standard_form(3, {{rat(0), 1}, {rat(1), 1}});
    auto cs = enumerate_crystals(y, 1);
    CHECK(cs.size() == 9);
    for (const auto& m : cs) CHECK(is_minimal_crystal(y, m));

    Isocrystal x12 = standard_form(3, {{rat(1, 2), 2}});
    auto c12 = enumerate_crystals(x12, 1);
    CHECK(c12.size() == 5);
    bool has_unit = false;
    for (const auto& m : c12) {
        CHECK(is_minimal_crystal(x12, m));
        if (lattice_equal(m, Mat::identity(x12.ctx(), 2))) has_unit = true;
    }
    CHECK(has_unit);
}

TEST_CASE("orbit witnesses connect stable lattices") {
    Isocrystal x12 = standard_form(3, {{rat(1, 2), 2}});
    Mat id2 = Mat::identity(x12.ctx(), 2);
    Mat pm = mat_scale(id2, FieldElement::p_power(x12.ctx(), 1));
    auto w1 = crystal_isomorphism(x12, id2, pm);
    REQUIRE(w1.has_value());
    CHECK(lattice_equal(*w1 * mat_coerce(id2, w1->ctx()), pm));
    Mat bm = x12.matrix();
    auto w2 = crystal_isomorphism(x12, id2, bm);
    REQUIRE(w2.has_value());
    CHECK(lattice_equal(*w2 * mat_coerce(id2, w2->ctx()), bm));
    Mat off(x12.ctx(), 2, 2);
    off.at(0, 0) = FieldElement::one(x12.ctx());
    off.at(1, 1) = FieldElement::p_power(x12.ctx(), 1);
    CHECK_FALSE(crystal_isomorphism(x12, id2, off).has_value());
}

TEST_CASE("instance labels name the slope multiset") {
    CHECK(instance_label(standard_form(3, {{rat(1, 2), 2}})) == "p=3, s=1, n=2, slopes=(1/2 x2)");
    CHECK(instance_label(standard_form(3, {{rat(0), 1}, {rat(1, 2), 2}})) ==
          "p=3, s=1, n=3, slopes=(0 x1, 1/2 x2)");
}

TEST_CASE("verification suites pass on desk instances") {
    Isocrystal x12 = standard_form(3, {{rat(1, 2), 2}});
    for (const auto& suite : {"prop1", "thm2", "bound37", "remark6"}) {
        VerificationReport rep = verify_suite(x12, suite, 777);
        for (const auto& ch : rep.checks) {
            INFO(suite, "/", ch.name, ": ", ch.witness);
            CHECK(ch.pass);
        }
        CHECK(rep.pass);
        CHECK_FALSE(rep.checks.empty());
    }

    Isocrystal y = standard_form(3, {{rat(0), 1}, {rat(1), 1}});
    CHECK(verify_suite(y, "remark6", 1).pass);
    CHECK(verify_suite(y, "bound37", 1).pass);
    CHECK_THROWS_AS(verify_suite(x12, "xyz", 0), UnknownSuite);

    Isocrystal x03 = standard_form(3, {{rat(0), 1}, {rat(1, 2), 2}});
    for (const auto& suite : {"prop1", "thm2", "remark6"}) {
        VerificationReport rep = verify_suite(x03, suite, 5);
        for (const auto& ch : rep.checks) {
            INFO("x03 ", suite, "/", ch.name, ": ", ch.witness);
            CHECK(ch.pass);
        }
        CHECK(rep.pass);
    }
}

TEST_CASE("displacement dominates the slope norm on random points") {
    std::mt19937_64 rng(2024);
    for (auto slopes : {std::vector<std::pair<Rat, long>>{{rat(1, 3), 3}},
                        {{rat(0), 1}, {rat(1), 1}},
                        {{rat(1, 2), 2}, {rat(1), 1}}}) {
        for (long p : {2L, 3L}) {
            Isocrystal x = standard_form(p, slopes);
            Rat bound = min_nu(x);
            for (int t = 0; t < 15; ++t) {
                std::vector<Rat> c;
                for (long i = 0; i < x.n(); ++i) c.push_back(rat((long)(rng() % 25) - 12, 4));
                Norm a(Mat::identity(x.ctx(), x.n()), c, 0);
                if (t % 2) a = group_act(sample_unimodular(x.ctx(), x.n(), rng), a);
                CHECK(displacement_squared(x, a) >= bound);
            }
        }
    }
}

TEST_CASE("conjugation transports minimizers") {
    Isocrystal x12 = standard_form(3, {{rat(1, 2), 2}});
    Ctx F9 = make_field(3, 2, 40, 1);
    std::mt19937_64 rng(31337);
    Norm mp = min_point(x12, {rat(0)});
    for (int t = 0; t < 6; ++t) {
        Mat g = sample_unimodular(F9, 2, rng);
        Isocrystal xc = sigma_conjugate(x12, g);
        auto decc = isocline_decomposition(xc);
        CHECK(is_in_min(xc, decc, group_act(g, mp)));
        CHECK(min_nu(xc) == min_nu(x12));
    }
}
