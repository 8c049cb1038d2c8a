#include "doctest.h"
#include "test_util.hpp"

#include "isotypy/block_model.hpp"
#include "isotypy/exact_linalg.hpp"

using namespace isotypy;
using testutil::error_code;

TEST_CASE("Cartan matrices of the displayed examples") {
    CHECK(cartan_cyclic_defect(3, 2) == IntMatrix({{2, 1}, {1, 2}}) * Int(3));
    CHECK(cartan_cyclic_defect(5, 2) == IntMatrix({{3, 2}, {2, 3}}) * Int(5));
    CHECK(cartan_cyclic_defect(7, 1) == IntMatrix({{49}}));
    CHECK(cartan_cyclic_defect(3, 1) == IntMatrix({{9}}));
}

TEST_CASE("invalid orbit sizes") {
    CHECK(error_code([] { cartan_cyclic_defect(5, 3); }) == "invalid-orbit");
    CHECK(error_code([] { cartan_cyclic_defect(7, 0); }) == "invalid-orbit");
    CHECK(error_code([] { gamma_canonical(7, 4); }) == "invalid-orbit");
}

TEST_CASE("canonical Gamma realizes the Cartan matrix") {
    for (long p : {3L, 5L, 7L})
        for (long e = 1; e <= p - 1; ++e) {
            if ((p - 1) % e != 0) continue;
            IntMatrix g = gamma_canonical(p, e);
            CAPTURE(p);
            CAPTURE(e);
            CHECK(g.rows() == static_cast<std::size_t>(p * (e + (p - 1) / e)));
            CHECK(g.cols() == static_cast<std::size_t>(e));
            CHECK(g.transpose() * g == cartan_cyclic_defect(p, e));
            // elementary divisors of C_u: p^(e-1) times p * p
            auto d = elementary_divisors(cartan_cyclic_defect(p, e));
            CHECK(d.back() == Int(p * p));
            for (std::size_t i = 0; i + 1 < d.size(); ++i) CHECK(d[i] == Int(p));
        }
}

TEST_CASE("contribution of a single column") {
    Contribution m = contribution(IntMatrix{{1}, {2}, {2}}, IntMatrix{{9}}, 3);
    CHECK(m.p == 3);
    CHECK(m.scaled == IntMatrix({{1, 2, 2}, {2, 4, 4}, {2, 4, 4}}));
    // idempotent after scaling, trace p^2 * e
    CHECK(m.scaled * m.scaled == m.scaled * Int(9));
    CHECK(m.scaled.trace() == 9);
}

TEST_CASE("contribution rejects bad input") {
    CHECK(error_code([] { contribution(IntMatrix{{1}, {2}}, IntMatrix{{9}}, 3); }) == "model-violation");
    // (3, 0): diagonal entry 9 divisible by 3
    CHECK(error_code([] { contribution(IntMatrix{{3}, {0}}, IntMatrix{{9}}, 3); }) == "height-zero-violation");
}

TEST_CASE("Co1 final family sums to p^2 I") {
    auto fx = testutil::block("co1_p5");
    IntMatrix c = cartan_cyclic_defect(5, 2);
    const json& fin = fx.expected.at("final");
    Contribution mu = contribution(int_matrix_from_json(fin.at("u")), c, 5);
    Contribution mv = contribution(int_matrix_from_json(fin.at("v")), c, 5);
    Contribution m1{5, *fx.known_m1};
    CHECK(contribution_sum_check({m1, mu, mv}));
    CHECK_FALSE(contribution_sum_check({m1, mu}));
    CHECK(star_congruence_check(mu, mv, Int(1), Int(-1), Int(5)));
    CHECK_FALSE(star_congruence_check(m1, mu, Int(1), Int(-1), Int(5)));
}

TEST_CASE("Suz final family over Z[rho] sums to p^2 I") {
    auto fx = testutil::block("suz_p5");
    const json& fin = fx.expected.at("final");
    IntMatrix c = cartan_cyclic_defect(5, 2);
    std::vector<CycContribution> parts;
    for (const char* w : {"u", "v"}) {
        CycMatrix q = cyc_matrix_from_json(fin.at(w));
        parts.push_back(contribution(q, c, 5));
        parts.push_back(contribution(q.galois(3), c, 5));  // rho -> -1 - rho
    }
    CHECK(contribution_sum_check({Contribution{5, *fx.known_m1}}, parts));
    CHECK_FALSE(contribution_sum_check({Contribution{5, *fx.known_m1}}, {parts[0], parts[1]}));
}

TEST_CASE("star congruence") {
    Contribution a{3, IntMatrix{{1, 2}, {2, 4}}};
    Contribution b{3, IntMatrix{{2, 1}, {1, 2}}};
    CHECK(star_congruence_check(a, b, Int(2), Int(-1), Int(3)));
    CHECK_FALSE(star_congruence_check(a, b, Int(1), Int(-1), Int(3)));
    CHECK(error_code([&] { star_congruence_check(a, Contribution{3, IntMatrix{{1}}}, Int(1), Int(1), Int(3)); }) ==
          "shape-mismatch");
}

TEST_CASE("lower defect bound") {
    auto fx = testutil::block("co1_p5");
    IntMatrix c1 = fx.q1_display->transpose() * *fx.q1_display;
    CHECK(lower_defect_bound_check(c1, 5, 16, 12, 2));
    CHECK_FALSE(lower_defect_bound_check(c1, 5, 16, 12, 3));
    CHECK(lower_defect_bound_check(IntMatrix::identity(3), 3, 9, 3, 6));
}

TEST_CASE("block spec invariants") {
    BlockSpec s;
    s.p = 5;
    s.k = 16;
    s.l = 12;
    s.inertial_order = 24;
    s.orbits = {{"u", 2, 0, {}, {}}, {"v", 2, 0, {}, {}}};
    CHECK(s.violations().empty());
    CHECK(s.orbit("v").e == 2);

    BlockSpec bad = s;
    bad.orbits[0].e = 3;
    CHECK_FALSE(bad.violations().empty());

    bad = s;
    bad.k = 17;
    CHECK_FALSE(bad.violations().empty());

    bad = s;
    bad.p = 6;
    CHECK_FALSE(bad.violations().empty());

    bad = s;
    bad.inertial_order = 48;  // orbit sizes 24 + 24 != 24
    CHECK_FALSE(bad.violations().empty());

    bad = s;
    bad.q1 = IntMatrix::zero(16, 12);
    CHECK_FALSE(bad.violations().empty());
}

TEST_CASE("every shipped block spec is consistent") {
    for (const char* id : {"co1_p5", "bm_p7", "fi24_p5", "suz_p5", "p3_z8", "p3_q8", "p3_sd16", "p3_d8"}) {
        CAPTURE(id);
        auto fx = testutil::block(id);
        CHECK(fx.spec.violations().empty());
    }
}

TEST_CASE("primality") {
    CHECK(is_prime(2));
    CHECK(is_prime(7));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(9));
}
