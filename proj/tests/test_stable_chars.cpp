#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"

#include "isotypy/exact_linalg.hpp"
#include "isotypy/json_io.hpp"
#include "isotypy/stable_chars.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>

using namespace isotypy;

using namespace oracle;

TEST_CASE("character tables") {
    CycMatrix k4 = irr_table(2, DefectShape::ElementaryAbelian);
    REQUIRE(k4.rows() == 4);
    CHECK(k4.is_rational());
    CHECK(k4.to_int() == IntMatrix({{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}}));
    for (long p : {2L, 3L, 5L})
        for (DefectShape s : {DefectShape::ElementaryAbelian, DefectShape::Cyclic}) {
            CycMatrix t = irr_table(p, s);
            CHECK(t * t.conj().transpose() == CycMatrix(IntMatrix::identity(p * p) * Int(p * p)).lift(t.conductor()));
            for (long x = 0; x < p * p; ++x) CHECK(t(0, x) == CycInt(1).lift(t.conductor()));
            for (long j = 0; j < p * p; ++j)
                for (long x = 0; x < p * p; ++x)
                    CHECK(t(j, x) == CycInt::zeta(static_cast<unsigned>(order_n(p, s)), pairing(j, x, p, s)).lift(t.conductor()));
        }
    CycMatrix t3 = irr_table(3, DefectShape::ElementaryAbelian);
    for (long j = 1; j < 9; ++j) {
        CycInt s(0);
        for (long x = 0; x < 9; ++x) s = s + t3(j, x);
        CHECK(s.is_zero());
    }
}

TEST_CASE("singleton partition gives all of Irr(D)") {
    for (long p : {2L, 3L}) {
        FusionPartition f{p, DefectShape::ElementaryAbelian, {}};
        for (long x = 0; x < p * p; ++x) f.classes.push_back({x});
        auto b = stable_basis(f);
        CHECK(b.size() == static_cast<std::size_t>(p * p));
        CHECK(is_unimodular(coord_matrix(b, p * p)));
    }
}

TEST_CASE("rank equals class count on random power-closed partitions") {
    std::mt19937 rng(71);
    int tried = 0;
    for (long p : {2L, 3L, 5L})
        for (DefectShape s : {DefectShape::ElementaryAbelian, DefectShape::Cyclic})
            for (int t = 0; t < 10; ++t, ++tried) {
                FusionPartition f = random_partition(rng, p, s);
                REQUIRE(f.valid());
                auto basis = stable_basis(f);
                CAPTURE(p);
                CHECK(basis.size() == f.classes.size());
                IntMatrix m = coord_matrix(basis, p * p);
                for (const auto& d : elementary_divisors(m)) CHECK(d == 1);
                for (const auto& ch : basis) {
                    // constant on classes, by independent evaluation
                    std::vector<long> y;
                    for (const auto& c : ch.coords) y.push_back(c.get_si());
                    CHECK(stable_by_evaluation(y, f));
                    auto nz = std::find_if(ch.coords.begin(), ch.coords.end(), [](const Int& v) { return v != 0; });
                    REQUIRE(nz != ch.coords.end());
                    CHECK(*nz > 0);
                    CHECK(ch.values_on_reps.size() == f.classes.size());
                }
            }
    CHECK(tried >= 50);
}

TEST_CASE("stable lattice matches a brute-force box search") {
    std::mt19937 rng(72);
    std::vector<FusionPartition> cases;
    for (DefectShape s : {DefectShape::ElementaryAbelian, DefectShape::Cyclic}) {
        for (int t = 0; t < 4; ++t) cases.push_back(random_partition(rng, 2, s));
        for (int t = 0; t < 3; ++t) cases.push_back(random_partition(rng, 3, s));
    }
    cases.push_back(partition_from_json(load_json(testutil::fixture("partitions/d8_p3.json"))));
    for (const auto& f : cases) {
        const long n = f.p * f.p;
        std::size_t found = 0;
        IntMatrix brute = brute_force_lattice(f, 2, found);
        IntMatrix basis = coord_matrix(stable_basis(f), n);
        CAPTURE(f.p);
        CAPTURE(f.classes.size());
        CHECK(found > 1);
        // every box vector lies in the lattice, and the lattice is spanned by box vectors
        CHECK(express_in_basis(basis, brute).has_value());
        CHECK(express_in_basis(brute, basis).has_value());
    }
}

TEST_CASE("a partition that is not power-closed has smaller rank") {
    // p = 3: {0}, {(0,1)}, everything else; (0,1) and (0,2) are split
    FusionPartition f{3, DefectShape::ElementaryAbelian, {{0}, {1}, {2, 3, 4, 5, 6, 7, 8}}};
    REQUIRE(f.valid());
    auto b = stable_basis(f);
    CHECK(b.size() < f.classes.size());
    for (const auto& ch : b) {
        std::vector<long> y;
        for (const auto& c : ch.coords) y.push_back(c.get_si());
        CHECK(stable_by_evaluation(y, f));
    }
    // its power-map coarsening merges {1} into the class of 2
    FusionPartition r = rational_coarsening(f);
    CHECK(r.classes.size() == 2);
    CHECK(stable_basis(r).size() == 2);
}

TEST_CASE("D8 orbits on F_3^2 carry the character (0, 3, 6)") {
    FusionPartition f = partition_from_json(load_json(testutil::fixture("partitions/d8_p3.json")));
    auto basis = stable_basis(f);
    CHECK(basis.size() == 3);
    auto y = coords_of(f, {0, 3, 6});
    REQUIRE(y);
    CHECK(express_in_basis(coord_matrix(basis, 9), *y).has_value());
    CHECK_FALSE(coords_of(f, {0, 1, 2}).has_value());
    CHECK(rational_stable_basis(f).size() == 3);
}

TEST_CASE("the orbit partition of Z4 wr Z2 carries the character (5, 0, -5)") {
    auto local = load_fixture(testutil::fixture("local/Z4wrZ2.json"));
    InertialCandidate c = orbit_analysis(closure(local.generators, 5), 5);
    FusionPartition f = orbit_partition(c);
    CHECK(f.valid());
    CHECK(f.classes.size() == 3);
    auto basis = stable_basis(f);
    CHECK(basis.size() == 3);
    // values indexed by the class holding each representative
    auto class_of = [&](const Vec2& v) {
        long x = vec_index(v, 5);
        for (std::size_t i = 0; i < f.classes.size(); ++i)
            if (std::find(f.classes[i].begin(), f.classes[i].end(), x) != f.classes[i].end()) return i;
        return f.classes.size();
    };
    std::vector<long> vals(3, 0);
    vals[0] = 5;
    auto block = testutil::block("fi24_p5");
    REQUIRE(class_of(block.reps.at("u")) != class_of(block.reps.at("v")));
    vals[class_of(block.reps.at("u"))] = 0;
    vals[class_of(block.reps.at("v"))] = -5;
    auto y = coords_of(f, vals);
    REQUIRE(y);
    CHECK(express_in_basis(coord_matrix(basis, 25), *y).has_value());
}

TEST_CASE("congruences from stable characters") {
    auto reg = congruence_from_stable({{"1", Int(25)}, {"u", Int(0)}, {"v", Int(0)}}, 5);
    REQUIRE(reg.size() == 1);
    CHECK(reg[0].trivial());

    auto triv = congruence_from_stable({{"1", Int(1)}, {"u", Int(1)}, {"v", Int(1)}}, 5);
    REQUIRE(triv.size() == 1);
    CHECK(triv[0].modulus == 25);
    CHECK(triv[0].coeffs == std::vector<Int>{1, 1, 1});

    // 15 M_1 + 5 M_u + 5 M_u2 integral: 3 * 25 M_1 + 25 M_u + 25 M_u2 == 0 (mod 5),
    // that is 2 * 25 M_1 == 25 M_u + 25 M_u2
    auto suz = congruence_from_stable(
        {{"1", Int(15)}, {"u", Int(5)}, {"u2", Int(5)}, {"v", Int(0)}, {"v2", Int(0)}}, 5);
    REQUIRE(suz.size() == 1);
    CHECK(suz[0].modulus == 5);
    CHECK(suz[0].labels == std::vector<std::string>{"1", "u", "u2", "v", "v2"});
    CHECK(suz[0].coeffs == std::vector<Int>{3, 1, 1, 0, 0});
    CHECK_FALSE(suz[0].str().empty());

    // (0, 3, 6) at p = 3: 3 (9 M_u) + 6 (9 M_v) == 0 (mod 9), i.e. 9 M_u == 9 M_v (mod 3)
    auto d8 = congruence_from_stable({{"1", Int(0)}, {"u", Int(3)}, {"v", Int(6)}}, 3);
    CHECK(d8[0].modulus == 3);
    CHECK(d8[0].coeffs == std::vector<Int>{0, 1, 2});
}
