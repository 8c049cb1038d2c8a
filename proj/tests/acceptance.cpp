// One line per acceptance criterion; exit status 1 if any fails.

#include "oracles.hpp"
#include "test_util.hpp"

#include "isotypy/block_model.hpp"
#include "isotypy/embeddings.hpp"
#include "isotypy/equivalence.hpp"
#include "isotypy/exact_linalg.hpp"
#include "isotypy/inertial.hpp"
#include "isotypy/json_io.hpp"
#include "isotypy/pipeline.hpp"
#include "isotypy/placement.hpp"
#include "isotypy/stable_chars.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>

using namespace isotypy;
using namespace oracle;

namespace {

struct Check {
    std::ostringstream detail;
    bool ok = true;

    // records the first failure only
    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail << "failed: " << what;
        }
    }
};

int failures = 0;

void criterion(int n, const std::string& title, double limit_s, const std::function<void(Check&)>& body) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const Error& e) {
        c.require(false, e.code() + ": " + e.what());
    } catch (const std::exception& e) {
        c.require(false, e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && secs > limit_s) c.require(false, "time limit exceeded");
    if (!c.ok) ++failures;
    char limit[32] = "exact";
    if (limit_s > 0) std::snprintf(limit, sizeof limit, "< %g s", limit_s);
    std::printf("criterion %2d  %s  %8.3f s (%s)  %s  %s\n", n, c.ok ? "PASS" : "FAIL", secs, limit, title.c_str(),
                c.detail.str().c_str());
    std::fflush(stdout);
}

EmbeddingProblem problem(const std::string& name) {
    return problem_from_json(load_json(testutil::fixture("problems/" + name + ".json")));
}

std::set<IntMatrix> canonical_set(const json& arr) {
    std::set<IntMatrix> out;
    for (const auto& c : arr) out.insert(canonical_form(int_matrix_from_json(c)));
    return out;
}

// Certified family against the published one, both together with Q1, under one witness.
bool matches_published(const BlockFixture& fx, const IsotypyCertificate& cert, std::string& note) {
    std::map<std::string, CycMatrix> want, got;
    const json& fin = fx.expected.at("final");
    for (auto it = fin.begin(); it != fin.end(); ++it) {
        want[it.key()] = cyc_matrix_from_json(it.value());
        got[it.key()] = cert.qu_family.at(it.key());
    }
    want["1"] = CycMatrix(cert.q1);
    got["1"] = CycMatrix(cert.q1);
    auto w = family_unique(want, got, fx.spec.p, fx.label_symmetries);
    if (!w || !verify_witness(want, got, *w)) return false;
    std::ostringstream s;
    s << "witness perm [";
    for (std::size_t i = 0; i < w->perm.size(); ++i) s << (i ? " " : "") << w->perm[i];
    s << "]";
    note = s.str();
    return true;
}

std::vector<QuadRow> as_rows(const IntMatrix& x) {
    std::vector<QuadRow> out;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        QuadRow r;
        for (std::size_t j = 0; j < x.cols(); ++j) r.push_back({x(i, j).get_si(), 0});
        out.push_back(r);
    }
    return out;
}

void cartan_formula(Check& c) {
    c.require(cartan_cyclic_defect(3, 2) == IntMatrix({{6, 3}, {3, 6}}), "C(3, 2)");
    c.require(cartan_cyclic_defect(5, 2) == IntMatrix({{15, 10}, {10, 15}}), "C(5, 2)");
    int pairs = 0;
    for (long p : {3L, 5L, 7L})
        for (long e = 1; e < p; ++e) {
            if ((p - 1) % e != 0) continue;
            IntMatrix g = gamma_canonical(p, e);
            c.require(g.transpose() * g == cartan_cyclic_defect(p, e),
                      "Gamma^T Gamma for p = " + std::to_string(p) + ", e = " + std::to_string(e));
            ++pairs;
        }
    c.detail << pairs << " pairs (p, e)";
}

void plesken_counts(Check& c) {
    const std::vector<std::pair<std::string, IntMatrix>> cases = {
        {"c9_k3", IntMatrix{{1}, {2}, {2}}},
        {"c9_k6", IntMatrix{{1}, {1}, {1}, {1}, {1}, {2}}},
        {"c9_k9", IntMatrix{{1}, {1}, {1}, {1}, {1}, {1}, {1}, {1}, {1}}},
    };
    for (const auto& [name, x] : cases) {
        EmbeddingProblem pr = problem(name);
        c.require(pr.c == IntMatrix{{9}} && pr.p == 3, name + " is not C = [9], p = 3");
        auto set = enumerate(pr);
        c.require(set.solutions.size() == 1, name + ": solution count");
        c.require(!set.solutions.empty() && set.solutions[0] == canonical_form(x), name + ": solution");
    }
    c.detail << "k = 3, 6, 9: one solution each";
}

void co1_case(Check& c) {
    auto fx = testutil::block("co1_p5");
    EmbeddingProblem pr = problem("co1_u");
    c.require(pr.c == cartan_cyclic_defect(5, 2) && pr.k == 16 && pr.diag_bound == 7, "problem shape");
    auto set = enumerate(pr);
    c.require(set.solutions.size() == 2, "canonical count " + std::to_string(set.solutions.size()));
    c.require(std::set<IntMatrix>(set.solutions.begin(), set.solutions.end()) == canonical_set(fx.expected.at("candidates")),
              "candidates differ from the displayed ones");
    auto cert = verify_block(fx);
    c.require(cert.certified(), "verify_block: " + cert.reason);
    c.require(cert.survivors == 1, "survivors " + std::to_string(cert.survivors));
    c.require(cert.family_unique, "family not unique");
    std::string note;
    c.require(cert.certified() && matches_published(fx, cert, note), "final family differs from the display");
    c.detail << set.solutions.size() << " candidates, " << cert.survivors << " survivor; " << note;
}

void bm_case(Check& c) {
    auto fx = testutil::block("bm_p7");
    EmbeddingProblem pr = problem("bm_u");
    c.require(pr.k == 27 && pr.c.rows() == 3 && pr.c == cartan_cyclic_defect(7, 3), "problem shape");
    auto set = enumerate(pr);
    c.require(set.solutions.size() == 6, "canonical count " + std::to_string(set.solutions.size()));
    std::vector<IntMatrix> want;
    for (const auto& x : fx.expected.at("candidates")) want.push_back(canonical_form(int_matrix_from_json(x)));
    c.require(std::set<IntMatrix>(set.solutions.begin(), set.solutions.end()) ==
                  std::set<IntMatrix>(want.begin(), want.end()),
              "candidates differ from the displayed ones");

    CongruenceContext ctx;
    ctx.p = 7;
    ctx.q1 = derive_q1(fx);
    ctx.m1_scaled = *fx.known_m1;
    ctx.label = "u";
    ctx.derived = "v";
    ctx.derived_cartan = cartan_cyclic_defect(7, 3);
    ctx.congruences = {Congruence{{"1", "u"}, {Int(3), Int(6)}, Int(7)},
                       Congruence{{"u", "v"}, {Int(1), Int(6)}, Int(7)}};
    auto diag = filter_by_congruences(set, ctx);
    ctx.sum_relation = true;
    auto full = filter_by_congruences(set, ctx);
    c.require(full.solutions.size() == 1 && full.solutions[0] == want.at(0), "the first candidate is not the survivor");

    auto cert = verify_block(fx);
    c.require(cert.certified(), "verify_block: " + cert.reason);
    std::string note;
    c.require(cert.certified() && matches_published(fx, cert, note), "final family differs from the display");
    c.detail << set.solutions.size() << " candidates, " << diag.solutions.size() << " on the diagonals, "
             << full.solutions.size() << " placed; " << note;
}

void fi24_case(Check& c) {
    auto fx = testutil::block("fi24_p5");
    IntMatrix cv = cartan_cyclic_defect(5, 2);
    EmbeddingProblem pr;
    pr.c = cv;
    pr.k = 20;
    pr.p = 5;
    pr.diag_bound = fx.expected.at("diag_bound").get<long>();
    auto set = enumerate(pr);
    c.require(set.solutions.size() == 1, "Q_v count " + std::to_string(set.solutions.size()));
    c.require(!set.solutions.empty() && set.solutions[0] ==
                                            canonical_form(int_matrix_from_json(fx.expected.at("candidates").at(0))),
              "Q_v differs from the display");
    if (set.solutions.empty()) return;

    PlacementProblem pp;
    pp.p = 5;
    pp.q1 = derive_q1(fx);
    pp.m1_scaled = *fx.known_m1;
    pp.placed.push_back(PlacedLabel{"v", cv, as_rows(set.solutions[0]), {}, {}});
    pp.derived = "u";
    pp.derived_cartan = cartan_cyclic_defect(5, 4);
    pp.congruences = {Congruence{{"1", "v"}, {Int(1), Int(4)}, Int(5)}};
    auto res = place(pp);
    c.require(!res.families.empty(), "no placement");
    const std::vector<long> m = {3, 2, -1, 1, 1, -1, -3, -1, 1, -3, 2, 1, -1, 3, -1, 3, -2, 2, -2, -1};
    for (const auto& fam : res.families) {
        const CycMatrix& mv = fam.scaled.at("v");
        bool row_ok = true;
        for (std::size_t j = 0; j < 20; ++j) row_ok = row_ok && mv(0, j).is_rational() && mv(0, j).rational_value() == m[j];
        c.require(row_ok, "first row of 25 M_v is not m");
    }

    IntMatrix qv = cyc_matrix_from_json(fx.expected.at("final").at("v")).to_int();
    IntMatrix mv = contribution(qv, cv, 5).scaled;
    IntMatrix mu = IntMatrix::identity(20) * Int(25) - *fx.known_m1 - mv;
    IntMatrix qu = reconstruct_from_contribution(Contribution{5, mu}, 5, 4);
    c.require(qu.transpose() * qu == cartan_cyclic_defect(5, 4) && projector(qu, 5) == mu, "reconstructed Q_u");
    c.require(essentially_equal(qu, cyc_matrix_from_json(fx.expected.at("final").at("u")).to_int(), 5).has_value(),
              "reconstructed Q_u differs from the display");
    c.detail << "1 candidate, m fixed over " << res.families.size() << " placements, Q_u reconstructed";
}

void suz_case(Check& c) {
    auto fx = testutil::block("suz_p5");
    const IntMatrix cp{{3, 2}, {2, 3}};
    QuadraticSplitProblem qp;
    qp.g11 = cp * Int(3);
    qp.g22 = cp * Int(2);
    qp.g12 = cp;
    qp.k = 14;
    qp.rational_rows = 6;
    auto splits = solve_quadratic_split(qp);
    c.require(splits.size() == static_cast<std::size_t>(fx.expected.at("split_count").get<long>()), "split count");
    IntMatrix r2 = int_matrix_from_json(fx.expected.at("r2"));
    bool found = false;
    for (const auto& s : splits) {
        c.require(s.r1.transpose() * s.r1 == qp.g11 && s.r2.transpose() * s.r2 == qp.g22 &&
                      s.r1.transpose() * s.r2 == qp.g12,
                  "split Gram matrices");
        found = found || canonical_form(s.r2) == canonical_form(r2);
    }
    c.require(found, "displayed R2 not among the splits");

    for (const char* label : {"u", "v"}) {
        CycMatrix q = cyc_matrix_from_json(fx.expected.at("final").at(label));
        IntMatrix r1f(q.rows(), q.cols()), r2f(q.rows(), q.cols());
        for (std::size_t i = 0; i < q.rows(); ++i)
            for (std::size_t j = 0; j < q.cols(); ++j) {
                QuadInt v = from_cyc(q(i, j));
                r1f(i, j) = v.x;
                r2f(i, j) = v.y;
            }
        c.require(r1f.transpose() * r1f + r2f.transpose() * r2f == cartan_cyclic_defect(5, 2),
                  std::string("R1^T R1 + R2^T R2 for ") + label);
        c.require(r2f.transpose() * r2f == r1f.transpose() * r2f + r2f.transpose() * r1f,
                  std::string("R2^T R2 = R1^T R2 + R2^T R1 for ") + label);
    }
    auto cert = verify_block(fx);
    c.require(cert.certified(), "verify_block: " + cert.reason);
    std::string note;
    c.require(cert.certified() && matches_published(fx, cert, note), "final family differs from the display");
    c.detail << splits.size() << " splits; " << note;
}

void stable_lemma(Check& c) {
    std::mt19937 rng(2024);
    int partitions = 0, brute = 0;
    for (long p : {2L, 3L, 5L})
        for (DefectShape s : {DefectShape::ElementaryAbelian, DefectShape::Cyclic})
            for (int t = 0; t < 10; ++t) {
                FusionPartition f = random_partition(rng, p, s);
                auto basis = stable_basis(f);
                ++partitions;
                c.require(basis.size() == f.classes.size(), "rank differs from the class count");
                IntMatrix m = coord_matrix(basis, p * p);
                for (const auto& d : elementary_divisors(m)) c.require(d == 1, "basis is not saturated");
                if (p == 5) continue;
                std::size_t found = 0;
                IntMatrix box = brute_force_lattice(f, 2, found);
                c.require(express_in_basis(m, box).has_value() && express_in_basis(box, m).has_value(),
                          "lattice differs from the box search");
                ++brute;
            }
    c.detail << partitions << " partitions, " << brute << " against the box search";
}

void sieve_rows(Check& c) {
    struct Row {
        long p, k, l;
        const char* name;
        long n_p;
    };
    const Row rows[] = {
        {5, 16, 12, "Z4xS3", 2},  {5, 20, 16, "SL(2,3):Z4", 3}, {5, 16, 14, "SL(2,3):Z2", 1},
        {5, 20, 14, "Z4wrZ2", 4}, {5, 14, 6, "D12", 2},         {7, 27, 24, "2.S4-xZ3", 2},
        {7, 27, 21, "SL(2,3)xZ3", 4},
    };
    auto cat = build_catalogue(catalogue_from_json(load_json(testutil::fixture("inertial_catalogue.json"))));
    for (const auto& r : rows) {
        std::vector<InertialCandidate> same_p;
        for (const auto& x : cat)
            if (x.p == r.p) same_p.push_back(x);
        auto kept = sieve_candidates(same_p, r.k, r.l, r.n_p);
        bool in = false;
        for (const auto& x : kept) in = in || x.name == r.name;
        c.require(in, std::string(r.name) + " is sieved out");
    }
    c.detail << std::size(rows) << " rows";
}

void contribution_algebra(Check& c) {
    int blocks = 0, locals = 0;
    for (const auto& e : std::filesystem::directory_iterator(testutil::fixture("blocks"))) {
        auto fx = load_fixture(e.path().string());
        auto cert = verify_block(fx);
        c.require(cert.certified(), fx.id + " is not certified");
        if (!cert.certified()) continue;
        auto viol = contribution_algebra_violations(cert.m1_scaled, scaled_family(cert.qu_family, fx.spec), fx.spec);
        c.require(viol.empty(), fx.id + ": " + (viol.empty() ? std::string() : viol.front()));
        ++blocks;
    }
    for (const auto& e : std::filesystem::directory_iterator(testutil::fixture("local"))) {
        auto loc = load_fixture(e.path().string());
        IntMatrix q1 = derive_q1(loc);
        IntMatrix m1 = contribution(q1, q1.transpose() * q1, loc.spec.p).scaled;
        auto viol = contribution_algebra_violations(m1, scaled_family(loc.known_qu, loc.spec), loc.spec);
        c.require(viol.empty(), loc.id + ": " + (viol.empty() ? std::string() : viol.front()));
        ++locals;
    }
    c.detail << blocks << " blocks, " << locals << " local models";
}

void equivalence_search(Check& c) {
    std::mt19937 rng(99);
    int recovered = 0;
    for (int t = 0; t < 100; ++t) {
        std::size_t k = 3 + rng() % 18, l = 1 + rng() % 3;
        if (l >= k) l = k - 1;
        IntMatrix x1 = random_embedding(rng, k, l);
        auto [perm, signs] = random_signed(rng, k);
        IntMatrix x2 = apply_signed(x1, perm, signs) * random_unimodular(rng, l);
        auto w = essentially_equal(x1, x2, 5);
        if (w && witness_holds(*w, x1, x2)) ++recovered;
    }
    c.require(recovered == 100, "planted recovered " + std::to_string(recovered) + "/100");
    int agree = 0, compared = 0, equal = 0;
    for (int t = 0; t < 60; ++t) {
        std::size_t k = 3 + rng() % 6, l = 1 + rng() % 2;
        IntMatrix x1 = random_embedding(rng, k, l);
        auto [perm, signs] = random_signed(rng, k);
        IntMatrix x2 = apply_signed(x1, perm, signs) * random_unimodular(rng, l);
        if (t % 2 == 1) {
            x2(rng() % k, rng() % l) += (rng() % 2 ? 1 : -1);
            if (!integral_left_inverse(x2) || rank(x2) != l) continue;
        }
        auto w = essentially_equal(x1, x2, 3);
        const bool b = brute_equivalent(x1, x2);
        ++compared;
        if (w.has_value() == b && (!w || witness_holds(*w, x1, x2))) ++agree;
        if (b) ++equal;
    }
    c.require(agree == compared, "brute force disagrees on " + std::to_string(compared - agree) + " cases");
    c.detail << recovered << " planted; " << agree << "/" << compared << " match brute force (" << equal
             << " equivalent)";
}

}  // namespace

int main() {
    criterion(1, "Cartan matrices and Gamma_1", 1, cartan_formula);
    criterion(2, "C = [9] enumeration counts", 1, plesken_counts);
    criterion(3, "Co1 block", 30, co1_case);
    criterion(4, "BM block", 300, bm_case);
    criterion(5, "3.Fi24' block", 60, fi24_case);
    criterion(6, "2.Suz.2 quadratic split", 60, suz_case);
    criterion(7, "stable characters", 120, stable_lemma);
    criterion(8, "inertial quotient sieve", 1, sieve_rows);
    criterion(9, "contribution algebra", 0, contribution_algebra);
    criterion(10, "equivalence search", 300, equivalence_search);
    std::printf("%s: %d failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
