#include "isotypy/pipeline.hpp"

#include "isotypy/embeddings.hpp"
#include "isotypy/errors.hpp"
#include "isotypy/exact_linalg.hpp"
#include "isotypy/placement.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <set>

namespace isotypy {

namespace {

Vec2 vec_from_json(const json& j) {
    auto v = j.get<std::vector<long>>();
    if (v.size() != 2) throw Error("schema", "representative must have two coordinates");
    return {static_cast<std::int32_t>(v[0]), static_cast<std::int32_t>(v[1])};
}

long to_long(const Int& v) {
    if (!v.fits_slong_p()) throw Error("overflow", "value does not fit a machine word");
    return v.get_si();
}

CycMatrix gram(const CycMatrix& q) { return q.transpose() * q.conj(); }

long orbit_e(const BlockSpec& s, const std::string& label) { return s.orbit(label).e; }

QuadRow quad_row(const IntMatrix& r1, const IntMatrix& r2, std::size_t i) {
    QuadRow row;
    for (std::size_t j = 0; j < r1.cols(); ++j) row.push_back({to_long(r1(i, j)), to_long(r2(i, j))});
    return row;
}

QuadRow sigma_row(const QuadRow& r) {
    QuadRow out;
    for (const auto& v : r) out.push_back(v.sigma());
    return out;
}

PlacedLabel rational_label(const std::string& label, const IntMatrix& x) {
    PlacedLabel w;
    w.label = label;
    w.cartan = x.transpose() * x;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        QuadRow r;
        for (std::size_t j = 0; j < x.cols(); ++j) r.push_back({to_long(x(i, j)), 0});
        w.singles.push_back(std::move(r));
    }
    return w;
}

PlacedLabel split_label(const std::string& label, const QuadraticSplit& s, long rational_rows, const IntMatrix& cartan,
                        const std::optional<std::string>& conjugate) {
    PlacedLabel w;
    w.label = label;
    w.cartan = cartan;
    w.conjugate_label = conjugate;
    for (long i = 0; i < rational_rows; ++i) w.singles.push_back(quad_row(s.r1, s.r2, static_cast<std::size_t>(i)));
    for (std::size_t i = static_cast<std::size_t>(rational_rows); i + 1 < s.r1.rows(); i += 2) {
        QuadRow a = quad_row(s.r1, s.r2, i);
        w.pairs.emplace_back(a, sigma_row(a));
    }
    return w;
}

// Smallest p^2 m over admissible rows for Cartan c.
long min_scaled_m(const IntMatrix& c, long k, long p) {
    EmbeddingProblem ep;
    ep.c = c;
    ep.k = k;
    ep.p = p;
    auto rows = candidate_rows(ep);
    if (rows.empty()) throw Error("no-candidate", "no admissible row for a Cartan matrix");
    long m = rows.front().scaled_m;
    for (const auto& r : rows) m = std::min(m, r.scaled_m);
    return m;
}

std::vector<long> sorted_e(const BlockSpec& s) {
    std::vector<long> e;
    for (const auto& o : s.orbits) e.push_back(o.e);
    std::sort(e.begin(), e.end());
    return e;
}

}  // namespace

BlockFixture fixture_from_json(const json& j, const std::string& id) {
    BlockFixture f;
    f.id = id;
    f.name = j.value("name", j.value("group", id));
    f.source = j.value("source", std::string());
    f.spec = block_spec_from_json(j);
    if (j.contains("n_p") && !j.at("n_p").is_null()) f.n_p = j.at("n_p").get<long>();
    for (const auto& o : j.value("orbits", json::array()))
        if (o.contains("rep")) f.reps[o.at("label").get<std::string>()] = vec_from_json(o.at("rep"));
    if (j.contains("psingular") && !j.at("psingular").is_null()) {
        const json& ps = j.at("psingular");
        if (ps.empty())
            f.psingular = CycMatrix(static_cast<std::size_t>(f.spec.k), 0);
        else
            f.psingular = cyc_matrix_from_json(ps);
        if (static_cast<long>(f.psingular->rows()) != f.spec.k) throw Error("schema", "psingular must have k rows");
    }
    if (j.contains("q1_display")) f.q1_display = int_matrix_from_json(j.at("q1_display"));
    if (j.contains("m1_scaled")) f.known_m1 = int_matrix_from_json(j.at("m1_scaled"));
    if (j.contains("local")) f.local_path = j.at("local").get<std::string>();
    for (const auto& g : j.value("generators", json::array())) {
        auto m = g.get<std::vector<std::vector<long>>>();
        f.generators.push_back(glp2(m.at(0).at(0), m.at(0).at(1), m.at(1).at(0), m.at(1).at(1), f.spec.p));
    }
    if (j.contains("qu"))
        for (const auto& [label, m] : j.at("qu").items()) f.known_qu[label] = cyc_matrix_from_json(m);
    if (j.contains("strategy")) f.strategy = j.at("strategy");
    if (j.contains("label_symmetries"))
        f.label_symmetries = j.at("label_symmetries").get<std::vector<std::map<std::string, std::string>>>();
    for (const auto& pq : j.value("p_conjugate_pairs", json::array()))
        f.p_conjugate_pairs.push_back({pq.at(0).get<std::size_t>(), pq.at(1).get<std::size_t>()});
    if (j.contains("expected")) f.expected = j.at("expected");
    return f;
}

BlockFixture load_fixture(const std::string& path) {
    return fixture_from_json(load_json(path), std::filesystem::path(path).stem().string());
}

std::string fixture_root() {
    if (const char* env = std::getenv("ISOTYPY_FIXTURES"); env && *env) return env;
    return ISOTYPY_FIXTURE_DIR;
}

IntMatrix derive_q1(const BlockFixture& f) {
    if (!f.psingular) {
        if (f.spec.q1) return *f.spec.q1;
        throw Error("missing-data", "fixture has neither p-singular values nor Q1");
    }
    IntMatrix q1 = integral_kernel_basis(rationalize(*f.psingular));
    if (static_cast<long>(q1.cols()) != f.spec.l)
        throw Error("fixture-inconsistent", "kernel rank " + std::to_string(q1.cols()) + " but l = " +
                                                std::to_string(f.spec.l));
    return q1;
}

IntMatrix reconstruct_from_contribution(const Contribution& m, long p, long l, const std::optional<IntMatrix>& cartan) {
    IntMatrix c = cartan ? *cartan : cartan_cyclic_defect(p, l);
    if (static_cast<long>(c.rows()) != l) throw Error("reconstruction-failed", "Cartan matrix is not l x l");
    auto x = reconstruct_with_cartan(m.scaled, c, p);
    if (!x) throw Error("reconstruction-failed", "no integral X with the required Gram matrix");
    return *x;
}

std::map<std::string, CycMatrix> scaled_family(const std::map<std::string, CycMatrix>& qu, const BlockSpec& spec) {
    std::map<std::string, CycMatrix> out;
    for (const auto& [label, q] : qu) {
        CycMatrix g = gram(q);
        if (!g.is_rational()) throw Error("model-violation", "Cartan matrix of " + label + " is not rational");
        out[label] = contribution(q, g.to_int(), spec.p).scaled;
    }
    return out;
}

std::vector<std::string> contribution_algebra_violations(const IntMatrix& m1_scaled,
                                                         const std::map<std::string, CycMatrix>& scaled,
                                                         const BlockSpec& spec) {
    std::vector<std::string> out;
    const long p = spec.p;
    const Int pp = p * p;
    const std::size_t k = m1_scaled.rows();
    std::map<std::string, CycMatrix> all = scaled;
    all["1"] = CycMatrix(m1_scaled);
    CycMatrix total(k, k, 1);
    for (const auto& [label, y] : all) {
        total = total + y;
        CycMatrix ypp(k, k, y.conductor());
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) ypp.set(i, j, y(i, j) * pp);
        if (y * y != ypp) out.push_back(label + ": p^2 M is not idempotent after scaling");
        CycInt tr;
        for (std::size_t i = 0; i < k; ++i) {
            tr += y(i, i);
            const CycInt& d = y(i, i);
            bool bad = d.is_rational() ? (d.rational_value() % p == 0) : d.divisible_by(Int(p));
            if (bad) {
                out.push_back(label + ": diagonal entry divisible by p");
                break;
            }
        }
        long l_u = label == "1" ? spec.l : orbit_e(spec, label);
        if (!tr.is_rational() || tr.rational_value() != pp * l_u) out.push_back(label + ": trace is not p^2 l(b_u)");
    }
    if (!total.is_rational() || total.to_int() != IntMatrix::identity(k) * pp)
        out.push_back("contributions do not sum to p^2 I");
    return out;
}

std::vector<Congruence> stable_congruences(const std::vector<Glp2Element>& generators, long p,
                                           const std::map<std::string, Vec2>& reps) {
    InertialCandidate ic = orbit_analysis(closure(generators, p), p);
    FusionPartition coarse = rational_coarsening(orbit_partition(ic));
    auto basis = stable_basis(coarse);
    auto class_of = [&](long idx) -> std::size_t {
        for (std::size_t c = 0; c < coarse.classes.size(); ++c)
            for (long x : coarse.classes[c])
                if (x == idx) return c;
        throw Error("invalid-orbit", "representative not in D");
    };
    std::vector<Congruence> out;
    for (const auto& sc : basis) {
        std::map<std::string, Int> lambda;
        lambda["1"] = sc.values_on_reps.at(0).rational_value();
        for (const auto& [label, rep] : reps)
            lambda[label] = sc.values_on_reps.at(class_of(vec_index(rep, p))).rational_value();
        for (auto& c : congruence_from_stable(lambda, p))
            if (!c.trivial()) out.push_back(std::move(c));
    }
    return out;
}

std::map<std::string, std::string> match_orbits(const BlockFixture& block, const BlockFixture& local) {
    const long p = local.spec.p;
    InertialCandidate ic = orbit_analysis(closure(local.generators, p), p);
    auto orbit_of = [&](const Vec2& v) -> long {
        for (std::size_t o = 0; o < ic.orbit_data.size(); ++o)
            if (std::binary_search(ic.orbit_data[o].members.begin(), ic.orbit_data[o].members.end(), v))
                return static_cast<long>(o);
        return -1;
    };
    std::map<std::string, std::string> out;
    for (const auto& [label, rep] : block.reps) {
        long o = orbit_of(rep);
        for (const auto& [llabel, lrep] : local.reps)
            if (o >= 0 && orbit_of(lrep) == o) out[label] = llabel;
        if (!out.count(label)) throw Error("orbit-mismatch", "no local orbit contains the representative of " + label);
    }
    return out;
}

IsotypyCertificate verify_block(const BlockFixture& fx, const BlockFixture& loc, const VerifyOptions& opt) {
    IsotypyCertificate cert;
    cert.block_id = fx.id;
    cert.spec = fx.spec;
    auto fail = [&](const std::string& reason, const std::string& detail = {}) {
        cert.verdict = "failed";
        cert.reason = reason;
        if (!detail.empty()) cert.notes.push_back(detail);
        return cert;
    };
    const BlockSpec& spec = fx.spec;
    const long p = spec.p;
    const long pp = p * p;
    const std::size_t k = static_cast<std::size_t>(spec.k);
    if (loc.spec.p != p || loc.spec.k != spec.k || loc.spec.l != spec.l || sorted_e(loc.spec) != sorted_e(spec))
        return fail("incompatible-specs", "block and correspondent differ in p, k, l or orbit data");

    try {
        // Q_1 up to basic sets, compared with the correspondent
        IntMatrix q1loc = derive_q1(loc);
        cert.q1 = derive_q1(fx);
        if (!integral_left_inverse(cert.q1) || !integral_left_inverse(q1loc))
            return fail("q1-equivalence", "Q1 has no integral left inverse");
        cert.q1_equivalence = essentially_equal(q1loc, cert.q1, p);
        if (!cert.q1_equivalence) return fail("q1-equivalence");
        const IntMatrix c1 = cert.q1.transpose() * cert.q1;
        cert.m1_scaled = contribution(cert.q1, c1, p).scaled;
        if (fx.known_m1 && *fx.known_m1 != cert.m1_scaled)
            return fail("m1-mismatch", "shipped p^2 M1 differs from the one computed from Q1");

        // structural constraints
        BlockSpec full = spec;
        full.q1 = cert.q1;
        auto viol = full.violations();
        if (!viol.empty()) return fail("model-violation", viol.front());
        const long n_p = static_cast<long>(multiplicity_of_p(c1, Int(p)));
        if (fx.n_p && *fx.n_p != n_p) return fail("lower-defect", "n_p of C1 differs from the fixture value");
        if (!lower_defect_bound_check(c1, p, spec.k, spec.l, static_cast<long>(spec.orbits.size())))
            return fail("lower-defect");
        if (!opt.catalogue.empty()) {
            std::vector<CatalogueEntry> same_p;
            for (const auto& e : opt.catalogue)
                if (e.p == p) same_p.push_back(e);
            auto kept = sieve_candidates(build_catalogue(same_p), spec.k, spec.l, n_p);
            bool found = false;
            for (const auto& c : kept) {
                std::vector<long> es = c.e_values();
                std::sort(es.begin(), es.end());
                if (c.name == loc.name && es == sorted_e(spec)) found = true;
            }
            if (!found) return fail("inertial-sieve", "correspondent inertial quotient " + loc.name + " is sieved out");
        } else {
            cert.notes.push_back("inertial sieve skipped: no catalogue");
        }
        std::set<long> es;
        for (const auto& o : spec.orbits) es.insert(o.e);
        for (long e : es) {
            IntMatrix g = gamma_canonical(p, e);
            cert.gamma_checks.push_back({p, e, g.transpose() * g == cartan_cyclic_defect(p, e)});
            if (!cert.gamma_checks.back().pass) return fail("gamma-shape");
        }

        const auto match = match_orbits(fx, loc);
        cert.local_labels = match;
        std::map<std::string, CycMatrix> ref;
        for (const auto& [label, llabel] : match) {
            auto it = loc.known_qu.find(llabel);
            if (it == loc.known_qu.end()) return fail("missing-data", "correspondent lacks Q for " + llabel);
            ref[label] = it->second;
        }
        if (ref.size() != spec.orbits.size()) return fail("orbit-mismatch", "not every orbit has a representative");

        std::vector<PlacedFamily> families;
        bool nilpotent = spec.l == 1;
        for (const auto& o : spec.orbits) nilpotent = nilpotent && o.e == 1;
        if (nilpotent) {
            // transported along the Q1 witness
            PlacedFamily f;
            for (const auto& [label, q] : ref) f.q[label] = cert.q1_equivalence->apply(q);
            families.push_back(std::move(f));
            cert.notes.push_back("nilpotent block: family transported along the Q1 witness");
        } else {
            const auto congs = stable_congruences(loc.generators, p, fx.reps);
            for (const auto& c : congs) cert.congruences_checked.push_back(c.str());
            std::vector<std::string> placed;
            for (const auto& s : fx.strategy.value("placed", json::array())) placed.push_back(s.get<std::string>());
            std::optional<std::string> derived;
            if (fx.strategy.contains("derived")) derived = fx.strategy.at("derived").get<std::string>();
            if (placed.empty()) return fail("unsupported-strategy", "no placed label");

            if (fx.strategy.contains("quadratic_split")) {
                const json& qs = fx.strategy.at("quadratic_split");
                const long rr = qs.at("rational_rows").get<long>();
                auto mult = qs.value("targets", std::vector<long>{3, 2, 1});
                const IntMatrix cu = cartan_cyclic_defect(p, orbit_e(spec, placed.front()));
                const IntMatrix cprime = cu.divexact(Int(p));
                QuadraticSplitProblem q;
                q.g11 = cprime * Int(mult.at(0));
                q.g22 = cprime * Int(mult.at(1));
                q.g12 = cprime * Int(mult.at(2));
                q.k = spec.k;
                q.rational_rows = rr;
                q.p = p;
                auto splits = solve_quadratic_split(q);
                cert.split_count = splits.size();
                if (splits.empty()) return fail("no-candidate", "quadratic split has no solution");
                std::map<std::string, std::string> conj_of;
                for (const auto& o : spec.orbits)
                    if (o.algebraically_conjugate_to) conj_of[*o.algebraically_conjugate_to] = o.label;
                std::vector<std::array<std::size_t, 2>> pairs = fx.p_conjugate_pairs;
                if (static_cast<long>(k) - 2 * static_cast<long>(pairs.size()) != rr)
                    return fail("unsupported-strategy", "Galois pairs do not match the rational row count");
                // one split per placed label
                std::vector<std::size_t> pick(placed.size(), 0);
                while (true) {
                    PlacementProblem pr;
                    pr.p = p;
                    pr.q1 = cert.q1;
                    pr.m1_scaled = cert.m1_scaled;
                    pr.pair_positions = pairs;
                    for (std::size_t t = 0; t < placed.size(); ++t) {
                        auto cj = conj_of.find(placed[t]);
                        std::optional<std::string> c;
                        if (cj != conj_of.end()) c = cj->second;
                        pr.placed.push_back(split_label(placed[t], splits[pick[t]], rr,
                                                        cartan_cyclic_defect(p, orbit_e(spec, placed[t])), c));
                    }
                    pr.congruences = congs;
                    pr.max_families = opt.max_families;
                    auto res = place(pr);
                    if (res.truncated) return fail("family-limit");
                    for (auto& f : res.families) families.push_back(std::move(f));
                    if (families.size() > opt.max_families) return fail("family-limit");
                    std::size_t t = 0;
                    while (t < pick.size() && ++pick[t] == splits.size()) pick[t++] = 0;
                    if (t == pick.size()) break;
                }
                cert.survivors = families.empty() ? 0 : 1;
            } else {
                if (placed.size() != 1) return fail("unsupported-strategy", "rational path places one label");
                const std::string& w = placed.front();
                const IntMatrix cw = cartan_cyclic_defect(p, orbit_e(spec, w));
                long min_m1 = to_long(cert.m1_scaled(0, 0));
                for (std::size_t i = 1; i < k; ++i) min_m1 = std::min(min_m1, to_long(cert.m1_scaled(i, i)));
                long bound = pp - min_m1;
                for (const auto& o : spec.orbits)
                    if (o.label != w) bound -= min_scaled_m(cartan_cyclic_defect(p, o.e), spec.k, p);
                cert.diag_bound = bound;
                if (bound <= 0) return fail("no-candidate", "diagonal bound is not positive");
                EmbeddingProblem ep;
                ep.c = cw;
                ep.k = spec.k;
                ep.p = p;
                ep.diag_bound = bound;
                auto set = enumerate(ep);
                cert.raw_count = set.raw_count;
                cert.canonical_count = set.solutions.size();
                cert.candidates = set.solutions;
                CongruenceContext ctx;
                ctx.p = p;
                ctx.q1 = cert.q1;
                ctx.m1_scaled = cert.m1_scaled;
                ctx.label = w;
                ctx.derived = derived;
                if (derived) ctx.derived_cartan = cartan_cyclic_defect(p, orbit_e(spec, *derived));
                ctx.congruences = congs;
                auto cong_only = filter_by_congruences(set, ctx);
                cert.congruence_survivors = cong_only.solutions.size();
                ctx.sum_relation = true;
                auto kept = filter_by_congruences(cong_only, ctx);
                cert.survivors = kept.solutions.size();
                for (const auto& x : kept.solutions) {
                    PlacementProblem pr;
                    pr.p = p;
                    pr.q1 = cert.q1;
                    pr.m1_scaled = cert.m1_scaled;
                    pr.placed.push_back(rational_label(w, x));
                    pr.derived = derived;
                    pr.derived_cartan = ctx.derived_cartan;
                    pr.congruences = congs;
                    pr.max_families = opt.max_families;
                    auto res = place(pr);
                    if (res.truncated) return fail("family-limit");
                    for (auto& f : res.families) families.push_back(std::move(f));
                    if (families.size() > opt.max_families) return fail("family-limit");
                }
            }
        }
        cert.families = families.size();
        if (families.empty()) return fail("no-candidate", "no family satisfies every constraint");

        // uniqueness: every family is essentially equal to the correspondent's
        std::map<std::string, CycMatrix> ref1 = ref;
        ref1["1"] = CycMatrix(q1loc);
        for (std::size_t f = 0; f < families.size(); ++f) {
            std::map<std::string, CycMatrix> alt = families[f].q;
            if (alt.size() != spec.orbits.size()) return fail("family-uniqueness", "family misses a label");
            alt["1"] = CycMatrix(cert.q1);
            auto w = family_unique(alt, ref1, p, fx.label_symmetries);
            if (!w) return fail("family-uniqueness", "family " + std::to_string(f) + " differs from the correspondent");
            if (f == 0) {
                cert.family_witness = w;
                cert.qu_family = families[f].q;
            }
        }
        cert.family_unique = true;

        auto alg = contribution_algebra_violations(cert.m1_scaled, scaled_family(cert.qu_family, spec), spec);
        if (!alg.empty()) return fail("contribution-algebra", alg.front());
    } catch (const Error& e) {
        return fail(e.code(), e.what());
    }
    cert.notes.push_back("perfect isometry extends: Gamma_1 shape checked for every e_u");
    cert.verdict = "certified";
    cert.reason.clear();
    return cert;
}

IsotypyCertificate verify_block(const BlockFixture& fixture) {
    const std::string root = fixture_root();
    if (!fixture.local_path) {
        IsotypyCertificate c;
        c.block_id = fixture.id;
        c.reason = "missing-data";
        c.notes.push_back("fixture names no correspondent");
        return c;
    }
    BlockFixture loc = load_fixture(root + "/" + *fixture.local_path);
    VerifyOptions opt;
    const std::string cat = root + "/inertial_catalogue.json";
    if (std::filesystem::exists(cat)) opt.catalogue = catalogue_from_json(load_json(cat));
    return verify_block(fixture, loc, opt);
}

bool recheck_certificate(const IsotypyCertificate& cert, const BlockFixture& loc) {
    if (!cert.certified() || !cert.q1_equivalence || !cert.family_witness) return false;
    const long p = cert.spec.p;
    try {
        IntMatrix q1loc = derive_q1(loc);
        if (!verify_witness({{"x", CycMatrix(cert.q1)}}, {{"x", CycMatrix(q1loc)}}, *cert.q1_equivalence))
            return false;
        if (contribution(cert.q1, cert.q1.transpose() * cert.q1, p).scaled != cert.m1_scaled) return false;
        std::map<std::string, CycMatrix> ref, alt = cert.qu_family;
        for (const auto& [label, llabel] : cert.local_labels) ref[label] = loc.known_qu.at(llabel);
        ref["1"] = CycMatrix(q1loc);
        alt["1"] = CycMatrix(cert.q1);
        if (!verify_witness(alt, ref, *cert.family_witness)) return false;
        if (!contribution_algebra_violations(cert.m1_scaled, scaled_family(cert.qu_family, cert.spec), cert.spec).empty())
            return false;
        for (const auto& g : cert.gamma_checks) {
            IntMatrix x = gamma_canonical(g.p, g.e);
            if (!g.pass || x.transpose() * x != cartan_cyclic_defect(g.p, g.e)) return false;
        }
    } catch (const Error&) {
        return false;
    }
    return true;
}

json to_json(const IsotypyCertificate& c) {
    json j;
    j["block"] = c.block_id;
    j["verdict"] = c.verdict;
    if (!c.reason.empty()) j["reason"] = c.reason;
    j["notes"] = c.notes;
    if (c.q1_equivalence) j["q1_equivalence"] = to_json(*c.q1_equivalence);
    json fam = json::object();
    for (const auto& [label, q] : c.qu_family) fam[label] = to_json(q);
    j["qu_family"] = fam;
    j["family_unique"] = c.family_unique;
    if (c.family_witness) j["family_witness"] = to_json(*c.family_witness);
    j["local_labels"] = c.local_labels;
    j["congruences_checked"] = c.congruences_checked;
    json g = json::array();
    for (const auto& x : c.gamma_checks) g.push_back(json{{"p", x.p}, {"e", x.e}, {"pass", x.pass}});
    j["gamma_checks"] = g;
    j["stats"] = json{{"diag_bound", c.diag_bound},
                      {"raw_count", c.raw_count},
                      {"canonical_count", c.canonical_count},
                      {"congruence_survivors", c.congruence_survivors},
                      {"survivors", c.survivors},
                      {"split_count", c.split_count},
                      {"families", c.families}};
    return j;
}

}  // namespace isotypy
