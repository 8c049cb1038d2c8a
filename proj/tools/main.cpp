#include "isotypy/embeddings.hpp"
#include "isotypy/equivalence.hpp"
#include "isotypy/errors.hpp"
#include "isotypy/inertial.hpp"
#include "isotypy/json_io.hpp"
#include "isotypy/pipeline.hpp"
#include "isotypy/stable_chars.hpp"

#include "CLI11.hpp"

#include <omp.h>

#include <algorithm>
#include <filesystem>
#include <iostream>

using namespace isotypy;
namespace fs = std::filesystem;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitError = 3;

void emit(const json& j, const std::string& out) {
    if (out.empty())
        std::cout << j.dump(1) << '\n';
    else
        save_json(out, j);
}

int report_error(const std::string& code, const std::string& detail) {
    std::cerr << json{{"error", code}, {"detail", detail}}.dump() << '\n';
    return kExitError;
}

std::string resolve(const std::string& path) {
    if (fs::exists(path)) return path;
    std::string alt = fixture_root() + "/" + path;
    if (fs::exists(alt)) return alt;
    throw Error("missing-file", "cannot find " + path);
}

int cmd_solve_embeddings(const std::string& path, const std::string& out, bool congruence, bool text) {
    json j = load_json(resolve(path));
    EmbeddingProblem pr = problem_from_json(j);
    EmbeddingSolutionSet set = enumerate(pr);
    json res{{"raw_count", set.raw_count}, {"infeasible", set.infeasible}};
    if (congruence) {
        if (!j.contains("fixture")) throw Error("schema", "--congruence needs a \"fixture\" entry in the problem");
        BlockFixture fx = load_fixture(resolve(j.at("fixture").get<std::string>()));
        BlockFixture loc = load_fixture(resolve(*fx.local_path));
        CongruenceContext ctx;
        ctx.p = pr.p;
        ctx.q1 = derive_q1(fx);
        ctx.m1_scaled = contribution(ctx.q1, ctx.q1.transpose() * ctx.q1, pr.p).scaled;
        ctx.label = j.value("label", fx.strategy.at("placed").at(0).get<std::string>());
        if (fx.strategy.contains("derived")) {
            ctx.derived = fx.strategy.at("derived").get<std::string>();
            ctx.derived_cartan = cartan_cyclic_defect(pr.p, fx.spec.orbit(*ctx.derived).e);
        }
        ctx.congruences = stable_congruences(loc.generators, pr.p, fx.reps);
        res["unfiltered_count"] = set.solutions.size();
        set = filter_by_congruences(set, ctx);
    }
    json sols = json::array();
    for (const auto& x : set.solutions) sols.push_back(to_json(x));
    res["count"] = set.solutions.size();
    res["solutions"] = sols;
    emit(res, out);
    if (text || !out.empty()) {
        std::cerr << set.solutions.size() << " solution(s)\n";
        if (text)
            for (const auto& x : set.solutions) std::cerr << x.transpose().str() << "\n";
    }
    if (set.infeasible) {
        std::cerr << json{{"error", "infeasible"}, {"detail", "trace bound cannot be met"}}.dump() << '\n';
        return kExitInfeasible;
    }
    return 0;
}

std::map<std::string, CycMatrix> family_from_json(const json& j) {
    std::map<std::string, CycMatrix> out;
    if (j.is_array()) {
        out["x"] = cyc_matrix_from_json(j);
        return out;
    }
    for (const auto& [label, m] : j.at("family").items()) out[label] = cyc_matrix_from_json(m);
    return out;
}

int cmd_check_equivalence(const std::string& a, const std::string& b, long p, const std::string& out) {
    json ja = load_json(resolve(a)), jb = load_json(resolve(b));
    auto fa = family_from_json(ja), fb = family_from_json(jb);
    std::vector<std::map<std::string, std::string>> sym;
    if (ja.is_object() && ja.contains("label_symmetries"))
        sym = ja.at("label_symmetries").get<std::vector<std::map<std::string, std::string>>>();
    if (p == 0 && ja.is_object()) p = ja.value("p", 0L);
    if (p == 0) throw Error("schema", "prime p missing: pass --p or a \"p\" entry");
    std::optional<EquivalenceWitness> w;
    if (fa.size() == 1 && fa.count("x") && fb.count("x")) {
        const CycMatrix &x1 = fa.at("x"), &x2 = fb.at("x");
        if (x1.is_rational() && x2.is_rational())
            w = essentially_equal(x1.to_int(), x2.to_int(), p);
        else
            w = essentially_equal(x1, x2, p);
    } else {
        // witness maps the first family onto the second
        w = family_unique(fb, fa, p, sym);
    }
    if (!w) {
        emit(json{{"verdict", "essentially-different"}}, out);
        return kExitFailed;
    }
    json r = to_json(*w);
    r["verdict"] = "essentially-equal";
    emit(r, out);
    return 0;
}

int cmd_stable_chars(const std::string& path, bool rational, const std::string& out) {
    FusionPartition f = partition_from_json(load_json(resolve(path)));
    auto basis = rational ? rational_stable_basis(f) : stable_basis(f);
    json b = json::array();
    for (const auto& s : basis) {
        json vals = json::array();
        for (const auto& v : s.values_on_reps) vals.push_back(to_json(v));
        json coords = json::array();
        for (const auto& c : s.coords) coords.push_back(to_json(c));
        b.push_back(json{{"coords", coords}, {"values", vals}});
    }
    FusionPartition used = rational ? rational_coarsening(f) : f;
    emit(json{{"rank", basis.size()}, {"classes", used.classes}, {"basis", b}}, out);
    return 0;
}

int cmd_orbit_analysis(const std::string& path, const std::string& name, long k, long l, long n_p,
                       const std::string& out) {
    auto entries = catalogue_from_json(load_json(resolve(path)));
    if (!name.empty()) {
        std::erase_if(entries, [&](const CatalogueEntry& e) { return e.name != name; });
        if (entries.empty()) throw Error("unknown-name", "no catalogue entry named " + name);
    }
    auto cands = build_catalogue(entries);
    json r = json::object();
    json all = json::array();
    for (const auto& c : cands) all.push_back(to_json(c));
    r["candidates"] = all;
    if (k >= 0 && l >= 0) {
        json kept = json::array();
        for (const auto& c : sieve_candidates(cands, k, l, std::max(0L, n_p))) kept.push_back(c.name);
        r["sieve"] = json{{"k", k}, {"l", l}, {"n_p", n_p}, {"survivors", kept}};
    }
    emit(r, out);
    return 0;
}

int cmd_verify_block(const std::string& fixture, const std::string& local, const std::string& out) {
    BlockFixture fx = load_fixture(resolve(fixture));
    IsotypyCertificate cert;
    if (local.empty()) {
        cert = verify_block(fx);
    } else {
        VerifyOptions opt;
        std::string cat = fixture_root() + "/inertial_catalogue.json";
        if (fs::exists(cat)) opt.catalogue = catalogue_from_json(load_json(cat));
        cert = verify_block(fx, load_fixture(resolve(local)), opt);
    }
    emit(to_json(cert), out);
    return cert.certified() ? 0 : kExitFailed;
}

bool matches_only(const BlockFixture& fx, const std::string& only) {
    if (only.empty()) return true;
    if (only.rfind("p=", 0) == 0) return std::to_string(fx.spec.p) == only.substr(2);
    return fx.id == only;
}

int cmd_verify_all(const std::string& dir, const std::string& only, bool strict, const std::string& out) {
    const std::string root = dir.empty() ? fixture_root() : dir;
    std::vector<std::string> files;
    if (fs::is_directory(root + "/blocks"))
        for (const auto& e : fs::directory_iterator(root + "/blocks"))
            if (e.path().extension() == ".json") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    json rows = json::array();
    std::size_t certified = 0, failed = 0, skipped = 0;
    for (const auto& f : files) {
        BlockFixture fx;
        try {
            fx = load_fixture(f);
        } catch (const Error& e) {
            rows.push_back(json{{"block", fs::path(f).stem().string()}, {"verdict", "skipped"}, {"reason", e.code()}});
            ++skipped;
            continue;
        }
        if (!matches_only(fx, only)) continue;
        if (!fx.local_path || !fs::exists(root + "/" + *fx.local_path)) {
            rows.push_back(json{{"block", fx.id}, {"verdict", "skipped"}, {"reason", "missing-correspondent"}});
            ++skipped;
            continue;
        }
        VerifyOptions opt;
        if (fs::exists(root + "/inertial_catalogue.json"))
            opt.catalogue = catalogue_from_json(load_json(root + "/inertial_catalogue.json"));
        IsotypyCertificate c = verify_block(fx, load_fixture(root + "/" + *fx.local_path), opt);
        json row{{"block", fx.id}, {"p", fx.spec.p}, {"verdict", c.verdict}};
        if (!c.reason.empty()) row["reason"] = c.reason;
        rows.push_back(row);
        (c.certified() ? certified : failed)++;
    }
    for (const auto& r : rows)
        std::cerr << r.at("block").get<std::string>() << "  " << r.at("verdict").get<std::string>()
                  << (r.contains("reason") ? "  " + r.at("reason").get<std::string>() : std::string()) << '\n';
    if (rows.empty()) std::cerr << "no fixtures found under " << root << "; all skipped\n";
    emit(json{{"blocks", rows}, {"certified", certified}, {"failed", failed}, {"skipped", skipped}}, out);
    if (failed > 0) return kExitFailed;
    if (strict && (skipped > 0 || rows.empty())) return kExitFailed;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isotypy verification toolkit for blocks with defect group of order p^2"};
    app.require_subcommand(1);
    int jobs = 0;
    app.add_option("--jobs", jobs, "OpenMP threads (0 = runtime default)");
    std::string out;

    auto* se = app.add_subcommand("solve-embeddings", "Enumerate X with X^T X = C");
    std::string problem;
    bool congruence = false, text = false;
    se->add_option("--problem", problem, "problem JSON")->required();
    se->add_option("--out", out, "output file");
    se->add_flag("--congruence", congruence, "filter by stable-character congruences of the problem's fixture");
    se->add_flag("--text", text, "render solutions as text on stderr");

    auto* ce = app.add_subcommand("check-equivalence", "Signed permutation and basis change between two matrices");
    std::string fa, fb;
    long p = 0;
    ce->add_option("--a", fa, "first matrix or family")->required();
    ce->add_option("--b", fb, "second matrix or family")->required();
    ce->add_option("--p", p, "prime");
    ce->add_option("--out", out, "output file");

    auto* sc = app.add_subcommand("stable-chars", "Basis of the stable generalized characters");
    std::string partition;
    bool rational = false;
    sc->add_option("--partition", partition, "fusion partition JSON")->required();
    sc->add_flag("--rational", rational, "rational-valued characters only");
    sc->add_option("--out", out, "output file");

    auto* oa = app.add_subcommand("orbit-analysis", "Orbits of catalogued inertial quotients and the sieve");
    std::string catalogue = "inertial_catalogue.json", name;
    long k = -1, l = -1, n_p = 0;
    oa->add_option("--catalogue", catalogue, "catalogue JSON");
    oa->add_option("--name", name, "restrict to one entry");
    oa->add_option("--k", k, "k(B) for the sieve");
    oa->add_option("--l", l, "l(B) for the sieve");
    oa->add_option("--n-p", n_p, "multiplicity of p in C_1");
    oa->add_option("--out", out, "output file");

    auto* vb = app.add_subcommand("verify-block", "Certificate for one block fixture");
    std::string fixture, local;
    vb->add_option("--fixture", fixture, "block fixture")->required();
    vb->add_option("--local", local, "correspondent fixture (default: from the block fixture)");
    vb->add_option("--out", out, "certificate output");

    auto* va = app.add_subcommand("verify-all", "Regression over all shipped block fixtures");
    std::string only, dir;
    bool strict = false;
    va->add_option("--only", only, "p=<prime> or a fixture name");
    va->add_option("--dir", dir, "fixture root (default: $ISOTYPY_FIXTURES or the shipped set)");
    va->add_flag("--strict", strict, "skipped fixtures make the run fail");
    va->add_option("--out", out, "summary output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return report_error("usage", e.what());
    }
    if (jobs > 0) omp_set_num_threads(jobs);

    try {
        if (*se) return cmd_solve_embeddings(problem, out, congruence, text);
        if (*ce) return cmd_check_equivalence(fa, fb, p, out);
        if (*sc) return cmd_stable_chars(partition, rational, out);
        if (*oa) return cmd_orbit_analysis(catalogue, name, k, l, n_p, out);
        if (*vb) return cmd_verify_block(fixture, local, out);
        if (*va) return cmd_verify_all(dir, only, strict, out);
    } catch (const Error& e) {
        return report_error(e.code(), e.what());
    } catch (const json::exception& e) {
        return report_error("schema", e.what());
    } catch (const std::exception& e) {
        return report_error("internal", e.what());
    }
    return kExitError;
}
