#pragma once

#include "isotypy/block_model.hpp"
#include "isotypy/cyclotomic.hpp"
#include "isotypy/equivalence.hpp"
#include "isotypy/inertial.hpp"
#include "isotypy/json_io.hpp"
#include "isotypy/stable_chars.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace isotypy {

// Block data as shipped in fixtures/blocks (a block B) or fixtures/local
// (the Brauer correspondent b, with its known Q_u family).
struct BlockFixture {
    std::string id;    // file stem
    std::string name;
    std::string source;
    BlockSpec spec;
    std::optional<long> n_p;
    std::map<std::string, Vec2> reps;              // orbit label -> representative in F_p^2
    std::optional<CycMatrix> psingular;            // character values on p-singular columns
    std::optional<IntMatrix> q1_display;           // the published Q_1, for comparison only
    std::optional<IntMatrix> known_m1;             // shipped p^2 M_1
    std::optional<std::string> local_path;         // relative to the fixture root
    std::vector<Glp2Element> generators;           // local models only
    std::map<std::string, CycMatrix> known_qu;     // local models only
    json strategy = json::object();
    std::vector<std::map<std::string, std::string>> label_symmetries;
    std::vector<std::array<std::size_t, 2>> p_conjugate_pairs;
    json expected = json::object();
};

BlockFixture fixture_from_json(const json& j, const std::string& id);
BlockFixture load_fixture(const std::string& path);

// Fixture root: $ISOTYPY_FIXTURES if set, else the compiled-in directory.
std::string fixture_root();

// Saturated basis of the integral left kernel of rationalize(psingular),
// in Hermite column form. Throws Error("fixture-inconsistent") if the rank
// differs from l; falls back to the stored q1 without p-singular data.
IntMatrix derive_q1(const BlockFixture& fixture);

struct GammaCheck {
    long p = 0;
    long e = 0;
    bool pass = false;
};

struct IsotypyCertificate {
    std::string block_id;
    BlockSpec spec;
    std::string verdict = "failed";  // "certified" or "failed"
    std::string reason;              // first failed check, empty when certified
    std::vector<std::string> notes;

    IntMatrix q1;
    IntMatrix m1_scaled;
    std::optional<EquivalenceWitness> q1_equivalence;
    std::map<std::string, CycMatrix> qu_family;   // every non-trivial label of B
    std::optional<EquivalenceWitness> family_witness;  // P * local[label_map[w]] * S_w == family[w]
    std::map<std::string, std::string> local_labels;  // block label -> correspondent label
    bool family_unique = false;
    std::vector<std::string> congruences_checked;
    std::vector<GammaCheck> gamma_checks;

    // search statistics
    long diag_bound = 0;
    std::size_t raw_count = 0;
    std::size_t canonical_count = 0;
    std::size_t congruence_survivors = 0;
    std::size_t survivors = 0;
    std::size_t split_count = 0;
    std::size_t families = 0;
    std::vector<IntMatrix> candidates;  // canonical enumeration results

    bool certified() const { return verdict == "certified"; }
};

json to_json(const IsotypyCertificate& c);

struct VerifyOptions {
    std::vector<CatalogueEntry> catalogue;  // empty: sieve step is skipped with a note
    std::size_t max_families = 4096;        // placements per block before giving up
};

// Runs the stages in order and stops at the first failure, naming it.
IsotypyCertificate verify_block(const BlockFixture& fixture, const BlockFixture& correspondent,
                                const VerifyOptions& options = {});

// Loads the local model named by fixture.local_path and the shipped catalogue.
IsotypyCertificate verify_block(const BlockFixture& fixture);

// Pure recomputation from the stored witnesses; no searches.
bool recheck_certificate(const IsotypyCertificate& cert, const BlockFixture& correspondent);

// X with p^2 X C^-1 X^T == m.scaled and X^T X == C, where C defaults to
// cartan_cyclic_defect(p, l). Throws Error("reconstruction-failed").
IntMatrix reconstruct_from_contribution(const Contribution& m, long p, long l,
                                        const std::optional<IntMatrix>& cartan = std::nullopt);

// Sum relation, idempotence, diagonal coprimality and traces for one family,
// with p^2 M_1 included. Empty when all hold.
std::vector<std::string> contribution_algebra_violations(const IntMatrix& m1_scaled,
                                                         const std::map<std::string, CycMatrix>& scaled,
                                                         const BlockSpec& spec);

// p^2 M for every label of a family.
std::map<std::string, CycMatrix> scaled_family(const std::map<std::string, CycMatrix>& qu, const BlockSpec& spec);

// Congruences from the rational stable characters of the orbit partition
// of `generators`, expressed over "1" and the labels of `spec`.
std::vector<Congruence> stable_congruences(const std::vector<Glp2Element>& generators, long p,
                                           const std::map<std::string, Vec2>& reps);

// Block label -> label of the correspondent orbit containing the same representative.
std::map<std::string, std::string> match_orbits(const BlockFixture& block, const BlockFixture& local);

}  // namespace isotypy
