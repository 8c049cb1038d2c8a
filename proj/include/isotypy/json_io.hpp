#pragma once

#include "isotypy/block_model.hpp"
#include "isotypy/cyclotomic.hpp"
#include "isotypy/embeddings.hpp"
#include "isotypy/equivalence.hpp"
#include "isotypy/inertial.hpp"
#include "isotypy/stable_chars.hpp"

#include "json.hpp"

#include <string>

namespace isotypy {

using json = nlohmann::json;

json load_json(const std::string& path);
void save_json(const std::string& path, const json& j);

// Integers as decimal strings; plain JSON numbers are accepted on input.
Int int_from_json(const json& j);
json to_json(const Int& v);

IntMatrix int_matrix_from_json(const json& j);
json to_json(const IntMatrix& m);

// {"n": conductor, "c": [coefficient strings]} or a plain integer.
CycInt cyc_from_json(const json& j);
json to_json(const CycInt& v);
CycMatrix cyc_matrix_from_json(const json& j);  // lifted to the lcm conductor
json to_json(const CycMatrix& m);

BlockSpec block_spec_from_json(const json& j);
json to_json(const BlockSpec& s);

FusionPartition partition_from_json(const json& j);
json to_json(const FusionPartition& f);

std::vector<CatalogueEntry> catalogue_from_json(const json& j);
json to_json(const InertialCandidate& c);

json to_json(const EquivalenceWitness& w);
EquivalenceWitness witness_from_json(const json& j);

// Keys c, k, p and optionally diag_bound, diag_bounds, diag_targets,
// forbid_zero_rows, modulo_automorphisms. Validated.
EmbeddingProblem problem_from_json(const json& j);

}  // namespace isotypy
