#pragma once

#include "isotypy/cyclotomic.hpp"
#include "isotypy/int_matrix.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace isotypy {

// Row i of P*X is signs[i] * row perm[i] of X. For a single pair,
// P * x1 * S == x2; for families, P * alt[label_map[w]] * S_w == ref[w].
struct EquivalenceWitness {
    std::vector<std::size_t> perm;
    std::vector<int> signs;
    std::map<std::string, IntMatrix> transforms;
    std::map<std::string, std::string> label_map;  // ref label -> alt label

    IntMatrix apply(const IntMatrix& x) const;
    CycMatrix apply(const CycMatrix& x) const;
    IntMatrix permutation_matrix() const;
};

// p^2 X (X^T X)^-1 X^T; throws Error("non-integral-projector") otherwise.
IntMatrix projector(const IntMatrix& x, long p);

// conj(X) adj(C) X^T with C = X^T conj(X): integral multiple of the
// projector, independent of the column basis of X.
CycMatrix basis_invariant(const CycMatrix& x);

// Signed permutation search plus basis change; throws
// Error("no-left-inverse") unless both inputs have integral left inverses.
std::optional<EquivalenceWitness> essentially_equal(const IntMatrix& x1, const IntMatrix& x2, long p);
std::optional<EquivalenceWitness> essentially_equal(const CycMatrix& x1, const CycMatrix& x2, long p);

// One signed permutation shared by all labels. Label maps come from the
// group generated by `label_symmetries` (each a label -> label map; labels
// not mentioned are fixed).
std::optional<EquivalenceWitness> family_unique(const std::map<std::string, CycMatrix>& ref,
                                                const std::map<std::string, CycMatrix>& alt, long p,
                                                const std::vector<std::map<std::string, std::string>>& label_symmetries = {});

// Pure recomputation of a witness: P * alt[label_map[w]] * S_w == ref[w], S_w unimodular.
bool verify_witness(const std::map<std::string, CycMatrix>& ref, const std::map<std::string, CycMatrix>& alt,
                    const EquivalenceWitness& w);

// Signed permutations (perm, signs) with P z1 P^T == z2, found by backtracking;
// at most `limit` (0 = all). Flipping every sign on a connected component of
// the nonzero pattern of z2 gives another solution; only the one with a
// positive sign on the first row placed in each component is listed.
// Exposed for testing the search in isolation.
std::vector<std::pair<std::vector<std::size_t>, std::vector<int>>> signed_permutations(
    const std::vector<CycMatrix>& z1, const std::vector<CycMatrix>& z2, std::size_t limit);

}  // namespace isotypy
