#pragma once

#include "isotypy/block_model.hpp"
#include "isotypy/int_matrix.hpp"
#include "isotypy/stable_chars.hpp"

#include <optional>
#include <string>
#include <vector>

namespace isotypy {

struct EmbeddingProblem {
    IntMatrix c;                                // l x l Cartan, positive definite
    long k = 0;                                 // rows of X
    long p = 0;
    long diag_bound = 0;                        // max p^2 m_r over all rows; 0 means p^2
    std::vector<long> diag_bounds;              // optional per-row bounds (size k)
    std::optional<std::vector<long>> diag_targets;  // optional exact p^2 m_r per row
    bool forbid_zero_rows = true;
    bool modulo_automorphisms = true;           // also identify X ~ X g for g in Aut(c)

    long effective_bound() const;
    void validate() const;
};

struct RowCandidate {
    std::vector<long> r;
    long scaled_m = 0;  // p^2 r^T c^-1 r
};

struct EmbeddingSolutionSet {
    std::vector<IntMatrix> solutions;  // canonical forms, sorted
    bool canonicalized = false;
    std::size_t raw_count = 0;         // solutions up to row order and signs only
    bool infeasible = false;           // rejected by the trace bound before searching
};

// Sign-normalized candidates, sorted by decreasing scaled_m, then
// lexicographically decreasing.
std::vector<RowCandidate> candidate_rows(const EmbeddingProblem& problem);

// Exhaustive search; branches run under OpenMP.
EmbeddingSolutionSet enumerate(const EmbeddingProblem& problem);
// Single-threaded reference implementation of the same search.
EmbeddingSolutionSet enumerate_serial(const EmbeddingProblem& problem);

// Rows sign-normalized and sorted in decreasing order; with a non-empty
// automorphism list the lexicographically largest such form over X g.
IntMatrix canonical_form(const IntMatrix& x, const std::vector<IntMatrix>& automorphisms = {});

// Positions and signs are not part of a solution. Without sum_relation a
// solution survives if its rows can be assigned to positions so that the
// diagonal of every congruence holds; with it, some full placement must
// meet every congruence, orthogonality to Q1 and the sum relation.
struct CongruenceContext {
    long p = 0;
    IntMatrix q1;                    // k x l(B), columns orthogonal to every Q_u
    IntMatrix m1_scaled;             // p^2 M_1
    std::string label;               // label the solutions are placed as
    std::optional<std::string> derived;  // label with p^2 M = p^2 I - p^2 M_1 - p^2 M_label
    std::optional<IntMatrix> derived_cartan;
    std::vector<Congruence> congruences;  // over "1", label and derived
    bool sum_relation = false;
};

EmbeddingSolutionSet filter_by_congruences(const EmbeddingSolutionSet& set, const CongruenceContext& ctx);

// Decompositions Q = R1 + R2 rho over Z[rho], rho = zeta_5 + zeta_5^-1, where
// the non-rational rows come in Galois-conjugate pairs (a + b rho, (a - b) - b rho)
// and the remaining `rational_rows` rows have R2 = 0.
struct QuadraticSplit {
    IntMatrix r1;
    IntMatrix r2;
};

struct QuadraticSplitProblem {
    IntMatrix g11;  // R1^T R1
    IntMatrix g22;  // R2^T R2
    IntMatrix g12;  // R1^T R2
    long k = 0;
    long rational_rows = 0;
    long p = 5;
};

// Rows of each solution: rational rows first, then pairs on consecutive rows.
std::vector<QuadraticSplit> solve_quadratic_split(const QuadraticSplitProblem& problem);

}  // namespace isotypy
