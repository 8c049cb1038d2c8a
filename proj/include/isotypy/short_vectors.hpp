#pragma once

#include "isotypy/int_matrix.hpp"

#include <vector>

namespace isotypy {

// Nonzero x with x^T g x <= bound, one of each pair +-x (first nonzero entry
// positive), sorted lexicographically. g must be positive definite.
std::vector<std::vector<long>> short_vectors(const IntMatrix& g, const Int& bound);

// Same, restricted to x^T g x == norm, both signs included.
std::vector<std::vector<long>> vectors_of_norm(const IntMatrix& g, const Int& norm);

// All T (n x m) with T^T a T == b for a n x n, b m x m, m <= n; columns of T\n// are enumerated as vectors of the a-lattice;
// at most `limit` of them when limit > 0.
std::vector<IntMatrix> find_isometries(const IntMatrix& a, const IntMatrix& b, std::size_t limit = 0);

// Aut(c) = {g : g^T c g == c}, as a list of matrices (identity first).
std::vector<IntMatrix> automorphism_group(const IntMatrix& c);

}  // namespace isotypy
