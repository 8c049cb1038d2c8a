#pragma once

#include "isotypy/cyclotomic.hpp"
#include "isotypy/int_matrix.hpp"
#include "isotypy/stable_chars.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace isotypy {

// x + y rho with rho = zeta_5 + zeta_5^-1; rational values have y == 0.
struct QuadInt {
    long x = 0;
    long y = 0;

    QuadInt operator+(const QuadInt& o) const { return {x + o.x, y + o.y}; }
    QuadInt operator-(const QuadInt& o) const { return {x - o.x, y - o.y}; }
    QuadInt operator-() const { return {-x, -y}; }
    QuadInt operator*(const QuadInt& o) const { return {x * o.x + y * o.y, x * o.y + y * o.x - y * o.y}; }
    QuadInt operator*(long s) const { return {x * s, y * s}; }
    QuadInt sigma() const { return {x - y, -y}; }  // rho -> -1 - rho
    bool is_zero() const { return x == 0 && y == 0; }
    bool divisible_by(long m) const { return x % m == 0 && y % m == 0; }
    auto operator<=>(const QuadInt&) const = default;
};

using QuadRow = std::vector<QuadInt>;

CycInt to_cyc(const QuadInt& v);
QuadInt from_cyc(const CycInt& v);  // conductor 1 or 5 in the span of 1, rho
CycMatrix to_cyc_matrix(const std::vector<QuadRow>& rows, std::size_t cols);

// One label whose Q is placed row by row into Irr(B) positions.
struct PlacedLabel {
    std::string label;
    IntMatrix cartan;
    std::vector<QuadRow> singles;                     // rows for single positions
    std::vector<std::pair<QuadRow, QuadRow>> pairs;   // (q, sigma q) for Galois pairs of positions
    std::optional<std::string> conjugate_label;       // label carrying sigma(Q)
};

struct PlacementProblem {
    long p = 0;
    IntMatrix q1;
    IntMatrix m1_scaled;
    std::vector<std::array<std::size_t, 2>> pair_positions;
    std::vector<PlacedLabel> placed;
    // With a derived label d, p^2 M_d = p^2 I - p^2 M_1 - sum of the placed
    // parts must be a valid contribution for derived_cartan. Without one the
    // placed parts must sum to p^2 I - p^2 M_1 exactly.
    std::optional<std::string> derived;
    std::optional<IntMatrix> derived_cartan;
    std::vector<Congruence> congruences;
    std::size_t max_families = 0;  // 0 = all
};

struct PlacedFamily {
    std::map<std::string, CycMatrix> q;        // every non-trivial label, including conjugates and derived
    std::map<std::string, CycMatrix> scaled;   // p^2 M for the same labels
};

struct PlacementResult {
    std::vector<PlacedFamily> families;
    std::size_t nodes = 0;
    bool truncated = false;
};

// A single rational label without Galois pairs is solved through
// orthogonal_embeddings; otherwise rows are placed position by position.
PlacementResult place(const PlacementProblem& problem);

// Every Q (k x e) with q1^T Q == 0 and Q^T Q == c, one of each pair +-Q
// (first nonzero entry positive). Q = K T for a saturated basis K of the
// orthogonal complement, so the search runs in dimension k - l.
std::vector<IntMatrix> orthogonal_embeddings(const IntMatrix& q1, const IntMatrix& c);

// X with p^2 X c^-1 X^T == y and X^T X == c, if one exists.
std::optional<IntMatrix> reconstruct_with_cartan(const IntMatrix& y, const IntMatrix& c, long p);

}  // namespace isotypy
