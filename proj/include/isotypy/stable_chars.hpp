#pragma once

#include "isotypy/cyclotomic.hpp"
#include "isotypy/inertial.hpp"

#include <map>
#include <string>
#include <vector>

namespace isotypy {

enum class DefectShape { ElementaryAbelian, Cyclic };

// Partition of D (|D| = p^2) into fusion classes. Elements are numbered
// 0..p^2-1: row-major (x * p + y) over F_p^2 for the elementary abelian
// group, residues mod p^2 for the cyclic group. Class 0 must be {0}.
struct FusionPartition {
    long p = 0;
    DefectShape shape = DefectShape::ElementaryAbelian;
    std::vector<std::vector<long>> classes;

    bool valid() const;
};

struct StableCharacter {
    std::vector<Int> coords;             // over Irr(D), same numbering as elements
    std::vector<CycInt> values_on_reps;  // one value per class, at its first element
};

// p^2 x p^2 table, rows = characters, columns = elements.
CycMatrix irr_table(long p, DefectShape shape);

// Saturated Z-basis of the F-stable generalized characters. The rank equals
// the number of classes when every class is closed under x -> x^k for k
// prime to p (always true for fusion by an automorphism group); for other
// partitions it can be smaller.
std::vector<StableCharacter> stable_basis(const FusionPartition& partition);

// Merge classes related by the power maps x -> x^k, gcd(k, p) = 1.
FusionPartition rational_coarsening(const FusionPartition& partition);

// Basis of the stable characters with rational values everywhere.
std::vector<StableCharacter> rational_stable_basis(const FusionPartition& partition);

// The orbit partition of an inertial quotient acting on F_p^2.
FusionPartition orbit_partition(const InertialCandidate& c);

// sum_w coeffs[w] * (p^2 M_w) == 0 (mod modulus), entrywise.
struct Congruence {
    std::vector<std::string> labels;
    std::vector<Int> coeffs;
    Int modulus;

    bool trivial() const { return modulus == 1; }
    std::string str() const;
};

// From sum_w lambda(w) M_w integral: divide lambda and p^2 by their gcd
// and reduce coefficients mod the new modulus.
std::vector<Congruence> congruence_from_stable(const std::map<std::string, Int>& lambda_values, long p);

}  // namespace isotypy
