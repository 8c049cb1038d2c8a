#pragma once

#include "isotypy/cyclotomic.hpp"
#include "isotypy/int_matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace isotypy {

struct OrbitSpec {
    std::string label;
    long e = 1;                  // |C_I(u)| = l(b_u)
    long element_order = 0;      // p or p^2; 0 means p
    std::optional<std::string> algebraically_conjugate_to;
    std::optional<long> size;    // orbit length |I : C_I(u)|, when known
};

struct BlockSpec {
    long p = 0;
    long k = 0;
    long l = 0;
    std::vector<OrbitSpec> orbits;
    std::optional<IntMatrix> q1;
    std::optional<long> inertial_order;

    const OrbitSpec& orbit(const std::string& label) const;
    // Empty when all structural invariants hold; otherwise one message each.
    std::vector<std::string> violations() const;
};

// p^2 * M_u, stored exactly.
struct Contribution {
    long p = 0;
    IntMatrix scaled;
};

// Same for complex-valued Q_u; entries of p^2 * M_u in Z[zeta_n].
struct CycContribution {
    long p = 0;
    CycMatrix scaled;
};

// C_u = p((p-1)/e + delta_ij), e x e.
IntMatrix cartan_cyclic_defect(long p, long e);

// p^2 * q * c^-1 * q^T for real q with c = q^T q.
Contribution contribution(const IntMatrix& q, const IntMatrix& c, long p);
// p^2 * conj(q) * c^-1 * q^T with c = q^T conj(q).
CycContribution contribution(const CycMatrix& q, const IntMatrix& c, long p);

bool contribution_sum_check(const std::vector<Contribution>& parts);
bool contribution_sum_check(const std::vector<Contribution>& rational_parts,
                            const std::vector<CycContribution>& cyclotomic_parts);

// coeff_a * a + coeff_b * b == 0 (mod modulus), entrywise.
bool star_congruence_check(const Contribution& a, const Contribution& b, const Int& coeff_a, const Int& coeff_b,
                           const Int& modulus);

// n_p(c1) <= k - l - num_orbits
bool lower_defect_bound_check(const IntMatrix& c1, long p, long k, long l, long num_orbits);

// p stacked copies of [I_e ; (p-1)/e all-ones rows].
IntMatrix gamma_canonical(long p, long e);

bool is_prime(long n);

}  // namespace isotypy
