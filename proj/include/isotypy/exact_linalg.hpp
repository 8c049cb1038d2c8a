#pragma once

#include "isotypy/int_matrix.hpp"

#include <optional>

namespace isotypy {

// u * a * v == d, u and v unimodular, d diagonal with d[i] | d[i+1].
struct SnfResult {
    IntMatrix d;
    IntMatrix u;
    IntMatrix v;
    std::size_t rank() const;
    std::vector<Int> diagonal() const;  // length min(rows, cols), zeros for rank deficiency
};

SnfResult smith_normal_form(const IntMatrix& a);

// Elementary divisors only (no transforms), including zeros.
std::vector<Int> elementary_divisors(const IntMatrix& a);

// Number of elementary divisors with p-adic valuation exactly 1 (n_p).
std::size_t multiplicity_of_p(const IntMatrix& c, const Int& p);

// Row-style Hermite normal form: echelon, positive pivots, entries above a
// pivot reduced into [0, pivot). Zero rows dropped.
IntMatrix hermite_rows(const IntMatrix& a);

// Columns form a saturated basis of the left kernel {x : x^T a = 0},
// in Hermite-reduced column form. Row count of the result is a.rows().
IntMatrix integral_kernel_basis(const IntMatrix& a);

// Columns form a saturated basis of {x : a x = 0}.
IntMatrix integral_right_kernel_basis(const IntMatrix& a);

// L with L*x == I, if x has all elementary divisors equal to 1.
std::optional<IntMatrix> integral_left_inverse(const IntMatrix& x);

// Saturated basis of {x integral : y x = lambda x}.
IntMatrix saturated_eigenspace(const IntMatrix& y, const Int& lambda);

// Integral S with e*S == x, if one exists.
std::optional<IntMatrix> express_in_basis(const IntMatrix& e, const IntMatrix& x);

Int determinant(const IntMatrix& a);
std::size_t rank(const IntMatrix& a);
bool is_unimodular(const IntMatrix& s);

IntMatrix adjugate(const IntMatrix& a);
RatMatrix inverse(const IntMatrix& a);  // throws on singular input
std::optional<IntMatrix> integral_inverse(const IntMatrix& a);

// Positive definiteness via exact leading principal minors.
bool is_positive_definite(const IntMatrix& a);

}  // namespace isotypy
