#include "isotypy/block_model.hpp"

#include "isotypy/errors.hpp"
#include "isotypy/exact_linalg.hpp"

#include <set>

namespace isotypy {

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

const OrbitSpec& BlockSpec::orbit(const std::string& label) const {
    for (const auto& o : orbits)
        if (o.label == label) return o;
    throw Error("unknown-label", "no orbit labelled " + label);
}

std::vector<std::string> BlockSpec::violations() const {
    std::vector<std::string> out;
    if (!is_prime(p)) out.push_back("p is not prime");
    if (k < l || l < 0) out.push_back("need k >= l >= 0");
    long sum_e = 0, sum_sizes = 0;
    bool sizes_known = true;
    std::set<std::string> labels;
    for (const auto& o : orbits) {
        if (!labels.insert(o.label).second) out.push_back("duplicate orbit label " + o.label);
        if (o.e <= 0) out.push_back("orbit " + o.label + ": e must be positive");
        else if ((p - 1) % o.e != 0) out.push_back("orbit " + o.label + ": e does not divide p-1");
        sum_e += o.e;
        std::optional<long> size = o.size;
        if (inertial_order) {
            if (o.e > 0 && *inertial_order % o.e != 0) out.push_back("orbit " + o.label + ": e does not divide |I|");
            else if (o.e > 0) {
                long s = *inertial_order / o.e;
                if (size && *size != s) out.push_back("orbit " + o.label + ": size != |I|/e");
                size = s;
            }
        }
        if (size)
            sum_sizes += *size;
        else
            sizes_known = false;
    }
    if (k > l && orbits.empty()) out.push_back("k > l but no orbits");
    if (sum_e != k - l) out.push_back("sum of e_u != k - l");
    if (sizes_known && !orbits.empty() && sum_sizes != p * p - 1) out.push_back("orbit sizes do not sum to p^2 - 1");
    if (q1) {
        if (static_cast<long>(q1->rows()) != k || static_cast<long>(q1->cols()) != l)
            out.push_back("q1 is not k x l");
        else if (static_cast<long>(rank(*q1)) != l)
            out.push_back("q1 does not have full column rank");
        else if (!is_positive_definite(q1->transpose() * *q1))
            out.push_back("C1 is not positive definite");
    }
    return out;
}

IntMatrix cartan_cyclic_defect(long p, long e) {
    if (e <= 0 || (p - 1) % e != 0) throw Error("invalid-orbit", "e must divide p-1");
    IntMatrix c(e, e);
    for (long i = 0; i < e; ++i)
        for (long j = 0; j < e; ++j) c(i, j) = p * ((p - 1) / e + (i == j ? 1 : 0));
    return c;
}

namespace {

void check_diagonal(const IntMatrix& s, long p) {
    for (std::size_t i = 0; i < s.rows(); ++i) {
        if (s(i, i) <= 0) throw Error("height-zero-violation", "non-positive diagonal entry in p^2*M");
        if (s(i, i) % p == 0) throw Error("height-zero-violation", "diagonal entry of p^2*M divisible by p");
    }
}

}  // namespace

Contribution contribution(const IntMatrix& q, const IntMatrix& c, long p) {
    if (q.transpose() * q != c) throw Error("model-violation", "c != q^T q");
    Int d = determinant(c);
    if (d == 0) throw Error("model-violation", "singular Cartan matrix");
    IntMatrix num = q * adjugate(c) * q.transpose() * Int(p * p);
    if (!num.divisible_by(d)) throw Error("model-violation", "p^2 * M is not integral");
    Contribution out{p, num.divexact(d)};
    check_diagonal(out.scaled, p);
    return out;
}

CycContribution contribution(const CycMatrix& q, const IntMatrix& c, long p) {
    CycMatrix qbar = q.conj();
    CycMatrix gram = q.transpose() * qbar;
    if (!gram.is_rational() || gram.to_int() != c) throw Error("model-violation", "c != q^T conj(q)");
    Int d = determinant(c);
    if (d == 0) throw Error("model-violation", "singular Cartan matrix");
    CycMatrix num = qbar * CycMatrix(adjugate(c) * Int(p * p)) * q.transpose();
    if (!num.divisible_by(d)) throw Error("model-violation", "p^2 * M is not integral");
    CycMatrix scaled(num.rows(), num.cols(), num.conductor());
    for (std::size_t i = 0; i < num.rows(); ++i)
        for (std::size_t j = 0; j < num.cols(); ++j) {
            std::vector<Int> cs = num(i, j).coords();
            for (auto& x : cs) x /= d;
            scaled.set(i, j, CycInt(num.conductor(), cs));
        }
    for (std::size_t i = 0; i < scaled.rows(); ++i) {
        const CycInt& x = scaled(i, i);
        if (x.is_zero() || x.divisible_by(Int(p)))
            throw Error("height-zero-violation", "diagonal entry of p^2*M divisible by p");
        if (x.is_rational() && x.rational_value() < 0)
            throw Error("height-zero-violation", "negative diagonal entry in p^2*M");
    }
    return {p, scaled};
}

bool contribution_sum_check(const std::vector<Contribution>& parts) { return contribution_sum_check(parts, {}); }

bool contribution_sum_check(const std::vector<Contribution>& rational_parts,
                            const std::vector<CycContribution>& cyclotomic_parts) {
    if (rational_parts.empty() && cyclotomic_parts.empty()) return false;
    long p = rational_parts.empty() ? cyclotomic_parts[0].p : rational_parts[0].p;
    std::size_t k = rational_parts.empty() ? cyclotomic_parts[0].scaled.rows() : rational_parts[0].scaled.rows();
    CycMatrix total(k, k, 1);
    for (const auto& c : rational_parts) {
        if (c.p != p || c.scaled.rows() != k) throw Error("shape-mismatch", "contribution parts disagree");
        total = total + CycMatrix(c.scaled);
    }
    for (const auto& c : cyclotomic_parts) {
        if (c.p != p || c.scaled.rows() != k) throw Error("shape-mismatch", "contribution parts disagree");
        total = total + c.scaled;
    }
    if (!total.is_rational()) return false;
    return total.to_int() == IntMatrix::identity(k) * Int(p * p);
}

bool star_congruence_check(const Contribution& a, const Contribution& b, const Int& coeff_a, const Int& coeff_b,
                           const Int& modulus) {
    if (a.scaled.rows() != b.scaled.rows() || a.scaled.cols() != b.scaled.cols())
        throw Error("shape-mismatch", "contributions differ in shape");
    return (a.scaled * coeff_a + b.scaled * coeff_b).divisible_by(modulus);
}

bool lower_defect_bound_check(const IntMatrix& c1, long p, long k, long l, long num_orbits) {
    return static_cast<long>(multiplicity_of_p(c1, Int(p))) <= k - l - num_orbits;
}

IntMatrix gamma_canonical(long p, long e) {
    if (e <= 0 || (p - 1) % e != 0) throw Error("invalid-orbit", "e must divide p-1");
    const long ones = (p - 1) / e;
    const long block = e + ones;
    IntMatrix g(p * block, e);
    for (long c = 0; c < p; ++c) {
        for (long i = 0; i < e; ++i) g(c * block + i, i) = 1;
        for (long r = 0; r < ones; ++r)
            for (long j = 0; j < e; ++j) g(c * block + e + r, j) = 1;
    }
    return g;
}

}  // namespace isotypy
