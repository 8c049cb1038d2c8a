#include "isotypy/stable_chars.hpp"

#include "isotypy/errors.hpp"
#include "isotypy/exact_linalg.hpp"

#include <numeric>
#include <set>
#include <sstream>

namespace isotypy {

bool FusionPartition::valid() const {
    const long n = p * p;
    if (classes.empty() || classes[0] != std::vector<long>{0}) return false;
    std::vector<int> hit(n, 0);
    for (const auto& c : classes) {
        if (c.empty()) return false;
        for (long x : c) {
            if (x < 0 || x >= n || hit[x]++) return false;
        }
    }
    for (int h : hit)
        if (h != 1) return false;
    return true;
}

CycMatrix irr_table(long p, DefectShape shape) {
    const long n = p * p;
    const unsigned cond = static_cast<unsigned>(shape == DefectShape::Cyclic ? n : p);
    CycMatrix t(n, n, cond);
    for (long j = 0; j < n; ++j)
        for (long x = 0; x < n; ++x) {
            long e;
            if (shape == DefectShape::Cyclic) {
                e = (j * x) % n;
            } else {
                Vec2 a = index_vec(j, p), v = index_vec(x, p);
                e = (static_cast<long>(a[0]) * v[0] + static_cast<long>(a[1]) * v[1]) % p;
            }
            t.set(j, x, CycInt::zeta(cond, e));
        }
    return t;
}

std::vector<StableCharacter> stable_basis(const FusionPartition& partition) {
    if (!partition.valid()) throw Error("invalid-partition", "classes must partition D with {1} first");
    const long n = partition.p * partition.p;
    CycMatrix table = irr_table(partition.p, partition.shape);
    // Column (lambda_j(x) - lambda_j(rep)) for every non-representative x.
    std::vector<std::pair<long, long>> diffs;
    for (const auto& c : partition.classes)
        for (std::size_t i = 1; i < c.size(); ++i) diffs.emplace_back(c[i], c[0]);
    CycMatrix a(n, diffs.size(), table.conductor());
    for (long j = 0; j < n; ++j)
        for (std::size_t d = 0; d < diffs.size(); ++d)
            a.set(j, d, table(j, diffs[d].first) - table(j, diffs[d].second));
    IntMatrix basis = integral_kernel_basis(rationalize(a));
    std::vector<StableCharacter> out;
    for (std::size_t c = 0; c < basis.cols(); ++c) {
        StableCharacter s;
        s.coords = basis.col(c);
        for (const auto& x : s.coords) {
            if (x == 0) continue;
            if (x < 0)
                for (auto& y : s.coords) y = -y;
            break;
        }
        for (const auto& cls : partition.classes) {
            CycInt v(table.conductor(), {Int(0)});
            for (long j = 0; j < n; ++j)
                if (s.coords[j] != 0) v += table(j, cls[0]) * s.coords[j];
            s.values_on_reps.push_back(v);
        }
        out.push_back(std::move(s));
    }
    return out;
}

FusionPartition rational_coarsening(const FusionPartition& partition) {
    const long p = partition.p, n = p * p;
    std::vector<long> cls_of(n, -1);
    for (std::size_t c = 0; c < partition.classes.size(); ++c)
        for (long x : partition.classes[c]) cls_of[x] = static_cast<long>(c);
    // union-find over classes
    std::vector<long> parent(partition.classes.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](long x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (long x = 0; x < n; ++x)
        for (long k = 1; k < n; ++k) {
            if (std::gcd(k, p) != 1) continue;
            long y;
            if (partition.shape == DefectShape::Cyclic) {
                y = (x * k) % n;
            } else {
                Vec2 v = index_vec(x, p);
                y = vec_index({static_cast<std::int32_t>(v[0] * k % p), static_cast<std::int32_t>(v[1] * k % p)}, p);
            }
            long a = find(cls_of[x]), b = find(cls_of[y]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    FusionPartition out{p, partition.shape, {}};
    std::vector<long> slot(partition.classes.size(), -1);
    for (std::size_t c = 0; c < partition.classes.size(); ++c) {
        long r = find(static_cast<long>(c));
        if (slot[r] < 0) {
            slot[r] = static_cast<long>(out.classes.size());
            out.classes.emplace_back();
        }
        auto& dst = out.classes[slot[r]];
        dst.insert(dst.end(), partition.classes[c].begin(), partition.classes[c].end());
    }
    return out;
}

std::vector<StableCharacter> rational_stable_basis(const FusionPartition& partition) {
    return stable_basis(rational_coarsening(partition));
}

FusionPartition orbit_partition(const InertialCandidate& c) {
    FusionPartition out{c.p, DefectShape::ElementaryAbelian, {{0}}};
    for (const auto& o : c.orbit_data) {
        std::vector<long> cls;
        cls.push_back(vec_index(o.rep, c.p));
        for (const auto& v : o.members)
            if (v != o.rep) cls.push_back(vec_index(v, c.p));
        out.classes.push_back(std::move(cls));
    }
    return out;
}

std::string Congruence::str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (coeffs[i] == 0) continue;
        if (!first) os << " + ";
        os << coeffs[i].get_str() << "*M_" << labels[i];
        first = false;
    }
    if (first) os << "0";
    os << " == 0 (mod " << modulus.get_str() << ")";
    return os.str();
}

std::vector<Congruence> congruence_from_stable(const std::map<std::string, Int>& lambda_values, long p) {
    Int g = p * p;
    for (const auto& [label, v] : lambda_values) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    Congruence c;
    c.modulus = Int(p * p) / g;
    for (const auto& [label, v] : lambda_values) {
        Int x = v / g;
        mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), c.modulus.get_mpz_t());
        c.labels.push_back(label);
        c.coeffs.push_back(x);
    }
    return {c};
}

}  // namespace isotypy
