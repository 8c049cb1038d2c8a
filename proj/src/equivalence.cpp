#include "isotypy/equivalence.hpp"

#include "isotypy/errors.hpp"
#include "isotypy/exact_linalg.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace isotypy {

IntMatrix EquivalenceWitness::apply(const IntMatrix& x) const {
    IntMatrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(perm[i], j) * Int(signs[i]);
    return out;
}

CycMatrix EquivalenceWitness::apply(const CycMatrix& x) const {
    CycMatrix out(x.rows(), x.cols(), x.conductor());
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) out.set(i, j, signs[i] > 0 ? x(perm[i], j) : -x(perm[i], j));
    return out;
}

IntMatrix EquivalenceWitness::permutation_matrix() const {
    IntMatrix m(perm.size(), perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) m(i, perm[i]) = signs[i];
    return m;
}

IntMatrix projector(const IntMatrix& x, long p) {
    IntMatrix c = x.transpose() * x;
    Int det = determinant(c);
    if (det == 0) throw Error("rank-deficient", "projector needs full column rank");
    IntMatrix num = x * adjugate(c) * x.transpose() * Int(p * p);
    if (!num.divisible_by(det)) throw Error("non-integral-projector", "p^2 X C^-1 X^T is not integral");
    return num.divexact(det);
}

CycMatrix basis_invariant(const CycMatrix& x) {
    CycMatrix c = x.transpose() * x.conj();
    if (!c.is_rational()) throw Error("model-violation", "X^T conj(X) is not rational");
    IntMatrix ci = c.to_int();
    if (determinant(ci) == 0) throw Error("rank-deficient", "X does not have full column rank");
    return x.conj() * CycMatrix(adjugate(ci)) * x.transpose();
}

namespace {

CycInt normalized(const CycInt& v) { return v.is_rational() ? CycInt(v.rational_value()) : v; }

// Entry values (tuples over labels) mapped to small ids, with negation.
struct SignedValueTable {
    std::map<std::vector<CycInt>, int> ids;
    std::vector<int> neg;

    SignedValueTable() {
        neg.push_back(0);  // id 0 is the zero tuple, registered lazily
    }

    int id(const std::vector<CycInt>& t) {
        bool zero = std::all_of(t.begin(), t.end(), [](const CycInt& v) { return v.is_zero(); });
        if (zero) return 0;
        auto it = ids.find(t);
        if (it != ids.end()) return it->second;
        std::vector<CycInt> m;
        for (const auto& v : t) m.push_back(normalized(-v));
        int a = static_cast<int>(neg.size());
        ids[t] = a;
        neg.push_back(a);
        if (m != t) {
            int b = static_cast<int>(neg.size());
            ids[m] = b;
            neg.push_back(a);
            neg[a] = b;
        }
        return a;
    }
    int abs_id(int v) const { return std::min(v, neg[v]); }
};

using IdMatrix = std::vector<std::vector<int>>;

IdMatrix to_ids(const std::vector<CycMatrix>& zs, SignedValueTable& table) {
    const std::size_t k = zs.front().rows();
    IdMatrix out(k, std::vector<int>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<CycInt> t;
            for (const auto& z : zs) t.push_back(normalized(z(i, j)));
            out[i][j] = table.id(t);
        }
    return out;
}

struct RowKey {
    int diag;
    std::vector<int> absolute;
    auto operator<=>(const RowKey&) const = default;
};

class SignedPermSearch {
public:
    SignedPermSearch(const IdMatrix& a, const IdMatrix& b, const SignedValueTable& t) : a_(a), b_(b), t_(t), k_(a.size()) {
        for (std::size_t i = 0; i < k_; ++i) {
            ka_.push_back(key(a_, i));
            kb_.push_back(key(b_, i));
        }
        // BFS order through the nonzero graph of b
        std::vector<bool> seen(k_, false);
        for (std::size_t s = 0; s < k_; ++s) {
            if (seen[s]) continue;
            std::deque<std::size_t> q{s};
            seen[s] = true;
            while (!q.empty()) {
                std::size_t i = q.front();
                q.pop_front();
                order_.push_back(i);
                for (std::size_t j = 0; j < k_; ++j)
                    if (!seen[j] && b_[i][j] != 0) {
                        seen[j] = true;
                        q.push_back(j);
                    }
            }
        }
        perm_.assign(k_, k_);
        sign_.assign(k_, 0);
        used_.assign(k_, false);
    }

    // visit(perm, signs) returns true to stop
    template <class F>
    void run(F&& visit) {
        std::vector<RowKey> sa = ka_, sb = kb_;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return;
        rec(0, visit);
    }

private:
    RowKey key(const IdMatrix& m, std::size_t i) const {
        RowKey r{m[i][i], {}};
        for (std::size_t j = 0; j < k_; ++j)
            if (j != i) r.absolute.push_back(t_.abs_id(m[i][j]));
        std::sort(r.absolute.begin(), r.absolute.end());
        return r;
    }

    int times(int s, int v) const { return s > 0 ? v : t_.neg[v]; }

    template <class F>
    bool rec(std::size_t depth, F& visit) {
        if (depth == k_) return visit(perm_, sign_);
        const std::size_t i = order_[depth];
        // sign forced by the first already-placed neighbour, if any
        std::size_t anchor = k_;
        for (std::size_t d = 0; d < depth; ++d)
            if (b_[i][order_[d]] != 0) {
                anchor = order_[d];
                break;
            }
        for (std::size_t c = 0; c < k_; ++c) {
            if (used_[c] || ka_[c] != kb_[i]) continue;
            int s = 1;
            if (anchor < k_) {
                int av = a_[c][perm_[anchor]];
                int bv = b_[i][anchor];
                if (times(sign_[anchor], av) == bv) s = 1;
                else if (times(-sign_[anchor], av) == bv) s = -1;
                else continue;
            }
            bool ok = true;
            for (std::size_t d = 0; d < depth && ok; ++d) {
                std::size_t j = order_[d];
                ok = times(s * sign_[j], a_[c][perm_[j]]) == b_[i][j];
            }
            if (!ok) continue;
            perm_[i] = c;
            sign_[i] = s;
            used_[c] = true;
            bool stop = rec(depth + 1, visit);
            used_[c] = false;
            perm_[i] = k_;
            sign_[i] = 0;
            if (stop) return true;
        }
        return false;
    }

    const IdMatrix& a_;
    const IdMatrix& b_;
    const SignedValueTable& t_;
    std::size_t k_;
    std::vector<RowKey> ka_, kb_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> perm_;
    std::vector<int> sign_;
    std::vector<bool> used_;
};

// Stack the power-basis coordinate matrices of x vertically.
IntMatrix stacked_coords(const CycMatrix& x, unsigned conductor) {
    CycMatrix y = x.conductor() == conductor ? x : x.lift(conductor);
    const std::size_t deg = euler_phi(conductor);
    IntMatrix out(x.rows() * deg, x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const auto& c = y(i, j).coords();
            for (std::size_t t = 0; t < deg && t < c.size(); ++t) out(t * x.rows() + i, j) = c[t];
        }
    return out;
}

// Integral unimodular S with x1 S == x2, if one exists.
std::optional<IntMatrix> basis_change(const CycMatrix& x1, const CycMatrix& x2) {
    if (x1.is_rational() && x2.is_rational()) {
        IntMatrix a = x1.to_int(), b = x2.to_int();
        IntMatrix c = b.transpose() * b;
        Int det = determinant(c);
        if (det == 0) return std::nullopt;
        // the column span of b is the det(C)-eigenspace of b adj(C) b^T
        IntMatrix e = saturated_eigenspace(b * adjugate(c) * b.transpose(), det);
        auto s1 = express_in_basis(e, a);
        auto s2 = express_in_basis(e, b);
        if (!s1 || !s2) return std::nullopt;
        auto inv1 = integral_inverse(*s1);
        if (!inv1) return std::nullopt;
        IntMatrix s = *inv1 * *s2;
        if (!is_unimodular(s) || a * s != b) return std::nullopt;
        return s;
    }
    unsigned n = lcm_conductor(x1.conductor(), x2.conductor());
    auto s = express_in_basis(stacked_coords(x1, n), stacked_coords(x2, n));
    if (!s || !is_unimodular(*s)) return std::nullopt;
    return s;
}

std::vector<std::map<std::string, std::string>> label_group(
    const std::set<std::string>& labels, const std::vector<std::map<std::string, std::string>>& gens) {
    std::map<std::string, std::string> id;
    for (const auto& l : labels) id[l] = l;
    std::vector<std::map<std::string, std::string>> out{id};
    std::set<std::map<std::string, std::string>> seen{id};
    for (std::size_t i = 0; i < out.size(); ++i)
        for (const auto& g : gens) {
            std::map<std::string, std::string> h;
            for (const auto& l : labels) {
                auto it = g.find(out[i].at(l));
                h[l] = it == g.end() ? out[i].at(l) : it->second;
            }
            if (seen.insert(h).second) out.push_back(h);
        }
    return out;
}

}  // namespace

std::vector<std::pair<std::vector<std::size_t>, std::vector<int>>> signed_permutations(
    const std::vector<CycMatrix>& z1, const std::vector<CycMatrix>& z2, std::size_t limit) {
    if (z1.empty() || z1.size() != z2.size()) throw Error("shape-mismatch", "invariant lists differ");
    SignedValueTable t;
    IdMatrix a = to_ids(z1, t), b = to_ids(z2, t);
    std::vector<std::pair<std::vector<std::size_t>, std::vector<int>>> out;
    SignedPermSearch s(a, b, t);
    s.run([&](const std::vector<std::size_t>& p, const std::vector<int>& g) {
        out.emplace_back(p, g);
        return limit > 0 && out.size() >= limit;
    });
    return out;
}

std::optional<EquivalenceWitness> family_unique(const std::map<std::string, CycMatrix>& ref,
                                                const std::map<std::string, CycMatrix>& alt, long p,
                                                const std::vector<std::map<std::string, std::string>>& label_symmetries) {
    (void)p;
    std::set<std::string> labels, alt_labels;
    for (const auto& [l, m] : ref) labels.insert(l);
    for (const auto& [l, m] : alt) alt_labels.insert(l);
    if (labels != alt_labels || labels.empty()) throw Error("shape-mismatch", "label sets differ");
    const std::size_t k = ref.begin()->second.rows();
    for (const auto& [l, m] : ref)
        if (m.rows() != k || alt.at(l).rows() != k) throw Error("shape-mismatch", "row counts differ");
    std::map<std::string, CycMatrix> zr, za;
    for (const auto& [l, m] : ref) zr[l] = basis_invariant(m);
    for (const auto& [l, m] : alt) za[l] = basis_invariant(m);
    for (const auto& tau : label_group(labels, label_symmetries)) {
        bool shapes = true;
        for (const auto& l : labels) shapes = shapes && ref.at(l).cols() == alt.at(tau.at(l)).cols();
        if (!shapes) continue;
        std::vector<CycMatrix> z1, z2;
        for (const auto& l : labels) {
            z1.push_back(za.at(tau.at(l)));
            z2.push_back(zr.at(l));
        }
        SignedValueTable t;
        IdMatrix a = to_ids(z1, t), b = to_ids(z2, t);
        std::optional<EquivalenceWitness> found;
        SignedPermSearch s(a, b, t);
        s.run([&](const std::vector<std::size_t>& perm, const std::vector<int>& signs) {
            EquivalenceWitness w;
            w.perm = perm;
            w.signs = signs;
            w.label_map = tau;
            for (const auto& l : labels) {
                auto sm = basis_change(w.apply(alt.at(tau.at(l))), ref.at(l));
                if (!sm) return false;
                w.transforms[l] = *sm;
            }
            found = std::move(w);
            return true;
        });
        if (found) return found;
    }
    return std::nullopt;
}

std::optional<EquivalenceWitness> essentially_equal(const CycMatrix& x1, const CycMatrix& x2, long p) {
    if (x1.rows() != x2.rows() || x1.cols() != x2.cols()) throw Error("shape-mismatch", "matrices differ in shape");
    auto w = family_unique({{"x", x2}}, {{"x", x1}}, p);
    if (!w) return std::nullopt;
    return w;
}

std::optional<EquivalenceWitness> essentially_equal(const IntMatrix& x1, const IntMatrix& x2, long p) {
    if (x1.rows() != x2.rows() || x1.cols() != x2.cols()) throw Error("shape-mismatch", "matrices differ in shape");
    if (!integral_left_inverse(x1) || !integral_left_inverse(x2))
        throw Error("no-left-inverse", "essentially_equal needs integral left inverses");
    return essentially_equal(CycMatrix(x1), CycMatrix(x2), p);
}

bool verify_witness(const std::map<std::string, CycMatrix>& ref, const std::map<std::string, CycMatrix>& alt,
                    const EquivalenceWitness& w) {
    const std::size_t k = w.perm.size();
    std::vector<bool> hit(k, false);
    for (std::size_t i = 0; i < k; ++i) {
        if (w.perm[i] >= k || hit[w.perm[i]] || (w.signs[i] != 1 && w.signs[i] != -1)) return false;
        hit[w.perm[i]] = true;
    }
    for (const auto& [l, m] : ref) {
        auto lm = w.label_map.find(l);
        std::string src = lm == w.label_map.end() ? l : lm->second;
        auto a = alt.find(src);
        auto s = w.transforms.find(l);
        if (a == alt.end() || s == w.transforms.end()) return false;
        if (a->second.rows() != k || !is_unimodular(s->second)) return false;
        if (w.apply(a->second) * CycMatrix(s->second) != m) return false;
    }
    return true;
}

}  // namespace isotypy
