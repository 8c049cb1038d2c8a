#include "isotypy/embeddings.hpp"

#include "isotypy/errors.hpp"
#include "isotypy/exact_linalg.hpp"
#include "isotypy/placement.hpp"
#include "isotypy/short_vectors.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace isotypy {

namespace {

using Row = std::vector<long>;

long to_long(const Int& v) {
    if (!v.fits_slong_p()) throw Error("overflow", "value does not fit a machine word");
    return v.get_si();
}

Row sign_normalized(Row r) {
    for (long v : r) {
        if (v == 0) continue;
        if (v < 0)
            for (auto& x : r) x = -x;
        break;
    }
    return r;
}

// det of a small symmetric matrix given by index subset, exact in __int128
__int128 minor_det(const std::vector<long>& d, std::size_t l, const std::vector<std::size_t>& idx) {
    const std::size_t n = idx.size();
    std::vector<__int128> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = d[idx[i] * l + idx[j]];
    __int128 sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k * n + k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p * n + k] == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
        prev = a[k * n + k];
    }
    return sign * a[(n - 1) * n + (n - 1)];
}

bool is_psd(const std::vector<long>& d, std::size_t l) {
    for (std::size_t i = 0; i < l; ++i)
        if (d[i * l + i] < 0) return false;
    for (unsigned mask = 1; mask < (1u << l); ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < l; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        if (idx.size() == 1) continue;
        if (minor_det(d, l, idx) < 0) return false;
    }
    return true;
}

// Count-vector search for multisets {r} with sum r r^T == gram.
struct GramSearch {
    std::size_t l = 0;
    std::vector<Row> cand;
    std::vector<long> weight;  // r^T adj(gram) r; sums to l * det(gram)
    std::vector<long> min_suffix, max_suffix;
    long rows = 0;
    bool allow_zero = false;
    std::map<long, long> target_counts;  // weight -> remaining count (if targeted)
    bool targeted = false;
    std::vector<long> sorted_bounds;     // per-row weight bounds, decreasing (if any)

    struct State {
        std::size_t i = 0;
        long rows_left = 0;
        long trace_left = 0;
        std::vector<long> deficit;
        std::vector<long> counts;
        std::map<long, long> targets;
    };

    void prepare() {
        const std::size_t n = cand.size();
        min_suffix.assign(n + 1, std::numeric_limits<long>::max() / 4);
        max_suffix.assign(n + 1, 0);
        for (std::size_t i = n; i-- > 0;) {
            min_suffix[i] = std::min(weight[i], min_suffix[i + 1]);
            max_suffix[i] = std::max(weight[i], max_suffix[i + 1]);
        }
    }

    bool leaf_ok(const State& s) const {
        if (sorted_bounds.empty()) return true;
        std::vector<long> ws;
        for (std::size_t i = 0; i < cand.size(); ++i)
            for (long c = 0; c < s.counts[i]; ++c) ws.push_back(weight[i]);
        for (long z = 0; z < s.rows_left; ++z) ws.push_back(0);
        std::sort(ws.rbegin(), ws.rend());
        for (std::size_t i = 0; i < ws.size(); ++i)
            if (ws[i] > sorted_bounds[i]) return false;
        return true;
    }

    bool complete(const State& s) const {
        if (s.trace_left != 0) return false;
        if (std::any_of(s.deficit.begin(), s.deficit.end(), [](long v) { return v != 0; })) return false;
        if (s.rows_left != 0 && !allow_zero) return false;
        if (targeted)
            for (const auto& [w, c] : s.targets)
                if (c != 0 && !(w == 0 && c == s.rows_left)) return false;
        return leaf_ok(s);
    }

    bool viable(const State& s) const {
        if (s.rows_left < 0 || s.trace_left < 0) return false;
        // weights are positive, so a spent trace that is not a complete leaf is dead
        if (s.trace_left == 0 || s.i >= cand.size()) return false;
        if (s.trace_left > s.rows_left * max_suffix[s.i]) return false;
        if (!allow_zero && s.trace_left < s.rows_left * min_suffix[s.i]) return false;
        return true;
    }

    // children of s at candidate s.i: counts 0, 1, ... while the deficit stays PSD
    template <class F>
    void expand(const State& s, F&& emit) const {
        const Row& r = cand[s.i];
        State c = s;
        c.i = s.i + 1;
        for (long n = 0;; ++n) {
            if (n > 0) {
                for (std::size_t a = 0; a < l; ++a)
                    for (std::size_t b = 0; b < l; ++b) c.deficit[a * l + b] -= r[a] * r[b];
                c.rows_left -= 1;
                c.trace_left -= weight[s.i];
                c.counts[s.i] = n;
                if (c.rows_left < 0 || c.trace_left < 0) break;
                if (targeted) {
                    auto it = c.targets.find(weight[s.i]);
                    if (it == c.targets.end() || it->second == 0) break;
                    --it->second;
                }
                if (!is_psd(c.deficit, l)) break;
            }
            emit(c);
        }
    }

    void dfs(const State& s, std::vector<std::vector<long>>& out) const {
        if (complete(s)) {
            out.push_back(s.counts);
            return;
        }
        if (!viable(s)) return;
        expand(s, [&](const State& c) { dfs(c, out); });
    }

    State root(const IntMatrix& gram, long total_trace) const {
        State s;
        s.rows_left = rows;
        s.trace_left = total_trace;
        s.deficit.resize(l * l);
        for (std::size_t a = 0; a < l; ++a)
            for (std::size_t b = 0; b < l; ++b) s.deficit[a * l + b] = to_long(gram(a, b));
        s.counts.assign(cand.size(), 0);
        s.targets = target_counts;
        return s;
    }
};

IntMatrix counts_to_matrix(const std::vector<Row>& cand, const std::vector<long>& counts, long k, std::size_t l) {
    IntMatrix x(k, l);
    std::size_t r = 0;
    for (std::size_t i = 0; i < cand.size(); ++i)
        for (long c = 0; c < counts[i]; ++c, ++r)
            for (std::size_t j = 0; j < l; ++j) x(r, j) = cand[i][j];
    return x;
}

struct SearchSetup {
    GramSearch search;
    std::vector<RowCandidate> candidates;
    long total = 0;
    bool infeasible = false;
};

SearchSetup setup(const EmbeddingProblem& pr) {
    pr.validate();
    SearchSetup st;
    st.candidates = candidate_rows(pr);
    const std::size_t l = pr.c.rows();
    Int det = determinant(pr.c);
    GramSearch& g = st.search;
    g.l = l;
    g.rows = pr.k;
    g.allow_zero = !pr.forbid_zero_rows;
    IntMatrix adj = adjugate(pr.c);
    for (const auto& c : st.candidates) {
        g.cand.push_back(c.r);
        g.weight.push_back(c.scaled_m);
    }
    g.prepare();
    st.total = pr.p * pr.p * static_cast<long>(l);
    long best = 0;
    for (const auto& c : st.candidates) best = std::max(best, c.scaled_m);
    st.infeasible = best * pr.k < st.total;
    if (pr.diag_targets) {
        g.targeted = true;
        for (long t : *pr.diag_targets) ++g.target_counts[t];
        long sum = 0;
        for (long t : *pr.diag_targets) sum += t;
        if (sum != st.total) st.infeasible = true;
    }
    if (!pr.diag_bounds.empty()) {
        g.sorted_bounds = pr.diag_bounds;
        std::sort(g.sorted_bounds.rbegin(), g.sorted_bounds.rend());
    }
    return st;
}

EmbeddingSolutionSet finish(const EmbeddingProblem& pr, const SearchSetup& st,
                            const std::vector<std::vector<long>>& raw) {
    EmbeddingSolutionSet out;
    out.raw_count = raw.size();
    std::vector<IntMatrix> auts;
    if (pr.modulo_automorphisms) auts = automorphism_group(pr.c);
    std::vector<IntMatrix> canon(raw.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < raw.size(); ++i)
        canon[i] = canonical_form(counts_to_matrix(st.search.cand, raw[i], pr.k, pr.c.rows()), auts);
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
    out.solutions = std::move(canon);
    out.canonicalized = true;
    return out;
}

}  // namespace

long EmbeddingProblem::effective_bound() const { return diag_bound > 0 ? diag_bound : p * p; }

void EmbeddingProblem::validate() const {
    if (!is_prime(p)) throw Error("invalid-problem", "p must be prime");
    if (!c.is_square() || c.rows() == 0) throw Error("invalid-problem", "c must be square and non-empty");
    if (!is_positive_definite(c)) throw Error("invalid-problem", "c must be symmetric positive definite");
    if (k < static_cast<long>(c.rows())) throw Error("invalid-problem", "need k >= l");
    if (!diag_bounds.empty() && static_cast<long>(diag_bounds.size()) != k)
        throw Error("invalid-problem", "diag_bounds must have k entries");
    if (diag_targets && static_cast<long>(diag_targets->size()) != k)
        throw Error("invalid-problem", "diag_targets must have k entries");
}

std::vector<RowCandidate> candidate_rows(const EmbeddingProblem& pr) {
    pr.validate();
    const long pp = pr.p * pr.p;
    long bound = pr.effective_bound();
    for (long b : pr.diag_bounds) bound = std::max(bound, b);
    if (!pr.diag_bounds.empty()) bound = *std::max_element(pr.diag_bounds.begin(), pr.diag_bounds.end());
    if (pr.diag_targets) bound = *std::max_element(pr.diag_targets->begin(), pr.diag_targets->end());
    bound = std::min(bound, pp);
    Int det = determinant(pr.c);
    IntMatrix adj = adjugate(pr.c);
    // p^2 r^T adj r / det <= bound  <=>  r^T adj r <= bound * det / p^2
    Int lim = Int(bound) * det;
    mpz_fdiv_q_ui(lim.get_mpz_t(), lim.get_mpz_t(), static_cast<unsigned long>(pp));
    std::vector<RowCandidate> out;
    for (auto& r : short_vectors(adj, lim)) {
        Int num = 0;
        for (std::size_t a = 0; a < r.size(); ++a)
            for (std::size_t b = 0; b < r.size(); ++b) num += adj(a, b) * r[a] * r[b];
        num *= pp;
        if (!mpz_divisible_p(num.get_mpz_t(), det.get_mpz_t())) continue;
        long m = to_long(num / det);
        if (m % pr.p == 0 || m > bound) continue;
        out.push_back({r, m});
    }
    std::sort(out.begin(), out.end(), [](const RowCandidate& a, const RowCandidate& b) {
        if (a.scaled_m != b.scaled_m) return a.scaled_m > b.scaled_m;
        return a.r > b.r;
    });
    return out;
}

EmbeddingSolutionSet enumerate_serial(const EmbeddingProblem& pr) {
    SearchSetup st = setup(pr);
    if (st.infeasible) {
        EmbeddingSolutionSet out;
        out.infeasible = true;
        return out;
    }
    std::vector<std::vector<long>> raw;
    st.search.dfs(st.search.root(pr.c, st.total), raw);
    return finish(pr, st, raw);
}

EmbeddingSolutionSet enumerate(const EmbeddingProblem& pr) {
    SearchSetup st = setup(pr);
    if (st.infeasible) {
        EmbeddingSolutionSet out;
        out.infeasible = true;
        return out;
    }
    const GramSearch& g = st.search;
    // Split the tree at a fixed depth; each subtree is searched independently
    // and results are concatenated in task order.
    std::vector<GramSearch::State> frontier{g.root(pr.c, st.total)};
    std::vector<std::vector<long>> raw;
    const std::size_t split_depth = std::min<std::size_t>(3, g.cand.size());
    for (std::size_t depth = 0; depth < split_depth; ++depth) {
        std::vector<GramSearch::State> next;
        for (const auto& s : frontier) {
            if (g.complete(s)) {
                raw.push_back(s.counts);
                continue;
            }
            if (!g.viable(s)) continue;
            g.expand(s, [&](const GramSearch::State& c) { next.push_back(c); });
        }
        frontier = std::move(next);
    }
    std::vector<std::vector<std::vector<long>>> parts(frontier.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t t = 0; t < frontier.size(); ++t) g.dfs(frontier[t], parts[t]);
    for (auto& p : parts) raw.insert(raw.end(), p.begin(), p.end());
    return finish(pr, st, raw);
}

IntMatrix canonical_form(const IntMatrix& x, const std::vector<IntMatrix>& automorphisms) {
    auto normalize = [](const IntMatrix& y) {
        std::vector<Row> rows(y.rows());
        for (std::size_t i = 0; i < y.rows(); ++i) {
            Row r(y.cols());
            for (std::size_t j = 0; j < y.cols(); ++j) r[j] = to_long(y(i, j));
            rows[i] = sign_normalized(std::move(r));
        }
        std::sort(rows.rbegin(), rows.rend());
        return rows;
    };
    std::vector<Row> best = normalize(x);
    for (const auto& g : automorphisms) {
        std::vector<Row> cand = normalize(x * g);
        if (cand > best) best = std::move(cand);
    }
    IntMatrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < best.size(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = best[i][j];
    return out;
}

namespace {

// Rows of x can be matched to positions so that the diagonal of every
// congruence holds, with the derived diagonal p^2 - m1 - m.
bool diagonal_assignment(const IntMatrix& x, const CongruenceContext& ctx) {
    const std::size_t k = x.rows();
    const Int pp = ctx.p * ctx.p;
    const IntMatrix c = x.transpose() * x;
    const IntMatrix adj = adjugate(c);
    const Int det = determinant(c);
    std::vector<Int> m(k);
    for (std::size_t i = 0; i < k; ++i) {
        Int s = 0;
        for (std::size_t a = 0; a < x.cols(); ++a)
            for (std::size_t b = 0; b < x.cols(); ++b) s += x(i, a) * adj(a, b) * x(i, b);
        m[i] = s * pp / det;
    }
    auto allowed = [&](std::size_t row, std::size_t pos) {
        const Int& m1 = ctx.m1_scaled(pos, pos);
        for (const auto& cg : ctx.congruences) {
            Int t = 0;
            for (std::size_t j = 0; j < cg.labels.size(); ++j) {
                const std::string& l = cg.labels[j];
                Int v;
                if (l == "1") v = m1;
                else if (l == ctx.label) v = m[row];
                else if (ctx.derived && l == *ctx.derived) v = pp - m1 - m[row];
                else throw Error("unknown-label", "congruence label " + l);
                t += cg.coeffs[j] * v;
            }
            if (t % cg.modulus != 0) return false;
        }
        return true;
    };
    // Kuhn's augmenting paths, rows -> positions
    std::vector<long> owner(k, -1);
    for (std::size_t r = 0; r < k; ++r) {
        std::vector<bool> seen(k, false);
        std::function<bool(std::size_t)> augment = [&](std::size_t row) {
            for (std::size_t pos = 0; pos < k; ++pos) {
                if (seen[pos] || !allowed(row, pos)) continue;
                seen[pos] = true;
                if (owner[pos] < 0 || augment(static_cast<std::size_t>(owner[pos]))) {
                    owner[pos] = static_cast<long>(row);
                    return true;
                }
            }
            return false;
        };
        if (!augment(r)) return false;
    }
    return true;
}

}  // namespace

EmbeddingSolutionSet filter_by_congruences(const EmbeddingSolutionSet& set, const CongruenceContext& ctx) {
    if (ctx.congruences.empty() && !ctx.sum_relation) return set;
    EmbeddingSolutionSet out = set;
    out.solutions.clear();
    for (const auto& x : set.solutions) {
        if (!ctx.sum_relation) {
            if (diagonal_assignment(x, ctx)) out.solutions.push_back(x);
            continue;
        }
        PlacementProblem pp;
        pp.p = ctx.p;
        pp.q1 = ctx.q1;
        pp.m1_scaled = ctx.m1_scaled;
        PlacedLabel w;
        w.label = ctx.label;
        w.cartan = x.transpose() * x;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            QuadRow r;
            for (std::size_t j = 0; j < x.cols(); ++j) r.push_back({to_long(x(i, j)), 0});
            w.singles.push_back(std::move(r));
        }
        pp.placed.push_back(std::move(w));
        pp.congruences = ctx.congruences;
        if (ctx.derived) {
            if (!ctx.derived_cartan) throw Error("invalid-problem", "derived label needs its Cartan matrix");
            pp.derived = ctx.derived;
            pp.derived_cartan = ctx.derived_cartan;
        }
        pp.max_families = 1;
        if (!place(pp).families.empty()) out.solutions.push_back(x);
    }
    return out;
}

namespace {

// Multisets of exactly n sign-normalized vectors v (filtered by keep) with sum v v^T == gram.
std::vector<std::vector<Row>> decompose_gram(const IntMatrix& gram, long n, bool allow_zero,
                                             const std::function<bool(const Row&)>& keep) {
    std::vector<std::vector<Row>> out;
    const std::size_t l = gram.rows();
    bool zero = gram.is_zero();
    if (zero) {
        if (allow_zero || n == 0) out.push_back(std::vector<Row>(n, Row(l, 0)));
        return out;
    }
    Int det = determinant(gram);
    if (det <= 0) {
        // singular (positive semidefinite) remainder: scan the diagonal box
        std::vector<Row> vs;
        std::vector<long> lim(l);
        for (std::size_t a = 0; a < l; ++a) {
            long d = to_long(gram(a, a)), s = 0;
            while ((s + 1) * (s + 1) <= d) ++s;
            lim[a] = s;
        }
        Row v(l, 0);
        auto rec = [&](auto&& self, std::size_t a) -> void {
            if (a == l) {
                if (std::all_of(v.begin(), v.end(), [](long t) { return t == 0; })) return;
                if (sign_normalized(v) != v) return;
                std::vector<long> d(l * l);
                for (std::size_t i = 0; i < l; ++i)
                    for (std::size_t j = 0; j < l; ++j) d[i * l + j] = to_long(gram(i, j)) - v[i] * v[j];
                if (is_psd(d, l) && keep(v)) vs.push_back(v);
                return;
            }
            for (long t = -lim[a]; t <= lim[a]; ++t) {
                v[a] = t;
                self(self, a + 1);
            }
            v[a] = 0;
        };
        rec(rec, 0);
        std::sort(vs.rbegin(), vs.rend());
        GramSearch g;
        g.l = l;
        g.rows = n;
        g.allow_zero = allow_zero;
        g.cand = vs;
        // trace of the deficit is a valid additive weight here
        for (const auto& r : vs) {
            long w = 0;
            for (long t : r) w += t * t;
            g.weight.push_back(w);
        }
        if (vs.empty()) return out;
        g.prepare();
        long tr = to_long(gram.trace());
        std::vector<std::vector<long>> raw;
        g.dfs(g.root(gram, tr), raw);
        for (const auto& c : raw) {
            std::vector<Row> ms;
            for (std::size_t i = 0; i < vs.size(); ++i)
                for (long t = 0; t < c[i]; ++t) ms.push_back(vs[i]);
            while (static_cast<long>(ms.size()) < n) ms.push_back(Row(l, 0));
            out.push_back(std::move(ms));
        }
        return out;
    }
    IntMatrix adj = adjugate(gram);
    std::vector<Row> vs;
    for (auto& v : short_vectors(adj, det))
        if (keep(v)) vs.push_back(v);
    std::sort(vs.rbegin(), vs.rend());
    if (vs.empty()) return out;
    GramSearch g;
    g.l = l;
    g.rows = n;
    g.allow_zero = allow_zero;
    g.cand = vs;
    for (const auto& r : vs) {
        Int w = 0;
        for (std::size_t a = 0; a < l; ++a)
            for (std::size_t b = 0; b < l; ++b) w += adj(a, b) * r[a] * r[b];
        g.weight.push_back(to_long(w));
    }
    g.prepare();
    std::vector<std::vector<long>> raw;
    g.dfs(g.root(gram, to_long(det) * static_cast<long>(l)), raw);
    for (const auto& c : raw) {
        std::vector<Row> ms;
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (long t = 0; t < c[i]; ++t) ms.push_back(vs[i]);
        while (static_cast<long>(ms.size()) < n) ms.push_back(Row(l, 0));
        out.push_back(std::move(ms));
    }
    return out;
}

}  // namespace

std::vector<QuadraticSplit> solve_quadratic_split(const QuadraticSplitProblem& pr) {
    const std::size_t l = pr.g11.rows();
    if (pr.g22.rows() != l || pr.g12.rows() != l) throw Error("shape-mismatch", "Gram targets differ in size");
    if (pr.g22 != pr.g12 + pr.g12.transpose()) return {};
    if ((pr.k - pr.rational_rows) % 2 != 0 || pr.rational_rows < 0) throw Error("invalid-problem", "pair rows must be even");
    const long npairs = (pr.k - pr.rational_rows) / 2;
    IntMatrix cartan = pr.g11 + pr.g22;
    if (!is_positive_definite(cartan)) return {};
    const long pp = pr.p * pr.p;
    Int det = determinant(cartan);
    IntMatrix adj = adjugate(cartan);
    // p^2 q c^-1 q^T for q = a + b rho, as x + y rho
    auto scaled_m = [&](const Row& a, const Row& b) -> std::optional<QuadInt> {
        QuadInt s;
        for (std::size_t i = 0; i < l; ++i)
            for (std::size_t j = 0; j < l; ++j) {
                QuadInt qi{a[i], b[i]}, qj{a[j], b[j]};
                s = s + qi * qj * to_long(adj(i, j));
            }
        s = s * pp;
        long d = to_long(det);
        if (s.x % d != 0 || s.y % d != 0) return std::nullopt;
        return QuadInt{s.x / d, s.y / d};
    };
    auto rational_ok = [&](const Row& r) {
        auto m = scaled_m(r, Row(l, 0));
        return m && m->x > 0 && m->x % pr.p != 0 && 2 * m->x <= pp;
    };
    std::vector<QuadraticSplit> out;
    std::vector<IntMatrix> auts = automorphism_group(cartan);
    std::set<IntMatrix> seen;
    for (const auto& bs : decompose_gram(pr.g12, npairs, false, [](const Row&) { return true; })) {
        // a-candidates per pair: a a^T + (a-b)(a-b)^T <= g11 (diagonal test, then PSD)
        std::vector<std::vector<Row>> acand(npairs);
        for (long t = 0; t < npairs; ++t) {
            const Row& b = bs[t];
            std::vector<long> lim(l);
            for (std::size_t i = 0; i < l; ++i) {
                long d = to_long(pr.g11(i, i)), s = 0;
                while ((s + 1) * (s + 1) <= d) ++s;
                lim[i] = s;
            }
            Row a(l, 0);
            auto rec = [&](auto&& self, std::size_t i) -> void {
                if (i == l) {
                    std::vector<long> d(l * l);
                    for (std::size_t x = 0; x < l; ++x)
                        for (std::size_t y = 0; y < l; ++y)
                            d[x * l + y] = to_long(pr.g11(x, y)) - a[x] * a[y] - (a[x] - b[x]) * (a[y] - b[y]);
                    if (!is_psd(d, l)) return;
                    auto m = scaled_m(a, b);
                    if (!m || m->divisible_by(pr.p)) return;
                    QuadInt tr = *m + m->sigma();
                    if (tr.y != 0 || tr.x <= 0 || tr.x > pp) return;
                    // (a, b) and (b - a, b) describe the same pair up to orientation and sign
                    Row alt(l);
                    for (std::size_t x = 0; x < l; ++x) alt[x] = b[x] - a[x];
                    if (alt < a) return;
                    acand[t].push_back(a);
                    return;
                }
                for (long v = -lim[i]; v <= lim[i]; ++v) {
                    a[i] = v;
                    self(self, i + 1);
                }
                a[i] = 0;
            };
            rec(rec, 0);
        }
        std::vector<std::size_t> pick(npairs, 0);
        auto choose = [&](auto&& self, long t) -> void {
            if (t == npairs) {
                IntMatrix rest = pr.g11;
                for (long s = 0; s < npairs; ++s) {
                    const Row& a = acand[s][pick[s]];
                    const Row& b = bs[s];
                    for (std::size_t x = 0; x < l; ++x)
                        for (std::size_t y = 0; y < l; ++y)
                            rest(x, y) -= a[x] * a[y] + (a[x] - b[x]) * (a[y] - b[y]);
                }
                std::vector<long> d(l * l);
                for (std::size_t x = 0; x < l; ++x)
                    for (std::size_t y = 0; y < l; ++y) d[x * l + y] = to_long(rest(x, y));
                if (!is_psd(d, l)) return;
                for (const auto& rs : decompose_gram(rest, pr.rational_rows, false, rational_ok)) {
                    QuadraticSplit sp{IntMatrix(pr.k, l), IntMatrix(pr.k, l)};
                    std::size_t row = 0;
                    for (const auto& r : rs) {
                        for (std::size_t x = 0; x < l; ++x) sp.r1(row, x) = r[x];
                        ++row;
                    }
                    for (long s = 0; s < npairs; ++s) {
                        const Row& a = acand[s][pick[s]];
                        const Row& b = bs[s];
                        for (std::size_t x = 0; x < l; ++x) {
                            sp.r1(row, x) = a[x];
                            sp.r2(row, x) = b[x];
                            sp.r1(row + 1, x) = a[x] - b[x];
                            sp.r2(row + 1, x) = -b[x];
                        }
                        row += 2;
                    }
                    // dedup up to Aut(cartan), pair order and pair orientation
                    IntMatrix key;
                    bool first = true;
                    for (const auto& g : auts) {
                        IntMatrix a1 = sp.r1 * g, a2 = sp.r2 * g;
                        std::vector<std::vector<long>> rows;
                        for (long r = 0; r < pr.rational_rows; ++r) {
                            Row v(l);
                            for (std::size_t x = 0; x < l; ++x) v[x] = to_long(a1(r, x));
                            rows.push_back(sign_normalized(v));
                        }
                        std::sort(rows.rbegin(), rows.rend());
                        std::vector<std::vector<long>> prs;
                        for (long s = 0; s < npairs; ++s) {
                            std::size_t r0 = pr.rational_rows + 2 * s;
                            std::vector<std::vector<long>> opts;
                            for (int o = 0; o < 2; ++o)
                                for (int sg = -1; sg <= 1; sg += 2) {
                                    std::vector<long> v;
                                    for (std::size_t x = 0; x < l; ++x) v.push_back(sg * to_long(a1(r0 + o, x)));
                                    for (std::size_t x = 0; x < l; ++x) v.push_back(sg * to_long(a2(r0 + o, x)));
                                    opts.push_back(v);
                                }
                            prs.push_back(*std::max_element(opts.begin(), opts.end()));
                        }
                        std::sort(prs.rbegin(), prs.rend());
                        rows.insert(rows.end(), prs.begin(), prs.end());
                        std::size_t width = 0;
                        for (const auto& v : rows) width = std::max(width, v.size());
                        IntMatrix m(rows.size(), width);
                        for (std::size_t r = 0; r < rows.size(); ++r)
                            for (std::size_t x = 0; x < rows[r].size(); ++x) m(r, x) = rows[r][x];
                        if (first || key < m) key = m;
                        first = false;
                    }
                    if (seen.insert(key).second) out.push_back(std::move(sp));
                }
                return;
            }
            for (std::size_t s = 0; s < acand[t].size(); ++s) {
                pick[t] = s;
                self(self, t + 1);
            }
        };
        choose(choose, 0);
    }
    return out;
}

}  // namespace isotypy
