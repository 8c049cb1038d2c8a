#include "isotypy/short_vectors.hpp"

#include "isotypy/errors.hpp"
#include "isotypy/exact_linalg.hpp"

#include <algorithm>
#include <cmath>

namespace isotypy {

namespace {

Int quad_form(const IntMatrix& g, const std::vector<long>& x) {
    Int s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (x[j] != 0) s += g(i, j) * x[i] * x[j];
    }
    return s;
}

// Fincke-Pohst: q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
void fincke_pohst(const IntMatrix& g, double bound, const Int& exact_bound, bool exact_norm,
                  std::vector<std::vector<long>>& out) {
    const std::size_t n = g.rows();
    std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) q[i][j] = g(i, j).get_d();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t j = k; j < n; ++j) q[k][j] -= q[k][i] * q[i][j];
    }
    const double slack = 1e-6 * (1.0 + bound);
    std::vector<long> x(n, 0);
    std::vector<double> t(n + 1, 0.0);  // remaining budget at level i
    t[n] = bound + slack;
    // recursive enumeration from the last coordinate down
    auto rec = [&](auto&& self, long level) -> void {
        if (level < 0) {
            bool zero = std::all_of(x.begin(), x.end(), [](long v) { return v == 0; });
            if (zero) return;
            Int v = quad_form(g, x);
            if (exact_norm ? v == exact_bound : v <= exact_bound) out.push_back(x);
            return;
        }
        const std::size_t i = static_cast<std::size_t>(level);
        double c = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) c += q[i][j] * x[j];
        double r = std::sqrt(std::max(0.0, t[i + 1] / q[i][i]));
        long lo = static_cast<long>(std::ceil(-c - r - 1e-9));
        long hi = static_cast<long>(std::floor(-c + r + 1e-9));
        for (long v = lo; v <= hi; ++v) {
            double d = v + c;
            double rest = t[i + 1] - q[i][i] * d * d;
            if (rest < -slack) continue;
            x[i] = v;
            t[i] = rest;
            self(self, level - 1);
        }
        x[i] = 0;
    };
    rec(rec, static_cast<long>(n) - 1);
}

}  // namespace

std::vector<std::vector<long>> short_vectors(const IntMatrix& g, const Int& bound) {
    if (!is_positive_definite(g)) throw Error("not-positive-definite", "short_vectors needs a positive definite Gram");
    std::vector<std::vector<long>> all;
    if (bound <= 0) return all;
    fincke_pohst(g, bound.get_d(), bound, false, all);
    std::vector<std::vector<long>> out;
    for (auto& x : all) {
        auto it = std::find_if(x.begin(), x.end(), [](long v) { return v != 0; });
        if (*it > 0) out.push_back(std::move(x));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<long>> vectors_of_norm(const IntMatrix& g, const Int& norm) {
    if (!is_positive_definite(g)) throw Error("not-positive-definite", "vectors_of_norm needs a positive definite Gram");
    std::vector<std::vector<long>> out;
    if (norm <= 0) return out;
    fincke_pohst(g, norm.get_d(), norm, true, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<IntMatrix> find_isometries(const IntMatrix& a, const IntMatrix& b, std::size_t limit) {
    if (!a.is_square() || !b.is_square() || a.rows() < b.rows())
        throw Error("shape-mismatch", "find_isometries needs square Grams with dim a >= dim b");
    const std::size_t n = a.rows(), m = b.rows();
    std::vector<std::vector<std::vector<long>>> cand(m);
    for (std::size_t j = 0; j < m; ++j) {
        cand[j] = vectors_of_norm(a, b(j, j));
        if (cand[j].empty()) return {};
    }
    // a-images of the candidates, for fast inner products
    std::vector<std::vector<std::vector<Int>>> img(m);
    for (std::size_t j = 0; j < m; ++j)
        for (const auto& v : cand[j]) {
            std::vector<Int> w(n, Int(0));
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c)
                    if (v[c] != 0) w[r] += a(r, c) * v[c];
            img[j].push_back(std::move(w));
        }
    std::vector<IntMatrix> out;
    std::vector<std::size_t> pick(m, 0);
    auto rec = [&](auto&& self, std::size_t j) -> bool {
        if (j == m) {
            IntMatrix t(n, m);
            for (std::size_t c = 0; c < m; ++c)
                for (std::size_t r = 0; r < n; ++r) t(r, c) = cand[c][pick[c]][r];
            out.push_back(std::move(t));
            return limit > 0 && out.size() >= limit;
        }
        for (std::size_t s = 0; s < cand[j].size(); ++s) {
            bool ok = true;
            for (std::size_t i = 0; i < j && ok; ++i) {
                Int ip = 0;
                const auto& w = img[i][pick[i]];
                for (std::size_t r = 0; r < n; ++r)
                    if (cand[j][s][r] != 0) ip += w[r] * cand[j][s][r];
                ok = ip == b(i, j);
            }
            if (!ok) continue;
            pick[j] = s;
            if (self(self, j + 1)) return true;
        }
        return false;
    };
    rec(rec, 0);
    return out;
}

std::vector<IntMatrix> automorphism_group(const IntMatrix& c) {
    std::vector<IntMatrix> g = find_isometries(c, c);
    IntMatrix id = IntMatrix::identity(c.rows());
    auto it = std::find(g.begin(), g.end(), id);
    if (it != g.end()) std::iter_swap(g.begin(), it);
    return g;
}

}  // namespace isotypy
