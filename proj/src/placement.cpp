#include "isotypy/placement.hpp"

#include "isotypy/block_model.hpp"
#include "isotypy/errors.hpp"
#include "isotypy/exact_linalg.hpp"
#include "isotypy/embeddings.hpp"
#include "isotypy/short_vectors.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

namespace isotypy {

CycInt to_cyc(const QuadInt& v) {
    if (v.y == 0) return CycInt(v.x);
    return CycInt(v.x) + rho5() * Int(v.y);
}

QuadInt from_cyc(const CycInt& v) {
    if (v.is_rational()) return {v.rational_value().get_si(), 0};
    if (v.conductor() != 5) throw Error("unsupported-ring", "value is not in Z[rho]");
    // power basis 1, z, z^2, z^3; x + y rho = (x - y) - y z^2 - y z^3 + 0 z ... solve via coords
    const auto& c = v.coords();
    // rho = -1 - z^2 - z^3 in the reduced basis, so a value x + y rho has coords (x - y, 0, -y, -y)
    if (c.size() != 4 || c[1] != 0 || c[2] != c[3]) throw Error("unsupported-ring", "value is not in Z[rho]");
    long y = -c[2].get_si();
    long x = c[0].get_si() + y;
    return {x, y};
}

CycMatrix to_cyc_matrix(const std::vector<QuadRow>& rows, std::size_t cols) {
    bool rational = true;
    for (const auto& r : rows)
        for (const auto& v : r)
            if (v.y != 0) rational = false;
    CycMatrix m(rows.size(), cols, rational ? 1 : 5);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m.set(i, j, to_cyc(rows[i][j]));
    return m;
}

std::vector<IntMatrix> orthogonal_embeddings(const IntMatrix& q1, const IntMatrix& c) {
    IntMatrix kb = integral_kernel_basis(q1);
    if (kb.cols() < c.rows()) return {};
    std::vector<IntMatrix> out;
    for (const IntMatrix& t : find_isometries(kb.transpose() * kb, c)) {
        IntMatrix q = kb * t;
        for (const auto& v : q.data())
            if (v != 0) {
                if (v > 0) out.push_back(std::move(q));
                break;
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<IntMatrix> reconstruct_with_cartan(const IntMatrix& y, const IntMatrix& c, long p) {
    if (!y.is_square() || !c.is_square()) return std::nullopt;
    IntMatrix e = saturated_eigenspace(y, Int(p * p));
    if (e.cols() != c.rows()) return std::nullopt;
    std::vector<IntMatrix> t = find_isometries(e.transpose() * e, c, 1);
    if (t.empty()) return std::nullopt;
    IntMatrix x = e * t[0];
    IntMatrix num = x * adjugate(c) * x.transpose() * Int(p * p);
    Int det = determinant(c);
    if (!num.divisible_by(det) || num.divexact(det) != y) return std::nullopt;
    return x;
}

namespace {

struct LabelItems {
    std::vector<QuadRow> rows;     // distinct single rows
    std::vector<long> row_count;
    std::vector<std::pair<QuadRow, QuadRow>> pairs;
    std::vector<long> pair_count;
    std::vector<std::vector<long>> adj;  // adjugate entries
    long det = 0;
    std::vector<long> max_x, max_y;      // per column
};

long lval(const Int& v) {
    if (!v.fits_slong_p()) throw Error("overflow", "value does not fit a machine word");
    return v.get_si();
}

struct Engine {
    const PlacementProblem& pr;
    std::size_t k = 0, l1 = 0;
    long pp = 0;
    std::vector<std::vector<std::size_t>> units;
    std::vector<LabelItems> items;
    std::vector<std::vector<QuadRow>> assigned;        // label -> position -> row
    std::vector<std::vector<std::vector<QuadInt>>> adjq;  // label -> position -> adj * row
    std::vector<std::vector<long>> q1;
    std::vector<std::vector<long>> m1;
    std::vector<std::vector<long>> suffix_abs;        // unit -> q1 column -> sum |q1| over later units
    // partial sums Q1^T Q_w per label, column of Q1, column of Q_w
    std::vector<std::vector<std::vector<QuadInt>>> orth;
    std::set<long> derived_m;
    bool derived_checks = false;
    std::size_t derived_e = 0;
    // congruences over a fixed label order: 0 = "1", then placed, conjugates, derived
    std::vector<std::string> label_order;
    std::vector<std::vector<long>> cong_coeffs;
    std::vector<long> cong_mod;
    PlacementResult result;
    std::vector<int> sign_free;  // per label: sign still free at first unit

    explicit Engine(const PlacementProblem& p) : pr(p) {}

    void setup() {
        k = pr.q1.rows();
        l1 = pr.q1.cols();
        pp = pr.p * pr.p;
        if (pr.m1_scaled.rows() != k || pr.m1_scaled.cols() != k) throw Error("shape-mismatch", "M1 is not k x k");
        q1.assign(k, std::vector<long>(l1));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t c = 0; c < l1; ++c) q1[i][c] = lval(pr.q1(i, c));
        m1.assign(k, std::vector<long>(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) m1[i][j] = lval(pr.m1_scaled(i, j));
        std::vector<int> in_pair(k, -1);
        for (const auto& pq : pr.pair_positions) {
            if (pq[0] >= k || pq[1] >= k || pq[0] == pq[1] || in_pair[pq[0]] >= 0 || in_pair[pq[1]] >= 0)
                throw Error("invalid-problem", "bad Galois pair positions");
            in_pair[pq[0]] = in_pair[pq[1]] = 1;
        }
        for (std::size_t i = 0; i < k; ++i) {
            if (in_pair[i] >= 0) {
                for (const auto& pq : pr.pair_positions)
                    if (pq[0] == i) units.push_back({pq[0], pq[1]});
            } else {
                units.push_back({i});
            }
        }
        const std::size_t nsingle = k - 2 * pr.pair_positions.size();
        for (const auto& w : pr.placed) {
            if (w.singles.size() != nsingle || w.pairs.size() != pr.pair_positions.size())
                throw Error("invalid-problem", "label " + w.label + " does not fit the position layout");
            LabelItems it;
            const std::size_t e = w.cartan.rows();
            for (const auto& r : w.singles) {
                auto f = std::find(it.rows.begin(), it.rows.end(), r);
                if (f == it.rows.end()) {
                    it.rows.push_back(r);
                    it.row_count.push_back(1);
                } else {
                    ++it.row_count[f - it.rows.begin()];
                }
            }
            for (const auto& pq : w.pairs) {
                auto f = std::find(it.pairs.begin(), it.pairs.end(), pq);
                if (f == it.pairs.end()) {
                    it.pairs.push_back(pq);
                    it.pair_count.push_back(1);
                } else {
                    ++it.pair_count[f - it.pairs.begin()];
                }
            }
            IntMatrix adj = adjugate(w.cartan);
            it.adj.assign(e, std::vector<long>(e));
            for (std::size_t a = 0; a < e; ++a)
                for (std::size_t b = 0; b < e; ++b) it.adj[a][b] = lval(adj(a, b));
            it.det = lval(determinant(w.cartan));
            it.max_x.assign(e, 0);
            it.max_y.assign(e, 0);
            auto upd = [&](const QuadRow& r) {
                for (std::size_t s = 0; s < e; ++s) {
                    it.max_x[s] = std::max(it.max_x[s], std::labs(r[s].x));
                    it.max_y[s] = std::max(it.max_y[s], std::labs(r[s].y));
                }
            };
            for (const auto& r : w.singles) upd(r);
            for (const auto& pq : w.pairs) {
                upd(pq.first);
                upd(pq.second);
            }
            items.push_back(std::move(it));
        }
        assigned.assign(pr.placed.size(), std::vector<QuadRow>(k));
        adjq.assign(pr.placed.size(), std::vector<std::vector<QuadInt>>(k));
        orth.resize(pr.placed.size());
        for (std::size_t w = 0; w < pr.placed.size(); ++w)
            orth[w].assign(l1, std::vector<QuadInt>(pr.placed[w].cartan.rows()));
        suffix_abs.assign(units.size() + 1, std::vector<long>(l1, 0));
        for (std::size_t u = units.size(); u-- > 0;)
            for (std::size_t c = 0; c < l1; ++c) {
                suffix_abs[u][c] = suffix_abs[u + 1][c];
                for (std::size_t i : units[u]) suffix_abs[u][c] += std::labs(q1[i][c]);
            }
        label_order.push_back("1");
        for (const auto& w : pr.placed) label_order.push_back(w.label);
        for (const auto& w : pr.placed)
            if (w.conjugate_label) label_order.push_back(*w.conjugate_label);
        if (pr.derived) label_order.push_back(*pr.derived);
        for (const auto& c : pr.congruences) {
            std::vector<long> co(label_order.size(), 0);
            for (std::size_t t = 0; t < c.labels.size(); ++t) {
                auto f = std::find(label_order.begin(), label_order.end(), c.labels[t]);
                if (f == label_order.end()) throw Error("unknown-label", "congruence label " + c.labels[t]);
                co[f - label_order.begin()] = lval(c.coeffs[t]);
            }
            cong_coeffs.push_back(co);
            cong_mod.push_back(lval(c.modulus));
        }
        if (pr.derived && pr.derived_cartan) {
            derived_checks = true;
            derived_e = pr.derived_cartan->rows();
            EmbeddingProblem ep;
            ep.c = *pr.derived_cartan;
            ep.k = std::max<long>(static_cast<long>(k), static_cast<long>(derived_e));
            ep.p = pr.p;
            for (const auto& rc : candidate_rows(ep)) derived_m.insert(rc.scaled_m);
        }
    }

    // p^2 M_w(i, j) for placed label w, or nullopt if not integral
    std::optional<QuadInt> yval(std::size_t w, std::size_t i, std::size_t j) const {
        const QuadRow& qi = assigned[w][i];
        const auto& aj = adjq[w][j];
        QuadInt s;
        for (std::size_t a = 0; a < qi.size(); ++a) s = s + qi[a] * aj[a];
        s = s * pp;
        const long d = items[w].det;
        if (s.x % d != 0 || s.y % d != 0) return std::nullopt;
        return QuadInt{s.x / d, s.y / d};
    }

    bool check_entry(std::size_t i, std::size_t j) const {
        const std::size_t nw = pr.placed.size();
        std::vector<QuadInt> vals(label_order.size());
        vals[0] = {m1[i][j], 0};
        QuadInt total = vals[0];
        std::size_t slot = 1;
        std::vector<QuadInt> yw(nw);
        for (std::size_t w = 0; w < nw; ++w) {
            auto y = yval(w, i, j);
            if (!y) return false;
            yw[w] = *y;
            vals[slot++] = *y;
            total = total + *y;
        }
        for (std::size_t w = 0; w < nw; ++w)
            if (pr.placed[w].conjugate_label) {
                vals[slot++] = yw[w].sigma();
                total = total + yw[w].sigma();
            }
        QuadInt target{i == j ? pp : 0, 0};
        if (pr.derived) {
            QuadInt yd = target - total;
            if (yd.y != 0) return false;
            vals[slot++] = yd;
            if (derived_checks) {
                if (i == j && !derived_m.count(yd.x)) return false;
            }
        } else if (total != target) {
            return false;
        }
        for (std::size_t c = 0; c < cong_coeffs.size(); ++c) {
            QuadInt s;
            for (std::size_t t = 0; t < vals.size(); ++t)
                if (cong_coeffs[c][t] != 0) s = s + vals[t] * cong_coeffs[c][t];
            if (!s.divisible_by(cong_mod[c])) return false;
        }
        return true;
    }

    long derived_diag(std::size_t i) const {
        long t = pp - m1[i][i];
        for (std::size_t w = 0; w < pr.placed.size(); ++w) {
            QuadInt y = *yval(w, i, i);
            t -= y.x;
            if (pr.placed[w].conjugate_label) t -= y.sigma().x;
        }
        return t;
    }

    long derived_off(std::size_t i, std::size_t j) const {
        long t = -m1[i][j];
        for (std::size_t w = 0; w < pr.placed.size(); ++w) {
            QuadInt y = *yval(w, i, j);
            t -= y.x;
            if (pr.placed[w].conjugate_label) t -= y.sigma().x;
        }
        return t;
    }

    bool check_unit(std::size_t u) const {
        // orthogonality bound
        for (std::size_t w = 0; w < pr.placed.size(); ++w) {
            const auto& it = items[w];
            for (std::size_t c = 0; c < l1; ++c) {
                const long rem = suffix_abs[u + 1][c];
                for (std::size_t s = 0; s < it.max_x.size(); ++s) {
                    if (std::labs(orth[w][c][s].x) > rem * it.max_x[s]) return false;
                    if (std::labs(orth[w][c][s].y) > rem * it.max_y[s]) return false;
                }
            }
        }
        std::vector<std::size_t> done;
        for (std::size_t v = 0; v <= u; ++v)
            for (std::size_t i : units[v]) done.push_back(i);
        for (std::size_t i : units[u])
            for (std::size_t j : done) {
                if (!check_entry(i, j)) return false;
                if (derived_checks && i != j) {
                    long d = derived_off(i, j);
                    if (d * d > derived_diag(i) * derived_diag(j)) return false;
                }
            }
        return true;
    }

    void set_row(std::size_t w, std::size_t pos, const QuadRow& r, int sign) {
        QuadRow q = r;
        for (auto& v : q) v = v * sign;
        const auto& it = items[w];
        std::vector<QuadInt> a(q.size());
        for (std::size_t s = 0; s < q.size(); ++s)
            for (std::size_t t = 0; t < q.size(); ++t)
                if (it.adj[s][t] != 0) a[s] = a[s] + q[t] * it.adj[s][t];
        for (std::size_t c = 0; c < l1; ++c)
            if (q1[pos][c] != 0)
                for (std::size_t s = 0; s < q.size(); ++s) orth[w][c][s] = orth[w][c][s] + q[s] * q1[pos][c];
        assigned[w][pos] = std::move(q);
        adjq[w][pos] = std::move(a);
    }

    void unset_row(std::size_t w, std::size_t pos) {
        const QuadRow& q = assigned[w][pos];
        for (std::size_t c = 0; c < l1; ++c)
            if (q1[pos][c] != 0)
                for (std::size_t s = 0; s < q.size(); ++s) orth[w][c][s] = orth[w][c][s] - q[s] * q1[pos][c];
        assigned[w][pos].clear();
        adjq[w][pos].clear();
    }

    bool stop() const { return pr.max_families > 0 && result.families.size() >= pr.max_families; }

    void leaf() {
        for (std::size_t w = 0; w < pr.placed.size(); ++w)
            for (std::size_t c = 0; c < l1; ++c)
                for (const auto& v : orth[w][c])
                    if (!v.is_zero()) return;
        PlacedFamily fam;
        std::vector<Contribution> rat;
        std::vector<CycContribution> cyc;
        rat.push_back({pr.p, pr.m1_scaled});
        for (std::size_t w = 0; w < pr.placed.size(); ++w) {
            const auto& lab = pr.placed[w];
            CycMatrix q = to_cyc_matrix(assigned[w], lab.cartan.rows());
            CycContribution cc = contribution(q, lab.cartan, pr.p);
            fam.q[lab.label] = q;
            fam.scaled[lab.label] = cc.scaled;
            cyc.push_back(cc);
            if (lab.conjugate_label) {
                CycMatrix qs = q.galois(2);
                CycContribution cs = contribution(qs, lab.cartan, pr.p);
                fam.q[*lab.conjugate_label] = qs;
                fam.scaled[*lab.conjugate_label] = cs.scaled;
                cyc.push_back(cs);
            }
        }
        if (pr.derived) {
            IntMatrix yd = IntMatrix::identity(k) * Int(pp) - pr.m1_scaled;
            CycMatrix acc(k, k, 1);
            for (const auto& c : cyc) acc = acc + c.scaled;
            if (!acc.is_rational()) return;
            yd = yd - acc.to_int();
            if (pr.derived_cartan) {
                if (yd * yd != yd * Int(pp)) return;
                if (yd.trace() != Int(pp) * static_cast<long>(derived_e)) return;
                auto x = reconstruct_with_cartan(yd, *pr.derived_cartan, pr.p);
                if (!x) return;
                Contribution dc = contribution(*x, *pr.derived_cartan, pr.p);
                if (dc.scaled != yd) return;
                fam.q[*pr.derived] = CycMatrix(*x);
                rat.push_back(dc);
            }
            fam.scaled[*pr.derived] = CycMatrix(yd);
        } else if (!contribution_sum_check(rat, cyc)) {
            return;
        }
        result.families.push_back(std::move(fam));
    }

    static QuadRow normalized(QuadRow r) {
        for (const auto& v : r)
            if (!v.is_zero()) {
                if (v < QuadInt{}) 
                    for (auto& x : r) x = -x;
                break;
            }
        return r;
    }

    bool lattice_applicable() const {
        if (!pr.pair_positions.empty() || pr.placed.size() != 1 || pr.placed[0].conjugate_label) return false;
        for (const auto& r : pr.placed[0].singles)
            for (const auto& v : r)
                if (v.y != 0) return false;
        return true;
    }

    void lattice_search() {
        const auto& lab = pr.placed[0];
        std::vector<QuadRow> want;
        for (const auto& r : lab.singles) want.push_back(normalized(r));
        std::sort(want.begin(), want.end());
        for (const IntMatrix& q : orthogonal_embeddings(pr.q1, lab.cartan)) {
            if (stop()) return;
            ++result.nodes;
            std::vector<QuadRow> rows(k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < q.cols(); ++j) rows[i].push_back({lval(q(i, j)), 0});
            std::vector<QuadRow> have;
            for (const auto& r : rows) have.push_back(normalized(r));
            std::sort(have.begin(), have.end());
            if (have != want) continue;
            for (std::size_t i = 0; i < k; ++i) set_row(0, i, rows[i], 1);
            bool ok = true;
            for (std::size_t i = 0; i < k && ok; ++i)
                for (std::size_t j = 0; j <= i && ok; ++j) {
                    ok = check_entry(i, j);
                    if (ok && derived_checks && i != j) {
                        long d = derived_off(i, j);
                        ok = d * d <= derived_diag(i) * derived_diag(j);
                    }
                }
            if (ok) leaf();
            for (std::size_t i = 0; i < k; ++i) unset_row(0, i);
        }
    }

    void search_unit(std::size_t u, std::size_t w) {
        if (stop()) return;
        if (u == units.size()) {
            leaf();
            return;
        }
        if (w == pr.placed.size()) {
            ++result.nodes;
            if (check_unit(u)) search_unit(u + 1, 0);
            return;
        }
        auto& it = items[w];
        const auto& unit = units[u];
        const int smin = (u == 0) ? 1 : -1;
        if (unit.size() == 1) {
            for (std::size_t t = 0; t < it.rows.size(); ++t) {
                if (it.row_count[t] == 0) continue;
                --it.row_count[t];
                for (int sg = 1; sg >= smin; sg -= 2) {
                    set_row(w, unit[0], it.rows[t], sg);
                    search_unit(u, w + 1);
                    unset_row(w, unit[0]);
                    if (stop()) break;
                }
                ++it.row_count[t];
                if (stop()) return;
            }
        } else {
            for (std::size_t t = 0; t < it.pairs.size(); ++t) {
                if (it.pair_count[t] == 0) continue;
                --it.pair_count[t];
                const auto& [a, b] = it.pairs[t];
                for (int orient = 0; orient < 2; ++orient)
                    for (int sg = 1; sg >= smin; sg -= 2) {
                        set_row(w, unit[0], orient ? b : a, sg);
                        set_row(w, unit[1], orient ? a : b, sg);
                        search_unit(u, w + 1);
                        unset_row(w, unit[1]);
                        unset_row(w, unit[0]);
                        if (stop()) break;
                    }
                ++it.pair_count[t];
                if (stop()) return;
            }
        }
    }
};

}  // namespace

PlacementResult place(const PlacementProblem& problem) {
    Engine e(problem);
    e.setup();
    if (e.lattice_applicable())
        e.lattice_search();
    else
        e.search_unit(0, 0);
    e.result.truncated = e.stop();
    return std::move(e.result);
}

}  // namespace isotypy
