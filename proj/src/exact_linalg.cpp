#include "isotypy/exact_linalg.hpp"

#include <stdexcept>

namespace isotypy {

namespace {

Int abs_of(const Int& x) { return x < 0 ? Int(-x) : x; }

// Smallest nonzero |a(i,j)| over i,j >= t, row-major scan; false if none.
bool find_pivot(const IntMatrix& a, std::size_t t, std::size_t& pi, std::size_t& pj) {
    bool found = false;
    Int best;
    for (std::size_t i = t; i < a.rows(); ++i)
        for (std::size_t j = t; j < a.cols(); ++j) {
            const Int& x = a(i, j);
            if (x == 0) continue;
            Int ax = abs_of(x);
            if (!found || ax < best) {
                found = true;
                best = ax;
                pi = i;
                pj = j;
            }
        }
    return found;
}

}  // namespace

std::size_t SnfResult::rank() const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i)
        if (d(i, i) != 0) ++r;
    return r;
}

std::vector<Int> SnfResult::diagonal() const {
    std::vector<Int> out;
    for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d(i, i));
    return out;
}

SnfResult smith_normal_form(const IntMatrix& input) {
    IntMatrix a = input;
    const std::size_t m = a.rows(), n = a.cols();
    IntMatrix u = IntMatrix::identity(m), v = IntMatrix::identity(n);
    Int q;
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        std::size_t pi = 0, pj = 0;
        if (!find_pivot(a, t, pi, pj)) break;
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (a(i, t) == 0) continue;
                mpz_tdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
                a.add_row_multiple(i, t, -q);
                u.add_row_multiple(i, t, -q);
                if (a(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (a(t, j) == 0) continue;
                mpz_tdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
                a.add_col_multiple(j, t, -q);
                v.add_col_multiple(j, t, -q);
                if (a(t, j) != 0) clean = false;
            }
            if (!clean) {
                // move the smallest remainder in row t / column t to the pivot
                std::size_t bi = t, bj = t;
                Int best = abs_of(a(t, t));
                for (std::size_t i = t + 1; i < m; ++i)
                    if (a(i, t) != 0 && abs_of(a(i, t)) < best) best = abs_of(a(i, t)), bi = i, bj = t;
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a(t, j) != 0 && abs_of(a(t, j)) < best) best = abs_of(a(t, j)), bi = t, bj = j;
                a.swap_rows(t, bi);
                u.swap_rows(t, bi);
                a.swap_cols(t, bj);
                v.swap_cols(t, bj);
                continue;
            }
            bool fixed = false;
            for (std::size_t i = t + 1; i < m && !fixed; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
                        a.add_row_multiple(t, i, 1);
                        u.add_row_multiple(t, i, 1);
                        fixed = true;
                        break;
                    }
            if (!fixed) break;
        }
        if (a(t, t) < 0) {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    return {std::move(a), std::move(u), std::move(v)};
}

std::vector<Int> elementary_divisors(const IntMatrix& a) { return smith_normal_form(a).diagonal(); }

std::size_t multiplicity_of_p(const IntMatrix& c, const Int& p) {
    std::size_t count = 0;
    for (const Int& d : elementary_divisors(c)) {
        if (d == 0) continue;
        if (mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t())) {
            Int r = d / p;
            if (!mpz_divisible_p(r.get_mpz_t(), p.get_mpz_t())) ++count;
        }
    }
    return count;
}

IntMatrix hermite_rows(const IntMatrix& input) {
    IntMatrix a = input;
    const std::size_t m = a.rows(), n = a.cols();
    std::size_t r = 0;
    Int g, s, t, q;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        // gcd-combine column c of rows r.. into row r
        for (std::size_t i = r + 1; i < m; ++i) {
            if (a(i, c) == 0) continue;
            if (a(r, c) == 0) {
                a.swap_rows(r, i);
                continue;
            }
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a(r, c).get_mpz_t(), a(i, c).get_mpz_t());
            Int x = a(r, c) / g, y = a(i, c) / g;
            for (std::size_t j = 0; j < n; ++j) {
                Int top = s * a(r, j) + t * a(i, j);
                Int bot = x * a(i, j) - y * a(r, j);
                a(r, j) = top;
                a(i, j) = bot;
            }
        }
        if (a(r, c) == 0) continue;
        if (a(r, c) < 0) a.negate_row(r);
        for (std::size_t i = 0; i < r; ++i) {
            mpz_fdiv_q(q.get_mpz_t(), a(i, c).get_mpz_t(), a(r, c).get_mpz_t());
            a.add_row_multiple(i, r, -q);
        }
        ++r;
    }
    return a.block(0, 0, r, n);
}

IntMatrix integral_kernel_basis(const IntMatrix& a) {
    const std::size_t m = a.rows();
    if (a.cols() == 0) return IntMatrix::identity(m);
    SnfResult s = smith_normal_form(a);
    std::size_t r = s.rank();
    if (r == m) return IntMatrix(m, 0);
    IntMatrix k = s.u.block(r, 0, m - r, m);  // rows are kernel vectors
    return hermite_rows(k).transpose();
}

IntMatrix integral_right_kernel_basis(const IntMatrix& a) { return integral_kernel_basis(a.transpose()); }

std::optional<IntMatrix> integral_left_inverse(const IntMatrix& x) {
    const std::size_t k = x.rows(), l = x.cols();
    if (k < l) return std::nullopt;
    SnfResult s = smith_normal_form(x);
    for (std::size_t i = 0; i < l; ++i)
        if (s.d(i, i) != 1) return std::nullopt;
    IntMatrix proj(l, k);
    for (std::size_t i = 0; i < l; ++i) proj(i, i) = 1;
    return s.v * proj * s.u;
}

IntMatrix saturated_eigenspace(const IntMatrix& y, const Int& lambda) {
    if (!y.is_square()) throw std::invalid_argument("saturated_eigenspace: matrix not square");
    IntMatrix shifted = y;
    for (std::size_t i = 0; i < y.rows(); ++i) shifted(i, i) -= lambda;
    return integral_right_kernel_basis(shifted);
}

std::optional<IntMatrix> express_in_basis(const IntMatrix& e, const IntMatrix& x) {
    if (e.rows() != x.rows()) throw std::invalid_argument("express_in_basis: row mismatch");
    SnfResult s = smith_normal_form(e);
    std::size_t r = s.rank();
    IntMatrix ux = s.u * x;
    IntMatrix t(e.cols(), x.cols());
    for (std::size_t i = 0; i < ux.rows(); ++i)
        for (std::size_t j = 0; j < ux.cols(); ++j) {
            if (i < r) {
                if (!mpz_divisible_p(ux(i, j).get_mpz_t(), s.d(i, i).get_mpz_t())) return std::nullopt;
                t(i, j) = ux(i, j) / s.d(i, i);
            } else if (ux(i, j) != 0) {
                return std::nullopt;
            }
        }
    return s.v * t;
}

Int determinant(const IntMatrix& input) {
    if (!input.is_square()) throw std::invalid_argument("determinant: matrix not square");
    const std::size_t n = input.rows();
    if (n == 0) return 1;
    IntMatrix a = input;
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            a.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                a(i, j) = v;
            }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

std::size_t rank(const IntMatrix& a) { return smith_normal_form(a).rank(); }

bool is_unimodular(const IntMatrix& s) {
    if (!s.is_square()) throw std::invalid_argument("is_unimodular: matrix not square");
    Int d = determinant(s);
    return d == 1 || d == -1;
}

RatMatrix inverse(const IntMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("inverse: matrix not square");
    const std::size_t n = a.rows();
    RatMatrix m(a), inv(n, n);
    for (std::size_t i = 0; i < n; ++i) inv(i, i) = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) throw std::domain_error("inverse: singular matrix");
        if (p != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(c, j), m(p, j));
                std::swap(inv(c, j), inv(p, j));
            }
        Rat piv = m(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            m(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m(i, c) == 0) continue;
            Rat f = m(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) -= f * m(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

IntMatrix adjugate(const IntMatrix& a) {
    Int d = determinant(a);
    if (d == 0) throw std::domain_error("adjugate: singular matrix");
    RatMatrix inv = inverse(a);
    IntMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Rat x = inv(i, j) * Rat(d);
            r(i, j) = x.get_num();
        }
    return r;
}

std::optional<IntMatrix> integral_inverse(const IntMatrix& a) {
    if (!is_unimodular(a)) return std::nullopt;
    return inverse(a).to_int();
}

bool is_positive_definite(const IntMatrix& a) {
    if (!a.is_symmetric()) return false;
    for (std::size_t k = 1; k <= a.rows(); ++k)
        if (determinant(a.block(0, 0, k, k)) <= 0) return false;
    return true;
}

}  // namespace isotypy
