#include "isotypy/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace isotypy {

namespace {

std::vector<Int> poly_divexact(std::vector<Int> num, const std::vector<Int>& den) {
    std::vector<Int> out(num.size() - den.size() + 1);
    for (std::size_t i = out.size(); i-- > 0;) {
        Int q = num[i + den.size() - 1] / den.back();
        out[i] = q;
        for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= q * den[j];
    }
    return out;
}

// Fold exponents mod n, then reduce by Phi_n.
std::vector<Int> reduce(unsigned n, const std::vector<Int>& coeffs) {
    std::vector<Int> v(n);
    for (std::size_t i = 0; i < coeffs.size(); ++i) v[i % n] += coeffs[i];
    const auto& phi = cyclotomic_polynomial(n);
    const std::size_t deg = phi.size() - 1;
    for (std::size_t i = n; i-- > deg;) {
        if (v[i] == 0) continue;
        Int c = v[i];
        for (std::size_t j = 0; j <= deg; ++j) v[i - deg + j] -= c * phi[j];
    }
    v.resize(deg);
    return v;
}

}  // namespace

unsigned euler_phi(unsigned n) {
    unsigned r = n, m = n;
    for (unsigned p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        r = r / p * (p - 1);
        while (m % p == 0) m /= p;
    }
    if (m > 1) r = r / m * (m - 1);
    return r;
}

const std::vector<Int>& cyclotomic_polynomial(unsigned n) {
    static std::mutex mu;
    static std::map<unsigned, std::vector<Int>> cache;
    if (n == 0) throw std::invalid_argument("conductor must be positive");
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    std::vector<Int> poly(n + 1);
    poly[0] = -1;
    poly[n] = 1;
    for (unsigned d = 1; d < n; ++d)
        if (n % d == 0) poly = poly_divexact(poly, cyclotomic_polynomial(d));
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(n, std::move(poly)).first->second;
}

unsigned lcm_conductor(unsigned a, unsigned b) { return std::lcm(a, b); }

CycInt::CycInt(unsigned n, const std::vector<Int>& coeffs) : n_(n), c_(reduce(n, coeffs)) {}

CycInt CycInt::zeta(unsigned n, long k) {
    std::vector<Int> c(n);
    long e = ((k % static_cast<long>(n)) + n) % n;
    c[e] = 1;
    return CycInt(n, c);
}

bool CycInt::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool CycInt::is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Int CycInt::rational_value() const {
    if (!is_rational()) throw std::domain_error("cyclotomic value is not rational");
    return c_[0];
}

CycInt CycInt::lift(unsigned m) const {
    if (m == n_) return *this;
    if (m % n_ != 0) throw std::invalid_argument("lift: conductor does not divide target");
    std::vector<Int> v(m);
    unsigned step = m / n_;
    for (std::size_t j = 0; j < c_.size(); ++j) v[(j * step) % m] += c_[j];
    return CycInt(m, v);
}

CycInt CycInt::galois(long k) const {
    long n = static_cast<long>(n_);
    long kk = ((k % n) + n) % n;
    if (std::gcd(kk, n) != 1) throw std::invalid_argument("galois: exponent not a unit");
    std::vector<Int> v(n_);
    for (std::size_t j = 0; j < c_.size(); ++j) v[(static_cast<long>(j) * kk) % n] += c_[j];
    return CycInt(n_, v);
}

bool CycInt::divisible_by(const Int& m) const {
    for (const auto& x : c_)
        if (!mpz_divisible_p(x.get_mpz_t(), m.get_mpz_t())) return false;
    return true;
}

std::complex<double> CycInt::to_complex() const {
    std::complex<double> z = 0;
    for (std::size_t j = 0; j < c_.size(); ++j)
        z += c_[j].get_d() * std::polar(1.0, 2 * M_PI * static_cast<double>(j) / n_);
    return z;
}

namespace {
void align(const CycInt& a, const CycInt& b, CycInt& x, CycInt& y) {
    if (a.conductor() == b.conductor()) {
        x = a;
        y = b;
    } else if (a.conductor() == 1) {
        x = a.lift(b.conductor());
        y = b;
    } else if (b.conductor() == 1) {
        x = a;
        y = b.lift(a.conductor());
    } else {
        throw std::invalid_argument("cyclotomic conductor mismatch");
    }
}
}  // namespace

CycInt CycInt::operator+(const CycInt& o) const {
    CycInt r = *this;
    r += o;
    return r;
}

CycInt& CycInt::operator+=(const CycInt& o) {
    if (n_ == o.n_) {
        for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
        return *this;
    }
    CycInt x, y;
    align(*this, o, x, y);
    for (std::size_t j = 0; j < x.c_.size(); ++j) x.c_[j] += y.c_[j];
    *this = std::move(x);
    return *this;
}

CycInt CycInt::operator-() const {
    CycInt r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

CycInt CycInt::operator-(const CycInt& o) const { return *this + (-o); }

CycInt CycInt::operator*(const CycInt& o) const {
    CycInt x, y;
    align(*this, o, x, y);
    if (x.n_ == 1) return CycInt(x.c_[0] * y.c_[0]);
    std::vector<Int> prod(x.c_.size() + y.c_.size() - 1);
    for (std::size_t i = 0; i < x.c_.size(); ++i) {
        if (x.c_[i] == 0) continue;
        for (std::size_t j = 0; j < y.c_.size(); ++j) prod[i + j] += x.c_[i] * y.c_[j];
    }
    return CycInt(x.n_, prod);
}

CycInt CycInt::operator*(const Int& s) const {
    CycInt r = *this;
    for (auto& x : r.c_) x *= s;
    return r;
}

bool CycInt::operator<(const CycInt& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return c_ < o.c_;
}

std::string CycInt::str() const {
    if (is_rational()) return c_[0].get_str();
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (c_[j] == 0) continue;
        Int a = c_[j];
        if (!first) os << (a < 0 ? "-" : "+");
        else if (a < 0) os << "-";
        if (a < 0) a = -a;
        if (j == 0) os << a.get_str();
        else {
            if (a != 1) os << a.get_str() << "*";
            os << "z" << n_;
            if (j > 1) os << "^" << j;
        }
        first = false;
    }
    return os.str();
}

CycInt cyc_add(const CycInt& a, const CycInt& b) {
    if (a.conductor() != b.conductor()) throw std::invalid_argument("cyc_add: conductor mismatch");
    return a + b;
}

CycInt cyc_mul(const CycInt& a, const CycInt& b) {
    if (a.conductor() != b.conductor()) throw std::invalid_argument("cyc_mul: conductor mismatch");
    return a * b;
}

CycInt cyc_conj(const CycInt& a) { return a.conj(); }

std::vector<CycInt> galois_orbit(const CycInt& a) {
    std::vector<CycInt> out;
    const long n = a.conductor();
    for (long k = 1; k <= std::max(1L, n); ++k) {
        if (std::gcd(k, n) != 1) continue;
        CycInt b = a.galois(k);
        bool seen = false;
        for (const auto& x : out) seen = seen || x == b;
        if (!seen) out.push_back(b);
    }
    return out;
}

CycInt rho5() { return CycInt::zeta(5, 1) + CycInt::zeta(5, 4); }

CycMatrix::CycMatrix(std::size_t rows, std::size_t cols, unsigned conductor)
    : rows_(rows), cols_(cols), n_(conductor), data_(rows * cols, CycInt(conductor, {Int(0)})) {}

CycMatrix::CycMatrix(const IntMatrix& m, unsigned conductor) : CycMatrix(m.rows(), m.cols(), conductor) {
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) set(i, j, CycInt(m(i, j)));
}

void CycMatrix::set(std::size_t i, std::size_t j, const CycInt& v) { data_[i * cols_ + j] = v.lift(n_); }

CycMatrix CycMatrix::lift(unsigned m) const {
    CycMatrix r(rows_, cols_, m);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i].lift(m);
    return r;
}

CycMatrix CycMatrix::transpose() const {
    CycMatrix t(cols_, rows_, n_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.data_[j * rows_ + i] = (*this)(i, j);
    return t;
}

CycMatrix CycMatrix::conj() const { return galois(static_cast<long>(n_) - 1); }

CycMatrix CycMatrix::galois(long k) const {
    CycMatrix r = *this;
    if (n_ == 1) return r;
    for (auto& x : r.data_) x = x.galois(k);
    return r;
}

CycMatrix CycMatrix::operator*(const CycMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("cyclotomic product: shape mismatch");
    unsigned m = std::lcm(n_, o.n_);
    const CycMatrix a = lift(m), b = o.lift(m);
    CycMatrix r(rows_, o.cols_, m);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const CycInt& x = a(i, k);
            if (x.is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r.data_[i * o.cols_ + j] += x * b(k, j);
        }
    return r;
}

CycMatrix CycMatrix::operator+(const CycMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("cyclotomic sum: shape mismatch");
    unsigned m = std::lcm(n_, o.n_);
    CycMatrix a = lift(m), b = o.lift(m);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
}

CycMatrix CycMatrix::operator-(const CycMatrix& o) const {
    CycMatrix neg = o;
    for (auto& x : neg.data_) x = -x;
    return *this + neg;
}

CycMatrix CycMatrix::select_rows(const std::vector<std::size_t>& idx) const {
    CycMatrix r(idx.size(), cols_, n_);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.data_[i * cols_ + j] = (*this)(idx[i], j);
    return r;
}

bool CycMatrix::operator==(const CycMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    unsigned m = std::lcm(n_, o.n_);
    CycMatrix a = lift(m), b = o.lift(m);
    return a.data_ == b.data_;
}

bool CycMatrix::is_rational() const {
    for (const auto& x : data_)
        if (!x.is_rational()) return false;
    return true;
}

IntMatrix CycMatrix::to_int() const {
    IntMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j).rational_value();
    return r;
}

bool CycMatrix::divisible_by(const Int& m) const {
    for (const auto& x : data_)
        if (!x.divisible_by(m)) return false;
    return true;
}

std::string CycMatrix::str() const {
    std::vector<std::string> cells(data_.size());
    std::size_t w = 1;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        cells[i] = data_[i].is_zero() ? "." : data_[i].str();
        w = std::max(w, cells[i].size());
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            const auto& c = cells[i * cols_ + j];
            os << std::string(w - c.size() + (j ? 1 : 0), ' ') << c;
        }
        os << '\n';
    }
    return os.str();
}

IntMatrix rationalize(const CycMatrix& a) {
    const std::size_t phi = cyclotomic_polynomial(a.conductor()).size() - 1;
    std::vector<std::vector<Int>> cols;
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t t = 0; t < phi; ++t) {
            std::vector<Int> c(a.rows());
            bool nonzero = false;
            for (std::size_t i = 0; i < a.rows(); ++i) {
                c[i] = a(i, j).coords()[t];
                nonzero = nonzero || c[i] != 0;
            }
            if (nonzero) cols.push_back(std::move(c));
        }
    IntMatrix r(a.rows(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) r(i, j) = cols[j][i];
    return r;
}

}  // namespace isotypy
