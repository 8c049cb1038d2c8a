#pragma once

#include "isotypy/int_matrix.hpp"

#include <complex>
#include <vector>

namespace isotypy {

// Element of Z[zeta_n] in the power basis 1, zeta, ..., zeta^(phi(n)-1).
class CycInt {
public:
    CycInt() : n_(1), c_{Int(0)} {}
    CycInt(long v) : n_(1), c_{Int(v)} {}  // NOLINT: integers are conductor-1 values
    CycInt(const Int& v) : n_(1), c_{v} {}  // NOLINT
    // coefficients of zeta^0, zeta^1, ...; any length, reduced mod Phi_n
    CycInt(unsigned n, const std::vector<Int>& coeffs);

    static CycInt zeta(unsigned n, long k = 1);

    unsigned conductor() const { return n_; }
    const std::vector<Int>& coords() const { return c_; }

    bool is_zero() const;
    bool is_rational() const;           // lies in Z (all higher coords vanish)
    Int rational_value() const;         // throws unless is_rational()
    CycInt lift(unsigned m) const;      // same value over conductor m, n | m
    CycInt galois(long k) const;        // zeta -> zeta^k, gcd(k, n) = 1
    CycInt conj() const { return galois(static_cast<long>(n_) - 1); }
    bool divisible_by(const Int& m) const;
    std::complex<double> to_complex() const;  // debug only

    CycInt operator+(const CycInt& o) const;
    CycInt operator-(const CycInt& o) const;
    CycInt operator*(const CycInt& o) const;
    CycInt operator-() const;
    CycInt operator*(const Int& s) const;
    CycInt& operator+=(const CycInt& o);

    bool operator==(const CycInt& o) const { return n_ == o.n_ && c_ == o.c_; }
    bool operator!=(const CycInt& o) const { return !(*this == o); }
    bool operator<(const CycInt& o) const;

    std::string str() const;

private:
    unsigned n_;
    std::vector<Int> c_;
};

CycInt cyc_add(const CycInt& a, const CycInt& b);
CycInt cyc_mul(const CycInt& a, const CycInt& b);
CycInt cyc_conj(const CycInt& a);
std::vector<CycInt> galois_orbit(const CycInt& a);

// rho = zeta_5 + zeta_5^-1
CycInt rho5();

unsigned euler_phi(unsigned n);
const std::vector<Int>& cyclotomic_polynomial(unsigned n);  // low degree first
unsigned lcm_conductor(unsigned a, unsigned b);

class CycMatrix {
public:
    CycMatrix() = default;
    CycMatrix(std::size_t rows, std::size_t cols, unsigned conductor = 1);
    explicit CycMatrix(const IntMatrix& m, unsigned conductor = 1);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    unsigned conductor() const { return n_; }
    const CycInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, const CycInt& v);  // lifts v to the matrix conductor

    CycMatrix lift(unsigned m) const;
    CycMatrix transpose() const;
    CycMatrix conj() const;
    CycMatrix galois(long k) const;
    CycMatrix operator*(const CycMatrix& o) const;
    CycMatrix operator+(const CycMatrix& o) const;
    CycMatrix operator-(const CycMatrix& o) const;
    CycMatrix select_rows(const std::vector<std::size_t>& idx) const;
    bool operator==(const CycMatrix& o) const;
    bool operator!=(const CycMatrix& o) const { return !(*this == o); }

    bool is_rational() const;
    IntMatrix to_int() const;  // throws unless rational
    bool divisible_by(const Int& m) const;
    std::string str() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    unsigned n_ = 1;
    std::vector<CycInt> data_;
};

// Integral matrix with the same rows and the same integral left kernel:
// every column is expanded into its power-basis coordinate columns and
// zero columns are dropped.
IntMatrix rationalize(const CycMatrix& a);

}  // namespace isotypy
