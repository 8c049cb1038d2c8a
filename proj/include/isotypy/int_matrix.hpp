#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace isotypy {

using Int = mpz_class;
using Rat = mpq_class;

// Dense row-major matrix over Z.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);
    IntMatrix(std::initializer_list<std::initializer_list<long>> init);

    static IntMatrix identity(std::size_t n);
    static IntMatrix zero(std::size_t rows, std::size_t cols) { return IntMatrix(rows, cols); }
    static IntMatrix diagonal(const std::vector<Int>& d);
    static IntMatrix column(const std::vector<Int>& v);
    static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows, std::size_t cols = 0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<Int>& data() const { return data_; }

    std::vector<Int> row(std::size_t i) const;
    std::vector<Int> col(std::size_t j) const;
    void set_row(std::size_t i, const std::vector<Int>& r);

    IntMatrix transpose() const;
    IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    IntMatrix select_rows(const std::vector<std::size_t>& idx) const;
    IntMatrix select_cols(const std::vector<std::size_t>& idx) const;
    IntMatrix hstack(const IntMatrix& other) const;
    IntMatrix vstack(const IntMatrix& other) const;

    void swap_rows(std::size_t a, std::size_t b);
    void swap_cols(std::size_t a, std::size_t b);
    // row a += f * row b
    void add_row_multiple(std::size_t a, std::size_t b, const Int& f);
    void add_col_multiple(std::size_t a, std::size_t b, const Int& f);
    void negate_row(std::size_t a);
    void negate_col(std::size_t a);

    bool is_zero() const;
    bool is_square() const { return rows_ == cols_; }
    bool is_symmetric() const;
    bool divisible_by(const Int& m) const;
    Int trace() const;

    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix operator+(const IntMatrix& o) const;
    IntMatrix operator-(const IntMatrix& o) const;
    IntMatrix operator-() const;
    IntMatrix operator*(const Int& s) const;
    IntMatrix& operator+=(const IntMatrix& o);
    // exact division; throws if some entry is not divisible
    IntMatrix divexact(const Int& s) const;
    IntMatrix mod(const Int& m) const;  // entries reduced to [0, m)

    bool operator==(const IntMatrix& o) const;
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }
    bool operator<(const IntMatrix& o) const;

    std::string str() const;  // aligned text rendering, '.' for zero

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Int> data_;
};

inline IntMatrix operator*(const Int& s, const IntMatrix& m) { return m * s; }

// Dense matrix over Q, used for inverses and projections.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    explicit RatMatrix(const IntMatrix& m);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rat& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RatMatrix operator*(const RatMatrix& o) const;
    RatMatrix transpose() const;
    bool is_integral() const;
    IntMatrix to_int() const;  // throws if not integral

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> data_;
};

Int gcd_of(const std::vector<Int>& v);
std::vector<Int> to_ints(const std::vector<long>& v);

}  // namespace isotypy
