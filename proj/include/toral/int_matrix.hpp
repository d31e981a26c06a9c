#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace toral {

using BigInt = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<BigInt>;

IntVector make_int_vector(std::initializer_list<long> values);
std::string to_string(const IntVector& v);

/// Dense row-major matrix of arbitrary-precision integers.
///
/// Rectangular shapes are allowed so the same type carries lattice bases and
/// inclusion matrices; automorphisms are the square, unimodular case.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<IntVector>& rows);
    static IntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows);
    static IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntVector row(std::size_t i) const;
    IntVector column(std::size_t j) const;
    std::vector<IntVector> row_list() const;

    IntMatrix transpose() const;
    IntMatrix pow(unsigned long k) const;
    IntVector apply(const IntVector& v) const;
    BigInt trace() const;

    /// Fraction-free (Bareiss) determinant.
    BigInt determinant() const;
    /// Rank over the rationals.
    std::size_t rank() const;
    bool is_unimodular() const;
    /// Exact inverse; throws unless the matrix is unimodular.
    IntMatrix inverse_unimodular() const;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator*(const BigInt& s, const IntMatrix& a);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b);

    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<BigInt> data_;
};

/// Rank over Q of the given row vectors.
std::size_t rational_rank(const std::vector<IntVector>& rows, std::size_t cols);

/// Basis of the rational null space {v : M v = 0}, one vector per free column.
std::vector<std::vector<Rational>> rational_kernel(const IntMatrix& m);

}  // namespace toral
