#pragma once

#include <vector>

#include "jetnorm/rational.hpp"

namespace jetnorm {

/// Dense matrix of exact rationals. Small sizes only (normal-form systems).
class MatrixQ {
public:
    MatrixQ() : rows_(0), cols_(0) {}
    MatrixQ(int rows, int cols)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}

    static MatrixQ identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& at(int r, int c) { return data_[idx(r, c)]; }
    const Rational& at(int r, int c) const { return data_[idx(r, c)]; }

    bool operator==(const MatrixQ& other) const = default;

    MatrixQ transposed() const;
    friend MatrixQ operator*(const MatrixQ& a, const MatrixQ& b);

private:
    int rows_, cols_;
    std::vector<Rational> data_;

    std::size_t idx(int r, int c) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(c);
    }
};

Rational determinant(MatrixQ a);

/// Gauss-Jordan inverse; DomainError when singular.
MatrixQ inverse(const MatrixQ& a);

int rank(MatrixQ a);

/// Solves the square system A x = b, insisting on a unique solution.
/// A singular or inconsistent system raises InternalInvariantError: the
/// normalization theory guarantees uniqueness, so this is always a bug.
std::vector<Rational> solve_unique(MatrixQ a, std::vector<Rational> b);

/// Basis of the null space {x : A x = 0}.
std::vector<std::vector<Rational>> kernel_basis(MatrixQ a);

} // namespace jetnorm
