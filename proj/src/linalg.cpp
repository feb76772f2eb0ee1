#include "jetnorm/linalg.hpp"

#include <utility>

#include "jetnorm/errors.hpp"

namespace jetnorm {

MatrixQ MatrixQ::identity(int n) {
    MatrixQ m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

MatrixQ MatrixQ::transposed() const {
    MatrixQ t(cols_, rows_);
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    }
    return t;
}

MatrixQ operator*(const MatrixQ& a, const MatrixQ& b) {
    if (a.cols() != b.rows()) throw StructuralError("matrix multiply: shape mismatch");
    MatrixQ out(a.rows(), b.cols());
    for (int r = 0; r < a.rows(); ++r) {
        for (int k = 0; k < a.cols(); ++k) {
            if (a.at(r, k) == 0) continue;
            for (int c = 0; c < b.cols(); ++c) {
                out.at(r, c) += a.at(r, k) * b.at(k, c);
            }
        }
    }
    return out;
}

namespace {

// Row-reduces in place, returns rank; pivots recorded per row.
int row_reduce(MatrixQ& a, std::vector<int>* pivot_cols = nullptr) {
    const int rows = a.rows(), cols = a.cols();
    int lead = 0;
    for (int col = 0; col < cols && lead < rows; ++col) {
        int pivot = -1;
        for (int r = lead; r < rows; ++r) {
            if (a.at(r, col) != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        if (pivot != lead) {
            for (int c = 0; c < cols; ++c) std::swap(a.at(pivot, c), a.at(lead, c));
        }
        const Rational inv = 1 / a.at(lead, col);
        for (int c = 0; c < cols; ++c) a.at(lead, c) *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == lead || a.at(r, col) == 0) continue;
            const Rational factor = a.at(r, col);
            for (int c = 0; c < cols; ++c) a.at(r, c) -= factor * a.at(lead, c);
        }
        if (pivot_cols) pivot_cols->push_back(col);
        ++lead;
    }
    return lead;
}

} // namespace

Rational determinant(MatrixQ a) {
    if (a.rows() != a.cols()) throw StructuralError("determinant: matrix not square");
    const int n = a.rows();
    Rational det = 1;
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r) {
            if (a.at(r, col) != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) return Rational(0);
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a.at(pivot, c), a.at(col, c));
            det = -det;
        }
        det *= a.at(col, col);
        const Rational inv = 1 / a.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            if (a.at(r, col) == 0) continue;
            const Rational factor = a.at(r, col) * inv;
            for (int c = col; c < n; ++c) a.at(r, c) -= factor * a.at(col, c);
        }
    }
    return det;
}

MatrixQ inverse(const MatrixQ& a) {
    if (a.rows() != a.cols()) throw StructuralError("inverse: matrix not square");
    const int n = a.rows();
    MatrixQ aug(n, 2 * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) aug.at(r, c) = a.at(r, c);
        aug.at(r, n + r) = 1;
    }
    if (row_reduce(aug) != n) throw DomainError("inverse: singular matrix");
    MatrixQ out(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) out.at(r, c) = aug.at(r, n + c);
    }
    return out;
}

int rank(MatrixQ a) {
    return row_reduce(a);
}

std::vector<Rational> solve_unique(MatrixQ a, std::vector<Rational> b) {
    if (a.rows() != a.cols()) {
        throw StructuralError("solve_unique: system must be square");
    }
    const int n = a.rows();
    if (static_cast<int>(b.size()) != n) {
        throw StructuralError("solve_unique: right-hand side size mismatch");
    }
    MatrixQ aug(n, n + 1);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) aug.at(r, c) = a.at(r, c);
        aug.at(r, n) = b[static_cast<std::size_t>(r)];
    }
    std::vector<int> pivots;
    row_reduce(aug, &pivots);
    // Unique solvability requires a pivot in every variable column and none
    // in the right-hand-side column.
    if (static_cast<int>(pivots.size()) != n ||
        (n > 0 && pivots.back() == n)) {
        throw InternalInvariantError(
            "normalization linear system is not uniquely solvable");
    }
    std::vector<Rational> x(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) x[static_cast<std::size_t>(r)] = aug.at(r, n);
    return x;
}

std::vector<std::vector<Rational>> kernel_basis(MatrixQ a) {
    const int cols = a.cols();
    std::vector<int> pivots;
    row_reduce(a, &pivots);
    std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
    for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;

    std::vector<std::vector<Rational>> basis;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[static_cast<std::size_t>(free)]) continue;
        std::vector<Rational> v(static_cast<std::size_t>(cols));
        v[static_cast<std::size_t>(free)] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            v[static_cast<std::size_t>(pivots[r])] = -a.at(static_cast<int>(r), free);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace jetnorm
