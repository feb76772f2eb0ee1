#pragma once

#include <vector>

#include "jetnorm/rational.hpp"

namespace jetnorm {

/// Exponent vector of a monomial in z^1..z^m. Length = ambient dimension.
using MultiIndex = std::vector<int>;

int degree(const MultiIndex& a);

/// Graded lexicographic: first by total degree, then lexicographically.
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        return graded_lex_less(a, b);
    }
};

MultiIndex zero_index(int dim);
MultiIndex unit_index(int dim, int direction); // e_direction, 0-based

/// All multi-indices of degree exactly d, graded-lex ordered.
std::vector<MultiIndex> indices_of_degree(int dim, int d);

/// All multi-indices of degree <= k, graded-lex ordered.
std::vector<MultiIndex> indices_up_to(int dim, int k);

/// i_1! i_2! ... i_m!
Integer index_factorial(const MultiIndex& a);

} // namespace jetnorm
