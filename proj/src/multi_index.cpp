#include "jetnorm/multi_index.hpp"

#include <algorithm>
#include <numeric>

namespace jetnorm {

int degree(const MultiIndex& a) {
    return std::accumulate(a.begin(), a.end(), 0);
}

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
    const int da = degree(a), db = degree(b);
    if (da != db) return da < db;
    return a < b;
}

MultiIndex zero_index(int dim) {
    return MultiIndex(static_cast<std::size_t>(dim), 0);
}

MultiIndex unit_index(int dim, int direction) {
    MultiIndex a = zero_index(dim);
    a[static_cast<std::size_t>(direction)] = 1;
    return a;
}

namespace {

void enumerate(int dim, int d, int pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
    if (pos == dim - 1) {
        cur[static_cast<std::size_t>(pos)] = d;
        out.push_back(cur);
        return;
    }
    for (int e = d; e >= 0; --e) {
        cur[static_cast<std::size_t>(pos)] = e;
        enumerate(dim, d - e, pos + 1, cur, out);
    }
}

} // namespace

std::vector<MultiIndex> indices_of_degree(int dim, int d) {
    std::vector<MultiIndex> out;
    MultiIndex cur = zero_index(dim);
    enumerate(dim, d, 0, cur, out);
    // lex order within fixed degree
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MultiIndex> indices_up_to(int dim, int k) {
    std::vector<MultiIndex> out;
    for (int d = 0; d <= k; ++d) {
        auto part = indices_of_degree(dim, d);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

Integer index_factorial(const MultiIndex& a) {
    Integer r = 1;
    for (int e : a) r *= factorial(e);
    return r;
}

} // namespace jetnorm
