#include "jetnorm/equivariant_maps.hpp"

#include <map>
#include <mutex>

#include "jetnorm/errors.hpp"

namespace jetnorm {

namespace {

int homogeneous_degree(const TensorJet& term) {
    int n = -1;
    for (const auto& [key, v] : term.entries()) {
        const int d = degree(key.first);
        if (n < 0) n = d;
        if (d != n) throw StructuralError("radial contraction: term is not homogeneous");
    }
    return n < 0 ? term.order() : n;
}

} // namespace

TensorJet metric_radial_contraction(const TensorJet& term) {
    if (term.contra() != 0 || term.cov() != 2 ||
        term.symmetry() != Symmetry::SymmetricCovariant) {
        throw StructuralError("metric radial contraction: needs a symmetric (0,2) term");
    }
    const int m = term.dim();
    const int n = homogeneous_degree(term);
    TensorJet out(m, n + 1, 0, 1, Symmetry::None);
    // Components: with q(u) = sum c_{ij} u^i u^j, dq/du^s = 2 sum_j c_{sj} u^j.
    for (const auto& [key, v] : term.entries()) {
        const auto& [a, idx] = key;
        const int i = idx[0], j = idx[1];
        MultiIndex ai = a;
        ++ai[static_cast<std::size_t>(i)];
        out.add_to_component(ai, IndexTuple{j}, 2 * v);
        if (i != j) { // canonical entry stands for both (i,j) and (j,i)
            MultiIndex aj = a;
            ++aj[static_cast<std::size_t>(j)];
            out.add_to_component(aj, IndexTuple{i}, 2 * v);
        }
    }
    return out;
}

TensorJet connection_radial_contraction(const TensorJet& term) {
    if (term.contra() != 1 || term.cov() != 2 || term.symmetry() != Symmetry::None) {
        throw StructuralError("connection radial contraction: needs a plain (1,2) term");
    }
    const int m = term.dim();
    const int n = homogeneous_degree(term);
    TensorJet out(m, n + 2, 1, 0, Symmetry::None);
    for (const auto& [key, v] : term.entries()) {
        const auto& [a, idx] = key;
        const int l = idx[0], i = idx[1], j = idx[2];
        MultiIndex b = a;
        ++b[static_cast<std::size_t>(i)];
        ++b[static_cast<std::size_t>(j)];
        out.add_to_component(b, IndexTuple{l}, v);
    }
    return out;
}

bool in_metric_gauge_kernel(const TensorJet& term) {
    return metric_radial_contraction(term).is_zero();
}

bool in_connection_gauge_kernel(const TensorJet& term) {
    return connection_radial_contraction(term).is_zero();
}

MetricTermBasis metric_term_basis(int dim, int n) {
    MetricTermBasis basis;
    for (const auto& a : indices_of_degree(dim, n)) {
        for (int i = 0; i < dim; ++i) {
            for (int j = i; j < dim; ++j) {
                basis.elements.emplace_back(a, IndexTuple{i, j});
            }
        }
    }
    return basis;
}

ConnectionTermBasis connection_term_basis(int dim, int n) {
    ConnectionTermBasis basis;
    for (const auto& a : indices_of_degree(dim, n)) {
        for (int l = 0; l < dim; ++l) {
            for (int i = 0; i < dim; ++i) {
                for (int j = 0; j < dim; ++j) {
                    basis.elements.emplace_back(a, IndexTuple{l, i, j});
                }
            }
        }
    }
    return basis;
}

MapBasis map_basis(int dim, int deg) {
    MapBasis basis;
    for (const auto& a : indices_of_degree(dim, deg)) {
        for (int c = 0; c < dim; ++c) basis.elements.emplace_back(a, c);
    }
    return basis;
}

CovectorTermBasis covector_term_basis(int dim, int deg) {
    CovectorTermBasis basis;
    for (const auto& a : indices_of_degree(dim, deg)) {
        for (int c = 0; c < dim; ++c) basis.elements.emplace_back(a, c);
    }
    return basis;
}

std::vector<Rational> vectorize_metric_term(const TensorJet& term, const MetricTermBasis& basis) {
    std::vector<Rational> x;
    x.reserve(basis.elements.size());
    for (const auto& [a, idx] : basis.elements) x.push_back(term.component(a, idx));
    return x;
}

std::vector<Rational> vectorize_connection_term(const TensorJet& term,
                                                const ConnectionTermBasis& basis) {
    std::vector<Rational> x;
    x.reserve(basis.elements.size());
    for (const auto& [a, idx] : basis.elements) x.push_back(term.component(a, idx));
    return x;
}

std::vector<Rational> vectorize_covector_term(const TensorJet& term,
                                              const CovectorTermBasis& basis) {
    std::vector<Rational> x;
    x.reserve(basis.elements.size());
    for (const auto& [a, c] : basis.elements) x.push_back(term.component(a, IndexTuple{c}));
    return x;
}

std::vector<Rational> vectorize_vector_term(const TensorJet& term, const MapBasis& basis) {
    std::vector<Rational> x;
    x.reserve(basis.elements.size());
    for (const auto& [a, c] : basis.elements) x.push_back(term.component(a, IndexTuple{c}));
    return x;
}

HomogeneousMap map_from_vector(int dim, int deg, const std::vector<Rational>& x) {
    const MapBasis basis = map_basis(dim, deg);
    if (x.size() != basis.elements.size()) {
        throw StructuralError("map_from_vector: coordinate size mismatch");
    }
    HomogeneousMap g(dim, deg);
    for (std::size_t t = 0; t < x.size(); ++t) {
        const auto& [a, c] = basis.elements[t];
        if (x[t] != 0) g.components[static_cast<std::size_t>(c)].set_coefficient(a, x[t]);
    }
    return g;
}

TensorJet metric_term_from_vector(int dim, int n, const std::vector<Rational>& x) {
    const MetricTermBasis basis = metric_term_basis(dim, n);
    if (x.size() != basis.elements.size()) {
        throw StructuralError("metric_term_from_vector: coordinate size mismatch");
    }
    TensorJet t(dim, n, 0, 2, Symmetry::SymmetricCovariant);
    for (std::size_t s = 0; s < x.size(); ++s) {
        const auto& [a, idx] = basis.elements[s];
        if (x[s] != 0) t.set_component(a, idx, x[s]);
    }
    return t;
}

TensorJet connection_term_from_vector(int dim, int n, const std::vector<Rational>& x) {
    const ConnectionTermBasis basis = connection_term_basis(dim, n);
    if (x.size() != basis.elements.size()) {
        throw StructuralError("connection_term_from_vector: coordinate size mismatch");
    }
    TensorJet t(dim, n, 1, 2, Symmetry::None);
    for (std::size_t s = 0; s < x.size(); ++s) {
        const auto& [a, idx] = basis.elements[s];
        if (x[s] != 0) t.set_component(a, idx, x[s]);
    }
    return t;
}

namespace {

struct RadialCache {
    std::mutex mutex;
    std::map<std::pair<int, int>, MatrixQ> metric_matrices;
    std::map<std::pair<int, int>, MatrixQ> connection_matrices;
    std::map<std::pair<int, int>, std::vector<std::vector<Rational>>> metric_kernels;
    std::map<std::pair<int, int>, std::vector<std::vector<Rational>>> connection_kernels;
};

RadialCache& radial_cache() {
    static RadialCache cache;
    return cache;
}

MatrixQ build_metric_radial_matrix(int dim, int n) {
    const auto domain = metric_term_basis(dim, n);
    const auto codomain = covector_term_basis(dim, n + 1);
    MatrixQ mat(static_cast<int>(codomain.elements.size()),
                static_cast<int>(domain.elements.size()));
    for (std::size_t col = 0; col < domain.elements.size(); ++col) {
        TensorJet e(dim, n, 0, 2, Symmetry::SymmetricCovariant);
        e.set_component(domain.elements[col].first, domain.elements[col].second, Rational(1));
        const auto image = vectorize_covector_term(metric_radial_contraction(e), codomain);
        for (std::size_t row = 0; row < image.size(); ++row) {
            mat.at(static_cast<int>(row), static_cast<int>(col)) = image[row];
        }
    }
    return mat;
}

MatrixQ build_connection_radial_matrix(int dim, int n) {
    const auto domain = connection_term_basis(dim, n);
    const auto codomain = map_basis(dim, n + 2);
    MatrixQ mat(static_cast<int>(codomain.elements.size()),
                static_cast<int>(domain.elements.size()));
    for (std::size_t col = 0; col < domain.elements.size(); ++col) {
        TensorJet e(dim, n, 1, 2, Symmetry::None);
        e.set_component(domain.elements[col].first, domain.elements[col].second, Rational(1));
        const auto image = vectorize_vector_term(connection_radial_contraction(e), codomain);
        for (std::size_t row = 0; row < image.size(); ++row) {
            mat.at(static_cast<int>(row), static_cast<int>(col)) = image[row];
        }
    }
    return mat;
}

} // namespace

const MatrixQ& metric_radial_matrix(int dim, int n) {
    auto& cache = radial_cache();
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto it = cache.metric_matrices.find({dim, n});
    if (it == cache.metric_matrices.end()) {
        it = cache.metric_matrices.emplace(std::make_pair(dim, n),
                                           build_metric_radial_matrix(dim, n)).first;
    }
    return it->second;
}

const MatrixQ& connection_radial_matrix(int dim, int n) {
    auto& cache = radial_cache();
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto it = cache.connection_matrices.find({dim, n});
    if (it == cache.connection_matrices.end()) {
        it = cache.connection_matrices.emplace(std::make_pair(dim, n),
                                               build_connection_radial_matrix(dim, n)).first;
    }
    return it->second;
}

const std::vector<std::vector<Rational>>& metric_gauge_kernel_basis(int dim, int n) {
    const MatrixQ mat = metric_radial_matrix(dim, n);
    auto& cache = radial_cache();
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto it = cache.metric_kernels.find({dim, n});
    if (it == cache.metric_kernels.end()) {
        it = cache.metric_kernels.emplace(std::make_pair(dim, n), kernel_basis(mat)).first;
    }
    return it->second;
}

const std::vector<std::vector<Rational>>& connection_gauge_kernel_basis(int dim, int n) {
    const MatrixQ mat = connection_radial_matrix(dim, n);
    auto& cache = radial_cache();
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto it = cache.connection_kernels.find({dim, n});
    if (it == cache.connection_kernels.end()) {
        it = cache.connection_kernels.emplace(std::make_pair(dim, n), kernel_basis(mat)).first;
    }
    return it->second;
}

int metric_gauge_kernel_dimension(int dim, int n) {
    return static_cast<int>(metric_gauge_kernel_basis(dim, n).size());
}

int connection_gauge_kernel_dimension(int dim, int n) {
    return static_cast<int>(connection_gauge_kernel_basis(dim, n).size());
}

} // namespace jetnorm
