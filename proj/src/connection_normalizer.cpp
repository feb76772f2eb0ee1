#include "jetnorm/connection_normalizer.hpp"

#include <map>
#include <mutex>

#include "jetnorm/errors.hpp"

namespace jetnorm {

const TensorJet& ConnectionNormalForm::invariant(int degree) const {
    if (degree < 0 || degree > order) {
        throw StructuralError("connection normal form: invariant degree out of range");
    }
    return invariants[static_cast<std::size_t>(degree)];
}

HomogeneousMap connection_stage_closed_form(const TensorJet& slot_n, int n) {
    const int m = slot_n.dim();
    const TensorJet contracted = connection_radial_contraction(slot_n); // (1,0), degree n+2
    const Rational scale = Rational(1, (n + 2) * (n + 1));
    std::vector<Rational> x = vectorize_vector_term(contracted, map_basis(m, n + 2));
    for (auto& v : x) v *= scale;
    return map_from_vector(m, n + 2, x);
}

namespace {

std::vector<Rational> stage_condition(const TensorJet& slot, int dim, int n) {
    return vectorize_vector_term(connection_radial_contraction(slot), map_basis(dim, n + 2));
}

struct ConnStageCache {
    std::mutex mutex;
    std::map<std::pair<int, int>, MatrixQ> matrices;
};

ConnStageCache& conn_stage_cache() {
    static ConnStageCache cache;
    return cache;
}

MatrixQ build_connection_stage_matrix(int dim, int n) {
    const MapBasis corrections = map_basis(dim, n + 2);
    const int cols = static_cast<int>(corrections.elements.size());
    const ConnectionJet zero(dim, n);
    MatrixQ mat(cols, cols); // gauge target has the same basis as the corrections
    for (int col = 0; col < cols; ++col) {
        std::vector<Rational> x(static_cast<std::size_t>(cols));
        x[static_cast<std::size_t>(col)] = 1;
        const HomogeneousMap correction = map_from_vector(dim, n + 2, x);
        const ConnectionJet moved = act_on_connection_jet(correction.shear(n + 2), zero);
        const auto column = stage_condition(moved.degree_slice(n).coefficients(), dim, n);
        for (std::size_t row = 0; row < column.size(); ++row) {
            mat.at(static_cast<int>(row), col) = column[row];
        }
    }
    return mat;
}

} // namespace

const MatrixQ& connection_stage_matrix(int dim, int n) {
    auto& cache = conn_stage_cache();
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto it = cache.matrices.find({dim, n});
    if (it == cache.matrices.end()) {
        it = cache.matrices.emplace(std::make_pair(dim, n),
                                    build_connection_stage_matrix(dim, n)).first;
    }
    return it->second;
}

MatrixQ connection_stage_matrix_by_full_probe(const ConnectionJet& current, int n) {
    const int dim = current.dim();
    const MapBasis corrections = map_basis(dim, n + 2);
    const int cols = static_cast<int>(corrections.elements.size());
    const auto base = stage_condition(current.degree_slice(n).coefficients(), dim, n);
    MatrixQ mat(cols, cols);
    for (int col = 0; col < cols; ++col) {
        std::vector<Rational> x(static_cast<std::size_t>(cols));
        x[static_cast<std::size_t>(col)] = 1;
        const HomogeneousMap correction = map_from_vector(dim, n + 2, x);
        const ConnectionJet moved =
            act_on_connection_jet(correction.shear(current.order() + 2), current);
        const auto column = stage_condition(moved.degree_slice(n).coefficients(), dim, n);
        for (std::size_t row = 0; row < column.size(); ++row) {
            mat.at(static_cast<int>(row), col) = column[row] - base[row];
        }
    }
    return mat;
}

HomogeneousMap connection_stage_by_probing(const ConnectionJet& current, int n) {
    const int dim = current.dim();
    MatrixQ system = connection_stage_matrix(dim, n);
    std::vector<Rational> rhs = stage_condition(current.degree_slice(n).coefficients(), dim, n);
    for (auto& v : rhs) v = -v;
    return map_from_vector(dim, n + 2, solve_unique(std::move(system), std::move(rhs)));
}

ConnectionNormalForm normalize_connection(const ConnectionJet& theta, int k) {
    if (theta.order() < k) {
        throw DomainError("normalize connection: jet order below requested order");
    }
    const int m = theta.dim();
    ConnectionNormalForm nf;
    nf.dim = m;
    nf.order = k;
    nf.normalizer = UnipotentFactors(m);

    ConnectionJet current = theta.truncated(k);
    for (int n = 0; n <= k; ++n) {
        const HomogeneousMap correction =
            connection_stage_closed_form(current.degree_slice(n).coefficients(), n);
        current = act_on_connection_jet(correction.shear(k + 2), current);
        nf.normalizer.push(correction);
    }

    for (int n = 0; n <= k; ++n) {
        TensorJet slot = current.degree_slice(n).coefficients();
        if (!in_connection_gauge_kernel(slot)) {
            throw InternalInvariantError(
                "normalize connection: invariant slot left the gauge kernel");
        }
        nf.invariants.push_back(std::move(slot));
    }
    nf.normal_form_jet = current;
    return nf;
}

TensorJet torsion(const ConnectionJet& theta) {
    return normalize_connection(theta.truncated(0), 0).invariant(0);
}

DiffeoJet adapted_chart(const ConnectionJet& theta, int n) {
    return normalize_connection(theta.truncated(n), n).normalizer.assemble(n + 2);
}

bool connection_normal_form_reproduces(const ConnectionJet& input,
                                       const ConnectionNormalForm& nf) {
    const DiffeoJet chart = nf.normalizer.assemble(nf.order + 2);
    return act_on_connection_jet(chart, input.truncated(nf.order)) == nf.normal_form_jet;
}

} // namespace jetnorm
