#include "jetnorm/metric_normalizer.hpp"

#include <map>
#include <mutex>

#include "jetnorm/errors.hpp"

namespace jetnorm {

const TensorJet& MetricNormalForm::invariant(int degree) const {
    if (degree < 2 || degree > order) {
        throw StructuralError("metric normal form: invariant degree out of range");
    }
    return invariants[static_cast<std::size_t>(degree - 2)];
}

void require_metric_jet(const TensorJet& h) {
    if (h.contra() != 0 || h.cov() != 2 || h.symmetry() != Symmetry::SymmetricCovariant) {
        throw StructuralError("metric jet: valence must be (0,2) symmetric");
    }
    if (determinant(metric_constant_part(h)) == 0) {
        throw DomainError("metric jet: constant part is degenerate (det h0 = 0)");
    }
}

MatrixQ metric_constant_part(const TensorJet& h) {
    const int m = h.dim();
    MatrixQ h0(m, m);
    const MultiIndex zero = zero_index(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) h0.at(i, j) = h.component(zero, IndexTuple{i, j});
    }
    return h0;
}

namespace {

// Stage-n gauge condition applied to a degree-n slot: the slot itself for
// n = 1 (it must vanish), the radial contraction for n >= 2.
std::vector<Rational> stage_condition(const TensorJet& slot, int dim, int n) {
    if (n == 1) {
        return vectorize_metric_term(slot, metric_term_basis(dim, 1));
    }
    return vectorize_covector_term(metric_radial_contraction(slot),
                                   covector_term_basis(dim, n + 1));
}

TensorJet constant_metric_jet(int dim, int order, const MatrixQ& h0) {
    TensorJet t(dim, order, 0, 2, Symmetry::SymmetricCovariant);
    const MultiIndex zero = zero_index(dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            t.set_component(zero, IndexTuple{i, j}, h0.at(i, j));
        }
    }
    return t;
}

// The stage matrix is bilinear in (correction, h0): cache the probes against
// the symmetric-matrix basis once per (dim, n) and assemble per h0. Probing
// the constant jet gives the exact same columns as probing the full current
// jet: the degree-n response to a degree-(n+1) correction reads only the
// constant slot (cross terms land strictly above degree n). The full-probe
// variant below is kept as a test oracle for this fact.
struct StageProbeCache {
    std::mutex mutex;
    // (dim, n) -> per symmetric-basis-element matrix
    std::map<std::pair<int, int>, std::vector<MatrixQ>> probes;
};

StageProbeCache& stage_probe_cache() {
    static StageProbeCache cache;
    return cache;
}

std::vector<MatrixQ> build_stage_probes(int dim, int n) {
    const MapBasis corrections = map_basis(dim, n + 1);
    const int cols = static_cast<int>(corrections.elements.size());

    std::vector<MatrixQ> per_basis;
    for (int p = 0; p < dim; ++p) {
        for (int q = p; q < dim; ++q) {
            MatrixQ h0(dim, dim);
            h0.at(p, q) = 1;
            h0.at(q, p) = 1;
            const TensorJet probe_jet = constant_metric_jet(dim, n, h0);
            MatrixQ mat(0, 0);
            for (int col = 0; col < cols; ++col) {
                std::vector<Rational> x(static_cast<std::size_t>(cols));
                x[static_cast<std::size_t>(col)] = 1;
                const HomogeneousMap correction = map_from_vector(dim, n + 1, x);
                const TensorJet moved =
                    act_on_tensor_jet(correction.shear(n + 1), probe_jet);
                const auto column = stage_condition(moved.degree_slice(n), dim, n);
                if (mat.rows() == 0) mat = MatrixQ(static_cast<int>(column.size()), cols);
                for (std::size_t row = 0; row < column.size(); ++row) {
                    mat.at(static_cast<int>(row), col) = column[row];
                }
            }
            per_basis.push_back(std::move(mat));
        }
    }
    return per_basis;
}

const std::vector<MatrixQ>& stage_probes(int dim, int n) {
    auto& cache = stage_probe_cache();
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto it = cache.probes.find({dim, n});
    if (it == cache.probes.end()) {
        it = cache.probes.emplace(std::make_pair(dim, n), build_stage_probes(dim, n)).first;
    }
    return it->second;
}

} // namespace

MatrixQ metric_stage_matrix(int dim, int n, const MatrixQ& h0) {
    const auto& probes = stage_probes(dim, n);
    MatrixQ mat(probes.front().rows(), probes.front().cols());
    std::size_t t = 0;
    for (int p = 0; p < dim; ++p) {
        for (int q = p; q < dim; ++q, ++t) {
            const Rational& w = h0.at(p, q);
            if (w == 0) continue;
            const MatrixQ& basis_mat = probes[t];
            for (int r = 0; r < mat.rows(); ++r) {
                for (int c = 0; c < mat.cols(); ++c) {
                    if (basis_mat.at(r, c) != 0) mat.at(r, c) += w * basis_mat.at(r, c);
                }
            }
        }
    }
    return mat;
}

MatrixQ metric_stage_matrix_by_full_probe(const TensorJet& h_current, int n) {
    const int dim = h_current.dim();
    const MapBasis corrections = map_basis(dim, n + 1);
    const int cols = static_cast<int>(corrections.elements.size());
    const auto base = stage_condition(h_current.degree_slice(n), dim, n);
    MatrixQ mat(static_cast<int>(base.size()), cols);
    for (int col = 0; col < cols; ++col) {
        std::vector<Rational> x(static_cast<std::size_t>(cols));
        x[static_cast<std::size_t>(col)] = 1;
        const HomogeneousMap correction = map_from_vector(dim, n + 1, x);
        const TensorJet moved =
            act_on_tensor_jet(correction.shear(h_current.order() + 1), h_current);
        const auto column = stage_condition(moved.degree_slice(n), dim, n);
        for (std::size_t row = 0; row < column.size(); ++row) {
            mat.at(static_cast<int>(row), col) = column[row] - base[row];
        }
    }
    return mat;
}

MetricNormalForm normalize_metric(const TensorJet& h, int k) {
    require_metric_jet(h);
    if (h.order() < k) {
        throw DomainError("normalize metric: jet order below requested normalization order");
    }
    const int m = h.dim();
    MetricNormalForm nf;
    nf.dim = m;
    nf.order = k;
    nf.h0 = metric_constant_part(h);
    nf.normalizer = UnipotentFactors(m);

    TensorJet current = h.truncated(k);
    for (int n = 1; n <= k; ++n) {
        MatrixQ system = metric_stage_matrix(m, n, nf.h0);
        std::vector<Rational> rhs = stage_condition(current.degree_slice(n), m, n);
        for (auto& v : rhs) v = -v;
        const std::vector<Rational> solution = solve_unique(std::move(system), std::move(rhs));
        const HomogeneousMap correction = map_from_vector(m, n + 1, solution);
        current = act_on_tensor_jet(correction.shear(k + 1), current);
        nf.normalizer.push(correction);
    }

    // Certify the normal form's defining conditions; a violation is a bug.
    if (!current.degree_slice(1).is_zero()) {
        throw InternalInvariantError("normalize metric: slot 1 did not vanish");
    }
    for (int n = 2; n <= k; ++n) {
        TensorJet slot = current.degree_slice(n);
        if (!in_metric_gauge_kernel(slot)) {
            throw InternalInvariantError("normalize metric: invariant slot left the gauge kernel");
        }
        nf.invariants.push_back(std::move(slot));
    }
    nf.normal_form_jet = current;
    return nf;
}

MetricInvariants metric_invariants(const TensorJet& h, int k) {
    MetricNormalForm nf = normalize_metric(h, k);
    MetricInvariants out;
    out.h0 = nf.h0;
    out.det_h0_inverse = 1 / determinant(nf.h0);
    out.invariants = std::move(nf.invariants);
    return out;
}

bool metric_normal_form_reproduces(const TensorJet& input, const MetricNormalForm& nf) {
    const DiffeoJet chart = nf.normalizer.assemble(nf.order + 1);
    return act_on_tensor_jet(chart, input.truncated(nf.order)) == nf.normal_form_jet;
}

} // namespace jetnorm
