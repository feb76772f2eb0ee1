#pragma once

#include "jetnorm/linalg.hpp"
#include "jetnorm/tensor_jet.hpp"

namespace jetnorm {

/// Radial contraction of a homogeneous degree-n metric term
/// f(z) (x) q(u): f(z) z^i (x) dq/du^i, a (0,1)-valued term of z-degree n+1.
/// Its kernel is the degree-n normal-gauge condition for metric jets.
TensorJet metric_radial_contraction(const TensorJet& term);

/// Radial contraction of a homogeneous degree-n connection term
/// f(z) (x) e_l (x) u^i (x) v^j: f(z) z^i z^j (x) e_l, a vector-valued term
/// of z-degree n+2. Its kernel is the degree-n normal-gauge condition for
/// connection jets (degree 0: kernel = antisymmetric part, the torsion).
TensorJet connection_radial_contraction(const TensorJet& term);

bool in_metric_gauge_kernel(const TensorJet& term);
bool in_connection_gauge_kernel(const TensorJet& term);

/// Deterministic bases for vectorizing homogeneous terms. Pairs/triples are
/// canonical representatives in the same order the matrices below use.
struct MetricTermBasis {
    std::vector<std::pair<MultiIndex, IndexTuple>> elements; // (z-index, i<=j)
};
struct ConnectionTermBasis {
    std::vector<std::pair<MultiIndex, IndexTuple>> elements; // (z-index, (l,i,j))
};
struct MapBasis {
    std::vector<std::pair<MultiIndex, int>> elements; // (z-index, component)
};
struct CovectorTermBasis {
    std::vector<std::pair<MultiIndex, int>> elements; // (z-index, covariant index)
};

MetricTermBasis metric_term_basis(int dim, int n);
ConnectionTermBasis connection_term_basis(int dim, int n);
MapBasis map_basis(int dim, int deg);            // S^deg (x) R^m
CovectorTermBasis covector_term_basis(int dim, int deg); // S^deg (x) R^m*

std::vector<Rational> vectorize_metric_term(const TensorJet& term, const MetricTermBasis& basis);
std::vector<Rational> vectorize_connection_term(const TensorJet& term,
                                                const ConnectionTermBasis& basis);
std::vector<Rational> vectorize_covector_term(const TensorJet& term,
                                              const CovectorTermBasis& basis);
std::vector<Rational> vectorize_vector_term(const TensorJet& term, const MapBasis& basis);
HomogeneousMap map_from_vector(int dim, int deg, const std::vector<Rational>& x);

/// Matrix of the metric radial contraction over the bases above; cached.
const MatrixQ& metric_radial_matrix(int dim, int n);
/// Matrix of the connection radial contraction over the bases above; cached.
const MatrixQ& connection_radial_matrix(int dim, int n);

/// Exact kernel data, cached per (dim, n).
int metric_gauge_kernel_dimension(int dim, int n);
int connection_gauge_kernel_dimension(int dim, int n);
const std::vector<std::vector<Rational>>& metric_gauge_kernel_basis(int dim, int n);
const std::vector<std::vector<Rational>>& connection_gauge_kernel_basis(int dim, int n);

/// Rebuilds a homogeneous (0,2)-symmetric term from basis coordinates.
TensorJet metric_term_from_vector(int dim, int n, const std::vector<Rational>& x);
/// Rebuilds a homogeneous (1,2) term from basis coordinates.
TensorJet connection_term_from_vector(int dim, int n, const std::vector<Rational>& x);

} // namespace jetnorm
