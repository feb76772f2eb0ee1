#pragma once

#include "jetnorm/equivariant_maps.hpp"

namespace jetnorm {

/// Canonical representative of a connection jet modulo unipotent chart
/// changes. Every slot lies in the gauge kernel; slot 0 is the torsion.
struct ConnectionNormalForm {
    int dim = 0;
    int order = 0;
    std::vector<TensorJet> invariants; // degrees 0..order
    UnipotentFactors normalizer;       // degrees 2..order+2
    ConnectionJet normal_form_jet;

    ConnectionNormalForm() : normal_form_jet(1, 0) {}

    const TensorJet& invariant(int degree) const;
};

/// Degree-by-degree normalization using the closed-form stage solution
/// g_{n+2} = radial_contraction(slot_n) / ((n+2)(n+1)).
ConnectionNormalForm normalize_connection(const ConnectionJet& theta, int k);

/// The degree-(n+2) chart correction for one stage, from the closed form.
HomogeneousMap connection_stage_closed_form(const TensorJet& slot_n, int n);

/// The same correction from a generic probed linear solve (the fallback any
/// gauge condition admits); must agree exactly with the closed form.
HomogeneousMap connection_stage_by_probing(const ConnectionJet& current, int n);

/// The probed stage system matrix over the degree-(n+2) correction basis;
/// cached per (dim, n) -- it does not depend on the connection (the action
/// is affine and the inhomogeneity alone feeds degree n).
const MatrixQ& connection_stage_matrix(int dim, int n);

/// Same matrix probed against the given jet instead of the zero jet;
/// test oracle for the independence above.
MatrixQ connection_stage_matrix_by_full_probe(const ConnectionJet& current, int n);

/// Torsion: the order-0 invariant (equals the antisymmetric part of the
/// order-0 slot).
TensorJet torsion(const ConnectionJet& theta);

/// The chart with center 0 in which all slots of theta through degree n
/// satisfy the gauge conditions; assembled at order n+2.
DiffeoJet adapted_chart(const ConnectionJet& theta, int n);

bool connection_normal_form_reproduces(const ConnectionJet& input,
                                       const ConnectionNormalForm& nf);

} // namespace jetnorm
