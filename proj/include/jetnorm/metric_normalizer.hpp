#pragma once

#include "jetnorm/equivariant_maps.hpp"

namespace jetnorm {

/// The canonical representative of a metric jet modulo origin-preserving
/// chart changes with identity linear part, together with the unique factors
/// that reach it. Slot 1 of the normal form is zero; every higher slot lies
/// in the radial-gauge kernel and is a curvature invariant of the input.
struct MetricNormalForm {
    int dim = 0;
    int order = 0;
    MatrixQ h0;                        // nondegenerate symmetric constant part
    std::vector<TensorJet> invariants; // degrees 2..order (may be empty)
    UnipotentFactors normalizer;       // degrees 2..order+1
    TensorJet normal_form_jet;         // h0 + invariants, assembled at `order`

    MetricNormalForm() : normal_form_jet(1, 0, 0, 2, Symmetry::SymmetricCovariant) {}

    const TensorJet& invariant(int degree) const; // 2 <= degree <= order
};

/// Checks valence (0,2) symmetric and det(h_0) != 0; DomainError otherwise.
void require_metric_jet(const TensorJet& h);

MatrixQ metric_constant_part(const TensorJet& h);

/// Runs the degree-by-degree normalization: for each n = 1..k solve the
/// unique homogeneous chart correction of degree n+1 that brings slot n into
/// the gauge kernel (to zero for n = 1), then apply it. The linear systems
/// are assembled by probing the group action, not from hand-coded formulas.
MetricNormalForm normalize_metric(const TensorJet& h, int k);

struct MetricInvariants {
    Rational det_h0_inverse;
    MatrixQ h0;
    std::vector<TensorJet> invariants; // degrees 2..k
};

MetricInvariants metric_invariants(const TensorJet& h, int k);

/// The probed system matrix for one normalization stage: columns are the
/// gauge images of unit chart corrections against the constant part h0.
/// Exposed for cross-validation tests.
MatrixQ metric_stage_matrix(int dim, int n, const MatrixQ& h0);

/// Same matrix built the slow literal way: probe each basis correction
/// against the full current jet. Test oracle for the cached fast path.
MatrixQ metric_stage_matrix_by_full_probe(const TensorJet& h_current, int n);

/// Verifies that the stored factors actually carry `input` to the stored
/// normal form (exact); used by output certification.
bool metric_normal_form_reproduces(const TensorJet& input, const MetricNormalForm& nf);

} // namespace jetnorm
