#pragma once

#include <functional>
#include <string>
#include <variant>

#include "jetnorm/connection_normalizer.hpp"
#include "jetnorm/metric_normalizer.hpp"

namespace jetnorm {

/// Jet of the inverse metric: the (2,0)-symmetric jet b with b * h = identity
/// (1,1)-jet through order k, solved degree by degree.
TensorJet inverse_metric_jet(const TensorJet& h);

/// The normal-form data a local rule may read, plus the chart-transported
/// section jet.
struct AdaptedFrame {
    int dim = 0;
    bool metric_background = false;
    MatrixQ h0;                        // metric backgrounds only
    std::vector<TensorJet> invariants; // gauge-kernel slots of the background
};

/// A coordinate rule evaluated at the center of the adapted chart. It must be
/// equivariant under linear chart changes; that hypothesis is only checked by
/// randomized testing (check_rule_equivariance).
struct LocalRule {
    std::string name;
    int section_order = 0; // derivative order needed on the section
    bool needs_metric = false;
    std::function<TensorJet(const AdaptedFrame&, const TensorJet& transported_section)> apply;
};

LocalRule evaluation_rule();
LocalRule laplacian_rule();

using Background = std::variant<TensorJet /*metric*/, ConnectionJet>;

/// Evaluates a natural operation at the center point: normalize the
/// background, carry the section through the same chart, apply the rule at 0.
/// The result does not depend on the chart the inputs came in.
TensorJet eval_in_adapted_chart(const LocalRule& rule, const Background& background,
                                const TensorJet& section);

/// Laplace-Beltrami value of a scalar jet at the center point, computed in
/// the metric's normal chart (chart to order 2, then h0^{ij} d_i d_j at 0).
Rational laplacian_at_point(const TensorJet& h, const ScalarJet& v);

/// Randomized equivariance check of a rule under linear chart changes.
/// Returns the number of failing trials (0 = passed).
int check_rule_equivariance(const LocalRule& rule, const Background& background,
                            const TensorJet& section, int trials, unsigned long long seed);

ScalarJet scalar_from_tensor(const TensorJet& t);  // valence (0,0) only
TensorJet tensor_from_scalar(const ScalarJet& f);

} // namespace jetnorm
