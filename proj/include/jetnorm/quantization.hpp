#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jetnorm/connection_normalizer.hpp"

namespace jetnorm {

/// Hard cap on the hbar truncation order (term count grows factorially).
inline constexpr int kMaxHbarOrder = 4;
inline constexpr int kDefaultHbarOrder = 2;

/// Checks valence (2,0) antisymmetric; the Jacobi identity is checked
/// separately (check_jacobi) and only where quantization requests it.
void require_poisson_jet(const TensorJet& w);

/// Verifies the Jacobi identity through the available jet order; DomainError
/// on failure. Deeper failure is undetectable from a finite jet.
void check_jacobi(const TensorJet& w);

/// {f,g} = sum_ij w^{ij} d_i f d_j g. Result order =
/// min(f.order, g.order) - 1, additionally capped by w.order.
ScalarJet poisson_bracket(const TensorJet& w, const ScalarJet& f, const ScalarJet& g);

template <typename T>
struct FormalSeries {
    int hbar_order = 0;        // N
    std::vector<T> coefficients; // c_0..c_N

    const T& at(int r) const { return coefficients[static_cast<std::size_t>(r)]; }
};

/// Star product for a constant Poisson matrix:
/// c_r = 1/(r! 2^r) sum w^{i1 j1}..w^{ir jr} d_{i1..ir} f . d_{j1..jr} g.
/// Coefficients are exact polynomial products (order = f.order + g.order);
/// only the hbar series is truncated. Requires jets of order >= 2N.
FormalSeries<ScalarJet> moyal_star(const MatrixQ& w0, const ScalarJet& f, const ScalarJet& g,
                                   int hbar_order);

/// Star product of hbar series (for associativity checks).
FormalSeries<ScalarJet> moyal_star_series(const MatrixQ& w0, const FormalSeries<ScalarJet>& a,
                                          const FormalSeries<ScalarJet>& b, int hbar_order);

FormalSeries<ScalarJet> series_from_jet(const ScalarJet& f, int hbar_order);

/// An interchangeable local star-product rule: produces the hbar^r term from
/// (poisson jet, f, g). Any instance must keep the quantization
/// normalization (the skew part of the hbar^1 term is the bracket) and be
/// equivariant under linear coordinate changes.
struct StarBackend {
    std::string name;
    /// Largest hbar order the rule can honestly produce for this poisson
    /// jet. The moyal instance answers the cap for constant jets and 1
    /// otherwise (the hbar^1 term is tensorial, higher ones are not).
    std::function<int(const TensorJet& w)> supported_order;
    /// beta_r(w, f, g); r must not exceed supported_order(w).
    std::function<ScalarJet(const TensorJet& w, const ScalarJet& f, const ScalarJet& g, int r)>
        coefficient;
};

StarBackend moyal_backend();

/// (f*g)*h == f*(g*h) slotwise through hbar^N, exact.
bool associativity_check(const MatrixQ& w0, const ScalarJet& f, const ScalarJet& g,
                         const ScalarJet& h, int hbar_order);

/// Pointwise canonical star product on a manifold with a connection: adapt
/// the chart to theta, carry w, f, g through it, and apply the local backend
/// at the center. N <= 1 needs no adaptation (the hbar^1 term is tensorial);
/// for N >= 2 the backend must support the transported Poisson jet through
/// order 2N-2 (for moyal: constant through that order) or a
/// BackendIncompleteError is raised.
FormalSeries<Rational> canonical_star_at_point(const ConnectionJet& theta, const TensorJet& w,
                                               const ScalarJet& f, const ScalarJet& g,
                                               int hbar_order);
FormalSeries<Rational> canonical_star_at_point(const ConnectionJet& theta, const TensorJet& w,
                                               const ScalarJet& f, const ScalarJet& g,
                                               int hbar_order, const StarBackend& backend);

} // namespace jetnorm
