#pragma once

#include <map>
#include <vector>

#include "jetnorm/diffeo_jet.hpp"

namespace jetnorm {

enum class Symmetry {
    None,
    SymmetricCovariant,        // h_{ij} = h_{ji}, valence (0,2)
    AntisymmetricContravariant // w^{ij} = -w^{ji}, valence (2,0)
};

/// Fiber index tuple: `contra` contravariant slots first, then `cov`
/// covariant slots, each entry in 0..m-1.
using IndexTuple = std::vector<int>;

/// A k-jet of a tensor field: for every fiber component an element of the
/// scalar jet space. Entries are tensor components (not polynomial
/// coefficients); symmetric/antisymmetric valences store one canonical
/// representative per orbit.
class TensorJet {
public:
    TensorJet(int dim, int order, int contra, int cov, Symmetry sym = Symmetry::None);

    int dim() const { return dim_; }
    int order() const { return order_; }
    int contra() const { return contra_; }
    int cov() const { return cov_; }
    Symmetry symmetry() const { return sym_; }

    Rational component(const MultiIndex& a, const IndexTuple& idx) const;
    void set_component(const MultiIndex& a, const IndexTuple& idx, const Rational& value);
    void add_to_component(const MultiIndex& a, const IndexTuple& idx, const Rational& value);

    /// Canonical stored entries; antisymmetric values carry the sign of the
    /// sorted representative.
    const std::map<std::pair<MultiIndex, IndexTuple>, Rational>& entries() const {
        return entries_;
    }

    bool is_zero() const { return entries_.empty(); }

    /// The scalar jet of one fiber component, at the jet's order.
    ScalarJet component_jet(const IndexTuple& idx) const;

    /// All index tuples (full, not canonicalized), row-major.
    std::vector<IndexTuple> all_index_tuples() const;

    TensorJet truncated(int new_order) const;
    TensorJet lifted(int new_order) const;
    TensorJet degree_slice(int n) const; // degree-n z-terms, order n

    TensorJet operator-() const;
    TensorJet& operator+=(const TensorJet& other);
    TensorJet& operator-=(const TensorJet& other);
    friend TensorJet operator+(TensorJet a, const TensorJet& b) { return a += b; }
    friend TensorJet operator-(TensorJet a, const TensorJet& b) { return a -= b; }
    friend TensorJet operator*(const Rational& s, const TensorJet& t);
    bool operator==(const TensorJet& other) const;

private:
    int dim_, order_, contra_, cov_;
    Symmetry sym_;
    std::map<std::pair<MultiIndex, IndexTuple>, Rational> entries_;

    // Returns the canonical tuple and the sign relating it to idx
    // (sign 0: forced-zero entry, e.g. antisymmetric diagonal).
    std::pair<IndexTuple, int> canonical(const IndexTuple& idx) const;
    void check_entry(const MultiIndex& a, const IndexTuple& idx) const;
};

/// A k-jet of an affine connection: components c(a, (l,i,j)) of
/// theta^l_{ij}(z), l the output slot, i the derivative direction, j the
/// argument. No symmetry is imposed (torsion allowed).
class ConnectionJet {
public:
    ConnectionJet(int dim, int order) : t_(dim, order, 1, 2, Symmetry::None) {}
    explicit ConnectionJet(TensorJet t);

    int dim() const { return t_.dim(); }
    int order() const { return t_.order(); }

    Rational component(const MultiIndex& a, int l, int i, int j) const {
        return t_.component(a, IndexTuple{l, i, j});
    }
    void set_component(const MultiIndex& a, int l, int i, int j, const Rational& value) {
        t_.set_component(a, IndexTuple{l, i, j}, value);
    }
    void add_to_component(const MultiIndex& a, int l, int i, int j, const Rational& value) {
        t_.add_to_component(a, IndexTuple{l, i, j}, value);
    }

    /// The underlying (1,2)-tensor jet (the coefficients; a connection does
    /// NOT transform as this tensor -- see act_on_connection_jet).
    const TensorJet& coefficients() const { return t_; }

    bool is_zero() const { return t_.is_zero(); }
    ConnectionJet truncated(int new_order) const { return ConnectionJet(t_.truncated(new_order)); }
    ConnectionJet degree_slice(int n) const { return ConnectionJet(t_.degree_slice(n)); }

    ConnectionJet operator-() const { return ConnectionJet(-t_); }
    friend ConnectionJet operator+(const ConnectionJet& a, const ConnectionJet& b) {
        return ConnectionJet(a.t_ + b.t_);
    }
    friend ConnectionJet operator-(const ConnectionJet& a, const ConnectionJet& b) {
        return ConnectionJet(a.t_ - b.t_);
    }
    bool operator==(const ConnectionJet& other) const { return t_ == other.t_; }

private:
    TensorJet t_;
};

/// Pushforward of a tensor jet along g: the k-jet of
/// x -> rho(J_g(g^{-1}(x))) t(g^{-1}(x)), contravariant slots transformed by
/// the Jacobian, covariant slots by its inverse. Requires
/// g.order >= t.order + 1 (the Jacobian costs one degree).
TensorJet act_on_tensor_jet(const DiffeoJet& g, const TensorJet& t);

/// Pushforward of a connection jet along g: the (1,2)-tensor action plus the
/// chart-transition inhomogeneity from the second derivatives of g^{-1}.
/// Requires g.order >= theta.order + 2.
ConnectionJet act_on_connection_jet(const DiffeoJet& g, const ConnectionJet& theta);

/// Order-0 slice: the value of the section at the center point.
TensorJet eval_at_zero(const TensorJet& t);

} // namespace jetnorm
