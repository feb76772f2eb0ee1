#pragma once

#include <vector>

#include "jetnorm/linalg.hpp"
#include "jetnorm/scalar_jet.hpp"

namespace jetnorm {

/// An r-jet of an origin-preserving diffeomorphism germ: m coordinate
/// functions with zero constant term and invertible linear part.
class DiffeoJet {
public:
    DiffeoJet(int dim, int order, std::vector<ScalarJet> components);

    static DiffeoJet identity(int dim, int order);
    static DiffeoJet linear(const MatrixQ& a, int order);

    int dim() const { return dim_; }
    int order() const { return order_; }
    const ScalarJet& component(int i) const { return components_[static_cast<std::size_t>(i)]; }
    const std::vector<ScalarJet>& components() const { return components_; }

    MatrixQ linear_part() const;
    bool is_identity() const;

    DiffeoJet truncated(int new_order) const;

    /// this after other: (this o other)(z) = this(other(z)).
    DiffeoJet after(const DiffeoJet& other) const;

    /// Group inverse: after(invert()) and invert().after(*this) are identity.
    DiffeoJet invert() const;

    /// Matrix of partials d(component i)/d(z j), entries of order r-1.
    std::vector<std::vector<ScalarJet>> jacobian() const;

    bool operator==(const DiffeoJet& other) const;

private:
    int dim_;
    int order_;
    std::vector<ScalarJet> components_;
};

DiffeoJet diffeo_compose(const DiffeoJet& g, const DiffeoJet& h); // g o h
DiffeoJet diffeo_invert(const DiffeoJet& g);

/// A polynomial map z -> g(z) with every component homogeneous of one degree;
/// the building block E + g of unipotent jets.
struct HomogeneousMap {
    int dim = 0;
    int deg = 0;
    std::vector<ScalarJet> components; // order == deg, homogeneous

    HomogeneousMap() = default;
    HomogeneousMap(int dim, int deg);
    HomogeneousMap(int dim, int deg, std::vector<ScalarJet> comps);

    bool is_zero() const;
    bool operator==(const HomogeneousMap& other) const;

    /// E + g as a diffeo jet of the requested order (>= deg).
    DiffeoJet shear(int order) const;
};

/// The coordinates (g_2, ..., g_p) of a unipotent jet: the ordered product
/// (E+g_p) o ... o (E+g_2). Degrees run contiguously from 2.
struct UnipotentFactors {
    int dim = 0;
    std::vector<HomogeneousMap> factors; // factors[i].deg == i + 2

    UnipotentFactors() = default;
    explicit UnipotentFactors(int dim) : dim(dim) {}

    int top_degree() const { return static_cast<int>(factors.size()) + 1; }
    bool is_identity() const;
    void push(HomogeneousMap g); // degree must be top_degree() + 1

    /// Assembles the ordered product at the given jet order
    /// (defaults to the top factor degree).
    DiffeoJet assemble(int order = -1) const;

    /// Inverse of assemble: peels factors degree by degree. The input must
    /// have identity linear part.
    static UnipotentFactors factorize(const DiffeoJet& n);

    bool operator==(const UnipotentFactors& other) const;
};

} // namespace jetnorm
