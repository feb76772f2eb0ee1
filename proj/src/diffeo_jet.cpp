#include "jetnorm/diffeo_jet.hpp"

#include <algorithm>

#include "jetnorm/errors.hpp"

namespace jetnorm {

DiffeoJet::DiffeoJet(int dim, int order, std::vector<ScalarJet> components)
    : dim_(dim), order_(order), components_(std::move(components)) {
    if (order_ < 1) throw StructuralError("diffeo jet: order must be >= 1");
    if (static_cast<int>(components_.size()) != dim_) {
        throw StructuralError("diffeo jet: component count != dimension");
    }
    for (const auto& c : components_) {
        if (c.dim() != dim_ || c.order() != order_) {
            throw StructuralError("diffeo jet: component dim/order mismatch");
        }
        if (c.value_at_zero() != 0) {
            throw DomainError("diffeo jet: components must vanish at the origin");
        }
    }
    if (determinant(linear_part()) == 0) {
        throw DomainError("diffeo jet: linear part is singular");
    }
}

DiffeoJet DiffeoJet::identity(int dim, int order) {
    std::vector<ScalarJet> comps;
    comps.reserve(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) comps.push_back(ScalarJet::variable(dim, order, i));
    return DiffeoJet(dim, order, std::move(comps));
}

DiffeoJet DiffeoJet::linear(const MatrixQ& a, int order) {
    const int m = a.rows();
    if (a.cols() != m) throw StructuralError("diffeo jet: linear part must be square");
    std::vector<ScalarJet> comps;
    comps.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        ScalarJet c(m, order);
        for (int j = 0; j < m; ++j) c.set_coefficient(unit_index(m, j), a.at(i, j));
        comps.push_back(std::move(c));
    }
    return DiffeoJet(m, order, std::move(comps));
}

MatrixQ DiffeoJet::linear_part() const {
    MatrixQ a(dim_, dim_);
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            a.at(i, j) = components_[static_cast<std::size_t>(i)].coefficient(unit_index(dim_, j));
        }
    }
    return a;
}

bool DiffeoJet::is_identity() const {
    return *this == identity(dim_, order_);
}

DiffeoJet DiffeoJet::truncated(int new_order) const {
    std::vector<ScalarJet> comps;
    comps.reserve(components_.size());
    for (const auto& c : components_) comps.push_back(c.truncated(new_order));
    return DiffeoJet(dim_, new_order, std::move(comps));
}

DiffeoJet DiffeoJet::after(const DiffeoJet& other) const {
    return diffeo_compose(*this, other);
}

DiffeoJet DiffeoJet::invert() const {
    return diffeo_invert(*this);
}

std::vector<std::vector<ScalarJet>> DiffeoJet::jacobian() const {
    std::vector<std::vector<ScalarJet>> j;
    j.reserve(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) {
        std::vector<ScalarJet> row;
        row.reserve(static_cast<std::size_t>(dim_));
        for (int d = 0; d < dim_; ++d) {
            row.push_back(components_[static_cast<std::size_t>(i)].partial(d));
        }
        j.push_back(std::move(row));
    }
    return j;
}

bool DiffeoJet::operator==(const DiffeoJet& other) const {
    return dim_ == other.dim_ && order_ == other.order_ && components_ == other.components_;
}

DiffeoJet diffeo_compose(const DiffeoJet& g, const DiffeoJet& h) {
    if (g.dim() != h.dim()) throw StructuralError("diffeo compose: dimension mismatch");
    const int r = std::min(g.order(), h.order());
    const DiffeoJet gt = g.truncated(r);
    std::vector<ScalarJet> comps;
    comps.reserve(static_cast<std::size_t>(g.dim()));
    std::vector<ScalarJet> hcomps;
    hcomps.reserve(static_cast<std::size_t>(h.dim()));
    for (const auto& c : h.components()) hcomps.push_back(c.truncated(r));
    for (int i = 0; i < g.dim(); ++i) {
        comps.push_back(jet_compose(gt.component(i), hcomps));
    }
    return DiffeoJet(g.dim(), r, std::move(comps));
}

DiffeoJet diffeo_invert(const DiffeoJet& g) {
    const int m = g.dim();
    const int r = g.order();
    const MatrixQ a = g.linear_part();
    const MatrixQ ainv = inverse(a); // singularity already rejected on construction

    // Nonlinear part N with g(z) = A z + N(z).
    std::vector<ScalarJet> nonlin;
    nonlin.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        ScalarJet n = g.component(i);
        for (int j = 0; j < m; ++j) {
            n.add_to_coefficient(unit_index(m, j), -a.at(i, j));
        }
        nonlin.push_back(std::move(n));
    }

    // Fixed point of phi = A^{-1} (z - N(phi)); each pass fixes one more degree.
    DiffeoJet phi = DiffeoJet::linear(ainv, r);
    for (int pass = 2; pass <= r; ++pass) {
        std::vector<ScalarJet> n_of_phi;
        n_of_phi.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            n_of_phi.push_back(jet_compose(nonlin[static_cast<std::size_t>(i)], phi.components()));
        }
        std::vector<ScalarJet> next;
        next.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            ScalarJet c(m, r);
            for (int j = 0; j < m; ++j) {
                const Rational& w = ainv.at(i, j);
                if (w == 0) continue;
                c += w * (ScalarJet::variable(m, r, j) - n_of_phi[static_cast<std::size_t>(j)]);
            }
            next.push_back(std::move(c));
        }
        phi = DiffeoJet(m, r, std::move(next));
    }
    return phi;
}

HomogeneousMap::HomogeneousMap(int dim, int deg) : dim(dim), deg(deg) {
    components.assign(static_cast<std::size_t>(dim), ScalarJet(dim, deg));
}

HomogeneousMap::HomogeneousMap(int dim, int deg, std::vector<ScalarJet> comps)
    : dim(dim), deg(deg), components(std::move(comps)) {
    if (static_cast<int>(components.size()) != dim) {
        throw StructuralError("homogeneous map: component count != dimension");
    }
    for (const auto& c : components) {
        if (c.dim() != dim || c.order() != deg) {
            throw StructuralError("homogeneous map: component dim/order mismatch");
        }
        for (const auto& [a, v] : c.coefficients()) {
            if (degree(a) != deg) {
                throw StructuralError("homogeneous map: component not homogeneous");
            }
        }
    }
}

bool HomogeneousMap::is_zero() const {
    for (const auto& c : components) {
        if (!c.is_zero()) return false;
    }
    return true;
}

bool HomogeneousMap::operator==(const HomogeneousMap& other) const {
    return dim == other.dim && deg == other.deg && components == other.components;
}

DiffeoJet HomogeneousMap::shear(int order) const {
    if (order < deg) throw StructuralError("homogeneous map: shear order below degree");
    std::vector<ScalarJet> comps;
    comps.reserve(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        ScalarJet c = components[static_cast<std::size_t>(i)].lifted(order);
        c.add_to_coefficient(unit_index(dim, i), Rational(1));
        comps.push_back(std::move(c));
    }
    return DiffeoJet(dim, order, std::move(comps));
}

bool UnipotentFactors::is_identity() const {
    for (const auto& f : factors) {
        if (!f.is_zero()) return false;
    }
    return true;
}

void UnipotentFactors::push(HomogeneousMap g) {
    if (g.dim != dim) throw StructuralError("unipotent factors: dimension mismatch");
    if (g.deg != top_degree() + 1) {
        throw StructuralError("unipotent factors: factor degree out of sequence");
    }
    factors.push_back(std::move(g));
}

DiffeoJet UnipotentFactors::assemble(int order) const {
    const int r = order < 0 ? std::max(top_degree(), 1) : order;
    DiffeoJet out = DiffeoJet::identity(dim, r);
    for (const auto& f : factors) {
        if (f.deg > r) break;
        out = f.shear(r).after(out); // later (higher-degree) factors act last
    }
    return out;
}

UnipotentFactors UnipotentFactors::factorize(const DiffeoJet& n) {
    if (!(n.linear_part() == MatrixQ::identity(n.dim()))) {
        throw DomainError("unipotent factorize: linear part is not the identity");
    }
    UnipotentFactors out(n.dim());
    DiffeoJet rest = n;
    for (int d = 2; d <= n.order(); ++d) {
        std::vector<ScalarJet> slice;
        slice.reserve(static_cast<std::size_t>(n.dim()));
        for (int i = 0; i < n.dim(); ++i) {
            slice.push_back(rest.component(i).degree_slice(d));
        }
        HomogeneousMap g(n.dim(), d, std::move(slice));
        // Strip the rightmost factor: rest o (E + g_d)^{-1}.
        rest = rest.after(g.shear(n.order()).invert());
        out.push(std::move(g));
    }
    return out;
}

bool UnipotentFactors::operator==(const UnipotentFactors& other) const {
    return dim == other.dim && factors == other.factors;
}

} // namespace jetnorm
