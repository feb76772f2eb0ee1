#include "jetnorm/scalar_jet.hpp"

#include <functional>
#include <sstream>

#include "jetnorm/errors.hpp"

namespace jetnorm {

ScalarJet::ScalarJet(int dim, int order) : dim_(dim), order_(order) {
    if (dim < 1) throw StructuralError("scalar jet: dimension must be >= 1");
    if (order < 0) throw StructuralError("scalar jet: order must be >= 0");
}

ScalarJet ScalarJet::constant(int dim, int order, const Rational& value) {
    ScalarJet j(dim, order);
    j.set_coefficient(zero_index(dim), value);
    return j;
}

ScalarJet ScalarJet::variable(int dim, int order, int direction) {
    if (order < 1) throw StructuralError("scalar jet: variable needs order >= 1");
    ScalarJet j(dim, order);
    j.set_coefficient(unit_index(dim, direction), Rational(1));
    return j;
}

void ScalarJet::check_index(const MultiIndex& a) const {
    if (static_cast<int>(a.size()) != dim_) {
        throw StructuralError("scalar jet: multi-index dimension mismatch");
    }
    for (int e : a) {
        if (e < 0) throw StructuralError("scalar jet: negative exponent");
    }
    if (degree(a) > order_) {
        throw StructuralError("scalar jet: multi-index degree exceeds jet order");
    }
}

Rational ScalarJet::coefficient(const MultiIndex& a) const {
    auto it = coeffs_.find(a);
    return it == coeffs_.end() ? Rational(0) : it->second;
}

void ScalarJet::set_coefficient(const MultiIndex& a, const Rational& value) {
    check_index(a);
    if (value == 0) {
        coeffs_.erase(a);
    } else {
        coeffs_[a] = value;
    }
}

void ScalarJet::add_to_coefficient(const MultiIndex& a, const Rational& value) {
    check_index(a);
    auto it = coeffs_.find(a);
    if (it == coeffs_.end()) {
        if (value != 0) coeffs_.emplace(a, value);
        return;
    }
    it->second += value;
    if (it->second == 0) coeffs_.erase(it);
}

ScalarJet ScalarJet::truncated(int new_order) const {
    ScalarJet j(dim_, new_order);
    for (const auto& [a, c] : coeffs_) {
        if (degree(a) <= new_order) j.coeffs_.emplace(a, c);
    }
    return j;
}

ScalarJet ScalarJet::lifted(int new_order) const {
    if (new_order < order_) throw StructuralError("scalar jet: lift cannot lower order");
    ScalarJet j(dim_, new_order);
    j.coeffs_ = coeffs_;
    return j;
}

ScalarJet ScalarJet::degree_slice(int n) const {
    ScalarJet j(dim_, n);
    for (const auto& [a, c] : coeffs_) {
        if (degree(a) == n) j.coeffs_.emplace(a, c);
    }
    return j;
}

int ScalarJet::top_degree() const {
    int d = 0;
    for (const auto& [a, c] : coeffs_) d = std::max(d, degree(a));
    return d;
}

ScalarJet ScalarJet::operator-() const {
    ScalarJet j(dim_, order_);
    for (const auto& [a, c] : coeffs_) j.coeffs_.emplace(a, -c);
    return j;
}

ScalarJet& ScalarJet::operator+=(const ScalarJet& other) {
    if (other.dim_ != dim_ || other.order_ != order_) {
        throw StructuralError("scalar jet: addition needs equal dim and order");
    }
    for (const auto& [a, c] : other.coeffs_) add_to_coefficient(a, c);
    return *this;
}

ScalarJet& ScalarJet::operator-=(const ScalarJet& other) {
    if (other.dim_ != dim_ || other.order_ != order_) {
        throw StructuralError("scalar jet: subtraction needs equal dim and order");
    }
    for (const auto& [a, c] : other.coeffs_) add_to_coefficient(a, -c);
    return *this;
}

ScalarJet operator*(const ScalarJet& a, const ScalarJet& b) {
    return jet_multiply(a, b);
}

ScalarJet operator*(const Rational& s, const ScalarJet& a) {
    ScalarJet j(a.dim_, a.order_);
    if (s == 0) return j;
    for (const auto& [idx, c] : a.coeffs_) j.coeffs_.emplace(idx, s * c);
    return j;
}

bool ScalarJet::operator==(const ScalarJet& other) const {
    return dim_ == other.dim_ && order_ == other.order_ && coeffs_ == other.coeffs_;
}

ScalarJet ScalarJet::partial(int direction) const {
    if (order_ == 0) throw DomainError("scalar jet: derivative order exhausted");
    if (direction < 0 || direction >= dim_) {
        throw StructuralError("scalar jet: bad derivative direction");
    }
    ScalarJet j(dim_, order_ - 1);
    for (const auto& [a, c] : coeffs_) {
        const int e = a[static_cast<std::size_t>(direction)];
        if (e == 0) continue;
        MultiIndex b = a;
        b[static_cast<std::size_t>(direction)] = e - 1;
        j.add_to_coefficient(b, Rational(e) * c);
    }
    return j;
}

std::string ScalarJet::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [a, c] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        os << format_rational(c);
        for (int i = 0; i < dim_; ++i) {
            const int e = a[static_cast<std::size_t>(i)];
            if (e == 0) continue;
            os << "*z" << (i + 1);
            if (e > 1) os << "^" << e;
        }
    }
    return os.str();
}

ScalarJet jet_multiply(const ScalarJet& a, const ScalarJet& b) {
    if (a.dim() != b.dim()) throw StructuralError("jet multiply: dimension mismatch");
    if (a.order() != b.order()) throw StructuralError("jet multiply: order mismatch");
    const int k = a.order();
    ScalarJet out(a.dim(), k);
    for (const auto& [ia, ca] : a.coefficients()) {
        const int da = degree(ia);
        for (const auto& [ib, cb] : b.coefficients()) {
            if (da + degree(ib) > k) continue;
            MultiIndex sum = ia;
            for (std::size_t t = 0; t < sum.size(); ++t) sum[t] += ib[t];
            out.add_to_coefficient(sum, ca * cb);
        }
    }
    return out;
}

ScalarJet jet_compose(const ScalarJet& f, const std::vector<ScalarJet>& components) {
    const int m = f.dim();
    if (static_cast<int>(components.size()) != m) {
        throw StructuralError("jet compose: component count != dimension");
    }
    const int k = f.order();
    for (const auto& g : components) {
        if (g.dim() != m) throw StructuralError("jet compose: component dimension mismatch");
        if (g.order() < k) throw StructuralError("jet compose: component order too low");
        if (g.value_at_zero() != 0) {
            throw DomainError("jet compose: substituted map must have zero constant term");
        }
    }

    std::vector<ScalarJet> comps;
    comps.reserve(components.size());
    for (const auto& g : components) comps.push_back(g.truncated(k));

    // Monomial values z^a(g), built multiplicatively and memoized.
    std::map<MultiIndex, ScalarJet, GradedLexLess> monomials;
    for (int d = 0; d < m; ++d) monomials.emplace(unit_index(m, d), comps[static_cast<std::size_t>(d)]);

    std::function<const ScalarJet&(const MultiIndex&)> monomial_value =
        [&](const MultiIndex& a) -> const ScalarJet& {
        auto it = monomials.find(a);
        if (it != monomials.end()) return it->second;
        int first = 0;
        while (a[static_cast<std::size_t>(first)] == 0) ++first;
        MultiIndex prev = a;
        --prev[static_cast<std::size_t>(first)];
        ScalarJet value = jet_multiply(monomial_value(prev), comps[static_cast<std::size_t>(first)]);
        return monomials.emplace(a, std::move(value)).first->second;
    };

    ScalarJet out(m, k);
    for (const auto& [a, c] : f.coefficients()) {
        if (degree(a) == 0) {
            out.add_to_coefficient(zero_index(m), c);
        } else {
            out += c * monomial_value(a);
        }
    }
    return out;
}

ScalarJet pack_taylor(int dim, int order,
                      const std::map<MultiIndex, Rational, GradedLexLess>& derivatives,
                      TaylorPacking packing) {
    ScalarJet j(dim, order);
    for (const auto& [a, d] : derivatives) {
        if (static_cast<int>(a.size()) != dim) {
            throw StructuralError("pack taylor: inconsistent multi-index dimension");
        }
        const Rational fact(index_factorial(a));
        Rational c;
        if (packing == TaylorPacking::Standard) {
            c = d / fact;
        } else {
            c = Rational(factorial(degree(a))) / fact * d;
        }
        j.set_coefficient(a, c);
    }
    return j;
}

std::map<MultiIndex, Rational, GradedLexLess>
unpack_taylor(const ScalarJet& jet, TaylorPacking packing) {
    std::map<MultiIndex, Rational, GradedLexLess> out;
    for (const auto& [a, c] : jet.coefficients()) {
        const Rational fact(index_factorial(a));
        if (packing == TaylorPacking::Standard) {
            out[a] = c * fact;
        } else {
            out[a] = c * fact / Rational(factorial(degree(a)));
        }
    }
    return out;
}

} // namespace jetnorm
