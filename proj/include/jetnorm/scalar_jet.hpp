#pragma once

#include <map>
#include <string>
#include <vector>

#include "jetnorm/multi_index.hpp"

namespace jetnorm {

/// A truncated multivariate polynomial of degree <= order over exact
/// rationals: the k-jet of a scalar function at the origin. Coefficients are
/// plain polynomial coefficients (standard Taylor packing, see pack_taylor).
/// Immutable by convention: operations return new values.
class ScalarJet {
public:
    ScalarJet(int dim, int order);

    static ScalarJet constant(int dim, int order, const Rational& value);
    static ScalarJet variable(int dim, int order, int direction); // z^direction, 0-based

    int dim() const { return dim_; }
    int order() const { return order_; }

    Rational coefficient(const MultiIndex& a) const; // 0 if absent
    void set_coefficient(const MultiIndex& a, const Rational& value);
    void add_to_coefficient(const MultiIndex& a, const Rational& value);

    const std::map<MultiIndex, Rational, GradedLexLess>& coefficients() const {
        return coeffs_;
    }

    bool is_zero() const { return coeffs_.empty(); }
    Rational value_at_zero() const { return coefficient(zero_index(dim_)); }

    /// Same coefficients, order re-declared (dropping terms when lowering).
    ScalarJet truncated(int new_order) const;
    ScalarJet lifted(int new_order) const;

    /// Degree-n terms only, as a jet of order n.
    ScalarJet degree_slice(int n) const;
    /// Largest degree with a nonzero coefficient (0 for the zero jet).
    int top_degree() const;

    ScalarJet operator-() const;
    ScalarJet& operator+=(const ScalarJet& other);
    ScalarJet& operator-=(const ScalarJet& other);
    friend ScalarJet operator+(ScalarJet a, const ScalarJet& b) { return a += b; }
    friend ScalarJet operator-(ScalarJet a, const ScalarJet& b) { return a -= b; }
    friend ScalarJet operator*(const ScalarJet& a, const ScalarJet& b);
    friend ScalarJet operator*(const Rational& s, const ScalarJet& a);
    bool operator==(const ScalarJet& other) const;

    /// Formal partial derivative; order drops by one.
    ScalarJet partial(int direction) const;

    std::string to_string() const;

private:
    int dim_;
    int order_;
    std::map<MultiIndex, Rational, GradedLexLess> coeffs_;

    void check_index(const MultiIndex& a) const;
};

/// Truncated product; both factors must share dim and order.
ScalarJet jet_multiply(const ScalarJet& a, const ScalarJet& b);

/// k-jet of f(g(z)) for polynomial component maps g with g(0) = 0.
/// `components` are the coordinate functions of g; result order = f.order.
ScalarJet jet_compose(const ScalarJet& f, const std::vector<ScalarJet>& components);

enum class TaylorPacking {
    Standard,    // coefficient of z^a is D_a / (a_1! ... a_m!)
    Multinomial, // coefficient of z^a is |a|!/(a_1! ... a_m!) * D_a
};

/// Builds a jet from partial-derivative values at 0 under the chosen packing.
ScalarJet pack_taylor(int dim, int order,
                      const std::map<MultiIndex, Rational, GradedLexLess>& derivatives,
                      TaylorPacking packing = TaylorPacking::Standard);

/// Inverse of pack_taylor; zero derivatives are omitted from the result.
std::map<MultiIndex, Rational, GradedLexLess>
unpack_taylor(const ScalarJet& jet, TaylorPacking packing = TaylorPacking::Standard);

} // namespace jetnorm
