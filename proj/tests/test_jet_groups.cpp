#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jetnorm/errors.hpp"
#include "jetnorm/selftest.hpp"
#include "jetnorm/tensor_jet.hpp"

using namespace jetnorm;

namespace {

DiffeoJet one_dim(int order, std::initializer_list<std::pair<int, Rational>> coeffs) {
    ScalarJet c(1, order);
    for (const auto& [d, v] : coeffs) c.set_coefficient(MultiIndex{d}, v);
    return DiffeoJet(1, order, {c});
}

} // namespace

TEST_CASE("diffeo construction rejects bad jets") {
    ScalarJet with_constant(1, 2);
    with_constant.set_coefficient({0}, rational(1));
    with_constant.set_coefficient({1}, rational(1));
    CHECK_THROWS_AS(DiffeoJet(1, 2, {with_constant}), DomainError);

    ScalarJet no_linear(1, 2);
    no_linear.set_coefficient({2}, rational(1));
    CHECK_THROWS_AS(DiffeoJet(1, 2, {no_linear}), DomainError);
}

TEST_CASE("composition and inversion") {
    const DiffeoJet a = one_dim(2, {{1, rational(1)}, {2, rational(1)}});
    const DiffeoJet b = one_dim(2, {{1, rational(1)}, {2, rational(-1)}});
    CHECK(diffeo_compose(a, DiffeoJet::identity(1, 2)) == a);
    CHECK(diffeo_compose(a, b) == DiffeoJet::identity(1, 2));
    CHECK(diffeo_invert(a) == b);
    CHECK(diffeo_invert(DiffeoJet::identity(2, 3)) == DiffeoJet::identity(2, 3));

    // linear maps compose as matrices and invert as matrices
    RandomSource rng(7);
    const MatrixQ ma = rng.invertible_matrix(3);
    const MatrixQ mb = rng.invertible_matrix(3);
    CHECK(diffeo_compose(DiffeoJet::linear(ma, 2), DiffeoJet::linear(mb, 2)) ==
          DiffeoJet::linear(ma * mb, 2));
    CHECK(diffeo_invert(DiffeoJet::linear(ma, 2)) == DiffeoJet::linear(inverse(ma), 2));

    // random inverses compose to the identity
    for (int c = 0; c < 10; ++c) {
        const int m = rng.uniform_int(1, 3);
        const int r = rng.uniform_int(1, 4);
        const DiffeoJet g = rng.diffeo_jet(m, r);
        CHECK(diffeo_compose(g, diffeo_invert(g)) == DiffeoJet::identity(m, r));
        CHECK(diffeo_compose(diffeo_invert(g), g) == DiffeoJet::identity(m, r));
    }
}

TEST_CASE("unipotent factorization") {
    // single factor: z + a z^2
    HomogeneousMap g2(1, 2);
    g2.components[0].set_coefficient({2}, rational(5, 3));
    UnipotentFactors single(1);
    single.push(g2);
    CHECK(single.assemble() == one_dim(2, {{1, rational(1)}, {2, rational(5, 3)}}));

    // empty factors assemble to the identity
    CHECK(UnipotentFactors(2).assemble(3) == DiffeoJet::identity(2, 3));

    RandomSource rng(11);
    for (int c = 0; c < 10; ++c) {
        const int m = rng.uniform_int(1, 3);
        const UnipotentFactors factors = rng.unipotent_factors(m, rng.uniform_int(2, 4));
        const DiffeoJet assembled = factors.assemble();
        CHECK(UnipotentFactors::factorize(assembled) == factors);
        for (std::size_t i = 0; i < factors.factors.size(); ++i) {
            CHECK(factors.factors[i].deg == static_cast<int>(i) + 2);
        }
    }

    CHECK_THROWS_AS(UnipotentFactors::factorize(one_dim(2, {{1, rational(2)}})), DomainError);
}

TEST_CASE("tensor action basics") {
    // identity leaves a jet alone
    RandomSource rng(23);
    const TensorJet t = rng.tensor_jet(2, 2, 1, 1, Symmetry::None);
    CHECK(act_on_tensor_jet(DiffeoJet::identity(2, 3), t) == t);

    // insufficient group order is a domain error
    CHECK_THROWS_AS(act_on_tensor_jet(DiffeoJet::identity(2, 2), t), DomainError);

    // m=1: scaling by 2 pulls a metric back by 1/4
    TensorJet h(1, 0, 0, 2, Symmetry::SymmetricCovariant);
    h.set_component({0}, {0, 0}, rational(1));
    MatrixQ two(1, 1);
    two.at(0, 0) = rational(2);
    const TensorJet moved = act_on_tensor_jet(DiffeoJet::linear(two, 1), h);
    CHECK(moved.component({0}, {0, 0}) == rational(1, 4));

    // symmetry tags survive the action
    const TensorJet sym = rng.tensor_jet(2, 1, 0, 2, Symmetry::SymmetricCovariant);
    const TensorJet sym_moved = act_on_tensor_jet(rng.diffeo_jet(2, 2), sym);
    CHECK(sym_moved.symmetry() == Symmetry::SymmetricCovariant);
    CHECK(sym_moved.component({0, 0}, {0, 1}) == sym_moved.component({0, 0}, {1, 0}));
}

TEST_CASE("action laws on random data") {
    RandomSource rng(31);
    for (int c = 0; c < 12; ++c) {
        const int m = rng.uniform_int(1, 3);
        const int k = rng.uniform_int(0, 3);
        const DiffeoJet g = rng.diffeo_jet(m, k + 2);
        const DiffeoJet h = rng.diffeo_jet(m, k + 2);
        const TensorJet t = rng.tensor_jet(m, k, 1, 1, Symmetry::None);

        CHECK(act_on_tensor_jet(diffeo_compose(g, h).truncated(k + 1), t) ==
              act_on_tensor_jet(g.truncated(k + 1), act_on_tensor_jet(h.truncated(k + 1), t)));
        CHECK(act_on_tensor_jet(diffeo_invert(g).truncated(k + 1),
                                act_on_tensor_jet(g.truncated(k + 1), t)) == t);

        // evaluation at the origin is equivariant through the linear part
        CHECK(eval_at_zero(act_on_tensor_jet(g.truncated(k + 1), t)) ==
              act_on_tensor_jet(DiffeoJet::linear(g.linear_part(), 1), eval_at_zero(t)));
    }
}

TEST_CASE("connection action") {
    // linear changes leave the zero connection flat
    RandomSource rng(41);
    const MatrixQ a = rng.invertible_matrix(2);
    CHECK(act_on_connection_jet(DiffeoJet::linear(a, 3), ConnectionJet(2, 1)).is_zero());

    // quadratic chart term feeds the order-0 slot: -2a for x + a x^2
    const Rational coeff = rational(3, 2);
    ScalarJet comp(1, 2);
    comp.set_coefficient({1}, rational(1));
    comp.set_coefficient({2}, coeff);
    const ConnectionJet moved = act_on_connection_jet(DiffeoJet(1, 2, {comp}), ConnectionJet(1, 0));
    CHECK(moved.component({0}, 0, 0, 0) == -2 * coeff);

    // identity and order errors
    const ConnectionJet theta = rng.connection_jet(2, 1);
    CHECK(act_on_connection_jet(DiffeoJet::identity(2, 3), theta) == theta);
    CHECK_THROWS_AS(act_on_connection_jet(DiffeoJet::identity(2, 2), theta), DomainError);

    // differences of connections move tensorially
    for (int c = 0; c < 8; ++c) {
        const int m = rng.uniform_int(1, 3);
        const int k = rng.uniform_int(0, 2);
        const DiffeoJet g = rng.diffeo_jet(m, k + 2);
        const ConnectionJet t1 = rng.connection_jet(m, k);
        const ConnectionJet t2 = rng.connection_jet(m, k);
        CHECK(act_on_connection_jet(g, t1).coefficients() -
                  act_on_connection_jet(g, t2).coefficients() ==
              act_on_tensor_jet(g.truncated(k + 1), t1.coefficients() - t2.coefficients()));
    }
}
