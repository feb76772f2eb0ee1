#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jetnorm/errors.hpp"
#include "jetnorm/natural_ops.hpp"
#include "jetnorm/selftest.hpp"

using namespace jetnorm;

namespace {

TensorJet flat(int m, int k) {
    TensorJet h(m, k, 0, 2, Symmetry::SymmetricCovariant);
    for (int i = 0; i < m; ++i) h.set_component(zero_index(m), {i, i}, rational(1));
    return h;
}

// Contraction b^{iq} h_{qj} as a (1,1) jet; must be the constant identity.
bool contracts_to_identity(const TensorJet& b, const TensorJet& h) {
    const int m = h.dim();
    const int k = h.order();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            ScalarJet acc(m, k);
            for (int q = 0; q < m; ++q) {
                acc += jet_multiply(b.component_jet({i, q}), h.component_jet({q, j}));
            }
            ScalarJet expect(m, k);
            if (i == j) expect.set_coefficient(zero_index(m), rational(1));
            if (!(acc == expect)) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("inverse metric jet") {
    // constant diagonal: matrix inverse
    TensorJet four = flat(2, 2);
    four.set_component({0, 0}, {0, 0}, rational(4));
    four.set_component({0, 0}, {1, 1}, rational(4));
    const TensorJet binv = inverse_metric_jet(four);
    CHECK(binv.component({0, 0}, {0, 0}) == rational(1, 4));
    CHECK(contracts_to_identity(binv, four));

    // m=1 geometric series: (1+z)^{-1} = 1 - z + z^2
    TensorJet h(1, 2, 0, 2, Symmetry::SymmetricCovariant);
    h.set_component({0}, {0, 0}, rational(1));
    h.set_component({1}, {0, 0}, rational(1));
    const TensorJet series = inverse_metric_jet(h);
    CHECK(series.component({0}, {0, 0}) == rational(1));
    CHECK(series.component({1}, {0, 0}) == rational(-1));
    CHECK(series.component({2}, {0, 0}) == rational(1));

    RandomSource rng(31);
    for (int c = 0; c < 10; ++c) {
        const int m = rng.uniform_int(1, 3);
        const TensorJet hm = rng.metric_jet(m, rng.uniform_int(0, 3));
        CHECK(contracts_to_identity(inverse_metric_jet(hm), hm));
    }

    TensorJet degenerate(2, 1, 0, 2, Symmetry::SymmetricCovariant);
    degenerate.set_component({0, 0}, {0, 0}, rational(1));
    CHECK_THROWS_AS(inverse_metric_jet(degenerate), DomainError);
}

TEST_CASE("laplacian values") {
    ScalarJet v(2, 2);
    v.set_coefficient({2, 0}, rational(1));
    v.set_coefficient({0, 2}, rational(1));
    CHECK(laplacian_at_point(flat(2, 2), v) == rational(4));

    TensorJet four = flat(2, 2);
    four.set_component({0, 0}, {0, 0}, rational(4));
    four.set_component({0, 0}, {1, 1}, rational(4));
    CHECK(laplacian_at_point(four, v) == rational(1));

    // m=1, h=(1+x)dx^2, v=x^2: matches the coordinate formula value 2
    TensorJet h(1, 2, 0, 2, Symmetry::SymmetricCovariant);
    h.set_component({0}, {0, 0}, rational(1));
    h.set_component({1}, {0, 0}, rational(1));
    ScalarJet x2(1, 2);
    x2.set_coefficient({2}, rational(1));
    CHECK(laplacian_at_point(h, x2) == rational(2));
    CHECK(laplacian_at_point(h, x2) == laplace_beltrami_reference(h, x2));

    // low orders are rejected
    CHECK_THROWS_AS(laplacian_at_point(flat(2, 1), v.truncated(1)), DomainError);
}

TEST_CASE("laplacian agrees with the coordinate formula on random jets") {
    RandomSource rng(33);
    for (int c = 0; c < 25; ++c) {
        const int m = rng.uniform_int(1, 3);
        const TensorJet h = rng.metric_jet(m, 2);
        const ScalarJet v = rng.scalar_jet(m, 2);
        CHECK(laplacian_at_point(h, v) == laplace_beltrami_reference(h, v));
    }
}

TEST_CASE("evaluation rule ignores the background") {
    RandomSource rng(35);
    const TensorJet s = rng.tensor_jet(2, 2, 1, 0, Symmetry::None);
    const TensorJet with_metric =
        eval_in_adapted_chart(evaluation_rule(), Background(rng.metric_jet(2, 2)), s);
    const TensorJet with_connection =
        eval_in_adapted_chart(evaluation_rule(), Background(rng.connection_jet(2, 2)), s);
    CHECK(with_metric == eval_at_zero(s));
    CHECK(with_connection == eval_at_zero(s));
}

TEST_CASE("first partials in the adapted chart give the covariant derivative") {
    // For a torsion-free background the adapted chart kills the order-0
    // slot, so plain partials there equal nabla_i s^j = d_i s^j + th^j_{ik} s^k
    // computed in the incoming chart.
    LocalRule partials;
    partials.name = "first-partials";
    partials.section_order = 1;
    partials.needs_metric = false;
    partials.apply = [](const AdaptedFrame& frame, const TensorJet& s) {
        TensorJet out(frame.dim, 0, 1, 1, Symmetry::None);
        for (int j = 0; j < frame.dim; ++j) {
            for (int i = 0; i < frame.dim; ++i) {
                const Rational v = s.component_jet({j}).partial(i).value_at_zero();
                if (v != 0) out.set_component(zero_index(frame.dim), {j, i}, v);
            }
        }
        return out;
    };

    RandomSource rng(37);
    for (int c = 0; c < 10; ++c) {
        const int m = rng.uniform_int(1, 3);
        // symmetric (torsion-free) connection jet
        ConnectionJet theta(m, 1);
        for (const auto& a : indices_up_to(m, 1)) {
            for (int l = 0; l < m; ++l) {
                for (int i = 0; i < m; ++i) {
                    for (int j = i; j < m; ++j) {
                        const Rational v = rng.small_rational();
                        theta.set_component(a, l, i, j, v);
                        theta.set_component(a, l, j, i, v);
                    }
                }
            }
        }
        const TensorJet s = rng.tensor_jet(m, 1, 1, 0, Symmetry::None);
        const TensorJet got = eval_in_adapted_chart(partials, Background(theta), s);

        const MultiIndex zero = zero_index(m);
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < m; ++i) {
                Rational expect = s.component_jet({j}).partial(i).value_at_zero();
                for (int k = 0; k < m; ++k) {
                    expect += theta.component(zero, j, i, k) * s.component(zero, {k});
                }
                CHECK(got.component(zero, {j, i}) == expect);
            }
        }
    }
}

TEST_CASE("adapted evaluation is chart independent") {
    RandomSource rng(39);
    for (int c = 0; c < 8; ++c) {
        const int m = rng.uniform_int(1, 3);
        const TensorJet h = rng.metric_jet(m, 2);
        const ScalarJet v = rng.scalar_jet(m, 2);
        const DiffeoJet n = rng.unipotent_factors(m, 3).assemble(3);
        CHECK(laplacian_at_point(h, v) ==
              laplacian_at_point(act_on_tensor_jet(n, h),
                                 scalar_from_tensor(act_on_tensor_jet(n, tensor_from_scalar(v)))));
    }
}

TEST_CASE("shipped rules pass the randomized equivariance check") {
    RandomSource rng(41);
    const TensorJet h = rng.metric_jet(2, 2);
    const ScalarJet v = rng.scalar_jet(2, 2);
    CHECK(check_rule_equivariance(laplacian_rule(), Background(h), tensor_from_scalar(v), 10,
                                  991) == 0);
    const TensorJet s = rng.tensor_jet(2, 2, 1, 0, Symmetry::None);
    CHECK(check_rule_equivariance(evaluation_rule(), Background(h), s, 10, 992) == 0);
    CHECK(check_rule_equivariance(evaluation_rule(), Background(rng.connection_jet(2, 2)), s, 10,
                                  993) == 0);
}
