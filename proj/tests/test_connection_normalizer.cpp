#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jetnorm/connection_normalizer.hpp"
#include "jetnorm/selftest.hpp"

using namespace jetnorm;

TEST_CASE("zero connection is a fixed point") {
    for (int m = 1; m <= 3; ++m) {
        const ConnectionNormalForm nf = normalize_connection(ConnectionJet(m, 2), 2);
        CHECK(nf.normalizer.is_identity());
        for (int n = 0; n <= 2; ++n) CHECK(nf.invariant(n).is_zero());
        CHECK(adapted_chart(ConnectionJet(m, 2), 2) == DiffeoJet::identity(m, 4));
    }
}

TEST_CASE("one-dimensional constant slot") {
    // theta_0 = c: the stage factor is (c/2) z^2 and the invariant vanishes
    const Rational c = rational(4, 3);
    ConnectionJet theta(1, 0);
    theta.set_component({0}, 0, 0, 0, c);
    const ConnectionNormalForm nf = normalize_connection(theta, 0);
    CHECK(nf.invariant(0).is_zero());
    CHECK(nf.normalizer.factors[0].components[0].coefficient({2}) == c / 2);

    // adapted chart z + (c/2) z^2
    const DiffeoJet chart = adapted_chart(theta, 0);
    CHECK(chart.component(0).coefficient({1}) == rational(1));
    CHECK(chart.component(0).coefficient({2}) == c / 2);
}

TEST_CASE("antisymmetric part survives as the order-0 invariant") {
    ConnectionJet theta(2, 0);
    theta.set_component({0, 0}, 0, 0, 1, rational(1));
    const ConnectionNormalForm nf = normalize_connection(theta, 0);
    CHECK(nf.invariant(0).component({0, 0}, {0, 0, 1}) == rational(1, 2));
    CHECK(nf.invariant(0).component({0, 0}, {0, 1, 0}) == rational(-1, 2));
    CHECK(nf.normalizer.factors[0].components[0].coefficient({1, 1}) == rational(1, 2));
}

TEST_CASE("torsion") {
    RandomSource rng(3);
    for (int c = 0; c < 20; ++c) {
        const int m = rng.uniform_int(1, 3);
        const ConnectionJet theta = rng.connection_jet(m, rng.uniform_int(0, 2));
        const TensorJet t = torsion(theta);
        const MultiIndex zero = zero_index(m);
        for (int l = 0; l < m; ++l) {
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    CHECK(t.component(zero, {l, i, j}) ==
                          (theta.component(zero, l, i, j) - theta.component(zero, l, j, i)) / 2);
                }
            }
        }
    }
}

TEST_CASE("adapted chart certification") {
    RandomSource rng(4);
    for (int c = 0; c < 10; ++c) {
        const int m = rng.uniform_int(1, 3);
        const int n = rng.uniform_int(0, 3);
        const ConnectionJet theta = rng.connection_jet(m, n);
        const DiffeoJet chart = adapted_chart(theta, n);
        const ConnectionJet moved = act_on_connection_jet(chart, theta);
        for (int d = 0; d <= n; ++d) {
            CHECK(in_connection_gauge_kernel(moved.degree_slice(d).coefficients()));
        }
    }
}

TEST_CASE("closed form equals the probing solver, and the probe matrix is affine-fixed") {
    RandomSource rng(5);
    for (int c = 0; c < 8; ++c) {
        const int m = rng.uniform_int(1, 3);
        const int k = rng.uniform_int(0, 3);
        ConnectionJet current = rng.connection_jet(m, k);
        for (int n = 0; n <= k; ++n) {
            CHECK(connection_stage_by_probing(current, n) ==
                  connection_stage_closed_form(current.degree_slice(n).coefficients(), n));
            // the probed system matrix does not depend on the jet probed against
            CHECK(connection_stage_matrix_by_full_probe(current, n) ==
                  connection_stage_matrix(m, n));
        }
    }
}

TEST_CASE("normal form is constant along unipotent orbits") {
    RandomSource rng(6);
    for (int c = 0; c < 10; ++c) {
        const int m = rng.uniform_int(1, 3);
        const int k = rng.uniform_int(0, 3);
        const ConnectionJet theta = rng.connection_jet(m, k);
        const DiffeoJet n = rng.unipotent_factors(m, k + 2).assemble(k + 2);
        const ConnectionNormalForm nf1 = normalize_connection(theta, k);
        const ConnectionNormalForm nf2 =
            normalize_connection(act_on_connection_jet(n, theta), k);
        CHECK(nf1.normal_form_jet == nf2.normal_form_jet);
        CHECK(connection_normal_form_reproduces(theta, nf1));
    }
}

TEST_CASE("idempotence") {
    RandomSource rng(7);
    for (int c = 0; c < 8; ++c) {
        const int m = rng.uniform_int(1, 3);
        const int k = rng.uniform_int(0, 3);
        const ConnectionNormalForm nf = normalize_connection(rng.connection_jet(m, k), k);
        const ConnectionNormalForm again = normalize_connection(nf.normal_form_jet, k);
        CHECK(again.normalizer.is_identity());
        CHECK(again.normal_form_jet == nf.normal_form_jet);
    }
}

TEST_CASE("linear changes act slotwise on the invariants") {
    RandomSource rng(8);
    for (int c = 0; c < 6; ++c) {
        const int m = rng.uniform_int(2, 3);
        const int k = rng.uniform_int(0, 2);
        const ConnectionJet theta = rng.connection_jet(m, k);
        const MatrixQ a = rng.invertible_matrix(m);
        const DiffeoJet lin = DiffeoJet::linear(a, k + 2);

        const ConnectionNormalForm nf = normalize_connection(theta, k);
        const ConnectionNormalForm nf_moved =
            normalize_connection(act_on_connection_jet(lin, theta), k);
        // linear changes of connection jets in normal form act tensorially
        CHECK(nf_moved.normal_form_jet.coefficients() ==
              act_on_tensor_jet(lin.truncated(k + 1), nf.normal_form_jet.coefficients()));
    }
}
