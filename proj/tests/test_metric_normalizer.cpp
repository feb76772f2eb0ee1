#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jetnorm/errors.hpp"
#include "jetnorm/metric_normalizer.hpp"
#include "jetnorm/selftest.hpp"

using namespace jetnorm;

namespace {

TensorJet flat(int m, int k) {
    TensorJet h(m, k, 0, 2, Symmetry::SymmetricCovariant);
    for (int i = 0; i < m; ++i) h.set_component(zero_index(m), {i, i}, rational(1));
    return h;
}

} // namespace

TEST_CASE("flat metrics are fixed points") {
    for (int m = 1; m <= 3; ++m) {
        const MetricNormalForm nf = normalize_metric(flat(m, 3), 3);
        CHECK(nf.normalizer.is_identity());
        CHECK(nf.invariant(2).is_zero());
        CHECK(nf.invariant(3).is_zero());
        CHECK(nf.normal_form_jet == flat(m, 3));
    }
}

TEST_CASE("degenerate constant part is a domain error") {
    TensorJet h(2, 2, 0, 2, Symmetry::SymmetricCovariant);
    h.set_component({0, 0}, {0, 0}, rational(1)); // rank 1
    CHECK_THROWS_AS(normalize_metric(h, 2), DomainError);
}

TEST_CASE("one-dimensional metrics flatten completely") {
    // h = (1+z) u^2 at k=2 normalizes to u^2
    TensorJet h(1, 2, 0, 2, Symmetry::SymmetricCovariant);
    h.set_component({0}, {0, 0}, rational(1));
    h.set_component({1}, {0, 0}, rational(1));
    const MetricNormalForm nf = normalize_metric(h, 2);
    CHECK(nf.normal_form_jet == flat(1, 2));
    CHECK_FALSE(nf.normalizer.is_identity());
    CHECK(metric_normal_form_reproduces(h, nf));
}

TEST_CASE("metric invariants tuple") {
    TensorJet four(2, 2, 0, 2, Symmetry::SymmetricCovariant);
    four.set_component({0, 0}, {0, 0}, rational(4));
    four.set_component({0, 0}, {1, 1}, rational(4));
    const MetricInvariants inv = metric_invariants(four, 2);
    CHECK(inv.det_h0_inverse == rational(1, 16));
    CHECK(inv.invariants[0].is_zero());
}

TEST_CASE("sphere jet is a fixed point with the classical curvature slot") {
    const TensorJet sphere = sphere_metric_normal_coordinates(2, 2);
    // spot-check the oracle itself: g_11 = 1 - x2^2/3, g_12 = x1 x2 / 3
    CHECK(sphere.component({0, 2}, {0, 0}) == rational(-1, 3));
    CHECK(sphere.component({1, 1}, {0, 1}) == rational(1, 3));
    CHECK(sphere.component({2, 0}, {0, 0}) == rational(0));

    const MetricNormalForm nf = normalize_metric(sphere, 2);
    CHECK(nf.normalizer.is_identity());
    TensorJet expected(2, 2, 0, 2, Symmetry::SymmetricCovariant);
    expected.set_component({0, 2}, {0, 0}, rational(-1, 3));
    expected.set_component({2, 0}, {1, 1}, rational(-1, 3));
    expected.set_component({1, 1}, {0, 1}, rational(1, 3));
    CHECK(nf.invariant(2) == expected);
}

TEST_CASE("normalization is idempotent") {
    RandomSource rng(5);
    for (int c = 0; c < 8; ++c) {
        const int m = rng.uniform_int(1, 3);
        const int k = rng.uniform_int(1, 3);
        const MetricNormalForm nf = normalize_metric(rng.metric_jet(m, k), k);
        const MetricNormalForm again = normalize_metric(nf.normal_form_jet, k);
        CHECK(again.normalizer.is_identity());
        CHECK(again.normal_form_jet == nf.normal_form_jet);
    }
}

TEST_CASE("normal form is constant along unipotent orbits") {
    RandomSource rng(6);
    for (int c = 0; c < 10; ++c) {
        const int m = rng.uniform_int(1, 3);
        const int k = rng.uniform_int(1, 3);
        const TensorJet h = rng.metric_jet(m, k);
        const DiffeoJet n = rng.unipotent_factors(m, k + 1).assemble(k + 1);
        const MetricNormalForm nf1 = normalize_metric(h, k);
        const MetricNormalForm nf2 = normalize_metric(act_on_tensor_jet(n, h), k);
        CHECK(nf1.normal_form_jet == nf2.normal_form_jet);
        CHECK(metric_normal_form_reproduces(h, nf1));
    }
}

TEST_CASE("linear changes act slotwise on the normal form") {
    RandomSource rng(8);
    for (int c = 0; c < 6; ++c) {
        const int m = rng.uniform_int(2, 3);
        const int k = rng.uniform_int(1, 3);
        const TensorJet h = rng.metric_jet(m, k);
        const MatrixQ a = rng.invertible_matrix(m);
        const DiffeoJet lin = DiffeoJet::linear(a, k + 1);

        const MetricNormalForm nf = normalize_metric(h, k);
        const MetricNormalForm nf_moved = normalize_metric(act_on_tensor_jet(lin, h), k);
        CHECK(nf_moved.normal_form_jet == act_on_tensor_jet(lin, nf.normal_form_jet));
    }
}

TEST_CASE("cached probe matrix equals the literal full-jet probe") {
    RandomSource rng(9);
    for (int c = 0; c < 6; ++c) {
        const int m = rng.uniform_int(1, 3);
        const int k = rng.uniform_int(1, 3);
        TensorJet current = rng.metric_jet(m, k);
        for (int n = 1; n <= k; ++n) {
            CHECK(metric_stage_matrix(m, n, metric_constant_part(current)) ==
                  metric_stage_matrix_by_full_probe(current, n));
        }
    }
}

TEST_CASE("stage solution satisfies the closed-form identity-part equation") {
    // For h0 = identity the first stage solves
    //   -2 d(g_2)_i/dz^j (x) u^i u^j + h_1 = 0
    // componentwise; check the solved factor against that equation.
    RandomSource rng(10);
    for (int c = 0; c < 8; ++c) {
        const int m = rng.uniform_int(1, 3);
        TensorJet h = flat(m, 2);
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) {
                for (int d = 0; d < m; ++d) {
                    h.add_to_component(unit_index(m, d), {i, j}, rng.small_rational());
                }
            }
        }
        const MetricNormalForm nf = normalize_metric(h, 2);
        const HomogeneousMap& g2 = nf.normalizer.factors[0];

        // mu'(g2, id) as a symmetric tensor: the polynomial
        // -2 sum_{ij} d(g2_i)/dz^j u^i u^j has components
        // -(D_ij + D_ji) off the diagonal and -2 D_ii on it.
        TensorJet mu(m, 1, 0, 2, Symmetry::SymmetricCovariant);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const ScalarJet d = g2.components[static_cast<std::size_t>(i)].partial(j);
                for (const auto& [a, v] : d.coefficients()) {
                    mu.add_to_component(a, {i, j}, i == j ? Rational(-2 * v) : Rational(-v));
                }
            }
        }
        CHECK(mu == -h.degree_slice(1));
    }
}
