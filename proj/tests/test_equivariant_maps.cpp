#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jetnorm/equivariant_maps.hpp"
#include "jetnorm/selftest.hpp"

using namespace jetnorm;

namespace {

// Dimension of the kernel as the classical two-row shape (n,2) predicts:
// product over cells of (m + col - row) / hook length.
Rational two_row_module_dimension(int m, int n) {
    Rational num = 1, den = 1;
    for (int j = 1; j <= n; ++j) { // first row
        num *= Rational(m + j - 1);
        den *= Rational(j == 1 ? n + 1 : (j == 2 ? n : n - j + 1));
    }
    for (int j = 1; j <= 2; ++j) { // second row
        num *= Rational(m + j - 2);
        den *= Rational(j == 1 ? 2 : 1);
    }
    return num / den;
}

} // namespace

TEST_CASE("metric radial contraction on simple terms") {
    // z1 (x) (u1)^2 -> 2 (z1)^2 (x) u1
    TensorJet term(2, 1, 0, 2, Symmetry::SymmetricCovariant);
    term.set_component({1, 0}, {0, 0}, rational(1));
    const TensorJet image = metric_radial_contraction(term);
    CHECK(image.component({2, 0}, {0}) == rational(2));
    CHECK(image.entries().size() == 1);

    CHECK(metric_radial_contraction(TensorJet(2, 2, 0, 2, Symmetry::SymmetricCovariant))
              .is_zero());
}

TEST_CASE("curvature-shaped element lies in the kernel") {
    TensorJet kelem(2, 2, 0, 2, Symmetry::SymmetricCovariant);
    kelem.set_component({2, 0}, {1, 1}, rational(1));
    kelem.set_component({0, 2}, {0, 0}, rational(1));
    kelem.set_component({1, 1}, {0, 1}, rational(-1));
    CHECK(in_metric_gauge_kernel(kelem));
    CHECK(metric_gauge_kernel_dimension(2, 2) == 1);
}

TEST_CASE("connection radial contraction on simple terms") {
    // e_1 (x) u^1 (x) v^2 -> z1 z2 (x) e_1
    TensorJet term(2, 0, 1, 2, Symmetry::None);
    term.set_component({0, 0}, {0, 0, 1}, rational(1));
    const TensorJet image = connection_radial_contraction(term);
    CHECK(image.component({1, 1}, {0}) == rational(1));

    // antisymmetric (i,j) pairs die
    TensorJet antisym(2, 0, 1, 2, Symmetry::None);
    antisym.set_component({0, 0}, {0, 0, 1}, rational(1));
    antisym.set_component({0, 0}, {0, 1, 0}, rational(-1));
    CHECK(in_connection_gauge_kernel(antisym));

    // m=1: c e (x) u (x) v -> c z^2 (x) e
    TensorJet one(1, 0, 1, 2, Symmetry::None);
    one.set_component({0}, {0, 0, 0}, rational(7, 2));
    CHECK(connection_radial_contraction(one).component({2}, {0}) == rational(7, 2));
}

TEST_CASE("kernels are trivial in dimension one") {
    for (int n = 0; n <= 4; ++n) {
        if (n >= 1) CHECK(metric_gauge_kernel_dimension(1, n) == 0);
        CHECK(connection_gauge_kernel_dimension(1, n) == 0);
    }
}

TEST_CASE("rank-nullity for the cached matrices") {
    for (int m = 1; m <= 3; ++m) {
        for (int n = 1; n <= 3; ++n) {
            const MatrixQ& mat = metric_radial_matrix(m, n);
            CHECK(rank(mat) + metric_gauge_kernel_dimension(m, n) == mat.cols());
            const MatrixQ& cmat = connection_radial_matrix(m, n);
            CHECK(rank(cmat) + connection_gauge_kernel_dimension(m, n) == cmat.cols());
        }
    }
}

TEST_CASE("metric kernel dimensions match the two-row module") {
    for (int m = 2; m <= 3; ++m) {
        for (int n = 2; n <= 3; ++n) {
            CHECK(Rational(metric_gauge_kernel_dimension(m, n)) == two_row_module_dimension(m, n));
        }
    }
    // classical counts: one curvature function in 2d, six in 3d
    CHECK(metric_gauge_kernel_dimension(2, 2) == 1);
    CHECK(metric_gauge_kernel_dimension(3, 2) == 6);
}

TEST_CASE("contractions are equivariant under linear changes") {
    RandomSource rng(17);
    for (int c = 0; c < 15; ++c) {
        const int m = rng.uniform_int(1, 3);
        const int n = rng.uniform_int(1, 3);
        const MatrixQ a = rng.invertible_matrix(m);

        const TensorJet term =
            rng.tensor_jet(m, n, 0, 2, Symmetry::SymmetricCovariant).degree_slice(n);
        CHECK(metric_radial_contraction(act_on_tensor_jet(DiffeoJet::linear(a, n + 1), term)) ==
              act_on_tensor_jet(DiffeoJet::linear(a, n + 2), metric_radial_contraction(term)));
        CHECK(in_metric_gauge_kernel(term) ==
              in_metric_gauge_kernel(act_on_tensor_jet(DiffeoJet::linear(a, n + 1), term)));

        const TensorJet cterm = rng.tensor_jet(m, n, 1, 2, Symmetry::None).degree_slice(n);
        CHECK(connection_radial_contraction(
                  act_on_tensor_jet(DiffeoJet::linear(a, n + 1), cterm)) ==
              act_on_tensor_jet(DiffeoJet::linear(a, n + 3),
                                connection_radial_contraction(cterm)));
    }
}

TEST_CASE("kernel basis vectors really span the kernel") {
    for (int m = 2; m <= 3; ++m) {
        for (int n = 0; n <= 2; ++n) {
            for (const auto& vec : connection_gauge_kernel_basis(m, n)) {
                CHECK(in_connection_gauge_kernel(connection_term_from_vector(m, n, vec)));
            }
            if (n >= 2) {
                for (const auto& vec : metric_gauge_kernel_basis(m, n)) {
                    CHECK(in_metric_gauge_kernel(metric_term_from_vector(m, n, vec)));
                }
            }
        }
    }
}
