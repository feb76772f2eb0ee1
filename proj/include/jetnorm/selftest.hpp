#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jetnorm/connection_normalizer.hpp"
#include "jetnorm/metric_normalizer.hpp"
#include "jetnorm/natural_ops.hpp"
#include "jetnorm/quantization.hpp"

namespace jetnorm {

/// Seeded generators for randomized law checking. Coefficients are kept
/// small: exactness does not care and composition blows up denominators.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed);

    int uniform_int(int lo, int hi);
    Rational small_rational(int max_num = 3, int max_den = 3); // may be zero
    Rational small_rational_nonzero(int max_num = 3, int max_den = 3);

    ScalarJet scalar_jet(int dim, int order);
    HomogeneousMap homogeneous_map(int dim, int deg);
    UnipotentFactors unipotent_factors(int dim, int top_degree);
    MatrixQ invertible_matrix(int dim);
    MatrixQ symmetric_nondegenerate_matrix(int dim);
    MatrixQ antisymmetric_matrix(int dim);
    TensorJet metric_jet(int dim, int order);
    ConnectionJet connection_jet(int dim, int order);
    DiffeoJet diffeo_jet(int dim, int order);
    TensorJet tensor_jet(int dim, int order, int contra, int cov, Symmetry sym);

    /// A connection jet all of whose slots already satisfy the gauge
    /// conditions (sampled from the exact kernel bases).
    ConnectionJet gauge_kernel_connection_jet(int dim, int order);

private:
    std::uint64_t state_;
    std::uint64_t next();
};

struct SuiteResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    int internal_errors = 0; // uniqueness violations: always a bug (exit 3 class)
    std::vector<std::string> notes;

    bool passed() const { return failures == 0 && internal_errors == 0; }
    void note_failure(const std::string& message);
};

// Randomized law suites. Counts are per-suite case totals unless stated.
SuiteResult algebra_laws_suite(int cases, std::uint64_t seed);
SuiteResult group_action_suite(int cases, std::uint64_t seed);
SuiteResult gauge_map_suite(int cases, std::uint64_t seed);
SuiteResult metric_uniqueness_suite(int cases_per_combo, std::uint64_t seed);
SuiteResult connection_uniqueness_suite(int cases_per_combo, std::uint64_t seed);
SuiteResult torsion_suite(int cases, std::uint64_t seed);
SuiteResult fixed_point_suite();
SuiteResult sphere_oracle_suite();
SuiteResult laplacian_oracle_suite(int cases, std::uint64_t seed);
SuiteResult one_dimensional_flatness_suite(int cases, std::uint64_t seed);
SuiteResult moyal_axiom_suite(int cases, std::uint64_t seed);
SuiteResult star_naturality_suite(int cases, std::uint64_t seed);

std::vector<SuiteResult> run_all_suites(std::uint64_t seed, int scale_percent = 100);
SuiteResult run_single_suite(const std::string& name, std::uint64_t seed, int scale_percent = 100);
std::vector<std::string> suite_names();

/// Independent oracles (series expansion / coordinate formulas). Used by the
/// suites above and by the test fixtures.
TensorJet sphere_metric_normal_coordinates(int dim, int order);
Rational laplace_beltrami_reference(const TensorJet& h, const ScalarJet& v);

} // namespace jetnorm
