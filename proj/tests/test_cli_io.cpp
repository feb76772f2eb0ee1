#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "jetnorm/cli.hpp"
#include "jetnorm/errors.hpp"
#include "jetnorm/json_io.hpp"
#include "jetnorm/selftest.hpp"

using namespace jetnorm;
using nlohmann::json;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("jetnorm_test_" + name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

int run(const std::vector<std::string>& args, std::string* stdout_text = nullptr,
        std::string* stderr_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_command(args, out, err);
    if (stdout_text) *stdout_text = out.str();
    if (stderr_text) *stderr_text = err.str();
    return code;
}

const char* kFlatMetric = R"({
  "kind": "metric", "dim": 2, "order": 0,
  "entries": [
    {"multi_index": [0,0], "indices": [1,1], "value": "1/1"},
    {"multi_index": [0,0], "indices": [2,2], "value": "1/1"}
  ]
})";

} // namespace

TEST_CASE("minimal flat metric document parses") {
    const ParsedJet p = parse_jet_text(kFlatMetric);
    const TensorJet h = expect_metric(p);
    CHECK(h.dim() == 2);
    CHECK(h.component({0, 0}, {0, 0}) == rational(1));
    CHECK(h.component({0, 0}, {1, 1}) == rational(1));
}

TEST_CASE("symmetry violations and bad values are structural errors") {
    CHECK_THROWS_AS(parse_jet_text(R"({
      "kind": "metric", "dim": 2, "order": 0,
      "entries": [
        {"multi_index": [0,0], "indices": [1,2], "value": "1/1"},
        {"multi_index": [0,0], "indices": [2,1], "value": "2/1"}
      ]})"),
                    StructuralError);
    CHECK_THROWS_AS(parse_jet_text(R"({
      "kind": "metric", "dim": 2, "order": 0,
      "entries": [{"multi_index": [0,0], "indices": [1,1], "value": "0.5"}]})"),
                    StructuralError);
    CHECK_THROWS_AS(parse_jet_text(R"({
      "kind": "metric", "dim": 2, "order": 0,
      "entries": [{"multi_index": [0,0], "indices": [1,1], "value": 1}]})"),
                    StructuralError);
    CHECK_THROWS_AS(parse_jet_text("not json at all"), StructuralError);
    CHECK_THROWS_AS(parse_jet_text(R"({"kind": "sections", "dim": 1, "order": 0})"),
                    StructuralError);
    // antisymmetric diagonal entry
    CHECK_THROWS_AS(parse_jet_text(R"({
      "kind": "poisson", "dim": 2, "order": 0,
      "entries": [{"multi_index": [0,0], "indices": [1,1], "value": "1/1"}]})"),
                    StructuralError);
}

TEST_CASE("round trips") {
    RandomSource rng(71);
    for (int c = 0; c < 10; ++c) {
        const int m = rng.uniform_int(1, 3);
        const ConnectionJet theta = rng.connection_jet(m, rng.uniform_int(0, 2));
        const ParsedJet back = parse_jet_document(serialize_connection_jet(theta));
        CHECK(expect_connection(back) == theta);

        const ScalarJet f = rng.scalar_jet(m, rng.uniform_int(0, 3));
        CHECK(expect_scalar(parse_jet_document(serialize_scalar_jet(f))) == f);

        const TensorJet h = rng.metric_jet(m, rng.uniform_int(0, 2));
        CHECK(expect_metric(parse_jet_document(serialize_tensor_jet(h))) == h);

        const DiffeoJet g = rng.diffeo_jet(m, rng.uniform_int(1, 3));
        const ParsedJet gd = parse_jet_document(serialize_diffeo_jet(g));
        CHECK(std::get<DiffeoJet>(gd.value) == g);

        // multinomial packing round trip
        const auto doc = serialize_connection_jet(theta, TaylorPacking::Multinomial);
        CHECK(expect_connection(parse_jet_document(doc, TaylorPacking::Multinomial)) == theta);
    }
}

TEST_CASE("generic tensor documents with explicit valence") {
    const ParsedJet p = parse_jet_text(R"({
      "kind": "tensor", "dim": 2, "order": 1,
      "valence": {"contravariant": 1, "covariant": 1, "symmetry": "none"},
      "entries": [{"multi_index": [1,0], "indices": [1,2], "value": "2/3"}]})");
    const TensorJet t = std::get<TensorJet>(p.value);
    CHECK(t.contra() == 1);
    CHECK(t.cov() == 1);
    CHECK(t.component({1, 0}, {0, 1}) == rational(2, 3));
    CHECK(std::get<TensorJet>(parse_jet_document(serialize_tensor_jet(t)).value) == t);

    // a symmetry tag on a tensor document is honored
    const ParsedJet sym = parse_jet_text(R"({
      "kind": "tensor", "dim": 2, "order": 0,
      "valence": {"contravariant": 0, "covariant": 2, "symmetry": "symmetric-covariant"},
      "entries": [{"multi_index": [0,0], "indices": [2,1], "value": "5/1"}]})");
    CHECK(std::get<TensorJet>(sym.value).component({0, 0}, {0, 1}) == rational(5));

    CHECK_THROWS_AS(parse_jet_text(R"({
      "kind": "tensor", "dim": 2, "order": 0,
      "valence": {"contravariant": 0, "covariant": 2, "symmetry": "sideways"},
      "entries": []})"),
                    StructuralError);
}

TEST_CASE("multinomial packing rescales entries by |a|!") {
    ScalarJet f(1, 3);
    f.set_coefficient({3}, rational(1));
    const json doc = serialize_scalar_jet(f, TaylorPacking::Multinomial);
    CHECK(doc["entries"][0]["value"] == "6/1");
    CHECK(expect_scalar(parse_jet_document(doc, TaylorPacking::Multinomial)) == f);
}

TEST_CASE("normalize-metric command") {
    TempFile file("flat.json", kFlatMetric);
    std::string text;
    CHECK(run({"normalize-metric", "--input", file.path}, &text) == 0);
    const json doc = json::parse(text);
    CHECK(doc["kind"] == "metric-normal-form");
    CHECK(doc["certification"]["normalizer_reproduces_normal_form"] == true);

    // determinism: identical input gives byte-identical output
    std::string text2;
    CHECK(run({"normalize-metric", "--input", file.path}, &text2) == 0);
    CHECK(text == text2);
}

TEST_CASE("degenerate metric exits with the domain code and names the precondition") {
    TempFile file("degenerate.json", R"({
      "kind": "metric", "dim": 2, "order": 0,
      "entries": [{"multi_index": [0,0], "indices": [1,1], "value": "1/1"}]})");
    std::string errtext;
    CHECK(run({"normalize-metric", "--input", file.path}, nullptr, &errtext) == 2);
    CHECK(errtext.find("degenerate") != std::string::npos);
    CHECK(errtext.find("det h0 = 0") != std::string::npos);
}

TEST_CASE("structural errors exit with code 1") {
    TempFile file("broken.json", "{");
    CHECK(run({"normalize-metric", "--input", file.path}) == 1);
    CHECK(run({"normalize-metric", "--input", "does_not_exist.json"}) == 1);
    CHECK(run({"nonsense-command"}) == 1);
}

TEST_CASE("star command produces the first-order series") {
    TempFile conn("zero-conn.json", R"({"kind": "connection", "dim": 2, "order": 1,
                                        "entries": []})");
    TempFile poisson("canon.json", R"({
      "kind": "poisson", "dim": 2, "order": 1,
      "entries": [{"multi_index": [0,0], "indices": [1,2], "value": "1/1"}]})");
    TempFile f("f.json", R"({
      "kind": "scalar", "dim": 2, "order": 2,
      "entries": [{"multi_index": [1,0], "indices": [], "value": "1/1"}]})");
    TempFile g("g.json", R"({
      "kind": "scalar", "dim": 2, "order": 2,
      "entries": [{"multi_index": [0,1], "indices": [], "value": "1/1"}]})");

    std::string text;
    CHECK(run({"star", "--connection", conn.path, "--poisson", poisson.path, "--f", f.path,
               "--g", g.path, "--hbar-order", "1"},
              &text) == 0);
    const json doc = json::parse(text);
    CHECK(doc["kind"] == "star-series");
    CHECK(doc["coefficients"][0] == "0/1");
    CHECK(doc["coefficients"][1] == "1/2");
}

TEST_CASE("torsion and adapted-chart commands") {
    TempFile conn("torsion-conn.json", R"({
      "kind": "connection", "dim": 2, "order": 0,
      "entries": [{"multi_index": [0,0], "indices": [1,1,2], "value": "1/1"}]})");
    std::string text;
    CHECK(run({"torsion", "--input", conn.path}, &text) == 0);
    const json doc = json::parse(text);
    CHECK(doc["kind"] == "torsion");
    CHECK(doc["certification"]["in_kernel"] == true);

    CHECK(run({"adapted-chart", "--input", conn.path, "--order", "0"}, &text) == 0);
    CHECK(json::parse(text)["kind"] == "adapted-chart");
}

TEST_CASE("laplacian command") {
    TempFile metric("lap-metric.json", R"({
      "kind": "metric", "dim": 2, "order": 2,
      "entries": [
        {"multi_index": [0,0], "indices": [1,1], "value": "1/1"},
        {"multi_index": [0,0], "indices": [2,2], "value": "1/1"}
      ]})");
    TempFile v("lap-v.json", R"({
      "kind": "scalar", "dim": 2, "order": 2,
      "entries": [
        {"multi_index": [2,0], "indices": [], "value": "1/1"},
        {"multi_index": [0,2], "indices": [], "value": "1/1"}
      ]})");
    std::string text;
    CHECK(run({"laplacian", "--metric", metric.path, "--function", v.path}, &text) == 0);
    CHECK(json::parse(text)["value"] == "4/1");
}

TEST_CASE("verify command reports per-suite counts") {
    std::string text;
    CHECK(run({"verify", "--seed", "3", "--cases", "5", "--suite", "fixed-points"}, &text) == 0);
    const json doc = json::parse(text);
    CHECK(doc["kind"] == "verify-report");
    CHECK(doc["passed"] == true);
    CHECK(doc["suites"][0]["name"] == "fixed-points");
    CHECK(doc["suites"][0]["failures"] == 0);

    CHECK(run({"verify", "--suite", "no-such-suite"}) == 1);

    // seeded runs are byte-identical
    std::string again;
    CHECK(run({"verify", "--seed", "3", "--cases", "5", "--suite", "fixed-points"}, &again) == 0);
    CHECK(text == again);
}

TEST_CASE("output flag writes the document to a file") {
    TempFile file("flat-out.json", kFlatMetric);
    const std::string out_path = "jetnorm_test_result.json";
    CHECK(run({"normalize-metric", "--input", file.path, "--output", out_path}) == 0);
    std::ifstream in(out_path);
    REQUIRE(in.good());
    const json doc = json::parse(in);
    CHECK(doc["kind"] == "metric-normal-form");
    std::remove(out_path.c_str());
}

TEST_CASE("requesting more order than the jet carries is a domain error") {
    TempFile file("flat-low.json", kFlatMetric);
    std::string errtext;
    CHECK(run({"normalize-metric", "--input", file.path, "--order", "3"}, nullptr, &errtext) ==
          2);
    CHECK(errtext.find("exceeds the input jet order") != std::string::npos);
}

TEST_CASE("pretty format emits readable text") {
    TempFile file("flat-pretty.json", kFlatMetric);
    std::string text;
    CHECK(run({"normalize-metric", "--input", file.path, "--format", "pretty"}, &text) == 0);
    CHECK(text.find("kind: metric-normal-form") != std::string::npos);
}
