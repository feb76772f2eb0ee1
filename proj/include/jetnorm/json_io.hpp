#pragma once

#include <string>
#include <variant>

#include "jetnorm/connection_normalizer.hpp"
#include "jetnorm/metric_normalizer.hpp"
#include "jetnorm/quantization.hpp"

#include <nlohmann/json_fwd.hpp>

namespace jetnorm {

/// Document kinds: scalar | tensor | metric | connection | poisson | diffeo.
/// Entries are {"multi_index": [..], "indices": [..], "value": "p/q"} with
/// 1-based fiber indices and no floats anywhere.
struct ParsedJet {
    std::string kind;
    std::variant<ScalarJet, TensorJet, ConnectionJet, DiffeoJet> value = ScalarJet(1, 0);
};

ParsedJet parse_jet_document(const nlohmann::json& doc,
                             TaylorPacking packing = TaylorPacking::Standard);
ParsedJet parse_jet_text(const std::string& text,
                         TaylorPacking packing = TaylorPacking::Standard);
ParsedJet parse_jet_file(const std::string& path,
                         TaylorPacking packing = TaylorPacking::Standard);

nlohmann::json serialize_scalar_jet(const ScalarJet& f,
                                    TaylorPacking packing = TaylorPacking::Standard);
nlohmann::json serialize_tensor_jet(const TensorJet& t,
                                    TaylorPacking packing = TaylorPacking::Standard);
nlohmann::json serialize_connection_jet(const ConnectionJet& c,
                                        TaylorPacking packing = TaylorPacking::Standard);
nlohmann::json serialize_diffeo_jet(const DiffeoJet& g,
                                    TaylorPacking packing = TaylorPacking::Standard);

nlohmann::json serialize_matrix(const MatrixQ& m);
nlohmann::json serialize_factors(const UnipotentFactors& factors, TaylorPacking packing);

/// Result documents; the certification blocks are re-verified before
/// emission and raise InternalInvariantError when they do not hold.
nlohmann::json metric_result_document(const TensorJet& input, const MetricNormalForm& nf,
                                      bool with_invariant_tuple, TaylorPacking packing);
nlohmann::json connection_result_document(const ConnectionJet& input,
                                          const ConnectionNormalForm& nf,
                                          TaylorPacking packing);
nlohmann::json torsion_result_document(const TensorJet& torsion_term, TaylorPacking packing);
nlohmann::json chart_result_document(const DiffeoJet& chart, TaylorPacking packing);
nlohmann::json laplacian_result_document(const Rational& value);
nlohmann::json star_result_document(const FormalSeries<Rational>& series);

/// Extraction helpers with kind checking (StructuralError on mismatch).
TensorJet expect_metric(const ParsedJet& p);
TensorJet expect_poisson(const ParsedJet& p);
ConnectionJet expect_connection(const ParsedJet& p);
ScalarJet expect_scalar(const ParsedJet& p);

} // namespace jetnorm
