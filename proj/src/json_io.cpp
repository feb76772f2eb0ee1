#include "jetnorm/json_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "jetnorm/errors.hpp"

namespace jetnorm {

using nlohmann::json;

namespace {

// Packing conversion happens on the multi-index part only: a stored
// coefficient c corresponds to the multinomial-packed value |a|! * c.
Rational to_external(const Rational& coeff, const MultiIndex& a, TaylorPacking packing) {
    if (packing == TaylorPacking::Standard) return coeff;
    return Rational(factorial(degree(a))) * coeff;
}

Rational to_internal(const Rational& value, const MultiIndex& a, TaylorPacking packing) {
    if (packing == TaylorPacking::Standard) return value;
    return value / Rational(factorial(degree(a)));
}

int require_int(const json& doc, const char* field) {
    if (!doc.contains(field) || !doc[field].is_number_integer()) {
        throw StructuralError(std::string("document: missing integer field \"") + field + "\"");
    }
    return doc[field].get<int>();
}

std::string require_string(const json& doc, const char* field) {
    if (!doc.contains(field) || !doc[field].is_string()) {
        throw StructuralError(std::string("document: missing string field \"") + field + "\"");
    }
    return doc[field].get<std::string>();
}

struct RawEntry {
    MultiIndex multi_index;
    IndexTuple indices; // 0-based after parsing
    Rational value;
};

std::vector<RawEntry> parse_entries(const json& doc, int dim, TaylorPacking packing) {
    std::vector<RawEntry> out;
    if (!doc.contains("entries")) return out;
    if (!doc["entries"].is_array()) throw StructuralError("document: \"entries\" must be an array");
    for (const auto& e : doc["entries"]) {
        RawEntry entry;
        if (!e.contains("multi_index") || !e["multi_index"].is_array()) {
            throw StructuralError("entry: missing \"multi_index\" array");
        }
        for (const auto& v : e["multi_index"]) {
            if (!v.is_number_integer()) throw StructuralError("entry: multi_index must be integers");
            entry.multi_index.push_back(v.get<int>());
        }
        if (static_cast<int>(entry.multi_index.size()) != dim) {
            throw StructuralError("entry: multi_index length != dim");
        }
        if (e.contains("indices")) {
            if (!e["indices"].is_array()) throw StructuralError("entry: \"indices\" must be an array");
            for (const auto& v : e["indices"]) {
                if (!v.is_number_integer()) throw StructuralError("entry: indices must be integers");
                const int one_based = v.get<int>();
                if (one_based < 1 || one_based > dim) {
                    throw StructuralError("entry: fiber index out of range (1-based)");
                }
                entry.indices.push_back(one_based - 1);
            }
        }
        if (!e.contains("value") || !e["value"].is_string()) {
            throw StructuralError("entry: \"value\" must be a \"p/q\" string (no floats)");
        }
        entry.value = to_internal(parse_rational(e["value"].get<std::string>()),
                                  entry.multi_index, packing);
        out.push_back(std::move(entry));
    }
    return out;
}

// Duplicate-aware setter: identical duplicates are tolerated, conflicting
// values (e.g. h_12 != h_21 under a symmetry tag) are structural errors.
void set_checked(TensorJet& t, const RawEntry& e) {
    const Rational existing = t.component(e.multi_index, e.indices);
    if (existing != 0 && existing != e.value) {
        throw StructuralError("entry: conflicting duplicate (symmetry violation?)");
    }
    t.set_component(e.multi_index, e.indices, e.value);
}

json entry_json(const MultiIndex& a, const IndexTuple& idx, const Rational& v,
                TaylorPacking packing) {
    json e;
    e["multi_index"] = a;
    if (!idx.empty()) {
        std::vector<int> one_based;
        one_based.reserve(idx.size());
        for (int i : idx) one_based.push_back(i + 1);
        e["indices"] = one_based;
    }
    e["value"] = format_rational(to_external(v, a, packing));
    return e;
}

json tensor_entries_json(const TensorJet& t, TaylorPacking packing) {
    json arr = json::array();
    for (const auto& [key, v] : t.entries()) {
        arr.push_back(entry_json(key.first, key.second, v, packing));
    }
    return arr;
}

} // namespace

ParsedJet parse_jet_document(const json& doc, TaylorPacking packing) {
    if (!doc.is_object()) throw StructuralError("document: not a JSON object");
    const std::string kind = require_string(doc, "kind");
    const int dim = require_int(doc, "dim");
    const int order = require_int(doc, "order");
    if (dim < 1) throw StructuralError("document: dim must be >= 1");
    if (order < 0) throw StructuralError("document: order must be >= 0");

    ParsedJet out;
    out.kind = kind;
    const auto entries = parse_entries(doc, dim, packing);

    if (kind == "scalar") {
        ScalarJet f(dim, order);
        for (const auto& e : entries) {
            if (!e.indices.empty()) throw StructuralError("scalar entry: unexpected indices");
            f.set_coefficient(e.multi_index, e.value);
        }
        out.value = std::move(f);
    } else if (kind == "metric" || kind == "poisson" || kind == "tensor") {
        int p = 0, q = 0;
        Symmetry sym = Symmetry::None;
        if (kind == "metric") {
            p = 0; q = 2; sym = Symmetry::SymmetricCovariant;
        } else if (kind == "poisson") {
            p = 2; q = 0; sym = Symmetry::AntisymmetricContravariant;
        } else {
            if (!doc.contains("valence") || !doc["valence"].is_object()) {
                throw StructuralError("tensor document: missing \"valence\" object");
            }
            p = require_int(doc["valence"], "contravariant");
            q = require_int(doc["valence"], "covariant");
            const std::string s = doc["valence"].contains("symmetry")
                                      ? require_string(doc["valence"], "symmetry")
                                      : "none";
            if (s == "none") {
                sym = Symmetry::None;
            } else if (s == "symmetric-covariant") {
                sym = Symmetry::SymmetricCovariant;
            } else if (s == "antisymmetric-contravariant") {
                sym = Symmetry::AntisymmetricContravariant;
            } else {
                throw StructuralError("tensor document: unknown symmetry tag");
            }
        }
        TensorJet t(dim, order, p, q, sym);
        for (const auto& e : entries) {
            if (static_cast<int>(e.indices.size()) != p + q) {
                throw StructuralError("tensor entry: index count != valence");
            }
            set_checked(t, e);
        }
        out.value = std::move(t);
    } else if (kind == "connection") {
        TensorJet t(dim, order, 1, 2, Symmetry::None);
        for (const auto& e : entries) {
            if (e.indices.size() != 3) {
                throw StructuralError("connection entry: needs indices [l, i, j]");
            }
            set_checked(t, e);
        }
        out.value = ConnectionJet(std::move(t));
    } else if (kind == "diffeo") {
        std::vector<ScalarJet> comps(static_cast<std::size_t>(dim), ScalarJet(dim, order));
        for (const auto& e : entries) {
            if (e.indices.size() != 1) {
                throw StructuralError("diffeo entry: needs indices [component]");
            }
            comps[static_cast<std::size_t>(e.indices[0])].set_coefficient(e.multi_index, e.value);
        }
        out.value = DiffeoJet(dim, order, std::move(comps));
    } else {
        throw StructuralError("document: unknown kind \"" + kind + "\"");
    }
    return out;
}

ParsedJet parse_jet_text(const std::string& text, TaylorPacking packing) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw StructuralError(std::string("malformed JSON: ") + e.what());
    }
    return parse_jet_document(doc, packing);
}

ParsedJet parse_jet_file(const std::string& path, TaylorPacking packing) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open input file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_jet_text(text, packing);
}

json serialize_scalar_jet(const ScalarJet& f, TaylorPacking packing) {
    json doc;
    doc["kind"] = "scalar";
    doc["dim"] = f.dim();
    doc["order"] = f.order();
    json arr = json::array();
    for (const auto& [a, c] : f.coefficients()) {
        arr.push_back(entry_json(a, {}, c, packing));
    }
    doc["entries"] = arr;
    return doc;
}

json serialize_tensor_jet(const TensorJet& t, TaylorPacking packing) {
    json doc;
    if (t.symmetry() == Symmetry::SymmetricCovariant && t.cov() == 2 && t.contra() == 0) {
        doc["kind"] = "metric";
    } else if (t.symmetry() == Symmetry::AntisymmetricContravariant && t.contra() == 2) {
        doc["kind"] = "poisson";
    } else {
        doc["kind"] = "tensor";
        json valence;
        valence["contravariant"] = t.contra();
        valence["covariant"] = t.cov();
        valence["symmetry"] = "none";
        doc["valence"] = valence;
    }
    doc["dim"] = t.dim();
    doc["order"] = t.order();
    doc["entries"] = tensor_entries_json(t, packing);
    return doc;
}

json serialize_connection_jet(const ConnectionJet& c, TaylorPacking packing) {
    json doc;
    doc["kind"] = "connection";
    doc["dim"] = c.dim();
    doc["order"] = c.order();
    doc["entries"] = tensor_entries_json(c.coefficients(), packing);
    return doc;
}

json serialize_diffeo_jet(const DiffeoJet& g, TaylorPacking packing) {
    json doc;
    doc["kind"] = "diffeo";
    doc["dim"] = g.dim();
    doc["order"] = g.order();
    json arr = json::array();
    for (int i = 0; i < g.dim(); ++i) {
        for (const auto& [a, c] : g.component(i).coefficients()) {
            arr.push_back(entry_json(a, IndexTuple{i}, c, packing));
        }
    }
    doc["entries"] = arr;
    return doc;
}

json serialize_matrix(const MatrixQ& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(format_rational(m.at(r, c)));
        rows.push_back(row);
    }
    return rows;
}

json serialize_factors(const UnipotentFactors& factors, TaylorPacking packing) {
    json arr = json::array();
    for (const auto& f : factors.factors) {
        json fj;
        fj["degree"] = f.deg;
        json entries = json::array();
        for (int c = 0; c < f.dim; ++c) {
            for (const auto& [a, v] : f.components[static_cast<std::size_t>(c)].coefficients()) {
                entries.push_back(entry_json(a, IndexTuple{c}, v, packing));
            }
        }
        fj["entries"] = entries;
        arr.push_back(fj);
    }
    return arr;
}

json metric_result_document(const TensorJet& input, const MetricNormalForm& nf,
                            bool with_invariant_tuple, TaylorPacking packing) {
    // Re-check the certification claims before emitting them.
    bool kernel_ok = true;
    json kernel_flags = json::array();
    for (int n = 2; n <= nf.order; ++n) {
        const bool ok = in_metric_gauge_kernel(nf.invariant(n));
        kernel_ok = kernel_ok && ok;
        kernel_flags.push_back({{"degree", n}, {"in_kernel", ok}});
    }
    const bool h1_zero = nf.normal_form_jet.degree_slice(1).is_zero() || nf.order < 1;
    const bool reproduces = metric_normal_form_reproduces(input, nf);
    if (!kernel_ok || !h1_zero || !reproduces) {
        throw InternalInvariantError("metric result: certification failed");
    }

    json doc;
    doc["kind"] = "metric-normal-form";
    doc["dim"] = nf.dim;
    doc["order"] = nf.order;
    doc["h0"] = serialize_matrix(nf.h0);
    if (with_invariant_tuple) {
        doc["det_h0_inverse"] = format_rational(1 / determinant(nf.h0));
    }
    json invs = json::array();
    for (int n = 2; n <= nf.order; ++n) {
        json ij;
        ij["degree"] = n;
        ij["entries"] = tensor_entries_json(nf.invariant(n), packing);
        invs.push_back(ij);
    }
    doc["invariants"] = invs;
    doc["normalizer"] = serialize_factors(nf.normalizer, packing);
    doc["normal_form"] = serialize_tensor_jet(nf.normal_form_jet, packing);
    doc["certification"] = {{"h1_zero", h1_zero},
                            {"kernel_membership", kernel_flags},
                            {"normalizer_reproduces_normal_form", reproduces}};
    return doc;
}

json connection_result_document(const ConnectionJet& input, const ConnectionNormalForm& nf,
                                TaylorPacking packing) {
    bool kernel_ok = true;
    json kernel_flags = json::array();
    for (int n = 0; n <= nf.order; ++n) {
        const bool ok = in_connection_gauge_kernel(nf.invariant(n));
        kernel_ok = kernel_ok && ok;
        kernel_flags.push_back({{"degree", n}, {"in_kernel", ok}});
    }
    const bool reproduces = connection_normal_form_reproduces(input, nf);
    if (!kernel_ok || !reproduces) {
        throw InternalInvariantError("connection result: certification failed");
    }

    json doc;
    doc["kind"] = "connection-normal-form";
    doc["dim"] = nf.dim;
    doc["order"] = nf.order;
    json invs = json::array();
    for (int n = 0; n <= nf.order; ++n) {
        json ij;
        ij["degree"] = n;
        ij["entries"] = tensor_entries_json(nf.invariant(n), packing);
        invs.push_back(ij);
    }
    doc["invariants"] = invs;
    doc["normalizer"] = serialize_factors(nf.normalizer, packing);
    doc["normal_form"] = serialize_connection_jet(nf.normal_form_jet, packing);
    doc["certification"] = {{"kernel_membership", kernel_flags},
                            {"normalizer_reproduces_normal_form", reproduces}};
    return doc;
}

json torsion_result_document(const TensorJet& torsion_term, TaylorPacking packing) {
    json doc;
    doc["kind"] = "torsion";
    doc["dim"] = torsion_term.dim();
    doc["entries"] = tensor_entries_json(torsion_term, packing);
    const bool in_kernel = in_connection_gauge_kernel(torsion_term);
    if (!in_kernel) throw InternalInvariantError("torsion result: certification failed");
    doc["certification"] = {{"in_kernel", true}};
    return doc;
}

json chart_result_document(const DiffeoJet& chart, TaylorPacking packing) {
    json doc;
    doc["kind"] = "adapted-chart";
    doc["dim"] = chart.dim();
    doc["order"] = chart.order();
    doc["chart"] = serialize_diffeo_jet(chart, packing);
    return doc;
}

json laplacian_result_document(const Rational& value) {
    json doc;
    doc["kind"] = "laplacian";
    doc["value"] = format_rational(value);
    return doc;
}

json star_result_document(const FormalSeries<Rational>& series) {
    json doc;
    doc["kind"] = "star-series";
    doc["backend"] = "moyal";
    doc["hbar_order"] = series.hbar_order;
    json coeffs = json::array();
    for (const auto& c : series.coefficients) coeffs.push_back(format_rational(c));
    doc["coefficients"] = coeffs;
    return doc;
}

TensorJet expect_metric(const ParsedJet& p) {
    if (p.kind != "metric" || !std::holds_alternative<TensorJet>(p.value)) {
        throw StructuralError("expected a metric document");
    }
    return std::get<TensorJet>(p.value);
}

TensorJet expect_poisson(const ParsedJet& p) {
    if (p.kind != "poisson" || !std::holds_alternative<TensorJet>(p.value)) {
        throw StructuralError("expected a poisson document");
    }
    return std::get<TensorJet>(p.value);
}

ConnectionJet expect_connection(const ParsedJet& p) {
    if (!std::holds_alternative<ConnectionJet>(p.value)) {
        throw StructuralError("expected a connection document");
    }
    return std::get<ConnectionJet>(p.value);
}

ScalarJet expect_scalar(const ParsedJet& p) {
    if (!std::holds_alternative<ScalarJet>(p.value)) {
        throw StructuralError("expected a scalar document");
    }
    return std::get<ScalarJet>(p.value);
}

} // namespace jetnorm
