#include "jetnorm/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "jetnorm/errors.hpp"
#include "jetnorm/json_io.hpp"
#include "jetnorm/natural_ops.hpp"
#include "jetnorm/selftest.hpp"

namespace jetnorm {

namespace {

using nlohmann::json;

struct OutputOptions {
    std::string path;   // empty: stdout
    std::string format = "json";
    bool multinomial_packing = false;

    TaylorPacking packing() const {
        return multinomial_packing ? TaylorPacking::Multinomial : TaylorPacking::Standard;
    }
};

void add_output_options(CLI::App* cmd, OutputOptions& opts) {
    cmd->add_option("--output,-o", opts.path, "write the result document to a file");
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"json", "pretty"}));
    cmd->add_flag("--multinomial-packing", opts.multinomial_packing,
                  "serialize jet entries with the multinomial packing "
                  "|a|!/(a_1!..a_m!) instead of plain polynomial coefficients");
}

void pretty_print(const json& doc, std::ostream& os, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (doc.is_object()) {
        for (const auto& [key, value] : doc.items()) {
            if (value.is_primitive()) {
                os << pad << key << ": " << (value.is_string() ? value.get<std::string>()
                                                               : value.dump())
                   << "\n";
            } else {
                os << pad << key << ":\n";
                pretty_print(value, os, indent + 2);
            }
        }
    } else if (doc.is_array()) {
        for (const auto& value : doc) {
            if (value.is_primitive()) {
                os << pad << "- "
                   << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
            } else {
                os << pad << "-\n";
                pretty_print(value, os, indent + 2);
            }
        }
    } else {
        os << pad << doc.dump() << "\n";
    }
}

void emit(const json& doc, const OutputOptions& opts, std::ostream& out) {
    std::ostringstream text;
    if (opts.format == "pretty") {
        pretty_print(doc, text);
    } else {
        text << doc.dump(2) << "\n";
    }
    if (opts.path.empty()) {
        out << text.str();
    } else {
        std::ofstream file(opts.path);
        if (!file) throw StructuralError("cannot open output file: " + opts.path);
        file << text.str();
    }
}

int effective_order(int requested, int available, const char* what) {
    if (requested < 0) return available;
    if (requested > available) {
        throw DomainError(std::string(what) + ": requested order exceeds the input jet order");
    }
    return requested;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact normal forms, curvature invariants and pointwise quantization "
                 "of metric and connection jets"};
    app.require_subcommand(1);

    // --- normalize-metric / metric-invariants -------------------------------
    struct MetricArgs {
        std::string input;
        int order = -1;
        OutputOptions output;
    };
    MetricArgs nm_args, mi_args;
    CLI::App* nm = app.add_subcommand("normalize-metric",
                                      "normal form and normalizing chart of a metric jet");
    nm->add_option("--input,-i", nm_args.input, "metric jet document")->required();
    nm->add_option("--order,-k", nm_args.order, "normalization order (default: jet order)");
    add_output_options(nm, nm_args.output);

    CLI::App* mi = app.add_subcommand("metric-invariants",
                                      "complete invariant tuple of a metric jet");
    mi->add_option("--input,-i", mi_args.input, "metric jet document")->required();
    mi->add_option("--order,-k", mi_args.order, "invariant order (default: jet order)");
    add_output_options(mi, mi_args.output);

    // --- normalize-connection / torsion / adapted-chart ---------------------
    struct ConnArgs {
        std::string input;
        int order = -1;
        OutputOptions output;
    };
    ConnArgs nc_args, to_args, ac_args;
    CLI::App* nc = app.add_subcommand("normalize-connection",
                                      "normal form and invariants of a connection jet");
    nc->add_option("--input,-i", nc_args.input, "connection jet document")->required();
    nc->add_option("--order,-k", nc_args.order, "normalization order (default: jet order)");
    add_output_options(nc, nc_args.output);

    CLI::App* to = app.add_subcommand("torsion", "torsion of a connection jet");
    to->add_option("--input,-i", to_args.input, "connection jet document")->required();
    add_output_options(to, to_args.output);

    CLI::App* ac = app.add_subcommand("adapted-chart",
                                      "chart bringing a connection jet into normal form");
    ac->add_option("--input,-i", ac_args.input, "connection jet document")->required();
    ac->add_option("--order,-k", ac_args.order, "adaptation order (default: jet order)");
    add_output_options(ac, ac_args.output);

    // --- laplacian -----------------------------------------------------------
    struct LaplacianArgs {
        std::string metric;
        std::string function;
        OutputOptions output;
    };
    LaplacianArgs la_args;
    CLI::App* la = app.add_subcommand("laplacian",
                                      "Laplace-Beltrami value of a scalar jet at the center");
    la->add_option("--metric", la_args.metric, "metric jet document (order >= 2)")->required();
    la->add_option("--function", la_args.function, "scalar jet document (order >= 2)")
        ->required();
    add_output_options(la, la_args.output);

    // --- star ----------------------------------------------------------------
    struct StarArgs {
        std::string connection;
        std::string poisson;
        std::string f;
        std::string g;
        int hbar_order = kDefaultHbarOrder;
        OutputOptions output;
    };
    StarArgs st_args;
    CLI::App* st = app.add_subcommand("star",
                                      "canonical star product of two scalar jets at the center");
    st->add_option("--connection", st_args.connection, "connection jet document")->required();
    st->add_option("--poisson", st_args.poisson, "poisson jet document")->required();
    st->add_option("--f", st_args.f, "scalar jet document")->required();
    st->add_option("--g", st_args.g, "scalar jet document")->required();
    st->add_option("--hbar-order,-N", st_args.hbar_order,
                   "series truncation order (default 2, max 4)");
    add_output_options(st, st_args.output);

    // --- verify ----------------------------------------------------------------
    struct VerifyArgs {
        std::uint64_t seed = 12345;
        int scale = 100;
        std::string suite;
        OutputOptions output;
    };
    VerifyArgs ve_args;
    CLI::App* ve = app.add_subcommand("verify",
                                      "run the randomized law suites and report counts");
    ve->add_option("--seed", ve_args.seed, "random seed (default 12345)");
    ve->add_option("--cases", ve_args.scale, "case-count scale percentage (default 100)");
    ve->add_option("--suite", ve_args.suite, "run a single suite by name");
    add_output_options(ve, ve_args.output);

    try {
        std::vector<std::string> argv_like = args;
        argv_like.insert(argv_like.begin(), "jetnorm");
        std::vector<const char*> argv;
        argv.reserve(argv_like.size());
        for (const auto& a : argv_like) argv.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError& e) {
            if (e.get_exit_code() == 0) {
                // --help and friends
                out << app.help() << "\n";
                return 0;
            }
            err << "error: " << e.what() << "\n";
            return 1;
        }

        if (nm->parsed() || mi->parsed()) {
            const bool with_tuple = mi->parsed();
            MetricArgs& a = with_tuple ? mi_args : nm_args;
            const TensorJet h = expect_metric(parse_jet_file(a.input, a.output.packing()));
            const int k = effective_order(a.order, h.order(), "normalize-metric");
            const MetricNormalForm nf = normalize_metric(h, k);
            emit(metric_result_document(h, nf, with_tuple, a.output.packing()), a.output, out);
            return 0;
        }
        if (nc->parsed()) {
            const ConnectionJet theta =
                expect_connection(parse_jet_file(nc_args.input, nc_args.output.packing()));
            const int k = effective_order(nc_args.order, theta.order(), "normalize-connection");
            const ConnectionNormalForm nf = normalize_connection(theta, k);
            emit(connection_result_document(theta, nf, nc_args.output.packing()), nc_args.output,
                 out);
            return 0;
        }
        if (to->parsed()) {
            const ConnectionJet theta =
                expect_connection(parse_jet_file(to_args.input, to_args.output.packing()));
            emit(torsion_result_document(torsion(theta), to_args.output.packing()),
                 to_args.output, out);
            return 0;
        }
        if (ac->parsed()) {
            const ConnectionJet theta =
                expect_connection(parse_jet_file(ac_args.input, ac_args.output.packing()));
            const int k = effective_order(ac_args.order, theta.order(), "adapted-chart");
            emit(chart_result_document(adapted_chart(theta, k), ac_args.output.packing()),
                 ac_args.output, out);
            return 0;
        }
        if (la->parsed()) {
            const TensorJet h =
                expect_metric(parse_jet_file(la_args.metric, la_args.output.packing()));
            const ScalarJet v =
                expect_scalar(parse_jet_file(la_args.function, la_args.output.packing()));
            emit(laplacian_result_document(laplacian_at_point(h, v)), la_args.output, out);
            return 0;
        }
        if (st->parsed()) {
            const TaylorPacking packing = st_args.output.packing();
            const ConnectionJet theta = expect_connection(parse_jet_file(st_args.connection, packing));
            const TensorJet w = expect_poisson(parse_jet_file(st_args.poisson, packing));
            const ScalarJet f = expect_scalar(parse_jet_file(st_args.f, packing));
            const ScalarJet g = expect_scalar(parse_jet_file(st_args.g, packing));
            emit(star_result_document(canonical_star_at_point(theta, w, f, g, st_args.hbar_order)),
                 st_args.output, out);
            return 0;
        }
        if (ve->parsed()) {
            std::vector<SuiteResult> results;
            if (ve_args.suite.empty()) {
                results = run_all_suites(ve_args.seed, ve_args.scale);
            } else {
                results.push_back(run_single_suite(ve_args.suite, ve_args.seed, ve_args.scale));
            }
            json doc;
            doc["kind"] = "verify-report";
            doc["seed"] = ve_args.seed;
            json suites = json::array();
            int total_cases = 0, total_failures = 0, total_internal = 0;
            for (const auto& r : results) {
                json sj;
                sj["name"] = r.name;
                sj["cases"] = r.cases;
                sj["failures"] = r.failures;
                sj["internal_errors"] = r.internal_errors;
                if (!r.notes.empty()) sj["notes"] = r.notes;
                suites.push_back(sj);
                total_cases += r.cases;
                total_failures += r.failures;
                total_internal += r.internal_errors;
            }
            doc["suites"] = suites;
            doc["total_cases"] = total_cases;
            doc["total_failures"] = total_failures;
            doc["total_internal_errors"] = total_internal;
            doc["passed"] = (total_failures == 0 && total_internal == 0);
            emit(doc, ve_args.output, out);
            if (total_internal > 0) return 3;
            return total_failures == 0 ? 0 : 3;
        }
        err << "error: no subcommand\n";
        return 1;
    } catch (const InternalInvariantError& e) {
        err << "internal invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace jetnorm
