// ratsum - exact partial-sum analysis: compute S(n) = u_1 + ... + u_n in
// exact rational arithmetic, estimate limits with enclosures, and classify
// S(n) against the not-a-rational-function / transcendental-function
// criteria. Verbs: analyze, corpus, constants.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ratsum/classify.hpp"
#include "ratsum/config.hpp"
#include "ratsum/corpus.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitParse = 2;
constexpr int kExitEval = 3;
constexpr int kExitCapacity = 4;

ratsum::AnalysisConfig load_base_config() {
    const char* path = std::getenv("RATSUM_CONFIG");
    if (path == nullptr || *path == '\0') return {};
    std::ifstream in(path);
    if (!in) throw ratsum::Error(std::string("cannot read RATSUM_CONFIG file ") + path);
    nlohmann::json j;
    in >> j;
    return ratsum::config_from_json(j);
}

ratsum::SequenceSpec spec_from_cli(const std::string& term, const std::string& builtin,
                                   const std::vector<std::string>& params,
                                   const std::string& spec_path) {
    int sources = (!term.empty()) + (!builtin.empty()) + (!spec_path.empty());
    if (sources != 1)
        throw ratsum::SyntaxError(0, "exactly one of --term, --builtin or --spec");
    if (!term.empty()) return ratsum::SequenceSpec::closed_term(term);
    if (!builtin.empty()) {
        std::map<std::string, ratsum::Rational> p;
        for (const auto& kv : params) {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw ratsum::SyntaxError(0, "--param entries of the form key=value");
            p.emplace(kv.substr(0, eq), ratsum::Rational::from_string(kv.substr(eq + 1)));
        }
        return ratsum::SequenceSpec::builtin(builtin, std::move(p));
    }
    std::ifstream in(spec_path);
    if (!in) throw ratsum::Error("cannot read spec file " + spec_path);
    nlohmann::json j;
    in >> j;
    return ratsum::spec_from_json(j);
}

int cmd_analyze(const ratsum::SequenceSpec& spec, const ratsum::AnalysisConfig& config,
                const std::string& trace_out) {
    ratsum::Verdict verdict = ratsum::classify(spec, config);
    if (!trace_out.empty()) {
        ratsum::SumTrace trace =
            ratsum::partial_sum_trace(spec, ratsum::default_analysis_grid(spec, config));
        std::ofstream out(trace_out);
        if (!out) throw ratsum::Error("cannot write trace file " + trace_out);
        out << ratsum::trace_to_json(trace).dump(2) << "\n";
    }
    if (config.output_format == ratsum::OutputFormat::Json)
        std::cout << ratsum::verdict_to_json(verdict).dump(2) << "\n";
    else
        std::cout << ratsum::verdict_to_text(verdict);
    return kExitOk;
}

int cmd_corpus(const std::string& filter, const ratsum::AnalysisConfig& config) {
    std::vector<ratsum::CorpusResult> results = ratsum::run_corpus(filter, config);
    bool all_pass = true;
    for (const auto& r : results) all_pass = all_pass && r.pass;
    if (config.output_format == ratsum::OutputFormat::Json) {
        std::cout << ratsum::corpus_results_to_json(results).dump(2) << "\n";
    } else {
        std::size_t idw = 4, exw = 8, gotw = 3;
        for (const auto& r : results) {
            idw = std::max(idw, r.id.size());
            exw = std::max(exw, r.expected.size());
            gotw = std::max(gotw, r.got.size());
        }
        std::ostringstream table;
        for (const auto& r : results) {
            table << (r.pass ? "pass  " : "FAIL  ");
            table << r.id << std::string(idw - r.id.size() + 2, ' ');
            table << r.expected << std::string(exw - r.expected.size() + 2, ' ');
            table << r.got << std::string(gotw - r.got.size() + 2, ' ');
            table << r.citation << "\n";
        }
        table << (all_pass ? "all " : "FAILURES among ") << results.size() << " corpus cases\n";
        std::cout << table.str();
    }
    return all_pass ? kExitOk : kExitMismatch;
}

int cmd_constants(const std::string& name, const ratsum::AnalysisConfig& config) {
    unsigned digits = static_cast<unsigned>(config.precision_bits * 30 / 100);
    auto line = [&](const ratsum::ConstantEntry& e) {
        int bits = config.precision_bits;
        if (e.precision_cap > 0) bits = std::min(bits, e.precision_cap);
        ratsum::Interval enc = ratsum::enclose_constant(e.name, bits);
        unsigned d = e.precision_cap > 0
                         ? std::min(digits, static_cast<unsigned>(e.precision_cap * 30 / 100))
                         : digits;
        std::cout << e.name << "  [" << to_string(e.classification) << "]  "
                  << ratsum::decimal_enclosure(enc, d) << "  -- " << e.provenance << "\n";
    };
    if (!name.empty()) {
        if (ratsum::is_rational_literal(name)) {
            std::cout << name << "  [Rational]  exact value "
                      << ratsum::Rational::from_string(name).to_string() << "\n";
            return kExitOk;
        }
        const ratsum::ConstantEntry* e = ratsum::find_constant(name);
        if (e == nullptr) throw ratsum::UnknownConstant(name);
        line(*e);
        return kExitOk;
    }
    if (config.output_format == ratsum::OutputFormat::Json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& e : ratsum::constant_catalog()) {
            nlohmann::ordered_json o;
            o["name"] = e.name;
            o["classification"] = to_string(e.classification);
            o["provenance"] = e.provenance;
            arr.push_back(std::move(o));
        }
        std::cout << arr.dump(2) << "\n";
        return kExitOk;
    }
    for (const auto& e : ratsum::constant_catalog()) line(e);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact partial sums of rational sequences: limits, enclosures, classification"};
    app.require_subcommand(1);

    int grid_max = -1, degree_bound = -1, precision = -1;
    std::string format;
    auto add_config_flags = [&](CLI::App* sub) {
        sub->add_option("--grid-max", grid_max, "geometric grid exponent (default 20)");
        sub->add_option("--degree-bound", degree_bound, "refutation degree bound (default 4)");
        sub->add_option("--precision", precision, "enclosure precision in bits (default 64)");
        sub->add_option("--format", format, "output format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
    };

    std::string term, builtin, spec_path, trace_out, filter, constant_name;
    std::vector<std::string> params;

    CLI::App* analyze = app.add_subcommand("analyze", "classify one sequence");
    analyze->add_option("--term", term, "closed-form term in j, e.g. \"1/(2*j+3)\"");
    analyze->add_option("--builtin", builtin, "registered family name");
    analyze->add_option("--param", params, "builtin parameter key=value (repeatable)");
    analyze->add_option("--spec", spec_path, "path to a sequence spec JSON file");
    analyze->add_option("--trace-out", trace_out, "also write the sampled trace JSON here");
    add_config_flags(analyze);

    CLI::App* corpus = app.add_subcommand("corpus", "run the built-in paper corpus");
    corpus->add_option("--filter", filter, "glob over case ids, e.g. \"remark-2.4-*\"");
    add_config_flags(corpus);

    CLI::App* constants = app.add_subcommand("constants", "list the constant catalog");
    constants->add_option("name", constant_name, "single catalog name or rational literal");
    add_config_flags(constants);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitParse;
    }

    try {
        ratsum::AnalysisConfig config = load_base_config();
        if (grid_max >= 0) config.grid_max_exponent = grid_max;
        if (degree_bound >= 0) config.degree_bound = degree_bound;
        if (precision >= 0) config.precision_bits = precision;
        if (format == "json") config.output_format = ratsum::OutputFormat::Json;
        if (format == "text") config.output_format = ratsum::OutputFormat::Text;
        config.validate();

        if (analyze->parsed())
            return cmd_analyze(spec_from_cli(term, builtin, params, spec_path), config, trace_out);
        if (corpus->parsed()) return cmd_corpus(filter, config);
        if (constants->parsed()) return cmd_constants(constant_name, config);
        return kExitParse;
    } catch (const ratsum::EvalError& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kExitEval;
    } catch (const ratsum::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const ratsum::PrecisionUnachievable& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const ratsum::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
}
