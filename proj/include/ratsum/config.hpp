#pragma once

#include <string>

#include "json.hpp"
#include "ratsum/errors.hpp"

namespace ratsum {

enum class OutputFormat { Text, Json };

/// Pipeline knobs shared by the CLI and the corpus runner. Precedence is
/// flags > config file (RATSUM_CONFIG) > these defaults.
struct AnalysisConfig {
    int grid_max_exponent = 20;  // geometric grid 2^0 .. 2^k
    int degree_bound = 4;        // refutation sweep over m,d <= bound
    int precision_bits = 64;     // catalog enclosure precision
    int trend_window = 5;        // growth doublings inspected
    OutputFormat output_format = OutputFormat::Text;

    void validate() const {
        if (grid_max_exponent < 4 || grid_max_exponent > 30)
            throw Error("grid_max_exponent must be in [4, 30]");
        if (degree_bound < 0 || degree_bound > 8) throw Error("degree_bound must be in [0, 8]");
        if (precision_bits < 16 || precision_bits > 256)
            throw Error("precision_bits must be in [16, 256]");
        if (trend_window < 2 || trend_window > 16) throw Error("trend_window must be in [2, 16]");
    }
};

inline nlohmann::ordered_json to_json(const AnalysisConfig& c) {
    nlohmann::ordered_json j;
    j["grid_max_exponent"] = c.grid_max_exponent;
    j["degree_bound"] = c.degree_bound;
    j["precision_bits"] = c.precision_bits;
    j["trend_window"] = c.trend_window;
    j["output_format"] = c.output_format == OutputFormat::Json ? "json" : "text";
    return j;
}

inline AnalysisConfig config_from_json(const nlohmann::json& j) {
    AnalysisConfig c;
    if (j.contains("grid_max_exponent")) c.grid_max_exponent = j.at("grid_max_exponent").get<int>();
    if (j.contains("degree_bound")) c.degree_bound = j.at("degree_bound").get<int>();
    if (j.contains("precision_bits")) c.precision_bits = j.at("precision_bits").get<int>();
    if (j.contains("trend_window")) c.trend_window = j.at("trend_window").get<int>();
    if (j.contains("output_format")) {
        std::string f = j.at("output_format").get<std::string>();
        if (f == "json")
            c.output_format = OutputFormat::Json;
        else if (f == "text")
            c.output_format = OutputFormat::Text;
        else
            throw Error("output_format must be \"text\" or \"json\"");
    }
    c.validate();
    return c;
}

}  // namespace ratsum
