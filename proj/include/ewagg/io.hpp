#ifndef EWAGG_IO_HPP
#define EWAGG_IO_HPP

#include <json.hpp>
#include <string>

#include "ewagg/harness.hpp"

namespace ewagg {

enum class OutputFormat { csv, json };

OutputFormat format_from_string(const std::string& name);

/// Parses an experiment configuration. Field names mirror the config schema
/// in snake_case; unknown keys are rejected.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

NoiseModel parse_noise_model(const nlohmann::json& j);

nlohmann::json bound_report_to_json(const BoundReport& report);
nlohmann::json results_to_json(const RunResult& result);

/// CSV: header replication,seed,risk,bound_rhs,beta,method, one row per
/// replication, 17 significant digits, '\n' endings; a summary JSON is written
/// alongside (path with .csv replaced by .summary.json). JSON: everything in
/// one document.
void emit_results(const RunResult& result, const std::string& path, OutputFormat format);

/// Path of the summary written next to a CSV output.
std::string summary_path_for(const std::string& csv_path);

nlohmann::json load_json_file(const std::string& path);

} // namespace ewagg

#endif
