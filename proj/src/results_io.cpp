#include <cstdio>
#include <fstream>

#include "ewagg/io.hpp"

namespace ewagg {

namespace {

using nlohmann::json;

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

json bound_report_to_json(const BoundReport& report) {
    json j;
    j["theorem"] = report.theorem;
    j["approx_term"] = report.approx_term;
    j["complexity_term"] = report.complexity_term;
    j["remainder"] = report.remainder;
    j["rhs"] = report.rhs;
    j["beta_used"] = report.beta_used;
    j["beta_min"] = report.beta_min;
    j["beta_admissible"] = report.beta_admissible;
    if (!report.complexity_form.empty()) j["complexity_form"] = report.complexity_form;
    return j;
}

json results_to_json(const RunResult& result) {
    json j;
    j["summary"] = {
        {"mean_risk", result.estimate.mean_risk},
        {"std_error", result.estimate.std_error},
        {"replications", result.estimate.replications},
        {"bound_rhs", result.estimate.bound_rhs},
        {"bound_satisfied_within", result.estimate.bound_satisfied_within},
    };
    j["bound_report"] = bound_report_to_json(result.report);
    json rows = json::array();
    for (const auto& row : result.rows) {
        rows.push_back({
            {"replication", row.replication},
            {"seed", row.seed},
            {"risk", row.risk},
            {"bound_rhs", row.bound_rhs},
            {"beta", row.beta},
            {"method", row.method},
        });
    }
    j["rows"] = std::move(rows);
    return j;
}

std::string summary_path_for(const std::string& csv_path) {
    const std::string suffix = ".csv";
    if (csv_path.size() > suffix.size() &&
        csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return csv_path.substr(0, csv_path.size() - suffix.size()) + ".summary.json";
    }
    return csv_path + ".summary.json";
}

void emit_results(const RunResult& result, const std::string& path, OutputFormat format) {
    if (format == OutputFormat::json) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw io_error("cannot open output file: " + path);
        out << results_to_json(result).dump(2) << '\n';
        if (!out) throw io_error("write failed: " + path);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open output file: " + path);
    out << "replication,seed,risk,bound_rhs,beta,method\n";
    for (const auto& row : result.rows) {
        out << row.replication << ',' << row.seed << ',' << fmt17(row.risk) << ','
            << fmt17(row.bound_rhs) << ',' << fmt17(row.beta) << ',' << row.method << '\n';
    }
    if (!out) throw io_error("write failed: " + path);
    out.close();

    json summary = {
        {"mean_risk", result.estimate.mean_risk},
        {"std_error", result.estimate.std_error},
        {"replications", result.estimate.replications},
        {"bound_rhs", result.estimate.bound_rhs},
        {"bound_satisfied_within", result.estimate.bound_satisfied_within},
        {"bound_report", bound_report_to_json(result.report)},
    };
    const std::string spath = summary_path_for(path);
    std::ofstream sout(spath, std::ios::binary);
    if (!sout) throw io_error("cannot open output file: " + spath);
    sout << summary.dump(2) << '\n';
    if (!sout) throw io_error("write failed: " + spath);
}

} // namespace ewagg
