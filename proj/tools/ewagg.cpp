#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "ewagg/io.hpp"
#include "ewagg/verify.hpp"

namespace {

using ewagg::BoundReport;
using nlohmann::json;

int run_replication_command(const std::string& config_path, const std::string& out_path,
                            const std::string& format_name, ewagg::Scenario expected) {
    ewagg::ExperimentConfig cfg = ewagg::load_experiment_config(config_path);
    if (cfg.scenario != expected) {
        throw ewagg::config_error("config scenario '" + ewagg::to_string(cfg.scenario) +
                                  "' does not match the subcommand");
    }
    const auto start = std::chrono::steady_clock::now();
    const ewagg::RunResult result = ewagg::run_replications(cfg);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ewagg::emit_results(result, out_path, ewagg::format_from_string(format_name));
    std::cout << "scenario=" << ewagg::to_string(cfg.scenario)
              << " replications=" << result.estimate.replications
              << " mean_risk=" << result.estimate.mean_risk
              << " std_error=" << result.estimate.std_error
              << " bound_rhs=" << result.estimate.bound_rhs
              << " bound_satisfied_within=" << result.estimate.bound_satisfied_within
              << " seconds=" << seconds << '\n';
    return 0;
}

int run_verify_command(const std::string& suite, const std::string& out_path) {
    const std::vector<ewagg::CheckResult> checks = ewagg::verify_suite(suite);
    json arr = json::array();
    bool all_pass = true;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  value=" << c.value
                  << " threshold=" << c.threshold
                  << (c.detail.empty() ? "" : "  (" + c.detail + ")") << '\n';
        all_pass = all_pass && c.pass;
        arr.push_back({{"name", c.name},
                       {"pass", c.pass},
                       {"value", c.value},
                       {"threshold", c.threshold},
                       {"detail", c.detail}});
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ewagg::io_error("cannot open output file: " + out_path);
        out << arr.dump(2) << '\n';
    }
    if (!all_pass) throw ewagg::error("verify suite '" + suite + "' has failing checks");
    return 0;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ewagg::config_error("unknown key in params: " + it.key());
        }
    }
}

double num(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ewagg::config_error("params require numeric field '" + key + "'");
    }
    return j[key].get<double>();
}

ewagg::Vector vec(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_array()) {
        throw ewagg::config_error("params require array field '" + key + "'");
    }
    const auto data = j[key].get<std::vector<double>>();
    ewagg::Vector v(static_cast<ewagg::Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) v[static_cast<ewagg::Index>(i)] = data[i];
    return v;
}

int run_bound_command(const std::string& theorem, const std::string& params_path) {
    const json p = ewagg::load_json_file(params_path);
    BoundReport report;
    if (theorem == "ms") {
        reject_unknown(p, {"losses", "beta", "n", "beta_min"});
        report = ewagg::ms_bound(vec(p, "losses"), num(p, "beta"),
                                 static_cast<ewagg::Index>(num(p, "n")),
                                 p.contains("beta_min") ? num(p, "beta_min") : 0.0);
    } else if (theorem == "thm4") {
        reject_unknown(p, {"lambda_star", "approx_term", "trace_phi", "beta", "tau", "L0",
                           "delta", "n"});
        double L0 = std::numeric_limits<double>::infinity();
        if (p.contains("L0") && p["L0"].is_number()) L0 = p["L0"].get<double>();
        report = ewagg::thm4_general_soi_scalar(
            vec(p, "lambda_star"), p.contains("approx_term") ? num(p, "approx_term") : 0.0,
            num(p, "trace_phi"), num(p, "beta"), num(p, "tau"), L0, num(p, "delta"),
            static_cast<ewagg::Index>(num(p, "n")));
    } else if (theorem == "soi") {
        reject_unknown(p, {"lambda_star", "approx_term", "trace_phi", "sigma2", "beta", "n",
                           "form"});
        const auto form = p.contains("form")
                              ? ewagg::complexity_form_from_string(p["form"].get<std::string>())
                              : ewagg::ComplexityForm::jensen;
        report = ewagg::soi_bound_thm6path_scalar(
            vec(p, "lambda_star"), p.contains("approx_term") ? num(p, "approx_term") : 0.0,
            num(p, "trace_phi"), num(p, "sigma2"), num(p, "beta"),
            static_cast<ewagg::Index>(num(p, "n")), form);
    } else if (theorem == "soip") {
        reject_unknown(p, {"lambda_star", "phi0", "sigma2", "beta", "n"});
        report = ewagg::soip_bound_cor3(vec(p, "lambda_star"), num(p, "phi0"), num(p, "sigma2"),
                                        num(p, "beta"), static_cast<ewagg::Index>(num(p, "n")));
    } else if (theorem == "cor1") {
        reject_unknown(p, {"B", "L", "n", "beta", "t", "kappa"});
        const auto n = static_cast<ewagg::Index>(num(p, "n"));
        const double beta = num(p, "beta");
        const double remainder =
            ewagg::remainder_cor1(num(p, "B"), num(p, "L"), n, beta, num(p, "t"), num(p, "kappa"));
        ewagg::BetaMinParams bp;
        bp.L = num(p, "L");
        bp.t = num(p, "t");
        bp.kappa = num(p, "kappa");
        const double bmin =
            ewagg::beta_min(ewagg::NoiseModel::gaussian(1.0), ewagg::BetaRegime::cor1, bp, n);
        report = BoundReport::make("cor1", 0.0, 0.0, remainder, beta, bmin);
    } else if (theorem == "cor1_2") {
        reject_unknown(p, {"B", "L", "s", "alpha0", "n", "beta"});
        const auto n = static_cast<ewagg::Index>(num(p, "n"));
        const double beta = num(p, "beta");
        const double remainder = ewagg::remainder_cor1_2(num(p, "B"), num(p, "L"), num(p, "s"),
                                                         num(p, "alpha0"), n);
        ewagg::BetaMinParams bp;
        bp.L = num(p, "L");
        bp.s = num(p, "s");
        bp.alpha0 = num(p, "alpha0");
        const double bmin =
            ewagg::beta_min(ewagg::NoiseModel::power_moment(num(p, "s"), 1.0),
                            ewagg::BetaRegime::cor1_2, bp, n);
        report = BoundReport::make("cor1_2", 0.0, 0.0, remainder, beta, bmin);
    } else {
        throw ewagg::config_error("unknown theorem id: " + theorem);
    }
    std::cout << ewagg::bound_report_to_json(report).dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exponentially weighted aggregation: estimators, oracle-bound calculators, "
                 "and Monte Carlo verification"};
    app.require_subcommand(1);

    std::string config_path, out_path, format_name = "csv", suite, theorem, params_path;

    auto* finite = app.add_subcommand("finite", "finite-dictionary aggregation run");
    finite->add_option("--config", config_path, "JSON experiment config")->required();
    finite->add_option("--out", out_path, "output path")->required();
    finite->add_option("--format", format_name, "csv or json");

    auto* sparse = app.add_subcommand("sparse", "sparsity-prior aggregation run");
    sparse->add_option("--config", config_path, "JSON experiment config")->required();
    sparse->add_option("--out", out_path, "output path")->required();
    sparse->add_option("--format", format_name, "csv or json");

    auto* verify = app.add_subcommand("verify", "run a numeric verification suite");
    verify->add_option("--suite", suite, "noise|skorokhod|bounds|prior|appendix")->required();
    verify->add_option("--out", out_path, "JSON report path");

    auto* bound = app.add_subcommand("bound", "evaluate a bound right-hand side");
    bound->add_option("--theorem", theorem, "ms|thm4|soi|soip|cor1|cor1_2")->required();
    bound->add_option("--params", params_path, "JSON parameter file")->required();

    try {
        app.parse(argc, argv);
        if (finite->parsed()) {
            return run_replication_command(config_path, out_path, format_name,
                                           ewagg::Scenario::finite_ms);
        }
        if (sparse->parsed()) {
            return run_replication_command(config_path, out_path, format_name,
                                           ewagg::Scenario::sparse_soi);
        }
        if (verify->parsed()) return run_verify_command(suite, out_path);
        if (bound->parsed()) return run_bound_command(theorem, params_path);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ewagg::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const ewagg::precondition_error& e) {
        std::cerr << "precondition error: " << e.what() << '\n';
        return 3;
    } catch (const ewagg::unsupported_error& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return 3;
    } catch (const ewagg::io_error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
