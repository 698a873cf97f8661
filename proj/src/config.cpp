#include <fstream>
#include <set>

#include "ewagg/io.hpp"

namespace ewagg {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw config_error("unknown key in " + where + ": " + it.key());
        }
    }
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw config_error(where + " requires numeric field '" + key + "'");
    }
    return j[key].get<double>();
}

long require_integer(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
        throw config_error(where + " requires integer field '" + key + "'");
    }
    return j[key].get<long>();
}

} // namespace

OutputFormat format_from_string(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw config_error("unknown output format: " + name);
}

NoiseModel parse_noise_model(const json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw config_error("noise: expected an object with a 'kind' field");
    }
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "gaussian") {
        reject_unknown_keys(j, {"kind", "sigma2"}, "noise");
        return NoiseModel::gaussian(require_number(j, "sigma2", "noise.gaussian"));
    }
    if (kind == "uniform") {
        reject_unknown_keys(j, {"kind", "b"}, "noise");
        return NoiseModel::uniform(require_number(j, "b", "noise.uniform"));
    }
    if (kind == "bounded_density") {
        reject_unknown_keys(j, {"kind", "b", "table"}, "noise");
        const double b = require_number(j, "b", "noise.bounded_density");
        if (!j.contains("table") || !j["table"].is_array()) {
            throw config_error("noise.bounded_density requires array field 'table'");
        }
        return NoiseModel::bounded_density(j["table"].get<std::vector<double>>(), b);
    }
    if (kind == "double_exponential") {
        reject_unknown_keys(j, {"kind", "sigma2"}, "noise");
        return NoiseModel::double_exponential(require_number(j, "sigma2", "noise.double_exponential"));
    }
    if (kind == "rademacher") {
        reject_unknown_keys(j, {"kind"}, "noise");
        return NoiseModel::rademacher();
    }
    if (kind == "power_moment") {
        reject_unknown_keys(j, {"kind", "s", "B", "nu"}, "noise");
        const double s = require_number(j, "s", "noise.power_moment");
        if (j.contains("nu")) {
            return NoiseModel::power_moment_student_t(s, j["nu"].get<double>());
        }
        return NoiseModel::power_moment(s, require_number(j, "B", "noise.power_moment"));
    }
    if (kind == "degenerate") {
        reject_unknown_keys(j, {"kind"}, "noise");
        return NoiseModel::degenerate();
    }
    throw config_error("unknown noise kind: " + kind);
}

ExperimentConfig parse_experiment_config(const json& j) {
    if (!j.is_object()) throw config_error("config: expected a JSON object");
    reject_unknown_keys(j,
                        {"scenario", "n", "M", "noise", "beta", "beta_regime", "tau",
                         "replications", "seed", "truth", "sampler"},
                        "config");
    ExperimentConfig cfg;
    if (!j.contains("scenario")) throw config_error("config requires field 'scenario'");
    cfg.scenario = scenario_from_string(j["scenario"].get<std::string>());
    cfg.n = require_integer(j, "n", "config");
    cfg.M = require_integer(j, "M", "config");
    if (cfg.n < 1 || cfg.M < 1) throw config_error("config: n and M must be >= 1");
    if (!j.contains("noise")) throw config_error("config requires field 'noise'");
    cfg.noise = parse_noise_model(j["noise"]);

    if (j.contains("beta")) {
        if (j["beta"].is_string()) {
            if (j["beta"].get<std::string>() != "auto") {
                throw config_error("config: beta must be a number or \"auto\"");
            }
        } else if (j["beta"].is_number()) {
            cfg.beta = j["beta"].get<double>();
            if (!(*cfg.beta > 0.0)) throw config_error("config: beta must be positive");
        } else {
            throw config_error("config: beta must be a number or \"auto\"");
        }
    }
    if (j.contains("beta_regime")) {
        cfg.beta_regime = beta_regime_from_string(j["beta_regime"].get<std::string>());
    }
    if (j.contains("tau")) {
        if (j["tau"].is_string()) {
            if (j["tau"].get<std::string>() != "auto") {
                throw config_error("config: tau must be a number or \"auto\"");
            }
        } else if (j["tau"].is_number()) {
            cfg.tau = j["tau"].get<double>();
            if (!(*cfg.tau > 0.0)) throw config_error("config: tau must be positive");
        } else {
            throw config_error("config: tau must be a number or \"auto\"");
        }
    }
    cfg.replications = require_integer(j, "replications", "config");
    if (cfg.replications < 1) throw config_error("config: replications must be >= 1");
    if (!j.contains("seed") || !j["seed"].is_number_integer()) {
        throw config_error("config requires integer field 'seed'");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();

    cfg.truth.generator =
        cfg.scenario == Scenario::finite_ms ? "finite_family" : "sparse_linear";
    if (j.contains("truth")) {
        const json& t = j["truth"];
        reject_unknown_keys(t, {"generator", "sparsity", "distances"}, "truth");
        if (t.contains("generator")) cfg.truth.generator = t["generator"].get<std::string>();
        if (t.contains("sparsity")) {
            cfg.truth.sparsity = t["sparsity"].get<long>();
            if (cfg.truth.sparsity < 0) throw config_error("truth.sparsity must be >= 0");
        }
        if (t.contains("distances")) {
            cfg.truth.distances = t["distances"].get<std::vector<double>>();
        }
    }

    if (cfg.scenario == Scenario::sparse_soi) {
        // Desk-scale sampler defaults; overridden by the sampler block below.
        cfg.sampler = default_sparse_soi_config().sampler;
    }
    if (j.contains("sampler")) {
        const json& s = j["sampler"];
        reject_unknown_keys(
            s, {"algorithm", "step_size", "n_steps", "burn_in", "thinning", "n_chains", "seed"},
            "sampler");
        if (s.contains("algorithm")) {
            const std::string algo = s["algorithm"].get<std::string>();
            if (algo == "RWMH" || algo == "rwmh") {
                cfg.sampler.algorithm = McmcAlgorithm::rwmh;
            } else if (algo == "MALA" || algo == "mala") {
                cfg.sampler.algorithm = McmcAlgorithm::mala;
            } else {
                throw config_error("sampler.algorithm must be RWMH or MALA");
            }
        }
        if (s.contains("step_size")) {
            if (s["step_size"].is_string()) {
                if (s["step_size"].get<std::string>() != "auto") {
                    throw config_error("sampler.step_size must be a number or \"auto\"");
                }
                cfg.sampler_step_auto = true;
            } else {
                cfg.sampler.step_size = s["step_size"].get<double>();
                if (!(cfg.sampler.step_size > 0.0)) {
                    throw config_error("sampler.step_size must be positive");
                }
                cfg.sampler_step_auto = false;
            }
        }
        if (s.contains("n_steps")) cfg.sampler.n_steps = s["n_steps"].get<long>();
        if (s.contains("burn_in")) cfg.sampler.burn_in = s["burn_in"].get<long>();
        if (s.contains("thinning")) cfg.sampler.thinning = s["thinning"].get<long>();
        if (s.contains("n_chains")) cfg.sampler.n_chains = s["n_chains"].get<int>();
        if (s.contains("seed")) cfg.sampler.seed = s["seed"].get<std::uint64_t>();
        if (cfg.sampler.n_steps < 1 || cfg.sampler.burn_in < 0 ||
            cfg.sampler.burn_in >= cfg.sampler.n_steps) {
            throw config_error("sampler: need 0 <= burn_in < n_steps");
        }
        if (cfg.sampler.thinning < 1) throw config_error("sampler.thinning must be >= 1");
        if (cfg.sampler.n_chains < 1) throw config_error("sampler.n_chains must be >= 1");
    }
    return cfg;
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw config_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    return parse_experiment_config(load_json_file(path));
}

} // namespace ewagg
