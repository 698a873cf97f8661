#ifndef EWAGG_HARNESS_HPP
#define EWAGG_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ewagg/bounds.hpp"
#include "ewagg/model.hpp"
#include "ewagg/noise.hpp"
#include "ewagg/sparse_ewa.hpp"

namespace ewagg {

enum class Scenario { finite_ms, sparse_soi, skorokhod_check, noise_check, bound_suite };

Scenario scenario_from_string(const std::string& name);
std::string to_string(Scenario scenario);

struct TruthSpec {
    std::string generator = "sparse_linear"; // sparse_linear | finite_family | trig_basis
    Index sparsity = 3;                      // nonzero count for the lambda* generators
    std::vector<double> distances;           // finite_family: ||f_j - f||_n ladder (optional)
};

struct ExperimentConfig {
    Scenario scenario = Scenario::finite_ms;
    Index n = 100;
    Index M = 10;
    NoiseModel noise = NoiseModel::gaussian(1.0);
    std::optional<double> beta;              // nullopt: resolve via beta_min of the regime
    BetaRegime beta_regime = BetaRegime::thm6;
    std::optional<double> tau;               // nullopt: sigma / sqrt(n Tr(Phi))
    Index replications = 100;
    std::uint64_t seed = 0;
    TruthSpec truth;
    SamplerConfig sampler;
    bool sampler_step_auto = true;           // step_size resolved from the posterior curvature
};

/// Spec defaults for the two replication scenarios.
ExperimentConfig default_finite_ms_config();
ExperimentConfig default_sparse_soi_config();

struct GeneratedTruth {
    EvaluatedDictionary dict;
    ResponseVector truth;
    std::optional<CoefVector> lambda_star;
};

/// Deterministic synthetic instances: (a) sparse-linear with unit-norm
/// columns, (b) finite family at controlled distances from the truth,
/// (c) trigonometric basis on the grid i/n with a sparse coefficient vector.
GeneratedTruth generate_truth(const ExperimentConfig& cfg, std::uint64_t seed);

struct ReplicationRow {
    Index replication;
    std::uint64_t seed;
    double risk;
    double bound_rhs;
    double beta;
    std::string method;
};

struct RiskEstimate {
    double mean_risk = 0.0;
    double std_error = 0.0;
    Index replications = 0;
    double bound_rhs = 0.0;
    double bound_satisfied_within = 0.0; // (mean_risk - bound_rhs) in std-error units
};

struct RunResult {
    RiskEstimate estimate;
    BoundReport report;
    std::vector<ReplicationRow> rows;
};

/// Monte Carlo verification run: replication r draws noise with the seed
/// hashed from (master seed, r), runs the scenario's estimator, and records
/// the empirical risk. The reduction is order-independent (indexed rows,
/// summed in index order), so thread count does not change the output.
RunResult run_replications(const ExperimentConfig& cfg);

/// Plain-loop reference implementation; produces bit-identical results.
RunResult run_replications_serial(const ExperimentConfig& cfg);

/// Coordinate-descent Lasso for the objective
/// ||y - X lambda||_n^2 + 2 penalty |lambda|_1, soft-threshold updates.
CoefVector lasso_baseline(const EvaluatedDictionary& dict, const ResponseVector& y,
                          double penalty);

/// Default random-walk proposal scale from the likelihood curvature.
double default_rwmh_step(const EvaluatedDictionary& dict, double beta);

/// Universal-threshold style default Lasso penalty for the sampler start.
double default_lasso_penalty(double sigma2, Index n, Index M);

} // namespace ewagg

#endif
