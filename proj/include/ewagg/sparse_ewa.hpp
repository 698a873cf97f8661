#ifndef EWAGG_SPARSE_EWA_HPP
#define EWAGG_SPARSE_EWA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ewagg/model.hpp"

namespace ewagg {

/// Product prior with heavy-tailed one-dimensional density
/// q0(t) = 3 / (2 (1+|t|)^4), coordinates scaled by tau, optionally truncated
/// to the Euclidean ball of radius L0. The normalizing constant C0 equals 1
/// when L0 is infinite and lies in (0,1] otherwise; it only enters the log
/// density as an additive constant, so Monte Carlo estimation is needed for
/// reporting alone.
struct SparsityPrior {
    double tau;
    double L0;
    double log_c0 = 0.0;
    std::optional<double> log_c0_se;

    static SparsityPrior unbounded(double tau);
    static SparsityPrior truncated(double tau, double L0);

    /// Monte Carlo estimate of C0 for dimension M by sampling the
    /// unconstrained product prior; returns a copy with log_c0 set.
    SparsityPrior with_estimated_c0(Index M, Index n_draws, std::uint64_t seed) const;

    /// One draw per coordinate from the unconstrained scaled q0, by inverse CDF.
    double sample_coordinate(double u) const;
};

double log_prior_density(const SparsityPrior& prior, const CoefVector& lambda);

/// Data, temperature, and prior defining the pseudo-posterior density
/// proportional to exp(-n ||y - f_lambda||_n^2 / beta) q(lambda).
struct PosteriorSpec {
    EvaluatedDictionary dict;
    ResponseVector y;
    double beta;
    SparsityPrior prior;
};

/// Log posterior up to an additive constant (-inf outside the L0 ball).
double log_posterior(const PosteriorSpec& spec, const CoefVector& lambda);

/// Gradient of the log posterior; the prior term uses sign(0) = 0.
Vector grad_log_posterior(const PosteriorSpec& spec, const CoefVector& lambda);

enum class McmcAlgorithm { rwmh, mala };

struct SamplerConfig {
    McmcAlgorithm algorithm = McmcAlgorithm::rwmh;
    double step_size = 0.1;
    long n_steps = 10000;
    long burn_in = 2000;
    long thinning = 1;
    int n_chains = 1;
    std::uint64_t seed = 0;
    std::optional<CoefVector> init; // default: zero vector
};

struct McmcDiagnostics {
    std::vector<double> acceptance_rate;         // per chain, whole run
    std::vector<double> burn_in_acceptance_rate; // per chain
    std::vector<CoefVector> chain_means;
    double chain_mean_spread = 0.0; // max over coordinates of across-chain mean range
    double max_state_norm = 0.0;    // largest Euclidean norm visited by any chain
    std::vector<std::string> warnings;
};

struct PosteriorMeanResult {
    CoefVector lambda_hat;
    McmcDiagnostics diagnostics;
};

/// Posterior mean by Metropolis-Hastings: average of post-burn-in, thinned
/// states pooled across chains (sum then divide, in chain order). Chain c uses
/// seed cfg.seed + c. Proposals outside the L0 ball are rejected.
PosteriorMeanResult sample_posterior_mean(const PosteriorSpec& spec, const SamplerConfig& cfg);

/// Brute-force posterior mean for M <= 3 by tensor-product adaptive
/// quadrature over [-R, R]^M, R chosen so the prior tail mass beyond R is
/// below 1e-10.
CoefVector quadrature_posterior_mean(const PosteriorSpec& spec, double rel_tol = 1e-8);

/// Penalized least squares objective whose minimizer is the posterior mode:
/// ||y - f_lambda||_n^2 + (4 beta / n) sum_j log(1 + |lambda_j|/tau).
double map_objective(const PosteriorSpec& spec, const CoefVector& lambda);

/// Local minimizer of map_objective by cyclic coordinate descent; each 1-D
/// subproblem is minimized over its stationary candidates and 0. The result's
/// objective never exceeds the initial point's.
CoefVector map_estimate(const PosteriorSpec& spec, const CoefVector& init);

} // namespace ewagg

#endif
