#include "ewagg/sparse_ewa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ewagg/quadrature.hpp"
#include "ewagg/rng.hpp"

namespace ewagg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog32 = std::log(1.5);

} // namespace

SparsityPrior SparsityPrior::unbounded(double tau) {
    if (!(tau > 0.0)) throw invalid_input_error("SparsityPrior: tau must be positive");
    return SparsityPrior{tau, kInf, 0.0, std::nullopt};
}

SparsityPrior SparsityPrior::truncated(double tau, double L0) {
    if (!(tau > 0.0)) throw invalid_input_error("SparsityPrior: tau must be positive");
    if (!(L0 > 0.0)) throw invalid_input_error("SparsityPrior: L0 must be positive");
    if (std::isfinite(L0) && tau > L0) {
        throw invalid_input_error("SparsityPrior: tau must not exceed a finite L0");
    }
    return SparsityPrior{tau, L0, 0.0, std::nullopt};
}

double SparsityPrior::sample_coordinate(double u) const {
    // CDF of the scaled q0: F(t) = 1 - (1+t/tau)^{-3}/2 for t >= 0, symmetric.
    if (u >= 0.5) return tau * (std::pow(2.0 * (1.0 - u), -1.0 / 3.0) - 1.0);
    return -tau * (std::pow(2.0 * u, -1.0 / 3.0) - 1.0);
}

SparsityPrior SparsityPrior::with_estimated_c0(Index M, Index n_draws, std::uint64_t seed) const {
    if (!std::isfinite(L0)) {
        SparsityPrior out = *this;
        out.log_c0 = 0.0;
        out.log_c0_se = 0.0;
        return out;
    }
    if (M < 1 || n_draws < 1) throw invalid_input_error("with_estimated_c0: M, n_draws >= 1");
    Rng rng(seed);
    const double L0_sq = L0 * L0;
    Index inside = 0;
    for (Index d = 0; d < n_draws; ++d) {
        double norm_sq = 0.0;
        for (Index j = 0; j < M; ++j) {
            const double t = sample_coordinate(rng.uniform());
            norm_sq += t * t;
        }
        if (norm_sq <= L0_sq) ++inside;
    }
    const double p = static_cast<double>(inside) / static_cast<double>(n_draws);
    if (p <= 0.0) {
        throw degenerate_input_error("with_estimated_c0: no prior mass found inside the ball");
    }
    const double se_p = std::sqrt(p * (1.0 - p) / static_cast<double>(n_draws));
    SparsityPrior out = *this;
    out.log_c0 = std::log(p);
    out.log_c0_se = se_p / p;
    return out;
}

double log_prior_density(const SparsityPrior& prior, const CoefVector& lambda) {
    if (std::isfinite(prior.L0) && lambda.norm() > prior.L0) return -kInf;
    double total = 0.0;
    for (Index j = 0; j < lambda.size(); ++j) {
        total += kLog32 - std::log(prior.tau) - 4.0 * std::log1p(std::fabs(lambda[j]) / prior.tau);
    }
    return total - prior.log_c0;
}

double log_posterior(const PosteriorSpec& spec, const CoefVector& lambda) {
    if (lambda.size() != spec.dict.M()) {
        throw invalid_input_error("log_posterior: coefficient length does not match dictionary");
    }
    const double lp = log_prior_density(spec.prior, lambda);
    if (lp == -kInf) return -kInf;
    const double rss = (spec.y - spec.dict.values() * lambda).squaredNorm();
    return -rss / spec.beta + lp;
}

Vector grad_log_posterior(const PosteriorSpec& spec, const CoefVector& lambda) {
    if (lambda.size() != spec.dict.M()) {
        throw invalid_input_error("grad_log_posterior: coefficient length does not match dictionary");
    }
    const Vector residual = spec.y - spec.dict.values() * lambda;
    Vector grad = (2.0 / spec.beta) * (spec.dict.values().transpose() * residual);
    for (Index j = 0; j < lambda.size(); ++j) {
        if (lambda[j] > 0.0) {
            grad[j] -= 4.0 / (spec.prior.tau + lambda[j]);
        } else if (lambda[j] < 0.0) {
            grad[j] += 4.0 / (spec.prior.tau - lambda[j]);
        }
        // sign(0) = 0: no prior contribution on the axis
    }
    return grad;
}

namespace {

struct ChainStats {
    Vector sum;
    long kept = 0;
    long accepted = 0;
    long burn_accepted = 0;
    double max_norm = 0.0;
};

ChainStats run_chain(const PosteriorSpec& spec, const SamplerConfig& cfg, const CoefVector& init,
                     std::uint64_t seed) {
    const Index M = spec.dict.M();
    Rng rng(seed);
    CoefVector state = init;
    double state_lp = log_posterior(spec, state);
    ChainStats stats;
    stats.sum = Vector::Zero(M);
    stats.max_norm = state.norm();

    const bool mala = cfg.algorithm == McmcAlgorithm::mala;
    const double h = cfg.step_size;
    Vector state_grad;
    if (mala) state_grad = grad_log_posterior(spec, state);

    CoefVector proposal(M);
    for (long t = 1; t <= cfg.n_steps; ++t) {
        double log_ratio;
        Vector prop_grad;
        if (!mala) {
            for (Index j = 0; j < M; ++j) proposal[j] = state[j] + h * rng.normal();
            const double prop_lp = log_posterior(spec, proposal);
            log_ratio = prop_lp - state_lp;
            if (rng.uniform() < std::exp(std::min(0.0, log_ratio))) {
                state = proposal;
                state_lp = prop_lp;
                ++stats.accepted;
                if (t <= cfg.burn_in) ++stats.burn_accepted;
            }
        } else {
            const Vector mean_fwd = state + 0.5 * h * h * state_grad;
            for (Index j = 0; j < M; ++j) proposal[j] = mean_fwd[j] + h * rng.normal();
            const double prop_lp = log_posterior(spec, proposal);
            const double u = rng.uniform();
            if (prop_lp > -kInf) {
                prop_grad = grad_log_posterior(spec, proposal);
                const Vector mean_bwd = proposal + 0.5 * h * h * prop_grad;
                const double log_q_fwd = -(proposal - mean_fwd).squaredNorm() / (2.0 * h * h);
                const double log_q_bwd = -(state - mean_bwd).squaredNorm() / (2.0 * h * h);
                log_ratio = prop_lp - state_lp + log_q_bwd - log_q_fwd;
                if (u < std::exp(std::min(0.0, log_ratio))) {
                    state = proposal;
                    state_lp = prop_lp;
                    state_grad = prop_grad;
                    ++stats.accepted;
                    if (t <= cfg.burn_in) ++stats.burn_accepted;
                }
            }
        }
        stats.max_norm = std::max(stats.max_norm, state.norm());
        if (t > cfg.burn_in && (t - cfg.burn_in) % cfg.thinning == 0) {
            stats.sum += state;
            ++stats.kept;
        }
    }
    return stats;
}

} // namespace

PosteriorMeanResult sample_posterior_mean(const PosteriorSpec& spec, const SamplerConfig& cfg) {
    if (!(spec.beta > 0.0)) throw invalid_input_error("sample_posterior_mean: beta must be positive");
    if (!(cfg.step_size > 0.0)) throw invalid_input_error("sample_posterior_mean: step size must be positive");
    if (cfg.n_steps < 1 || cfg.burn_in < 0 || cfg.burn_in >= cfg.n_steps) {
        throw invalid_input_error("sample_posterior_mean: need 0 <= burn_in < n_steps");
    }
    if (cfg.thinning < 1) throw invalid_input_error("sample_posterior_mean: thinning must be >= 1");
    if (cfg.n_chains < 1) throw invalid_input_error("sample_posterior_mean: n_chains must be >= 1");

    const Index M = spec.dict.M();
    const CoefVector init = cfg.init ? *cfg.init : CoefVector(Vector::Zero(M));
    if (init.size() != M) {
        throw invalid_input_error("sample_posterior_mean: init length does not match dictionary");
    }
    if (!std::isfinite(log_posterior(spec, init))) {
        throw invalid_input_error("sample_posterior_mean: non-finite log posterior at the initial point");
    }

    std::vector<ChainStats> chains(static_cast<std::size_t>(cfg.n_chains));
    bool failed = false;
    std::string failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int c = 0; c < cfg.n_chains; ++c) {
        try {
            chains[static_cast<std::size_t>(c)] =
                run_chain(spec, cfg, init, cfg.seed + static_cast<std::uint64_t>(c));
        } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                failed = true;
                failure = e.what();
            }
        }
    }
    if (failed) throw error("sample_posterior_mean: chain failed: " + failure);

    PosteriorMeanResult result;
    Vector pooled = Vector::Zero(M);
    long kept_total = 0;
    auto& diag = result.diagnostics;
    const double steps = static_cast<double>(cfg.n_steps);
    for (const auto& ch : chains) {
        pooled += ch.sum;
        kept_total += ch.kept;
        diag.acceptance_rate.push_back(static_cast<double>(ch.accepted) / steps);
        const double burn_total = static_cast<double>(std::max<long>(1, cfg.burn_in));
        const double burn_rate = cfg.burn_in > 0
                                     ? static_cast<double>(ch.burn_accepted) / burn_total
                                     : static_cast<double>(ch.accepted) / steps;
        diag.burn_in_acceptance_rate.push_back(burn_rate);
        diag.chain_means.emplace_back(ch.sum / static_cast<double>(std::max<long>(1, ch.kept)));
        diag.max_state_norm = std::max(diag.max_state_norm, ch.max_norm);
    }
    result.lambda_hat = pooled / static_cast<double>(kept_total);

    double spread = 0.0;
    for (Index j = 0; j < M; ++j) {
        double lo = kInf, hi = -kInf;
        for (const auto& mean : diag.chain_means) {
            lo = std::min(lo, mean[j]);
            hi = std::max(hi, mean[j]);
        }
        spread = std::max(spread, hi - lo);
    }
    diag.chain_mean_spread = (cfg.n_chains > 1) ? spread : 0.0;

    for (std::size_t c = 0; c < diag.burn_in_acceptance_rate.size(); ++c) {
        const double rate = diag.burn_in_acceptance_rate[c];
        if (rate < 0.01 || rate > 0.99) {
            diag.warnings.push_back("chain " + std::to_string(c) +
                                    ": burn-in acceptance rate " + std::to_string(rate) +
                                    " suggests retuning step_size");
        }
    }
    return result;
}

namespace {

// Integration radius: prior per-coordinate tail mass beyond R kept below
// total_tail / M, solved numerically on the log scale.
double prior_tail_radius(const SparsityPrior& prior, Index M, double total_tail) {
    const double target = std::log(total_tail / static_cast<double>(M));
    auto f = [&](double r) { return -3.0 * std::log1p(r / prior.tau) - target; };
    double hi = prior.tau;
    while (f(hi) > 0.0) hi *= 2.0;
    double radius = bisect(f, 0.0, hi);
    if (std::isfinite(prior.L0)) radius = std::min(radius, prior.L0);
    return radius;
}

} // namespace

CoefVector quadrature_posterior_mean(const PosteriorSpec& spec, double rel_tol) {
    const Index M = spec.dict.M();
    if (M > 3) throw unsupported_error("quadrature_posterior_mean: only M <= 3 supported");

    const double R = prior_tail_radius(spec.prior, M, 1e-10);
    const GramMatrix gm = gram(spec.dict);

    // Likelihood curvature sets the per-coordinate peak width.
    Vector width(M);
    for (Index j = 0; j < M; ++j) {
        const double curvature =
            2.0 * static_cast<double>(spec.dict.n()) * gm.phi(j, j) / spec.beta;
        width[j] = curvature > 0.0 ? std::min(1.0 / std::sqrt(curvature), R) : R;
    }

    // Locate the mode: coarse grid scan, then cyclic golden-section ascent so
    // the shift is a genuine maximum even when the peak is far narrower than
    // the scan spacing.
    const int scan_pts = (M == 1) ? 4096 : (M == 2 ? 192 : 40);
    Vector best = Vector::Zero(M);
    double best_lp = log_posterior(spec, best);
    {
        Vector probe(M);
        const auto scan = [&](auto&& self, Index dim) -> void {
            if (dim == M) {
                const double lp = log_posterior(spec, probe);
                if (lp > best_lp) {
                    best_lp = lp;
                    best = probe;
                }
                return;
            }
            for (int k = 0; k <= scan_pts; ++k) {
                probe[dim] =
                    -R + 2.0 * R * static_cast<double>(k) / static_cast<double>(scan_pts);
                self(self, dim + 1);
            }
        };
        scan(scan, 0);

        const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int sweep = 0; sweep < 24; ++sweep) {
            for (Index j = 0; j < M; ++j) {
                double lo = best[j] - 2.0 * R / scan_pts;
                double hi = best[j] + 2.0 * R / scan_pts;
                Vector probe_j = best;
                const auto value = [&](double x) {
                    probe_j[j] = x;
                    return log_posterior(spec, probe_j);
                };
                double x1 = hi - golden * (hi - lo);
                double x2 = lo + golden * (hi - lo);
                double f1 = value(x1), f2 = value(x2);
                for (int it = 0; it < 60; ++it) {
                    if (f1 < f2) {
                        lo = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = lo + golden * (hi - lo);
                        f2 = value(x2);
                    } else {
                        hi = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = hi - golden * (hi - lo);
                        f1 = value(x1);
                    }
                }
                best[j] = 0.5 * (lo + hi);
            }
            const double lp = log_posterior(spec, best);
            if (lp >= best_lp && lp - best_lp < 1e-10) {
                best_lp = lp;
                break;
            }
            best_lp = std::max(best_lp, lp);
        }
    }
    const double shift = std::max(best_lp, log_posterior(spec, Vector::Zero(M)));

    // Panel hints: prior kink scales and the peak at its own width.
    std::vector<std::vector<double>> hints(static_cast<std::size_t>(M));
    for (Index j = 0; j < M; ++j) {
        auto& hj = hints[static_cast<std::size_t>(j)];
        const double tau = spec.prior.tau;
        for (double c : {0.0, tau, -tau, 2.0 * tau, -2.0 * tau, 8.0 * tau, -8.0 * tau}) {
            hj.push_back(c);
        }
        for (double k : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
            hj.push_back(best[j] + k * width[j]);
            hj.push_back(best[j] - k * width[j]);
        }
        for (double c : {-0.5 * R, 0.5 * R}) hj.push_back(c);
    }

    // Normalization pilot: a global grid plus a local grid around the mode at
    // the peak's own scale, so narrow peaks cannot drive the tolerance to zero.
    double pilot = 0.0;
    {
        Vector point(M);
        const int grid = (M == 1) ? 2048 : (M == 2 ? 128 : 32);
        const double cell = std::pow(2.0 * R / grid, static_cast<double>(M));
        const auto global_pass = [&](auto&& self, Index dim) -> void {
            if (dim == M) {
                pilot += std::exp(std::min(log_posterior(spec, point) - shift, 0.0)) * cell;
                return;
            }
            for (int k = 0; k < grid; ++k) {
                point[dim] = -R + 2.0 * R * (static_cast<double>(k) + 0.5) / grid;
                self(self, dim + 1);
            }
        };
        global_pass(global_pass, 0);

        double local = 0.0;
        const int local_grid = 32;
        double local_cell = 1.0;
        for (Index j = 0; j < M; ++j) {
            local_cell *= 12.0 * width[j] / local_grid;
        }
        const auto local_pass = [&](auto&& self, Index dim) -> void {
            if (dim == M) {
                local += std::exp(std::min(log_posterior(spec, point) - shift, 0.0)) *
                         local_cell;
                return;
            }
            for (int k = 0; k < local_grid; ++k) {
                point[dim] = best[dim] +
                             6.0 * width[dim] * (2.0 * (k + 0.5) / local_grid - 1.0);
                self(self, dim + 1);
            }
        };
        local_pass(local_pass, 0);
        pilot = std::max(pilot, local);
        if (!(pilot > 0.0)) pilot = 1e-300;
    }

    const auto integrate = [&](const std::function<double(const Vector&)>& weight,
                               double tol_total) {
        Vector point(M);
        std::function<double(Index, double)> level = [&](Index dim, double tol) -> double {
            return adaptive_simpson_with_breaks(
                [&, dim, tol](double x) {
                    point[dim] = x;
                    if (dim + 1 == M) {
                        const double lp = log_posterior(spec, point);
                        return lp == -kInf ? 0.0
                                           : weight(point) * std::exp(std::min(lp - shift, 60.0));
                    }
                    // Inner-integral errors only accumulate where the outer
                    // integrand carries mass (an O(1) span around the ridge).
                    return level(dim + 1, tol / 32.0);
                },
                -R, R, hints[static_cast<std::size_t>(dim)], tol);
        };
        return level(0, tol_total);
    };

    const double z = integrate([](const Vector&) { return 1.0; }, rel_tol * pilot);
    if (!(z > 0.0)) throw degenerate_input_error("quadrature_posterior_mean: zero normalization");
    CoefVector mean(M);
    for (Index j = 0; j < M; ++j) {
        const double tol_j = rel_tol * pilot * (1.0 + std::fabs(best[j]) + width[j]);
        mean[j] = integrate([j](const Vector& lam) { return lam[j]; }, tol_j) / z;
    }
    return mean;
}

double map_objective(const PosteriorSpec& spec, const CoefVector& lambda) {
    const double n = static_cast<double>(spec.dict.n());
    const double data = (spec.y - spec.dict.values() * lambda).squaredNorm() / n;
    double penalty = 0.0;
    for (Index j = 0; j < lambda.size(); ++j) {
        penalty += std::log1p(std::fabs(lambda[j]) / spec.prior.tau);
    }
    return data + 4.0 * spec.beta / n * penalty;
}

namespace {

// Minimum of g(t) = a t^2 - 2 b t + c_pen * log(1 + |t|/tau) over one
// coordinate: stationary candidates are roots of per-side quadratics, plus 0.
double coordinate_minimizer(double a, double b, double c_pen, double tau) {
    if (a <= 0.0) return 0.0;
    const auto g = [&](double t) {
        return a * t * t - 2.0 * b * t + c_pen * std::log1p(std::fabs(t) / tau);
    };
    double best_t = 0.0;
    double best_g = 0.0; // g(0) = 0
    const auto consider = [&](double t) {
        const double v = g(t);
        if (v < best_g) {
            best_g = v;
            best_t = t;
        }
    };
    // Stable root pair {q/qa, qc/q} with q = -(qb + sign(qb) sqrt(disc))/2;
    // the textbook formula cancels catastrophically when tau is huge.
    const auto stationary = [](double qa, double qb, double qc, auto&& emit) {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc < 0.0) return;
        const double root = std::sqrt(disc);
        const double q = -0.5 * (qb + std::copysign(root, qb));
        if (q != 0.0) {
            emit(q / qa);
            emit(qc / q);
        } else {
            emit(0.0);
        }
    };
    // t > 0: 2a t^2 + (2a tau - 2b) t + (c_pen - 2 b tau) = 0
    stationary(2.0 * a, 2.0 * a * tau - 2.0 * b, c_pen - 2.0 * b * tau, [&](double t) {
        if (t > 0.0) consider(t);
    });
    // t < 0 via u = -t: 2a u^2 + (2a tau + 2b) u + (c_pen + 2 b tau) = 0
    stationary(2.0 * a, 2.0 * a * tau + 2.0 * b, c_pen + 2.0 * b * tau, [&](double u) {
        if (u > 0.0) consider(-u);
    });
    return best_t;
}

} // namespace

CoefVector map_estimate(const PosteriorSpec& spec, const CoefVector& init) {
    const Index M = spec.dict.M();
    if (init.size() != M) {
        throw invalid_input_error("map_estimate: init length does not match dictionary");
    }
    const double n = static_cast<double>(spec.dict.n());
    const double c_pen = 4.0 * spec.beta / n;
    const Matrix& X = spec.dict.values();

    CoefVector lambda = init;
    Vector residual = spec.y - X * lambda;
    Vector col_norm_sq(M);
    for (Index j = 0; j < M; ++j) col_norm_sq[j] = X.col(j).squaredNorm() / n;

    double obj = map_objective(spec, lambda);
    for (int sweep = 0; sweep < 500; ++sweep) {
        for (Index j = 0; j < M; ++j) {
            const double a = col_norm_sq[j];
            if (a == 0.0) continue;
            // b = (1/n) <phi_j, residual with coordinate j added back>
            const double b = (X.col(j).dot(residual) / n) + a * lambda[j];
            const double t = coordinate_minimizer(a, b, c_pen, spec.prior.tau);
            if (t != lambda[j]) {
                residual += X.col(j) * (lambda[j] - t);
                lambda[j] = t;
            }
        }
        const double new_obj = map_objective(spec, lambda);
        if (new_obj > obj + 1e-12 * (1.0 + std::fabs(obj))) {
            throw error("map_estimate: objective increased across a sweep");
        }
        const double decrease = obj - new_obj;
        obj = new_obj;
        if (decrease < 1e-10) break;
    }
    return lambda;
}

} // namespace ewagg
