#include "ewagg/bounds.hpp"

#include <cmath>
#include <limits>

namespace ewagg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_plus(double x) { return std::max(std::log(x), 0.0); }

double require(const std::optional<double>& p, const char* name, const char* regime) {
    if (!p) {
        throw precondition_error(std::string("beta_min: regime ") + regime +
                                 " requires parameter " + name);
    }
    return *p;
}

// log(1 + (e^a - 1)/alpha0), stable for large positive a.
double log1p_expm1_over(double a, double alpha0) {
    if (a > 30.0) return a - std::log(alpha0) + std::log1p((alpha0 - 1.0) * std::exp(-a));
    return std::log1p(std::expm1(a) / alpha0);
}

} // namespace

BoundReport BoundReport::make(std::string theorem, double approx, double complexity,
                              double remainder, double beta_used, double beta_min,
                              std::string form) {
    BoundReport r;
    r.theorem = std::move(theorem);
    r.approx_term = approx;
    r.complexity_term = complexity;
    r.remainder = remainder;
    r.rhs = approx + complexity + remainder;
    r.beta_used = beta_used;
    r.beta_min = beta_min;
    r.beta_admissible = beta_used >= beta_min;
    r.complexity_form = std::move(form);
    return r;
}

BetaRegime beta_regime_from_string(const std::string& name) {
    if (name == "thm6") return BetaRegime::thm6;
    if (name == "prop2") return BetaRegime::prop2;
    if (name == "cor0") return BetaRegime::cor0;
    if (name == "cor1") return BetaRegime::cor1;
    if (name == "cor1_2") return BetaRegime::cor1_2;
    throw config_error("unknown beta regime: " + name);
}

std::string to_string(BetaRegime regime) {
    switch (regime) {
        case BetaRegime::thm6: return "thm6";
        case BetaRegime::prop2: return "prop2";
        case BetaRegime::cor0: return "cor0";
        case BetaRegime::cor1: return "cor1";
        case BetaRegime::cor1_2: return "cor1_2";
    }
    return "";
}

double beta_min(const NoiseModel& model, BetaRegime regime, const BetaMinParams& params,
                Index n) {
    if (n < 1) throw invalid_input_error("beta_min: n must be >= 1");
    const double nn = static_cast<double>(n);
    switch (regime) {
        case BetaRegime::thm6: {
            const AdmissibilityReport rep = model.admissibility(n);
            if (!rep.assumption_a_holds || !rep.g_sup || !std::isfinite(*rep.g_sup)) {
                throw inadmissible_error(
                    "beta_min: regime thm6 needs a bounded derivative g; model does not qualify");
            }
            return 4.0 * *rep.g_sup;
        }
        case BetaRegime::prop2: {
            if (model.kind() != NoiseModel::Kind::double_exponential) {
                throw inadmissible_error("beta_min: regime prop2 applies to double-exponential errors");
            }
            const double L = require(params.L, "L", "prop2");
            const double L_bar = require(params.L_bar, "L_bar", "prop2");
            const double s2 = model.sigma2();
            return std::max((8.0 + 4.0 / nn) * s2 + 2.0 * L * L,
                            4.0 * std::sqrt(s2) * (1.0 + 1.0 / nn) * L_bar);
        }
        case BetaRegime::cor0: {
            const double L = require(params.L, "L", "cor0");
            double B;
            if (params.B) {
                B = *params.B;
            } else if (model.kind() == NoiseModel::Kind::uniform ||
                       model.kind() == NoiseModel::Kind::bounded_density) {
                B = model.half_width();
            } else if (model.kind() == NoiseModel::Kind::rademacher) {
                B = 1.0;
            } else {
                throw inadmissible_error(
                    "beta_min: regime cor0 needs almost surely bounded errors (or explicit B)");
            }
            return 4.0 * B * B * (1.0 + 1.0 / nn) + 2.0 * L * L;
        }
        case BetaRegime::cor1: {
            const double L = require(params.L, "L", "cor1");
            const double t = require(params.t, "t", "cor1");
            const double kappa = require(params.kappa, "kappa", "cor1");
            if (nn < std::exp(1.0 / kappa)) {
                throw precondition_error("beta_min: regime cor1 requires n >= e^{1/kappa}");
            }
            return 4.0 * (1.0 + 1.0 / nn) * std::pow(2.0 * std::log(nn) / t, 2.0 / kappa) +
                   2.0 * L * L;
        }
        case BetaRegime::cor1_2: {
            const double L = require(params.L, "L", "cor1_2");
            const double alpha0 = require(params.alpha0, "alpha0", "cor1_2");
            double s;
            if (params.s) {
                s = *params.s;
            } else if (model.kind() == NoiseModel::Kind::power_moment) {
                s = model.moment_order();
            } else {
                throw precondition_error("beta_min: regime cor1_2 requires parameter s");
            }
            if (!(s >= 2.0)) throw precondition_error("beta_min: regime cor1_2 requires s >= 2");
            return 4.0 * (1.0 + 1.0 / nn) * alpha0 * std::pow(nn, 2.0 / (s + 2.0)) + 2.0 * L * L;
        }
    }
    throw invalid_input_error("beta_min: unknown regime");
}

double kl_discrete(const WeightVector& p, const WeightVector& pi) {
    if (p.size() != pi.size()) throw invalid_input_error("kl_discrete: length mismatch");
    double total = 0.0;
    for (Index j = 0; j < p.size(); ++j) {
        if (p[j] == 0.0) continue;
        if (pi[j] == 0.0) return kInf;
        total += p[j] * std::log(p[j] / pi[j]);
    }
    return std::max(0.0, total);
}

BoundReport ms_bound(const Vector& model_losses, double beta, Index n, double beta_min_value) {
    if (model_losses.size() < 1) throw invalid_input_error("ms_bound: empty loss vector");
    if (!(beta > 0.0)) throw invalid_input_error("ms_bound: beta must be positive");
    if (n < 1) throw invalid_input_error("ms_bound: n must be >= 1");
    const double approx = model_losses.minCoeff();
    const double complexity =
        beta * std::log(static_cast<double>(model_losses.size())) / static_cast<double>(n);
    return BoundReport::make("ms", approx, complexity, 0.0, beta, beta_min_value);
}

namespace {

double soi_complexity(const CoefVector& lambda_star, double tau, double scale, double sigma,
                      double beta, double n, ComplexityForm form, std::string* form_name) {
    const SparsityStats stats = sparsity_stats(lambda_star);
    if (stats.m_lambda == 0) {
        *form_name = form == ComplexityForm::jensen ? "jensen" : "support_sum";
        return 0.0; // empty-support convention
    }
    if (form == ComplexityForm::jensen) {
        *form_name = "jensen";
        const double m = static_cast<double>(stats.m_lambda);
        return 4.0 * beta * m / n * (1.0 + log_plus(scale * stats.l1 / (m * sigma)));
    }
    *form_name = "support_sum";
    double sum = 0.0;
    for (Index j : stats.support) {
        sum += std::log1p(std::fabs(lambda_star[j]) / tau);
    }
    return 4.0 * beta / n * sum;
}

} // namespace

BoundReport soi_bound_thm6path_scalar(const CoefVector& lambda_star, double approx_term,
                                      double trace_phi, double sigma2, double beta, Index n,
                                      ComplexityForm form) {
    if (!(sigma2 > 0.0)) throw invalid_input_error("soi_bound_thm6path: sigma2 must be positive");
    if (!(trace_phi > 0.0)) throw invalid_input_error("soi_bound_thm6path: Tr(Phi) must be positive");
    const double nn = static_cast<double>(n);
    const double sigma = std::sqrt(sigma2);
    const double tau = sigma / std::sqrt(nn * trace_phi);
    std::string form_name;
    const double complexity = soi_complexity(lambda_star, tau, std::sqrt(nn * trace_phi), sigma,
                                             beta, nn, form, &form_name);
    return BoundReport::make("soi", approx_term, complexity, sigma2 / nn, beta, 4.0 * sigma2,
                             form_name);
}

BoundReport soi_bound_thm6path(const CoefVector& lambda_star, const ResponseVector& truth,
                               const EvaluatedDictionary& dict, double sigma2, double beta,
                               ComplexityForm form) {
    const GramMatrix gm = gram(dict);
    const double approx = empirical_norm_sq(predict(dict, lambda_star) - truth);
    return soi_bound_thm6path_scalar(lambda_star, approx, gm.trace, sigma2, beta, dict.n(),
                                     form);
}

ComplexityForm complexity_form_from_string(const std::string& name) {
    if (name == "jensen") return ComplexityForm::jensen;
    if (name == "support_sum") return ComplexityForm::support_sum;
    throw config_error("unknown complexity form: " + name);
}

BoundReport soip_bound_cor3(const CoefVector& lambda_star, double phi0, double sigma2,
                            double beta, Index n) {
    if (!(phi0 > 0.0)) throw invalid_input_error("soip_bound_cor3: phi0 must be positive");
    if (!(sigma2 > 0.0)) throw invalid_input_error("soip_bound_cor3: sigma2 must be positive");
    if (n < 1) throw invalid_input_error("soip_bound_cor3: n must be >= 1");
    const double nn = static_cast<double>(n);
    const double M = static_cast<double>(lambda_star.size());
    const double sigma = std::sqrt(sigma2);
    const double tau = sigma / std::sqrt(phi0 * nn * M);
    std::string form_name;
    const double complexity = soi_complexity(lambda_star, tau, std::sqrt(phi0 * nn * M), sigma,
                                             beta, nn, ComplexityForm::jensen, &form_name);
    return BoundReport::make("soip", 0.0, complexity, sigma2 / nn, beta, 4.0 * sigma2,
                             form_name);
}

BoundReport thm4_general_soi_scalar(const CoefVector& lambda_star, double approx_term,
                                    double trace_phi, double beta, double tau, double L0,
                                    double delta, Index n) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw precondition_error("thm4_general_soi: failed 0 < delta < 1");
    }
    if (!(tau > 0.0)) throw invalid_input_error("thm4_general_soi: tau must be positive");
    const double M = static_cast<double>(lambda_star.size());
    const double nn = static_cast<double>(n);
    if (std::isfinite(L0)) {
        if (tau > delta * L0 / std::sqrt(M)) {
            throw precondition_error("thm4_general_soi: failed tau <= delta * L0 / sqrt(M)");
        }
        if (lambda_star.norm() > (1.0 - delta) * L0) {
            throw precondition_error("thm4_general_soi: failed ||lambda*|| <= (1 - delta) * L0");
        }
    }
    const SparsityStats stats = sparsity_stats(lambda_star);
    double complexity = 0.0;
    for (Index j : stats.support) {
        complexity += std::log1p(std::fabs(lambda_star[j]) / tau);
    }
    complexity *= 4.0 * beta / nn;
    double remainder;
    if (std::isfinite(L0)) {
        const double m52 = std::pow(M, 2.5);
        const double cube = std::pow(delta * L0, 3.0);
        remainder = tau * tau * std::exp(2.0 * tau * tau * tau * m52 / cube) * trace_phi +
                    2.0 * beta * std::pow(tau, 3.0) * m52 / (nn * cube);
    } else {
        remainder = tau * tau * trace_phi;
    }
    return BoundReport::make("thm4", approx_term, complexity, remainder, beta, 0.0,
                             "support_sum");
}

BoundReport thm4_general_soi(const CoefVector& lambda_star, const ResponseVector& truth,
                             const EvaluatedDictionary& dict, double beta, double tau,
                             double L0, double delta) {
    const GramMatrix gm = gram(dict);
    const double approx = empirical_norm_sq(predict(dict, lambda_star) - truth);
    return thm4_general_soi_scalar(lambda_star, approx, gm.trace, beta, tau, L0, delta,
                                   dict.n());
}

double remainder_cor1(double B, double L, Index n, double beta, double t, double kappa) {
    if (!(kappa > 0.0) || !(t > 0.0)) {
        throw invalid_input_error("remainder_cor1: t and kappa must be positive");
    }
    const double nn = static_cast<double>(n);
    if (nn < std::exp(1.0 / kappa)) {
        throw precondition_error("remainder_cor1: requires n >= e^{1/kappa}");
    }
    return 16.0 * B * L * L * (nn + 1.0) * std::pow(2.0 * std::log(nn), 2.0 / kappa) /
           (nn * nn * beta * std::pow(t, 2.0 / kappa));
}

double remainder_cor1_2(double B, double L, double s, double alpha0, Index n) {
    if (!(s >= 2.0)) throw precondition_error("remainder_cor1_2: requires s >= 2");
    if (!(alpha0 > 0.0)) throw invalid_input_error("remainder_cor1_2: alpha0 must be positive");
    const double nn = static_cast<double>(n);
    return 4.0 * L * L * B * std::pow(alpha0, -0.5 * s) * std::pow(nn, -s / (s + 2.0));
}

double psi_double_exp(const Vector& mu_pred, const Vector& mu_prime_pred,
                      const ResponseVector& truth, double beta, double sigma2) {
    const Index n = truth.size();
    if (mu_pred.size() != n || mu_prime_pred.size() != n) {
        throw invalid_input_error("psi_double_exp: vector lengths differ");
    }
    const double nn = static_cast<double>(n);
    const double first =
        (empirical_norm_sq(truth - mu_prime_pred) - empirical_norm_sq(truth - mu_pred)) / beta;
    const double second = 4.0 * sigma2 * (2.0 * nn + 1.0) *
                          empirical_norm_sq(mu_pred - mu_prime_pred) / (nn * beta * beta);
    return std::exp(first + second);
}

double lem2_max_violation(const std::vector<double>& xs, const std::vector<double>& alpha0s) {
    double worst = -kInf;
    for (double alpha0 : alpha0s) {
        if (!(alpha0 > 0.0)) throw invalid_input_error("lem2_max_violation: alpha0 must be positive");
        for (double x : xs) {
            const double lhs = x + log1p_expm1_over(-x * alpha0, alpha0);
            const double rhs = 0.5 * x * x * alpha0;
            worst = std::max(worst, lhs - rhs);
        }
    }
    return worst;
}

} // namespace ewagg
