#ifndef EWAGG_BOUNDS_HPP
#define EWAGG_BOUNDS_HPP

#include <optional>
#include <string>
#include <vector>

#include "ewagg/finite_agg.hpp"
#include "ewagg/model.hpp"
#include "ewagg/noise.hpp"

namespace ewagg {

/// Right-hand side of an oracle inequality, split into the approximation,
/// complexity (KL / log), and remainder contributions. rhs is always the exact
/// sum of the three parts.
struct BoundReport {
    std::string theorem;
    double approx_term = 0.0;
    double complexity_term = 0.0;
    double remainder = 0.0;
    double rhs = 0.0;
    double beta_used = 0.0;
    double beta_min = 0.0;
    bool beta_admissible = false;
    std::string complexity_form; // "jensen" or "support_sum" for the sparsity bounds

    static BoundReport make(std::string theorem, double approx, double complexity,
                            double remainder, double beta_used, double beta_min,
                            std::string form = "");
};

/// Temperature-threshold regimes, keyed by the bound they instantiate.
enum class BetaRegime { thm6, prop2, cor0, cor1, cor1_2 };

BetaRegime beta_regime_from_string(const std::string& name);
std::string to_string(BetaRegime regime);

/// Caller-supplied population quantities entering the thresholds. L is
/// sup ||f - f_lambda||_n over the candidate family, L_bar the uniform bound
/// on |f_lambda(x_i)|; they come from the experiment design, never from data.
struct BetaMinParams {
    std::optional<double> L;
    std::optional<double> L_bar;
    std::optional<double> B;
    std::optional<double> t;
    std::optional<double> kappa;
    std::optional<double> s;
    std::optional<double> alpha0;
};

/// Smallest admissible temperature for the given noise model and regime.
double beta_min(const NoiseModel& model, BetaRegime regime, const BetaMinParams& params, Index n);

/// Kullback-Leibler divergence between discrete distributions of equal length,
/// with 0 log 0 = 0 and +infinity when p charges a zero-prior atom.
double kl_discrete(const WeightVector& p, const WeightVector& pi);

/// Model-selection bound: min_j losses + beta log(M) / n.
BoundReport ms_bound(const Vector& model_losses, double beta, Index n, double beta_min_value = 0.0);

enum class ComplexityForm { jensen, support_sum };

/// Sparsity oracle bound along the Gaussian path with tau = sigma/sqrt(n Tr(Phi)):
/// jensen form uses (4 beta M(l*)/n)(1 + log+{sqrt(n Tr Phi) |l*|_1 / (M(l*) sigma)}),
/// support_sum the exact support sum; remainder sigma^2/n either way.
BoundReport soi_bound_thm6path(const CoefVector& lambda_star, const ResponseVector& truth,
                               const EvaluatedDictionary& dict, double sigma2, double beta,
                               ComplexityForm form = ComplexityForm::jensen);

/// Same bound when only Tr(Phi) is known (no dictionary at hand).
BoundReport soi_bound_thm6path_scalar(const CoefVector& lambda_star, double approx_term,
                                      double trace_phi, double sigma2, double beta, Index n,
                                      ComplexityForm form = ComplexityForm::jensen);

/// Variant for the well-specified case with column norms bounded by phi0 and
/// tau = sigma/sqrt(phi0 n M); the approximation term is zero by assumption.
BoundReport soip_bound_cor3(const CoefVector& lambda_star, double phi0, double sigma2,
                            double beta, Index n);

ComplexityForm complexity_form_from_string(const std::string& name);

/// General sparsity oracle bound with explicit (tau, L0, delta); preconditions
/// tau <= delta L0 / sqrt(M) and ||lambda*|| <= (1 - delta) L0 are enforced.
BoundReport thm4_general_soi(const CoefVector& lambda_star, const ResponseVector& truth,
                             const EvaluatedDictionary& dict, double beta, double tau,
                             double L0, double delta);

/// Scalar version used when only Tr(Phi) is known (no dictionary at hand).
BoundReport thm4_general_soi_scalar(const CoefVector& lambda_star, double approx_term,
                                    double trace_phi, double beta, double tau, double L0,
                                    double delta, Index n);

/// Residual of the exponential-tail corollary:
/// 16 B L^2 (n+1) (2 log n)^{2/kappa} / (n^2 beta t^{2/kappa}); needs n >= e^{1/kappa}.
double remainder_cor1(double B, double L, Index n, double beta, double t, double kappa);

/// Residual of the power-moment corollary, reconstructed from the proof chain:
/// 4 L^2 B alpha0^{-s/2} n^{-s/(s+2)}.
double remainder_cor1_2(double B, double L, double s, double alpha0, Index n);

/// The double-exponential comparison functional evaluated on prediction
/// vectors; equals 1 when the two measures coincide.
double psi_double_exp(const Vector& mu_pred, const Vector& mu_prime_pred,
                      const ResponseVector& truth, double beta, double sigma2);

/// Max over the grid of LHS - RHS for the elementary inequality
/// x + log(1 + (e^{-x a0} - 1)/a0) <= x^2 a0 / 2; nonpositive up to rounding.
double lem2_max_violation(const std::vector<double>& xs, const std::vector<double>& alpha0s);

} // namespace ewagg

#endif
