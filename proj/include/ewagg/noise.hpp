#ifndef EWAGG_NOISE_HPP
#define EWAGG_NOISE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ewagg/model.hpp"

namespace ewagg {

/// Whether the tail-mean identity holds with a bounded derivative, and the
/// metadata the temperature thresholds depend on.
struct AdmissibilityReport {
    bool assumption_a_holds = false;
    std::optional<double> g_sup; // nullopt when the derivative does not exist; may be +inf
    bool n_divisible = false;
    bool symmetric = true;
    std::string notes;
};

/// Zero-mean symmetric error families. Models are immutable; all sampling
/// takes an explicit seed and is pure given the seed.
class NoiseModel {
  public:
    enum class Kind {
        gaussian,
        uniform,
        bounded_density,
        double_exponential,
        rademacher,
        power_moment,
        degenerate,
    };

    static NoiseModel gaussian(double sigma2);
    static NoiseModel uniform(double half_width);
    /// Piecewise-linear density table on a uniform grid over [-half_width, half_width].
    /// Must be symmetric, bounded away from zero, and integrate to 1 within 1e-8.
    static NoiseModel bounded_density(std::vector<double> table, double half_width);
    static NoiseModel bounded_density_from(const std::function<double(double)>& density,
                                           double half_width, int grid_points = 2001);
    static NoiseModel double_exponential(double sigma2);
    static NoiseModel rademacher();
    /// Moment condition only: E|xi|^s <= moment_bound. Not sampleable.
    static NoiseModel power_moment(double s, double moment_bound);
    /// Concrete heavy-tailed generator: Student-t with nu > s degrees of freedom,
    /// rescaled to unit variance; the moment bound is computed from (s, nu).
    static NoiseModel power_moment_student_t(double s, double nu);
    /// Identically zero errors, for noiseless calibration runs.
    static NoiseModel degenerate();

    Kind kind() const { return kind_; }
    bool sampleable() const { return has_generator_; }
    double sigma2() const;
    double half_width() const;                     // uniform / bounded_density
    double moment_order() const { return s_; }     // power_moment
    double moment_bound() const { return B_; }     // power_moment
    std::optional<double> student_t_nu() const { return nu_; }

    /// n i.i.d. draws, deterministic given the seed.
    Vector sample(Index n, std::uint64_t seed) const;

    /// Tail mean m(x) = integral of z dF(z) over [x, infinity).
    double m_xi(double x) const;

    /// Derivative of the measure m(z)dz against dF(z) where it exists.
    double g_xi(double x) const;

    /// Lebesgue density where the law has one.
    double density(double x) const;

    /// Cumulative distribution function.
    double cdf(double x) const;

    AdmissibilityReport admissibility(Index n) const;

  private:
    NoiseModel() = default;

    struct BoundedTable {
        double b = 0.0;
        std::vector<double> values;
        std::vector<double> prefix; // integral from -b to node k
        double total = 0.0;
        double f_min = 0.0;
        double variance = 0.0;
        double mean_abs = 0.0;
    };

    Kind kind_ = Kind::degenerate;
    double sigma2_ = 0.0;
    double b_ = 0.0; // uniform / bounded support half width; Laplace scale for double_exponential
    double s_ = 0.0;
    double B_ = 0.0;
    std::optional<double> nu_;
    bool has_generator_ = true;
    BoundedTable table_;
};

/// Two-point dummy randomization: given xi of length n, each zeta_i takes the
/// value xi_i/n with probability (2n+1)/(2n+2) and -2*xi_i - xi_i/n otherwise.
/// Consumes exactly one uniform per coordinate, in index order.
Vector skorokhod_dummy(const Vector& xi, std::uint64_t seed);

/// Companion variable for double-exponential errors: 0 with probability
/// n^2/(n+1)^2, otherwise a zero-mean double exponential with variance
/// (1+1/n)^2 sigma^2; xi + zeta is then distributed as (1+1/n) xi.
Vector n_divisible_zeta_sample(const NoiseModel& model, Index n, Index count, std::uint64_t seed);

/// Exact conditional MGF exponent of the two-point construction,
/// log E(e^{lambda zeta_i} | xi_i) as a function of u = lambda * xi_i.
double skorokhod_log_mgf(double u, Index n);

/// The quadratic upper bound (lambda xi)^2 (n+1)/n^2 on the same exponent.
double skorokhod_log_mgf_bound(double u, Index n);

/// Moment generating function of the n-divisible companion at t.
double zeta_mgf(double t, Index n, double sigma2);

} // namespace ewagg

#endif
