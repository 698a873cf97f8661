#include "ewagg/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ewagg/quadrature.hpp"
#include "ewagg/rng.hpp"

namespace ewagg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double gaussian_pdf(double x, double sigma2) {
    return std::exp(-0.5 * x * x / sigma2) / std::sqrt(2.0 * M_PI * sigma2);
}

double student_t_log_norm(double nu) {
    return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * M_PI);
}

double student_t_pdf(double u, double nu) {
    return std::exp(student_t_log_norm(nu) - 0.5 * (nu + 1.0) * std::log1p(u * u / nu));
}

// Tail mean of the unscaled Student-t: integral of z f_nu(z) dz over [u, inf).
double student_t_tail_mean(double u, double nu) {
    return std::exp(student_t_log_norm(nu)) * nu / (nu - 1.0) *
           std::pow(1.0 + u * u / nu, -0.5 * (nu - 1.0));
}

double student_t_abs_moment(double s, double nu) {
    // E|T|^s = nu^{s/2} Gamma((s+1)/2) Gamma((nu-s)/2) / (sqrt(pi) Gamma(nu/2))
    return std::exp(0.5 * s * std::log(nu) + std::lgamma(0.5 * (s + 1.0)) +
                    std::lgamma(0.5 * (nu - s)) - 0.5 * std::log(M_PI) - std::lgamma(0.5 * nu));
}

} // namespace

NoiseModel NoiseModel::gaussian(double sigma2) {
    if (!(sigma2 > 0.0)) throw invalid_input_error("gaussian: sigma2 must be positive");
    NoiseModel m;
    m.kind_ = Kind::gaussian;
    m.sigma2_ = sigma2;
    return m;
}

NoiseModel NoiseModel::uniform(double half_width) {
    if (!(half_width > 0.0)) throw invalid_input_error("uniform: half width must be positive");
    NoiseModel m;
    m.kind_ = Kind::uniform;
    m.b_ = half_width;
    m.sigma2_ = half_width * half_width / 3.0;
    return m;
}

NoiseModel NoiseModel::bounded_density(std::vector<double> table, double half_width) {
    if (!(half_width > 0.0)) throw invalid_input_error("bounded_density: half width must be positive");
    if (table.size() < 2) throw invalid_input_error("bounded_density: need at least two grid values");
    const std::size_t K = table.size();
    const double h = 2.0 * half_width / static_cast<double>(K - 1);
    double f_min = kInf;
    for (std::size_t k = 0; k < K; ++k) {
        if (!std::isfinite(table[k]) || table[k] <= 0.0) {
            throw invalid_input_error("bounded_density: density must be finite and > 0 on the support");
        }
        if (std::fabs(table[k] - table[K - 1 - k]) > 1e-8) {
            throw invalid_input_error("bounded_density: table must be symmetric");
        }
        f_min = std::min(f_min, table[k]);
    }
    BoundedTable t;
    t.b = half_width;
    t.values = std::move(table);
    t.prefix.resize(K, 0.0);
    for (std::size_t k = 0; k + 1 < K; ++k) {
        t.prefix[k + 1] = t.prefix[k] + 0.5 * h * (t.values[k] + t.values[k + 1]);
    }
    t.total = t.prefix[K - 1];
    if (std::fabs(t.total - 1.0) > 1e-8) {
        throw invalid_input_error("bounded_density: table must integrate to 1 within 1e-8");
    }
    t.f_min = f_min;
    // Per-segment Simpson is exact for z^2 * (linear density).
    double var = 0.0, mean_abs = 0.0;
    for (std::size_t k = 0; k + 1 < K; ++k) {
        const double x0 = -half_width + h * static_cast<double>(k);
        const double x1 = x0 + h;
        const double xm = 0.5 * (x0 + x1);
        const double fm = 0.5 * (t.values[k] + t.values[k + 1]);
        var += h / 6.0 * (x0 * x0 * t.values[k] + 4.0 * xm * xm * fm + x1 * x1 * t.values[k + 1]);
        mean_abs += h / 6.0 * (std::fabs(x0) * t.values[k] + 4.0 * std::fabs(xm) * fm +
                               std::fabs(x1) * t.values[k + 1]);
    }
    t.variance = var;
    t.mean_abs = mean_abs;

    NoiseModel m;
    m.kind_ = Kind::bounded_density;
    m.b_ = half_width;
    m.sigma2_ = var;
    m.table_ = std::move(t);
    return m;
}

NoiseModel NoiseModel::bounded_density_from(const std::function<double(double)>& density,
                                            double half_width, int grid_points) {
    if (grid_points < 2) throw invalid_input_error("bounded_density_from: need >= 2 grid points");
    std::vector<double> table(static_cast<std::size_t>(grid_points));
    const double h = 2.0 * half_width / static_cast<double>(grid_points - 1);
    for (int k = 0; k < grid_points; ++k) {
        table[static_cast<std::size_t>(k)] = density(-half_width + h * k);
    }
    // The piecewise-linear interpolant is the model; rescale it so the table
    // itself integrates to one (the sampled function only approximately does).
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < table.size(); ++k) {
        total += 0.5 * h * (table[k] + table[k + 1]);
    }
    if (!(total > 0.0)) throw invalid_input_error("bounded_density_from: density must be positive");
    for (double& v : table) v /= total;
    return bounded_density(std::move(table), half_width);
}

NoiseModel NoiseModel::double_exponential(double sigma2) {
    if (!(sigma2 > 0.0)) throw invalid_input_error("double_exponential: sigma2 must be positive");
    NoiseModel m;
    m.kind_ = Kind::double_exponential;
    m.sigma2_ = sigma2;
    m.b_ = std::sqrt(0.5 * sigma2); // Laplace scale: variance = 2 b^2
    return m;
}

NoiseModel NoiseModel::rademacher() {
    NoiseModel m;
    m.kind_ = Kind::rademacher;
    m.sigma2_ = 1.0;
    m.b_ = 1.0;
    return m;
}

NoiseModel NoiseModel::power_moment(double s, double moment_bound) {
    if (!(s >= 2.0)) throw invalid_input_error("power_moment: s must be >= 2");
    if (!(moment_bound > 0.0)) throw invalid_input_error("power_moment: moment bound must be positive");
    NoiseModel m;
    m.kind_ = Kind::power_moment;
    m.s_ = s;
    m.B_ = moment_bound;
    m.has_generator_ = false;
    return m;
}

NoiseModel NoiseModel::power_moment_student_t(double s, double nu) {
    if (!(s >= 2.0)) throw invalid_input_error("power_moment_student_t: s must be >= 2");
    if (!(nu > s)) throw invalid_input_error("power_moment_student_t: need nu > s");
    NoiseModel m;
    m.kind_ = Kind::power_moment;
    m.s_ = s;
    m.nu_ = nu;
    m.sigma2_ = 1.0; // rescaled to unit variance
    const double c = std::sqrt((nu - 2.0) / nu);
    m.B_ = std::pow(c, s) * student_t_abs_moment(s, nu);
    return m;
}

NoiseModel NoiseModel::degenerate() {
    NoiseModel m;
    m.kind_ = Kind::degenerate;
    return m;
}

double NoiseModel::sigma2() const {
    if (kind_ == Kind::power_moment && !nu_) {
        throw unsupported_error("sigma2: abstract power-moment model carries only a moment bound");
    }
    return sigma2_;
}

double NoiseModel::half_width() const {
    if (kind_ != Kind::uniform && kind_ != Kind::bounded_density) {
        throw unsupported_error("half_width: model has unbounded support");
    }
    return b_;
}

Vector NoiseModel::sample(Index n, std::uint64_t seed) const {
    if (n < 1) throw invalid_input_error("sample: n must be >= 1");
    if (!has_generator_) {
        throw unsupported_error("sample: model has no generator attached");
    }
    Rng rng(seed);
    Vector out(n);
    switch (kind_) {
        case Kind::gaussian: {
            const double sd = std::sqrt(sigma2_);
            for (Index i = 0; i < n; ++i) out[i] = sd * rng.normal();
            break;
        }
        case Kind::uniform:
            for (Index i = 0; i < n; ++i) out[i] = rng.uniform(-b_, b_);
            break;
        case Kind::bounded_density: {
            const std::size_t K = table_.values.size();
            const double h = 2.0 * b_ / static_cast<double>(K - 1);
            for (Index i = 0; i < n; ++i) {
                const double target = rng.uniform() * table_.total;
                const auto it =
                    std::upper_bound(table_.prefix.begin(), table_.prefix.end(), target);
                std::size_t k = static_cast<std::size_t>(
                    std::max<std::ptrdiff_t>(0, it - table_.prefix.begin() - 1));
                k = std::min(k, K - 2);
                const double r = target - table_.prefix[k];
                const double v = table_.values[k];
                const double slope = (table_.values[k + 1] - table_.values[k]) / h;
                double dt;
                if (std::fabs(slope) < 1e-14 * std::max(1.0, v)) {
                    dt = r / v;
                } else {
                    dt = (-v + std::sqrt(v * v + 2.0 * slope * r)) / slope;
                }
                out[i] = -b_ + h * static_cast<double>(k) + std::clamp(dt, 0.0, h);
            }
            break;
        }
        case Kind::double_exponential:
            for (Index i = 0; i < n; ++i) out[i] = rng.laplace(b_);
            break;
        case Kind::rademacher:
            for (Index i = 0; i < n; ++i) out[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
            break;
        case Kind::power_moment: {
            const double nu = *nu_;
            const double c = std::sqrt((nu - 2.0) / nu);
            for (Index i = 0; i < n; ++i) out[i] = c * rng.student_t(nu);
            break;
        }
        case Kind::degenerate:
            out.setZero();
            break;
    }
    return out;
}

double NoiseModel::m_xi(double x) const {
    switch (kind_) {
        case Kind::gaussian:
            return sigma2_ * gaussian_pdf(x, sigma2_);
        case Kind::uniform: {
            const double t = std::max(0.0, b_ * b_ - x * x);
            return t / (4.0 * b_);
        }
        case Kind::bounded_density: {
            if (x >= b_) return 0.0;
            const double lo = std::max(x, -b_);
            const std::size_t K = table_.values.size();
            const double h = 2.0 * b_ / static_cast<double>(K - 1);
            std::vector<double> nodes(K);
            for (std::size_t k = 0; k < K; ++k) nodes[k] = -b_ + h * static_cast<double>(k);
            const double val = adaptive_simpson_with_breaks(
                [this](double z) { return z * density(z); }, lo, b_, nodes, 1e-9);
            return std::max(0.0, val);
        }
        case Kind::double_exponential: {
            const double a = std::fabs(x);
            return 0.5 * (a + b_) * std::exp(-a / b_);
        }
        case Kind::rademacher:
            return std::fabs(x) <= 1.0 ? 0.5 : 0.0;
        case Kind::power_moment: {
            if (!nu_) {
                throw unsupported_error("m_xi: abstract power-moment model has no distribution");
            }
            const double nu = *nu_;
            const double c = std::sqrt((nu - 2.0) / nu);
            return c * student_t_tail_mean(x / c, nu);
        }
        case Kind::degenerate:
            return 0.0;
    }
    return 0.0;
}

double NoiseModel::g_xi(double x) const {
    switch (kind_) {
        case Kind::gaussian:
            return sigma2_;
        case Kind::uniform:
            return 0.5 * std::max(0.0, b_ * b_ - x * x);
        case Kind::bounded_density: {
            if (std::fabs(x) > b_) return 0.0;
            return m_xi(x) / density(x);
        }
        case Kind::double_exponential:
            return 0.5 * (sigma2_ + std::sqrt(2.0 * sigma2_) * std::fabs(x));
        case Kind::rademacher:
            throw inadmissible_error(
                "g_xi: assumption (A) violated for Rademacher errors; m(z)dz is not "
                "absolutely continuous with respect to the law");
        case Kind::power_moment: {
            if (!nu_) {
                throw unsupported_error("g_xi: abstract power-moment model has no distribution");
            }
            return m_xi(x) / density(x);
        }
        case Kind::degenerate:
            return 0.0;
    }
    return 0.0;
}

double NoiseModel::density(double x) const {
    switch (kind_) {
        case Kind::gaussian:
            return gaussian_pdf(x, sigma2_);
        case Kind::uniform:
            return std::fabs(x) <= b_ ? 0.5 / b_ : 0.0;
        case Kind::bounded_density: {
            if (std::fabs(x) > b_) return 0.0;
            const std::size_t K = table_.values.size();
            const double h = 2.0 * b_ / static_cast<double>(K - 1);
            const double pos = (x + b_) / h;
            std::size_t k = static_cast<std::size_t>(std::clamp(
                std::floor(pos), 0.0, static_cast<double>(K - 2)));
            const double t = pos - static_cast<double>(k);
            return table_.values[k] * (1.0 - t) + table_.values[k + 1] * t;
        }
        case Kind::double_exponential:
            return std::exp(-std::fabs(x) / b_) / (2.0 * b_);
        case Kind::rademacher:
            throw unsupported_error("density: Rademacher law has no Lebesgue density");
        case Kind::power_moment: {
            if (!nu_) {
                throw unsupported_error("density: abstract power-moment model has no distribution");
            }
            const double nu = *nu_;
            const double c = std::sqrt((nu - 2.0) / nu);
            return student_t_pdf(x / c, nu) / c;
        }
        case Kind::degenerate:
            throw unsupported_error("density: degenerate law has no Lebesgue density");
    }
    return 0.0;
}

double NoiseModel::cdf(double x) const {
    switch (kind_) {
        case Kind::gaussian:
            return 0.5 * std::erfc(-x / std::sqrt(2.0 * sigma2_));
        case Kind::uniform:
            return std::clamp(0.5 * (x / b_ + 1.0), 0.0, 1.0);
        case Kind::bounded_density: {
            if (x <= -b_) return 0.0;
            if (x >= b_) return 1.0;
            const std::size_t K = table_.values.size();
            const double h = 2.0 * b_ / static_cast<double>(K - 1);
            const double pos = (x + b_) / h;
            std::size_t k = static_cast<std::size_t>(std::clamp(
                std::floor(pos), 0.0, static_cast<double>(K - 2)));
            const double t = (pos - static_cast<double>(k)) * h;
            const double slope = (table_.values[k + 1] - table_.values[k]) / h;
            return (table_.prefix[k] + table_.values[k] * t + 0.5 * slope * t * t) / table_.total;
        }
        case Kind::double_exponential:
            return x < 0.0 ? 0.5 * std::exp(x / b_) : 1.0 - 0.5 * std::exp(-x / b_);
        case Kind::rademacher:
            if (x < -1.0) return 0.0;
            if (x < 1.0) return 0.5;
            return 1.0;
        case Kind::power_moment:
            throw unsupported_error("cdf: not implemented for power-moment models");
        case Kind::degenerate:
            return x < 0.0 ? 0.0 : 1.0;
    }
    return 0.0;
}

AdmissibilityReport NoiseModel::admissibility(Index) const {
    AdmissibilityReport r;
    switch (kind_) {
        case Kind::gaussian:
            r.assumption_a_holds = true;
            r.g_sup = sigma2_;
            r.n_divisible = true;
            break;
        case Kind::uniform:
            r.assumption_a_holds = true;
            r.g_sup = 0.5 * b_ * b_;
            r.n_divisible = false;
            r.notes = "bounded support; the characteristic-function ratio rules out n-divisibility";
            break;
        case Kind::bounded_density:
            r.assumption_a_holds = true;
            r.g_sup = table_.mean_abs / (2.0 * table_.f_min); // E|xi| / (2 f_min)
            r.n_divisible = false;
            r.notes = "n-divisibility not established for generic bounded densities";
            break;
        case Kind::double_exponential:
            r.assumption_a_holds = false;
            r.g_sup = kInf;
            r.n_divisible = true;
            r.notes = "the derivative g exists but is unbounded; use the n-divisible route";
            break;
        case Kind::rademacher:
            r.assumption_a_holds = false;
            r.g_sup = std::nullopt;
            r.n_divisible = false;
            r.notes = "m(z)dz is not absolutely continuous with respect to the two-point law";
            break;
        case Kind::power_moment:
            r.assumption_a_holds = false;
            r.g_sup = nu_ ? std::optional<double>(kInf) : std::nullopt;
            r.n_divisible = false;
            r.notes = "heavy-tailed moment regime; stable-law alternatives are n-divisible but "
                      "lack second moments, so no usable temperature threshold exists";
            break;
        case Kind::degenerate:
            r.assumption_a_holds = true;
            r.g_sup = 0.0;
            r.n_divisible = true;
            break;
    }
    return r;
}

Vector skorokhod_dummy(const Vector& xi, std::uint64_t seed) {
    const Index n = xi.size();
    if (n < 1) throw invalid_input_error("skorokhod_dummy: empty input");
    if (!xi.allFinite()) throw invalid_input_error("skorokhod_dummy: non-finite entry");
    const double nn = static_cast<double>(n);
    const double p_keep = (2.0 * nn + 1.0) / (2.0 * nn + 2.0);
    Rng rng(seed);
    Vector zeta(n);
    for (Index i = 0; i < n; ++i) {
        const double u = rng.uniform(); // exactly one uniform per coordinate
        zeta[i] = (u < p_keep) ? xi[i] / nn : -2.0 * xi[i] - xi[i] / nn;
    }
    return zeta;
}

Vector n_divisible_zeta_sample(const NoiseModel& model, Index n, Index count,
                               std::uint64_t seed) {
    if (model.kind() != NoiseModel::Kind::double_exponential) {
        throw unsupported_error("n_divisible_zeta_sample: only double-exponential errors supported");
    }
    if (n < 1 || count < 1) throw invalid_input_error("n_divisible_zeta_sample: n, count >= 1");
    const double nn = static_cast<double>(n);
    const double p_zero = nn * nn / ((nn + 1.0) * (nn + 1.0));
    // Laplace component with variance (1+1/n)^2 sigma^2.
    const double scale = (1.0 + 1.0 / nn) * std::sqrt(0.5 * model.sigma2());
    Rng rng(seed);
    Vector zeta(count);
    for (Index i = 0; i < count; ++i) {
        const double u = rng.uniform();
        zeta[i] = (u < p_zero) ? 0.0 : rng.laplace(scale);
    }
    return zeta;
}

double skorokhod_log_mgf(double u, Index n) {
    const double nn = static_cast<double>(n);
    const double alpha0 = 2.0 * nn + 2.0;
    const double a = -2.0 * u * (1.0 + 1.0 / nn);
    double log_term;
    if (a > 30.0) {
        // log((e^a - 1 + alpha0)/alpha0), written to avoid overflow of e^a
        log_term = a - std::log(alpha0) + std::log1p((alpha0 - 1.0) * std::exp(-a));
    } else {
        log_term = std::log1p(std::expm1(a) / alpha0);
    }
    return u / nn + log_term;
}

double skorokhod_log_mgf_bound(double u, Index n) {
    const double nn = static_cast<double>(n);
    return u * u * (nn + 1.0) / (nn * nn);
}

double zeta_mgf(double t, Index n, double sigma2) {
    const double nn = static_cast<double>(n);
    const double denom = 2.0 * nn * nn - (nn + 1.0) * (nn + 1.0) * sigma2 * t * t;
    if (denom <= 0.0) throw precondition_error("zeta_mgf: |t| at or beyond the convergence radius");
    return 1.0 + (2.0 * nn + 1.0) * sigma2 * t * t / denom;
}

} // namespace ewagg
