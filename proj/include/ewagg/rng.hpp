#ifndef EWAGG_RNG_HPP
#define EWAGG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>

#include "ewagg/error.hpp"

// Self-contained random number generation. Standard-library distributions are
// implementation-defined, which would break the bit-identical-output contract,
// so sampling is done with fixed algorithms: xoshiro256++ streams seeded via
// splitmix64, normals through the AS241 inverse CDF (one uniform per draw).

namespace ewagg {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from (parent seed, index).
inline std::uint64_t seed_derive(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0,1); never returns an endpoint.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform on (lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via the inverse CDF; consumes exactly one uniform.
    double normal() { return normal_icdf(uniform()); }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Zero-mean Laplace with scale b (variance 2b^2); one uniform per draw.
    double laplace(double scale) {
        const double u = uniform() - 0.5;
        const double s = (u < 0.0) ? -1.0 : 1.0;
        return -scale * s * std::log1p(-2.0 * std::fabs(u));
    }

    /// Gamma(shape, 1) via Marsaglia-Tsang; consumes a variable number of uniforms.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Student-t with nu degrees of freedom (unscaled).
    double student_t(double nu) {
        const double z = normal();
        const double g = gamma(0.5 * nu) * 2.0; // chi-square_nu
        return z / std::sqrt(g / nu);
    }

    /// Inverse of the standard normal CDF (Wichura's AS241, double precision).
    static double normal_icdf(double p) {
        if (!(p > 0.0 && p < 1.0)) throw invalid_input_error("normal_icdf: p outside (0,1)");
        const double q = p - 0.5;
        double r;
        if (std::fabs(q) <= 0.425) {
            r = 0.180625 - q * q;
            return q *
                   (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                         6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                       1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                     1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
                   (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                         3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                       5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                     4.2313330701600911252e1) * r + 1.0);
        }
        r = (q < 0.0) ? p : 1.0 - p;
        r = std::sqrt(-std::log(r));
        double value;
        if (r <= 5.0) {
            r -= 1.6;
            value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                          2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                        3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                      4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
                    (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                          1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                        6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                      2.05319162663775882187e0) * r + 1.0);
        } else {
            r -= 5.0;
            value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                          1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                        2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                      5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
                    (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                          1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                        1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                      5.99832206555887937690e-1) * r + 1.0);
        }
        return (q < 0.0) ? -value : value;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

} // namespace ewagg

#endif
