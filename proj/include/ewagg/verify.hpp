#ifndef EWAGG_VERIFY_HPP
#define EWAGG_VERIFY_HPP

#include <string>
#include <vector>

namespace ewagg {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;     // measured quantity
    double threshold = 0.0; // limit it was compared against
    std::string detail;
};

/// Numeric verification bundles with fixed internal seeds. Suites:
/// noise, skorokhod, bounds, prior, appendix.
std::vector<CheckResult> verify_noise();
std::vector<CheckResult> verify_skorokhod();
std::vector<CheckResult> verify_bounds();
std::vector<CheckResult> verify_prior();
std::vector<CheckResult> verify_appendix();

std::vector<CheckResult> verify_suite(const std::string& name);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);

} // namespace ewagg

#endif
