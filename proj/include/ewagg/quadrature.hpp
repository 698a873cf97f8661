#ifndef EWAGG_QUADRATURE_HPP
#define EWAGG_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace ewagg {

/// Adaptive Simpson integration of f over [a,b] to absolute tolerance tol.
/// Exact for cubics on each panel; recursion depth is capped at max_depth.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 48);

/// Adaptive Simpson with an initial partition at the given break points.
/// Breaks outside (a,b) are ignored. Needed when the integrand has sharp
/// features a full-interval probe would step over.
double adaptive_simpson_with_breaks(const std::function<double(double)>& f, double a, double b,
                                    const std::vector<double>& breaks, double tol,
                                    int max_depth = 48);

/// Bisection solve of f(x)=0 on [lo,hi]; f(lo) and f(hi) must bracket a root.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol = 1e-13, int max_iter = 200);

} // namespace ewagg

#endif
