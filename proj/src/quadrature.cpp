#include "ewagg/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "ewagg/error.hpp"

namespace ewagg {

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b, double fa,
                     double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    // Second condition: the correction is at rounding level of the panel
    // values, so further splitting cannot improve the estimate.
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol ||
        std::fabs(delta) <= 1e-14 * (std::fabs(left) + std::fabs(right))) {
        return left + right + delta / 15.0;
    }
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    return adaptive_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double adaptive_simpson_with_breaks(const std::function<double(double)>& f, double a, double b,
                                    const std::vector<double>& breaks, double tol,
                                    int max_depth) {
    if (a == b) return 0.0;
    std::vector<double> pts;
    pts.push_back(a);
    for (double x : breaks) {
        if (x > a && x < b) pts.push_back(x);
    }
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double per_panel = tol / static_cast<double>(pts.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        total += adaptive_simpson(f, pts[i], pts[i + 1], per_panel, max_depth);
    }
    return total;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol,
              int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw invalid_input_error("bisect: endpoints do not bracket a root");
    for (int it = 0; it < max_iter && hi - lo > xtol * (1.0 + std::fabs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace ewagg
