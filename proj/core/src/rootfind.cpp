#include "tumor_dde/rootfind.hpp"

#include <cmath>

#include "tumor_dde/errors.hpp"

namespace tumor_dde {

namespace {

bool converged(double lo, double hi, double rel_tol) {
    const double x = 0.5 * (lo + hi);
    return (hi - lo) <= rel_tol * std::max(1.0, std::abs(x));
}

}  // namespace

double newton_bisect(const std::function<double(double)>& fn,
                     const std::function<double(double)>& dfn,
                     double lo, double hi, const RootOptions& opts) {
    if (lo > hi) std::swap(lo, hi);
    double flo = fn(lo);
    double fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw convergence_error("newton_bisect: bracket does not straddle a root");

    double x = 0.5 * (lo + hi);
    double fx = fn(x);
    for (int it = 0; it < opts.max_iter; ++it) {
        if (fx == 0.0) return x;
        if ((flo < 0.0) == (fx < 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        if (converged(lo, hi, opts.rel_tol)) break;

        const double d = dfn(x);
        double xn = x - fx / d;
        if (!(std::isfinite(xn) && xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        x = xn;
        fx = fn(x);
    }
    x = 0.5 * (lo + hi);
    if (opts.polish) {
        // final Newton polish; keeps the residual near roundoff
        for (int k = 0; k < 2; ++k) {
            const double d = dfn(x);
            const double step = fn(x) / d;
            if (!std::isfinite(step)) break;
            const double xn = x - step;
            if (xn >= lo && xn <= hi) x = xn;
        }
    }
    return x;
}

double bisect(const std::function<double(double)>& fn, double lo, double hi,
              const RootOptions& opts) {
    if (lo > hi) std::swap(lo, hi);
    double flo = fn(lo);
    double fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw convergence_error("bisect: bracket does not straddle a root");
    for (int it = 0; it < 200 && !converged(lo, hi, opts.rel_tol); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace tumor_dde
