#pragma once

#include <functional>

namespace tumor_dde {

struct RootOptions {
    double rel_tol = 1e-12;   // stop when bracket width <= rel_tol*max(1,|x|)
    int max_iter = 200;
    bool polish = true;       // finish with a couple of plain Newton steps
};

// Safeguarded Newton on a bracketed root: Newton steps are taken only while
// they stay inside the current bracket, otherwise the step falls back to
// bisection.  fn(x) and dfn(x) evaluate the function and its derivative;
// the bracket [lo, hi] must satisfy fn(lo)*fn(hi) <= 0.
double newton_bisect(const std::function<double(double)>& fn,
                     const std::function<double(double)>& dfn,
                     double lo, double hi, const RootOptions& opts = {});

// Pure bisection (used as an independent oracle and as the derivative-free
// fallback path).
double bisect(const std::function<double(double)>& fn, double lo, double hi,
              const RootOptions& opts = {});

}  // namespace tumor_dde
