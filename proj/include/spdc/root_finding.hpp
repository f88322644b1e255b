#pragma once

#include <cmath>
#include <stdexcept>

#include "spdc/errors.hpp"

namespace spdc::numerics {

struct RootResult {
    double x = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Bracketing root finder: bisection safeguarding secant steps.
///
/// Requires f(lo) and f(hi) of opposite sign. Iterates until |f(x)| <= ftol or
/// the bracket collapses below xtol. Each secant proposal is accepted only if it
/// falls strictly inside the current bracket; otherwise the midpoint is used, so
/// the bracket shrinks monotonically and the result never depends on a starting
/// guess.
template <class F>
RootResult find_root(F&& f, double lo, double hi, double ftol, double xtol = 1e-15,
                     int max_iter = 500) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return {lo, 0.0, 0};
    if (fhi == 0.0) return {hi, 0.0, 0};
    if (std::signbit(flo) == std::signbit(fhi))
        throw std::domain_error("find_root: interval does not bracket a sign change");

    bool last_was_secant = false;
    for (int it = 1; it <= max_iter; ++it) {
        double x = 0.5 * (lo + hi);
        if (!last_was_secant) {
            const double s = hi - fhi * (hi - lo) / (fhi - flo);
            if (s > lo && s < hi) {
                x = s;
                last_was_secant = true;
            }
        } else {
            // alternate with a bisection so slow one-sided secant convergence cannot stall
            last_was_secant = false;
        }
        const double fx = f(x);
        if (std::abs(fx) <= ftol || (hi - lo) <= xtol) return {x, fx, it};
        if (std::signbit(fx) == std::signbit(flo)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    const double x = 0.5 * (lo + hi);
    throw ConvergenceError("find_root: iteration limit reached", std::abs(f(x)));
}

}  // namespace spdc::numerics
