#pragma once

#include <cmath>
#include <string>

#include "spdc/errors.hpp"

namespace spdc::numerics {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // accumulated |S2 - S1| / 15 estimate
    bool converged = true;
    int evaluations = 0;
};

namespace detail {

template <class F>
struct SimpsonState {
    const F& f;
    int max_depth;
    QuadratureResult result{};
};

template <class F>
double simpson_recurse(SimpsonState<F>& st, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = st.f(lm);
    const double frm = st.f(rm);
    st.result.evaluations += 2;
    const double h = b - a;
    const double left = h / 12.0 * (fa + 4.0 * flm + fm);
    const double right = h / 12.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
        st.result.error += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    if (depth >= st.max_depth) {
        st.result.converged = false;
        st.result.error += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with Richardson correction.
///
/// The interval is first split into `initial_panels` equal panels so that
/// oscillatory integrands cannot fool the first error estimate. `abs_tol` is
/// the absolute tolerance for the whole integral.
template <class F>
QuadratureResult adaptive_simpson(const F& f, double a, double b, double abs_tol,
                                  int max_depth = 40, int initial_panels = 8) {
    detail::SimpsonState<F> st{f, max_depth};
    if (a == b) return st.result;
    const double panel_tol = abs_tol / initial_panels;
    const double h = (b - a) / initial_panels;
    double x0 = a;
    double f0 = f(x0);
    st.result.evaluations = 1;
    double sum = 0.0;
    for (int i = 0; i < initial_panels; ++i) {
        const double x1 = (i + 1 == initial_panels) ? b : a + (i + 1) * h;
        const double xm = 0.5 * (x0 + x1);
        const double fm = f(xm);
        const double f1 = f(x1);
        st.result.evaluations += 2;
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        sum += detail::simpson_recurse(st, x0, x1, f0, fm, f1, whole, panel_tol, 0);
        x0 = x1;
        f0 = f1;
    }
    st.result.value = sum;
    return st.result;
}

/// Same as adaptive_simpson but throws ConvergenceError when the depth cap is hit.
template <class F>
double integrate(const F& f, double a, double b, double abs_tol, const std::string& what) {
    const QuadratureResult r = adaptive_simpson(f, a, b, abs_tol);
    if (!r.converged) throw ConvergenceError(what + ": adaptive Simpson did not converge", r.error);
    return r.value;
}

}  // namespace spdc::numerics
