#pragma once

#include <cmath>
#include <stdexcept>

namespace hydro {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth,
                    bool& ok) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    // The relative floor stops the recursion chasing round-off once tol has
    // been halved below machine precision.
    if (std::fabs(delta) <= 15.0 * tol || std::fabs(delta) <= 1e-14 * std::fabs(left + right))
        return left + right + delta / 15.0;
    if (depth <= 0) {
        ok = false;
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, ok) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, ok);
}

}  // namespace detail

// Adaptive Simpson with Richardson correction. Works for b < a (sign flips).
// Throws QuadratureError if the result is not finite or some segment still
// fails the error test at the depth limit.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-10, int max_depth = 40) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    bool ok = true;
    // Start from two halves so integrands symmetric about the midpoint are not
    // accepted on the first comparison.
    double m = 0.5 * (a + b);
    double fl = f(0.5 * (a + m)), fr = f(0.5 * (m + b));
    double left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
    double v = detail::simpson_step(f, a, m, fa, fl, fm, left, 0.5 * tol, max_depth - 1, ok) +
               detail::simpson_step(f, m, b, fm, fr, fb, right, 0.5 * tol, max_depth - 1, ok);
    if (!std::isfinite(v)) throw QuadratureError("quadrature produced a non-finite value");
    if (!ok) throw QuadratureError("adaptive Simpson did not converge within the depth limit");
    return v;
}

}  // namespace hydro
