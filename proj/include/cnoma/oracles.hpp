#pragma once

// Slow reference evaluations used to check the production routines. Nothing
// here shares code with the core library: each function works from a
// different representation (integral, series with extended precision,
// bisection) than the routine it is compared against.

#include <functional>

namespace cnoma::reference {

/// exp(x) E1(x) = int_{-inf}^{inf} exp(-e^s) e^s / (x + e^s) ds, trapezoidal
/// rule (spectrally convergent for this analytic, exponentially decaying
/// integrand), extended-precision accumulation.
[[nodiscard]] double scaled_e1_integral(double x);

/// exp(x) K_nu(x) = int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt, trapezoidal rule.
[[nodiscard]] double scaled_bessel_k_integral(double nu, double x);

/// Truncated power series of E1 summed in long double with `terms` terms.
[[nodiscard]] double e1_power_series(double x, int terms);

/// Asymptotic series e^-x / x * sum_k (-1)^k k! / x^k, truncated at the
/// smallest term or `terms`, whichever comes first.
[[nodiscard]] double e1_asymptotic(double x, int terms);

/// Root of a sign-changing function on [lo, hi] by bisection to |hi - lo| < tol.
[[nodiscard]] double bisect(const std::function<double(double)>& f, double lo, double hi,
                            double tol = 1e-15);

}  // namespace cnoma::reference
