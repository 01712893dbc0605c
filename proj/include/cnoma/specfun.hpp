#pragma once

// Special functions needed by the ergodic-rate expressions. All functions
// throw DomainError for x <= 0 and are accurate to ~1e-13 relative on
// [1e-8, 700].

namespace cnoma {

/// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Upper incomplete gamma function of order zero, Gamma(0, x) = E1(x).
[[nodiscard]] double gamma_upper_0(double x);

/// exp(x) * Gamma(0, x); finite for arguments where Gamma(0, x) underflows.
[[nodiscard]] double gamma_upper_0_scaled(double x);

/// Modified Bessel functions of the second kind, orders 0 and 1.
[[nodiscard]] double bessel_k0(double x);
[[nodiscard]] double bessel_k1(double x);

/// exp(x) * K0(x) and exp(x) * K1(x).
[[nodiscard]] double bessel_k0_scaled(double x);
[[nodiscard]] double bessel_k1_scaled(double x);

}  // namespace cnoma
