#pragma once

#include <cstddef>
#include <functional>

namespace cnoma {

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-8;
  int max_depth = 60;  ///< maximum number of bisections of any panel
  /// The integrand may be singular (integrably) at the lower / upper limit.
  /// Flagged ends are approached through a polynomial change of variable
  /// whose Jacobian vanishes there.
  bool singular_lo = false;
  bool singular_hi = false;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;      ///< estimated absolute error
  bool converged = false;  ///< false if the tolerance was not met (ToleranceNotMet)
  std::size_t evaluations = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature of f over [lo, hi].
/// `hi` may be +infinity, in which case x = lo + u / (1 - u) maps the range
/// onto [0, 1). Throws InvalidArgument unless lo < hi and the tolerances are
/// positive, and NonFiniteSample if f returns NaN or infinity.
[[nodiscard]] QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                                         const QuadratureSpec& spec = {});

}  // namespace cnoma
