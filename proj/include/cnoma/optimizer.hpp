#pragma once

// Per-realization weighted sum rate maximization over (alpha, rho).
//
// For a fixed alpha the strong user's decoding constraint
//     sinr_x2_at_u1(alpha, rho) >= sinr_mrc_at_u2(alpha, rho)
// is equivalent to rho <= rho_tilde(alpha), the smaller root of
//     a rho^2 - b rho + c = 0,
// and on that interval the problem reduces to maximizing
//     f_alpha(rho) = (d - e rho) / (t - rho) * (p + q rho)^w,   w = w2 / w1.
// The derivative numerator of f_alpha is the upward quadratic
//     N(rho) = q w e rho^2 - 2 beta rho + [(d - e t) p + q w t d]
// with discriminant 4 theta, whose smaller root rho_bar is the only interior
// stationary point that can lie in [0, 1). Choosing between rho_bar, 0 and
// rho_tilde gives rho*(alpha) in closed form, leaving a 1D search over alpha.

#include <cstddef>
#include <functional>
#include <string_view>

#include "cnoma/model.hpp"

namespace cnoma {

/// Coefficients of f_alpha for one alpha.
struct InnerCoefficients {
  double d = 0.0;  ///< 1 + mu + alpha * snr1
  double e = 0.0;  ///< 1 + alpha * snr1
  double t = 0.0;  ///< 1 + mu
  double p = 0.0;  ///< 1 + direct-link SINR of U2
  double q = 0.0;  ///< eta * snr1 * g3 / (1 + mu), relay SNR gain per unit rho
};

/// Coefficients of the feasibility quadratic a rho^2 - b rho + c >= 0.
struct BoundaryCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct ThetaBeta {
  double theta = 0.0;
  double beta = 0.0;
};

enum class Branch {
  Interior,    ///< rho* = rho_bar(alpha*)
  Lower,       ///< rho* = 0
  Boundary,    ///< rho* = rho_tilde(alpha*)
  Trivial,     ///< w2 <= w1: alpha -> 1, rho = 0
  Exhaustive,  ///< produced by the 2D grid search
};

[[nodiscard]] std::string_view to_string(Branch b);

struct RhoChoice {
  double rho = 0.0;
  Branch branch = Branch::Boundary;
};

struct OptimizationOutcome {
  DesignPoint design;
  double objective_f = 0.0;  ///< f(alpha*, rho*)
  RateTriple rates;
  Branch branch = Branch::Boundary;
  std::size_t evaluations = 0;
};

/// Largest rho handed out by the solver. With mu = 0 the decoding constraint
/// may stay slack all the way to rho = 1; rho_tilde is capped here instead.
inline constexpr double kRhoCeiling = 1.0 - 1e-9;

struct SolverOptions {
  std::size_t alpha_points = 1000;  ///< uniform alpha grid size
  double alpha_edge = 1e-4;         ///< grid spans [alpha_edge, 1 - alpha_edge]
  double refine_tol = 1e-6;         ///< golden-section bracket width in alpha
  /// Multiplies the denominator q w e of rho_bar. Only used to check that the
  /// validation suite catches a corrupted solver; leave at 1.
  double rho_bar_denominator_scale = 1.0;
};

struct GridSpec2D {
  std::size_t alpha_points = 300;
  std::size_t rho_points = 300;
  double alpha_lo = 1e-4;
  double alpha_hi = 1.0 - 1e-4;
  double rho_lo = 0.0;
  double rho_hi = 1.0 - 1e-4;
};

[[nodiscard]] BoundaryCoefficients boundary_coeffs(const SystemParams& p, const ChannelRealization& ch,
                                                   double alpha);

/// Largest feasible rho for this alpha (see kRhoCeiling). Throws
/// InfeasibleChannel unless g1 > g2.
[[nodiscard]] double rho_tilde(const SystemParams& p, const ChannelRealization& ch, double alpha);

[[nodiscard]] InnerCoefficients inner_coeffs(const SystemParams& p, const ChannelRealization& ch,
                                             double alpha);

/// (1 + sinr_x1) * (1 + sinr_mrc)^(w2/w1).
[[nodiscard]] double f_objective(const SystemParams& p, const ChannelRealization& ch,
                                 const DesignPoint& d);

[[nodiscard]] double f_alpha(const InnerCoefficients& ic, double weight_ratio, double rho);
[[nodiscard]] double log_f_alpha(const InnerCoefficients& ic, double weight_ratio, double rho);

/// Numerator of d f_alpha / d rho; the denominator is positive on [0, 1).
[[nodiscard]] double df_drho_numerator(const InnerCoefficients& ic, double weight_ratio, double rho);

[[nodiscard]] ThetaBeta theta_beta(const InnerCoefficients& ic, double weight_ratio);

/// Smaller root (beta - sqrt(theta)) / (q w e) of the derivative numerator.
/// Negative theta within roundoff of zero is clamped; anything below that
/// raises NumericalFailure. Throws DivisionDegenerate when q w e == 0.
[[nodiscard]] double rho_bar(const InnerCoefficients& ic, double weight_ratio,
                             double denominator_scale = 1.0);

/// Optimal rho for a fixed alpha. Requires g1 > g2 and w2 > w1.
[[nodiscard]] RhoChoice optimal_rho_for_alpha(const SystemParams& p, const ChannelRealization& ch,
                                              double alpha, const SolverOptions& opts = {});

/// 1D search over alpha with rho*(alpha) in closed form.
[[nodiscard]] OptimizationOutcome solve_1d(const SystemParams& p, const ChannelRealization& ch,
                                           const SolverOptions& opts = {});

/// Brute-force grid maximization of w1 C1 + w2 C2 using the raw rate model.
[[nodiscard]] OptimizationOutcome solve_2d_exhaustive(const SystemParams& p,
                                                      const ChannelRealization& ch,
                                                      const GridSpec2D& grid = {});

/// Golden-section search for a maximum of `f` on [lo, hi]. Returns the best
/// abscissa seen; `evaluations` is incremented once per call of `f`.
[[nodiscard]] double golden_section_maximize(const std::function<double(double)>& f, double lo,
                                             double hi, double tol, std::size_t* evaluations = nullptr);

}  // namespace cnoma
