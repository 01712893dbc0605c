#pragma once

// Ergodic rates for a fixed design point over i.i.d. Rayleigh fading
// (exponential power gains with means var1, var2, var3).
//
// U1:  C1e = 1/(2 ln 2) * exp(k) Gamma(0, k),  k = (1 - rho + mu) / ((1 - rho) alpha snr var1).
// U2:  C2e = 1/(2 ln 2) * int_0^{(1-alpha)/alpha} Pr[Y > z] Pr[W > z] / (1 + z) dz,
//      with Y the x2 SINR at U1 and W = W1 + W2 the post-MRC SINR at U2. The
//      product form treats Y and W as independent even though both depend on
//      g1; the gap closes at high SNR.

#include <cstddef>
#include <optional>
#include <string_view>

#include "cnoma/model.hpp"
#include "cnoma/quadrature.hpp"

namespace cnoma {

enum class RateSource { Analytic, HighSnr, MonteCarlo };

[[nodiscard]] std::string_view to_string(RateSource s);

struct RateErrors {
  double c1 = 0.0;
  double c2 = 0.0;
  double c_sum = 0.0;
};

struct ErgodicReport {
  double c1_e = 0.0;
  double c2_e = 0.0;
  double c_sum_e = 0.0;
  RateSource source = RateSource::Analytic;
  std::optional<double> quadrature_error;
  std::optional<std::size_t> sample_count;
  std::optional<RateErrors> standard_errors;  ///< Monte Carlo only
};

/// Default tolerances for the U2 integrals.
[[nodiscard]] QuadratureSpec ergodic_quadrature_defaults();

/// The Gamma(0, k) argument of the U1 closed form.
[[nodiscard]] double u1_rate_parameter(const SystemParams& p, const DesignPoint& d);

[[nodiscard]] double ergodic_rate_u1(const SystemParams& p, const DesignPoint& d);

/// Same quantity by direct quadrature of int_0^inf (1 - F_X(x)) / (1 + x) dx.
[[nodiscard]] QuadratureResult ergodic_rate_u1_by_quadrature(const SystemParams& p,
                                                             const DesignPoint& d,
                                                             const QuadratureSpec& spec = {});

/// Pr[Y > z] for the x2 SINR at U1.
[[nodiscard]] double prob_y_exceeds(const SystemParams& p, const DesignPoint& d, double z);

/// Rate parameter lambda = (1 + mu) / (rho eta snr var1 var3) of the relay term W2.
[[nodiscard]] double relay_rate_parameter(const SystemParams& p, const DesignPoint& d);

/// Density and CDF of the relay-link SNR W2 (a scaled product of two
/// exponentials). Require rho > 0.
[[nodiscard]] double relay_snr_density(const SystemParams& p, const DesignPoint& d, double y);
[[nodiscard]] double relay_snr_cdf(const SystemParams& p, const DesignPoint& d, double z);

/// CDF of the direct-link SINR W1 of U2.
[[nodiscard]] double direct_sinr_cdf(const SystemParams& p, const DesignPoint& d, double z);

/// Pr[W > z] for the post-combining SINR at U2. For rho = 0 only the direct
/// link contributes and the closed form is used.
[[nodiscard]] double prob_w_exceeds(const SystemParams& p, const DesignPoint& d, double z,
                                    const QuadratureSpec& spec = ergodic_quadrature_defaults());

[[nodiscard]] QuadratureResult ergodic_rate_u2(
    const SystemParams& p, const DesignPoint& d,
    const QuadratureSpec& spec = ergodic_quadrature_defaults());

/// Analytic report: C1e closed form, C2e by quadrature, C_sum = w1 C1e + w2 C2e.
[[nodiscard]] ErgodicReport ergodic_weighted_sum(
    const SystemParams& p, const DesignPoint& d,
    const QuadratureSpec& spec = ergodic_quadrature_defaults());

// High-SNR approximations.
[[nodiscard]] double high_snr_u1(const SystemParams& p, const DesignPoint& d);
[[nodiscard]] double high_snr_u2(const SystemParams& p, const DesignPoint& d);

struct HighSnrSum {
  double two_term = 0.0;      ///< w1/2 log2(snr) + w2/2 log2(1/alpha)
  double leading_term = 0.0;  ///< w1/2 log2(snr)
};
[[nodiscard]] HighSnrSum high_snr_sum(const SystemParams& p, const DesignPoint& d);

/// High-SNR report; c_sum_e carries the two-term scaling law.
[[nodiscard]] ErgodicReport high_snr_report(const SystemParams& p, const DesignPoint& d);

}  // namespace cnoma
