#include "cnoma/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cnoma/errors.hpp"
#include "cnoma/specfun.hpp"

namespace cnoma {

namespace {

constexpr double kInvTwoLn2 = 0.5 / std::numbers::ln2;

void require_design(const SystemParams& p, const DesignPoint& d) {
  validate(p);
  if (!(d.alpha > 0.0 && d.alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (!(d.rho >= 0.0 && d.rho < 1.0)) throw DomainError("rho must lie in [0, 1)");
}

double sinr_ceiling(const DesignPoint& d) { return (1.0 - d.alpha) / d.alpha; }

// Pr[W1 > x] for the direct-link SINR of U2.
double direct_tail(const SystemParams& p, const DesignPoint& d, double x) {
  if (x <= 0.0) return 1.0;
  if (x >= sinr_ceiling(d)) return 0.0;
  const double room = 1.0 - d.alpha - d.alpha * x;
  if (room <= 0.0) return 0.0;
  return std::exp(-(1.0 + p.mu) * x / (p.avg_snr * p.var2 * room));
}

// Pr[W2 > z] = 2 sqrt(lambda z) K1(2 sqrt(lambda z)).
double relay_tail(double lambda, double z) {
  if (z <= 0.0) return 1.0;
  const double u = std::sqrt(lambda * z);
  return 2.0 * u * bessel_k1(2.0 * u);
}

QuadratureSpec tightened(const QuadratureSpec& spec) {
  QuadratureSpec inner = spec;
  inner.abs_tol = spec.abs_tol * 1e-2;
  inner.rel_tol = spec.rel_tol * 1e-2;
  return inner;
}

}  // namespace

std::string_view to_string(RateSource s) {
  switch (s) {
    case RateSource::Analytic: return "analytic";
    case RateSource::HighSnr: return "high-snr";
    case RateSource::MonteCarlo: return "monte-carlo";
  }
  return "unknown";
}

QuadratureSpec ergodic_quadrature_defaults() {
  QuadratureSpec spec;
  spec.rel_tol = 1e-8;
  spec.abs_tol = 1e-12;
  spec.max_depth = 60;
  return spec;
}

double u1_rate_parameter(const SystemParams& p, const DesignPoint& d) {
  require_design(p, d);
  return (1.0 - d.rho + p.mu) / ((1.0 - d.rho) * d.alpha * p.avg_snr * p.var1);
}

double ergodic_rate_u1(const SystemParams& p, const DesignPoint& d) {
  return kInvTwoLn2 * gamma_upper_0_scaled(u1_rate_parameter(p, d));
}

QuadratureResult ergodic_rate_u1_by_quadrature(const SystemParams& p, const DesignPoint& d,
                                               const QuadratureSpec& spec) {
  const double k = u1_rate_parameter(p, d);
  QuadratureResult r = integrate(
      [k](double x) { return std::exp(-k * x) / (1.0 + x); }, 0.0,
      std::numeric_limits<double>::infinity(), spec);
  r.value *= kInvTwoLn2;
  r.error *= kInvTwoLn2;
  return r;
}

double prob_y_exceeds(const SystemParams& p, const DesignPoint& d, double z) {
  require_design(p, d);
  if (!(z >= 0.0)) throw DomainError("prob_y_exceeds: z must be >= 0");
  if (z >= sinr_ceiling(d)) return 0.0;
  const double room = 1.0 - d.alpha - d.alpha * z;
  if (room <= 0.0) return 0.0;
  return std::exp(-(1.0 - d.rho + p.mu) * z / (p.avg_snr * p.var1 * (1.0 - d.rho) * room));
}

double relay_rate_parameter(const SystemParams& p, const DesignPoint& d) {
  require_design(p, d);
  if (!(d.rho > 0.0)) throw DomainError("relay link is inactive for rho = 0");
  return (1.0 + p.mu) / (d.rho * p.eta * p.avg_snr * p.var1 * p.var3);
}

double relay_snr_density(const SystemParams& p, const DesignPoint& d, double y) {
  const double lambda = relay_rate_parameter(p, d);
  if (!(y > 0.0)) throw DomainError("relay_snr_density: y must be > 0");
  return 2.0 * lambda * bessel_k0(2.0 * std::sqrt(lambda * y));
}

double relay_snr_cdf(const SystemParams& p, const DesignPoint& d, double z) {
  const double lambda = relay_rate_parameter(p, d);
  return 1.0 - relay_tail(lambda, z);
}

double direct_sinr_cdf(const SystemParams& p, const DesignPoint& d, double z) {
  require_design(p, d);
  return 1.0 - direct_tail(p, d, z);
}

double prob_w_exceeds(const SystemParams& p, const DesignPoint& d, double z,
                      const QuadratureSpec& spec) {
  require_design(p, d);
  if (!(z >= 0.0)) throw DomainError("prob_w_exceeds: z must be >= 0");
  if (z == 0.0) return 1.0;
  if (d.rho == 0.0) return direct_tail(p, d, z);

  const double lambda = relay_rate_parameter(p, d);
  const double sqrt_lambda = std::sqrt(lambda);
  // W > z either through W2 alone, or W2 = y <= z and W1 > z - y; the
  // second term vanishes for z - y beyond the direct-link SINR ceiling.
  const double lower = std::max(0.0, z - sinr_ceiling(d));
  QuadratureSpec inner = spec;
  inner.singular_lo = lower == 0.0;
  inner.singular_hi = false;
  const QuadratureResult conv = integrate(
      [&](double y) {
        return direct_tail(p, d, z - y) * 2.0 * lambda * bessel_k0(2.0 * sqrt_lambda * std::sqrt(y));
      },
      lower, z, inner);
  return std::clamp(relay_tail(lambda, z) + conv.value, 0.0, 1.0);
}

QuadratureResult ergodic_rate_u2(const SystemParams& p, const DesignPoint& d,
                                 const QuadratureSpec& spec) {
  require_design(p, d);
  const QuadratureSpec inner = tightened(spec);
  QuadratureSpec outer = spec;
  // Pr[W > z] behaves like 1 + c z ln z near the origin.
  outer.singular_lo = true;
  outer.singular_hi = false;
  QuadratureResult r = integrate(
      [&](double z) {
        const double y_tail = prob_y_exceeds(p, d, z);
        if (y_tail == 0.0) return 0.0;
        return y_tail * prob_w_exceeds(p, d, z, inner) / (1.0 + z);
      },
      0.0, sinr_ceiling(d), outer);
  r.value = std::max(0.0, r.value) * kInvTwoLn2;
  r.error *= kInvTwoLn2;
  return r;
}

ErgodicReport ergodic_weighted_sum(const SystemParams& p, const DesignPoint& d,
                                   const QuadratureSpec& spec) {
  ErgodicReport report;
  report.source = RateSource::Analytic;
  report.c1_e = ergodic_rate_u1(p, d);
  const QuadratureResult c2 = ergodic_rate_u2(p, d, spec);
  report.c2_e = c2.value;
  report.quadrature_error = c2.error;
  report.c_sum_e = p.w1 * report.c1_e + p.w2 * report.c2_e;
  return report;
}

double high_snr_u1(const SystemParams& p, const DesignPoint& d) {
  const double k = u1_rate_parameter(p, d);
  return kInvTwoLn2 * (-kEulerGamma - std::log(k) + k);
}

double high_snr_u2(const SystemParams& p, const DesignPoint& d) {
  require_design(p, d);
  return half_rate(sinr_ceiling(d));
}

HighSnrSum high_snr_sum(const SystemParams& p, const DesignPoint& d) {
  require_design(p, d);
  HighSnrSum s;
  s.leading_term = 0.5 * p.w1 * std::log2(p.avg_snr);
  s.two_term = s.leading_term + 0.5 * p.w2 * std::log2(1.0 / d.alpha);
  return s;
}

ErgodicReport high_snr_report(const SystemParams& p, const DesignPoint& d) {
  ErgodicReport report;
  report.source = RateSource::HighSnr;
  report.c1_e = high_snr_u1(p, d);
  report.c2_e = high_snr_u2(p, d);
  report.c_sum_e = high_snr_sum(p, d).two_term;
  return report;
}

}  // namespace cnoma
