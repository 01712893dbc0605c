#include "cnoma/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cnoma/errors.hpp"

namespace cnoma {

namespace {

constexpr double kDiscriminantSlack = 1e-8;

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
}

void require_ordered(const ChannelRealization& ch) {
  if (!(ch.g1 > ch.g2)) {
    throw InfeasibleChannel("channel ordering g1 > g2 violated (g1=" + std::to_string(ch.g1) +
                            ", g2=" + std::to_string(ch.g2) + ")");
  }
}

// d - e t, evaluated as -mu * alpha * snr1 without cancelling 1 + mu + ...
double gain_gap(const InnerCoefficients& ic) { return -(ic.t - 1.0) * (ic.e - 1.0); }

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

}  // namespace

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::Interior: return "interior";
    case Branch::Lower: return "lower";
    case Branch::Boundary: return "boundary";
    case Branch::Trivial: return "trivial";
    case Branch::Exhaustive: return "exhaustive";
  }
  return "unknown";
}

BoundaryCoefficients boundary_coeffs(const SystemParams& p, const ChannelRealization& ch,
                                     double alpha) {
  require_alpha(alpha);
  const double snr1 = p.avg_snr * ch.g1;
  const double snr2 = p.avg_snr * ch.g2;
  const double relay = p.eta * snr1 * ch.g3 / (1.0 + p.mu);
  const double direct = (1.0 - alpha) * snr2 / (alpha * snr2 + 1.0 + p.mu);
  const double x2_gain = (1.0 - alpha) * snr1;

  BoundaryCoefficients bc;
  bc.a = relay * (alpha * snr1 + 1.0);
  bc.b = relay * (alpha * snr1 + p.mu + 1.0) - direct * (alpha * snr1 + 1.0) + x2_gain;
  bc.c = x2_gain - direct * (alpha * snr1 + 1.0 + p.mu);
  return bc;
}

double rho_tilde(const SystemParams& p, const ChannelRealization& ch, double alpha) {
  require_ordered(ch);
  const BoundaryCoefficients bc = boundary_coeffs(p, ch, alpha);

  double disc = bc.b * bc.b - 4.0 * bc.a * bc.c;
  if (disc < 0.0) {
    const double scale = std::max({std::abs(bc.a), std::abs(bc.b), std::abs(bc.c)});
    if (disc < -kDiscriminantSlack * scale * scale) {
      throw NumericalFailure("rho_tilde: negative discriminant " + std::to_string(disc));
    }
    disc = 0.0;
  }
  // c > 0 and b > 0 whenever g1 > g2, so the conjugate form of the smaller
  // root (b - sqrt(disc)) / 2a is free of cancellation and also covers a = 0.
  const double denom = bc.b + std::sqrt(disc);
  if (!(denom > 0.0)) throw NumericalFailure("rho_tilde: degenerate feasibility quadratic");
  const double root = 2.0 * bc.c / denom;
  return std::min(root, kRhoCeiling);
}

InnerCoefficients inner_coeffs(const SystemParams& p, const ChannelRealization& ch, double alpha) {
  require_alpha(alpha);
  const double snr1 = p.avg_snr * ch.g1;
  const double snr2 = p.avg_snr * ch.g2;
  InnerCoefficients ic;
  ic.d = 1.0 + p.mu + alpha * snr1;
  ic.e = 1.0 + alpha * snr1;
  ic.t = 1.0 + p.mu;
  ic.p = 1.0 + (1.0 - alpha) * snr2 / (alpha * snr2 + 1.0 + p.mu);
  ic.q = p.eta * snr1 * ch.g3 / (1.0 + p.mu);
  return ic;
}

double f_objective(const SystemParams& p, const ChannelRealization& ch, const DesignPoint& d) {
  const double x1 = sinr_x1_at_u1(p, ch, d);
  const double mrc = sinr_mrc_at_u2(p, ch, d);
  return (1.0 + x1) * std::pow(1.0 + mrc, p.weight_ratio());
}

double f_alpha(const InnerCoefficients& ic, double weight_ratio, double rho) {
  return std::exp(log_f_alpha(ic, weight_ratio, rho));
}

double log_f_alpha(const InnerCoefficients& ic, double weight_ratio, double rho) {
  // (d - e rho) / (t - rho) == e + (d - e t) / (t - rho)
  const double u1_term = ic.e + gain_gap(ic) / (ic.t - rho);
  return std::log(u1_term) + weight_ratio * std::log(ic.p + ic.q * rho);
}

double df_drho_numerator(const InnerCoefficients& ic, double weight_ratio, double rho) {
  const double gap = gain_gap(ic);
  const double d_minus_e_rho = gap + ic.e * (ic.t - rho);
  return gap * (ic.p + ic.q * rho) + ic.q * weight_ratio * (ic.t - rho) * d_minus_e_rho;
}

ThetaBeta theta_beta(const InnerCoefficients& ic, double weight_ratio) {
  const double w = weight_ratio;
  ThetaBeta tb;
  tb.beta = 0.5 * ic.q * ic.d * (w - 1.0) + 0.5 * ic.q * ic.e * ic.t * (w + 1.0);
  const double constant = gain_gap(ic) * ic.p + ic.q * w * ic.t * ic.d;
  tb.theta = tb.beta * tb.beta - ic.q * w * ic.e * constant;
  return tb;
}

double rho_bar(const InnerCoefficients& ic, double weight_ratio, double denominator_scale) {
  const double lead = ic.q * weight_ratio * ic.e;
  if (lead == 0.0) throw DivisionDegenerate("rho_bar: q * w * e == 0");

  const ThetaBeta tb = theta_beta(ic, weight_ratio);
  const double constant = gain_gap(ic) * ic.p + ic.q * weight_ratio * ic.t * ic.d;
  double theta = tb.theta;
  if (theta < 0.0) {
    const double scale = std::max(tb.beta * tb.beta, std::abs(lead * constant));
    if (theta < -kDiscriminantSlack * scale) {
      throw NumericalFailure("rho_bar: negative theta " + std::to_string(theta));
    }
    theta = 0.0;
  }
  const double root = std::sqrt(theta);
  // (beta - root) / lead == constant / (beta + root); the second form keeps
  // precision when lead * constant << beta^2.
  if (tb.beta > 0.0) return constant / ((tb.beta + root) * denominator_scale);
  return (tb.beta - root) / (lead * denominator_scale);
}

RhoChoice optimal_rho_for_alpha(const SystemParams& p, const ChannelRealization& ch, double alpha,
                                const SolverOptions& opts) {
  if (!(p.w2 > p.w1)) throw InvalidArgument("optimal_rho_for_alpha requires w2 > w1");
  const double upper = rho_tilde(p, ch, alpha);
  const InnerCoefficients ic = inner_coeffs(p, ch, alpha);

  // Without a relay gain f_alpha is non-increasing in rho: splitting only
  // costs U1 signal power.
  if (ic.q == 0.0) return {0.0, Branch::Lower};

  // A zero gain gap leaves the numerator q w e (t - rho)^2 >= 0.
  if (gain_gap(ic) == 0.0) return {upper, Branch::Boundary};

  const double w = p.weight_ratio();
  const ThetaBeta tb = theta_beta(ic, w);
  if (tb.theta > 0.0) {
    const double candidate = rho_bar(ic, w, opts.rho_bar_denominator_scale);
    if (candidate > 0.0 && candidate < upper) return {candidate, Branch::Interior};
    if (candidate <= 0.0) return {0.0, Branch::Lower};
  }
  return {upper, Branch::Boundary};
}

double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                               double tol, std::size_t* evaluations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto eval = [&](double x) {
    if (evaluations) ++*evaluations;
    return f(x);
  };

  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = eval(x1);
  double f2 = eval(x2);
  double best_x = f1 >= f2 ? x1 : x2;
  double best_f = std::max(f1, f2);

  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = eval(x1);
      if (f1 > best_f) best_f = f1, best_x = x1;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = eval(x2);
      if (f2 > best_f) best_f = f2, best_x = x2;
    }
  }
  return best_x;
}

OptimizationOutcome solve_1d(const SystemParams& p, const ChannelRealization& ch,
                             const SolverOptions& opts) {
  validate(p);
  validate(ch);
  require_ordered(ch);
  if (opts.alpha_points < 2) throw InvalidArgument("solve_1d: alpha grid needs >= 2 points");
  if (!(opts.alpha_edge > 0.0 && opts.alpha_edge < 0.5)) {
    throw InvalidArgument("solve_1d: alpha_edge must lie in (0, 0.5)");
  }

  OptimizationOutcome out;
  if (p.w2 <= p.w1) {
    out.design = {1.0 - opts.alpha_edge, 0.0};
    out.branch = Branch::Trivial;
    out.objective_f = f_objective(p, ch, out.design);
    out.rates = rates(p, ch, out.design);
    return out;
  }

  const double w = p.weight_ratio();
  std::size_t evaluations = 0;
  auto profile = [&](double alpha) {
    ++evaluations;
    const RhoChoice choice = optimal_rho_for_alpha(p, ch, alpha, opts);
    return log_f_alpha(inner_coeffs(p, ch, alpha), w, choice.rho);
  };

  const std::vector<double> grid = linspace(opts.alpha_edge, 1.0 - opts.alpha_edge, opts.alpha_points);
  std::size_t best = 0;
  double best_value = profile(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = profile(grid[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  double alpha_star = grid[best];
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  const double refined =
      golden_section_maximize(profile, lo, hi, opts.refine_tol);
  if (profile(refined) > best_value) alpha_star = refined;

  const RhoChoice choice = optimal_rho_for_alpha(p, ch, alpha_star, opts);
  out.design = {alpha_star, choice.rho};
  out.branch = choice.branch;
  out.objective_f = f_objective(p, ch, out.design);
  out.rates = rates(p, ch, out.design);
  out.evaluations = evaluations;
  return out;
}

OptimizationOutcome solve_2d_exhaustive(const SystemParams& p, const ChannelRealization& ch,
                                        const GridSpec2D& grid) {
  validate(p);
  validate(ch);
  if (grid.alpha_points < 2 || grid.rho_points < 2) {
    throw InvalidArgument("solve_2d_exhaustive: need >= 2 grid points per axis");
  }
  const std::vector<double> alphas = linspace(grid.alpha_lo, grid.alpha_hi, grid.alpha_points);
  const std::vector<double> rhos = linspace(grid.rho_lo, grid.rho_hi, grid.rho_points);

  OptimizationOutcome out;
  out.branch = Branch::Exhaustive;
  bool first = true;
  // Row-major scan with strict improvement: ties resolve to the smallest
  // alpha, then the smallest rho.
  for (double alpha : alphas) {
    for (double rho : rhos) {
      const DesignPoint d{alpha, rho};
      const RateTriple r = rates(p, ch, d);
      ++out.evaluations;
      if (first || r.weighted_sum > out.rates.weighted_sum) {
        out.rates = r;
        out.design = d;
        first = false;
      }
    }
  }
  out.objective_f = f_objective(p, ch, out.design);
  return out;
}

}  // namespace cnoma
