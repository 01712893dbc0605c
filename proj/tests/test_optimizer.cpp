#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cnoma/errors.hpp"
#include "cnoma/model.hpp"
#include "cnoma/optimizer.hpp"
#include "cnoma/oracles.hpp"

using namespace cnoma;

namespace {

struct Instance {
  SystemParams p;
  ChannelRealization ch;
};

Instance random_instance(std::mt19937_64& rng, bool allow_zero_mu = true) {
  static constexpr double kRatios[] = {1.5, 2.0, 5.0, 10.0};
  std::uniform_int_distribution<int> snr_db(0, 40);
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> mu(0.0, 1.0);
  std::exponential_distribution<double> g(1.0);
  Instance in;
  in.p.avg_snr = db_to_linear(snr_db(rng));
  in.p.w2 = kRatios[pick(rng)];
  in.p.mu = allow_zero_mu && pick(rng) == 0 ? 0.0 : mu(rng) + 0.05;
  do {
    in.ch = {g(rng), g(rng), g(rng)};
    if (in.ch.g1 < in.ch.g2) std::swap(in.ch.g1, in.ch.g2);
  } while (!(in.ch.g1 > in.ch.g2));
  return in;
}

double x2_minus_mrc(const Instance& in, double alpha, double rho) {
  const DesignPoint d{alpha, rho};
  return sinr_x2_at_u1(in.p, in.ch, d) - sinr_mrc_at_u2(in.p, in.ch, d);
}

SystemParams base(double snr, double mu) {
  SystemParams p;
  p.avg_snr = snr;
  p.mu = mu;
  return p;
}

// Fits N(rho) = A rho^2 + B rho + C through three evaluations.
struct Quadratic {
  double a, b, c;
};
Quadratic fit_numerator(const InnerCoefficients& ic, double w) {
  const double n0 = df_drho_numerator(ic, w, 0.0);
  const double np = df_drho_numerator(ic, w, 1.0);
  const double nm = df_drho_numerator(ic, w, -1.0);
  return {(np + nm) / 2.0 - n0, (np - nm) / 2.0, n0};
}

}  // namespace

TEST_CASE("rho_tilde") {
  SUBCASE("equals the bisection root of the SINR crossing") {
    Instance in;
    in.p = base(100.0, 0.5);
    in.ch = {2.0, 0.5, 1.0};
    const double alpha = 0.3;
    const double root =
        reference::bisect([&](double r) { return x2_minus_mrc(in, alpha, r); }, 0.0, 1.0 - 1e-12);
    CHECK(std::abs(rho_tilde(in.p, in.ch, alpha) - root) < 1e-9);
  }
  SUBCASE("vanishing relay gain without conversion noise leaves the constraint inactive") {
    Instance in;
    in.p = base(100.0, 0.0);
    for (double g3 : {1e-4, 1e-6, 1e-9, 1e-12}) {
      in.ch = {2.0, 0.5, g3};
      const double rt = rho_tilde(in.p, in.ch, 0.3);
      CHECK(rt > 1.0 - 1e-6);
      CHECK(x2_minus_mrc(in, 0.3, 1.0 - 1e-6) > 0.0);
    }
  }
  SUBCASE("strictly positive when g1 > g2") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> a(1e-3, 1.0 - 1e-3);
    for (int i = 0; i < 1000; ++i) {
      const Instance in = random_instance(rng);
      const double alpha = a(rng);
      CHECK(x2_minus_mrc(in, alpha, 0.0) > 0.0);
      CHECK(rho_tilde(in.p, in.ch, alpha) > 0.0);
    }
  }
  SUBCASE("requires the channel ordering") {
    CHECK_THROWS_AS((void)rho_tilde(base(10.0, 1.0), {0.5, 0.5, 1.0}, 0.3), InfeasibleChannel);
    CHECK_THROWS_AS((void)rho_tilde(base(10.0, 1.0), {0.4, 0.5, 1.0}, 0.3), InfeasibleChannel);
  }
}

TEST_CASE("rho <= rho_tilde iff U1 decodes x2 at least as well as U2") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> a(1e-3, 1.0 - 1e-3);
  std::uniform_real_distribution<double> r(0.0, 1.0 - 1e-6);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const Instance in = random_instance(rng);
    const double alpha = a(rng);
    const double rt = rho_tilde(in.p, in.ch, alpha);
    for (int j = 0; j < 100; ++j) {
      const double rho = r(rng);
      const DesignPoint d{alpha, rho};
      const double mrc = sinr_mrc_at_u2(in.p, in.ch, d);
      const double gap = (sinr_x2_at_u1(in.p, in.ch, d) - mrc) / (1.0 + mrc);
      if (std::abs(gap) < 1e-8) continue;  // boundary band
      if ((rho <= rt) != (gap > 0.0)) ++mismatches;
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("inner_coeffs") {
  const InnerCoefficients ic = inner_coeffs(base(40.0, 1.0), {0.5, 0.1, 0.5}, 0.25);
  CHECK(ic.d == doctest::Approx(7.0));
  CHECK(ic.e == doctest::Approx(6.0));
  CHECK(ic.t == doctest::Approx(2.0));
  CHECK(ic.q == doctest::Approx(5.0));

  const InnerCoefficients z = inner_coeffs(base(40.0, 0.0), {0.5, 0.1, 0.5}, 0.25);
  CHECK(z.d == z.e);
  CHECK(z.t == 1.0);
}

TEST_CASE("f_objective") {
  SystemParams p = base(1.0, 0.0);
  CHECK(f_objective(p, {0.0, 0.0, 0.0}, {0.25, 0.0}) == 1.0);
  // sinr_x1 = 3 and sinr_mrc = 1 on this channel.
  const ChannelRealization ch{12.0, 2.0, 1.0};
  p.w2 = 1.0;
  CHECK(f_objective(p, ch, {0.25, 0.0}) == doctest::Approx(8.0).epsilon(1e-14));
  p.w2 = 2.0;
  CHECK(f_objective(p, ch, {0.25, 0.0}) == doctest::Approx(16.0).epsilon(1e-14));
}

TEST_CASE("f_alpha agrees with the objective on the same alpha") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(1e-3, 1.0 - 1e-3);
  for (int i = 0; i < 500; ++i) {
    const Instance in = random_instance(rng);
    const double alpha = u(rng), rho = u(rng);
    const InnerCoefficients ic = inner_coeffs(in.p, in.ch, alpha);
    const double f = f_objective(in.p, in.ch, {alpha, rho});
    CHECK(f_alpha(ic, in.p.weight_ratio(), rho) == doctest::Approx(f).epsilon(1e-12));
    CHECK(log_f_alpha(ic, in.p.weight_ratio(), rho) == doctest::Approx(std::log(f)).epsilon(1e-12));
  }
}

TEST_CASE("df_drho_numerator") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(1e-3, 1.0 - 1e-3);
  SUBCASE("without conversion noise it is q w (1 - rho)(d - e rho), positive") {
    for (int i = 0; i < 200; ++i) {
      Instance in = random_instance(rng);
      in.p.mu = 0.0;
      const InnerCoefficients ic = inner_coeffs(in.p, in.ch, u(rng));
      const double w = in.p.weight_ratio();
      const double rho = u(rng);
      const double expected = ic.q * w * (1.0 - rho) * (ic.d - ic.e * rho);
      CHECK(df_drho_numerator(ic, w, rho) == doctest::Approx(expected).epsilon(1e-10));
      CHECK(df_drho_numerator(ic, w, rho) > 0.0);
    }
  }
  SUBCASE("without relay gain it is (d - e t) p, non-positive") {
    for (int i = 0; i < 200; ++i) {
      Instance in = random_instance(rng);
      in.ch.g3 = 0.0;
      const double alpha = u(rng);
      const InnerCoefficients ic = inner_coeffs(in.p, in.ch, alpha);
      const double expected = -in.p.mu * alpha * in.p.avg_snr * in.ch.g1 * ic.p;
      CHECK(df_drho_numerator(ic, in.p.weight_ratio(), u(rng)) ==
            doctest::Approx(expected).epsilon(1e-12));
      CHECK(df_drho_numerator(ic, in.p.weight_ratio(), u(rng)) <= 0.0);
    }
  }
  SUBCASE("sign matches a finite-difference slope of f_alpha") {
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
      const Instance in = random_instance(rng);
      const InnerCoefficients ic = inner_coeffs(in.p, in.ch, u(rng));
      const double w = in.p.weight_ratio();
      const double rho = u(rng) * 0.98;
      const double n = df_drho_numerator(ic, w, rho);
      const double h = 1e-6;
      const double slope = (log_f_alpha(ic, w, rho + h) - log_f_alpha(ic, w, rho - h)) / (2 * h);
      const Quadratic quad = fit_numerator(ic, w);
      const double size = std::abs(quad.a) + std::abs(quad.b) + std::abs(quad.c);
      if (std::abs(n) < 1e-6 * size) continue;  // too close to a root to resolve
      CHECK((n > 0.0) == (slope > 0.0));
      ++checked;
    }
    CHECK(checked > 400);
  }
}

TEST_CASE("theta_beta") {
  SUBCASE("no relay gain") {
    const InnerCoefficients ic = inner_coeffs(base(10.0, 1.0), {2.0, 0.5, 0.0}, 0.3);
    const ThetaBeta tb = theta_beta(ic, 3.0);
    CHECK(tb.beta == 0.0);
    CHECK(tb.theta == 0.0);
  }
  SUBCASE("unit weight ratio") {
    const InnerCoefficients ic = inner_coeffs(base(10.0, 1.0), {2.0, 0.5, 1.0}, 0.3);
    CHECK(theta_beta(ic, 1.0).beta == doctest::Approx(ic.q * ic.e * ic.t).epsilon(1e-14));
  }
  SUBCASE("4 theta is the discriminant of the expanded numerator") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int i = 0; i < 200; ++i) {
      Instance in;
      in.p = base(std::pow(10.0, 2.0 * u(rng)), u(rng));
      in.p.w2 = 1.0 + 5.0 * u(rng);
      in.ch = {1.0 + u(rng), u(rng), u(rng)};
      const InnerCoefficients ic = inner_coeffs(in.p, in.ch, u(rng));
      const double w = in.p.weight_ratio();
      const Quadratic quad = fit_numerator(ic, w);
      const double disc = quad.b * quad.b - 4.0 * quad.a * quad.c;
      CHECK(4.0 * theta_beta(ic, w).theta == doctest::Approx(disc).epsilon(1e-10));
    }
  }
}

TEST_CASE("rho_bar") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(1e-3, 1.0 - 1e-3);
  SUBCASE("is a local maximum of f_alpha and a root of the numerator") {
    int probed = 0;
    for (int i = 0; i < 2000; ++i) {
      const Instance in = random_instance(rng, false);
      const InnerCoefficients ic = inner_coeffs(in.p, in.ch, u(rng));
      const double w = in.p.weight_ratio();
      const ThetaBeta tb = theta_beta(ic, w);
      REQUIRE(tb.theta > 0.0);
      const double rb = rho_bar(ic, w);
      const Quadratic quad = fit_numerator(ic, w);
      const double scale =
          std::max({std::abs(quad.a) * rb * rb, std::abs(quad.b * rb), std::abs(quad.c)});
      CHECK(std::abs(df_drho_numerator(ic, w, rb)) < 1e-9 * scale);
      const double eps = 1e-4;
      if (rb > eps && rb < 1.0 - eps) {
        const double f0 = f_alpha(ic, w, rb);
        CHECK(f_alpha(ic, w, rb - eps) < f0);
        CHECK(f_alpha(ic, w, rb + eps) < f0);
        ++probed;
      }
    }
    CHECK(probed > 50);
  }
  SUBCASE("stays below t as the weight ratio grows") {
    const InnerCoefficients ic = inner_coeffs(base(100.0, 0.5), {2.0, 0.5, 1.0}, 0.3);
    double previous = -1.0;
    for (double w = 1.5; w < 1e6; w *= 2.0) {
      const double rb = rho_bar(ic, w);
      CHECK(rb <= ic.t);
      // Fine-grid argmax of f_alpha on [0, t) lands next to rho_bar when it is interior.
      if (rb > 0.0 && rb < 1.0) {
        double best = 0.0, best_f = -1.0;
        for (int k = 0; k <= 20000; ++k) {
          const double r = k / 20000.0 * (1.0 - 1e-9);
          if (f_alpha(ic, w, r) > best_f) best_f = f_alpha(ic, w, r), best = r;
        }
        CHECK(std::abs(best - rb) < 1e-4);
      }
      CHECK(rb >= previous - 1e-12);
      previous = rb;
    }
  }
  SUBCASE("degenerate without relay gain") {
    const InnerCoefficients ic = inner_coeffs(base(10.0, 1.0), {2.0, 0.5, 0.0}, 0.3);
    CHECK_THROWS_AS((void)rho_bar(ic, 2.0), DivisionDegenerate);
  }
}

TEST_CASE("optimal_rho_for_alpha") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(1e-3, 1.0 - 1e-3);
  const auto grid_argmax = [](const SystemParams& p, const ChannelRealization& ch, double alpha,
                              double upper) {
    const InnerCoefficients ic = inner_coeffs(p, ch, alpha);
    double best = 0.0, best_f = -1.0;
    for (int k = 0; k <= 2000; ++k) {
      const double r = upper * k / 2000.0;
      const double f = f_alpha(ic, p.weight_ratio(), r);
      if (f > best_f) best_f = f, best = r;
    }
    return std::pair{best, best_f};
  };

  SUBCASE("broken relay link: no splitting") {
    SystemParams p = base(100.0, 1.0);
    p.w2 = 3.0;
    const ChannelRealization ch{2.0, 0.5, 0.0};
    const RhoChoice c = optimal_rho_for_alpha(p, ch, 0.3);
    CHECK(c.branch == Branch::Lower);
    CHECK(c.rho == 0.0);
    CHECK(grid_argmax(p, ch, 0.3, rho_tilde(p, ch, 0.3)).first == 0.0);
  }
  SUBCASE("no conversion noise: boundary") {
    for (int i = 0; i < 200; ++i) {
      Instance in = random_instance(rng);
      in.p.mu = 0.0;
      const double alpha = u(rng);
      const RhoChoice c = optimal_rho_for_alpha(in.p, in.ch, alpha);
      CHECK(c.branch == Branch::Boundary);
      CHECK(c.rho == rho_tilde(in.p, in.ch, alpha));
    }
  }
  SUBCASE("beats every grid point of the feasible interval") {
    for (int i = 0; i < 300; ++i) {
      const Instance in = random_instance(rng);
      const double alpha = u(rng);
      const double upper = rho_tilde(in.p, in.ch, alpha);
      const RhoChoice c = optimal_rho_for_alpha(in.p, in.ch, alpha);
      CHECK(c.rho >= 0.0);
      CHECK(c.rho <= upper);
      const InnerCoefficients ic = inner_coeffs(in.p, in.ch, alpha);
      const double chosen = f_alpha(ic, in.p.weight_ratio(), c.rho);
      CHECK(chosen >= grid_argmax(in.p, in.ch, alpha, upper).second * (1.0 - 1e-12));
    }
  }
  SUBCASE("requires w2 > w1") {
    CHECK_THROWS_AS((void)optimal_rho_for_alpha(base(10.0, 1.0), {2.0, 0.5, 1.0}, 0.3),
                    InvalidArgument);
  }
}

TEST_CASE("f_alpha shape follows the (theta, rho_bar) classification") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(1e-3, 1.0 - 1e-3);
  for (int i = 0; i < 200; ++i) {
    const Instance in = random_instance(rng);
    const double alpha = u(rng);
    const InnerCoefficients ic = inner_coeffs(in.p, in.ch, alpha);
    const double w = in.p.weight_ratio();
    const ThetaBeta tb = theta_beta(ic, w);
    // Sign changes of successive differences of log f_alpha on [0, 1).
    int changes = 0;
    int last_sign = 0;
    double prev = log_f_alpha(ic, w, 0.0);
    bool first_up = false;
    for (int k = 1; k < 10000; ++k) {
      const double cur = log_f_alpha(ic, w, k / 10000.0);
      const double diff = cur - prev;
      prev = cur;
      if (std::abs(diff) < 1e-14 * std::max(1.0, std::abs(cur))) continue;
      const int s = diff > 0 ? 1 : -1;
      if (last_sign == 0) first_up = s > 0;
      if (last_sign != 0 && s != last_sign) ++changes;
      last_sign = s;
    }
    CHECK(changes <= 1);
    if (changes == 1) {
      // Rise then fall, with the peak at rho_bar.
      CHECK(first_up);
      REQUIRE(tb.theta > 0.0);
      const double rb = rho_bar(ic, w);
      CHECK(rb > 0.0);
      CHECK(rb < 1.0);
    }
  }
}

TEST_CASE("solve_1d") {
  SUBCASE("no priority for U2: all power to x1, no splitting") {
    SystemParams p = base(100.0, 1.0);
    p.w1 = 2.0;
    p.w2 = 2.0;
    const OptimizationOutcome out = solve_1d(p, {2.0, 0.5, 1.0});
    CHECK(out.branch == Branch::Trivial);
    CHECK(out.design.alpha == doctest::Approx(1.0 - 1e-4));
    CHECK(out.design.rho == 0.0);
  }
  SUBCASE("matches the exhaustive grid") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 40; ++i) {
      const Instance in = random_instance(rng);
      const OptimizationOutcome fast = solve_1d(in.p, in.ch);
      const OptimizationOutcome grid = solve_2d_exhaustive(in.p, in.ch);
      CHECK(fast.rates.weighted_sum >= grid.rates.weighted_sum - 1e-4);
      CHECK(fast.design.alpha > 0.0);
      CHECK(fast.design.alpha < 1.0);
      CHECK(fast.design.rho >= 0.0);
      CHECK(fast.design.rho < 1.0);
      CHECK(fast.objective_f == doctest::Approx(f_objective(in.p, in.ch, fast.design)).epsilon(1e-12));
    }
  }
  SUBCASE("scaling both weights keeps the solution") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 20; ++i) {
      const Instance in = random_instance(rng);
      SystemParams scaled = in.p;
      scaled.w1 *= 7.0;
      scaled.w2 *= 7.0;
      const OptimizationOutcome a = solve_1d(in.p, in.ch);
      const OptimizationOutcome b = solve_1d(scaled, in.ch);
      CHECK(b.design.alpha == a.design.alpha);
      CHECK(b.design.rho == a.design.rho);
      CHECK(b.rates.weighted_sum == doctest::Approx(7.0 * a.rates.weighted_sum).epsilon(1e-14));
    }
  }
  SUBCASE("satisfies the decoding constraint at the optimum") {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 200; ++i) {
      const Instance in = random_instance(rng);
      const OptimizationOutcome out = solve_1d(in.p, in.ch);
      const double mrc = sinr_mrc_at_u2(in.p, in.ch, out.design);
      CHECK(out.design.rho <= rho_tilde(in.p, in.ch, out.design.alpha));
      CHECK(sinr_x2_at_u1(in.p, in.ch, out.design) >= mrc - 1e-8 * (1.0 + mrc));
    }
  }
  SUBCASE("rejects unordered channels and bad grids") {
    SystemParams p = base(10.0, 1.0);
    p.w2 = 2.0;
    CHECK_THROWS_AS((void)solve_1d(p, {0.5, 2.0, 1.0}), InfeasibleChannel);
    SolverOptions opts;
    opts.alpha_points = 1;
    CHECK_THROWS_AS((void)solve_1d(p, {2.0, 0.5, 1.0}, opts), InvalidArgument);
  }
}

TEST_CASE("solve_2d_exhaustive") {
  SystemParams p = base(30.0, 0.5);
  p.w2 = 3.0;
  const ChannelRealization ch{1.5, 0.4, 0.8};
  SUBCASE("2x2 grid picks the best corner") {
    GridSpec2D g;
    g.alpha_points = 2;
    g.rho_points = 2;
    const OptimizationOutcome out = solve_2d_exhaustive(p, ch, g);
    double best = -1.0;
    for (double a : {g.alpha_lo, g.alpha_hi}) {
      for (double r : {g.rho_lo, g.rho_hi}) best = std::max(best, rates(p, ch, {a, r}).weighted_sum);
    }
    CHECK(out.rates.weighted_sum == best);
    CHECK(out.branch == Branch::Exhaustive);
  }
  SUBCASE("nested refinement never lowers the objective") {
    double previous = -1.0;
    for (std::size_t n : {3u, 5u, 9u, 17u, 33u, 65u, 129u}) {
      GridSpec2D g;
      g.alpha_points = n;
      g.rho_points = n;
      const double v = solve_2d_exhaustive(p, ch, g).rates.weighted_sum;
      CHECK(v >= previous);
      previous = v;
    }
  }
}

TEST_CASE("golden_section_maximize") {
  std::size_t evals = 0;
  const double x = golden_section_maximize([](double t) { return -(t - 0.3) * (t - 0.3); }, 0.0, 1.0,
                                           1e-9, &evals);
  CHECK(x == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(evals > 10);
  CHECK(evals < 100);
}
