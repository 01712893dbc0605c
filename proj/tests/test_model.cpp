#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cnoma/errors.hpp"
#include "cnoma/model.hpp"

using namespace cnoma;

namespace {

SystemParams params(double snr, double mu, double eta = 1.0) {
  SystemParams p;
  p.avg_snr = snr;
  p.mu = mu;
  p.eta = eta;
  return p;
}

// A channel with sinr_x1 = 3, sinr_x2 = 2.25 and sinr_mrc = 1 at
// alpha = 0.25, rho = 0, mu = 0, snr = 1.
struct ThreeOne {
  SystemParams p = params(1.0, 0.0);
  ChannelRealization ch{12.0, 2.0, 1.0};
  DesignPoint d{0.25, 0.0};
};

}  // namespace

TEST_CASE("sinr_x1_at_u1 hand values") {
  // alpha = 1 is outside the design domain; approach it from below.
  CHECK(sinr_x1_at_u1(params(10.0, 0.0), {1.0, 0.0, 0.0}, {1.0 - 1e-12, 0.0}) ==
        doctest::Approx(10.0).epsilon(1e-10));
  CHECK(sinr_x1_at_u1(params(20.0, 0.5), {1.0, 0.0, 0.0}, {0.5, 0.5}) ==
        doctest::Approx(5.0).epsilon(1e-14));
  CHECK(sinr_x1_at_u1(params(20.0, 0.5), {1.0, 0.0, 0.0}, {0.5, 1.0 - 1e-12}) < 1e-10);
}

TEST_CASE("sinr_x2_at_u1 hand values") {
  for (double rho : {0.0, 0.3, 0.9}) {
    CHECK(sinr_x2_at_u1(params(50.0, 1.0), {2.0, 0.0, 0.0}, {1.0 - 1e-12, rho}) < 1e-9);
  }
  const SystemParams p = params(10.0, 0.0);
  const ChannelRealization ch{0.7, 0.0, 0.0};
  const double s = 10.0 * 0.7;
  CHECK(sinr_x2_at_u1(p, ch, {0.2, 0.0}) == doctest::Approx(0.8 * s / (0.2 * s + 1.0)).epsilon(1e-14));
  CHECK(sinr_x2_at_u1(params(40.0, 1.0), {0.5, 0.1, 0.5}, {0.25, 0.25}) ==
        doctest::Approx(11.25 / 5.5).epsilon(1e-14));
}

TEST_CASE("sinr_mrc_at_u2 hand values") {
  const SystemParams p = params(40.0, 1.0);
  const ChannelRealization ch{0.5, 0.1, 0.5};
  CHECK(sinr_mrc_at_u2(p, ch, {0.25, 0.25}) == doctest::Approx(2.25).epsilon(1e-14));

  const double direct = 0.75 * 4.0 / (0.25 * 4.0 + 2.0);
  CHECK(sinr_mrc_at_u2(p, ch, {0.25, 0.0}) == doctest::Approx(direct).epsilon(1e-14));

  const ChannelRealization broken{0.5, 0.1, 0.0};
  CHECK(sinr_mrc_at_u2(p, broken, {0.25, 0.6}) == sinr_mrc_at_u2(p, broken, {0.25, 0.0}));
}

TEST_CASE("harvested_energy hand values") {
  CHECK(harvested_energy(params(10.0, 0.0), {1.0, 0.0, 0.0}, {0.5, 0.0}) == 0.0);
  // Full split is outside DesignPoint's domain but the energy formula is defined there.
  DesignPoint full{0.5, 0.0};
  full.rho = 1.0;
  CHECK(harvested_energy(params(10.0, 0.0), {1.0, 0.0, 0.0}, full, 1.0) == doctest::Approx(10.0));
  CHECK(harvested_energy(params(10.0, 0.0, 0.5), {0.3, 0.0, 0.0}, {0.5, 0.4}, 2.0) ==
        doctest::Approx(1.2).epsilon(1e-14));
  CHECK_THROWS_AS((void)harvested_energy(params(10.0, 0.0), {1.0, 0.0, 0.0}, {0.5, 0.4}, 0.0),
                  InvalidArgument);
}

TEST_CASE("rates") {
  SUBCASE("zero channel gives zero rates") {
    const RateTriple r = rates(params(10.0, 1.0), {0.0, 0.0, 0.0}, {0.3, 0.2});
    CHECK(r.c1 == 0.0);
    CHECK(r.c2 == 0.0);
    CHECK(r.weighted_sum == 0.0);
  }
  SUBCASE("sinr_x1 = 3 and min x2 SINR = 1") {
    ThreeOne t;
    CHECK(sinr_x1_at_u1(t.p, t.ch, t.d) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(sinr_mrc_at_u2(t.p, t.ch, t.d) == doctest::Approx(1.0).epsilon(1e-15));
    const RateTriple r = rates(t.p, t.ch, t.d);
    CHECK(r.c1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.c2 == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("composition of the hand-evaluated SINRs") {
    SystemParams p = params(40.0, 1.0);
    p.w1 = 1.0;
    p.w2 = 2.0;
    const RateTriple r = rates(p, {0.5, 0.1, 0.5}, {0.25, 0.25});
    // 0.5 log2(1 + min(2.04545..., 2.25)), evaluated independently.
    CHECK(r.c2 == doctest::Approx(0.803328785910).epsilon(1e-11));
    CHECK(r.weighted_sum == p.w1 * r.c1 + p.w2 * r.c2);
  }
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(validate(params(0.0, 1.0)), InvalidArgument);
  CHECK_THROWS_AS(validate(params(1.0, -0.1)), InvalidArgument);
  CHECK_THROWS_AS(validate(params(1.0, 0.0, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(validate(params(1.0, 0.0, 1.5)), InvalidArgument);
  SystemParams p;
  p.w2 = 0.0;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
  p.w2 = 1.0;
  p.var3 = 0.0;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
  CHECK_THROWS_AS(validate(ChannelRealization{-1.0, 0.0, 0.0}), InvalidArgument);
  for (DesignPoint d : {DesignPoint{0.0, 0.1}, DesignPoint{1.0, 0.1}, DesignPoint{0.5, -0.1},
                        DesignPoint{0.5, 1.0}}) {
    CHECK_THROWS_AS(validate(d), InvalidArgument);
    CHECK_THROWS_AS((void)sinr_x1_at_u1(SystemParams{}, {1.0, 0.5, 1.0}, d), InvalidArgument);
  }
}

TEST_CASE("monotonicity of the SINRs under finite differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::exponential_distribution<double> g(1.0);
  const double h = 1e-6;
  for (int i = 0; i < 500; ++i) {
    SystemParams p;
    p.avg_snr = std::pow(10.0, 4.0 * u(rng));
    p.mu = 2.0 * u(rng);
    p.eta = u(rng);
    const ChannelRealization ch{g(rng) + 1e-3, g(rng), g(rng) + 1e-3};
    const DesignPoint d{u(rng), u(rng) * 0.9};
    const auto with = [&](double da, double dr) { return DesignPoint{d.alpha + da, d.rho + dr}; };

    CHECK(sinr_x1_at_u1(p, ch, with(0, h)) < sinr_x1_at_u1(p, ch, d));
    CHECK(sinr_x1_at_u1(p, ch, with(h, 0)) > sinr_x1_at_u1(p, ch, d));
    ChannelRealization stronger = ch;
    stronger.g1 *= 1.0 + 1e-6;
    CHECK(sinr_x1_at_u1(p, stronger, d) > sinr_x1_at_u1(p, ch, d));
    CHECK(sinr_x2_at_u1(p, ch, with(0, h)) < sinr_x2_at_u1(p, ch, d));
    CHECK(sinr_x2_at_u1(p, ch, with(h, 0)) < sinr_x2_at_u1(p, ch, d));
    CHECK(sinr_mrc_at_u2(p, ch, with(0, h)) > sinr_mrc_at_u2(p, ch, d));
  }
}

TEST_CASE("SNR normalization matches explicit source and noise powers") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 200; ++i) {
    const double ps = std::pow(10.0, 3.0 * u(rng));
    const double n0 = std::pow(10.0, -3.0 * u(rng));
    const double mu = u(rng);
    const double eta = u(rng);
    const double g1 = 3 * u(rng), g2 = u(rng), g3 = u(rng);
    const double a = u(rng), r = u(rng);
    SystemParams p = params(ps / n0, mu, eta);
    const ChannelRealization ch{g1, g2, g3};
    const DesignPoint d{a, r};

    const double x1 = (1 - r) * a * ps * g1 / ((1 - r) * n0 + mu * n0);
    const double x2 = (1 - r) * (1 - a) * ps * g1 / ((1 - r) * a * ps * g1 + (1 - r) * n0 + mu * n0);
    const double relay_power = eta * r * ps * g1;  // harvested energy over a unit slot
    const double mrc = (1 - a) * ps * g2 / (a * ps * g2 + n0 + mu * n0) + relay_power * g3 / (n0 + mu * n0);
    CHECK(sinr_x1_at_u1(p, ch, d) == doctest::Approx(x1).epsilon(1e-13));
    CHECK(sinr_x2_at_u1(p, ch, d) == doctest::Approx(x2).epsilon(1e-13));
    CHECK(sinr_mrc_at_u2(p, ch, d) == doctest::Approx(mrc).epsilon(1e-13));
  }
}

TEST_CASE("c2 is the rate of the weaker x2 link") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(1e-3, 1.0 - 1e-3);
  std::exponential_distribution<double> g(1.0);
  for (int i = 0; i < 100000; ++i) {
    SystemParams p = params(std::pow(10.0, 4.0 * u(rng)), u(rng));
    const ChannelRealization ch{g(rng), g(rng), g(rng)};
    const DesignPoint d{u(rng), u(rng)};
    const double weaker = std::min(sinr_x2_at_u1(p, ch, d), sinr_mrc_at_u2(p, ch, d));
    const RateTriple r = rates(p, ch, d);
    REQUIRE(r.c2 == 0.5 * std::log2(1.0 + weaker));
    REQUIRE(r.c1 >= 0.0);
  }
}

TEST_CASE("dB conversion round-trips") {
  for (double db = -30.0; db <= 60.0; db += 0.37) {
    CHECK(linear_to_db(db_to_linear(db)) == doctest::Approx(db).epsilon(1e-12));
  }
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(db_to_linear(0.0) == 1.0);
}
