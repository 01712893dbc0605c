#include "cnoma/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cnoma/errors.hpp"

namespace cnoma {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace

void validate(const SystemParams& p) {
  require(std::isfinite(p.avg_snr) && p.avg_snr > 0.0, "SystemParams: avg_snr must be > 0");
  require(std::isfinite(p.mu) && p.mu >= 0.0, "SystemParams: mu must be >= 0");
  require(p.eta > 0.0 && p.eta <= 1.0, "SystemParams: eta must lie in (0, 1]");
  require(std::isfinite(p.var1) && p.var1 > 0.0, "SystemParams: var1 must be > 0");
  require(std::isfinite(p.var2) && p.var2 > 0.0, "SystemParams: var2 must be > 0");
  require(std::isfinite(p.var3) && p.var3 > 0.0, "SystemParams: var3 must be > 0");
  require(std::isfinite(p.w1) && p.w1 > 0.0, "SystemParams: w1 must be > 0");
  require(std::isfinite(p.w2) && p.w2 > 0.0, "SystemParams: w2 must be > 0");
}

void validate(const ChannelRealization& ch) {
  require(std::isfinite(ch.g1) && ch.g1 >= 0.0, "ChannelRealization: g1 must be >= 0");
  require(std::isfinite(ch.g2) && ch.g2 >= 0.0, "ChannelRealization: g2 must be >= 0");
  require(std::isfinite(ch.g3) && ch.g3 >= 0.0, "ChannelRealization: g3 must be >= 0");
}

void validate(const DesignPoint& d) {
  require(d.alpha > 0.0 && d.alpha < 1.0, "DesignPoint: alpha must lie in (0, 1)");
  require(d.rho >= 0.0 && d.rho < 1.0, "DesignPoint: rho must lie in [0, 1)");
}

double sinr_x1_at_u1(const SystemParams& p, const ChannelRealization& ch, const DesignPoint& d) {
  validate(d);
  const double keep = 1.0 - d.rho;
  return keep * d.alpha * p.avg_snr * ch.g1 / (keep + p.mu);
}

double sinr_x2_at_u1(const SystemParams& p, const ChannelRealization& ch, const DesignPoint& d) {
  validate(d);
  const double keep = 1.0 - d.rho;
  const double snr1 = p.avg_snr * ch.g1;
  return keep * (1.0 - d.alpha) * snr1 / (keep * d.alpha * snr1 + keep + p.mu);
}

double sinr_mrc_at_u2(const SystemParams& p, const ChannelRealization& ch, const DesignPoint& d) {
  validate(d);
  const double snr2 = p.avg_snr * ch.g2;
  const double direct = (1.0 - d.alpha) * snr2 / (d.alpha * snr2 + 1.0 + p.mu);
  const double relay = d.rho * p.eta * p.avg_snr * ch.g1 * ch.g3 / (1.0 + p.mu);
  return direct + relay;
}

double harvested_energy(const SystemParams& p, const ChannelRealization& ch, const DesignPoint& d,
                        double slot_duration) {
  if (!(slot_duration > 0.0)) throw InvalidArgument("harvested_energy: slot duration must be > 0");
  return slot_duration * p.eta * d.rho * p.avg_snr * ch.g1;
}

double half_rate(double sinr) { return 0.5 * std::log2(1.0 + sinr); }

RateTriple rates(const SystemParams& p, const ChannelRealization& ch, const DesignPoint& d) {
  RateTriple r;
  r.c1 = half_rate(sinr_x1_at_u1(p, ch, d));
  r.c2 = half_rate(std::min(sinr_x2_at_u1(p, ch, d), sinr_mrc_at_u2(p, ch, d)));
  r.weighted_sum = p.w1 * r.c1 + p.w2 * r.c2;
  return r;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace cnoma
