#pragma once

// Instantaneous link model of the two-user cooperative NOMA downlink with a
// power-splitting energy-harvesting relay.
//
// Phase 1: the source S broadcasts sqrt(a P) x1 + sqrt((1-a) P) x2. The strong
// user U1 diverts a fraction rho of its received power to the harvester and
// decodes x2 (then x1 after SIC) from the rest. Phase 2: U1 forwards x2 to the
// weak user U2 using the harvested energy; U2 combines both copies (MRC).
//
// Every quantity is expressed relative to the noise power N0, so the source
// power enters only through the average SNR avg_snr = P_S / N0.

namespace cnoma {

inline constexpr const char* kVersion = "1.0.0";

/// Static scenario description.
struct SystemParams {
  double avg_snr = 1.0;  ///< P_S / N0, linear scale.
  double mu = 1.0;       ///< RF-to-baseband conversion noise, in units of N0.
  double eta = 1.0;      ///< Energy conversion efficiency, (0, 1].
  double var1 = 1.0;     ///< Mean power gain S -> U1.
  double var2 = 1.0;     ///< Mean power gain S -> U2.
  double var3 = 1.0;     ///< Mean power gain U1 -> U2.
  double w1 = 1.0;       ///< Priority weight of U1.
  double w2 = 1.0;       ///< Priority weight of U2.

  /// w2 / w1.
  [[nodiscard]] double weight_ratio() const { return w2 / w1; }
};

/// One block-fading draw of the channel power gains |h_i|^2.
struct ChannelRealization {
  double g1 = 0.0;  ///< S -> U1
  double g2 = 0.0;  ///< S -> U2
  double g3 = 0.0;  ///< U1 -> U2
};

/// Decision variables: power allocation alpha in (0,1) and power-splitting
/// ratio rho in [0,1).
struct DesignPoint {
  double alpha = 0.5;
  double rho = 0.0;
};

/// Achievable rates in bits/s/Hz for one frame.
struct RateTriple {
  double c1 = 0.0;
  double c2 = 0.0;
  double weighted_sum = 0.0;
};

// Invariant checks; each throws InvalidArgument with a message naming the
// offending field.
void validate(const SystemParams& p);
void validate(const ChannelRealization& ch);
void validate(const DesignPoint& d);

/// SINR of x1 at U1 after SIC.
[[nodiscard]] double sinr_x1_at_u1(const SystemParams& p, const ChannelRealization& ch,
                                   const DesignPoint& d);

/// SINR of x2 at U1 (x1 treated as interference).
[[nodiscard]] double sinr_x2_at_u1(const SystemParams& p, const ChannelRealization& ch,
                                   const DesignPoint& d);

/// Post-combining SINR of x2 at U2: direct link plus the energy-harvesting relay link.
[[nodiscard]] double sinr_mrc_at_u2(const SystemParams& p, const ChannelRealization& ch,
                                    const DesignPoint& d);

/// Energy harvested by U1 over a slot of length `slot_duration`, in units of N0 * time.
[[nodiscard]] double harvested_energy(const SystemParams& p, const ChannelRealization& ch,
                                      const DesignPoint& d, double slot_duration = 1.0);

[[nodiscard]] RateTriple rates(const SystemParams& p, const ChannelRealization& ch,
                               const DesignPoint& d);

/// Half-duplex Shannon rate 0.5 * log2(1 + sinr).
[[nodiscard]] double half_rate(double sinr);

[[nodiscard]] double db_to_linear(double db);
[[nodiscard]] double linear_to_db(double linear);

}  // namespace cnoma
