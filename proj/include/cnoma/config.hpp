#pragma once

// Experiment configuration: a flat INI-style text format
//
//   [system]
//   mu = 1
//   w1 = 1
//   [sweep]
//   snr_db = 0:40:5
//   wtilde2 = 2, 5
//
// Every output file embeds the effective configuration in this format (lines
// prefixed with "#! " in CSV files), so any result file can be passed back
// through --config to reproduce it.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cnoma/errors.hpp"
#include "cnoma/model.hpp"
#include "cnoma/montecarlo.hpp"
#include "cnoma/optimizer.hpp"

namespace cnoma {

class ConfigError : public Error {
public:
  using Error::Error;
};

enum class ExperimentKind { Fig1, Fig2, Fig3, Solve, Validate };
enum class OutputFormat { Csv, Json };

[[nodiscard]] std::string_view to_string(ExperimentKind k);
[[nodiscard]] std::string_view to_string(OutputFormat f);
[[nodiscard]] ExperimentKind parse_experiment_kind(std::string_view s);

/// Inclusive dB range start:stop:step.
struct SnrSweep {
  double start_db = 0.0;
  double stop_db = 40.0;
  double step_db = 5.0;

  [[nodiscard]] std::vector<double> values_db() const;
};

[[nodiscard]] SnrSweep parse_snr_sweep(std::string_view text);
[[nodiscard]] std::vector<double> parse_number_list(std::string_view text);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Fig1;
  SystemParams system;  ///< avg_snr is overwritten per sweep point
  DesignPoint baseline{0.25, 0.3};
  SnrSweep snr_sweep;
  double snr_db = 10.0;  ///< single operating point (fig3, solve)
  std::vector<double> wtilde2;
  SamplerConfig sampler;
  SolverOptions solver;
  ChannelRealization channel{2.0, 0.5, 1.0};  ///< solve only
  OutputFormat format = OutputFormat::Csv;
  std::string out_path;  ///< empty = stdout; not part of the echoed config
};

/// Project defaults for an experiment kind (unit channel variances, eta = 1,
/// mu = 1, baseline alpha = 0.25, rho = 0.3).
[[nodiscard]] ExperimentConfig default_config(ExperimentKind kind);

/// Applies the key/value pairs in `text` on top of `cfg`. Lines that start
/// with "#! " have that prefix stripped first; other '#' / ';' lines are
/// comments. Throws ConfigError("line N: ...") on malformed input, unknown
/// sections or keys, and a kind that disagrees with cfg.kind.
void apply_config_text(ExperimentConfig& cfg, std::string_view text);

/// Reads a config file, a CSV produced by this tool, or a JSON result file.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

/// Checks cross-field invariants; throws ConfigError.
void validate_config(const ExperimentConfig& cfg);

/// Canonical text form of every reproducibility-relevant field.
[[nodiscard]] std::string echo_config(const ExperimentConfig& cfg);

/// Shortest decimal text that round-trips to the same double.
[[nodiscard]] std::string format_double(double v);

}  // namespace cnoma
