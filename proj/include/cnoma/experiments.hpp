#pragma once

// Experiment drivers behind the CLI subcommands. Each driver produces a
// Table; render() turns it into CSV or JSON with a provenance header.
//
// CSV layout:
//   # generated_at = <UTC timestamp>
//   #! [experiment]          <- config echo, one "#! " line per entry
//   #! ...
//   snr_db,c1_mc,...         <- column header
//   0,0.123,...

#include <string>
#include <vector>

#include "cnoma/config.hpp"
#include "cnoma/optimizer.hpp"

namespace cnoma {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Columns snr_db, c1_mc, c1_se, c2_mc, c2_se, csum_mc, csum_se, c1_analytic,
/// c2_analytic, csum_analytic, c1_highsnr, c2_highsnr.
[[nodiscard]] Table run_fig1(const ExperimentConfig& cfg);

/// Columns snr_db, wtilde2, csum_optimized, csum_optimized_se, csum_fixed,
/// csum_fixed_se, gain_percent. Rows ordered by SNR, then wtilde2.
[[nodiscard]] Table run_fig2(const ExperimentConfig& cfg);

/// Columns wtilde2, mean_alpha_star, alpha_star_se, mean_rho_star,
/// rho_star_se, at cfg.snr_db.
[[nodiscard]] Table run_fig3(const ExperimentConfig& cfg);

/// Runs solve_1d on cfg.channel at cfg.snr_db.
[[nodiscard]] OptimizationOutcome run_solve(const ExperimentConfig& cfg);

/// Current UTC time, ISO 8601.
[[nodiscard]] std::string utc_timestamp();

[[nodiscard]] std::string render_table(const ExperimentConfig& cfg, const Table& table,
                                       const std::string& timestamp);
[[nodiscard]] std::string render_outcome(const ExperimentConfig& cfg,
                                         const OptimizationOutcome& outcome,
                                         const std::string& timestamp);

/// Writes `text` to cfg.out_path, or to stdout when the path is empty.
void write_output(const ExperimentConfig& cfg, const std::string& text);

}  // namespace cnoma
