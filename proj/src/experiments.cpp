#include "cnoma/experiments.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "cnoma/analysis.hpp"
#include "cnoma/montecarlo.hpp"

namespace cnoma {

namespace {

SystemParams at_snr(const ExperimentConfig& cfg, double snr_db) {
  SystemParams p = cfg.system;
  p.avg_snr = db_to_linear(snr_db);
  return p;
}

SystemParams with_ratio(SystemParams p, double wtilde2) {
  p.w2 = wtilde2 * p.w1;
  return p;
}

nlohmann::json provenance(const ExperimentConfig& cfg, const std::string& timestamp) {
  return {
      {"generated_at", timestamp},
      {"version", kVersion},
      {"experiment", std::string(to_string(cfg.kind))},
      {"seed", cfg.sampler.seed},
      {"ordering", std::string(to_string(cfg.sampler.ordering))},
      {"samples", cfg.sampler.sample_count},
      {"alpha_points", cfg.solver.alpha_points},
      {"config", echo_config(cfg)},
  };
}

void csv_header(std::ostream& o, const ExperimentConfig& cfg, const std::string& timestamp) {
  o << "# generated_at = " << timestamp << "\n";
  std::istringstream echo(echo_config(cfg));
  for (std::string line; std::getline(echo, line);) o << "#! " << line << "\n";
}

}  // namespace

Table run_fig1(const ExperimentConfig& cfg) {
  Table t;
  t.columns = {"snr_db",      "c1_mc",      "c1_se",         "c2_mc",
               "c2_se",       "csum_mc",    "csum_se",       "c1_analytic",
               "c2_analytic", "csum_analytic", "c1_highsnr", "c2_highsnr"};
  for (double snr_db : cfg.snr_sweep.values_db()) {
    const SystemParams p = at_snr(cfg, snr_db);
    const ErgodicReport mc = estimate_ergodic(cfg.sampler, p, cfg.baseline);
    const ErgodicReport an = ergodic_weighted_sum(p, cfg.baseline);
    const ErgodicReport hs = high_snr_report(p, cfg.baseline);
    const RateErrors se = mc.standard_errors.value_or(RateErrors{});
    t.rows.push_back({snr_db, mc.c1_e, se.c1, mc.c2_e, se.c2, mc.c_sum_e, se.c_sum, an.c1_e, an.c2_e,
                      an.c_sum_e, hs.c1_e, hs.c2_e});
  }
  return t;
}

Table run_fig2(const ExperimentConfig& cfg) {
  Table t;
  t.columns = {"snr_db",     "wtilde2",       "csum_optimized", "csum_optimized_se",
               "csum_fixed", "csum_fixed_se", "gain_percent"};
  for (double snr_db : cfg.snr_sweep.values_db()) {
    for (double w : cfg.wtilde2) {
      const SystemParams p = with_ratio(at_snr(cfg, snr_db), w);
      const OptimizedEstimate est = estimate_optimized(cfg.sampler, p, cfg.solver, {cfg.baseline});
      const Estimate& fixed = est.baseline_weighted_sum.front();
      const double gain = 100.0 * (est.weighted_sum.mean / fixed.mean - 1.0);
      t.rows.push_back({snr_db, w, est.weighted_sum.mean, est.weighted_sum.standard_error,
                        fixed.mean, fixed.standard_error, gain});
    }
  }
  return t;
}

Table run_fig3(const ExperimentConfig& cfg) {
  Table t;
  t.columns = {"wtilde2", "mean_alpha_star", "alpha_star_se", "mean_rho_star", "rho_star_se"};
  for (double w : cfg.wtilde2) {
    const SystemParams p = with_ratio(at_snr(cfg, cfg.snr_db), w);
    const OptimizedEstimate est = estimate_optimized(cfg.sampler, p, cfg.solver);
    t.rows.push_back({w, est.alpha_star.mean, est.alpha_star.standard_error, est.rho_star.mean,
                      est.rho_star.standard_error});
  }
  return t;
}

OptimizationOutcome run_solve(const ExperimentConfig& cfg) {
  return solve_1d(at_snr(cfg, cfg.snr_db), cfg.channel, cfg.solver);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string render_table(const ExperimentConfig& cfg, const Table& table,
                         const std::string& timestamp) {
  if (cfg.format == OutputFormat::Json) {
    nlohmann::json doc;
    doc["provenance"] = provenance(cfg, timestamp);
    doc["columns"] = table.columns;
    doc["rows"] = table.rows;
    return doc.dump(2) + "\n";
  }
  std::ostringstream o;
  csv_header(o, cfg, timestamp);
  for (std::size_t i = 0; i < table.columns.size(); ++i) o << (i ? "," : "") << table.columns[i];
  o << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) o << (i ? "," : "") << format_double(row[i]);
    o << "\n";
  }
  return o.str();
}

std::string render_outcome(const ExperimentConfig& cfg, const OptimizationOutcome& r,
                           const std::string& timestamp) {
  if (cfg.format == OutputFormat::Json) {
    nlohmann::json doc;
    doc["provenance"] = provenance(cfg, timestamp);
    doc["outcome"] = {
        {"alpha", r.design.alpha},     {"rho", r.design.rho},
        {"objective_f", r.objective_f}, {"c1", r.rates.c1},
        {"c2", r.rates.c2},            {"weighted_sum", r.rates.weighted_sum},
        {"branch", std::string(to_string(r.branch))}, {"evaluations", r.evaluations},
    };
    return doc.dump(2) + "\n";
  }
  std::ostringstream o;
  csv_header(o, cfg, timestamp);
  o << "alpha,rho,objective_f,c1,c2,weighted_sum,branch,evaluations\n"
    << format_double(r.design.alpha) << "," << format_double(r.design.rho) << ","
    << format_double(r.objective_f) << "," << format_double(r.rates.c1) << ","
    << format_double(r.rates.c2) << "," << format_double(r.rates.weighted_sum) << ","
    << to_string(r.branch) << "," << r.evaluations << "\n";
  return o.str();
}

void write_output(const ExperimentConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty() || cfg.out_path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) throw Error("cannot open output file '" + cfg.out_path + "'");
  out << text;
  if (!out.flush()) throw Error("failed writing output file '" + cfg.out_path + "'");
}

}  // namespace cnoma
