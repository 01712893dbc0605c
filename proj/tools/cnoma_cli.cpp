// cnoma: experiment runner for the cooperative NOMA / power-splitting model.
//
//   cnoma fig1 --snr-db 0:40:5 --out fig1.csv
//   cnoma fig2 --wtilde2 2,5 --samples 100000
//   cnoma fig3 --snr 10
//   cnoma solve --g1 2 --g2 0.5 --g3 1 --snr 20 --w2 2
//   cnoma validate --out report.json
//
// Precedence: built-in defaults < --config file < command-line flags.
// Exit codes: 0 ok, 1 config error, 2 validation failure, 3 numerical failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cnoma/config.hpp"
#include "cnoma/errors.hpp"
#include "cnoma/experiments.hpp"
#include "cnoma/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

// Raw flag values; std::nullopt means "not given, keep config value".
struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::string> snr_sweep;
  std::optional<double> snr;
  std::optional<std::string> wtilde2;
  std::optional<double> alpha, rho, mu, eta, w1, w2;
  std::optional<double> g1, g2, g3;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> ordering;
  std::optional<std::size_t> grid;
  std::optional<unsigned> workers;
  // validate only
  std::vector<std::string> only;
  double corrupt_rho_bar = 1.0;
  bool list_checks = false;
};

void add_common(CLI::App* cmd, Flags& f, cnoma::ExperimentKind kind) {
  using cnoma::ExperimentKind;
  cmd->add_option("--config", f.config_path,
                  "Config file, or a CSV/JSON output of this tool to rerun it");
  cmd->add_option("--seed", f.seed, "Base RNG seed");
  cmd->add_option("--samples", f.samples, "Monte Carlo draws per point")->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "Output path (default: stdout)");
  cmd->add_option("--workers", f.workers, "Worker threads (0 = all cores); never changes results");
  cmd->add_option("--grid", f.grid, "Alpha grid points of the 1D search")->check(CLI::Range(2, 100000000));
  if (kind == ExperimentKind::Validate) return;

  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--mu", f.mu, "Conversion noise in units of N0");
  cmd->add_option("--eta", f.eta, "Energy conversion efficiency");
  cmd->add_option("--w1", f.w1, "Weight of U1");
  cmd->add_option("--alpha", f.alpha, "Fixed power allocation of the baseline design");
  cmd->add_option("--rho", f.rho, "Fixed power-splitting ratio of the baseline design");
  if (kind == ExperimentKind::Fig1 || kind == ExperimentKind::Fig2) {
    cmd->add_option("--snr-db", f.snr_sweep, "SNR sweep START:STOP:STEP in dB");
  }
  if (kind == ExperimentKind::Fig3 || kind == ExperimentKind::Solve) {
    cmd->add_option("--snr", f.snr, "Operating SNR in dB");
  }
  if (kind == ExperimentKind::Fig2 || kind == ExperimentKind::Fig3) {
    cmd->add_option("--wtilde2", f.wtilde2, "Comma-separated weight ratios w2/w1 (> 1)");
  } else {
    cmd->add_option("--w2", f.w2, "Weight of U2");
  }
  if (kind != ExperimentKind::Solve) {
    cmd->add_option("--ordering", f.ordering, "Channel ordering of the sampler")
        ->check(CLI::IsMember({"unordered", "swap"}));
  } else {
    cmd->add_option("--g1", f.g1, "Channel gain S->U1");
    cmd->add_option("--g2", f.g2, "Channel gain S->U2");
    cmd->add_option("--g3", f.g3, "Channel gain U1->U2");
  }
}

cnoma::ExperimentConfig build_config(cnoma::ExperimentKind kind, const Flags& f) {
  using namespace cnoma;
  ExperimentConfig cfg = default_config(kind);
  if (!f.config_path.empty()) apply_config_file(cfg, f.config_path);

  // Flags are routed through the config parser so they get the same checks.
  std::string overrides;
  auto put = [&](const char* section, const char* key, const std::string& value) {
    overrides += std::string("[") + section + "]\n" + key + " = " + value + "\n";
  };
  auto num = [](double v) { return format_double(v); };
  if (f.seed) put("sampler", "seed", std::to_string(*f.seed));
  if (f.samples) put("sampler", "samples", std::to_string(*f.samples));
  if (f.ordering) put("sampler", "ordering", *f.ordering);
  if (f.workers) put("sampler", "workers", std::to_string(*f.workers));
  if (f.grid) put("solver", "grid", std::to_string(*f.grid));
  if (f.snr_sweep) put("sweep", "snr_db", *f.snr_sweep);
  if (f.snr) put("sweep", "fixed_snr_db", num(*f.snr));
  if (f.wtilde2) put("sweep", "wtilde2", *f.wtilde2);
  if (f.alpha) put("design", "alpha", num(*f.alpha));
  if (f.rho) put("design", "rho", num(*f.rho));
  if (f.mu) put("system", "mu", num(*f.mu));
  if (f.eta) put("system", "eta", num(*f.eta));
  if (f.w1) put("system", "w1", num(*f.w1));
  if (f.w2) put("system", "w2", num(*f.w2));
  if (f.g1) put("channel", "g1", num(*f.g1));
  if (f.g2) put("channel", "g2", num(*f.g2));
  if (f.g3) put("channel", "g3", num(*f.g3));
  if (f.format) put("output", "format", *f.format);
  try {
    apply_config_text(cfg, overrides);
  } catch (const ConfigError& e) {
    // Line numbers refer to the synthesized override block; drop them.
    std::string msg = e.what();
    const auto colon = msg.find(": ");
    throw ConfigError("command line: " + (colon == std::string::npos ? msg : msg.substr(colon + 2)));
  }
  if (f.out) cfg.out_path = *f.out;
  validate_config(cfg);
  return cfg;
}

int run(cnoma::ExperimentKind kind, const Flags& f) {
  using namespace cnoma;
  const ExperimentConfig cfg = build_config(kind, f);
  const std::string stamp = utc_timestamp();
  switch (kind) {
    case ExperimentKind::Fig1: write_output(cfg, render_table(cfg, run_fig1(cfg), stamp)); break;
    case ExperimentKind::Fig2: write_output(cfg, render_table(cfg, run_fig2(cfg), stamp)); break;
    case ExperimentKind::Fig3: write_output(cfg, render_table(cfg, run_fig3(cfg), stamp)); break;
    case ExperimentKind::Solve: write_output(cfg, render_outcome(cfg, run_solve(cfg), stamp)); break;
    case ExperimentKind::Validate: {
      if (f.list_checks) {
        for (const std::string& name : check_names()) std::cout << name << "\n";
        return kExitOk;
      }
      ValidationOptions opts;
      opts.seed = f.seed.value_or(opts.seed);
      opts.samples = f.samples;
      opts.only = f.only;
      opts.solver = cfg.solver;
      opts.solver.rho_bar_denominator_scale = f.corrupt_rho_bar;
      opts.workers = cfg.sampler.workers;
      const auto results = run_validation(opts);
      for (const CheckResult& r : results) std::cerr << summary_line(r) << "\n";
      write_output(cfg, validation_report(opts, results, stamp).dump(2) + "\n");
      return all_passed(results) ? kExitOk : kExitValidation;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  using cnoma::ExperimentKind;
  CLI::App app{"Cooperative NOMA with power-splitting energy harvesting: sweeps, solver, checks"};
  app.set_version_flag("--version", std::string(cnoma::kVersion));
  app.require_subcommand(1);

  Flags flags;
  std::optional<ExperimentKind> chosen;
  const std::pair<ExperimentKind, const char*> commands[] = {
      {ExperimentKind::Fig1, "Achievable rates at a fixed design point versus SNR"},
      {ExperimentKind::Fig2, "Optimized versus fixed weighted sum rate versus SNR"},
      {ExperimentKind::Fig3, "Mean optimal alpha and rho versus the weight ratio"},
      {ExperimentKind::Solve, "Optimize one channel realization"},
      {ExperimentKind::Validate, "Run the release-gate checks and write a JSON report"},
  };
  for (const auto& [kind, help] : commands) {
    CLI::App* cmd = app.add_subcommand(std::string(cnoma::to_string(kind)), help);
    add_common(cmd, flags, kind);
    if (kind == ExperimentKind::Validate) {
      cmd->add_option("--only", flags.only, "Run only these checks")->delimiter(',');
      cmd->add_option("--corrupt-rho-bar", flags.corrupt_rho_bar,
                      "Scale the stationary-point denominator (mutation test hook)");
      cmd->add_flag("--list", flags.list_checks, "List check names and exit");
    }
    cmd->callback([&chosen, kind = kind] { chosen = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    return run(*chosen, flags);
  } catch (const cnoma::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cnoma::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cnoma::InfeasibleChannel& e) {
    std::cerr << "infeasible channel: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cnoma::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const cnoma::DomainError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
