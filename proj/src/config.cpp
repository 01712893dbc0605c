#include "cnoma/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace cnoma {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

Ordering parse_ordering(std::string_view s) {
  s = trim(s);
  if (s == "unordered") return Ordering::Unordered;
  if (s == "swap") return Ordering::SwapOrdered;
  throw ConfigError("ordering must be 'unordered' or 'swap', got '" + std::string(s) + "'");
}

OutputFormat parse_format(std::string_view s) {
  s = trim(s);
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigError("format must be 'csv' or 'json', got '" + std::string(s) + "'");
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"experiment.kind",
       [](ExperimentConfig& c, std::string_view v) {
         if (parse_experiment_kind(trim(v)) != c.kind) {
           throw ConfigError("config was written for '" + std::string(trim(v)) +
                             "', not '" + std::string(to_string(c.kind)) + "'");
         }
       }},
      {"experiment.version", [](ExperimentConfig&, std::string_view) {}},
      {"system.mu", [](ExperimentConfig& c, std::string_view v) { c.system.mu = parse_double(v); }},
      {"system.eta", [](ExperimentConfig& c, std::string_view v) { c.system.eta = parse_double(v); }},
      {"system.var1", [](ExperimentConfig& c, std::string_view v) { c.system.var1 = parse_double(v); }},
      {"system.var2", [](ExperimentConfig& c, std::string_view v) { c.system.var2 = parse_double(v); }},
      {"system.var3", [](ExperimentConfig& c, std::string_view v) { c.system.var3 = parse_double(v); }},
      {"system.w1", [](ExperimentConfig& c, std::string_view v) { c.system.w1 = parse_double(v); }},
      {"system.w2", [](ExperimentConfig& c, std::string_view v) { c.system.w2 = parse_double(v); }},
      {"design.alpha", [](ExperimentConfig& c, std::string_view v) { c.baseline.alpha = parse_double(v); }},
      {"design.rho", [](ExperimentConfig& c, std::string_view v) { c.baseline.rho = parse_double(v); }},
      {"sweep.snr_db", [](ExperimentConfig& c, std::string_view v) { c.snr_sweep = parse_snr_sweep(v); }},
      {"sweep.fixed_snr_db", [](ExperimentConfig& c, std::string_view v) { c.snr_db = parse_double(v); }},
      {"sweep.wtilde2", [](ExperimentConfig& c, std::string_view v) { c.wtilde2 = parse_number_list(v); }},
      {"sampler.seed", [](ExperimentConfig& c, std::string_view v) { c.sampler.seed = parse_u64(v); }},
      {"sampler.samples",
       [](ExperimentConfig& c, std::string_view v) { c.sampler.sample_count = parse_u64(v); }},
      {"sampler.ordering",
       [](ExperimentConfig& c, std::string_view v) { c.sampler.ordering = parse_ordering(v); }},
      {"sampler.workers",
       [](ExperimentConfig& c, std::string_view v) {
         c.sampler.workers = static_cast<unsigned>(parse_u64(v));
       }},
      {"solver.grid",
       [](ExperimentConfig& c, std::string_view v) { c.solver.alpha_points = parse_u64(v); }},
      {"solver.alpha_edge",
       [](ExperimentConfig& c, std::string_view v) { c.solver.alpha_edge = parse_double(v); }},
      {"solver.refine_tol",
       [](ExperimentConfig& c, std::string_view v) { c.solver.refine_tol = parse_double(v); }},
      {"channel.g1", [](ExperimentConfig& c, std::string_view v) { c.channel.g1 = parse_double(v); }},
      {"channel.g2", [](ExperimentConfig& c, std::string_view v) { c.channel.g2 = parse_double(v); }},
      {"channel.g3", [](ExperimentConfig& c, std::string_view v) { c.channel.g3 = parse_double(v); }},
      {"output.format",
       [](ExperimentConfig& c, std::string_view v) { c.format = parse_format(v); }},
  };
  return table;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Fig1: return "fig1";
    case ExperimentKind::Fig2: return "fig2";
    case ExperimentKind::Fig3: return "fig3";
    case ExperimentKind::Solve: return "solve";
    case ExperimentKind::Validate: return "validate";
  }
  return "unknown";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

ExperimentKind parse_experiment_kind(std::string_view s) {
  for (ExperimentKind k : {ExperimentKind::Fig1, ExperimentKind::Fig2, ExperimentKind::Fig3,
                           ExperimentKind::Solve, ExperimentKind::Validate}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown experiment kind '" + std::string(s) + "'");
}

std::vector<double> SnrSweep::values_db() const {
  std::vector<double> out;
  const double span = stop_db - start_db;
  // Index-based so the last point is not lost to accumulated roundoff.
  const auto steps = static_cast<long>(std::floor(span / step_db + 1e-9));
  for (long i = 0; i <= steps; ++i) out.push_back(start_db + static_cast<double>(i) * step_db);
  return out;
}

SnrSweep parse_snr_sweep(std::string_view text) {
  text = trim(text);
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  SnrSweep s;
  if (c1 == std::string_view::npos) {
    s.start_db = s.stop_db = parse_double(text);
    s.step_db = 1.0;
    return s;
  }
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
    throw ConfigError("SNR sweep must be START:STOP:STEP, got '" + std::string(text) + "'");
  }
  s.start_db = parse_double(text.substr(0, c1));
  s.stop_db = parse_double(text.substr(c1 + 1, c2 - c1 - 1));
  s.step_db = parse_double(text.substr(c2 + 1));
  if (!(s.step_db > 0.0)) throw ConfigError("SNR sweep step must be > 0");
  if (!(s.stop_db >= s.start_db)) throw ConfigError("SNR sweep stop must be >= start");
  return s;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) throw ConfigError("expected a comma-separated list of numbers");
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    out.push_back(parse_double(item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  switch (kind) {
    case ExperimentKind::Fig1:
      cfg.system.w2 = 2.0;
      cfg.sampler.sample_count = 1000000;
      cfg.sampler.ordering = Ordering::Unordered;
      break;
    case ExperimentKind::Fig2:
      cfg.wtilde2 = {2.0, 5.0};
      cfg.sampler.sample_count = 100000;
      cfg.sampler.ordering = Ordering::SwapOrdered;
      break;
    case ExperimentKind::Fig3:
      cfg.wtilde2 = {1.5, 2.0, 3.0, 5.0, 7.0, 10.0};
      cfg.sampler.sample_count = 100000;
      cfg.sampler.ordering = Ordering::SwapOrdered;
      break;
    case ExperimentKind::Solve:
      cfg.system.w2 = 2.0;
      cfg.sampler.ordering = Ordering::SwapOrdered;
      break;
    case ExperimentKind::Validate:
      cfg.format = OutputFormat::Json;
      break;
  }
  return cfg;
}

void apply_config_text(ExperimentConfig& cfg, std::string_view text) {
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;

    if (line.substr(0, 3) == "#! ") line.remove_prefix(3);
    line = trim(line);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;

    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    if (section.empty()) throw ConfigError(where + "key outside of any [section]");
    const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(where + "unknown key '" + key + "'");
    try {
      it->second(cfg, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("'" + path + "': " + e.what());
    }
    const auto* echo = doc.contains("provenance") ? &doc["provenance"] : nullptr;
    if (echo == nullptr || !echo->contains("config") || !(*echo)["config"].is_string()) {
      throw ConfigError("'" + path + "' has no embedded provenance.config");
    }
    apply_config_text(cfg, (*echo)["config"].get<std::string>());
    return;
  }
  // A result file carries its config as "#! " lines; blank the rest so the
  // data rows are ignored and line numbers still match the file.
  if (text.rfind("#! ", 0) == 0 || text.find("\n#! ") != std::string::npos) {
    std::istringstream in(text);
    std::string echoed;
    for (std::string line; std::getline(in, line);) {
      if (line.rfind("#! ", 0) == 0) echoed += line;
      echoed += '\n';
    }
    apply_config_text(cfg, echoed);
    return;
  }
  apply_config_text(cfg, text);
}

void validate_config(const ExperimentConfig& cfg) {
  try {
    validate(cfg.system);
    validate(cfg.baseline);
    validate(cfg.sampler);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.snr_sweep.values_db().empty()) throw ConfigError("SNR sweep is empty");
  if (!std::isfinite(cfg.snr_db)) throw ConfigError("fixed_snr_db must be finite");
  if (cfg.solver.alpha_points < 2) throw ConfigError("solver grid needs at least 2 points");
  if (!(cfg.solver.alpha_edge > 0.0 && cfg.solver.alpha_edge < 0.5)) {
    throw ConfigError("solver alpha_edge must lie in (0, 0.5)");
  }
  if (!(cfg.solver.refine_tol > 0.0)) throw ConfigError("solver refine_tol must be > 0");
  if (cfg.kind == ExperimentKind::Fig2 || cfg.kind == ExperimentKind::Fig3) {
    if (cfg.wtilde2.empty()) throw ConfigError("wtilde2 sweep is empty");
    for (double w : cfg.wtilde2) {
      if (!(w > 1.0) || !std::isfinite(w)) throw ConfigError("every wtilde2 value must be > 1");
    }
    if (cfg.sampler.ordering != Ordering::SwapOrdered) {
      throw ConfigError("optimizer experiments require ordering = swap");
    }
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string echo_config(const ExperimentConfig& cfg) {
  std::ostringstream o;
  const auto d = format_double;
  o << "[experiment]\n"
    << "kind = " << to_string(cfg.kind) << "\n"
    << "version = " << kVersion << "\n"
    << "[system]\n"
    << "mu = " << d(cfg.system.mu) << "\n"
    << "eta = " << d(cfg.system.eta) << "\n"
    << "var1 = " << d(cfg.system.var1) << "\n"
    << "var2 = " << d(cfg.system.var2) << "\n"
    << "var3 = " << d(cfg.system.var3) << "\n"
    << "w1 = " << d(cfg.system.w1) << "\n"
    << "w2 = " << d(cfg.system.w2) << "\n"
    << "[design]\n"
    << "alpha = " << d(cfg.baseline.alpha) << "\n"
    << "rho = " << d(cfg.baseline.rho) << "\n"
    << "[sweep]\n"
    << "snr_db = " << d(cfg.snr_sweep.start_db) << ":" << d(cfg.snr_sweep.stop_db) << ":"
    << d(cfg.snr_sweep.step_db) << "\n"
    << "fixed_snr_db = " << d(cfg.snr_db) << "\n";
  if (!cfg.wtilde2.empty()) {
    o << "wtilde2 = ";
    for (std::size_t i = 0; i < cfg.wtilde2.size(); ++i) o << (i ? ", " : "") << d(cfg.wtilde2[i]);
    o << "\n";
  }
  o << "[sampler]\n"
    << "seed = " << cfg.sampler.seed << "\n"
    << "samples = " << cfg.sampler.sample_count << "\n"
    << "ordering = " << to_string(cfg.sampler.ordering) << "\n"
    << "[solver]\n"
    << "grid = " << cfg.solver.alpha_points << "\n"
    << "alpha_edge = " << d(cfg.solver.alpha_edge) << "\n"
    << "refine_tol = " << d(cfg.solver.refine_tol) << "\n"
    << "[channel]\n"
    << "g1 = " << d(cfg.channel.g1) << "\n"
    << "g2 = " << d(cfg.channel.g2) << "\n"
    << "g3 = " << d(cfg.channel.g3) << "\n"
    << "[output]\n"
    << "format = " << to_string(cfg.format) << "\n";
  return o.str();
}

}  // namespace cnoma
