#pragma once
// Config files, scenario runs and the files they leave on disk.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dissim/analysis.hpp"
#include "dissim/elimination.hpp"
#include "dissim/scenarios.hpp"

namespace dissim::cli {

namespace fs = std::filesystem;
using dynamics::DensityState;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPartial = 3;
inline constexpr const char* kOutputEnv = "DISSIM_OUTPUT_DIR";

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// ---------------------------------------------------------------------------
// Config parsing

using KeyValues = std::vector<std::pair<std::string, std::string>>;

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// Flat `key = value` lines; `#` starts a comment; duplicate keys are errors.
inline KeyValues parse_key_values(const std::string& text, const std::string& origin = "config") {
  KeyValues out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
    for (const auto& [k, v] : out)
      if (k == key) throw ConfigError(where + ": duplicate key '" + key + "'");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline double parse_real(const std::string& key, const std::string& text) {
  const auto v = scenarios::parse_complex(text);
  if (!v || v->imag() != 0.0) throw ConfigError("'" + key + "' needs a real number, got '" + text + "'");
  return v->real();
}

inline long parse_integer(const std::string& key, const std::string& text) {
  const double v = parse_real(key, text);
  if (v != std::floor(v)) throw ConfigError("'" + key + "' needs an integer, got '" + text + "'");
  return static_cast<long>(v);
}

struct RunConfig {
  std::string scenario;
  std::map<std::string, std::string> overrides;
  std::string output_dir = "output";
  std::optional<double> wigner_extent;
  std::optional<int> wigner_points;
  std::optional<double> sample_dt;
  std::optional<long> seed;  // accepted and recorded; the dynamics is deterministic

  analysis::GridSpec grid(analysis::GridSpec fallback) const {
    if (wigner_extent) fallback.extent = *wigner_extent;
    if (wigner_points) fallback.n = *wigner_points;
    return fallback;
  }
};

/// Parse and validate a run config. The scenario is built once so that
/// unknown names and bad overrides fail before anything runs.
inline RunConfig parse_run_config(const std::string& text, const std::string& origin = "config") {
  RunConfig cfg;
  for (const auto& [key, value] : parse_key_values(text, origin)) {
    if (key == "scenario") cfg.scenario = value;
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "sample_dt") cfg.sample_dt = parse_real(key, value);
    else if (key == "seed") cfg.seed = parse_integer(key, value);
    else if (key == "wigner_extent") cfg.wigner_extent = parse_real(key, value);
    else if (key == "wigner_points") cfg.wigner_points = static_cast<int>(parse_integer(key, value));
    else cfg.overrides[key] = value;
  }
  if (cfg.scenario.empty()) throw ConfigError(origin + ": missing 'scenario'");
  if (!scenarios::known(cfg.scenario)) throw ConfigError(origin + ": unknown scenario '" + cfg.scenario + "'");
  if (cfg.sample_dt && !(*cfg.sample_dt > 0.0)) throw ConfigError(origin + ": sample_dt must be positive");
  if (cfg.wigner_extent && !(*cfg.wigner_extent > 0.0)) throw ConfigError(origin + ": wigner_extent must be positive");
  if (cfg.wigner_points && *cfg.wigner_points < 2) throw ConfigError(origin + ": wigner_points must be at least 2");
  try {
    (void)scenarios::build_scenario(cfg.scenario, cfg.overrides);
  } catch (const Error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

struct EliminateConfig {
  std::string kind = "single";
  double lambda = 0.4;
  std::vector<double> gamma_c{4.0, 8.0, 16.0};
  std::optional<double> t_final;
  double sample_dt = 0.05;
  std::string output_dir = "output";
  std::map<std::string, std::string> overrides;
};

inline EliminateConfig parse_eliminate_config(const std::string& text, const std::string& origin = "config") {
  EliminateConfig cfg;
  for (const auto& [key, value] : parse_key_values(text, origin)) {
    if (key == "kind") {
      if (value != "single" && value != "collective") throw ConfigError(origin + ": kind must be single or collective");
      cfg.kind = value;
    } else if (key == "lambda") {
      cfg.lambda = parse_real(key, value);
    } else if (key == "gamma_c") {
      cfg.gamma_c.clear();
      std::istringstream in(value);
      std::string item;
      while (std::getline(in, item, ',')) cfg.gamma_c.push_back(parse_real(key, trim(item)));
      if (cfg.gamma_c.empty()) throw ConfigError(origin + ": gamma_c list is empty");
    } else if (key == "t_final") {
      cfg.t_final = parse_real(key, value);
    } else if (key == "sample_dt") {
      cfg.sample_dt = parse_real(key, value);
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else {
      cfg.overrides[key] = value;
    }
  }
  for (double g : cfg.gamma_c)
    if (!(g > 0.0)) throw ConfigError(origin + ": gamma_c values must be positive");
  if (!(cfg.sample_dt > 0.0)) throw ConfigError(origin + ": sample_dt must be positive");
  if (cfg.t_final && !(*cfg.t_final > 0.0)) throw ConfigError(origin + ": t_final must be positive");
  const std::string scenario = cfg.kind == "single" ? "full3body" : "full3body_collective";
  for (const auto& [key, value] : cfg.overrides) {
    auto p = scenarios::default_params(scenario);
    if (!p.has(key)) throw ConfigError(origin + ": unknown parameter '" + key + "' for " + cfg.kind + " elimination");
    if (auto err = p.set(key, value)) throw ConfigError(origin + ": " + *err);
  }
  return cfg;
}

/// `output_dir` from the config unless DISSIM_OUTPUT_DIR is set.
inline fs::path resolve_output_dir(const std::string& configured) {
  if (const char* env = std::getenv(kOutputEnv); env && *env) return fs::path(env);
  return fs::path(configured);
}

// ---------------------------------------------------------------------------
// Writers

inline std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

/// Observable tracks plus var_x / var_p for the scenario's variance modes.
inline dynamics::TimeSeries with_variances(dynamics::TimeSeries s, const std::vector<std::string>& modes) {
  for (const auto& m : modes) {
    const std::string suffix = modes.size() == 1 ? "" : "_" + m;
    for (const char* q : {"x", "p"}) {
      const auto mean = s.real(std::string(q) + "_" + m);
      const auto second = s.real(std::string(q) + q + "_" + m);
      std::vector<cplx> var(mean.size());
      for (std::size_t k = 0; k < mean.size(); ++k) var[k] = second[k] - mean[k] * mean[k];
      s.add(std::string("var_") + q + suffix, std::move(var));
    }
  }
  return s;
}

inline void write_timeseries(const fs::path& path, const dynamics::TimeSeries& s) {
  std::ofstream out(path, std::ios::binary);
  out << 't';
  for (const auto& tr : s.tracks) {
    if (tr.real) out << ',' << tr.name;
    else out << ',' << tr.name << "_re," << tr.name << "_im";
  }
  out << '\n';
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    out << number(s.times[k]);
    for (const auto& tr : s.tracks) {
      out << ',' << number(tr.values[k].real());
      if (!tr.real) out << ',' << number(tr.values[k].imag());
    }
    out << '\n';
  }
  if (!out) throw Error("failed to write " + path.string());
}

inline void write_wigner(const fs::path& path, const analysis::WignerGrid& g) {
  std::ofstream out(path, std::ios::binary);
  auto axis = [&](const char* name, const analysis::Axis& a) {
    out << "# " << name << ' ' << a.label << ' ' << number(a.min) << ' ' << number(a.max) << ' ' << a.n << '\n';
  };
  axis("axis_x", g.axis_x);
  axis("axis_y", g.axis_y);
  for (Eigen::Index r = 0; r < g.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.values.cols(); ++c) {
      if (c) out << ',';
      out << number(g.values(r, c));
    }
    out << '\n';
  }
  if (!out) throw Error("failed to write " + path.string());
}

inline analysis::WignerGrid wigner_for(const scenarios::WignerRequest& req, const DensityState& rho,
                                       const RunConfig& cfg) {
  using Type = scenarios::WignerRequest::Type;
  if (req.type == Type::SingleMode) {
    const auto single = rho.layout()->size() == 1 ? rho : analysis::partial_trace(rho, req.modes);
    return analysis::wigner(single, cfg.grid(analysis::kSingleModeGrid));
  }
  const auto pair = analysis::partial_trace(rho, req.modes);
  return analysis::joint_wigner_section(pair, req.type == Type::JointXX ? analysis::Plane::XX : analysis::Plane::PP,
                                        cfg.grid(analysis::kJointGrid));
}

inline std::string readout_text(const scenarios::Scenario& sc, const DensityState& rho) {
  std::ostringstream os;
  os << "scenario = " << sc.name << '\n';
  if (sc.magnons.empty()) {
    os << "spins = none\n";
    return os.str();
  }
  for (const auto& m : sc.magnons) {
    const auto s = analysis::mode_spin(rho, m);
    os << "spin_" << m << " = " << analysis::spin_name(s.spin) << '\n';
    os << "spin_" << m << "_source = " << s.source << '\n';
    os << "mean_p_" << m << " = " << number(s.mean_p) << '\n';
  }
  if (sc.magnons.size() == 2) {
    const auto c = analysis::correlations(rho, sc.magnons[0], sc.magnons[1]);
    os << "p1p2 = " << number(c.pp) << '\n';
    os << "x1x2 = " << number(c.xx) << '\n';
    os << "correlation = " << analysis::spin_name(analysis::detail::sign_of(c.pp, analysis::ReadoutOptions{}.correlation_threshold))
       << '\n';
  }
  return os.str();
}

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::string> files;
};

inline void write_manifest(const fs::path& dir, const scenarios::Scenario& sc, const RunConfig& cfg,
                           double sample_dt, const std::string& status, const std::string& message,
                           const dynamics::Diagnostics* diag, const std::vector<std::string>& files) {
  std::ofstream out(dir / "manifest.txt", std::ios::binary);
  out << "scenario = " << sc.name << '\n';
  out << "description = " << sc.description << '\n';
  out << "status = " << status << '\n';
  if (!message.empty()) out << "message = " << message << '\n';
  out << "time_unit = " << sc.time_unit << '\n';
  out << "sample_dt = " << scenarios::format_real(sample_dt) << '\n';
  out << "seed = " << (cfg.seed ? std::to_string(*cfg.seed) : std::string("unset")) << '\n';
  for (const auto& p : sc.params.items())
    out << (p.derived ? "derived " : "param ") << p.key << " = " << p.text() << "  # " << p.note << '\n';
  for (const auto& [key, value] : cfg.overrides) out << "override " << key << " = " << value << '\n';
  if (diag) {
    out << "sectors = " << diag->sectors << '\n';
    out << "accepted_steps = " << diag->accepted_steps << '\n';
    out << "rejected_steps = " << diag->rejected_steps << '\n';
    out << "rhs_evaluations = " << diag->rhs_evaluations << '\n';
    out << "max_trace_error = " << number(diag->max_trace_error) << '\n';
    out << "max_hermiticity_error = " << number(diag->max_hermiticity_error) << '\n';
    out << "min_eigenvalue = " << number(diag->min_eigenvalue) << '\n';
  }
  out << "files =";
  for (const auto& f : files) out << ' ' << f;
  out << '\n';
}

/// Run one validated config into `dir`.
inline RunOutcome run(const RunConfig& cfg, const fs::path& dir, const dynamics::EvolveOptions& opt = {}) {
  const auto sc = scenarios::build_scenario(cfg.scenario, cfg.overrides);
  const double dt = cfg.sample_dt.value_or(sc.sample_dt);
  fs::create_directories(dir);
  RunOutcome outcome;
  try {
    auto ev = dynamics::evolve(sc.model, sc.initial, sc.t_final, dt, sc.observables, opt);
    write_timeseries(dir / "timeseries.csv", with_variances(std::move(ev.series), sc.variance_modes));
    outcome.files.push_back("timeseries.csv");
    for (const auto& req : sc.wigner) {
      const std::string file = "wigner_" + req.tag + ".csv";
      write_wigner(dir / file, wigner_for(req, ev.final_state, cfg));
      outcome.files.push_back(file);
    }
    {
      std::ofstream out(dir / "readout.txt", std::ios::binary);
      out << readout_text(sc, ev.final_state);
    }
    outcome.files.push_back("readout.txt");
    write_manifest(dir, sc, cfg, dt, "complete", "", &ev.diagnostics, outcome.files);
  } catch (const dynamics::InvariantBreach& breach) {
    write_timeseries(dir / "timeseries.csv", with_variances(breach.partial(), sc.variance_modes));
    outcome.files = {"timeseries.csv"};
    outcome.exit_code = kExitPartial;
    outcome.message = breach.what();
    write_manifest(dir, sc, cfg, dt, "partial", outcome.message, nullptr, outcome.files);
  }
  return outcome;
}

inline std::string list_text() {
  std::ostringstream os;
  for (const auto& info : scenarios::catalogue()) {
    os << info.name << " | " << info.description << " |";
    const auto params = scenarios::default_params(info.name);
    for (const auto& p : params.items()) os << ' ' << p.key << '=' << p.text();
    os << '\n';
  }
  return os.str();
}

inline elimination::EliminationReport eliminate(const EliminateConfig& cfg) {
  elimination::CompareOptions opt;
  opt.overrides = cfg.overrides;
  opt.t_final = cfg.t_final;
  opt.sample_dt = cfg.sample_dt;
  return cfg.kind == "single" ? elimination::compare_single(cfg.lambda, cfg.gamma_c, opt)
                              : elimination::compare_collective(cfg.lambda, cfg.gamma_c, opt);
}

}  // namespace dissim::cli
