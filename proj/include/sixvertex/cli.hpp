#pragma once

// Command-line surface: configuration (TOML file + flag overrides), the
// solve / verify / sweep pipelines and their JSON / CSV reports.

#include "sixvertex/bethe.hpp"
#include "sixvertex/lattice.hpp"
#include "sixvertex/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <toml.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace sixvertex::cli {

inline constexpr const char* kSchemaVersion = "1.0";

enum ExitCode : int { kExitPass = 0, kExitInvariant = 1, kExitConfig = 2 };

/// Configuration problem; the message starts with the offending field.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& field, const std::string& msg)
      : std::runtime_error(field + ": " + msg), field_(field) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

struct GridAxis {
  std::string param;  // gamma, phi1, phi2, phi_ratio, h, hbar
  std::vector<Complex> values;
};

struct RunConfig {
  ModelParams params{Boundary::Twisted, 4, 2, Complex{0.55, 0.0}, {}, Complex{1.0, 0.0}, Complex{1.6, 0.4},
                     Complex{0.4, 0.3}, Complex{-0.35, 0.2}};
  std::uint64_t seed = 1;
  int x0_samples = 5;
  int max_starts = 0;  // 0: 100 * (n + 1)
  bool offshell = false;
  Tolerances tol;
  std::string output_path;  // empty: stdout
  std::string format;       // json | csv; empty: per-command default
  std::vector<GridAxis> grid;
  int jobs = 0;  // sweep workers; 0: hardware concurrency

  int effective_starts() const { return max_starts > 0 ? max_starts : 100 * (params.magnons + 1); }
};

// ---------------------------------------------------------------------------
// Literals

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// "re,im" as accepted on input.
inline std::string format_pair(Complex z) { return format_double(z.real()) + "," + format_double(z.imag()); }

/// "re+imj" as written to CSV.
inline std::string format_csv_complex(Complex z) {
  const double im = z.imag();
  const bool neg = std::signbit(im);
  return format_double(z.real()) + (neg ? "-" : "+") + format_double(neg ? -im : im) + "j";
}

inline double parse_real(std::string_view s, const std::string& field) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError(field, "malformed number '" + std::string(s) + "'");
  }
  return v;
}

/// Parses a complex literal "re,im".
inline Complex parse_complex(const std::string& text, const std::string& field) {
  const auto comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
    throw ConfigError(field, "malformed complex literal '" + text + "' (expected \"re,im\")");
  }
  try {
    return {parse_real(std::string_view(text).substr(0, comma), field),
            parse_real(std::string_view(text).substr(comma + 1), field)};
  } catch (const ConfigError&) {
    throw ConfigError(field, "malformed complex literal '" + text + "' (expected \"re,im\")");
  }
}

inline Boundary parse_boundary(const std::string& s) {
  if (s == "twisted") return Boundary::Twisted;
  if (s == "open") return Boundary::Open;
  throw ConfigError("boundary", "expected 'twisted' or 'open', got '" + s + "'");
}

inline double* tolerance_slot(Tolerances& t, const std::string& name) {
  static const std::map<std::string, double Tolerances::*> slots{
      {"oracle_relerr", &Tolerances::oracle_relerr}, {"x0_spread", &Tolerances::x0_spread},
      {"family_spread", &Tolerances::family_spread}, {"funcrel", &Tolerances::funcrel},
      {"singular_ratio", &Tolerances::singular_ratio}, {"offshell_ratio", &Tolerances::offshell_ratio},
      {"rank_gap", &Tolerances::rank_gap},           {"cramer", &Tolerances::cramer},
      {"assembly", &Tolerances::assembly}};
  const auto it = slots.find(name);
  return it == slots.end() ? nullptr : &(t.*(it->second));
}

inline const std::vector<std::string>& grid_params() {
  static const std::vector<std::string> names{"gamma", "phi1", "phi2", "phi_ratio", "h", "hbar"};
  return names;
}

/// "name=re,im;re,im;..." with an empty value list allowed.
inline GridAxis parse_grid_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw ConfigError("grid", "expected name=re,im;re,im;... got '" + spec + "'");
  GridAxis axis{spec.substr(0, eq), {}};
  const auto& names = grid_params();
  if (std::find(names.begin(), names.end(), axis.param) == names.end()) {
    throw ConfigError("grid", "unknown sweep parameter '" + axis.param + "'");
  }
  std::stringstream rest(spec.substr(eq + 1));
  std::string item;
  while (std::getline(rest, item, ';')) {
    if (!item.empty()) axis.values.push_back(parse_complex(item, "grid." + axis.param));
  }
  return axis;
}

// ---------------------------------------------------------------------------
// TOML

namespace detail {

inline Complex toml_complex(const toml::node& node, const std::string& field) {
  if (auto s = node.value<std::string>()) return parse_complex(*s, field);
  if (node.is_number()) return {*node.value<double>(), 0.0};
  throw ConfigError(field, "expected a \"re,im\" string");
}

inline std::int64_t toml_integer(const toml::node& node, const std::string& field) {
  if (auto v = node.value_exact<std::int64_t>()) return *v;
  throw ConfigError(field, "expected an integer");
}

}  // namespace detail

/// Applies the keys of a parsed TOML document onto `cfg`.
inline void apply_toml(const toml::table& doc, RunConfig& cfg) {
  static const std::vector<std::string> known{"boundary", "L",     "n",          "gamma",      "phi1",   "phi2",
                                              "h",        "hbar",  "mu",         "seed",       "x0_samples",
                                              "max_starts", "offshell", "output", "format", "jobs", "tolerances",
                                              "sweep"};
  for (const auto& [key, node] : doc) {
    const std::string k(key.str());
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError(k, "unknown configuration key");
  }
  auto& p = cfg.params;
  if (auto v = doc["boundary"].value<std::string>()) p.boundary = parse_boundary(*v);
  if (auto* n = doc.get("L")) p.sites = static_cast<int>(detail::toml_integer(*n, "L"));
  if (auto* n = doc.get("n")) p.magnons = static_cast<int>(detail::toml_integer(*n, "n"));
  if (auto* n = doc.get("gamma")) p.gamma = detail::toml_complex(*n, "gamma");
  if (auto* n = doc.get("phi1")) p.phi1 = detail::toml_complex(*n, "phi1");
  if (auto* n = doc.get("phi2")) p.phi2 = detail::toml_complex(*n, "phi2");
  if (auto* n = doc.get("h")) p.h = detail::toml_complex(*n, "h");
  if (auto* n = doc.get("hbar")) p.hbar = detail::toml_complex(*n, "hbar");
  if (auto* n = doc.get("mu")) {
    const auto* arr = n->as_array();
    if (!arr) throw ConfigError("mu", "expected an array of \"re,im\" strings");
    p.mu.clear();
    for (std::size_t i = 0; i < arr->size(); ++i) {
      p.mu.push_back(detail::toml_complex(*arr->get(i), "mu[" + std::to_string(i) + "]"));
    }
  }
  if (auto* n = doc.get("seed")) {
    const auto v = detail::toml_integer(*n, "seed");
    if (v < 0) throw ConfigError("seed", "must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(v);
  }
  if (auto* n = doc.get("x0_samples")) cfg.x0_samples = static_cast<int>(detail::toml_integer(*n, "x0_samples"));
  if (auto* n = doc.get("max_starts")) cfg.max_starts = static_cast<int>(detail::toml_integer(*n, "max_starts"));
  if (auto* n = doc.get("jobs")) cfg.jobs = static_cast<int>(detail::toml_integer(*n, "jobs"));
  if (auto* n = doc.get("offshell")) {
    auto v = n->value_exact<bool>();
    if (!v) throw ConfigError("offshell", "expected a boolean");
    cfg.offshell = *v;
  }
  if (auto v = doc["output"].value<std::string>()) cfg.output_path = *v;
  if (auto v = doc["format"].value<std::string>()) cfg.format = *v;
  if (auto* t = doc["tolerances"].as_table()) {
    for (const auto& [key, node] : *t) {
      const std::string name(key.str());
      double* slot = tolerance_slot(cfg.tol, name);
      if (!slot) throw ConfigError("tolerances." + name, "unknown tolerance");
      auto v = node.value<double>();
      if (!v) throw ConfigError("tolerances." + name, "expected a number");
      *slot = *v;
    }
  }
  if (auto* grid = doc["sweep"]["grid"].as_array()) {
    cfg.grid.clear();
    for (std::size_t i = 0; i < grid->size(); ++i) {
      const auto* axis = grid->get(i)->as_table();
      const std::string field = "sweep.grid[" + std::to_string(i) + "]";
      if (!axis) throw ConfigError(field, "expected a table with 'param' and 'values'");
      auto name = (*axis)["param"].value<std::string>();
      const auto* values = (*axis)["values"].as_array();
      if (!name || !values) throw ConfigError(field, "expected a table with 'param' and 'values'");
      GridAxis g = parse_grid_axis(*name + "=");
      for (std::size_t j = 0; j < values->size(); ++j) {
        g.values.push_back(detail::toml_complex(*values->get(j), field + ".values[" + std::to_string(j) + "]"));
      }
      cfg.grid.push_back(std::move(g));
    }
  }
}

inline void load_toml_file(const std::string& path, RunConfig& cfg) {
  toml::table doc;
  try {
    doc = toml::parse_file(path);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " at line " << e.source().begin.line;
    throw ConfigError("config", msg.str());
  }
  apply_toml(doc, cfg);
}

/// Seeded default inhomogeneities when none were given.
inline void fill_default_mu(RunConfig& cfg) {
  if (!cfg.params.mu.empty()) return;
  UniformStream rng(sixvertex::detail::mix_seed(cfg.seed, 0xA11CE));
  for (int j = 0; j < cfg.params.sites; ++j) {
    const double re = rng.uniform(-0.4, 0.4);
    const double im = rng.uniform(-0.2, 0.2);
    cfg.params.mu.emplace_back(re, im);
  }
}

/// Structural checks shared by every command.
inline void check_config(const RunConfig& cfg) {
  if (cfg.x0_samples < 1) throw ConfigError("x0_samples", "must be at least 1");
  if (cfg.max_starts < 0) throw ConfigError("max_starts", "must be non-negative");
  if (cfg.jobs < 0) throw ConfigError("jobs", "must be non-negative");
  if (!cfg.format.empty() && cfg.format != "json" && cfg.format != "csv") {
    throw ConfigError("format", "expected 'json' or 'csv'");
  }
  if (cfg.grid.size() > 2) throw ConfigError("grid", "at most two sweep parameters");
}

/// Full model validation; messages from ModelParams::validate name the field.
inline void check_model(const ModelParams& p) {
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto cut = msg.find_first_of(" :");
    throw ConfigError(msg.substr(0, cut), msg.substr(cut == std::string::npos ? 0 : cut + 1));
  }
}

// ---------------------------------------------------------------------------
// Reports

using Json = nlohmann::ordered_json;

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const std::vector<Complex>& v) {
  Json a = Json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

inline Json config_echo(const RunConfig& cfg) {
  const auto& p = cfg.params;
  Json c;
  c["boundary"] = to_string(p.boundary);
  c["L"] = p.sites;
  c["n"] = p.magnons;
  c["gamma"] = format_pair(p.gamma);
  Json mu = Json::array();
  for (const auto& m : p.mu) mu.push_back(format_pair(m));
  c["mu"] = mu;
  if (p.boundary == Boundary::Twisted) {
    c["phi1"] = format_pair(p.phi1);
    c["phi2"] = format_pair(p.phi2);
  } else {
    c["h"] = format_pair(p.h);
    c["hbar"] = format_pair(p.hbar);
  }
  c["seed"] = cfg.seed;
  c["x0_samples"] = cfg.x0_samples;
  c["max_starts"] = cfg.effective_starts();
  c["offshell"] = cfg.offshell;
  Json t;
  for (const char* name : {"oracle_relerr", "x0_spread", "family_spread", "funcrel", "singular_ratio",
                           "offshell_ratio", "rank_gap", "cramer", "assembly"}) {
    t[name] = *tolerance_slot(const_cast<Tolerances&>(cfg.tol), name);
  }
  c["tolerances"] = t;
  return c;
}

inline Json solve_stats(const SolveResult& r) {
  return Json{{"starts", r.starts},
              {"converged", r.converged},
              {"rejected", r.rejected},
              {"duplicates", r.duplicates},
              {"failed", r.failed}};
}

inline Json solution_json(const BetheSolution& s) {
  Json j;
  j["roots"] = to_json(s.roots);
  j["residual"] = s.residual_norm;
  j["eigencheck_residual"] = s.eigencheck_residual;
  return j;
}

inline void add_report(Json& j, const ScalarProductReport& r) {
  j["verified_roots"] = to_json(r.roots);
  j["X"] = to_json(r.X);
  j["x0_samples"] = to_json(r.x0_samples);
  j["oracle"] = to_json(r.oracle);
  Json fam = Json::array();
  for (const auto& row : r.det_values) fam.push_back(to_json(row));
  j["det_families"] = fam;
  Json raw = Json::array();
  for (const auto& row : r.raw_determinants) raw.push_back(to_json(row));
  j["raw_determinants"] = raw;
  j["max_x0_spread"] = r.max_x0_spread;
  j["max_family_spread"] = r.max_family_spread;
  j["oracle_relerr"] = r.oracle_relerr;
  j["funcrel_residual"] = r.funcrel_residual;
  j["min_singular_ratio"] = r.min_singular_ratio;
  j["offshell_singular_ratio"] = r.offshell_singular_ratio;
  j["offshell_control_pass"] = r.offshell_control_pass;
  j["min_rank_gap"] = r.min_rank_gap;
  j["cramer_relerr"] = r.cramer_relerr;
  j["assembly_mismatch"] = r.assembly_mismatch;
  j["pass"] = r.pass;
  j["failed_checks"] = r.failed_checks;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string join_complex(const std::vector<Complex>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_csv_complex(v[i]);
  return s;
}

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Commands. Each returns the exit code and fills `text` with the report.

inline int cmd_solve(const RunConfig& cfg, std::string& text) {
  const auto res = solve_newton(cfg.params, cfg.seed, cfg.effective_starts());
  if (cfg.format == "csv") {
    std::string s = "solution,roots,residual,eigencheck_residual\n";
    for (std::size_t k = 0; k < res.solutions.size(); ++k) {
      const auto& sol = res.solutions[k];
      s += std::to_string(k) + "," + join_complex(sol.roots) + "," + sci(sol.residual_norm) + "," +
           sci(sol.eigencheck_residual) + "\n";
    }
    text = s;
    return kExitPass;
  }
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "solve";
  j["config"] = config_echo(cfg);
  j["solve"] = solve_stats(res);
  Json sols = Json::array();
  for (const auto& s : res.solutions) sols.push_back(solution_json(s));
  j["solutions"] = sols;
  if (res.solutions.empty()) j["warning"] = "no admissible solutions found";
  text = j.dump(2) + "\n";
  return kExitPass;
}

inline int cmd_verify(const RunConfig& cfg, std::string& text, std::ostream& err) {
  VerifyOptions opt{cfg.x0_samples, cfg.seed, cfg.tol, cfg.offshell};
  const auto run = run_verify(cfg.params, cfg.effective_starts(), opt);
  for (std::size_t k = 0; k < run.reports.size(); ++k) {
    const auto& r = run.reports[k];
    if (r.pass) continue;
    err << "verify: solution " << k << " failed:";
    for (const auto& c : r.failed_checks) err << ' ' << c;
    err << '\n';
  }
  if (run.solve.solutions.empty()) err << "verify: no admissible solutions found\n";

  if (cfg.format == "csv") {
    std::string s =
        "solution,roots,residual,oracle,oracle_relerr,max_x0_spread,max_family_spread,funcrel_residual,"
        "min_singular_ratio,min_rank_gap,offshell_singular_ratio,cramer_relerr,pass,failed_checks\n";
    for (std::size_t k = 0; k < run.reports.size(); ++k) {
      const auto& r = run.reports[k];
      std::string failed;
      for (const auto& c : r.failed_checks) failed += (failed.empty() ? "" : " ") + c;
      s += std::to_string(k) + "," + join_complex(run.solve.solutions[k].roots) + "," +
           sci(run.solve.solutions[k].residual_norm) + "," + format_csv_complex(r.oracle) + "," +
           sci(r.oracle_relerr) + "," + sci(r.max_x0_spread) + "," + sci(r.max_family_spread) + "," +
           sci(r.funcrel_residual) + "," + sci(r.min_singular_ratio) + "," + sci(r.min_rank_gap) + "," +
           sci(r.offshell_singular_ratio) + "," +
           sci(r.cramer_relerr) + "," + (r.pass ? "true" : "false") + "," + csv_quote(failed) + "\n";
    }
    text = s;
  } else {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "verify";
    j["config"] = config_echo(cfg);
    j["solve"] = solve_stats(run.solve);
    Json sols = Json::array();
    for (std::size_t k = 0; k < run.reports.size(); ++k) {
      Json s = solution_json(run.solve.solutions[k]);
      add_report(s, run.reports[k]);
      sols.push_back(s);
    }
    j["solutions"] = sols;
    if (run.solve.solutions.empty()) j["warning"] = "no admissible solutions found";
    j["pass"] = run.pass;
    text = j.dump(2) + "\n";
  }
  return run.pass ? kExitPass : kExitInvariant;
}

struct SweepRow {
  std::vector<Complex> point;
  bool admissible = false;
  std::size_t solutions = 0;
  bool pass = false;
  double oracle_relerr = 0.0, max_x0_spread = 0.0, max_family_spread = 0.0, funcrel_residual = 0.0;
  double min_singular_ratio = 0.0, min_rank_gap = 0.0, offshell_singular_ratio = 0.0, cramer_relerr = 0.0;
  std::string note;
};

inline void apply_grid_value(ModelParams& p, const std::string& param, Complex v) {
  if (param == "gamma") p.gamma = v;
  else if (param == "phi1") p.phi1 = v;
  else if (param == "phi2") p.phi2 = v;
  else if (param == "phi_ratio") p.phi2 = v * p.phi1;
  else if (param == "h") p.h = v;
  else if (param == "hbar") p.hbar = v;
}

inline SweepRow sweep_point(const RunConfig& cfg, const std::vector<Complex>& point) {
  SweepRow row;
  row.point = point;
  ModelParams p = cfg.params;
  for (std::size_t a = 0; a < point.size(); ++a) apply_grid_value(p, cfg.grid[a].param, point[a]);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    row.note = std::string("inadmissible: ") + e.what();
    return row;
  }
  row.admissible = true;
  try {
    const auto run = run_verify(p, cfg.effective_starts(), VerifyOptions{cfg.x0_samples, cfg.seed, cfg.tol, cfg.offshell});
    row.solutions = run.reports.size();
    row.pass = run.pass;
    row.offshell_singular_ratio = run.reports.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    row.min_rank_gap = row.offshell_singular_ratio;
    std::vector<std::string> failed;
    for (const auto& r : run.reports) {
      row.oracle_relerr = std::max(row.oracle_relerr, r.oracle_relerr);
      row.max_x0_spread = std::max(row.max_x0_spread, r.max_x0_spread);
      row.max_family_spread = std::max(row.max_family_spread, r.max_family_spread);
      row.funcrel_residual = std::max(row.funcrel_residual, r.funcrel_residual);
      row.min_singular_ratio = std::max(row.min_singular_ratio, r.min_singular_ratio);
      row.offshell_singular_ratio = std::min(row.offshell_singular_ratio, r.offshell_singular_ratio);
      row.min_rank_gap = std::min(row.min_rank_gap, r.min_rank_gap);
      row.cramer_relerr = std::max(row.cramer_relerr, r.cramer_relerr);
      for (const auto& c : r.failed_checks) {
        if (std::find(failed.begin(), failed.end(), c) == failed.end()) failed.push_back(c);
      }
    }
    if (run.reports.empty()) row.note = "no admissible solutions found";
    for (const auto& c : failed) row.note += (row.note.empty() ? "failed: " : " ") + c;
  } catch (const std::exception& e) {
    row.pass = false;
    row.note = std::string("error: ") + e.what();
  }
  return row;
}

/// Grid points in fixed order: the first axis varies slowest.
inline std::vector<std::vector<Complex>> grid_points(const std::vector<GridAxis>& grid) {
  if (grid.empty()) return {};
  std::vector<std::vector<Complex>> pts{{}};
  for (const auto& axis : grid) {
    std::vector<std::vector<Complex>> next;
    for (const auto& base : pts) {
      for (const auto& v : axis.values) {
        auto q = base;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    }
    pts = std::move(next);
  }
  return pts;
}

inline std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
  const auto pts = grid_points(cfg.grid);
  std::vector<SweepRow> rows(pts.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs) : hw, pts.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next++; i < pts.size(); i = next++) rows[i] = sweep_point(cfg, pts[i]);
    }));
  }
  for (auto& f : pool) f.get();
  return rows;
}

inline int cmd_sweep(const RunConfig& cfg, std::string& text) {
  const auto rows = run_sweep(cfg);
  if (cfg.format == "json") {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "sweep";
    j["config"] = config_echo(cfg);
    Json params = Json::array();
    for (const auto& a : cfg.grid) params.push_back(a.param);
    j["grid_params"] = params;
    Json arr = Json::array();
    for (const auto& r : rows) {
      arr.push_back(Json{{"point", to_json(r.point)},
                         {"admissible", r.admissible},
                         {"solutions", r.solutions},
                         {"pass", r.pass},
                         {"oracle_relerr", r.oracle_relerr},
                         {"max_x0_spread", r.max_x0_spread},
                         {"max_family_spread", r.max_family_spread},
                         {"funcrel_residual", r.funcrel_residual},
                         {"min_singular_ratio", r.min_singular_ratio},
                         {"min_rank_gap", r.min_rank_gap},
                         {"offshell_singular_ratio", r.offshell_singular_ratio},
                         {"cramer_relerr", r.cramer_relerr},
                         {"note", r.note}});
    }
    j["rows"] = arr;
    text = j.dump(2) + "\n";
    return kExitPass;
  }
  std::string s = "index";
  for (const auto& a : cfg.grid) s += "," + a.param;
  s += ",admissible,solutions,pass,oracle_relerr,max_x0_spread,max_family_spread,funcrel_residual,"
       "min_singular_ratio,min_rank_gap,offshell_singular_ratio,cramer_relerr,note\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    s += std::to_string(i);
    for (const auto& v : r.point) s += "," + format_csv_complex(v);
    s += std::string(",") + (r.admissible ? "true" : "false") + "," + std::to_string(r.solutions) + "," +
         (r.pass ? "true" : "false") + "," + sci(r.oracle_relerr) + "," + sci(r.max_x0_spread) + "," +
         sci(r.max_family_spread) + "," + sci(r.funcrel_residual) + "," + sci(r.min_singular_ratio) + "," +
         sci(r.min_rank_gap) + "," + sci(r.offshell_singular_ratio) + "," + sci(r.cramer_relerr) + "," + csv_quote(r.note) + "\n";
  }
  text = s;
  return kExitPass;
}

// ---------------------------------------------------------------------------
// Entry point

struct FlagValues {
  std::string config, boundary, gamma, phi1, phi2, h, hbar, out;
  std::vector<std::string> mu, tol, grid;
  std::optional<int> L, n, x0_samples, max_starts, jobs;
  std::optional<std::uint64_t> seed;
  bool json = false, csv = false, offshell = false;
};

inline void add_common_flags(CLI::App* sub, FlagValues& f) {
  sub->add_option("--config", f.config, "TOML configuration file");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--boundary", f.boundary, "twisted | open");
  sub->add_option("--L", f.L, "number of sites");
  sub->add_option("--n", f.n, "number of magnons");
  sub->add_option("--gamma", f.gamma, "anisotropy \"re,im\"");
  sub->add_option("--mu", f.mu, "inhomogeneities, one \"re,im\" per site");
  sub->add_option("--phi1", f.phi1, "twist phi1 \"re,im\"");
  sub->add_option("--phi2", f.phi2, "twist phi2 \"re,im\"");
  sub->add_option("--h", f.h, "boundary parameter h \"re,im\"");
  sub->add_option("--hbar", f.hbar, "boundary parameter hbar \"re,im\"");
  sub->add_option("--x0-samples", f.x0_samples, "x0 samples per solution");
  sub->add_option("--max-starts", f.max_starts, "Newton starts");
  sub->add_option("--tol", f.tol, "tolerance override name=value");
  sub->add_option("--out", f.out, "output path (default stdout)");
  sub->add_flag("--json", f.json, "JSON output");
  sub->add_flag("--csv", f.csv, "CSV output");
}

/// Resolves defaults, then the TOML file, then flags.
inline RunConfig resolve_config(const FlagValues& f) {
  RunConfig cfg;
  if (!f.config.empty()) load_toml_file(f.config, cfg);
  auto& p = cfg.params;
  if (!f.boundary.empty()) p.boundary = parse_boundary(f.boundary);
  if (f.L) p.sites = *f.L;
  if (f.n) p.magnons = *f.n;
  if (!f.gamma.empty()) p.gamma = parse_complex(f.gamma, "gamma");
  if (!f.phi1.empty()) p.phi1 = parse_complex(f.phi1, "phi1");
  if (!f.phi2.empty()) p.phi2 = parse_complex(f.phi2, "phi2");
  if (!f.h.empty()) p.h = parse_complex(f.h, "h");
  if (!f.hbar.empty()) p.hbar = parse_complex(f.hbar, "hbar");
  if (!f.mu.empty()) {
    p.mu.clear();
    for (std::size_t i = 0; i < f.mu.size(); ++i) p.mu.push_back(parse_complex(f.mu[i], "mu[" + std::to_string(i) + "]"));
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.x0_samples) cfg.x0_samples = *f.x0_samples;
  if (f.max_starts) cfg.max_starts = *f.max_starts;
  if (f.jobs) cfg.jobs = *f.jobs;
  if (f.offshell) cfg.offshell = true;
  if (!f.out.empty()) cfg.output_path = f.out;
  if (f.json && f.csv) throw ConfigError("format", "--json and --csv are exclusive");
  if (f.json) cfg.format = "json";
  if (f.csv) cfg.format = "csv";
  for (const auto& t : f.tol) {
    const auto eq = t.find('=');
    const std::string name = t.substr(0, eq);
    double* slot = tolerance_slot(cfg.tol, name);
    if (eq == std::string::npos || !slot) throw ConfigError("tol", "expected name=value with a known name, got '" + t + "'");
    *slot = parse_real(t.substr(eq + 1), "tol." + name);
  }
  if (!f.grid.empty()) {
    cfg.grid.clear();
    for (const auto& g : f.grid) cfg.grid.push_back(parse_grid_axis(g));
  }
  fill_default_mu(cfg);
  check_config(cfg);
  return cfg;
}

inline bool write_output(const RunConfig& cfg, const std::string& text, std::ostream& out, std::ostream& err) {
  if (cfg.output_path.empty()) {
    out << text;
    return static_cast<bool>(out);
  }
  std::ofstream file(cfg.output_path, std::ios::binary);
  file << text;
  if (!file) {
    err << "error: cannot write " << cfg.output_path << '\n';
    return false;
  }
  return true;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Six-vertex Bethe states and continuous determinant families"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  FlagValues f;
  auto* solve = app.add_subcommand("solve", "find validated Bethe solutions");
  auto* verify = app.add_subcommand("verify", "check determinant families against the oracle");
  auto* sweep = app.add_subcommand("sweep", "run verify over a parameter grid");
  for (auto* sub : {solve, verify, sweep}) add_common_flags(sub, f);
  verify->add_flag("--offshell", f.offshell, "perturb the roots off-shell before verifying");
  sweep->add_option("--grid", f.grid, "name=re,im;re,im;... (up to two)");
  sweep->add_option("--jobs", f.jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitConfig;
  }

  RunConfig cfg;
  try {
    cfg = resolve_config(f);
    if (!sweep->parsed()) check_model(cfg.params);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::string text;
  int code = kExitPass;
  try {
    if (solve->parsed()) code = cmd_solve(cfg, text);
    else if (verify->parsed()) code = cmd_verify(cfg, text, err);
    else code = cmd_sweep(cfg, text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvariant;
  }
  if (!write_output(cfg, text, out, err)) return kExitConfig;
  return code;
}

}  // namespace sixvertex::cli
