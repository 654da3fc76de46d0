#pragma once

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lpm/solver/options.hpp"

namespace lpm {

/// Parse or validation failure; `key` names the offending entry.
struct ConfigError : std::runtime_error {
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key(std::move(key)) {}
  std::string key;
};

enum class OutputFormat { csv, vtk, both };

struct RunConfig {
  std::string scenario = "gaussian_1d";
  std::size_t n = 480;
  double cfl = 0.9;
  Scheme scheme = Scheme::limited;
  /// Empty: the per-dimension default (1e-3 in 1D, 3e-2 otherwise).
  std::optional<double> epsilon;
  /// Empty: the per-dimension default (0 in 1D, 0.4 otherwise).
  std::optional<double> min_offset_ratio;
  double radius_factor = 3.0;
  ThetaForm theta_form = ThetaForm::symmetric;
  double delta_div = 1e-12;
  V0Reference v0_reference = V0Reference::step_start;
  IndexKind index = IndexKind::bucket;
  int tree_depth = 5;
  int threads = 1;
  int ghost_layers = 3;
  double ghost_dmin_factor = 0.7;
  double surface_count_fraction = 0.6;
  double surface_centroid_fraction = 0.25;
  /// Empty: the scenario's default end time.
  std::optional<double> end_time;
  /// Snapshot cadence in simulated time; empty: initial and final only.
  std::optional<double> output_interval;
  OutputFormat output_format = OutputFormat::csv;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  /// Overrides the CFL step when set.
  std::optional<double> fixed_dt;
  // Scenario parameters.
  double disk_radius = 1.0;
  double disk_reflections = 10.0;
  double gresho_frozen_band = 3.0;
  double impact_parameter = 1.0;
  double disk_speed = 10.0;
  double gap_spacings = 2.0;
  // Convergence oracle.
  std::string oracle = "muscl";
  double oracle_multiplier = 8.0;
  std::size_t oracle_min_cells = 2048;

  bool operator==(const RunConfig&) const = default;
};

inline const std::vector<std::string>& known_scenarios() {
  static const std::vector<std::string> names{"gaussian_1d", "gaussian_1d_stiffened", "sod_1d", "uniform_1d",
                                              "gaussian_disk_2d", "gresho", "two_disks"};
  return names;
}

inline std::size_t scenario_minimum(const std::string& s) {
  if (s == "gaussian_disk_2d" || s == "sod_1d") return 100;
  if (s == "gresho") return 400;
  if (s == "two_disks") return 200;
  if (s == "uniform_1d") return 4;
  return 16;
}

inline int scenario_dimension(const std::string& s) {
  return (s == "gaussian_disk_2d" || s == "gresho" || s == "two_disks") ? 2 : 1;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc{} || res.ptr != end) throw ConfigError(key, "expected a number, got '" + v + "'");
  return out;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc{} || res.ptr != end) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return out;
}

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class E>
E parse_enum(const std::string& key, const std::string& v, std::initializer_list<std::pair<const char*, E>> table) {
  std::string allowed;
  for (const auto& [name, value] : table) {
    if (v == name) return value;
    allowed += allowed.empty() ? name : std::string(", ") + name;
  }
  throw ConfigError(key, "unknown value '" + v + "' (expected one of: " + allowed + ")");
}

inline const char* output_format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::vtk: return "vtk";
    case OutputFormat::both: return "both";
  }
  return "?";
}

}  // namespace detail

/// Range and consistency checks; throws ConfigError naming the key.
inline void validate_config(const RunConfig& c) {
  bool known = false;
  for (const auto& s : known_scenarios()) known = known || s == c.scenario;
  if (!known) throw ConfigError("scenario", "unknown scenario '" + c.scenario + "'");
  if (c.n < scenario_minimum(c.scenario))
    throw ConfigError("n", "must be at least " + std::to_string(scenario_minimum(c.scenario)) + " for " + c.scenario);
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ConfigError("cfl", "must lie in (0, 1]");
  if (c.epsilon && !(*c.epsilon > 0.0 && *c.epsilon < 1.0)) throw ConfigError("epsilon", "must lie in (0, 1)");
  if (c.min_offset_ratio && !(*c.min_offset_ratio >= 0.0 && *c.min_offset_ratio < 1.0))
    throw ConfigError("min_offset_ratio", "must lie in [0, 1)");
  if (!(c.radius_factor > 0.0)) throw ConfigError("radius_factor", "must be positive");
  if (!(c.delta_div > 0.0)) throw ConfigError("delta_div", "must be positive");
  if (c.tree_depth < 1 || c.tree_depth > 20) throw ConfigError("tree_depth", "must lie in [1, 20]");
  if (c.threads < 1) throw ConfigError("threads", "must be at least 1");
  if (c.ghost_layers < 1) throw ConfigError("ghost_layers", "must be at least 1");
  if (!(c.ghost_dmin_factor > 0.0)) throw ConfigError("ghost_dmin_factor", "must be positive");
  if (!(c.surface_count_fraction > 0.0 && c.surface_count_fraction <= 1.0))
    throw ConfigError("surface_count_fraction", "must lie in (0, 1]");
  if (!(c.surface_centroid_fraction > 0.0)) throw ConfigError("surface_centroid_fraction", "must be positive");
  if (c.end_time && !(*c.end_time > 0.0)) throw ConfigError("end_time", "must be positive");
  if (c.output_interval && !(*c.output_interval > 0.0)) throw ConfigError("output_interval", "must be positive");
  if (c.fixed_dt && !(*c.fixed_dt > 0.0)) throw ConfigError("fixed_dt", "must be positive");
  if (c.out_dir.empty()) throw ConfigError("out_dir", "must not be empty");
  if (!(c.disk_radius > 0.0)) throw ConfigError("disk_radius", "must be positive");
  if (!(c.disk_reflections > 0.0)) throw ConfigError("disk_reflections", "must be positive");
  if (!(c.gresho_frozen_band >= 0.0)) throw ConfigError("gresho_frozen_band", "must be non-negative");
  if (!(c.impact_parameter >= 0.0 && c.impact_parameter < 2.0 * c.disk_radius))
    throw ConfigError("impact_parameter", "must lie in [0, 2 * disk_radius)");
  if (!(c.gap_spacings > 0.0)) throw ConfigError("gap_spacings", "must be positive");
  if (c.oracle != "muscl" && c.oracle != "self_reference")
    throw ConfigError("oracle", "unknown value '" + c.oracle + "' (expected one of: muscl, self_reference)");
  if (!(c.oracle_multiplier >= 1.0)) throw ConfigError("oracle_multiplier", "must be at least 1");
}

/// Flat `key: value` lines; `#` starts a comment. Unknown keys are rejected.
inline RunConfig parse_config(std::string_view text) {
  using namespace detail;
  RunConfig c;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto colon = t.find(':');
    if (colon == std::string::npos)
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected 'key: value'");
    const std::string key = trim(std::string_view(t).substr(0, colon));
    const std::string v = trim(std::string_view(t).substr(colon + 1));
    if (++seen[key] > 1) throw ConfigError(key, "duplicate key");
    if (v.empty()) throw ConfigError(key, "missing value");
    if (key == "scenario") c.scenario = v;
    else if (key == "n") c.n = parse_int<std::size_t>(key, v);
    else if (key == "cfl") c.cfl = parse_double(key, v);
    else if (key == "scheme")
      c.scheme = parse_enum<Scheme>(key, v, {{"first", Scheme::first}, {"beam_warming", Scheme::beam_warming},
                                             {"limited", Scheme::limited}});
    else if (key == "epsilon") c.epsilon = parse_double(key, v);
    else if (key == "min_offset_ratio") c.min_offset_ratio = parse_double(key, v);
    else if (key == "radius_factor") c.radius_factor = parse_double(key, v);
    else if (key == "theta_form")
      c.theta_form = parse_enum<ThetaForm>(key, v, {{"symmetric", ThetaForm::symmetric},
                                                    {"one_sided", ThetaForm::one_sided}});
    else if (key == "delta_div") c.delta_div = parse_double(key, v);
    else if (key == "v0_reference")
      c.v0_reference = parse_enum<V0Reference>(key, v, {{"step_start", V0Reference::step_start},
                                                        {"initial", V0Reference::initial}});
    else if (key == "index")
      c.index = parse_enum<IndexKind>(key, v, {{"bucket", IndexKind::bucket}, {"tree", IndexKind::tree}});
    else if (key == "tree_depth") c.tree_depth = parse_int<int>(key, v);
    else if (key == "threads") c.threads = parse_int<int>(key, v);
    else if (key == "ghost_layers") c.ghost_layers = parse_int<int>(key, v);
    else if (key == "ghost_dmin_factor") c.ghost_dmin_factor = parse_double(key, v);
    else if (key == "surface_count_fraction") c.surface_count_fraction = parse_double(key, v);
    else if (key == "surface_centroid_fraction") c.surface_centroid_fraction = parse_double(key, v);
    else if (key == "end_time") c.end_time = parse_double(key, v);
    else if (key == "output_interval") c.output_interval = parse_double(key, v);
    else if (key == "output_format")
      c.output_format = parse_enum<OutputFormat>(key, v, {{"csv", OutputFormat::csv}, {"vtk", OutputFormat::vtk},
                                                          {"both", OutputFormat::both}});
    else if (key == "seed") c.seed = parse_int<std::uint64_t>(key, v);
    else if (key == "out_dir") c.out_dir = v;
    else if (key == "fixed_dt") c.fixed_dt = parse_double(key, v);
    else if (key == "disk_radius") c.disk_radius = parse_double(key, v);
    else if (key == "disk_reflections") c.disk_reflections = parse_double(key, v);
    else if (key == "gresho_frozen_band") c.gresho_frozen_band = parse_double(key, v);
    else if (key == "impact_parameter") c.impact_parameter = parse_double(key, v);
    else if (key == "disk_speed") c.disk_speed = parse_double(key, v);
    else if (key == "gap_spacings") c.gap_spacings = parse_double(key, v);
    else if (key == "oracle") c.oracle = v;
    else if (key == "oracle_multiplier") c.oracle_multiplier = parse_double(key, v);
    else if (key == "oracle_min_cells") c.oracle_min_cells = parse_int<std::size_t>(key, v);
    else throw ConfigError(key, "unknown key");
  }
  validate_config(c);
  return c;
}

/// Every key, one per line, in a form parse_config reads back to an equal config.
inline std::string serialize_config(const RunConfig& c) {
  using detail::format_double;
  std::ostringstream o;
  o << "scenario: " << c.scenario << "\n"
    << "n: " << c.n << "\n"
    << "cfl: " << format_double(c.cfl) << "\n"
    << "scheme: " << scheme_name(c.scheme) << "\n"
    << "radius_factor: " << format_double(c.radius_factor) << "\n"
    << "theta_form: " << (c.theta_form == ThetaForm::symmetric ? "symmetric" : "one_sided") << "\n"
    << "delta_div: " << format_double(c.delta_div) << "\n"
    << "v0_reference: " << (c.v0_reference == V0Reference::step_start ? "step_start" : "initial") << "\n"
    << "index: " << (c.index == IndexKind::bucket ? "bucket" : "tree") << "\n"
    << "tree_depth: " << c.tree_depth << "\n"
    << "threads: " << c.threads << "\n"
    << "ghost_layers: " << c.ghost_layers << "\n"
    << "ghost_dmin_factor: " << format_double(c.ghost_dmin_factor) << "\n"
    << "surface_count_fraction: " << format_double(c.surface_count_fraction) << "\n"
    << "surface_centroid_fraction: " << format_double(c.surface_centroid_fraction) << "\n";
  if (c.epsilon) o << "epsilon: " << format_double(*c.epsilon) << "\n";
  if (c.min_offset_ratio) o << "min_offset_ratio: " << format_double(*c.min_offset_ratio) << "\n";
  if (c.end_time) o << "end_time: " << format_double(*c.end_time) << "\n";
  if (c.output_interval) o << "output_interval: " << format_double(*c.output_interval) << "\n";
  o << "output_format: " << detail::output_format_name(c.output_format) << "\n"
    << "seed: " << c.seed << "\n"
    << "out_dir: " << c.out_dir << "\n";
  if (c.fixed_dt) o << "fixed_dt: " << format_double(*c.fixed_dt) << "\n";
  o << "disk_radius: " << format_double(c.disk_radius) << "\n"
    << "disk_reflections: " << format_double(c.disk_reflections) << "\n"
    << "gresho_frozen_band: " << format_double(c.gresho_frozen_band) << "\n"
    << "impact_parameter: " << format_double(c.impact_parameter) << "\n"
    << "disk_speed: " << format_double(c.disk_speed) << "\n"
    << "gap_spacings: " << format_double(c.gap_spacings) << "\n"
    << "oracle: " << c.oracle << "\n"
    << "oracle_multiplier: " << format_double(c.oracle_multiplier) << "\n"
    << "oracle_min_cells: " << c.oracle_min_cells << "\n";
  return o.str();
}

/// Solver options implied by a config. The search radius and the stencil
/// defaults depend on the scenario and are filled in by solver_options_for.
inline SolverOptions solver_options_from(const RunConfig& c) {
  SolverOptions o;
  o.scheme = c.scheme;
  o.theta_form = c.theta_form;
  o.delta_div = c.delta_div;
  o.v0_reference = c.v0_reference;
  o.index = c.index;
  o.tree_depth = c.tree_depth;
  o.threads = c.threads;
  return o;
}

}  // namespace lpm
