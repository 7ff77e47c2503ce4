#include "stbeam/config_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "stbeam/errors.hpp"

namespace stbeam {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Everything this schema stores is numeric or an enum word, so inline
// comments can be cut at the first marker unconditionally.
std::string strip_comment(const std::string& line) {
  const std::size_t pos = line.find_first_of("#;");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"beam",
       {"elastic_modulus_pa", "linear_mass_density_kg_per_m", "length_m", "outer_diameter_m",
        "inner_diameter_m", "second_moment_of_area_m4"}},
      {"end_body", {"mass_kg", "rotary_inertia_kg_m2", "eccentricity_m"}},
      {"load", {"gravity_m_per_s2", "include_tip_weight"}},
      {"solver",
       {"sign_convention", "modes", "lambda_max", "scan_step", "refine_tol",
        "series_rel_tolerance", "series_max_terms", "grid_points", "execution"}},
  };
  return keys;
}

void check_schema_key(const std::string& section, const std::string& key) {
  const auto& s = schema();
  const auto it = s.find(section);
  if (it == s.end()) {
    throw ConfigError("unknown config section [" + section + "]");
  }
  if (it->second.find(key) == it->second.end()) {
    throw ConfigError("unknown config key " + section + "." + key);
  }
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in, const std::string& origin) {
  ConfigFile file;
  file.origin_ = origin;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": malformed section header");
      }
      section = lower(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty section name");
      }
      file.sections_[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": key outside any section");
    }
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key or value");
    }
    file.sections_[section][key] = value;
  }
  return file;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  return parse(in, path);
}

void ConfigFile::set(const std::string& dotted_key, const std::string& value) {
  const std::size_t dot = dotted_key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= dotted_key.size()) {
    throw ConfigError("override key must be section.key, got: " + dotted_key);
  }
  const std::string section = lower(trim(dotted_key.substr(0, dot)));
  const std::string key = lower(trim(dotted_key.substr(dot + 1)));
  check_schema_key(section, key);
  sections_[section][key] = trim(value);
}

void ConfigFile::apply_override(const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override must be section.key=value, got: " + assignment);
  }
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto sec = sections_.find(section);
  return sec != sections_.end() && sec->second.find(key) != sec->second.end();
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  const auto sec = sections_.find(section);
  if (sec == sections_.end()) return fallback;
  const auto it = sec->second.find(key);
  return it == sec->second.end() ? fallback : it->second;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  if (!has(section, key)) return fallback;
  return require_double(section, key);
}

double ConfigFile::require_double(const std::string& section, const std::string& key) const {
  if (!has(section, key)) {
    throw ConfigError("missing required config key " + section + "." + key);
  }
  const std::string text = get_string(section, key, "");
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + section + "." + key + " = '" + text + "' as a number");
  }
  if (consumed != text.size()) {
    throw ConfigError("trailing characters in " + section + "." + key + " = '" + text + "'");
  }
  return value;
}

int ConfigFile::get_int(const std::string& section, const std::string& key, int fallback) const {
  if (!has(section, key)) return fallback;
  const double value = require_double(section, key);
  const int rounded = static_cast<int>(value);
  if (static_cast<double>(rounded) != value) {
    throw ConfigError(section + "." + key + " must be an integer");
  }
  return rounded;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string text = lower(get_string(section, key, ""));
  if (text == "true" || text == "on" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "off" || text == "0" || text == "no") return false;
  throw ConfigError("cannot parse " + section + "." + key + " = '" + text + "' as a flag");
}

RunConfig load_run_config(const ConfigFile& file) {
  for (const auto& [section, entries] : file.sections()) {
    for (const auto& [key, value] : entries) {
      (void)value;
      check_schema_key(section, key);
    }
  }

  RunConfig config;
  auto& beam = config.physical;
  beam.modulus_of_elasticity = file.require_double("beam", "elastic_modulus_pa");
  beam.linear_mass_density = file.require_double("beam", "linear_mass_density_kg_per_m");
  beam.length = file.require_double("beam", "length_m");

  const bool has_diameters =
      file.has("beam", "outer_diameter_m") || file.has("beam", "inner_diameter_m");
  const bool has_direct = file.has("beam", "second_moment_of_area_m4");
  if (has_diameters && has_direct) {
    throw ConfigError("give either beam diameters or second_moment_of_area_m4, not both");
  }
  if (has_direct) {
    beam.cross_section = DirectSection{file.require_double("beam", "second_moment_of_area_m4")};
  } else if (has_diameters) {
    beam.cross_section = AnnularSection{file.require_double("beam", "outer_diameter_m"),
                                        file.get_double("beam", "inner_diameter_m", 0.0)};
  } else {
    throw ConfigError("beam cross-section missing: diameters or second_moment_of_area_m4");
  }

  beam.end_body.mass = file.get_double("end_body", "mass_kg", 0.0);
  beam.end_body.rotary_inertia = file.get_double("end_body", "rotary_inertia_kg_m2", 0.0);
  beam.end_body.eccentricity = file.get_double("end_body", "eccentricity_m", 0.0);
  beam.gravity = file.get_double("load", "gravity_m_per_s2", 9.81);
  beam.include_tip_weight_in_axial_load = file.get_bool("load", "include_tip_weight", true);

  auto& solver = config.solver;
  const std::string convention = lower(file.get_string("solver", "sign_convention", "derived"));
  if (convention == "derived") {
    solver.sign_convention = SignConvention::derived;
  } else if (convention == "printed") {
    solver.sign_convention = SignConvention::printed;
  } else {
    throw ConfigError("solver.sign_convention must be 'derived' or 'printed'");
  }
  solver.n_modes = file.get_int("solver", "modes", 2);
  if (solver.n_modes < 1) throw ConfigError("solver.modes must be at least 1");
  solver.scan.lambda_max = file.get_double("solver", "lambda_max", 12.0);
  solver.scan.step = file.get_double("solver", "scan_step", 0.02);
  solver.scan.refine_tol = file.get_double("solver", "refine_tol", 1e-10);
  solver.policy.relative_tolerance = file.get_double("solver", "series_rel_tolerance", 1e-14);
  solver.policy.max_terms = file.get_int("solver", "series_max_terms", 600);
  solver.grid_points = file.get_int("solver", "grid_points", 201);
  if (solver.grid_points < 2) throw ConfigError("solver.grid_points must be at least 2");
  const std::string execution = lower(file.get_string("solver", "execution", "parallel"));
  if (execution == "serial") {
    solver.scan.mode = ExecutionMode::serial;
  } else if (execution == "parallel") {
    solver.scan.mode = ExecutionMode::parallel;
  } else {
    throw ConfigError("solver.execution must be 'serial' or 'parallel'");
  }

  validate(config.physical);
  return config;
}

}  // namespace stbeam
