#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "stbeam/beam_model.hpp"
#include "stbeam/eigen_solver.hpp"

namespace stbeam {

// Flat sectioned key-value configuration, SI units throughout:
//
//   [beam]
//   elastic_modulus_pa = 7.9336e9
//   linear_mass_density_kg_per_m = 61.08
//   length_m = 25.0
//   outer_diameter_m = 1.238        # or second_moment_of_area_m4 = ...
//   inner_diameter_m = 1.219
//
//   [end_body]
//   mass_kg = 600.0
//   rotary_inertia_kg_m2 = 0.0
//   eccentricity_m = 0.0
//
//   [load]
//   gravity_m_per_s2 = 9.81
//   include_tip_weight = on
//
//   [solver]
//   sign_convention = derived       # derived | printed
//   modes = 2
//   lambda_max = 12.0
//   scan_step = 0.02
//   refine_tol = 1e-10
//   series_rel_tolerance = 1e-14
//   series_max_terms = 600
//   grid_points = 201
//   execution = parallel            # serial | parallel
//
// `#` and `;` start comments. Unknown sections or keys are ConfigErrors, as
// are overrides that reference keys outside this schema.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse(std::istream& in, const std::string& origin = "<stream>");

  // dotted_key is "section.key"; value replaces (or adds) the entry.
  void set(const std::string& dotted_key, const std::string& value);
  // "section.key=value" as passed on a command line.
  void apply_override(const std::string& assignment);

  bool has(const std::string& section, const std::string& key) const;
  // Typed lookups with defaults; throw ConfigError on unparseable values.
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  double require_double(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;

  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

 private:
  std::string origin_;
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct SolverSettings {
  SignConvention sign_convention = SignConvention::derived;
  int n_modes = 2;
  ScanSettings scan;
  TruncationPolicy policy;
  int grid_points = 201;  // modeshape sampling
};

struct RunConfig {
  PhysicalConfig physical;
  SolverSettings solver;
};

// Validates the whole file against the schema (unknown keys are errors) and
// builds the physical + solver description.
RunConfig load_run_config(const ConfigFile& file);

}  // namespace stbeam
