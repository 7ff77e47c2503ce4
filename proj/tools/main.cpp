// stbeam: eigenvalues and mode shapes of a standing cantilever beam carrying
// an eccentric end rigid body, solved from the power-series characteristic
// equation. Subcommands: solve, sweep, table, modeshape.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "stbeam/config_file.hpp"
#include "stbeam/errors.hpp"
#include "stbeam/experiments.hpp"
#include "stbeam/version.hpp"

namespace {

using namespace stbeam;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitInsufficientRange = 2;
constexpr int kExitBuckled = 3;

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  int modes = 0;  // 0: take from config
  std::string sign_convention;
  std::string tip_weight;
  double lambda_max = 0.0;
  double scan_step = 0.0;
  double refine_tol = 0.0;
  int verbosity = 0;
};

void add_common_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "sectioned key=value configuration file")
      ->required();
  cmd->add_option("--set", opts.overrides, "override, section.key=value (repeatable)");
  cmd->add_option("--out", opts.out_path, "write CSV here instead of stdout");
  cmd->add_option("--modes", opts.modes, "number of modes to compute");
  cmd->add_option("--sign-convention", opts.sign_convention,
                  "tip shear sign variant: derived | printed")
      ->check(CLI::IsMember({"derived", "printed"}));
  cmd->add_option("--tip-weight", opts.tip_weight,
                  "include the end-body weight in the axial load: on | off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--lambda-max", opts.lambda_max, "upper end of the frequency-parameter scan");
  cmd->add_option("--scan-step", opts.scan_step, "scan grid spacing");
  cmd->add_option("--tol", opts.refine_tol, "bisection relative tolerance");
  cmd->add_flag("-v,--verbose", opts.verbosity, "more diagnostics on stderr");
}

// File < --set < dedicated flags.
RunConfig load_config(const CommonOptions& opts) {
  ConfigFile file = ConfigFile::parse_file(opts.config_path);
  for (const std::string& assignment : opts.overrides) {
    file.apply_override(assignment);
  }
  if (opts.modes > 0) file.set("solver.modes", std::to_string(opts.modes));
  if (!opts.sign_convention.empty()) file.set("solver.sign_convention", opts.sign_convention);
  if (!opts.tip_weight.empty()) file.set("load.include_tip_weight", opts.tip_weight);
  if (opts.lambda_max > 0.0) file.set("solver.lambda_max", format_full(opts.lambda_max));
  if (opts.scan_step > 0.0) file.set("solver.scan_step", format_full(opts.scan_step));
  if (opts.refine_tol > 0.0) file.set("solver.refine_tol", format_full(opts.refine_tol));
  return load_run_config(file);
}

void print_solve_header(std::ostream& out, const CommonOptions& opts, const RunConfig& config,
                        const DimensionlessParams& params) {
  out << "# stbeam solve v" << kVersion << "\n";
  out << "# config: " << opts.config_path << "\n";
  out << "# sign_convention: " << to_string(config.solver.sign_convention) << "\n";
  out << "# tip_weight_in_axial_load: "
      << (config.physical.include_tip_weight_in_axial_load ? "on" : "off") << "\n";
  out << "# end_mass_ratio: " << format_full(params.end_mass_ratio) << "\n";
  out << "# end_inertia_ratio: " << format_full(params.end_inertia_ratio) << "\n";
  out << "# eccentricity_ratio: " << format_full(params.eccentricity_ratio) << "\n";
  out << "# axial_load_at_base: " << format_full(params.axial_load_at_base) << "\n";
  out << "# axial_load_slope: " << format_full(params.axial_load_slope) << "\n";
  out << "# scan: lambda_max=" << config.solver.scan.lambda_max
      << " step=" << config.solver.scan.step << " refine_tol=" << config.solver.scan.refine_tol
      << "\n";
  out << "# series: rel_tolerance=" << config.solver.policy.relative_tolerance
      << " max_terms=" << config.solver.policy.max_terms << "\n";
}

void print_eigen_table(std::ostream& out, const EigenResult& result) {
  out << "mode,Lambda,lambda,omega_rad_per_s,residual\n";
  for (std::size_t i = 0; i < result.eigenvalues.size(); ++i) {
    out << (i + 1) << "," << format_full(result.eigenvalues[i]) << ","
        << format_full(result.frequency_parameters[i]) << ","
        << format_full(result.dimensional_frequencies[i]) << ","
        << format_full(result.residuals[i]) << "\n";
  }
}

int run_solve(const CommonOptions& opts) {
  const RunConfig config = load_config(opts);
  const DimensionlessParams params = nondimensionalize(config.physical);
  const CharacteristicContext ctx{params, config.solver.policy, config.solver.sign_convention};
  const EigenResult result = find_eigenvalues(ctx, config.solver.n_modes, config.solver.scan);

  print_solve_header(std::cout, opts, config, params);
  for (const std::string& warning : result.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  if (result.buckled) {
    std::cout << "buckled: the structure has no positive lowest eigenvalue";
    if (result.first_negative_root) {
      std::cout << " (first negative root Lambda = " << format_full(*result.first_negative_root)
                << ")";
    }
    std::cout << "\n";
    print_eigen_table(std::cout, result);
    return kExitBuckled;
  }
  print_eigen_table(std::cout, result);

  if (!opts.out_path.empty()) {
    std::ofstream out(opts.out_path);
    if (!out) throw ConfigError("cannot open output path: " + opts.out_path);
    print_solve_header(out, opts, config, params);
    print_eigen_table(out, result);
  }
  return kExitOk;
}

struct SweepOptions {
  CommonOptions common;
  std::string parameter;
  std::string values_text;
  std::string range_text;  // lo:hi:count
};

std::vector<double> parse_sweep_values(const SweepOptions& opts) {
  std::vector<double> values;
  if (!opts.values_text.empty()) {
    std::stringstream ss(opts.values_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        values.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("cannot parse sweep value '" + item + "'");
      }
    }
  } else if (!opts.range_text.empty()) {
    double lo = 0.0, hi = 0.0;
    int count = 0;
    if (std::sscanf(opts.range_text.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2 ||
        !(hi > lo)) {
      throw ConfigError("range must be lo:hi:count with hi > lo and count >= 2");
    }
    for (int i = 0; i < count; ++i) {
      values.push_back(lo + (hi - lo) * (static_cast<double>(i) / (count - 1)));
    }
  } else {
    throw ConfigError("sweep needs --values or --range");
  }
  return values;
}

SweptParameter parse_swept_parameter(const std::string& name) {
  if (name == "length") return SweptParameter::length;
  if (name == "end_mass") return SweptParameter::end_mass;
  if (name == "end_inertia") return SweptParameter::end_inertia;
  if (name == "eccentricity") return SweptParameter::eccentricity;
  throw ConfigError("unknown sweep parameter: " + name);
}

int run_sweep_command(const SweepOptions& opts) {
  const RunConfig config = load_config(opts.common);
  SweepSpec spec;
  spec.base = config.physical;
  spec.swept_parameter = parse_swept_parameter(opts.parameter);
  spec.values = parse_sweep_values(opts);
  spec.n_modes = config.solver.n_modes;
  spec.sign_convention = config.solver.sign_convention;
  spec.policy = config.solver.policy;
  spec.scan = config.solver.scan;
  spec.output_path = opts.common.out_path;

  const SweepResult result = run_sweep(spec, config.solver.scan.mode);
  if (opts.common.out_path.empty()) {
    write_sweep_csv(result, std::cout);
  } else if (opts.common.verbosity > 0) {
    std::cerr << "wrote " << result.rows.size() << " rows to " << opts.common.out_path << "\n";
  }
  return kExitOk;
}

struct TableOptions {
  std::string which = "both";
  std::string out_path;
  bool serial = false;
};

int run_table_command(const TableOptions& opts) {
  std::vector<TableId> ids;
  if (opts.which == "table2" || opts.which == "both") ids.push_back(TableId::table2);
  if (opts.which == "table3" || opts.which == "both") ids.push_back(TableId::table3);

  std::ofstream file;
  if (!opts.out_path.empty()) {
    file.open(opts.out_path);
    if (!file) throw ConfigError("cannot open output path: " + opts.out_path);
  }
  const ExecutionMode mode = opts.serial ? ExecutionMode::serial : ExecutionMode::parallel;
  for (TableId id : ids) {
    const TableReport report = reproduce_table(id, mode);
    write_table_report_text(report, std::cout);
    std::cout << "\n";
    if (file.is_open()) write_table_report_csv(report, file);
  }
  return kExitOk;
}

struct ModeShapeOptions {
  CommonOptions common;
  int mode_index = 1;
  int grid_points = 0;  // 0: take from config
};

int run_modeshape_command(const ModeShapeOptions& opts) {
  if (opts.mode_index < 1) throw ConfigError("--mode must be at least 1");
  const RunConfig config = load_config(opts.common);
  const DimensionlessParams params = nondimensionalize(config.physical);
  const CharacteristicContext ctx{params, config.solver.policy, config.solver.sign_convention};

  ScanSettings scan = config.solver.scan;
  EigenResult result;
  try {
    result = find_eigenvalues(ctx, opts.mode_index, scan);
  } catch (const InsufficientRangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInsufficientRange;
  }
  if (static_cast<int>(result.eigenvalues.size()) < opts.mode_index) {
    std::cerr << "error: structure is buckled and only " << result.eigenvalues.size()
              << " positive modes exist below lambda_max\n";
    return kExitBuckled;
  }
  if (result.buckled) {
    std::cerr << "warning: structure is buckled; the requested mode sits above the lost one\n";
  }

  const int grid = opts.grid_points > 0 ? opts.grid_points : config.solver.grid_points;
  const double eigenvalue = result.eigenvalues[static_cast<std::size_t>(opts.mode_index - 1)];
  const ModeShape shape = mode_shape(eigenvalue, ctx, grid);

  if (opts.common.out_path.empty()) {
    write_mode_shape_csv(shape, eigenvalue, opts.mode_index, std::cout);
  } else {
    std::ofstream out(opts.common.out_path);
    if (!out) throw ConfigError("cannot open output path: " + opts.common.out_path);
    write_mode_shape_csv(shape, eigenvalue, opts.mode_index, out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eigenvalues of a standing cantilever beam with an eccentric end rigid body"};
  app.set_version_flag("--version", std::string("stbeam ") + kVersion);
  app.require_subcommand(1);

  CommonOptions solve_opts;
  CLI::App* solve_cmd = app.add_subcommand("solve", "eigenvalues for one configuration");
  add_common_options(solve_cmd, solve_opts);

  SweepOptions sweep_opts;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter and write CSV rows");
  add_common_options(sweep_cmd, sweep_opts.common);
  sweep_cmd->add_option("--param", sweep_opts.parameter,
                        "length | end_mass | end_inertia | eccentricity")
      ->required()
      ->check(CLI::IsMember({"length", "end_mass", "end_inertia", "eccentricity"}));
  sweep_cmd->add_option("--values", sweep_opts.values_text, "comma-separated values (SI units)");
  sweep_cmd->add_option("--range", sweep_opts.range_text, "lo:hi:count (inclusive, uniform)");

  TableOptions table_opts;
  CLI::App* table_cmd =
      app.add_subcommand("table", "reproduce the bundled reference eigenvalue tables");
  table_cmd->add_option("--which", table_opts.which, "table2 | table3 | both")
      ->check(CLI::IsMember({"table2", "table3", "both"}));
  table_cmd->add_option("--out", table_opts.out_path, "also write the comparison as CSV");
  table_cmd->add_flag("--serial", table_opts.serial, "run the study on one thread");

  ModeShapeOptions shape_opts;
  CLI::App* shape_cmd = app.add_subcommand("modeshape", "export one mode shape as (z, eta) CSV");
  add_common_options(shape_cmd, shape_opts.common);
  shape_cmd->add_option("--mode", shape_opts.mode_index, "1-based mode index")->required();
  shape_cmd->add_option("--grid", shape_opts.grid_points, "number of sample points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(solve_opts);
    if (sweep_cmd->parsed()) return run_sweep_command(sweep_opts);
    if (table_cmd->parsed()) return run_table_command(table_opts);
    if (shape_cmd->parsed()) return run_modeshape_command(shape_opts);
  } catch (const InsufficientRangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInsufficientRange;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
