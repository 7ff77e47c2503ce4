#include "stbeam/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "stbeam/errors.hpp"
#include "stbeam/version.hpp"

namespace stbeam {

namespace {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

PhysicalConfig with_swept_value(const PhysicalConfig& base, SweptParameter parameter,
                                double value) {
  PhysicalConfig config = base;
  switch (parameter) {
    case SweptParameter::length:
      config.length = value;
      break;
    case SweptParameter::end_mass:
      config.end_body.mass = value;
      break;
    case SweptParameter::end_inertia:
      config.end_body.rotary_inertia = value;
      break;
    case SweptParameter::eccentricity:
      config.end_body.eccentricity = value;
      break;
  }
  return config;
}

SweepRow solve_row(const SweepSpec& spec, const ScanSettings& scan, double value) {
  SweepRow row;
  row.swept_value = value;
  try {
    const PhysicalConfig config = with_swept_value(spec.base, spec.swept_parameter, value);
    const CharacteristicContext ctx{nondimensionalize(config), spec.policy,
                                    spec.sign_convention};
    const EigenResult result = find_eigenvalues(ctx, spec.n_modes, scan);
    row.buckled = result.buckled;
    if (!result.buckled) {
      row.eigenvalues = result.eigenvalues;
      row.frequency_parameters = result.frequency_parameters;
      row.dimensional_frequencies = result.dimensional_frequencies;
      row.residuals = result.residuals;
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

void write_scan_metadata(std::ostream& out, const TruncationPolicy& policy,
                         const ScanSettings& scan) {
  out << "# scan_lambda_max: " << format_short(scan.lambda_max) << "\n";
  out << "# scan_step: " << format_short(scan.step) << "\n";
  out << "# refine_tol: " << format_short(scan.refine_tol) << "\n";
  out << "# series_rel_tolerance: " << format_short(policy.relative_tolerance) << "\n";
  out << "# series_max_terms: " << policy.max_terms << "\n";
}

double cell_deviation(const TableCell& cell) {
  const double d1 = std::abs(cell.rel_dev1);
  const double d2 = std::abs(cell.rel_dev2);
  if (!std::isfinite(d1) || !std::isfinite(d2)) return INFINITY;
  return std::max(d1, d2);
}

}  // namespace

const char* to_string(SweptParameter p) {
  switch (p) {
    case SweptParameter::length: return "length";
    case SweptParameter::end_mass: return "end_mass";
    case SweptParameter::end_inertia: return "end_inertia";
    case SweptParameter::eccentricity: return "eccentricity";
  }
  return "?";
}

const char* unit_of(SweptParameter p) {
  switch (p) {
    case SweptParameter::length: return "m";
    case SweptParameter::end_mass: return "kg";
    case SweptParameter::end_inertia: return "kg_m2";
    case SweptParameter::eccentricity: return "m";
  }
  return "?";
}

const char* to_string(TableId id) { return id == TableId::table2 ? "table2" : "table3"; }

SweepResult run_sweep(const SweepSpec& spec, ExecutionMode mode) {
  if (spec.values.empty()) throw ConfigError("sweep values must be non-empty");
  for (std::size_t i = 1; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > spec.values[i - 1])) {
      throw ConfigError("sweep values must be strictly increasing");
    }
  }
  if (spec.n_modes < 1) throw ConfigError("sweep needs at least one mode");

  SweepResult result;
  result.swept_name = to_string(spec.swept_parameter);
  result.swept_unit = unit_of(spec.swept_parameter);
  result.n_modes = spec.n_modes;
  result.sign_convention = spec.sign_convention;
  result.tip_weight_in_axial_load = spec.base.include_tip_weight_in_axial_load;
  result.policy = spec.policy;
  result.scan = spec.scan;
  result.timestamp = utc_timestamp();
  result.version = kVersion;
  result.rows.resize(spec.values.size());

  // Parallelism lives at row level; each row runs the scan serially.
  ScanSettings row_scan = spec.scan;
  row_scan.mode = ExecutionMode::serial;
  const auto n = static_cast<std::int64_t>(spec.values.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (mode == ExecutionMode::parallel)
#else
  (void)mode;
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    result.rows[static_cast<std::size_t>(i)] =
        solve_row(spec, row_scan, spec.values[static_cast<std::size_t>(i)]);
  }

  if (!spec.output_path.empty()) {
    write_sweep_csv(result, spec.output_path);
  }
  return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << "# stbeam sweep v" << result.version << "\n";
  out << "# generated: " << result.timestamp << "\n";
  out << "# swept_parameter: " << result.swept_name << "\n";
  out << "# swept_unit: " << result.swept_unit << "\n";
  out << "# n_modes: " << result.n_modes << "\n";
  out << "# sign_convention: " << to_string(result.sign_convention) << "\n";
  out << "# tip_weight_in_axial_load: " << (result.tip_weight_in_axial_load ? "on" : "off")
      << "\n";
  write_scan_metadata(out, result.policy, result.scan);

  out << result.swept_name << "_" << result.swept_unit;
  for (int m = 1; m <= result.n_modes; ++m) out << ",Lambda_" << m;
  for (int m = 1; m <= result.n_modes; ++m) out << ",lambda_" << m;
  for (int m = 1; m <= result.n_modes; ++m) out << ",omega_" << m << "_rad_per_s";
  out << ",buckled";
  for (int m = 1; m <= result.n_modes; ++m) out << ",residual_" << m;
  out << ",error\n";

  for (const SweepRow& row : result.rows) {
    out << format_full(row.swept_value);
    const auto emit = [&](const std::vector<double>& values) {
      for (int m = 0; m < result.n_modes; ++m) {
        out << ",";
        if (m < static_cast<int>(values.size())) out << format_full(values[static_cast<std::size_t>(m)]);
      }
    };
    emit(row.eigenvalues);
    emit(row.frequency_parameters);
    emit(row.dimensional_frequencies);
    out << "," << (row.buckled ? 1 : 0);
    emit(row.residuals);
    out << "," << csv_escape(row.error) << "\n";
  }
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output path: " + path);
  write_sweep_csv(result, out);
  if (!out) throw ConfigError("write failed: " + path);
}

PhysicalConfig reference_structure(double length_m, double tip_mass_kg,
                                   double tip_rotary_inertia_kg_m2, double tip_eccentricity_m) {
  PhysicalConfig config;
  config.modulus_of_elasticity = 7.9336e9;
  config.linear_mass_density = 61.08;
  config.length = length_m;
  config.cross_section = AnnularSection{1.238, 1.219};
  config.end_body = EndBody{tip_mass_kg, tip_rotary_inertia_kg_m2, tip_eccentricity_m};
  config.gravity = 9.81;
  config.include_tip_weight_in_axial_load = true;
  return config;
}

const ReferenceTable& reference_table(TableId id) {
  static const ReferenceTable table2 = {
      {25.0, 35.0, 45.0, 55.0, 65.0},
      {0.0, 5000.0, 10000.0, 15000.0, 20000.0, 25000.0},
      600.0,
      0.0,
      {{{1.458, 1.452, 1.446, 1.439, 1.433, 1.427},
        {1.505, 1.502, 1.499, 1.497, 1.494, 1.491},
        {1.508, 1.506, 1.505, 1.503, 1.502, 1.500},
        {1.465, 1.464, 1.463, 1.463, 1.462, 1.461},
        {1.357, 1.356, 1.356, 1.355, 1.355, 1.354}}},
      {{{4.140, 3.875, 3.646, 3.464, 3.320, 3.202},
        {4.188, 4.079, 3.972, 3.871, 3.778, 3.692},
        {4.219, 4.164, 4.108, 4.054, 4.000, 3.949},
        {4.234, 4.202, 4.170, 4.139, 4.107, 4.076},
        {4.234, 4.214, 4.194, 4.174, 4.154, 4.134}}},
  };
  static const ReferenceTable table3 = {
      {25.0, 35.0, 45.0, 55.0, 65.0},
      {0.0, 5000.0, 10000.0, 15000.0, 20000.0, 25000.0},
      600.0,
      8.0,
      {{{1.266, 1.262, 1.258, 1.255, 1.251, 1.247},
        {1.376, 1.373, 1.371, 1.369, 1.367, 1.365},
        {1.417, 1.415, 1.414, 1.413, 1.412, 1.411},
        {1.399, 1.399, 1.398, 1.397, 1.397, 1.396},
        {1.310, 1.310, 1.309, 1.309, 1.308, 1.308}}},
      {{{3.280, 3.215, 3.157, 3.104, 3.055, 3.011},
        {3.509, 3.466, 3.426, 3.388, 3.352, 3.317},
        {3.678, 3.649, 3.621, 3.594, 3.568, 3.542},
        {3.800, 3.780, 3.760, 3.741, 3.722, 3.703},
        {3.881, 3.867, 3.853, 3.839, 3.825, 3.812}}},
  };
  return id == TableId::table2 ? table2 : table3;
}

std::array<TableConfiguration, 4> table_configurations() {
  return {{{SignConvention::derived, true},
           {SignConvention::derived, false},
           {SignConvention::printed, true},
           {SignConvention::printed, false}}};
}

TableReport reproduce_table(TableId id, ExecutionMode mode, const TruncationPolicy& policy,
                            const ScanSettings& scan) {
  const ReferenceTable& ref = reference_table(id);
  TableReport report;
  report.table = id;
  report.timestamp = utc_timestamp();
  report.version = kVersion;

  ScanSettings cell_scan = scan;
  cell_scan.mode = ExecutionMode::serial;

  for (const TableConfiguration& configuration : table_configurations()) {
    TableComparison comparison;
    comparison.table = id;
    comparison.configuration = configuration;
    const int n_cells = static_cast<int>(ref.lengths_m.size() * ref.inertias_kg_m2.size());
    comparison.cells.resize(static_cast<std::size_t>(n_cells));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (mode == ExecutionMode::parallel)
#else
    (void)mode;
#endif
    for (int c = 0; c < n_cells; ++c) {
      const auto li = static_cast<std::size_t>(c) / ref.inertias_kg_m2.size();
      const auto ji = static_cast<std::size_t>(c) % ref.inertias_kg_m2.size();
      TableCell cell;
      cell.length_m = ref.lengths_m[li];
      cell.rotary_inertia_kg_m2 = ref.inertias_kg_m2[ji];
      cell.printed_lambda1 = ref.lambda1[li][ji];
      cell.printed_lambda2 = ref.lambda2[li][ji];
      try {
        PhysicalConfig config = reference_structure(cell.length_m, ref.tip_mass_kg,
                                                    cell.rotary_inertia_kg_m2, ref.eccentricity_m);
        config.include_tip_weight_in_axial_load = configuration.tip_weight_in_axial_load;
        const CharacteristicContext ctx{nondimensionalize(config), policy,
                                        configuration.sign_convention};
        const EigenResult result = find_eigenvalues(ctx, 2, cell_scan);
        cell.computed_lambda1 = result.frequency_parameters[0];
        cell.computed_lambda2 = result.frequency_parameters[1];
        cell.rel_dev1 = (cell.computed_lambda1 - cell.printed_lambda1) / cell.printed_lambda1;
        cell.rel_dev2 = (cell.computed_lambda2 - cell.printed_lambda2) / cell.printed_lambda2;
      } catch (const std::exception&) {
        cell.computed_lambda1 = NAN;
        cell.computed_lambda2 = NAN;
        cell.rel_dev1 = INFINITY;
        cell.rel_dev2 = INFINITY;
      }
      comparison.cells[static_cast<std::size_t>(c)] = cell;
    }

    comparison.max_abs_rel_dev = 0.0;
    for (const TableCell& cell : comparison.cells) {
      comparison.max_abs_rel_dev = std::max(comparison.max_abs_rel_dev, cell_deviation(cell));
    }
    report.runs.push_back(std::move(comparison));
  }

  report.best_run = 0;
  for (std::size_t r = 1; r < report.runs.size(); ++r) {
    if (report.runs[r].max_abs_rel_dev < report.runs[static_cast<std::size_t>(report.best_run)].max_abs_rel_dev) {
      report.best_run = static_cast<int>(r);
    }
  }
  return report;
}

void write_table_report_text(const TableReport& report, std::ostream& out) {
  const ReferenceTable& ref = reference_table(report.table);
  out << "reference-table reproduction: " << to_string(report.table) << " (tip mass "
      << format_short(ref.tip_mass_kg) << " kg, eccentricity " << format_short(ref.eccentricity_m)
      << " m)\n";
  for (std::size_t r = 0; r < report.runs.size(); ++r) {
    const TableComparison& run = report.runs[r];
    out << "\nconfiguration: sign_convention=" << to_string(run.configuration.sign_convention)
        << ", tip_weight=" << (run.configuration.tip_weight_in_axial_load ? "on" : "off") << "\n";
    out << "   L(m)   J(kg m^2)   printed_l1  computed_l1     dev%   printed_l2  computed_l2     dev%\n";
    for (const TableCell& cell : run.cells) {
      char line[160];
      std::snprintf(line, sizeof(line),
                    " %6.0f  %10.0f  %11.3f  %11.5f  %+7.3f  %11.3f  %11.5f  %+7.3f\n",
                    cell.length_m, cell.rotary_inertia_kg_m2, cell.printed_lambda1,
                    cell.computed_lambda1, 100.0 * cell.rel_dev1, cell.printed_lambda2,
                    cell.computed_lambda2, 100.0 * cell.rel_dev2);
      out << line;
    }
    char summary[80];
    std::snprintf(summary, sizeof(summary), "  max |dev| = %.4f%%\n",
                  100.0 * run.max_abs_rel_dev);
    out << summary;
  }
  const TableComparison& best = report.runs[static_cast<std::size_t>(report.best_run)];
  char line[160];
  std::snprintf(line, sizeof(line),
                "\nbest configuration: sign_convention=%s, tip_weight=%s (max |dev| = %.4f%%)\n",
                to_string(best.configuration.sign_convention),
                best.configuration.tip_weight_in_axial_load ? "on" : "off",
                100.0 * best.max_abs_rel_dev);
  out << line;
}

void write_table_report_csv(const TableReport& report, std::ostream& out) {
  out << "# stbeam table reproduction v" << report.version << "\n";
  out << "# generated: " << report.timestamp << "\n";
  out << "table,sign_convention,tip_weight,length_m,rotary_inertia_kg_m2,"
         "printed_lambda1,computed_lambda1,rel_dev1,"
         "printed_lambda2,computed_lambda2,rel_dev2,is_best_configuration\n";
  for (std::size_t r = 0; r < report.runs.size(); ++r) {
    const TableComparison& run = report.runs[r];
    for (const TableCell& cell : run.cells) {
      out << to_string(report.table) << "," << to_string(run.configuration.sign_convention) << ","
          << (run.configuration.tip_weight_in_axial_load ? "on" : "off") << ","
          << format_full(cell.length_m) << "," << format_full(cell.rotary_inertia_kg_m2) << ","
          << format_full(cell.printed_lambda1) << "," << format_full(cell.computed_lambda1) << ","
          << format_full(cell.rel_dev1) << "," << format_full(cell.printed_lambda2) << ","
          << format_full(cell.computed_lambda2) << "," << format_full(cell.rel_dev2) << ","
          << (static_cast<int>(r) == report.best_run ? 1 : 0) << "\n";
    }
  }
}

void write_table_report_csv(const TableReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output path: " + path);
  write_table_report_csv(report, out);
  if (!out) throw ConfigError("write failed: " + path);
}

void write_mode_shape_csv(const ModeShape& shape, double eigenvalue, int mode_index,
                          std::ostream& out) {
  out << "# stbeam mode shape v" << kVersion << "\n";
  out << "# mode_index: " << mode_index << "\n";
  out << "# eigenvalue: " << format_full(eigenvalue) << "\n";
  out << "# frequency_parameter: " << format_full(std::pow(eigenvalue, 0.25)) << "\n";
  out << "z,eta\n";
  for (std::size_t i = 0; i < shape.grid.size(); ++i) {
    out << format_full(shape.grid[i]) << "," << format_full(shape.deflection[i]) << "\n";
  }
}

}  // namespace stbeam
