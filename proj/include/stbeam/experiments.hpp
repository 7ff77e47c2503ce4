#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "stbeam/beam_model.hpp"
#include "stbeam/eigen_solver.hpp"

namespace stbeam {

enum class SweptParameter { length, end_mass, end_inertia, eccentricity };

const char* to_string(SweptParameter p);
// Unit suffix for CSV column naming ("m", "kg", "kg_m2").
const char* unit_of(SweptParameter p);

struct SweepSpec {
  PhysicalConfig base;
  SweptParameter swept_parameter = SweptParameter::length;
  std::vector<double> values;  // SI units of the swept parameter, strictly increasing
  int n_modes = 2;
  SignConvention sign_convention = SignConvention::derived;
  TruncationPolicy policy;
  ScanSettings scan;
  std::string output_path;  // empty: caller writes (or doesn't) the CSV itself
};

struct SweepRow {
  double swept_value = 0.0;
  bool buckled = false;
  // Empty on buckled or failed rows.
  std::vector<double> eigenvalues;
  std::vector<double> frequency_parameters;
  std::vector<double> dimensional_frequencies;
  std::vector<double> residuals;
  std::string error;  // per-row failure note; the sweep itself never aborts on a row
};

struct SweepResult {
  std::string swept_name;
  std::string swept_unit;
  int n_modes = 2;
  SignConvention sign_convention = SignConvention::derived;
  bool tip_weight_in_axial_load = true;
  TruncationPolicy policy;
  ScanSettings scan;
  std::string timestamp;  // ISO 8601 UTC
  std::string version;
  std::vector<SweepRow> rows;  // one per requested value, input order
};

// Runs the solver once per value (rows dispatched under `mode`, merged in
// input order) and, when spec.output_path is set, writes the CSV there.
// Throws ConfigError if the output path is unwritable.
SweepResult run_sweep(const SweepSpec& spec, ExecutionMode mode = ExecutionMode::parallel);

// CSV dialect: `#`-prefixed metadata block, one header row naming every
// column with units, comma separator, `.` decimal, LF endings. Buckled or
// failed rows leave the frequency fields empty.
void write_sweep_csv(const SweepResult& result, std::ostream& out);
void write_sweep_csv(const SweepResult& result, const std::string& path);

// ------------------------------------------------------------------
// Reference-table reproduction
// ------------------------------------------------------------------

enum class TableId { table2, table3 };

const char* to_string(TableId id);

// The structure shared by all bundled studies: a slender annular steel stack
// column, 61.08 kg/m, E = 7.9336 GPa, 1.238 m x 1.219 m section, g = 9.81.
PhysicalConfig reference_structure(double length_m, double tip_mass_kg,
                                   double tip_rotary_inertia_kg_m2, double tip_eccentricity_m);

// Published reference eigenvalues (frequency-parameter convention) the
// reproduction study compares against: 5 lengths x 6 rotary inertias, two
// modes, tip mass 600 kg, eccentricity 0 m (table2) or 8 m (table3).
struct ReferenceTable {
  std::array<double, 5> lengths_m;
  std::array<double, 6> inertias_kg_m2;
  double tip_mass_kg = 600.0;
  double eccentricity_m = 0.0;
  // [length][inertia]
  std::array<std::array<double, 6>, 5> lambda1;
  std::array<std::array<double, 6>, 5> lambda2;
};

const ReferenceTable& reference_table(TableId id);

struct TableCell {
  double length_m = 0.0;
  double rotary_inertia_kg_m2 = 0.0;
  double printed_lambda1 = 0.0;
  double printed_lambda2 = 0.0;
  double computed_lambda1 = 0.0;
  double computed_lambda2 = 0.0;
  double rel_dev1 = 0.0;  // (computed - printed) / printed
  double rel_dev2 = 0.0;
};

struct TableConfiguration {
  SignConvention sign_convention = SignConvention::derived;
  bool tip_weight_in_axial_load = true;
};

// The four configurations a reproduction runs under, in fixed order.
std::array<TableConfiguration, 4> table_configurations();

struct TableComparison {
  TableId table = TableId::table2;
  TableConfiguration configuration;
  std::vector<TableCell> cells;  // 30, row-major over (length, inertia)
  double max_abs_rel_dev = 0.0;
};

struct TableReport {
  TableId table = TableId::table2;
  std::vector<TableComparison> runs;  // one per configuration
  int best_run = 0;                   // argmin of max_abs_rel_dev
  std::string timestamp;
  std::string version;
};

// Runs the full 5x6 grid for both modes under every configuration and ranks
// them by worst-cell deviation.
TableReport reproduce_table(TableId id, ExecutionMode mode = ExecutionMode::parallel,
                            const TruncationPolicy& policy = {}, const ScanSettings& scan = {});

// Side-by-side computed vs printed values, per-cell deviations, and the
// best-matching configuration.
void write_table_report_text(const TableReport& report, std::ostream& out);
void write_table_report_csv(const TableReport& report, std::ostream& out);
void write_table_report_csv(const TableReport& report, const std::string& path);

// (z, eta) samples of one reconstructed mode, same CSV dialect as sweeps.
void write_mode_shape_csv(const ModeShape& shape, double eigenvalue, int mode_index,
                          std::ostream& out);

}  // namespace stbeam
