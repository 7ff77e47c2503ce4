#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stbeam/beam_model.hpp"
#include "stbeam/frobenius.hpp"

namespace stbeam {

// Two published sign variants of the tip shear boundary condition. `derived`
// carries +p(1)*eta'(1) (the variationally consistent form), `printed`
// carries -p(1)*eta'(1). They coincide whenever p(1) = 0, e.g. when the
// tip-body weight is excluded from the axial load. The bundled reference
// tables are reproduced by `derived`.
enum class SignConvention { derived, printed };

inline const char* to_string(SignConvention c) {
  return c == SignConvention::derived ? "derived" : "printed";
}

// Kernel selection for the grid scan and the sweep harness. `serial` is the
// reference path; `parallel` runs the same pure evaluations under OpenMP and
// produces bitwise-identical results.
enum class ExecutionMode { serial, parallel };

inline const char* to_string(ExecutionMode m) {
  return m == ExecutionMode::serial ? "serial" : "parallel";
}

struct CharacteristicContext {
  DimensionlessParams params;
  TruncationPolicy policy;
  SignConvention sign_convention = SignConvention::derived;
};

// Characteristic determinant D(Lambda). Builds the two basis solutions that
// satisfy the clamped end (eta_2, eta_3), evaluates them at z = 1 and returns
//
//   D = B1(eta_3) B2(eta_2) - B1(eta_2) B2(eta_3)
//
// with the tip-body boundary operators
//
//   B1(eta) = eta'''(1) + s p(1) eta'(1) + Lambda M [eta(1) + e eta'(1)]
//   B2(eta) = eta''(1) - Lambda [M e eta(1) + (J + M e^2) eta'(1)]
//
// where s = +1 (derived) or -1 (printed). Eigenvalues are the zeros of D.
// Never returns a non-finite value; throws SeriesRangeError instead.
double characteristic_value(double trial_eigenvalue, const CharacteristicContext& ctx);

// Root search settings. The scan grid is uniform in the fourth root of the
// eigenvalue (roots are asymptotically uniform there), candidate cells are
// re-scanned at step/10 to split paired roots, and each bracket is bisected
// to relative width refine_tol.
struct ScanSettings {
  double lambda_max = 12.0;
  double step = 0.02;
  double refine_tol = 1e-10;
  ExecutionMode mode = ExecutionMode::parallel;
};

struct Bracket {
  double lo = 0.0;  // eigenvalue-space interval the root was refined within
  double hi = 0.0;
};

// Output of the generic sign-change scan, shared by the Frobenius solver and
// the closed-form zero-load oracle.
struct ScanOutcome {
  std::vector<double> fourth_roots;  // ascending, one per refined root
  std::vector<Bracket> brackets;
  std::vector<double> residuals;          // |f| at each returned root
  bool origin_nonpositive = false;        // f(0) <= 0
  std::optional<double> first_negative_root;  // set when the negative axis was searched
  std::vector<std::string> warnings;
  int sign_changes_found = 0;
};

// Scans f(x^4) for x on the uniform grid {0, step, 2 step, ...} up to
// lambda_max, brackets sign changes, sub-scans each cell at step/10 and
// bisects. Stops early once n_roots roots are refined. When f(0) <= 0 the
// origin flag is set and, if search_negative_axis, the grid is mirrored onto
// negative arguments (-x^4) to locate the first negative root. f must be
// pure; grid evaluations run under the requested execution mode.
ScanOutcome scan_fourth_power_roots(const std::function<double(double)>& f, int n_roots,
                                    const ScanSettings& settings,
                                    bool search_negative_axis = false);

struct EigenResult {
  std::vector<double> eigenvalues;              // Lambda_i, ascending, > 0
  std::vector<double> frequency_parameters;     // lambda_i = Lambda_i^(1/4)
  std::vector<double> dimensional_frequencies;  // omega_i = sqrt(Lambda_i)/time_scale, rad/s
  bool buckled = false;                         // lowest root left the positive axis
  std::optional<double> first_negative_root;    // dimensionless, < 0; set when buckled
  std::vector<Bracket> brackets;
  std::vector<double> residuals;  // |D(Lambda_i)|
  std::vector<std::string> warnings;
};

// Locates the first n_roots eigenvalues by the grid scan + bisection above.
// Buckling (D(0) <= 0) sets the flag, triggers the negative-axis search and
// suppresses the fewer-roots-than-requested error; an unbuckled run that
// finds fewer than n_roots sign changes below lambda_max throws
// InsufficientRangeError.
EigenResult find_eigenvalues(const CharacteristicContext& ctx, int n_roots,
                             const ScanSettings& scan = {});

struct ModeShape {
  double basis2_weight = 0.0;  // weight of eta_2
  double basis3_weight = 0.0;  // weight of eta_3
  std::vector<double> grid;        // z, uniform on [0, 1]
  std::vector<double> deflection;  // eta(z), max |eta| = 1, tip non-negative
};

// Reconstructs the eigenfunction at a converged root: the weight vector is
// the nullspace direction of the 2x2 boundary matrix (taken from its
// better-conditioned row), sampled on grid_points uniform points and rescaled
// to unit max amplitude with non-negative tip displacement. The clamped end
// is exact by basis construction. Throws NotAnEigenvalueError when |D| is not
// small against the row norms.
ModeShape mode_shape(double eigenvalue, const CharacteristicContext& ctx, int grid_points);

}  // namespace stbeam
