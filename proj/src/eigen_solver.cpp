#include "stbeam/eigen_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <sstream>

#include "stbeam/errors.hpp"

namespace stbeam {

namespace {

double pow4(double x) {
  const double sq = x * x;
  return sq * sq;
}

bool is_negative(double v) { return v < 0.0; }

// Tip-body boundary operators applied to a boundary state. The determinant of
// the 2x2 matrix they form over the two clamped basis solutions is the
// characteristic function.
struct TipOperators {
  double load_at_tip = 0.0;
  double shear_sign = 1.0;  // +1 derived, -1 printed
  double mass = 0.0;
  double inertia = 0.0;
  double eccentricity = 0.0;

  explicit TipOperators(const CharacteristicContext& ctx)
      : load_at_tip(ctx.params.load_at(1.0)),
        shear_sign(ctx.sign_convention == SignConvention::derived ? 1.0 : -1.0),
        mass(ctx.params.end_mass_ratio),
        inertia(ctx.params.end_inertia_ratio),
        eccentricity(ctx.params.eccentricity_ratio) {}

  double shear(const BoundaryState& b, double eigenvalue) const {
    return b.d3eta + shear_sign * load_at_tip * b.deta +
           eigenvalue * mass * (b.eta + eccentricity * b.deta);
  }

  double moment(const BoundaryState& b, double eigenvalue) const {
    return b.d2eta - eigenvalue * (mass * eccentricity * b.eta +
                                   (inertia + mass * eccentricity * eccentricity) * b.deta);
  }
};

// Evaluates f over args, one output slot per point. Pure f, so the parallel
// kernel is bitwise identical to the serial reference.
void evaluate_many(const std::function<double(double)>& f, const std::vector<double>& args,
                   std::vector<double>& out, ExecutionMode mode) {
  out.resize(args.size());
  const std::int64_t n = static_cast<std::int64_t>(args.size());
#ifdef _OPENMP
  if (mode == ExecutionMode::parallel) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = f(args[static_cast<std::size_t>(i)]);
      } catch (...) {
#pragma omp critical(stbeam_evaluate_many_error)
        {
          if (!error) error = std::current_exception();
        }
      }
    }
    if (error) std::rethrow_exception(error);
    return;
  }
#else
  (void)mode;
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = f(args[static_cast<std::size_t>(i)]);
  }
}

struct Cell {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
};

struct RefinedRoot {
  double x = 0.0;
  double abs_f = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
};

// Plain bisection in fourth-root space; the bracket endpoints keep opposite
// signs until the relative width tolerance is met.
RefinedRoot bisect(const std::function<double(double)>& f, Cell cell, double rel_tol,
                   bool negative_axis) {
  const auto arg = [negative_axis](double x) { return negative_axis ? -pow4(x) : pow4(x); };
  double lo = cell.x_lo, hi = cell.x_hi;
  double f_lo = cell.f_lo;
  for (int iter = 0; iter < 200 && (hi - lo) > rel_tol * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval no longer splittable
    const double f_mid = f(arg(mid));
    if (f_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if (is_negative(f_mid) == is_negative(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  RefinedRoot root;
  root.x = 0.5 * (lo + hi);
  root.abs_f = std::abs(f(arg(root.x)));
  root.x_lo = lo;
  root.x_hi = hi;
  return root;
}

void check_scan_settings(const ScanSettings& s) {
  if (!(s.step > 0.0)) throw std::invalid_argument("scan step must be positive");
  if (!(s.refine_tol > 0.0)) throw std::invalid_argument("refine tolerance must be positive");
  if (!(s.lambda_max > s.step)) {
    throw std::invalid_argument("lambda_max must exceed the scan step");
  }
}

}  // namespace

double characteristic_value(double trial_eigenvalue, const CharacteristicContext& ctx) {
  if (!std::isfinite(trial_eigenvalue)) {
    throw std::invalid_argument("trial eigenvalue must be finite");
  }
  const auto& p = ctx.params;
  const SeriesBasis basis2 =
      build_basis(trial_eigenvalue, p.axial_load_at_base, p.axial_load_slope, 2, ctx.policy);
  const SeriesBasis basis3 =
      build_basis(trial_eigenvalue, p.axial_load_at_base, p.axial_load_slope, 3, ctx.policy);
  const BoundaryState state2 = evaluate_boundary(basis2);
  const BoundaryState state3 = evaluate_boundary(basis3);

  const TipOperators ops(ctx);
  const double det = ops.shear(state3, trial_eigenvalue) * ops.moment(state2, trial_eigenvalue) -
                     ops.shear(state2, trial_eigenvalue) * ops.moment(state3, trial_eigenvalue);
  if (!std::isfinite(det)) {
    std::ostringstream msg;
    msg << "characteristic value not finite at trial eigenvalue " << trial_eigenvalue;
    throw SeriesRangeError(msg.str());
  }
  return det;
}

ScanOutcome scan_fourth_power_roots(const std::function<double(double)>& f, int n_roots,
                                    const ScanSettings& settings, bool search_negative_axis) {
  if (n_roots < 1) throw std::invalid_argument("n_roots must be at least 1");
  check_scan_settings(settings);

  const int n_points = static_cast<int>(std::floor(settings.lambda_max / settings.step + 1e-9)) + 1;
  std::vector<double> xs(static_cast<std::size_t>(n_points));
  std::vector<double> args(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k) {
    xs[static_cast<std::size_t>(k)] = k * settings.step;
    args[static_cast<std::size_t>(k)] = pow4(xs[static_cast<std::size_t>(k)]);
  }
  std::vector<double> vals;
  evaluate_many(f, args, vals, settings.mode);

  ScanOutcome outcome;
  outcome.origin_nonpositive = !(vals[0] > 0.0);

  // Candidate cells from sign changes on the coarse grid.
  std::vector<Cell> cells;
  for (int k = 1; k < n_points; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    if (is_negative(vals[ku - 1]) != is_negative(vals[ku])) {
      cells.push_back({xs[ku - 1], xs[ku], vals[ku - 1], vals[ku]});
    }
  }
  outcome.sign_changes_found = static_cast<int>(cells.size());

  // A deep same-sign dip is the signature of a near-tangent root pair the
  // grid cannot split; report it rather than guess.
  for (int k = 1; k + 1 < n_points; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    if (is_negative(vals[ku - 1]) == is_negative(vals[ku]) &&
        is_negative(vals[ku]) == is_negative(vals[ku + 1])) {
      const double neighbors = std::min(std::abs(vals[ku - 1]), std::abs(vals[ku + 1]));
      if (vals[ku] != 0.0 && std::abs(vals[ku]) < 1e-8 * neighbors) {
        std::ostringstream msg;
        msg << "possible unresolved root pair near fourth-root value " << xs[ku]
            << " (deep same-sign dip)";
        outcome.warnings.push_back(msg.str());
      }
    }
  }

  // Sub-scan each candidate cell at step/10; paired roots inside one cell
  // show up as extra sign changes here.
  std::vector<Cell> brackets;
  for (const Cell& cell : cells) {
    std::vector<double> sub_x(11), sub_args(9);
    for (int j = 0; j <= 10; ++j) {
      sub_x[static_cast<std::size_t>(j)] =
          cell.x_lo + (cell.x_hi - cell.x_lo) * (j / 10.0);
    }
    for (int j = 1; j <= 9; ++j) {
      sub_args[static_cast<std::size_t>(j - 1)] = pow4(sub_x[static_cast<std::size_t>(j)]);
    }
    std::vector<double> sub_vals;
    evaluate_many(f, sub_args, sub_vals, settings.mode);

    std::vector<double> fv(11);
    fv[0] = cell.f_lo;
    for (int j = 1; j <= 9; ++j) fv[static_cast<std::size_t>(j)] = sub_vals[static_cast<std::size_t>(j - 1)];
    fv[10] = cell.f_hi;

    int found_here = 0;
    for (int j = 1; j <= 10; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (is_negative(fv[ju - 1]) != is_negative(fv[ju])) {
        brackets.push_back({sub_x[ju - 1], sub_x[ju], fv[ju - 1], fv[ju]});
        ++found_here;
      }
    }
    if (found_here == 0) {
      brackets.push_back(cell);  // sub-grid flake; fall back to the parent bracket
    } else if (found_here > 1) {
      std::ostringstream msg;
      msg << found_here << " roots inside one scan cell [" << cell.x_lo << ", " << cell.x_hi
          << "]; consider a finer scan step";
      outcome.warnings.push_back(msg.str());
    }
  }
  std::sort(brackets.begin(), brackets.end(),
            [](const Cell& a, const Cell& b) { return a.x_lo < b.x_lo; });

  for (const Cell& bracket : brackets) {
    if (static_cast<int>(outcome.fourth_roots.size()) >= n_roots) break;
    const RefinedRoot root = bisect(f, bracket, settings.refine_tol, /*negative_axis=*/false);
    if (!outcome.fourth_roots.empty() &&
        root.x - outcome.fourth_roots.back() <= 4.0 * settings.refine_tol * root.x) {
      continue;  // two brackets collapsed onto one root (shared grid zero)
    }
    outcome.fourth_roots.push_back(root.x);
    outcome.brackets.push_back({pow4(root.x_lo), pow4(root.x_hi)});
    outcome.residuals.push_back(root.abs_f);
  }

  if (outcome.origin_nonpositive && search_negative_axis) {
    if (vals[0] == 0.0) {
      outcome.first_negative_root = 0.0;
    } else {
      double prev_x = 0.0;
      double prev_f = vals[0];
      for (int k = 1; k < n_points; ++k) {
        const double x = xs[static_cast<std::size_t>(k)];
        const double value = f(-pow4(x));
        if (is_negative(prev_f) != is_negative(value)) {
          const RefinedRoot root =
              bisect(f, {prev_x, x, prev_f, value}, settings.refine_tol, /*negative_axis=*/true);
          outcome.first_negative_root = -pow4(root.x);
          break;
        }
        prev_x = x;
        prev_f = value;
      }
      if (!outcome.first_negative_root) {
        outcome.warnings.push_back("no negative-axis root found below the scan limit");
      }
    }
  }
  return outcome;
}

EigenResult find_eigenvalues(const CharacteristicContext& ctx, int n_roots,
                             const ScanSettings& scan) {
  if (n_roots < 1) throw std::invalid_argument("n_roots must be at least 1");

  const auto f = [&ctx](double trial) { return characteristic_value(trial, ctx); };
  const ScanOutcome outcome = scan_fourth_power_roots(f, n_roots, scan, /*search_negative_axis=*/true);

  EigenResult result;
  result.buckled = outcome.origin_nonpositive;
  result.first_negative_root = outcome.first_negative_root;
  result.warnings = outcome.warnings;
  result.brackets = outcome.brackets;
  result.residuals = outcome.residuals;
  for (double x : outcome.fourth_roots) {
    const double eigenvalue = pow4(x);
    result.eigenvalues.push_back(eigenvalue);
    result.frequency_parameters.push_back(x);
    result.dimensional_frequencies.push_back(std::sqrt(eigenvalue) / ctx.params.time_scale);
  }

  if (!result.buckled && static_cast<int>(result.eigenvalues.size()) < n_roots) {
    std::ostringstream msg;
    msg << "found " << result.eigenvalues.size() << " of " << n_roots
        << " requested roots below lambda_max = " << scan.lambda_max;
    throw InsufficientRangeError(msg.str(), static_cast<int>(result.eigenvalues.size()), n_roots);
  }
  return result;
}

ModeShape mode_shape(double eigenvalue, const CharacteristicContext& ctx, int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("grid_points must be at least 2");

  const auto& p = ctx.params;
  const SeriesBasis basis2 =
      build_basis(eigenvalue, p.axial_load_at_base, p.axial_load_slope, 2, ctx.policy);
  const SeriesBasis basis3 =
      build_basis(eigenvalue, p.axial_load_at_base, p.axial_load_slope, 3, ctx.policy);
  const BoundaryState state2 = evaluate_boundary(basis2);
  const BoundaryState state3 = evaluate_boundary(basis3);

  const TipOperators ops(ctx);
  const double shear2 = ops.shear(state2, eigenvalue);
  const double shear3 = ops.shear(state3, eigenvalue);
  const double moment2 = ops.moment(state2, eigenvalue);
  const double moment3 = ops.moment(state3, eigenvalue);

  const double det = shear3 * moment2 - shear2 * moment3;
  const double shear_row = std::hypot(shear2, shear3);
  const double moment_row = std::hypot(moment2, moment3);
  if (shear_row == 0.0 || moment_row == 0.0 ||
      std::abs(det) > 1e-6 * shear_row * moment_row) {
    std::ostringstream msg;
    msg << "value " << eigenvalue << " is not a converged root (|D| = " << std::abs(det)
        << " against row norms " << shear_row << ", " << moment_row << ")";
    throw NotAnEigenvalueError(msg.str());
  }

  // Nullspace direction from the better-conditioned row.
  ModeShape shape;
  if (shear_row >= moment_row) {
    shape.basis2_weight = -shear3;
    shape.basis3_weight = shear2;
  } else {
    shape.basis2_weight = -moment3;
    shape.basis3_weight = moment2;
  }

  shape.grid.resize(static_cast<std::size_t>(grid_points));
  shape.deflection.resize(static_cast<std::size_t>(grid_points));
  double max_abs = 0.0;
  for (int j = 0; j < grid_points; ++j) {
    const double z = static_cast<double>(j) / static_cast<double>(grid_points - 1);
    const double value = shape.basis2_weight * evaluate_series(basis2, z) +
                         shape.basis3_weight * evaluate_series(basis3, z);
    shape.grid[static_cast<std::size_t>(j)] = z;
    shape.deflection[static_cast<std::size_t>(j)] = value;
    max_abs = std::max(max_abs, std::abs(value));
  }
  if (max_abs == 0.0) {
    throw NotAnEigenvalueError("mode shape vanished identically");
  }

  double scale = 1.0 / max_abs;
  const double tip = shape.deflection.back();
  if (std::abs(tip) > 1e-12 * max_abs) {
    if (tip < 0.0) scale = -scale;
  } else {
    // Near-node tip: orient by the largest sample instead.
    const auto peak = std::max_element(
        shape.deflection.begin(), shape.deflection.end(),
        [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (*peak < 0.0) scale = -scale;
  }
  for (double& v : shape.deflection) {
    v *= scale;
    if (v == 0.0) v = 0.0;  // keep the clamped end at +0
  }
  shape.basis2_weight *= scale;
  shape.basis3_weight *= scale;
  return shape;
}

}  // namespace stbeam
