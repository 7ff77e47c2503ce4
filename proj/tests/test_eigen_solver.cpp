#include <doctest.h>

#include <cmath>
#include <random>

#include "stbeam/eigen_solver.hpp"
#include "stbeam/errors.hpp"
#include "stbeam/experiments.hpp"
#include "stbeam/oracles.hpp"

using namespace stbeam;

namespace {

CharacteristicContext bare_context() {
  return CharacteristicContext{DimensionlessParams{}, {}, SignConvention::derived};
}

CharacteristicContext tip_body_context(double mass, double inertia, double ecc) {
  DimensionlessParams params;
  params.end_mass_ratio = mass;
  params.end_inertia_ratio = inertia;
  params.eccentricity_ratio = ecc;
  return CharacteristicContext{params, {}, SignConvention::derived};
}

// Independent scalar root finder for 1 + cos(b) cosh(b) = 0, used to freeze
// the classical clamped-free constants without touching the solver under test.
double classical_root(double lo, double hi) {
  const auto g = [](double b) { return std::cos(b) + 1.0 / std::cosh(b); };
  double g_lo = g(lo);
  for (int i = 0; i < 200 && (hi - lo) > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((g(mid) < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g(mid);
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

CharacteristicContext table_context(double length_m, double inertia, double ecc,
                                    SignConvention convention = SignConvention::derived) {
  const PhysicalConfig config = reference_structure(length_m, 600.0, inertia, ecc);
  return CharacteristicContext{nondimensionalize(config), {}, convention};
}

}  // namespace

TEST_CASE("characteristic value at zero eigenvalue, unloaded: 12 for any tip body") {
  // The basis pair is exactly (z^2, z^3) there and the mass terms carry a
  // factor Lambda, so the tip body drops out.
  CHECK(characteristic_value(0.0, bare_context()) == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(characteristic_value(0.0, tip_body_context(0.7, 0.2, 0.3)) ==
        doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("classical clamped-free cantilever constants") {
  const double beta1 = classical_root(1.0, 2.5);
  const double beta2 = classical_root(4.0, 5.2);
  CHECK(beta1 == doctest::Approx(1.8751040687).epsilon(1e-9));
  CHECK(beta2 == doctest::Approx(4.6940911330).epsilon(1e-9));

  const EigenResult result = find_eigenvalues(bare_context(), 2);
  REQUIRE(result.eigenvalues.size() == 2);
  CHECK_FALSE(result.buckled);
  CHECK(result.frequency_parameters[0] == doctest::Approx(beta1).epsilon(1e-8));
  CHECK(result.frequency_parameters[1] == doctest::Approx(beta2).epsilon(1e-8));
  for (std::size_t i = 0; i < 2; ++i) {
    const double lam = result.frequency_parameters[i];
    CHECK(lam * lam * lam * lam == doctest::Approx(result.eigenvalues[i]).epsilon(1e-15));
  }
}

TEST_CASE("zero-load limit agrees with the closed-form oracle on random tip bodies") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> mass_draw(0.0, 2.0);
  std::uniform_real_distribution<double> inertia_draw(0.0, 0.5);
  std::uniform_real_distribution<double> ecc_draw(-0.5, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const double mass = mass_draw(rng);
    const double inertia = inertia_draw(rng);
    const double ecc = ecc_draw(rng);
    const EigenResult series = find_eigenvalues(tip_body_context(mass, inertia, ecc), 2);
    const std::vector<double> exact = exact_zero_load_roots(mass, inertia, ecc, 2);
    REQUIRE(series.eigenvalues.size() == 2);
    CHECK(series.eigenvalues[0] == doctest::Approx(exact[0]).epsilon(1e-8));
    CHECK(series.eigenvalues[1] == doctest::Approx(exact[1]).epsilon(1e-8));
  }
}

TEST_CASE("published reference cells under the derived + tip-weight configuration") {
  SUBCASE("25 m, no rotary inertia, no eccentricity") {
    const EigenResult result = find_eigenvalues(table_context(25.0, 0.0, 0.0), 2);
    CHECK(result.frequency_parameters[0] == doctest::Approx(1.458).epsilon(5e-3));
    CHECK(result.frequency_parameters[1] == doctest::Approx(4.140).epsilon(5e-3));
  }
  SUBCASE("45 m, 10000 kg m^2, 8 m eccentricity") {
    const EigenResult result = find_eigenvalues(table_context(45.0, 10000.0, 8.0), 2);
    CHECK(result.frequency_parameters[0] == doctest::Approx(1.414).epsilon(5e-3));
    CHECK(result.frequency_parameters[1] == doctest::Approx(3.621).epsilon(5e-3));
  }
}

TEST_CASE("sign conventions coincide exactly when the load vanishes at the tip") {
  PhysicalConfig config = reference_structure(45.0, 600.0, 10000.0, 8.0);
  config.include_tip_weight_in_axial_load = false;
  const DimensionlessParams params = nondimensionalize(config);
  const CharacteristicContext derived{params, {}, SignConvention::derived};
  const CharacteristicContext printed{params, {}, SignConvention::printed};
  for (double eigenvalue : {0.5, 4.0, 60.0, 300.0}) {
    CHECK(characteristic_value(eigenvalue, derived) ==
          characteristic_value(eigenvalue, printed));
  }
}

TEST_CASE("buckling flag and negative-axis root") {
  PhysicalConfig config = reference_structure(120.0, 0.0, 0.0, 0.0);
  const CharacteristicContext ctx{nondimensionalize(config), {}, SignConvention::derived};
  const EigenResult result = find_eigenvalues(ctx, 2);
  CHECK(result.buckled);
  REQUIRE(result.first_negative_root.has_value());
  CHECK(*result.first_negative_root < 0.0);
  // Higher modes survive the first buckling.
  CHECK(result.eigenvalues.size() >= 1);

  PhysicalConfig safe = reference_structure(50.0, 0.0, 0.0, 0.0);
  const CharacteristicContext safe_ctx{nondimensionalize(safe), {}, SignConvention::derived};
  CHECK_FALSE(find_eigenvalues(safe_ctx, 2).buckled);
}

TEST_CASE("scan robustness: halving the step never changes the root count") {
  const CharacteristicContext ctx = table_context(45.0, 10000.0, 8.0);
  const auto f = [&](double trial) { return characteristic_value(trial, ctx); };
  ScanSettings coarse;
  ScanSettings fine;
  fine.step = coarse.step / 2.0;
  const ScanOutcome a = scan_fourth_power_roots(f, 20, coarse);
  const ScanOutcome b = scan_fourth_power_roots(f, 20, fine);
  CHECK(a.fourth_roots.size() == b.fourth_roots.size());
  for (std::size_t i = 0; i < a.fourth_roots.size(); ++i) {
    CHECK(a.fourth_roots[i] == doctest::Approx(b.fourth_roots[i]).epsilon(1e-9));
  }
}

TEST_CASE("brackets keep opposite signs and residuals stay below the bracket values") {
  const CharacteristicContext ctx = table_context(35.0, 5000.0, 0.0);
  const EigenResult result = find_eigenvalues(ctx, 2);
  for (std::size_t i = 0; i < result.eigenvalues.size(); ++i) {
    const double f_lo = characteristic_value(result.brackets[i].lo, ctx);
    const double f_hi = characteristic_value(result.brackets[i].hi, ctx);
    CHECK(((f_lo < 0.0) != (f_hi < 0.0)));
    CHECK(result.residuals[i] <= 1.01 * std::max(std::abs(f_lo), std::abs(f_hi)));
    // Bracket width met the relative refinement tolerance (in fourth-root space).
    const double lo = std::pow(result.brackets[i].lo, 0.25);
    const double hi = std::pow(result.brackets[i].hi, 0.25);
    CHECK(hi - lo <= 1.1 * 1e-10 * hi);
  }
}

TEST_CASE("insufficient scan range reports how many roots were found") {
  ScanSettings short_scan;
  short_scan.lambda_max = 3.0;  // only the first classical root lives below 3
  try {
    find_eigenvalues(bare_context(), 2, short_scan);
    FAIL("expected InsufficientRangeError");
  } catch (const InsufficientRangeError& e) {
    CHECK(e.found() == 1);
    CHECK(e.requested() == 2);
  }
}

TEST_CASE("serial and parallel scans are bitwise identical") {
  const CharacteristicContext ctx = table_context(55.0, 20000.0, 8.0);
  ScanSettings serial;
  serial.mode = ExecutionMode::serial;
  ScanSettings parallel;
  parallel.mode = ExecutionMode::parallel;
  const EigenResult a = find_eigenvalues(ctx, 2, serial);
  const EigenResult b = find_eigenvalues(ctx, 2, parallel);
  REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) {
    CHECK(a.eigenvalues[i] == b.eigenvalues[i]);
    CHECK(a.residuals[i] == b.residuals[i]);
    CHECK(a.brackets[i].lo == b.brackets[i].lo);
    CHECK(a.brackets[i].hi == b.brackets[i].hi);
  }
}

TEST_CASE("eigenvalues soften with rotary inertia and eccentricity trends hold") {
  double previous1 = 1e300, previous2 = 1e300;
  for (double inertia : {0.0, 5000.0, 10000.0, 15000.0, 20000.0, 25000.0}) {
    const EigenResult result = find_eigenvalues(table_context(35.0, inertia, 0.0), 2);
    CHECK(result.frequency_parameters[0] <= previous1 + 1e-12);
    CHECK(result.frequency_parameters[1] <= previous2 + 1e-12);
    previous1 = result.frequency_parameters[0];
    previous2 = result.frequency_parameters[1];
  }
  const EigenResult centered = find_eigenvalues(table_context(45.0, 20000.0, 0.0), 2);
  const EigenResult eccentric = find_eigenvalues(table_context(45.0, 20000.0, 8.0), 2);
  CHECK(eccentric.frequency_parameters[1] < centered.frequency_parameters[1]);
}

TEST_CASE("hanging beam stiffens, standing beam softens") {
  const PhysicalConfig standing = reference_structure(60.0, 0.0, 0.0, 0.0);
  PhysicalConfig hanging = standing;
  hanging.gravity = -9.81;
  PhysicalConfig weightless = standing;
  weightless.gravity = 0.0;

  const auto lambda1 = [](const PhysicalConfig& config) {
    const CharacteristicContext ctx{nondimensionalize(config), {}, SignConvention::derived};
    const EigenResult result = find_eigenvalues(ctx, 1);
    CHECK_FALSE(result.buckled);  // tension must not trip the buckling detector
    return result.frequency_parameters[0];
  };
  const double up = lambda1(standing);
  const double none = lambda1(weightless);
  const double down = lambda1(hanging);
  CHECK(up < none);
  CHECK(none < down);
}

TEST_CASE("eccentricity enters with its sign") {
  const EigenResult plus = find_eigenvalues(tip_body_context(0.5, 0.05, 0.3), 2);
  const EigenResult minus = find_eigenvalues(tip_body_context(0.5, 0.05, -0.3), 2);
  CHECK(std::abs(plus.frequency_parameters[0] - minus.frequency_parameters[0]) > 1e-6);
}

TEST_CASE("mode shape: classical first mode matches the closed form pointwise") {
  const double beta = classical_root(1.0, 2.5);
  const double eigenvalue = beta * beta * beta * beta;
  const CharacteristicContext ctx = bare_context();
  const EigenResult result = find_eigenvalues(ctx, 1);
  CHECK(result.eigenvalues[0] == doctest::Approx(eigenvalue).epsilon(1e-8));
  const ModeShape shape = mode_shape(result.eigenvalues[0], ctx, 101);

  REQUIRE(shape.grid.size() == 101);
  CHECK(shape.deflection[0] == 0.0);
  CHECK(shape.grid.back() == 1.0);

  const double sigma = (std::cosh(beta) + std::cos(beta)) / (std::sinh(beta) + std::sin(beta));
  const auto closed_form = [&](double z) {
    return std::cosh(beta * z) - std::cos(beta * z) -
           sigma * (std::sinh(beta * z) - std::sin(beta * z));
  };
  const double tip_scale = closed_form(1.0);  // tip is the amplitude maximum for mode 1
  double max_abs = 0.0;
  for (std::size_t i = 0; i < shape.grid.size(); ++i) {
    const double expected = closed_form(shape.grid[i]) / tip_scale;
    CHECK(shape.deflection[i] == doctest::Approx(expected).epsilon(1e-6));
    max_abs = std::max(max_abs, std::abs(shape.deflection[i]));
  }
  CHECK(max_abs == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(shape.deflection.back() > 0.0);
}

TEST_CASE("mode shape: boundary residual and loaded-case sanity") {
  const CharacteristicContext ctx = table_context(45.0, 10000.0, 8.0);
  const EigenResult result = find_eigenvalues(ctx, 2);
  for (std::size_t m = 0; m < 2; ++m) {
    const ModeShape shape = mode_shape(result.eigenvalues[m], ctx, 51);
    CHECK(shape.deflection[0] == 0.0);
    double max_abs = 0.0;
    for (double v : shape.deflection) max_abs = std::max(max_abs, std::abs(v));
    CHECK(max_abs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(shape.deflection.back() >= 0.0);

    // The weight vector annihilates the moment-side boundary row.
    const auto& p = ctx.params;
    const double eigenvalue = result.eigenvalues[m];
    const BoundaryState s2 = evaluate_boundary(
        build_basis(eigenvalue, p.axial_load_at_base, p.axial_load_slope, 2, ctx.policy));
    const BoundaryState s3 = evaluate_boundary(
        build_basis(eigenvalue, p.axial_load_at_base, p.axial_load_slope, 3, ctx.policy));
    const auto moment_op = [&](const BoundaryState& b) {
      return b.d2eta - eigenvalue * (p.end_mass_ratio * p.eccentricity_ratio * b.eta +
                                     (p.end_inertia_ratio +
                                      p.end_mass_ratio * p.eccentricity_ratio * p.eccentricity_ratio) *
                                         b.deta);
    };
    const double row_norm = std::hypot(moment_op(s2), moment_op(s3));
    const double weight_norm = std::hypot(shape.basis2_weight, shape.basis3_weight);
    const double residual =
        shape.basis2_weight * moment_op(s2) + shape.basis3_weight * moment_op(s3);
    CHECK(std::abs(residual) <= 1e-8 * row_norm * weight_norm);
  }
}

TEST_CASE("mode shape rejects values that are not converged roots") {
  CHECK_THROWS_AS(mode_shape(2.0, bare_context(), 11), NotAnEigenvalueError);
}
