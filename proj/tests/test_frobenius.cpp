#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "stbeam/errors.hpp"
#include "stbeam/frobenius.hpp"

using namespace stbeam;

namespace {

// Closed-form boundary values of the delta-normalized fundamental solutions
// of the constant-coefficient limit eta'''' = Lambda eta:
//   eta_0 = (cosh bz + cos bz)/2          eta_1 = (sinh bz + sin bz)/(2b)
//   eta_2 = (cosh bz - cos bz)/b^2        eta_3 = 3 (sinh bz - sin bz)/b^3
BoundaryState constant_coefficient_boundary(double eigenvalue, int root) {
  const double b = std::pow(eigenvalue, 0.25);
  const double c = std::cos(b), s = std::sin(b);
  const double ch = std::cosh(b), sh = std::sinh(b);
  switch (root) {
    case 0:
      return {(ch + c) / 2.0, b * (sh - s) / 2.0, b * b * (ch - c) / 2.0,
              b * b * b * (sh + s) / 2.0, 0.0};
    case 1:
      return {(sh + s) / (2.0 * b), (ch + c) / 2.0, b * (sh - s) / 2.0,
              b * b * (ch - c) / 2.0, 0.0};
    case 2:
      return {(ch - c) / (b * b), (sh + s) / b, ch + c, b * (sh - s), 0.0};
    case 3:
      return {3.0 * (sh - s) / (b * b * b), 3.0 * (ch - c) / (b * b), 3.0 * (sh + s) / b,
              3.0 * (ch + c), 0.0};
    default:
      throw std::invalid_argument("root");
  }
}

}  // namespace

TEST_CASE("recurrence: unloaded zero-eigenvalue basis is exactly z^r") {
  const SeriesBasis basis = build_basis(0.0, 0.0, 0.0, 2);
  CHECK(basis.truncation_order() >= 8);
  for (int n = 0; n <= basis.truncation_order(); ++n) {
    CHECK(basis.coefficients[static_cast<std::size_t>(n)] == (n == 2 ? 1.0 : 0.0));
  }
  const BoundaryState state = evaluate_boundary(basis);
  CHECK(state.eta == 1.0);
  CHECK(state.deta == 2.0);
  CHECK(state.d2eta == 2.0);
  CHECK(state.d3eta == 0.0);

  const BoundaryState cubic = evaluate_boundary(build_basis(0.0, 0.0, 0.0, 3));
  CHECK(cubic.eta == 1.0);
  CHECK(cubic.deta == 3.0);
  CHECK(cubic.d2eta == 6.0);
  CHECK(cubic.d3eta == 6.0);
}

TEST_CASE("recurrence: hand-computed coefficients") {
  // Three steps of the recurrence worked by hand before implementation.
  SUBCASE("Lambda = 1, no load, r = 0") {
    const SeriesBasis basis = build_basis(1.0, 0.0, 0.0, 0);
    CHECK(basis.coefficients[4] == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
    CHECK(basis.coefficients[8] ==
          doctest::Approx(1.0 / (24.0 * 1680.0)).epsilon(1e-15));
    CHECK(basis.coefficients[5] == 0.0);
    CHECK(basis.coefficients[6] == 0.0);
    CHECK(basis.coefficients[7] == 0.0);
  }
  SUBCASE("Lambda = 1, slope 1, r = 0") {
    const SeriesBasis basis = build_basis(1.0, 0.0, 1.0, 0);
    CHECK(basis.coefficients[3] == 0.0);
    CHECK(basis.coefficients[4] == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
    CHECK(basis.coefficients[5] == 0.0);
    CHECK(basis.coefficients[6] == 0.0);
    CHECK(basis.coefficients[7] ==
          doctest::Approx(-16.0 / (24.0 * 840.0)).epsilon(1e-15));
  }
}

TEST_CASE("constant-coefficient limit matches the closed-form fundamental system") {
  // Spot value from the classical first clamped-free eigenvalue.
  for (double eigenvalue : {1.0, 12.3624, 50.0, 500.0, 2000.0}) {
    for (int root = 0; root < 4; ++root) {
      const BoundaryState series =
          evaluate_boundary(build_basis(eigenvalue, 0.0, 0.0, root));
      const BoundaryState exact = constant_coefficient_boundary(eigenvalue, root);
      CHECK(series.eta == doctest::Approx(exact.eta).epsilon(1e-9));
      CHECK(series.deta == doctest::Approx(exact.deta).epsilon(1e-9));
      CHECK(series.d2eta == doctest::Approx(exact.d2eta).epsilon(1e-9));
      CHECK(series.d3eta == doctest::Approx(exact.d3eta).epsilon(1e-9));
    }
  }
}

TEST_CASE("ODE residual of the truncated series stays small on [0, 1]") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> eigen_draw(0.1, 2000.0);
  std::uniform_real_distribution<double> base_draw(-5.0, 5.0);
  std::uniform_real_distribution<double> slope_draw(-8.0, 8.0);
  std::uniform_real_distribution<double> z_draw(0.0, 1.0);
  std::uniform_int_distribution<int> root_draw(0, 3);
  for (int trial = 0; trial < 8; ++trial) {
    const double eigenvalue = eigen_draw(rng);
    const double base = base_draw(rng);
    const double slope = slope_draw(rng);
    const SeriesBasis basis = build_basis(eigenvalue, base, slope, root_draw(rng));
    for (int i = 0; i < 10; ++i) {
      const double z = z_draw(rng);
      const double residual = evaluate_series(basis, z, 4) +
                              (base + slope * z) * evaluate_series(basis, z, 2) +
                              slope * evaluate_series(basis, z, 1) -
                              eigenvalue * evaluate_series(basis, z, 0);
      CHECK(std::abs(residual) <= 1e-9 * std::max(1.0, eigenvalue));
    }
  }
}

TEST_CASE("truncation: extending a converged series does not move the boundary values") {
  for (double eigenvalue : {3.0, 150.0, 1800.0}) {
    const SeriesBasis basis = build_basis(eigenvalue, 1.3, -2.1, 2);
    const BoundaryState converged = evaluate_boundary(basis);

    // Oracle-side extension: apply the recurrence for twice as many terms and
    // re-sum; the reported values must already carry all the mass.
    std::vector<double> a = basis.coefficients;
    const int doubled = 2 * basis.truncation_order();
    for (int n = basis.truncation_order() + 1; n <= doubled; ++n) {
      const double nd = n;
      const double numerator = eigenvalue * a[static_cast<std::size_t>(n - 4)] -
                               1.3 * (nd - 2.0) * (nd - 3.0) * a[static_cast<std::size_t>(n - 2)] -
                               (-2.1) * (nd - 3.0) * (nd - 3.0) * a[static_cast<std::size_t>(n - 3)];
      a.push_back(numerator / (nd * (nd - 1.0) * (nd - 2.0) * (nd - 3.0)));
    }
    double sums[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t n = 0; n < a.size(); ++n) {
      double factor = 1.0;
      for (int k = 0; k < 4; ++k) {
        sums[k] += factor * a[n];
        factor *= static_cast<double>(n) - k;
      }
    }
    CHECK(converged.eta == doctest::Approx(sums[0]).epsilon(1e-12));
    CHECK(converged.deta == doctest::Approx(sums[1]).epsilon(1e-12));
    CHECK(converged.d2eta == doctest::Approx(sums[2]).epsilon(1e-12));
    CHECK(converged.d3eta == doctest::Approx(sums[3]).epsilon(1e-12));
  }
}

TEST_CASE("tail estimate satisfies the declared policy") {
  const TruncationPolicy policy{1e-14, 600, 4};
  const SeriesBasis basis = build_basis(777.0, 2.0, -3.0, 1, policy);
  const BoundaryState state = evaluate_boundary(basis);
  CHECK(state.tail_estimate <= policy.relative_tolerance);
  CHECK(std::isfinite(state.eta));
  CHECK(std::isfinite(state.d3eta));
}

TEST_CASE("basis normalization: derivative matrix at z = 0 is diag(0!,1!,2!,3!)") {
  const double factorial[4] = {1.0, 1.0, 2.0, 6.0};
  for (int r = 0; r < 4; ++r) {
    const SeriesBasis basis = build_basis(42.0, 0.7, -1.1, r);
    for (int k = 0; k < 4; ++k) {
      const double expected = (k == r) ? factorial[k] : 0.0;
      CHECK(evaluate_series(basis, 0.0, k) == expected);
    }
  }
}

TEST_CASE("error paths: overflow guard, non-convergence, bad arguments") {
  CHECK_THROWS_AS(build_basis(1e12, 0.0, 0.0, 0), SeriesRangeError);

  const TruncationPolicy tight{1e-14, 20, 4};
  try {
    build_basis(1e4, 0.0, 0.0, 0, tight);
    FAIL("expected TruncationError");
  } catch (const TruncationError& e) {
    CHECK(e.tail_estimate() > 0.0);
  }

  CHECK_THROWS_AS(build_basis(1.0, 0.0, 0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(std::nan(""), 0.0, 0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(1.0, 0.0, 0.0, 0, TruncationPolicy{1e-14, 8, 4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_basis(1.0, 0.0, 0.0, 0, TruncationPolicy{0.0, 600, 4}),
                  std::invalid_argument);
}
