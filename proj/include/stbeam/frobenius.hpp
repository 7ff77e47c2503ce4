#pragma once

#include <vector>

namespace stbeam {

// Adaptive truncation rule for the power series: stop once
// consecutive_small_terms_required successive terms contribute relative
// increments below relative_tolerance to all four boundary sums, or fail at
// max_terms.
struct TruncationPolicy {
  double relative_tolerance = 1e-14;
  int max_terms = 600;
  int consecutive_small_terms_required = 4;
};

// One fundamental power-series solution eta_r of the eigen-ODE
//
//   eta'''' + (p0 + gamma z) eta'' + gamma eta' = Lambda eta
//
// normalized so the coefficients of z^0..z^3 are the Kronecker delta
// delta_{n,r}. z = 0 is an ordinary point of the equation, so all four
// fundamental solutions are plain integer-power series; the delta
// normalization makes the 4x4 matrix of (eta, eta', eta'', eta''') values at
// z = 0 the identity.
struct SeriesBasis {
  int indicial_root = 0;             // r in {0,1,2,3}
  std::vector<double> coefficients;  // a_0 .. a_N
  double trial_eigenvalue = 0.0;     // Lambda
  double load_at_base = 0.0;         // p0
  double load_slope = 0.0;           // gamma

  int truncation_order() const { return static_cast<int>(coefficients.size()) - 1; }
};

// The solution and its first three derivatives at z = 1, plus a convergence
// certificate: the largest relative increment the final stored term
// contributed to any of the four sums.
struct BoundaryState {
  double eta = 0.0;
  double deta = 0.0;
  double d2eta = 0.0;
  double d3eta = 0.0;
  double tail_estimate = 0.0;
};

// Generates coefficients by the recurrence (n >= 4)
//
//   a_n = [Lambda a_{n-4} - p0 (n-2)(n-3) a_{n-2} - gamma (n-3)^2 a_{n-3}]
//         / [n (n-1) (n-2) (n-3)]
//
// and truncates per the policy, tracking the four boundary sums at z = 1 in
// ascending order with compensated summation. At least 9 coefficients
// (order 8) are always produced. Throws TruncationError when the policy is
// not met within max_terms and SeriesRangeError when a partial sum exceeds
// 1e250 in magnitude (overflow is a solver-bug signal, not a physical
// regime).
SeriesBasis build_basis(double trial_eigenvalue, double load_at_base, double load_slope,
                        int indicial_root, const TruncationPolicy& policy = {});

// eta^(k)(1) = sum_n a_n n!/(n-k)!, k = 0..3, ascending compensated sums.
// Recomputes the same sums build_basis converged on, bit for bit.
BoundaryState evaluate_boundary(const SeriesBasis& basis);

// Series value (or derivative, order 0..4) at arbitrary z. Order 4 exists so
// tests can form the ODE residual directly from a truncated basis.
double evaluate_series(const SeriesBasis& basis, double z, int derivative = 0);

}  // namespace stbeam
