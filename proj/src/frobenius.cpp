#include "stbeam/frobenius.hpp"

#include <cmath>
#include <sstream>

#include "stbeam/errors.hpp"

namespace stbeam {

namespace {

constexpr double kOverflowGuard = 1e250;
// Floor for relative-increment denominators; keeps exact-zero sums convergent.
constexpr double kSumFloor = 1e-300;

struct CompensatedSum {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double term) {
    // Kahan update; ascending-index summation bounds the rounding growth even
    // though terms first grow cosh-like before decaying.
    const double y = term - compensation;
    const double t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
  }
};

void check_policy(const TruncationPolicy& policy) {
  if (!(policy.relative_tolerance > 0.0)) {
    throw std::invalid_argument("truncation policy: relative_tolerance must be positive");
  }
  if (policy.max_terms < 16) {
    throw std::invalid_argument("truncation policy: max_terms must be at least 16");
  }
  if (policy.consecutive_small_terms_required < 1) {
    throw std::invalid_argument("truncation policy: consecutive_small_terms_required >= 1");
  }
}

}  // namespace

SeriesBasis build_basis(double trial_eigenvalue, double load_at_base, double load_slope,
                        int indicial_root, const TruncationPolicy& policy) {
  if (indicial_root < 0 || indicial_root > 3) {
    throw std::invalid_argument("indicial root must be in {0,1,2,3}");
  }
  if (!std::isfinite(trial_eigenvalue) || !std::isfinite(load_at_base) ||
      !std::isfinite(load_slope)) {
    throw std::invalid_argument("trial eigenvalue and load must be finite");
  }
  check_policy(policy);

  SeriesBasis basis;
  basis.indicial_root = indicial_root;
  basis.trial_eigenvalue = trial_eigenvalue;
  basis.load_at_base = load_at_base;
  basis.load_slope = load_slope;
  auto& a = basis.coefficients;
  a.reserve(64);
  for (int n = 0; n < 4; ++n) {
    a.push_back(n == indicial_root ? 1.0 : 0.0);
  }

  // Boundary partial sums at z = 1; the truncation rule watches all four.
  CompensatedSum sums[4];
  for (int n = 0; n < 4; ++n) {
    sums[0].add(a[n]);
    sums[1].add(n * a[n]);
    sums[2].add(static_cast<double>(n) * (n - 1) * a[n]);
    sums[3].add(static_cast<double>(n) * (n - 1) * (n - 2) * a[n]);
  }

  int consecutive_small = 0;
  double last_tail = 0.0;
  for (int n = 4; n <= policy.max_terms; ++n) {
    const double nd = n;
    const double numerator = trial_eigenvalue * a[n - 4] -
                             load_at_base * (nd - 2.0) * (nd - 3.0) * a[n - 2] -
                             load_slope * (nd - 3.0) * (nd - 3.0) * a[n - 3];
    const double denominator = nd * (nd - 1.0) * (nd - 2.0) * (nd - 3.0);
    const double coeff = numerator / denominator;
    a.push_back(coeff);

    double tail = 0.0;
    double factor = 1.0;
    for (int k = 0; k < 4; ++k) {
      const double increment = factor * coeff;
      sums[k].add(increment);
      if (std::abs(sums[k].sum) > kOverflowGuard) {
        std::ostringstream msg;
        msg << "boundary partial sum overflow at term " << n << " (trial eigenvalue "
            << trial_eigenvalue << ")";
        throw SeriesRangeError(msg.str());
      }
      const double rel = std::abs(increment) / std::max(std::abs(sums[k].sum), kSumFloor);
      tail = std::max(tail, rel);
      factor *= nd - k;
    }
    last_tail = tail;

    if (tail < policy.relative_tolerance) {
      ++consecutive_small;
    } else {
      consecutive_small = 0;
    }
    // Order 8 minimum: early terms can be deceptively small before the
    // cosh-like growth kicks in.
    if (n >= 8 && consecutive_small >= policy.consecutive_small_terms_required) {
      return basis;
    }
  }

  std::ostringstream msg;
  msg << "series did not converge within " << policy.max_terms
      << " terms (last tail estimate " << last_tail << ", trial eigenvalue " << trial_eigenvalue
      << ", load " << load_at_base << " + " << load_slope << " z)";
  throw TruncationError(msg.str(), last_tail);
}

BoundaryState evaluate_boundary(const SeriesBasis& basis) {
  CompensatedSum sums[4];
  double tail = 0.0;
  const auto& a = basis.coefficients;
  const int order = basis.truncation_order();
  for (int n = 0; n <= order; ++n) {
    const double nd = n;
    double factor = 1.0;
    double increments[4];
    for (int k = 0; k < 4; ++k) {
      increments[k] = factor * a[n];
      sums[k].add(increments[k]);
      factor *= nd - k;
    }
    if (n == order) {
      for (int k = 0; k < 4; ++k) {
        tail = std::max(tail,
                        std::abs(increments[k]) / std::max(std::abs(sums[k].sum), kSumFloor));
      }
    }
  }
  return BoundaryState{sums[0].sum, sums[1].sum, sums[2].sum, sums[3].sum, tail};
}

double evaluate_series(const SeriesBasis& basis, double z, int derivative) {
  if (derivative < 0 || derivative > 4) {
    throw std::invalid_argument("derivative order must be in 0..4");
  }
  const auto& a = basis.coefficients;
  CompensatedSum sum;
  // z^(n-k) tracked incrementally from the first contributing term.
  double z_power = 1.0;
  for (int n = derivative; n <= basis.truncation_order(); ++n) {
    double factor = 1.0;
    for (int k = 0; k < derivative; ++k) {
      factor *= static_cast<double>(n - k);
    }
    sum.add(factor * a[n] * z_power);
    z_power *= z;
  }
  return sum.sum;
}

}  // namespace stbeam
