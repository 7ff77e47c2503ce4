#include "stbeam/oracles.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

#include "stbeam/errors.hpp"

namespace stbeam {

namespace {

// ------------------------------------------------------------------
// Closed-form zero-load fundamental system
// ------------------------------------------------------------------

// Boundary values at z = 1 of the two clamped solutions, scaled so they agree
// with the delta-normalized series solutions term by term:
//   phi_a(z) = (cosh bz - cos bz) / b^2     = z^2 + Lambda z^6/360 + ...
//   phi_b(z) = 3 (sinh bz - sin bz) / b^3   = z^3 + Lambda z^7/840 + ...
// so the oracle determinant has the same zeros AND the same values as the
// series determinant in the zero-load limit.
struct ClosedFormPair {
  BoundaryState a;
  BoundaryState b;
};

ClosedFormPair zero_load_boundary(double eigenvalue) {
  if (eigenvalue == 0.0) {
    // b -> 0 limit: exactly z^2 and z^3.
    return {{1.0, 2.0, 2.0, 0.0, 0.0}, {1.0, 3.0, 6.0, 6.0, 0.0}};
  }
  const double b = std::pow(eigenvalue, 0.25);
  const double c = std::cos(b), s = std::sin(b);
  const double ch = std::cosh(b), sh = std::sinh(b);
  ClosedFormPair pair;
  pair.a = BoundaryState{(ch - c) / (b * b), (sh + s) / b, ch + c, b * (sh - s), 0.0};
  pair.b = BoundaryState{3.0 * (sh - s) / (b * b * b), 3.0 * (ch - c) / (b * b),
                         3.0 * (sh + s) / b, 3.0 * (ch + c), 0.0};
  return pair;
}

double zero_load_determinant(double eigenvalue, double mass, double inertia, double ecc) {
  const ClosedFormPair pair = zero_load_boundary(eigenvalue);
  const auto shear = [&](const BoundaryState& st) {
    return st.d3eta + eigenvalue * mass * (st.eta + ecc * st.deta);
  };
  const auto moment = [&](const BoundaryState& st) {
    return st.d2eta -
           eigenvalue * (mass * ecc * st.eta + (inertia + mass * ecc * ecc) * st.deta);
  };
  return shear(pair.b) * moment(pair.a) - shear(pair.a) * moment(pair.b);
}

// ------------------------------------------------------------------
// Quadrature
// ------------------------------------------------------------------

struct QuadratureRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;
};

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(static_cast<std::size_t>(n));
  weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[static_cast<std::size_t>(i)] = x;
    weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

// Composite rule on [0, 1]; 8 panels x 24 points is far beyond the content of
// any basis handled here.
QuadratureRule unit_interval_rule() {
  constexpr int kPanels = 8;
  constexpr int kPoints = 24;
  std::vector<double> gl_nodes, gl_weights;
  gauss_legendre(kPoints, gl_nodes, gl_weights);
  QuadratureRule rule;
  const double width = 1.0 / kPanels;
  for (int p = 0; p < kPanels; ++p) {
    const double lo = p * width;
    for (int q = 0; q < kPoints; ++q) {
      rule.nodes.push_back(lo + 0.5 * width * (gl_nodes[static_cast<std::size_t>(q)] + 1.0));
      rule.weights.push_back(0.5 * width * gl_weights[static_cast<std::size_t>(q)]);
    }
  }
  return rule;
}

// ------------------------------------------------------------------
// Ritz bases
// ------------------------------------------------------------------

// Classical clamped-free mode constants: roots of cos(b) + 1/cosh(b) = 0,
// bracketed half a unit around (2i-1) pi/2.
double clamped_free_root(int index) {
  const double center = (2.0 * index - 1.0) * std::numbers::pi / 2.0;
  double lo = (index == 1) ? 1.0 : center - 0.5;
  double hi = center + 0.5;
  const auto g = [](double b) { return std::cos(b) + 1.0 / std::cosh(b); };
  double g_lo = g(lo);
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = g(mid);
    if ((g_mid < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Clamped-free eigenfunction in the overflow-safe exponential form; the
// naive cosh/sinh combination cancels catastrophically past b ~ 25.
struct ClampedFreeFunction {
  double b = 0.0;
  double sigma = 0.0;
  double one_minus_sigma = 0.0;

  explicit ClampedFreeFunction(double beta) : b(beta) {
    const double c = std::cos(b), s = std::sin(b);
    const double sh = std::sinh(b);
    sigma = (std::cosh(b) + c) / (sh + s);
    one_minus_sigma = (s - c - std::exp(-b)) / (sh + s);
  }

  double value(double z) const {
    return 0.5 * one_minus_sigma * std::exp(b * z) +
           0.5 * (1.0 + sigma) * std::exp(-b * z) - std::cos(b * z) + sigma * std::sin(b * z);
  }
  double d1(double z) const {
    return b * (0.5 * one_minus_sigma * std::exp(b * z) -
                0.5 * (1.0 + sigma) * std::exp(-b * z) + std::sin(b * z) +
                sigma * std::cos(b * z));
  }
  double d2(double z) const {
    return b * b *
           (0.5 * one_minus_sigma * std::exp(b * z) + 0.5 * (1.0 + sigma) * std::exp(-b * z) +
            std::cos(b * z) - sigma * std::sin(b * z));
  }
};

// Legendre values plus first/second derivatives at t via the derivative
// recurrences (stable at t = +-1, unlike the (1-t^2) form).
void legendre_all(int max_degree, double t, std::vector<double>& p, std::vector<double>& dp,
                  std::vector<double>& d2p) {
  const auto n = static_cast<std::size_t>(max_degree + 1);
  p.assign(n, 0.0);
  dp.assign(n, 0.0);
  d2p.assign(n, 0.0);
  p[0] = 1.0;
  if (max_degree >= 1) {
    p[1] = t;
    dp[1] = 1.0;
  }
  for (int k = 1; k < max_degree; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    p[ku + 1] = ((2.0 * k + 1.0) * t * p[ku] - k * p[ku - 1]) / (k + 1.0);
    dp[ku + 1] = (2.0 * k + 1.0) * p[ku] + dp[ku - 1];
    d2p[ku + 1] = (2.0 * k + 1.0) * dp[ku] + d2p[ku - 1];
  }
}

// phi_i and first/second derivatives at z for the whole basis at once.
void basis_values(const RitzModel& model, double z, std::vector<double>& phi,
                  std::vector<double>& dphi, std::vector<double>& d2phi,
                  const std::vector<ClampedFreeFunction>& beam_functions) {
  const auto n = static_cast<std::size_t>(model.n_basis);
  phi.resize(n);
  dphi.resize(n);
  d2phi.resize(n);
  if (model.basis_kind == RitzBasis::clamped_free_beam_functions) {
    for (std::size_t i = 0; i < n; ++i) {
      phi[i] = beam_functions[i].value(z);
      dphi[i] = beam_functions[i].d1(z);
      d2phi[i] = beam_functions[i].d2(z);
    }
    return;
  }
  // z^2 * shifted Legendre
  const double t = 2.0 * z - 1.0;
  std::vector<double> p, dp, d2p;
  legendre_all(model.n_basis - 1, t, p, dp, d2p);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = p[i], dq = 2.0 * dp[i], d2q = 4.0 * d2p[i];
    phi[i] = z * z * q;
    dphi[i] = 2.0 * z * q + z * z * dq;
    d2phi[i] = 2.0 * q + 4.0 * z * dq + z * z * d2q;
  }
}

}  // namespace

std::vector<double> exact_zero_load_roots(double end_mass_ratio, double end_inertia_ratio,
                                          double eccentricity_ratio, int n_roots,
                                          const ScanSettings& scan) {
  if (end_mass_ratio < 0.0 || end_inertia_ratio < 0.0) {
    throw std::invalid_argument("end-body mass and inertia ratios must be non-negative");
  }
  const auto f = [=](double eigenvalue) {
    return zero_load_determinant(eigenvalue, end_mass_ratio, end_inertia_ratio,
                                 eccentricity_ratio);
  };
  const ScanOutcome outcome = scan_fourth_power_roots(f, n_roots, scan);
  if (static_cast<int>(outcome.fourth_roots.size()) < n_roots) {
    std::ostringstream msg;
    msg << "zero-load oracle found " << outcome.fourth_roots.size() << " of " << n_roots
        << " roots below lambda_max = " << scan.lambda_max;
    throw InsufficientRangeError(msg.str(), static_cast<int>(outcome.fourth_roots.size()),
                                 n_roots);
  }
  std::vector<double> roots;
  roots.reserve(static_cast<std::size_t>(n_roots));
  for (int i = 0; i < n_roots; ++i) {
    const double x = outcome.fourth_roots[static_cast<std::size_t>(i)];
    roots.push_back(x * x * x * x);
  }
  return roots;
}

RitzModel assemble_ritz_model(const DimensionlessParams& params, int n_basis, RitzBasis kind) {
  if (n_basis < 2) throw OracleAssemblyError("ritz basis needs at least 2 functions");
  if (params.end_mass_ratio < 0.0 || params.end_inertia_ratio < 0.0) {
    throw OracleAssemblyError("nonphysical end-body inertia input");
  }

  RitzModel model;
  model.n_basis = n_basis;
  model.basis_kind = kind;
  const auto n = static_cast<std::size_t>(n_basis);
  model.elastic_stiffness.assign(n * n, 0.0);
  model.geometric_stiffness.assign(n * n, 0.0);
  model.mass.assign(n * n, 0.0);

  std::vector<ClampedFreeFunction> beam_functions;
  if (kind == RitzBasis::clamped_free_beam_functions) {
    beam_functions.reserve(n);
    for (int i = 1; i <= n_basis; ++i) {
      beam_functions.emplace_back(clamped_free_root(i));
    }
  }

  const QuadratureRule rule = unit_interval_rule();
  std::vector<double> phi, dphi, d2phi;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double z = rule.nodes[q];
    const double w = rule.weights[q];
    const double load = params.load_at(z);
    basis_values(model, z, phi, dphi, d2phi, beam_functions);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        model.elastic_stiffness[i * n + j] += w * d2phi[i] * d2phi[j];
        // Compression (positive load) softens.
        model.geometric_stiffness[i * n + j] -= w * load * dphi[i] * dphi[j];
        model.mass[i * n + j] += w * phi[i] * phi[j];
      }
    }
  }

  // Tip-body inertia: translational, coupling, and rotational terms at z = 1.
  basis_values(model, 1.0, phi, dphi, d2phi, beam_functions);
  const double mass_ratio = params.end_mass_ratio;
  const double ecc = params.eccentricity_ratio;
  const double rot = params.end_inertia_ratio + mass_ratio * ecc * ecc;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      model.mass[i * n + j] += mass_ratio * phi[i] * phi[j] +
                               mass_ratio * ecc * (phi[i] * dphi[j] + dphi[i] * phi[j]) +
                               rot * dphi[i] * dphi[j];
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      model.elastic_stiffness[i * n + j] = model.elastic_stiffness[j * n + i];
      model.geometric_stiffness[i * n + j] = model.geometric_stiffness[j * n + i];
      model.mass[i * n + j] = model.mass[j * n + i];
    }
  }
  return model;
}

std::vector<double> ritz_eigenvalues(const RitzModel& model, int n_roots) {
  const int n = model.n_basis;
  if (n_roots < 1 || n_roots > n) {
    throw std::invalid_argument("n_roots must be in 1..n_basis");
  }
  using Matrix = Eigen::MatrixXd;
  Matrix stiffness(n, n), mass(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto idx = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                       static_cast<std::size_t>(j);
      stiffness(i, j) = model.elastic_stiffness[idx] + model.geometric_stiffness[idx];
      mass(i, j) = model.mass[idx];
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(stiffness, mass);
  if (solver.info() != Eigen::Success) {
    throw OracleAssemblyError("generalized eigensolve failed (mass matrix not positive definite?)");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_roots));
  for (int i = 0; i < n_roots; ++i) {
    out.push_back(solver.eigenvalues()(i));
  }
  return out;
}

std::vector<double> ritz_eigenvalues(const DimensionlessParams& params, int n_roots, int n_basis,
                                     RitzBasis kind) {
  if (n_basis < n_roots + 4) {
    throw std::invalid_argument("ritz oracle wants n_basis >= n_roots + 4");
  }
  return ritz_eigenvalues(assemble_ritz_model(params, n_basis, kind), n_roots);
}

}  // namespace stbeam
