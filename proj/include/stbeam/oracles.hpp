#pragma once

#include <vector>

#include "stbeam/beam_model.hpp"
#include "stbeam/eigen_solver.hpp"

namespace stbeam {

// Independent reference solvers used by tests and the acceptance suite. Both
// deliberately avoid the power-series path: the zero-load oracle works from
// the closed-form constant-coefficient fundamental system, the Ritz oracle
// from a variational discretization.

// Zero-load limit: the ODE degenerates to eta'''' = Lambda eta, whose
// clamped solutions are spanned by cosh(bz)-cos(bz) and sinh(bz)-sin(bz),
// b = Lambda^(1/4). Applies the same tip-body boundary operators to that
// closed-form system and runs the shared scan/bisect machinery on the
// resulting determinant. Returns the first n_roots eigenvalues, ascending.
std::vector<double> exact_zero_load_roots(double end_mass_ratio, double end_inertia_ratio,
                                          double eccentricity_ratio, int n_roots,
                                          const ScanSettings& scan = {});

enum class RitzBasis {
  // Classical clamped-free eigenfunctions. Exact for the bare beam, but every
  // member carries phi''(1) = phi'''(1) = 0, so tip-body problems whose true
  // modes have nonzero end curvature converge only algebraically. Kept as the
  // independent cross-check basis for cases it is admissible for.
  clamped_free_beam_functions,
  // z^2 times shifted Legendre polynomials, spanning {z^2, ..., z^(n+1)}.
  // Imposes no spurious natural conditions and converges spectrally for all
  // tip-body cases; the default.
  admissible_polynomials,
};

// Assembled n x n generalized symmetric eigenproblem K x = Lambda M x with
//   K = int phi'' phi''  -  int p(z) phi' phi'      (compression softens)
//   M = int phi phi  +  M phi(1)phi(1) + M e [phi(1)phi'(1) + phi'(1)phi(1)]
//                    + (J + M e^2) phi'(1)phi'(1)
// Matrices are stored dense row-major.
struct RitzModel {
  int n_basis = 10;
  RitzBasis basis_kind = RitzBasis::admissible_polynomials;
  std::vector<double> elastic_stiffness;
  std::vector<double> geometric_stiffness;
  std::vector<double> mass;
};

// Quadrature is composite Gauss-Legendre of order well beyond the basis
// content, so the assembly carries no quadrature error worth mentioning.
// Throws OracleAssemblyError on nonphysical inertia input.
RitzModel assemble_ritz_model(const DimensionlessParams& params, int n_basis,
                              RitzBasis kind = RitzBasis::admissible_polynomials);

// First n_roots generalized eigenvalues, ascending. Throws
// OracleAssemblyError when the mass matrix is not positive definite.
std::vector<double> ritz_eigenvalues(const RitzModel& model, int n_roots);

// Convenience: assemble and solve in one go. Requires n_basis >= n_roots + 4.
std::vector<double> ritz_eigenvalues(const DimensionlessParams& params, int n_roots,
                                     int n_basis = 10,
                                     RitzBasis kind = RitzBasis::admissible_polynomials);

}  // namespace stbeam
