#pragma once

// Dynamics, steady states and structural checks on the truncated Fock space.

#include <string>
#include <vector>

#include "qlc/fock.hpp"

namespace qlc {

using DensityMatrix = FockOperator;

struct DensityCheck {
  double hermiticity;   // max |rho - rho^dag|
  double trace_error;   // |Tr rho - 1|
  double min_eigenvalue;
  bool ok() const { return hermiticity < 1e-12 && trace_error < 1e-12 && min_eigenvalue >= -1e-10; }
};
DensityCheck check_density(const DensityMatrix& rho);

struct SteadyStates {
  int kernel_dim = 0;
  bool populations_only = false;  // kernel resolved on the diagonal sector only
  // One state for a unique steady state; {rho_even, rho_odd} for a parity-split kernel.
  std::vector<DensityMatrix> states;
  double relative_residual = 0.0;  // max_k |L vec rho_k| / |L|
  DensityMatrix combine(double wp_plus) const;
};

// Shifted inverse iteration with a sparse LU factorization, followed by a
// singular-value cut on the iterated block and parity-sector extraction.
SteadyStates steady_state_numeric(const Superoperator& L);

// exp(L t) rho0, block by block over the connected components of L.
DensityMatrix evolve(const DensityMatrix& rho0, const Superoperator& L, double t);

struct ParityWeights {
  double plus;
  double minus;
};
ParityWeights parity_weights(const DensityMatrix& rho);

DensityMatrix coherent_state(int dim, std::complex<double> alpha);

double expectation(const DensityMatrix& rho, const FockOperator& A);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
// Occupation of the two highest Fock levels.
double edge_occupation(const DensityMatrix& rho);

struct CirculationResult {
  double phi;           // |Re <x L^dag(y) - y L^dag(x)>|
  double phi_formula;   // steady-state closed form evaluated at this state's parity weights
  double phi_quadrature;  // omega0 <x^2 + y^2>
  double mean_n;
  bool edge_unreliable;
};
CirculationResult circulation(const DensityMatrix& rho, const ModelParams& p);

// Antiunitary time reversal in the Fock basis: A -> T A^dag T^{-1} = A^T.
FockOperator time_reverse(const FockOperator& A);
// Rotation sign flipped, dissipators unchanged.
Superoperator time_reversed_liouvillian(const ModelParams& p, int dim);
// Conjugation of an arbitrary superoperator by the operator time reversal.
Superoperator time_reverse_super(const Superoperator& S);

// |rho L^dag - T(L) rho| / |L| in Frobenius norm over superoperator matrices.
double detailed_balance_residual(const ModelParams& p, const DensityMatrix& rho_ss);

struct ConservedDecomposition {
  FockOperator c0, c1;  // conserved quantities, Tr[c_j^dag m_k] = delta_jk
  FockOperator m0, m1;  // orthonormal steady-state basis
  double weight0 = 0.0, weight1 = 0.0;
};
ConservedDecomposition conserved_quantities(double K, int dim);
DensityMatrix conserved_reconstruction(const DensityMatrix& rho0, double K);

double mandel_q_from_state(const DensityMatrix& rho);

struct WignerSamples {
  std::vector<double> values;
  int working_dim = 0;
  bool beyond_safe_radius = false;
  std::string warning;
};
// W(x, y) = Tr[rho D(alpha) Pi D(alpha)^dag] / (2 pi), alpha = (x + i y) / 2.
WignerSamples wigner_numeric(const DensityMatrix& rho, const std::vector<std::pair<double, double>>& points);

}  // namespace qlc
