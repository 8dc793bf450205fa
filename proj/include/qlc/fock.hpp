#pragma once

// Truncated Fock-space operators and Liouvillian superoperators.
// Superoperators act on column-stacked operators: vec(A X B) = (B^T (x) A) vec(X).

#include <complex>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qlc {

using cplx = std::complex<double>;
using FockOperator = Eigen::MatrixXcd;
using OpVector = Eigen::VectorXcd;
using Superoperator = Eigen::SparseMatrix<cplx>;

enum class ModelKind { NoiseInduced, Conventional };

struct ModelParams {
  double omega0 = 1.0;
  double kappa_down = 1.0;
  double kappa_up2 = 0.0;  // two-photon gain, NoiseInduced only
  double kappa_up1 = 0.0;  // one-photon gain, Conventional only
  ModelKind kind = ModelKind::NoiseInduced;

  // Gain/loss ratio of the two-photon channels.
  double K() const;
  // Throws on negative rates, a gain rate set for the wrong kind, or K >= 1.
  void validate() const;

  static ModelParams noise_induced(double omega0, double kappa_down, double K);
  static ModelParams conventional(double omega0, double kappa_down, double kappa_up);
};

const char* to_string(ModelKind kind);

std::pair<FockOperator, FockOperator> build_ladder(int dim);
FockOperator annihilation(int dim);
FockOperator number_op(int dim);
FockOperator parity_op(int dim);
FockOperator quadrature_x(int dim);  // a + a^dag
FockOperator quadrature_y(int dim);  // -i (a - a^dag)
FockOperator fock_projector(int dim, int n);

OpVector vectorize(const FockOperator& A);
FockOperator devectorize(const OpVector& v);
int op_dim_of(const Superoperator& S);

Superoperator left_multiply(const FockOperator& A);   // X -> A X
Superoperator right_multiply(const FockOperator& B);  // X -> X B
Superoperator commutator_super(const FockOperator& H, double scale);  // X -> -i scale [H, X]
Superoperator dissipator(const FockOperator& c);
Superoperator adjoint_dissipator(const FockOperator& c);  // X -> c^dag X c - {c^dag c, X}/2

Superoperator liouvillian(const ModelParams& p, int dim);
// Built term by term from the Heisenberg-picture generator, not by transposing liouvillian().
Superoperator adjoint_liouvillian(const ModelParams& p, int dim);

FockOperator apply(const Superoperator& S, const FockOperator& X);

// Even dimension keeping the neglected geometric tail below 1e-12.
int truncation_dim(const ModelParams& p);

}  // namespace qlc
