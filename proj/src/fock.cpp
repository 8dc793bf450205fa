#include "qlc/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "qlc/errors.hpp"

namespace qlc {

namespace {

constexpr cplx I_UNIT{0.0, 1.0};

Superoperator sparse_of(const FockOperator& A) {
  return A.sparseView(0.0, 0.0);
}

Superoperator sparse_identity(int n) {
  Superoperator id(n, n);
  id.setIdentity();
  return id;
}

void require_square(const FockOperator& A, const char* what) {
  if (A.rows() != A.cols() || A.rows() < 1) {
    throw DimensionMismatch(std::string(what) + ": operator must be square and non-empty");
  }
}

}  // namespace

double ModelParams::K() const {
  if (kind != ModelKind::NoiseInduced || kappa_down == 0.0) return 0.0;
  return kappa_up2 / kappa_down;
}

void ModelParams::validate() const {
  if (!std::isfinite(omega0)) throw PreconditionViolated("omega0 is not finite");
  if (kappa_down < 0.0 || kappa_up1 < 0.0 || kappa_up2 < 0.0) {
    throw PreconditionViolated("rates must be nonnegative");
  }
  if (kind == ModelKind::NoiseInduced) {
    if (kappa_up1 != 0.0) throw PreconditionViolated("one-photon gain is not part of the noise-induced model");
    if (kappa_up2 > 0.0 && kappa_up2 >= kappa_down) {
      throw NoStationaryState("noise-induced model requires kappa_up2 < kappa_down (K < 1)");
    }
  } else {
    if (kappa_up2 != 0.0) throw PreconditionViolated("two-photon gain is not part of the conventional model");
  }
}

ModelParams ModelParams::noise_induced(double omega0, double kappa_down, double K) {
  ModelParams p;
  p.omega0 = omega0;
  p.kappa_down = kappa_down;
  p.kappa_up2 = K * kappa_down;
  p.kind = ModelKind::NoiseInduced;
  return p;
}

ModelParams ModelParams::conventional(double omega0, double kappa_down, double kappa_up) {
  ModelParams p;
  p.omega0 = omega0;
  p.kappa_down = kappa_down;
  p.kappa_up1 = kappa_up;
  p.kind = ModelKind::Conventional;
  return p;
}

const char* to_string(ModelKind kind) {
  return kind == ModelKind::NoiseInduced ? "noise-induced" : "conventional";
}

FockOperator annihilation(int dim) {
  if (dim < 2) throw InvalidDimension("Fock dimension must be at least 2, got " + std::to_string(dim));
  FockOperator a = FockOperator::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

std::pair<FockOperator, FockOperator> build_ladder(int dim) {
  FockOperator a = annihilation(dim);
  FockOperator ad = a.adjoint();
  return {std::move(a), std::move(ad)};
}

FockOperator number_op(int dim) {
  if (dim < 2) throw InvalidDimension("Fock dimension must be at least 2, got " + std::to_string(dim));
  FockOperator n = FockOperator::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = k;
  return n;
}

FockOperator parity_op(int dim) {
  if (dim < 2) throw InvalidDimension("Fock dimension must be at least 2, got " + std::to_string(dim));
  FockOperator P = FockOperator::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) P(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return P;
}

FockOperator quadrature_x(int dim) {
  auto [a, ad] = build_ladder(dim);
  return a + ad;
}

FockOperator quadrature_y(int dim) {
  auto [a, ad] = build_ladder(dim);
  return -I_UNIT * (a - ad);
}

FockOperator fock_projector(int dim, int n) {
  if (n < 0 || n >= dim) throw InvalidDimension("Fock level out of range");
  FockOperator P = FockOperator::Zero(dim, dim);
  P(n, n) = 1.0;
  return P;
}

OpVector vectorize(const FockOperator& A) {
  return Eigen::Map<const OpVector>(A.data(), A.size());
}

FockOperator devectorize(const OpVector& v) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size() || n == 0) {
    throw InvalidDimension("vector length " + std::to_string(v.size()) + " is not a perfect square");
  }
  return Eigen::Map<const FockOperator>(v.data(), n, n);
}

int op_dim_of(const Superoperator& S) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(S.rows()))));
  if (S.rows() != S.cols() || n * n != S.rows()) {
    throw InvalidDimension("superoperator size is not the square of a Fock dimension");
  }
  return static_cast<int>(n);
}

Superoperator left_multiply(const FockOperator& A) {
  require_square(A, "left_multiply");
  return Eigen::kroneckerProduct(sparse_identity(A.rows()), sparse_of(A)).eval();
}

Superoperator right_multiply(const FockOperator& B) {
  require_square(B, "right_multiply");
  Superoperator Bt = sparse_of(B.transpose());
  return Eigen::kroneckerProduct(Bt, sparse_identity(B.rows())).eval();
}

Superoperator commutator_super(const FockOperator& H, double scale) {
  Superoperator S = (left_multiply(H) - right_multiply(H)) * (-I_UNIT * scale);
  S.prune(cplx(0.0));
  return S;
}

Superoperator dissipator(const FockOperator& c) {
  require_square(c, "dissipator");
  const FockOperator cdc = c.adjoint() * c;
  Superoperator jump = Eigen::kroneckerProduct(sparse_of(c.conjugate()), sparse_of(c)).eval();
  Superoperator D = jump - 0.5 * left_multiply(cdc) - 0.5 * right_multiply(cdc);
  D.prune(cplx(0.0));
  return D;
}

Superoperator adjoint_dissipator(const FockOperator& c) {
  require_square(c, "adjoint_dissipator");
  const FockOperator cdc = c.adjoint() * c;
  // c^dag X c: vec(A X B) with A = c^dag, B = c.
  Superoperator jump = Eigen::kroneckerProduct(sparse_of(c.transpose()), sparse_of(c.adjoint())).eval();
  Superoperator D = jump - 0.5 * left_multiply(cdc) - 0.5 * right_multiply(cdc);
  D.prune(cplx(0.0));
  return D;
}

Superoperator liouvillian(const ModelParams& p, int dim) {
  p.validate();
  const FockOperator a = annihilation(dim);
  const FockOperator a2 = a * a;
  Superoperator L = commutator_super(number_op(dim), p.omega0);
  if (p.kappa_down != 0.0) L += p.kappa_down * dissipator(a2);
  if (p.kind == ModelKind::NoiseInduced) {
    if (p.kappa_up2 != 0.0) L += p.kappa_up2 * dissipator(a2.adjoint());
  } else if (p.kappa_up1 != 0.0) {
    L += p.kappa_up1 * dissipator(a.adjoint());
  }
  L.makeCompressed();
  return L;
}

Superoperator adjoint_liouvillian(const ModelParams& p, int dim) {
  p.validate();
  const FockOperator a = annihilation(dim);
  const FockOperator a2 = a * a;
  Superoperator L = commutator_super(number_op(dim), -p.omega0);
  if (p.kappa_down != 0.0) L += p.kappa_down * adjoint_dissipator(a2);
  if (p.kind == ModelKind::NoiseInduced) {
    if (p.kappa_up2 != 0.0) L += p.kappa_up2 * adjoint_dissipator(a2.adjoint());
  } else if (p.kappa_up1 != 0.0) {
    L += p.kappa_up1 * adjoint_dissipator(a.adjoint());
  }
  L.makeCompressed();
  return L;
}

FockOperator apply(const Superoperator& S, const FockOperator& X) {
  if (S.cols() != X.size()) throw DimensionMismatch("superoperator and operator sizes differ");
  return devectorize(S * vectorize(X));
}

int truncation_dim(const ModelParams& p) {
  p.validate();
  int n = 20;
  if (p.kind == ModelKind::NoiseInduced) {
    const double K = p.K();
    if (K > 0.0) {
      const double decades = -std::log10(K);
      n = 2 * static_cast<int>(std::ceil(12.0 / decades - 1e-9));
    }
  } else if (p.kappa_down > 0.0) {
    // One-photon gain against two-photon loss: populations fall off faster than geometric.
    n = 2 * static_cast<int>(std::ceil(10.0 * std::max(1.0, p.kappa_up1 / p.kappa_down)));
  } else {
    n = 400;
  }
  return std::clamp(n, 20, 400);
}

}  // namespace qlc
