#include "qlc/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/MatrixFunctions>

#include "qlc/analytic.hpp"
#include "qlc/errors.hpp"
#include "qlc/parallel.hpp"

namespace qlc {

namespace {

constexpr double PI = std::numbers::pi;
constexpr double KERNEL_TOL = 1e-9;      // singular-value cut, relative to |L|_1
constexpr double STATIONARY_TOL = 1e-10;
constexpr int KERNEL_BLOCK = 8;
constexpr Eigen::Index MAX_EXPM_BLOCK = 2500;

double one_norm(const Superoperator& S) {
  double best = 0.0;
  for (Eigen::Index c = 0; c < S.outerSize(); ++c) {
    double col = 0.0;
    for (Superoperator::InnerIterator it(S, c); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

FockOperator hermitian_part(const FockOperator& X) { return 0.5 * (X + X.adjoint()); }

FockOperator sector_projector(int dim, int parity) {
  FockOperator P = FockOperator::Zero(dim, dim);
  for (int k = parity; k < dim; k += 2) P(k, k) = 1.0;
  return P;
}

// Normalizes a kernel element to unit trace and keeps its Hermitian part.
FockOperator as_state(const FockOperator& X) {
  const cplx tr = X.trace();
  if (std::abs(tr) < 1e-300) throw DegenerateSpectrum("kernel element has zero trace", -1);
  return hermitian_part(X / tr);
}

double residual_of(const Superoperator& L, const FockOperator& rho) {
  return (L * vectorize(rho)).norm();
}

// Splits a kernel basis into even and odd parity states.
std::vector<FockOperator> parity_split(const std::vector<FockOperator>& kernel, const Superoperator& L,
                                       double tol) {
  const int dim = static_cast<int>(kernel.front().rows());
  std::vector<FockOperator> out;
  for (int parity = 0; parity < 2; ++parity) {
    const FockOperator P = sector_projector(dim, parity);
    FockOperator combo = FockOperator::Zero(dim, dim);
    double weight = 0.0;
    for (const auto& X : kernel) {
      const cplx t = (P * X).trace();
      combo += std::conj(t) * X;
      weight += std::norm(t);
    }
    if (weight < 1e-24) throw DegenerateSpectrum("two-dimensional kernel is not split by parity", 2);
    FockOperator rho = as_state(P * combo * P);
    if (residual_of(L, rho) > tol) {
      throw DegenerateSpectrum("parity-projected kernel element is not stationary", 2);
    }
    out.push_back(std::move(rho));
  }
  return out;
}

std::vector<FockOperator> populations_kernel(const Superoperator& L, int dim, double norm, int& kernel_dim) {
  std::vector<Eigen::Index> diag_index(dim);
  for (int k = 0; k < dim; ++k) diag_index[k] = static_cast<Eigen::Index>(k) * (dim + 1);
  std::vector<int> position(L.rows(), -1);
  for (int k = 0; k < dim; ++k) position[diag_index[k]] = k;
  Eigen::MatrixXcd Lpop = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    for (Superoperator::InnerIterator it(L, diag_index[k]); it; ++it) {
      const int row = position[it.row()];
      if (row < 0) throw DegenerateSpectrum("diagonal sector is not invariant", -1);
      Lpop(row, k) = it.value();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Lpop, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  std::vector<FockOperator> kernel;
  kernel_dim = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) < KERNEL_TOL * norm) {
      ++kernel_dim;
      kernel.push_back(svd.matrixV().col(i).asDiagonal());
    }
  }
  return kernel;
}

}  // namespace

DensityCheck check_density(const DensityMatrix& rho) {
  DensityCheck c;
  c.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  c.trace_error = std::abs(rho.trace() - 1.0);
  Eigen::SelfAdjointEigenSolver<FockOperator> es(hermitian_part(rho), Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  return c;
}

DensityMatrix SteadyStates::combine(double wp_plus) const {
  if (states.empty()) throw PreconditionViolated("no steady states to combine");
  if (states.size() == 1) return states.front();
  if (!(wp_plus >= 0.0 && wp_plus <= 1.0)) throw PreconditionViolated("parity weight must lie in [0, 1]");
  return wp_plus * states[0] + (1.0 - wp_plus) * states[1];
}

SteadyStates steady_state_numeric(const Superoperator& L) {
  const int dim = op_dim_of(L);
  const Eigen::Index n = L.rows();
  const double norm = one_norm(L);
  if (norm == 0.0) throw DegenerateSpectrum("zero Liouvillian: every operator is stationary", static_cast<int>(n));

  Superoperator shifted = L;
  Superoperator id(n, n);
  id.setIdentity();
  shifted -= (1e-9 * norm) * id;
  shifted.makeCompressed();
  Eigen::SparseLU<Superoperator, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(shifted);
  lu.factorize(shifted);
  if (lu.info() != Eigen::Success) throw DegenerateSpectrum("sparse LU factorization failed", -1);

  const int block = static_cast<int>(std::min<Eigen::Index>(KERNEL_BLOCK, n));
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd Q(n, block);
  for (Eigen::Index i = 0; i < Q.size(); ++i) Q.data()[i] = cplx(gauss(rng), gauss(rng));
  for (int iter = 0; iter < 3; ++iter) {
    Eigen::MatrixXcd Z = lu.solve(Q);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
    Q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, block);
  }
  Eigen::MatrixXcd LQ = L * Q;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(LQ, Eigen::ComputeThinV);
  const auto& s = svd.singularValues();

  std::vector<FockOperator> kernel;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) < KERNEL_TOL * norm) kernel.push_back(devectorize(Q * svd.matrixV().col(i)));
  }

  SteadyStates out;
  out.kernel_dim = static_cast<int>(kernel.size());
  const double tol = STATIONARY_TOL * norm;
  if (kernel.empty()) throw DegenerateSpectrum("no stationary state found", 0);
  if (out.kernel_dim == block) {
    throw DegenerateSpectrum("kernel dimension reaches the iteration block size " + std::to_string(block),
                             out.kernel_dim);
  }
  if (out.kernel_dim > 2) {
    int pop_dim = 0;
    kernel = populations_kernel(L, dim, norm, pop_dim);
    if (pop_dim < 1 || pop_dim > 2) {
      throw DegenerateSpectrum("kernel dimension " + std::to_string(out.kernel_dim) +
                                   " (diagonal sector " + std::to_string(pop_dim) + ")",
                               out.kernel_dim);
    }
    out.populations_only = true;
  }
  if (kernel.size() == 1) {
    out.states.push_back(as_state(kernel.front()));
  } else {
    out.states = parity_split(kernel, L, tol);
  }
  for (const auto& rho : out.states) {
    out.relative_residual = std::max(out.relative_residual, residual_of(L, rho) / norm);
  }
  return out;
}

DensityMatrix evolve(const DensityMatrix& rho0, const Superoperator& L, double t) {
  if (t < 0.0) throw PreconditionViolated("evolution time must be nonnegative");
  const Eigen::Index n = L.rows();
  if (rho0.size() != n) throw DimensionMismatch("state and Liouvillian sizes differ");
  if (t == 0.0) return rho0;

  std::vector<Eigen::Index> parent(n);
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (Eigen::Index c = 0; c < L.outerSize(); ++c) {
    for (Superoperator::InnerIterator it(L, c); it; ++it) {
      const Eigen::Index a = find(it.row()), b = find(c);
      if (a != b) parent[a] = b;
    }
  }
  std::vector<std::vector<Eigen::Index>> blocks(n);
  for (Eigen::Index i = 0; i < n; ++i) blocks[find(i)].push_back(i);

  const OpVector v = vectorize(rho0);
  OpVector out = OpVector::Zero(n);
  std::vector<Eigen::Index> local(n, -1);
  for (const auto& idx : blocks) {
    if (idx.empty()) continue;
    bool touched = false;
    for (auto i : idx) touched = touched || v(i) != cplx(0.0);
    if (!touched) continue;
    const auto m = static_cast<Eigen::Index>(idx.size());
    if (m > MAX_EXPM_BLOCK) {
      throw StiffnessError("coupled block of size " + std::to_string(m) +
                           " is too large for a dense exponential; reduce the truncation");
    }
    for (Eigen::Index k = 0; k < m; ++k) local[idx[k]] = k;
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(m, m);
    Eigen::VectorXcd x(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      x(k) = v(idx[k]);
      for (Superoperator::InnerIterator it(L, idx[k]); it; ++it) B(local[it.row()], k) = it.value();
    }
    const Eigen::MatrixXcd E = (B * t).exp();
    const Eigen::VectorXcd y = E * x;
    if (!y.allFinite()) {
      throw StiffnessError("non-finite propagator; reduce kappa * t or enlarge the truncation");
    }
    for (Eigen::Index k = 0; k < m; ++k) out(idx[k]) = y(k);
  }
  DensityMatrix rho = devectorize(out);
  if (std::abs(rho.trace() - rho0.trace()) > 1e-9 * std::max(1.0, std::abs(rho0.trace()))) {
    throw StiffnessError("trace drift beyond 1e-9; reduce kappa * t or enlarge the truncation");
  }
  return rho;
}

ParityWeights parity_weights(const DensityMatrix& rho) {
  double even = 0.0, total = 0.0;
  for (Eigen::Index k = 0; k < rho.rows(); ++k) {
    const double p = rho(k, k).real();
    total += p;
    if (k % 2 == 0) even += p;
  }
  const double plus = std::clamp(even / total, 0.0, 1.0);
  return {plus, 1.0 - plus};
}

DensityMatrix coherent_state(int dim, std::complex<double> alpha) {
  if (dim < 2) throw InvalidDimension("Fock dimension must be at least 2");
  OpVector psi(dim);
  psi(0) = std::exp(-0.5 * std::norm(alpha));
  for (int k = 1; k < dim; ++k) psi(k) = psi(k - 1) * alpha / std::sqrt(static_cast<double>(k));
  psi /= psi.norm();
  return psi * psi.adjoint();
}

double expectation(const DensityMatrix& rho, const FockOperator& A) { return (rho * A).trace().real(); }

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  Eigen::SelfAdjointEigenSolver<FockOperator> es(hermitian_part(a - b), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double edge_occupation(const DensityMatrix& rho) {
  const Eigen::Index n = rho.rows();
  return std::abs(rho(n - 1, n - 1)) + std::abs(rho(n - 2, n - 2));
}

CirculationResult circulation(const DensityMatrix& rho, const ModelParams& p) {
  const int dim = static_cast<int>(rho.rows());
  const Superoperator Ldag = adjoint_liouvillian(p, dim);
  const FockOperator x = quadrature_x(dim);
  const FockOperator y = quadrature_y(dim);
  const FockOperator Ly = apply(Ldag, y);
  const FockOperator Lx = apply(Ldag, x);
  CirculationResult res;
  res.phi = std::abs((rho * (x * Ly - y * Lx)).trace().real());
  res.phi_quadrature = p.omega0 * expectation(rho, x * x + y * y);
  res.mean_n = expectation(rho, number_op(dim));
  res.phi_formula = p.kind == ModelKind::NoiseInduced
                        ? steady_circulation(p.omega0, p.K(), parity_weights(rho).minus)
                        : std::nan("");
  res.edge_unreliable = edge_occupation(rho) > 1e-8;
  return res;
}

FockOperator time_reverse(const FockOperator& A) { return A.transpose(); }

Superoperator time_reversed_liouvillian(const ModelParams& p, int dim) {
  ModelParams reversed = p;
  reversed.omega0 = -p.omega0;
  return liouvillian(reversed, dim);
}

Superoperator time_reverse_super(const Superoperator& S) {
  const int dim = op_dim_of(S);
  auto flip = [dim](Eigen::Index i) { return (i % dim) * dim + i / dim; };
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(S.nonZeros());
  for (Eigen::Index c = 0; c < S.outerSize(); ++c) {
    for (Superoperator::InnerIterator it(S, c); it; ++it) entries.emplace_back(flip(it.row()), flip(c), it.value());
  }
  Superoperator out(S.rows(), S.cols());
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

double detailed_balance_residual(const ModelParams& p, const DensityMatrix& rho_ss) {
  const int dim = static_cast<int>(rho_ss.rows());
  const Superoperator L = liouvillian(p, dim);
  const double stationarity = residual_of(L, rho_ss);
  if (stationarity > 1e-8) {
    throw PreconditionViolated("state is not stationary: |L vec rho| = " + std::to_string(stationarity));
  }
  const Superoperator left = left_multiply(rho_ss);
  const Superoperator lhs = left * adjoint_liouvillian(p, dim);
  const Superoperator rhs = time_reversed_liouvillian(p, dim) * left;
  return Superoperator(lhs - rhs).norm() / L.norm();
}

ConservedDecomposition conserved_quantities(double K, int dim) {
  if (!(K > 0.0 && K < 1.0)) {
    throw PreconditionViolated("conserved reconstruction needs 0 < K < 1 (K = 0 has an extra conserved coherence)");
  }
  if (dim < 2) throw InvalidDimension("Fock dimension must be at least 2");
  ConservedDecomposition d;
  d.m0 = FockOperator::Zero(dim, dim);
  d.m1 = FockOperator::Zero(dim, dim);
  double w = 1.0;
  for (int k = 0; k < dim; k += 2) {
    d.m0(k, k) = w;
    if (k + 1 < dim) d.m1(k + 1, k + 1) = w;
    w *= K;
  }
  d.m0 /= d.m0.norm();
  d.m1 /= d.m1.norm();
  const FockOperator even = sector_projector(dim, 0);
  const FockOperator odd = sector_projector(dim, 1);
  d.c0 = even / (even.adjoint() * d.m0).trace();
  d.c1 = odd / (odd.adjoint() * d.m1).trace();
  return d;
}

DensityMatrix conserved_reconstruction(const DensityMatrix& rho0, double K) {
  ConservedDecomposition d = conserved_quantities(K, static_cast<int>(rho0.rows()));
  d.weight0 = (d.c0.adjoint() * rho0).trace().real();
  d.weight1 = (d.c1.adjoint() * rho0).trace().real();
  return d.weight0 * d.m0 + d.weight1 * d.m1;
}

double mandel_q_from_state(const DensityMatrix& rho) {
  double mean = 0.0;
  for (Eigen::Index k = 0; k < rho.rows(); ++k) mean += k * rho(k, k).real();
  double var = 0.0;
  for (Eigen::Index k = 0; k < rho.rows(); ++k) var += (k - mean) * (k - mean) * rho(k, k).real();
  return (var - mean) / mean;
}

WignerSamples wigner_numeric(const DensityMatrix& rho, const std::vector<std::pair<double, double>>& points) {
  const int dim = static_cast<int>(rho.rows());
  if (dim < 2 || rho.cols() != dim) throw InvalidDimension("state must be a square matrix of dimension >= 2");
  WignerSamples out;
  out.values.resize(points.size());
  double alpha_max = 0.0;
  for (const auto& [x, y] : points) alpha_max = std::max(alpha_max, 0.5 * std::hypot(x, y));

  const int wanted = dim + 20 + static_cast<int>(std::ceil(4.0 * alpha_max * alpha_max + 12.0 * alpha_max));
  const int M = std::min(wanted, 1200);
  out.working_dim = M;
  if (alpha_max * alpha_max > 0.5 * dim || wanted > M) {
    out.beyond_safe_radius = true;
    out.warning = "grid reaches |alpha|^2 = " + std::to_string(alpha_max * alpha_max) +
                  ", beyond the safe radius for a " + std::to_string(dim) + "-level state";
  }

  // exp(r (a^dag - a)) = V exp(-i r Lambda) V^dag with S = i (a^dag - a) Hermitian.
  const FockOperator a = annihilation(M);
  const FockOperator S = cplx(0.0, 1.0) * (a.adjoint() - a);
  Eigen::SelfAdjointEigenSolver<FockOperator> es(S);
  const FockOperator& V = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();
  const FockOperator G = V.adjoint() * parity_op(M) * V;
  const FockOperator U = V.topRows(dim);

  const bool diagonal = (rho - FockOperator(rho.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  FockOperator T_fixed;
  if (diagonal) {
    const FockOperator H = U.adjoint() * rho * U;
    T_fixed = H.cwiseProduct(G.transpose());
  }

  parallel_for(points.size(), [&](std::size_t i) {
    const auto [x, y] = points[i];
    const double r = 0.5 * std::hypot(x, y);
    const double theta = std::atan2(y, x);
    Eigen::VectorXcd E(M);
    for (int j = 0; j < M; ++j) E(j) = std::polar(1.0, -r * lam(j));
    cplx w;
    if (diagonal) {
      w = E.dot(T_fixed * E);
    } else {
      Eigen::VectorXcd phase(dim);
      for (int k = 0; k < dim; ++k) phase(k) = std::polar(1.0, theta * k);
      const FockOperator rotated = phase.conjugate().asDiagonal() * rho * phase.asDiagonal();
      const FockOperator H = U.adjoint() * rotated * U;
      w = E.dot(H.cwiseProduct(G.transpose()) * E);
    }
    out.values[i] = w.real() / (2.0 * PI);
  });
  return out;
}

}  // namespace qlc
