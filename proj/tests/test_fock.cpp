#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qlc/errors.hpp"
#include "qlc/fock.hpp"

using namespace qlc;

namespace {

FockOperator random_operator(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  FockOperator X(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) X(i, j) = cplx(g(rng), g(rng));
  }
  return X;
}

// Dense reference: the master-equation right-hand side written out with matrix products.
FockOperator lindblad_rhs(const ModelParams& p, const FockOperator& X) {
  const int d = static_cast<int>(X.rows());
  FockOperator a = FockOperator::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
  const FockOperator n_op = a.adjoint() * a;
  auto D = [&](const FockOperator& c) {
    const FockOperator cdc = c.adjoint() * c;
    return FockOperator(c * X * c.adjoint() - 0.5 * (cdc * X + X * cdc));
  };
  FockOperator out = cplx(0.0, -p.omega0) * (n_op * X - X * n_op);
  out += p.kappa_down * D(a * a);
  if (p.kind == ModelKind::NoiseInduced) {
    out += p.kappa_up2 * D(a.adjoint() * a.adjoint());
  } else {
    out += p.kappa_up1 * D(a.adjoint());
  }
  return out;
}

}  // namespace

TEST_CASE("ladder operators satisfy the truncated commutation relation") {
  const int d = 12;
  const auto [a, ad] = build_ladder(d);
  const FockOperator comm = a * ad - ad * a;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double expected = i != j ? 0.0 : (i == d - 1 ? 1.0 - d : 1.0);
      CHECK(std::abs(comm(i, j) - expected) < 1e-12);
    }
  }
  CHECK((number_op(d) - ad * a).norm() < 1e-12);
  CHECK((ad - a.adjoint()).norm() == 0.0);
}

TEST_CASE("parity, quadratures and projectors") {
  const int d = 9;
  const FockOperator P = parity_op(d);
  CHECK((P * P - FockOperator::Identity(d, d)).norm() < 1e-15);
  for (int n = 0; n < d; ++n) CHECK(P(n, n).real() == (n % 2 == 0 ? 1.0 : -1.0));
  const FockOperator a = annihilation(d);
  CHECK((quadrature_x(d) - (a + a.adjoint())).norm() < 1e-14);
  CHECK((quadrature_y(d) - cplx(0.0, -1.0) * (a - a.adjoint())).norm() < 1e-14);
  CHECK(quadrature_y(d).isApprox(quadrature_y(d).adjoint()));
  const FockOperator proj = fock_projector(d, 4);
  CHECK(proj.trace().real() == 1.0);
  CHECK(proj(4, 4).real() == 1.0);
  CHECK_THROWS_AS(fock_projector(d, d), InvalidDimension);
  CHECK_THROWS_AS(annihilation(1), InvalidDimension);
}

TEST_CASE("vectorization is column stacking and round-trips") {
  std::mt19937_64 rng(1);
  const FockOperator X = random_operator(5, rng);
  const OpVector v = vectorize(X);
  CHECK(v(1) == X(1, 0));
  CHECK(v(5) == X(0, 1));
  CHECK((devectorize(v) - X).norm() == 0.0);
  CHECK_THROWS_AS(devectorize(OpVector::Zero(7)), InvalidDimension);

  const FockOperator A = random_operator(5, rng), B = random_operator(5, rng);
  CHECK((qlc::apply(left_multiply(A), X) - A * X).norm() < 1e-12);
  CHECK((qlc::apply(right_multiply(B), X) - X * B).norm() < 1e-12);
  CHECK(op_dim_of(left_multiply(A)) == 5);
}

TEST_CASE("Liouvillian matches the dense master-equation right-hand side") {
  std::mt19937_64 rng(2);
  for (const ModelParams& p : {ModelParams::noise_induced(1.3, 0.7, 0.4), ModelParams::conventional(-0.5, 1.0, 0.3)}) {
    const int d = 10;
    const Superoperator L = liouvillian(p, d);
    for (int trial = 0; trial < 3; ++trial) {
      const FockOperator X = random_operator(d, rng);
      const FockOperator ref = lindblad_rhs(p, X);
      CHECK((qlc::apply(L, X) - ref).norm() < 1e-12 * (1.0 + ref.norm()));
    }
  }
}

TEST_CASE("Liouvillian is trace preserving and Hermiticity preserving") {
  std::mt19937_64 rng(3);
  const ModelParams p = ModelParams::noise_induced(2.0, 1.0, 0.6);
  const Superoperator L = liouvillian(p, 14);
  FockOperator X = random_operator(14, rng);
  X = X + X.adjoint().eval();
  const FockOperator Y = qlc::apply(L, X);
  CHECK(std::abs(Y.trace()) < 1e-11);
  CHECK((Y - Y.adjoint()).norm() < 1e-11);
}

TEST_CASE("adjoint Liouvillian is the Hilbert-Schmidt dual") {
  std::mt19937_64 rng(4);
  for (const ModelParams& p : {ModelParams::noise_induced(0.8, 1.0, 0.3), ModelParams::conventional(1.0, 1.0, 0.4)}) {
    const int d = 11;
    const Superoperator L = liouvillian(p, d), Ld = adjoint_liouvillian(p, d);
    const FockOperator A = random_operator(d, rng), X = random_operator(d, rng);
    const cplx lhs = (A.adjoint() * qlc::apply(L, X)).trace();
    const cplx rhs = (qlc::apply(Ld, A).adjoint() * X).trace();
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
    // Unital: the identity is annihilated by the adjoint generator.
    CHECK(qlc::apply(Ld, FockOperator::Identity(d, d)).norm() < 1e-12);
  }
}

TEST_CASE("parity symmetry: weak for both models, strong only for the noise-induced one") {
  std::mt19937_64 rng(5);
  const int d = 12;
  const Superoperator L = liouvillian(ModelParams::noise_induced(1.0, 1.0, 0.5), d);
  const FockOperator P = parity_op(d), X = random_operator(d, rng);
  CHECK((qlc::apply(L, P * X * P) - P * qlc::apply(L, X) * P).norm() < 1e-12);

  // a^dag anticommutes with parity, so conjugation by parity is a symmetry of both generators.
  const Superoperator Lc = liouvillian(ModelParams::conventional(1.0, 1.0, 0.3), d);
  CHECK((qlc::apply(Lc, P * X * P) - P * qlc::apply(Lc, X) * P).norm() < 1e-12);
  // Parity itself is conserved only when every jump operator changes n by an even amount.
  CHECK(qlc::apply(adjoint_liouvillian(ModelParams::noise_induced(1.0, 1.0, 0.5), d), P).norm() < 1e-12);
  CHECK(qlc::apply(adjoint_liouvillian(ModelParams::conventional(1.0, 1.0, 0.3), d), P).norm() > 0.1);
}

TEST_CASE("model parameters validate") {
  CHECK(ModelParams::noise_induced(1.0, 2.0, 0.25).K() == doctest::Approx(0.25));
  CHECK(ModelParams::conventional(1.0, 1.0, 0.3).K() == 0.0);
  CHECK_THROWS_AS(ModelParams::noise_induced(1.0, 1.0, 1.0).validate(), NoStationaryState);
  CHECK_THROWS_AS(ModelParams::noise_induced(1.0, -1.0, 0.0).validate(), PreconditionViolated);
  ModelParams bad = ModelParams::conventional(1.0, 1.0, 0.3);
  bad.kappa_up2 = 0.1;
  CHECK_THROWS_AS(bad.validate(), PreconditionViolated);
  ModelParams nan_freq = ModelParams::noise_induced(1.0, 1.0, 0.1);
  nan_freq.omega0 = std::nan("");
  CHECK_THROWS_AS(nan_freq.validate(), PreconditionViolated);
}

TEST_CASE("truncation dimension keeps the geometric tail below 1e-12") {
  CHECK(truncation_dim(ModelParams::noise_induced(1.0, 1.0, 0.1)) == 24);
  CHECK(truncation_dim(ModelParams::noise_induced(1.0, 1.0, 0.2)) == 36);
  CHECK(truncation_dim(ModelParams::noise_induced(1.0, 1.0, 0.5)) == 80);
  CHECK(truncation_dim(ModelParams::noise_induced(1.0, 1.0, 0.8)) == 248);
  CHECK(truncation_dim(ModelParams::noise_induced(1.0, 1.0, 0.0)) == 20);
  CHECK(truncation_dim(ModelParams::noise_induced(1.0, 1.0, 0.99)) == 400);
  CHECK(truncation_dim(ModelParams::conventional(1.0, 1.0, 0.3)) == 20);
  for (double K : {0.05, 0.3, 0.6, 0.9}) {
    const int n = truncation_dim(ModelParams::noise_induced(1.0, 1.0, K));
    CHECK(n % 2 == 0);
    if (n < 400) CHECK(std::pow(K, n / 2) <= 1e-12 * (1.0 + 1e-9));
  }
}
