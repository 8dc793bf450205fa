#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qlc/analytic.hpp"
#include "qlc/errors.hpp"
#include "qlc/lindblad.hpp"
#include "qlc/wigner_flux.hpp"

using namespace qlc;

namespace {

constexpr double PI = std::numbers::pi;

double coherent_wigner(cplx alpha, double x, double y) {
  const double dx = x - 2.0 * alpha.real(), dy = y - 2.0 * alpha.imag();
  return std::exp(-0.5 * (dx * dx + dy * dy)) / (2.0 * PI);
}

struct GeneratorGap {
  double max_gap;
  double scale;
};

// The phase-space generator applied to a coherent-state Wigner function, compared
// at a few grid points with the Wigner transform of the Fock-space generator output.
GeneratorGap generator_gap(const ModelParams& p, cplx alpha, double h) {
  const Grid g = Grid::square(10.0, h);
  const Field w = g.sample([&](double x, double y) { return coherent_wigner(alpha, x, y); });
  const Field lw = wigner_generator_apply(g, w, p);

  const int dim = 50;
  const DensityMatrix drho = qlc::apply(liouvillian(p, dim), coherent_state(dim, alpha));
  std::vector<std::pair<double, double>> pts;
  std::vector<std::pair<int, int>> idx;
  for (double x : {0.0, 1.0, 2.0, 3.5}) {
    for (double y : {-1.5, -0.5, 0.5, 1.0}) {
      const int i = static_cast<int>(std::lround((x + g.L) / h)), j = static_cast<int>(std::lround((y + g.L) / h));
      pts.emplace_back(g.coord(i), g.coord(j));
      idx.emplace_back(i, j);
    }
  }
  const WignerSamples ref = wigner_numeric(drho, pts);
  GeneratorGap out{0.0, 0.0};
  for (std::size_t k = 0; k < pts.size(); ++k) {
    out.max_gap = std::max(out.max_gap, std::abs(lw(idx[k].first, idx[k].second) - ref.values[k]));
    out.scale = std::max(out.scale, std::abs(ref.values[k]));
  }
  return out;
}

}  // namespace

TEST_CASE("grid construction") {
  const Grid g = Grid::square(2.0, 0.5);
  CHECK(g.n == 9);
  CHECK(g.coord(0) == -2.0);
  CHECK(g.coord(8) == 2.0);
  CHECK_THROWS_AS(Grid::square(1.0, 0.3), PreconditionViolated);
  CHECK_THROWS_AS(Grid::square(0.5, 0.25), PreconditionViolated);
}

TEST_CASE("finite-difference generator matches the Fock-space generator") {
  // Non-radial coherent states exercise the rotation and every third-order term.
  const ModelParams p = ModelParams::noise_induced(2.0, 1.0, 0.3);
  const cplx alpha(0.8, -0.3);
  const GeneratorGap coarse = generator_gap(p, alpha, 0.1);
  const GeneratorGap fine = generator_gap(p, alpha, 0.05);
  CHECK(coarse.max_gap < 2e-2 * coarse.scale);
  CHECK(std::log2(coarse.max_gap / fine.max_gap) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("generator equals minus the divergence of the current") {
  const ModelParams p = ModelParams::noise_induced(1.0, 1.0, 0.4);
  const Grid g = Grid::square(10.0, 0.05);
  const Field w = g.sample([](double x, double y) { return coherent_wigner({0.5, 0.7}, x, y); });
  const Field lw = wigner_generator_apply(g, w, p);
  const Field div = divergence(g, wigner_current(g, w, p));
  // Both are second-order approximations of the same field; compare well inside the grid.
  const int m = kInteriorMargin + 2, len = g.n - 2 * m;
  const double gap = (lw + div).block(m, m, len, len).abs().maxCoeff();
  CHECK(gap < 2e-2 * lw.abs().maxCoeff());
}

TEST_CASE("steady state: small residual, rotation carries the current") {
  const ModelParams p = ModelParams::noise_induced(10.0, 1.0, 0.5);
  const WignerClosedForm wf(0.5, 0.55);
  const double L = adequate_grid_extent(0.5, 0.55, 0.05);
  const Grid g = Grid::square(L, 0.05);
  const WignerField f = analyze_field(g, g.sample([&](double x, double y) { return wf.cartesian(x, y); }), p);
  const FieldStats s = field_stats(f);
  CHECK(s.mass == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(s.max_irreversible < 1e-3 * s.max_reversible);
  CHECK(s.max_reversible_divergence < 1e-3 * s.max_reversible);
  CHECK(s.max_residual < 1e-3);
}

TEST_CASE("boundary guard") {
  const ModelParams p = ModelParams::noise_induced(1.0, 1.0, 0.5);
  const Grid g = Grid::square(3.0, 0.1);
  const Field w = g.sample([](double x, double y) { return coherent_wigner({0.0, 0.0}, x, y); });
  CHECK_THROWS_AS(wigner_generator_apply(g, w, p), BoundaryContamination);
  CHECK_NOTHROW(wigner_generator_apply(g, w, p, 1e-1));
  CHECK_THROWS_AS(wigner_current(g, Field::Zero(g.n + 1, g.n + 1), p), DimensionMismatch);
  CHECK_THROWS_AS(wigner_generator_apply(g, w, ModelParams::conventional(1.0, 1.0, 0.3), 1e-1), PreconditionViolated);
}

TEST_CASE("grid extents") {
  CHECK(steady_grid_extent(0.5, 0.55) == doctest::Approx(2.0 * std::sqrt(2.0 * mean_n_ss(0.5, 0.55) + 3.0) + 2.0));
  const double h = 0.05;
  const double L = adequate_grid_extent(0.5, 0.55, h);
  CHECK(L >= steady_grid_extent(0.5, 0.55));
  CHECK(std::abs(L / h - std::round(L / h)) < 1e-9);
  const WignerClosedForm wf(0.5, 0.55);
  CHECK(std::abs(wf.cartesian(L, 0.0)) <= 1e-8 * std::abs(wf.at_origin()) + 1e-8 * 0.25 * 4.0);
}

TEST_CASE("field CSV has one row per grid point and full precision") {
  const ModelParams p = ModelParams::noise_induced(1.0, 1.0, 0.2);
  const Grid g = Grid::square(9.0, 0.5);
  const WignerField f =
      analyze_field(g, g.sample([](double x, double y) { return coherent_wigner({0.0, 0.0}, x, y); }), p);
  std::ostringstream os;
  write_field_csv(os, f);
  const std::string text = os.str();
  CHECK(text.rfind("x,y,w,jx,jy,j_irr_x,j_irr_y\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == g.n * g.n + 1);
  CHECK(text.find("0.15915494309189535") != std::string::npos);
}
