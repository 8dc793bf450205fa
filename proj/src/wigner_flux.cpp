#include "qlc/wigner_flux.hpp"

#include <cmath>
#include <iomanip>
#include <string>

#include "qlc/analytic.hpp"
#include "qlc/errors.hpp"

namespace qlc {

namespace {

enum class Axis { X, Y };

double at(const Field& f, int i, int j, Axis ax, int shift) {
  return ax == Axis::X ? f(i + shift, j) : f(i, j + shift);
}

// Applies a centered stencil along one axis; points without full support stay zero.
template <typename Stencil>
Field along(const Field& f, Axis ax, int reach, Stencil stencil) {
  const int n = static_cast<int>(f.rows());
  Field out = Field::Zero(n, n);
  const int i0 = ax == Axis::X ? reach : 0, i1 = ax == Axis::X ? n - reach : n;
  const int j0 = ax == Axis::Y ? reach : 0, j1 = ax == Axis::Y ? n - reach : n;
  for (int i = i0; i < i1; ++i) {
    for (int j = j0; j < j1; ++j) {
      out(i, j) = stencil([&](int s) { return at(f, i, j, ax, s); });
    }
  }
  return out;
}

Field d1(const Field& f, Axis ax, double h) {
  return along(f, ax, 1, [h](auto v) { return (v(1) - v(-1)) / (2.0 * h); });
}

Field d2(const Field& f, Axis ax, double h) {
  return along(f, ax, 1, [h](auto v) { return (v(1) - 2.0 * v(0) + v(-1)) / (h * h); });
}

Field d1_4(const Field& f, Axis ax, double h) {
  return along(f, ax, 2, [h](auto v) { return (-v(2) + 8.0 * v(1) - 8.0 * v(-1) + v(-2)) / (12.0 * h); });
}

Field d2_4(const Field& f, Axis ax, double h) {
  return along(f, ax, 2, [h](auto v) {
    return (-v(2) + 16.0 * v(1) - 30.0 * v(0) + 16.0 * v(-1) - v(-2)) / (12.0 * h * h);
  });
}

Field d3_4(const Field& f, Axis ax, double h) {
  return along(f, ax, 3, [h](auto v) {
    return (-v(3) + 8.0 * v(2) - 13.0 * v(1) + 13.0 * v(-1) - 8.0 * v(-2) + v(-3)) / (8.0 * h * h * h);
  });
}

struct Coefficients {
  Field fx, fy;  // first-order flux coefficients
  Field dg;      // diagonal diffusion
  Field cx, cy;  // third-order coefficients
};

Coefficients coefficients(const Grid& g, const ModelParams& p) {
  if (p.kind != ModelKind::NoiseInduced) throw PreconditionViolated("Wigner generator implemented for the noise-induced model");
  p.validate();
  const double kd = p.kappa_down, ku = p.kappa_up2, w = p.omega0;
  const double c = 0.25 * (kd - ku);
  Coefficients k;
  k.fx = g.sample([&](double x, double y) { return -w * y - (ku + kd) * x + c * (x * x + y * y) * x; });
  k.fy = g.sample([&](double x, double y) { return w * x - (ku + kd) * y + c * (x * x + y * y) * y; });
  k.dg = g.sample([&](double x, double y) { return 0.5 * (kd + ku) * (x * x + y * y) - (kd - ku); });
  k.cx = g.sample([&](double x, double) { return c * x; });
  k.cy = g.sample([&](double, double y) { return c * y; });
  return k;
}

Field interior_mask_apply(const Grid& g, const Field& f) {
  Field out = Field::Zero(g.n, g.n);
  const int m = kInteriorMargin;
  if (g.n > 2 * m) out.block(m, m, g.n - 2 * m, g.n - 2 * m) = f.block(m, m, g.n - 2 * m, g.n - 2 * m);
  return out;
}

}  // namespace

Grid Grid::square(double L, double h) {
  if (!(L > 0.0) || !(h > 0.0)) throw PreconditionViolated("grid needs L > 0 and h > 0");
  const int half = static_cast<int>(std::lround(L / h));
  if (std::abs(half * h - L) > 1e-9 * L) throw PreconditionViolated("L must be an integer multiple of h");
  if (half < kInteriorMargin + 1) throw PreconditionViolated("grid too small for the stencils");
  return Grid{L, h, 2 * half + 1};
}

Field Grid::sample(const std::function<double(double, double)>& f) const {
  Field out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = f(coord(i), coord(j));
  }
  return out;
}

void check_boundary(const Grid& g, const Field& w, double tol) {
  const double peak = w.abs().maxCoeff();
  double edge = 0.0;
  for (int k = 0; k < g.n; ++k) {
    edge = std::max({edge, std::abs(w(0, k)), std::abs(w(g.n - 1, k)), std::abs(w(k, 0)), std::abs(w(k, g.n - 1))});
  }
  if (edge > tol * peak) {
    throw BoundaryContamination("field on the grid boundary reaches " + std::to_string(edge / peak) +
                                " of its peak; enlarge L");
  }
}

Field wigner_generator_apply(const Grid& g, const Field& w, const ModelParams& p, double boundary_tol) {
  if (w.rows() != g.n || w.cols() != g.n) throw DimensionMismatch("field does not match the grid");
  check_boundary(g, w, boundary_tol);
  const Coefficients k = coefficients(g, p);
  const double h = g.h;
  const Field cxw = k.cx * w, cyw = k.cy * w, dgw = k.dg * w;
  Field out = d1(k.fx * w, Axis::X, h) + d1(k.fy * w, Axis::Y, h) + d2(dgw, Axis::X, h) + d2(dgw, Axis::Y, h);
  out += d1_4(d2_4(cxw, Axis::Y, h), Axis::X, h) + d3_4(cxw, Axis::X, h);
  out += d1_4(d2_4(cyw, Axis::X, h), Axis::Y, h) + d3_4(cyw, Axis::Y, h);
  return interior_mask_apply(g, out);
}

FluxPair wigner_current(const Grid& g, const Field& w, const ModelParams& p, double boundary_tol) {
  if (w.rows() != g.n || w.cols() != g.n) throw DimensionMismatch("field does not match the grid");
  check_boundary(g, w, boundary_tol);
  const Coefficients k = coefficients(g, p);
  const double h = g.h;
  const Field cxw = k.cx * w, cyw = k.cy * w, dgw = k.dg * w;
  FluxPair j;
  j.x = -k.fx * w - d1(dgw, Axis::X, h) - d2(cxw, Axis::X, h) - d2(cxw, Axis::Y, h);
  j.y = -k.fy * w - d1(dgw, Axis::Y, h) - d2(cyw, Axis::X, h) - d2(cyw, Axis::Y, h);
  // Edge rows lack second-derivative support.
  j.x = interior_mask_apply(g, j.x);
  j.y = interior_mask_apply(g, j.y);
  return j;
}

Field divergence(const Grid& g, const FluxPair& j) {
  return d1(j.x, Axis::X, g.h) + d1(j.y, Axis::Y, g.h);
}

FluxDecomposition flux_decompose(const Grid& g, const FluxPair& j, const Field& w, const ModelParams& p) {
  FluxDecomposition d;
  d.reversible.x = g.sample([&](double, double y) { return p.omega0 * y; }) * w;
  d.reversible.y = g.sample([&](double x, double) { return -p.omega0 * x; }) * w;
  d.irreversible.x = j.x - d.reversible.x;
  d.irreversible.y = j.y - d.reversible.y;
  return d;
}

WignerField analyze_field(const Grid& g, const Field& w, const ModelParams& p, double boundary_tol) {
  WignerField f{g, w, {}, {}, {}};
  f.residual = wigner_generator_apply(g, w, p, boundary_tol);
  f.current = wigner_current(g, w, p, boundary_tol);
  f.parts = flux_decompose(g, f.current, w, p);
  return f;
}

double interior_max(const Grid& g, const Field& a) {
  const int m = kInteriorMargin, len = g.n - 2 * m;
  return a.block(m, m, len, len).abs().maxCoeff();
}

double interior_max(const Grid& g, const FluxPair& v) {
  const int m = kInteriorMargin, len = g.n - 2 * m;
  return (v.x.block(m, m, len, len).square() + v.y.block(m, m, len, len).square()).sqrt().maxCoeff();
}

FieldStats field_stats(const WignerField& f) {
  FieldStats s;
  s.max_residual = interior_max(f.grid, f.residual);
  s.max_irreversible = interior_max(f.grid, f.parts.irreversible);
  s.max_reversible = interior_max(f.grid, f.parts.reversible);
  // The divergence stencil reaches one cell further, so shrink by one more.
  const Field div = divergence(f.grid, f.parts.reversible);
  const int m = kInteriorMargin + 1, len = f.grid.n - 2 * m;
  s.max_reversible_divergence = div.block(m, m, len, len).abs().maxCoeff();
  s.mass = f.w.sum() * f.grid.h * f.grid.h;
  return s;
}

double steady_grid_extent(double K, double wp_plus) {
  return 2.0 * std::sqrt(2.0 * mean_n_ss(K, wp_plus) + 3.0) + 2.0;
}

double adequate_grid_extent(double K, double wp_plus, double h, double tol) {
  const WignerClosedForm wf(K, wp_plus);
  const RadialScan scan = radial_mode_scan(K, wp_plus);
  // Peak of |W| in Cartesian units; the negative dip at the origin counts too.
  const double peak = std::max(std::abs(wf.at_origin()), 0.25 * std::abs(wf.radial(scan.r_argmax)));
  double L = h * std::ceil(steady_grid_extent(K, wp_plus) / h - 1e-9);
  // Beyond the mode W decays monotonically, so the ring maximum sits at R = L.
  while (std::abs(wf.cartesian(L, 0.0)) > tol * peak) L += h;
  return L;
}

void write_field_csv(std::ostream& os, const WignerField& f) {
  const auto old_flags = os.flags();
  const auto old_precision = os.precision();
  os << std::setprecision(17);
  os << "x,y,w,jx,jy,j_irr_x,j_irr_y\n";
  for (int i = 0; i < f.grid.n; ++i) {
    for (int j = 0; j < f.grid.n; ++j) {
      os << f.grid.coord(i) << ',' << f.grid.coord(j) << ',' << f.w(i, j) << ',' << f.current.x(i, j) << ','
         << f.current.y(i, j) << ',' << f.parts.irreversible.x(i, j) << ',' << f.parts.irreversible.y(i, j) << '\n';
    }
  }
  os.flags(old_flags);
  os.precision(old_precision);
}

}  // namespace qlc
