#pragma once

// Finite-difference Wigner generator of the noise-induced model on a square
// Cartesian grid, its flux-form current and the reversible/irreversible split.

#include <functional>
#include <ostream>

#include <Eigen/Dense>

#include "qlc/fock.hpp"

namespace qlc {

using Field = Eigen::ArrayXXd;  // (i, j) <-> (x_i, y_j)

struct Grid {
  double L;
  double h;
  int n;  // points per axis, x_i = -L + i h

  static Grid square(double L, double h);
  double coord(int i) const { return -L + i * h; }
  Field sample(const std::function<double(double, double)>& f) const;
};

// Points within this many cells of the edge are excluded from statistics.
constexpr int kInteriorMargin = 3;

struct FluxPair {
  Field x;
  Field y;
};

constexpr double kBoundaryTol = 1e-8;

// Throws BoundaryContamination when |w| on the outer ring exceeds tol * max |w|.
void check_boundary(const Grid& g, const Field& w, double tol = kBoundaryTol);

Field wigner_generator_apply(const Grid& g, const Field& w, const ModelParams& p, double boundary_tol = kBoundaryTol);
FluxPair wigner_current(const Grid& g, const Field& w, const ModelParams& p, double boundary_tol = kBoundaryTol);
Field divergence(const Grid& g, const FluxPair& j);

struct FluxDecomposition {
  FluxPair reversible;
  FluxPair irreversible;
};
FluxDecomposition flux_decompose(const Grid& g, const FluxPair& j, const Field& w, const ModelParams& p);

struct WignerField {
  Grid grid;
  Field w;
  FluxPair current;
  FluxDecomposition parts;
  Field residual;
};
WignerField analyze_field(const Grid& g, const Field& w, const ModelParams& p, double boundary_tol = kBoundaryTol);

struct FieldStats {
  double max_residual;
  double max_irreversible;
  double max_reversible;
  double max_reversible_divergence;
  double mass;  // sum w h^2 over the full grid
};
FieldStats field_stats(const WignerField& f);

// Max over the interior of |a|, or of |(a, b)| for a vector field.
double interior_max(const Grid& g, const Field& a);
double interior_max(const Grid& g, const FluxPair& v);

// 2 sqrt(2 <n> + 3) + 2
double steady_grid_extent(double K, double wp_plus);
// Smallest multiple of h, at least steady_grid_extent, whose boundary ring stays below tol of the peak.
double adequate_grid_extent(double K, double wp_plus, double h, double tol = kBoundaryTol);

// Columns x, y, w, jx, jy, j_irr_x, j_irr_y.
void write_field_csv(std::ostream& os, const WignerField& f);

}  // namespace qlc
