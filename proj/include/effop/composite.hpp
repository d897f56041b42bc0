#pragma once

#include "effop/recursion.hpp"

#include <iosfwd>
#include <vector>

namespace effop {

/// Two-phase periodic composite on a d-dimensional pixel grid.
struct GeometryGrid {
  std::vector<Index> dims;  // N_1 x ... x N_d pixels
  std::vector<int> phase;   // per-pixel, row-major, values in {1, 2}
  int d = 0;

  Index pixel_count() const;
  double volume_fraction(int which) const;
};

/// Phase-1 slab of f1 * n_along layers normal to `axis` on a 2-d grid.
GeometryGrid laminate(Index n_along, Index n_across, double f1, int axis);

/// N x N four-quadrant board (period-N/2 two-block checkerboard), f1 = 1/2.
GeometryGrid checkerboard(Index n);

struct GridCollection {
  Z2Collection base;  // ambient_dim = d * N, pixel-major, d components per pixel
  GeometryGrid grid;
};

/// Discrete Fourier construction: zero frequency -> U, the span of k-hat per
/// nonzero frequency -> E, its (d-1)-dim complement -> J. P1, P2 are the
/// pixel indicator spaces, so both decompositions are exact.
GridCollection build_grid_collection(const GeometryGrid& g);

/// Effective conductivity tensor (d x d) through the selected solver path.
EffectiveResult effective_conductivity(const GeometryGrid& g, Complex sigma1,
                                       Complex sigma2, Method method = Method::schur);

struct DegeneracyReport {
  Index dim_VE = 0;
  Index dim_VJ = 0;
  CMatrix ve_witness;  // ambient columns spanning V cap E
  CMatrix vj_witness;
};

DegeneracyReport degeneracy_report(const GeometryGrid& g);

/// ASCII format: one text row of '1'/'2' per grid row (d=2), or one line (d=1).
GeometryGrid grid_from_ascii(std::istream& in);
GeometryGrid grid_from_ascii_string(const std::string& text);

}  // namespace effop
