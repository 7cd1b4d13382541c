#pragma once

// Level lines of a scalar field sampled on a uniform rectangular grid
// (marching squares with linear interpolation along cell edges).

#include <vector>

#include "anharm/model.hpp"

namespace anharm::contour {

struct Grid {
  double re_lo = 0.0, re_hi = 1.0;
  double im_lo = 0.0, im_hi = 1.0;
  int nx = 0, ny = 0;
  std::vector<double> values;  // values[iy * nx + ix]

  double re(int ix) const { return re_lo + (re_hi - re_lo) * ix / (nx - 1); }
  double im(int iy) const { return im_lo + (im_hi - im_lo) * iy / (ny - 1); }
  cplx point(int ix, int iy) const { return {re(ix), im(iy)}; }
  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
};

struct Polyline {
  std::vector<cplx> vertices;  // first == last when closed
  bool closed = false;
  double perimeter = 0.0;
};

/// Boundary of {value > level}. Saddle cells are resolved by the cell-centre
/// average. Lines leaving the grid come back open.
std::vector<Polyline> level_lines(const Grid& grid, double level);

double polyline_length(const std::vector<cplx>& vertices);

/// Even-odd rule; false for open polylines.
bool encloses(const Polyline& line, cplx p);

}  // namespace anharm::contour
