#include "vch/grid.hpp"

#include <algorithm>
#include <cmath>

namespace vch {

Grid build_grid(int dim, const std::vector<int>& cells_per_axis,
                const std::vector<double>& lengths) {
  if (dim != 1 && dim != 2)
    throw ConfigError("unsupported dimension " + std::to_string(dim) + " (must be 1 or 2)",
                      "grid-dimension");
  if (static_cast<int>(cells_per_axis.size()) != dim)
    throw ConfigError("expected " + std::to_string(dim) + " cell counts, got " +
                          std::to_string(cells_per_axis.size()),
                      "grid-cells");
  if (static_cast<int>(lengths.size()) != dim)
    throw ConfigError("expected " + std::to_string(dim) + " lengths, got " +
                          std::to_string(lengths.size()),
                      "grid-lengths");

  Grid g;
  g.dim = dim;
  for (int a = 0; a < dim; ++a) {
    if (cells_per_axis[a] < 2)
      throw ConfigError("cells per axis must be >= 2, got " + std::to_string(cells_per_axis[a]),
                        "grid-cells");
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a]))
      throw ConfigError("domain lengths must be positive and finite", "grid-lengths");
    g.cells[a] = cells_per_axis[a];
    g.lengths[a] = lengths[a];
    g.spacing[a] = lengths[a] / cells_per_axis[a];
  }
  if (dim == 1) {
    g.cells[1] = 1;
    g.lengths[1] = 1.0;
    g.spacing[1] = 1.0;
  }
  g.cell_volume = g.spacing[0] * (dim == 2 ? g.spacing[1] : 1.0);
  return g;
}

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw VchError("grid-mismatch", "fields live on different grids");
}

bool all_finite(const Field& u) {
  for (int i = 0; i < u.size(); ++i)
    if (!std::isfinite(u[i])) return false;
  return true;
}

void require_finite(const Field& u, const char* what) {
  if (!all_finite(u)) throw VchError("non-finite", std::string(what) + " contains NaN/Inf");
}

Field& operator+=(Field& a, const Field& b) {
  require_same_grid(a, b);
  for (int i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

Field& operator-=(Field& a, const Field& b) {
  require_same_grid(a, b);
  for (int i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

Field& operator*=(Field& a, double s) {
  for (int i = 0; i < a.size(); ++i) a[i] *= s;
  return a;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }
Field operator-(Field a) { return a *= -1.0; }

double min_value(const Field& u) {
  double m = u[0];
  for (int i = 1; i < u.size(); ++i) m = std::min(m, u[i]);
  return m;
}

double max_value(const Field& u) {
  double m = u[0];
  for (int i = 1; i < u.size(); ++i) m = std::max(m, u[i]);
  return m;
}

double min_distance_to_unit_bounds(const Field& u) {
  double m = std::min(u[0], 1.0 - u[0]);
  for (int i = 1; i < u.size(); ++i) m = std::min(m, std::min(u[i], 1.0 - u[i]));
  return m;
}

Field neumann_laplacian_apply(const Grid& grid, const Field& u) {
  if (!(u.grid() == grid)) throw VchError("grid-mismatch", "field does not live on given grid");
  const int nx = grid.cells[0];
  const int ny = grid.cells[1];
  const double sx = 1.0 / (grid.spacing[0] * grid.spacing[0]);
  Field out(grid);
  // (left + right) is summed first so mirrored data stays bitwise symmetric.
  for (int j = 0; j < ny; ++j) {
    const int row = nx * j;
    for (int i = 0; i < nx; ++i) {
      const double uc = u[row + i];
      const double ul = (i > 0) ? u[row + i - 1] : uc;
      const double ur = (i < nx - 1) ? u[row + i + 1] : uc;
      out[row + i] = ((ul + ur) - 2.0 * uc) * sx;
    }
  }
  if (grid.dim == 2) {
    const double sy = 1.0 / (grid.spacing[1] * grid.spacing[1]);
    for (int j = 0; j < ny; ++j) {
      const int row = nx * j;
      for (int i = 0; i < nx; ++i) {
        const double uc = u[row + i];
        const double ud = (j > 0) ? u[row - nx + i] : uc;
        const double uu = (j < ny - 1) ? u[row + nx + i] : uc;
        out[row + i] += ((ud + uu) - 2.0 * uc) * sy;
      }
    }
  }
  return out;
}

double inner_l2(const Field& u, const Field& v) {
  require_same_grid(u, v);
  double s = 0.0;
  for (int i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s * u.grid().cell_volume;
}

double norm_l2(const Field& u) { return std::sqrt(inner_l2(u, u)); }

double seminorm_h1(const Field& u) {
  const Field lap = neumann_laplacian_apply(u.grid(), u);
  double s = -inner_l2(lap, u);
  // <-Lu, u> >= 0 up to roundoff
  return std::sqrt(std::max(s, 0.0));
}

double norm_v(const Field& u) {
  const double l2 = norm_l2(u);
  const double h1 = seminorm_h1(u);
  return std::sqrt(l2 * l2 + h1 * h1);
}

double norm_linf(const Field& u) {
  double m = 0.0;
  for (int i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i]));
  return m;
}

}  // namespace vch
