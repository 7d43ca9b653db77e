#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "vch/errors.hpp"

namespace vch {

// Uniform cell-centered tensor grid on a 1D or 2D box.
// Cells are ordered lexicographically, x fastest.
struct Grid {
  int dim = 1;
  std::array<int, 2> cells{1, 1};       // cells[1] == 1 when dim == 1
  std::array<double, 2> lengths{1.0, 1.0};
  std::array<double, 2> spacing{1.0, 1.0};
  double cell_volume = 1.0;

  int total_cells() const { return cells[0] * cells[1]; }
  int index(int i, int j = 0) const { return i + cells[0] * j; }
  // Coordinate of the k-th cell center along an axis.
  double center(int axis, int k) const { return (k + 0.5) * spacing[axis]; }
  double domain_volume() const { return lengths[0] * (dim == 2 ? lengths[1] : 1.0); }

  friend bool operator==(const Grid&, const Grid&) = default;
};

Grid build_grid(int dim, const std::vector<int>& cells_per_axis,
                const std::vector<double>& lengths);

// Scalar values over grid cells, cell-centered, lexicographic order.
class Field {
 public:
  Field() = default;
  explicit Field(const Grid& grid, double fill = 0.0)
      : grid_(grid), values_(static_cast<size_t>(grid.total_cells()), fill) {}
  Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.total_cells())
      throw VchError("field-size", "field value count does not match grid cell count");
  }

  const Grid& grid() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }
  double& operator[](int i) { return values_[static_cast<size_t>(i)]; }
  double operator[](int i) const { return values_[static_cast<size_t>(i)]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

void require_same_grid(const Field& a, const Field& b);
bool all_finite(const Field& u);
void require_finite(const Field& u, const char* what);

// Pointwise transform, result on the same grid.
template <class F>
Field map_values(const Field& u, F&& f) {
  Field out(u.grid());
  for (int i = 0; i < u.size(); ++i) out[i] = f(u[i]);
  return out;
}

// Elementwise arithmetic (matching grids).
Field& operator+=(Field& a, const Field& b);
Field& operator-=(Field& a, const Field& b);
Field& operator*=(Field& a, double s);
Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
Field operator-(Field a);

double min_value(const Field& u);
double max_value(const Field& u);
// min over cells of min(u_i, 1 - u_i); positive iff u is strictly inside (0,1).
double min_distance_to_unit_bounds(const Field& u);

// Discrete Neumann Laplacian: second-order central stencil per axis with
// mirrored ghost cells (ghost value = adjacent interior value). Symmetric,
// negative semidefinite, constants in the kernel.
Field neumann_laplacian_apply(const Grid& grid, const Field& u);

// Discrete inner products and norms standing in for L2 / H1.
double inner_l2(const Field& u, const Field& v);
double norm_l2(const Field& u);
// Operator-consistent H1 seminorm: sqrt(<-Lu, u>).
double seminorm_h1(const Field& u);
double norm_v(const Field& u);
double norm_linf(const Field& u);

}  // namespace vch
