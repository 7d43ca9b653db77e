#pragma once

#include <string>

#include "vch/grid.hpp"

namespace vch {

// Field snapshot text format: one header line
//   # grid dim=<d> cells=<n1>[,<n2>] lengths=<l1>[,<l2>]
// then one value per line in lexicographic cell order, 17 significant digits.
void write_snapshot(const std::string& path, const Field& field);
Field read_snapshot(const std::string& path);

// Shortest round-trip-exact decimal rendering used by all file writers.
std::string format_double(double x);

}  // namespace vch
