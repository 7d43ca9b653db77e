#include "vch/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace vch {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_snapshot(const std::string& path, const Field& field) {
  std::ofstream out(path);
  if (!out) throw VchError("io-error", "cannot open '" + path + "' for writing");
  const Grid& g = field.grid();
  out << "# grid dim=" << g.dim << " cells=" << g.cells[0];
  if (g.dim == 2) out << "," << g.cells[1];
  out << " lengths=" << format_double(g.lengths[0]);
  if (g.dim == 2) out << "," << format_double(g.lengths[1]);
  out << "\n";
  for (int i = 0; i < field.size(); ++i) out << format_double(field[i]) << "\n";
  if (!out) throw VchError("io-error", "write failed for '" + path + "'");
}

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

}  // namespace

Field read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw VchError("io-error", "cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);

  int dim = 0;
  std::vector<int> cells;
  std::vector<double> lengths;
  {
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("dim=", 0) == 0) dim = std::stoi(tok.substr(4));
      else if (tok.rfind("cells=", 0) == 0)
        for (const auto& p : split_csv(tok.substr(6))) cells.push_back(std::stoi(p));
      else if (tok.rfind("lengths=", 0) == 0)
        for (const auto& p : split_csv(tok.substr(8))) lengths.push_back(std::stod(p));
    }
  }
  if (dim == 0 || cells.empty() || lengths.empty())
    throw VchError("io-error", "malformed snapshot header in '" + path + "'");

  const Grid grid = build_grid(dim, cells, lengths);
  std::vector<double> values;
  values.reserve(static_cast<size_t>(grid.total_cells()));
  double v;
  while (in >> v) values.push_back(v);
  if (static_cast<int>(values.size()) != grid.total_cells())
    throw VchError("io-error", "snapshot '" + path + "' has " + std::to_string(values.size()) +
                                   " values, expected " + std::to_string(grid.total_cells()));
  return Field(grid, std::move(values));
}

}  // namespace vch
