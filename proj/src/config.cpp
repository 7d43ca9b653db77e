#include "vch/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vch/snapshot.hpp"

namespace vch {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInteriorMargin = 1e-6;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg, "config-parse");
}

double parse_real(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "expected a real number, got '" + v + "'");
  }
}

long long parse_int(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in integer '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "expected an integer, got '" + v + "'");
  }
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& v, int line, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(line, "empty list entry");
    out.push_back(parse(item, line));
  }
  if (out.empty()) fail(line, "empty list");
  return out;
}

[[noreturn]] void constraint(const std::string& key, const std::string& msg) {
  throw ConfigError(key + ": " + msg, "config-constraint");
}

void validate(RunConfig& cfg, bool tau_given) {
  if (cfg.dim != 1 && cfg.dim != 2) constraint("grid.dim", "must be 1 or 2");
  if (static_cast<int>(cfg.cells.size()) != cfg.dim)
    constraint("grid.cells", "needs exactly " + std::to_string(cfg.dim) + " entries");
  if (static_cast<int>(cfg.lengths.size()) != cfg.dim)
    constraint("grid.lengths", "needs exactly " + std::to_string(cfg.dim) + " entries");
  for (int c : cfg.cells)
    if (c < 2) constraint("grid.cells", "each axis needs at least 2 cells");
  for (double l : cfg.lengths)
    if (!(l > 0.0)) constraint("grid.lengths", "lengths must be positive");

  if (!(cfg.alpha1 > 0.0)) constraint("potential.alpha1", "must be > 0 (barrier property)");
  if (cfg.alpha2 < 0.0) constraint("potential.alpha2", "must be >= 0");
  if (cfg.alpha3 < 0.0) constraint("potential.alpha3", "must be >= 0");
  if (cfg.g != "identity") constraint("potential.g", "only 'identity' is supported");

  if (!(cfg.T >= 0.0)) constraint("time.T", "must be >= 0");
  if (!tau_given) cfg.tau = cfg.T > 0.0 ? cfg.T / 256.0 : 0.25 / 256.0;
  if (!(cfg.tau > 0.0)) constraint("time.tau", "must be > 0");
  for (long long d : cfg.ladder)
    if (d < 1) constraint("time.ladder", "divisors must be >= 1");
  if (cfg.tau_ref_divisor < 1) constraint("time.tau_ref", "must be >= 1");

  // step-size admissibility gate against the configured potentials
  const double d2_sup = 2.0 * cfg.alpha2;
  if (cfg.tau * d2_sup > 0.5)
    constraint("time.tau", "inadmissible: tau*sup|f2''| = " + format_double(cfg.tau * d2_sup) +
                               " exceeds 1/2; maximal admissible tau = " +
                               format_double(0.5 / d2_sup));

  if (cfg.preset != "cosine" && cfg.preset != "rough" && cfg.preset != "files")
    constraint("init.preset", "must be cosine, rough, or files");
  if (cfg.preset == "files") {
    if (cfg.mu_file.empty() || cfg.rho_file.empty())
      constraint("init.mu_file", "files preset needs init.mu_file and init.rho_file");
  } else {
    double rho_span = std::abs(cfg.rho_amp);
    if (cfg.preset == "rough") rho_span += std::abs(cfg.rough_amp);
    if (0.5 - rho_span < kInteriorMargin)
      constraint("init.rho_amp", "0.5 +/- " + format_double(rho_span) +
                                     " leaves (0,1); interiority margin 1e-6 required");
    if (cfg.mu_mean - std::abs(cfg.mu_amp) < 0.0)
      constraint("init.mu_amp", "mu0 must stay nonnegative (mu_mean - |mu_amp| >= 0)");
    if (cfg.rough_k < 1) constraint("init.rough_k", "must be >= 1");
  }

  if (!(cfg.solver.newton_tol > 0.0)) constraint("solver.newton_tol", "must be > 0");
  if (cfg.solver.newton_max_iters < 1) constraint("solver.newton_max_iters", "must be >= 1");
  if (!(cfg.solver.cg_tol > 0.0)) constraint("solver.cg_tol", "must be > 0");
  if (cfg.solver.cg_max_iters < 0) constraint("solver.cg_max_iters", "must be >= 0");
  if (!(cfg.solver.theta > 0.0 && cfg.solver.theta < 1.0))
    constraint("solver.theta", "must lie in (0,1)");
  if (cfg.store_every < 1) constraint("output.store_every", "must be >= 1");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  bool tau_given = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "empty value for key '" + key + "'");

    if (key == "grid.dim") cfg.dim = static_cast<int>(parse_int(value, line_no));
    else if (key == "grid.cells") {
      const auto v = parse_list<long long>(value, line_no, parse_int);
      cfg.cells.assign(v.begin(), v.end());
    } else if (key == "grid.lengths") cfg.lengths = parse_list<double>(value, line_no, parse_real);
    else if (key == "potential.alpha1") cfg.alpha1 = parse_real(value, line_no);
    else if (key == "potential.alpha2") cfg.alpha2 = parse_real(value, line_no);
    else if (key == "potential.alpha3") cfg.alpha3 = parse_real(value, line_no);
    else if (key == "potential.g") cfg.g = value;
    else if (key == "time.T") cfg.T = parse_real(value, line_no);
    else if (key == "time.tau") {
      cfg.tau = parse_real(value, line_no);
      tau_given = true;
    } else if (key == "time.ladder") cfg.ladder = parse_list<long long>(value, line_no, parse_int);
    else if (key == "time.tau_ref") cfg.tau_ref_divisor = parse_int(value, line_no);
    else if (key == "init.preset") cfg.preset = value;
    else if (key == "init.rho_amp") cfg.rho_amp = parse_real(value, line_no);
    else if (key == "init.mu_mean") cfg.mu_mean = parse_real(value, line_no);
    else if (key == "init.mu_amp") cfg.mu_amp = parse_real(value, line_no);
    else if (key == "init.rough_amp") cfg.rough_amp = parse_real(value, line_no);
    else if (key == "init.rough_k") cfg.rough_k = parse_int(value, line_no);
    else if (key == "init.mu_file") cfg.mu_file = value;
    else if (key == "init.rho_file") cfg.rho_file = value;
    else if (key == "solver.newton_tol") cfg.solver.newton_tol = parse_real(value, line_no);
    else if (key == "solver.newton_max_iters")
      cfg.solver.newton_max_iters = static_cast<int>(parse_int(value, line_no));
    else if (key == "solver.cg_tol") cfg.solver.cg_tol = parse_real(value, line_no);
    else if (key == "solver.cg_max_iters")
      cfg.solver.cg_max_iters = static_cast<int>(parse_int(value, line_no));
    else if (key == "solver.theta") cfg.solver.theta = parse_real(value, line_no);
    else if (key == "output.dir") cfg.out_dir = value;
    else if (key == "output.store_every")
      cfg.store_every = static_cast<int>(parse_int(value, line_no));
    else fail(line_no, "unknown key '" + key + "'");
  }

  validate(cfg, tau_given);
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  auto join_ints = [](const auto& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  std::string lengths;
  for (size_t i = 0; i < cfg.lengths.size(); ++i)
    lengths += (i ? "," : "") + format_double(cfg.lengths[i]);

  out << "grid.dim = " << cfg.dim << "\n";
  out << "grid.cells = " << join_ints(cfg.cells) << "\n";
  out << "grid.lengths = " << lengths << "\n";
  out << "potential.alpha1 = " << format_double(cfg.alpha1) << "\n";
  out << "potential.alpha2 = " << format_double(cfg.alpha2) << "\n";
  out << "potential.alpha3 = " << format_double(cfg.alpha3) << "\n";
  out << "potential.g = " << cfg.g << "\n";
  out << "time.T = " << format_double(cfg.T) << "\n";
  out << "time.tau = " << format_double(cfg.tau) << "\n";
  out << "time.ladder = " << join_ints(cfg.ladder) << "\n";
  out << "time.tau_ref = " << cfg.tau_ref_divisor << "\n";
  out << "init.preset = " << cfg.preset << "\n";
  if (cfg.preset == "files") {
    out << "init.mu_file = " << cfg.mu_file << "\n";
    out << "init.rho_file = " << cfg.rho_file << "\n";
  } else {
    out << "init.rho_amp = " << format_double(cfg.rho_amp) << "\n";
    out << "init.mu_mean = " << format_double(cfg.mu_mean) << "\n";
    out << "init.mu_amp = " << format_double(cfg.mu_amp) << "\n";
    out << "init.rough_amp = " << format_double(cfg.rough_amp) << "\n";
    out << "init.rough_k = " << cfg.rough_k << "\n";
  }
  out << "solver.newton_tol = " << format_double(cfg.solver.newton_tol) << "\n";
  out << "solver.newton_max_iters = " << cfg.solver.newton_max_iters << "\n";
  out << "solver.cg_tol = " << format_double(cfg.solver.cg_tol) << "\n";
  out << "solver.cg_max_iters = " << cfg.solver.cg_max_iters << "\n";
  out << "solver.theta = " << format_double(cfg.solver.theta) << "\n";
  out << "output.dir = " << cfg.out_dir << "\n";
  out << "output.store_every = " << cfg.store_every << "\n";
  return out.str();
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", "config-io");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

Grid make_grid(const RunConfig& cfg) { return build_grid(cfg.dim, cfg.cells, cfg.lengths); }

PotentialSet make_potentials(const RunConfig& cfg) {
  LogisticParams p{cfg.alpha1, cfg.alpha2, cfg.alpha3};
  return make_logistic_potentials(p, GChoice::identity);
}

std::pair<Field, Field> make_initial_fields(const RunConfig& cfg, const Grid& grid) {
  Field mu0(grid);
  Field rho0(grid);
  if (cfg.preset == "files") {
    mu0 = read_snapshot(cfg.mu_file);
    rho0 = read_snapshot(cfg.rho_file);
    if (!(mu0.grid() == grid) || !(rho0.grid() == grid))
      throw ConfigError("snapshot grids do not match the configured grid", "init-data");
  } else {
    const int nx = grid.cells[0];
    const int ny = grid.cells[1];
    for (int j = 0; j < ny; ++j) {
      const double cy =
          grid.dim == 2 ? std::cos(kPi * grid.center(1, j) / grid.lengths[1]) : 1.0;
      for (int i = 0; i < nx; ++i) {
        const double cx = std::cos(kPi * grid.center(0, i) / grid.lengths[0]);
        const double base = cx * cy;
        double rho = 0.5 + cfg.rho_amp * base;
        if (cfg.preset == "rough")
          rho += cfg.rough_amp * std::cos(cfg.rough_k * kPi * grid.center(0, i) / grid.lengths[0]);
        rho0[grid.index(i, j)] = rho;
        mu0[grid.index(i, j)] = cfg.mu_mean + cfg.mu_amp * base;
      }
    }
  }
  if (min_value(mu0) < 0.0)
    throw ConfigError("initial mu must be nonnegative", "init-data");
  if (min_distance_to_unit_bounds(rho0) < kInteriorMargin)
    throw ConfigError("initial rho must stay in (0,1) with margin 1e-6", "init-data");
  return {std::move(mu0), std::move(rho0)};
}

std::vector<double> ladder_taus(const RunConfig& cfg) {
  std::vector<long long> divisors = cfg.ladder;
  std::sort(divisors.begin(), divisors.end());
  std::vector<double> taus;
  taus.reserve(divisors.size());
  for (long long d : divisors) taus.push_back(cfg.T / static_cast<double>(d));
  return taus;
}

}  // namespace vch
