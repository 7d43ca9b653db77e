#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vch/grid.hpp"
#include "vch/potentials.hpp"
#include "vch/stepper.hpp"

namespace vch {

// Line-oriented `key = value` configuration with `#` comments and dotted
// section keys. Unknown keys are rejected; parse errors carry line numbers.
struct RunConfig {
  // grid.*
  int dim = 1;
  std::vector<int> cells{128};
  std::vector<double> lengths{1.0};

  // potential.*
  double alpha1 = 1.0;
  double alpha2 = 0.5;
  double alpha3 = 0.0;
  std::string g = "identity";

  // time.*  (tau defaults to T/256; ladder entries are divisors of T)
  double T = 0.25;
  double tau = 0.25 / 256.0;
  std::vector<long long> ladder{16, 32, 64, 128, 256};
  long long tau_ref_divisor = 2048;

  // init.*
  std::string preset = "cosine";  // cosine | rough | files
  double rho_amp = 0.25;
  double mu_mean = 1.0;
  double mu_amp = 0.5;
  double rough_amp = 0.05;
  long long rough_k = 7;
  std::string mu_file;
  std::string rho_file;

  // solver.*
  SolverOptions solver;

  // output.*
  std::string out_dir = "out";
  int store_every = 1;
};

RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);

RunConfig load_config_file(const std::string& path);

Grid make_grid(const RunConfig& cfg);
PotentialSet make_potentials(const RunConfig& cfg);
// Initial fields for the configured preset (or snapshot files), validated
// against mu0 >= 0 and interiority of rho0 with margin 1e-6.
std::pair<Field, Field> make_initial_fields(const RunConfig& cfg, const Grid& grid);

// Ladder of time steps T/d for the configured divisors, descending in tau.
std::vector<double> ladder_taus(const RunConfig& cfg);

}  // namespace vch
