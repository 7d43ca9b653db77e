// Command-line front end for the viscous Cahn-Hilliard time stepper:
//   vch run <config>       one trajectory, per-step CSV + snapshots
//   vch converge <config>  tau-refinement ladder with observed orders
//   vch check [config]     self-check of the scheme's exact identities
// Exit codes: 0 ok, 1 numerical failure, 2 config error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <vector>

#include "vch/config.hpp"
#include "vch/dense_reference.hpp"
#include "vch/diagnostics.hpp"
#include "vch/grid.hpp"
#include "vch/harness.hpp"
#include "vch/snapshot.hpp"
#include "vch/stepper.hpp"

namespace {

using namespace vch;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw VchError("io-error", "cannot open '" + path.string() + "' for writing");
  return out;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  out << "step,t,mu_min,mu_max,rho_min,rho_max,newton_iters,cg_iters,mass_residual,xi_l2\n";
  for (size_t k = 0; k < traj.reports.size(); ++k) {
    const StepReport& r = traj.reports[k];
    const int step = static_cast<int>(k) + 1;
    out << step << ',' << format_double(step * traj.tau) << ',' << format_double(r.mu_min) << ','
        << format_double(r.mu_max) << ',' << format_double(r.rho_min) << ','
        << format_double(r.rho_max) << ',' << r.newton.iterations << ',' << r.linear.iterations
        << ',' << format_double(r.mass_identity_residual) << ',' << format_double(r.xi_l2)
        << '\n';
  }
}

void write_diagnostics_csv(const std::filesystem::path& path, const Trajectory& traj,
                           const PotentialSet& ps) {
  std::ofstream out = open_out(path);
  out << "m,energy_identity_residual,free_energy,mu_mass_residual_cum\n";
  const std::vector<double> energy = energy_identity_series(traj, ps);
  double mass_cum = 0.0;
  for (int m = 1; m <= traj.total_steps; ++m) {
    mass_cum += traj.reports[static_cast<size_t>(m - 1)].mass_identity_residual;
    const SchemeState& s = traj.states[static_cast<size_t>(m)];
    out << m << ',' << format_double(energy[static_cast<size_t>(m - 1)]) << ','
        << format_double(free_energy(s.mu, s.rho, ps)) << ',' << format_double(mass_cum) << '\n';
  }
}

void write_errors_csv(const std::filesystem::path& path, const ConvergenceTable& table) {
  std::ofstream out = open_out(path);
  out << "tau,err_rho_h1H,err_rho_linfV,err_mu_linfH,err_mu_l2V,err_total\n";
  for (size_t k = 0; k < table.taus.size(); ++k) {
    const TrajectoryErrors& e = table.errors[k];
    out << format_double(table.taus[k]) << ',' << format_double(e.rho.h1_0T_H) << ','
        << format_double(e.rho.linf_0T_V) << ',' << format_double(e.mu.linf_0T_H) << ','
        << format_double(e.mu.l2_0T_V) << ',' << format_double(e.total) << '\n';
  }
}

std::string rate_string(double p) {
  if (std::isnan(p)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", p);
  return buf;
}

int cmd_run(const RunConfig& cfg, const std::string& out_dir, bool quiet) {
  const Grid grid = make_grid(cfg);
  const PotentialSet ps = make_potentials(cfg);
  const auto [mu0, rho0] = make_initial_fields(cfg, grid);

  const std::filesystem::path dir(out_dir);
  Trajectory traj;
  try {
    traj = run(grid, ps, mu0, rho0, cfg.tau, cfg.T, cfg.store_every, cfg.solver);
  } catch (const RunFailure& f) {
    // keep what was integrated before the failing step
    std::filesystem::create_directories(dir);
    write_trajectory_csv(dir / "trajectory.csv", f.partial);
    std::cerr << "partial trajectory written to " << dir.string() << " ("
              << f.partial.reports.size() << " completed steps)\n";
    throw;
  }
  std::filesystem::create_directories(dir);
  write_trajectory_csv(dir / "trajectory.csv", traj);
  for (const SchemeState& s : traj.states) {
    char tag[32];
    std::snprintf(tag, sizeof(tag), "%06d", s.n);
    write_snapshot((dir / ("mu_" + std::string(tag) + ".txt")).string(), s.mu);
    write_snapshot((dir / ("rho_" + std::string(tag) + ".txt")).string(), s.rho);
  }
  if (traj.stores_every_step() && traj.total_steps > 0)
    write_diagnostics_csv(dir / "diagnostics.csv", traj, ps);

  if (!quiet) {
    std::cout << "run: " << traj.total_steps << " steps of tau = " << format_double(traj.tau)
              << " on " << grid.total_cells() << " cells\n";
    if (traj.total_steps > 0) {
      double rho_margin = 1.0, mu_min = 0.0, mass_max = 0.0;
      for (const StepReport& r : traj.reports) {
        rho_margin = std::min(rho_margin, std::min(r.rho_min, 1.0 - r.rho_max));
        mu_min = std::min(mu_min, r.mu_min);
        mass_max = std::max(mass_max, r.mass_identity_residual);
      }
      std::cout << "  rho interior margin " << format_double(rho_margin) << ", min mu "
                << format_double(mu_min) << ", max mass residual " << format_double(mass_max)
                << "\n";
      if (traj.stores_every_step())
        std::cout << "  energy identity residual at T: "
                  << format_double(energy_identity_residual(traj, ps, traj.total_steps)) << "\n";
    }
    std::cout << "  wrote " << (dir / "trajectory.csv").string() << "\n";
  }
  return 0;
}

int cmd_converge(const RunConfig& cfg, const std::string& out_dir, bool quiet) {
  const Grid grid = make_grid(cfg);
  const PotentialSet ps = make_potentials(cfg);
  const auto [mu0, rho0] = make_initial_fields(cfg, grid);
  const std::vector<double> taus = ladder_taus(cfg);
  const double tau_ref = cfg.T / static_cast<double>(cfg.tau_ref_divisor);

  const std::filesystem::path dir(out_dir);
  ConvergenceTable table;
  try {
    table = convergence_study(grid, ps, mu0, rho0, cfg.T, taus, tau_ref, cfg.solver);
  } catch (const StudyFailure& f) {
    std::filesystem::create_directories(dir);
    write_errors_csv(dir / "errors.csv", f.partial);
    std::cerr << "partial error table written to " << dir.string() << " (" << f.partial.taus.size()
              << " completed rows)\n";
    throw;
  }
  std::filesystem::create_directories(dir);
  write_errors_csv(dir / "errors.csv", table);

  if (!quiet) {
    std::cout << "temporal convergence vs reference tau = " << format_double(tau_ref) << "\n";
    std::printf("%14s %14s %8s\n", "tau", "err_total", "rate");
    for (size_t k = 0; k < table.taus.size(); ++k)
      std::printf("%14.6e %14.6e %8s\n", table.taus[k], table.totals[k],
                  k == 0 ? "-" : rate_string(table.rates[k - 1]).c_str());
    std::cout << "wrote " << (dir / "errors.csv").string() << "\n";
  }
  return 0;
}

struct CheckContext {
  bool quiet = false;
  int failures = 0;

  void item(const std::string& name, bool ok, const std::string& detail = "") {
    if (!ok) {
      ++failures;
      std::cerr << "error: check-failed: " << name << (detail.empty() ? "" : " (" + detail + ")")
                << "\n";
    } else if (!quiet) {
      std::cout << "[ok] " << name << (detail.empty() ? "" : " (" + detail + ")") << "\n";
    }
  }
};

int cmd_check(const RunConfig& cfg, bool quiet) {
  CheckContext ctx;
  ctx.quiet = quiet;
  std::mt19937 rng(20240901);

  // interpolation identities on random node vectors
  {
    const Grid g = build_grid(1, {2}, {1.0});
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::uniform_int_distribution<int> length(2, 64);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Field> nodes(static_cast<size_t>(length(rng)) + 1, Field(g));
      for (Field& f : nodes) {
        const double v = dist(rng);
        for (int i = 0; i < f.size(); ++i) f[i] = v;
      }
      const Interpolants z = make_interpolants(std::move(nodes), 0.01);
      worst = std::max(worst, interp_identity_linf_residual(z));
      worst = std::max(worst, interp_identity_l2_residual(z));
    }
    ctx.item("interpolation identities", worst <= 1e-13,
             "max residual " + format_double(worst));
  }

  // discrete operator sanity on random fields
  {
    const Grid g = build_grid(1, {32}, {1.0});
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    bool ok = true;
    for (int trial = 0; trial < 10; ++trial) {
      Field u(g), v(g);
      for (int i = 0; i < u.size(); ++i) {
        u[i] = dist(rng);
        v[i] = dist(rng);
      }
      const Field lu = neumann_laplacian_apply(g, u);
      ok = ok && std::abs(inner_l2(lu, v) - inner_l2(u, neumann_laplacian_apply(g, v))) <=
                     1e-12 * norm_l2(u) * norm_l2(v);
      ok = ok && inner_l2(lu, u) <= 1e-12 * inner_l2(u, u);
      double colsum = 0.0;
      for (int i = 0; i < lu.size(); ++i) colsum += lu[i];
      ok = ok && std::abs(colsum * g.cell_volume) <= 1e-13 * norm_l2(u);
    }
    ctx.item("laplacian symmetry/conservation", ok);
  }

  // stepper vs the dense brute-force reference on 4 cells
  {
    const Grid g = build_grid(1, {4}, {1.0});
    const PotentialSet ps = make_potentials(cfg);
    dense::Potentials dp;
    dp.f_d1 = [&](double r) { return ps.f_d1(r); };
    dp.f_d2 = [&](double r) { return ps.f_d2(r); };
    dp.g_value = [&](double r) { return ps.g.value(r); };
    dp.g_d1 = [&](double r) { return ps.g.d1(r); };

    SchemeState state = make_initial_state(ps, Field(g, 1.0), Field(g, {0.3, 0.4, 0.6, 0.7}));
    std::vector<double> mu_ref = state.mu.values();
    std::vector<double> rho_ref = state.rho.values();
    const double tau = 0.01;
    double worst = 0.0;
    for (int step = 0; step < 3; ++step) {
      const auto [next, report] = advance(state, tau, ps, cfg.solver);
      auto [mu_o, rho_o] = dense::advance(mu_ref, rho_ref, tau, g.spacing[0], dp, 1e-12);
      for (int i = 0; i < 4; ++i) {
        worst = std::max(worst, std::abs(next.rho[i] - rho_o[i]));
        worst = std::max(worst, std::abs(next.mu[i] - mu_o[i]));
      }
      state = next;
      mu_ref = std::move(mu_o);
      rho_ref = std::move(rho_o);
    }
    ctx.item("dense reference agreement (4 cells, 3 steps)", worst <= 1e-8,
             "max deviation " + format_double(worst));
  }

  // full configured run: positivity, interiority, mass and energy identities
  {
    const Grid grid = make_grid(cfg);
    const PotentialSet ps = make_potentials(cfg);
    const auto [mu0, rho0] = make_initial_fields(cfg, grid);
    const Trajectory traj = run(grid, ps, mu0, rho0, cfg.tau, cfg.T, 1, cfg.solver);

    double mass_max = 0.0, rho_margin = 1.0;
    bool mu_ok = true;
    for (const StepReport& r : traj.reports) {
      mass_max = std::max(mass_max, r.mass_identity_residual);
      rho_margin = std::min(rho_margin, std::min(r.rho_min, 1.0 - r.rho_max));
      const double mu_linf = std::max(std::abs(r.mu_min), std::abs(r.mu_max));
      mu_ok = mu_ok && r.mu_min >= -1e-12 * mu_linf;
    }
    ctx.item("per-step mass identity", mass_max <= 1e-10, "max " + format_double(mass_max));
    ctx.item("mu nonnegativity", mu_ok);
    ctx.item("rho interiority", rho_margin > 0.0, "margin " + format_double(rho_margin));
    if (traj.total_steps > 0) {
      const double energy = energy_identity_residual(traj, ps, traj.total_steps);
      ctx.item("energy identity at T", energy <= 1e-8, "residual " + format_double(energy));
    }
  }

  if (ctx.failures > 0) {
    std::cerr << "error: check-failed: " << ctx.failures << " check(s) failed\n";
    return 1;
  }
  if (!quiet) std::cout << "all checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"viscous Cahn-Hilliard semi-implicit time stepper"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  bool quiet = false;

  CLI::App* run_cmd = app.add_subcommand("run", "integrate one trajectory");
  run_cmd->add_option("config", config_path, "config file")->required();
  run_cmd->add_option("--out", out_override, "output directory (overrides output.dir)");
  run_cmd->add_flag("--quiet", quiet, "suppress informational output");

  CLI::App* conv_cmd = app.add_subcommand("converge", "tau-refinement convergence study");
  conv_cmd->add_option("config", config_path, "config file")->required();
  conv_cmd->add_option("--out", out_override, "output directory (overrides output.dir)");
  conv_cmd->add_flag("--quiet", quiet, "suppress informational output");

  CLI::App* check_cmd = app.add_subcommand("check", "run the invariant self-checks");
  check_cmd->add_option("config", config_path, "optional config file");
  check_cmd->add_flag("--quiet", quiet, "suppress informational output");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = config_path.empty() ? parse_config("") : load_config_file(config_path);
    const std::string out_dir = out_override.empty() ? cfg.out_dir : out_override;
    if (run_cmd->parsed()) return cmd_run(cfg, out_dir, quiet);
    if (conv_cmd->parsed()) return cmd_converge(cfg, out_dir, quiet);
    if (check_cmd->parsed()) return cmd_check(cfg, quiet);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.tag() << ": " << e.what() << "\n";
    return 2;
  } catch (const VchError& e) {
    std::cerr << "error: " << e.tag() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: unexpected: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
