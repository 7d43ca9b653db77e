// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Covers the exact discrete identities, the positivity and
// interiority guarantees, oracle equivalence against the dense reference,
// minimizer properties of both sub-steps, interpolation identities, spatial
// operator order, derivative consistency, and the first-order temporal
// convergence rate.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "vch/config.hpp"
#include "vch/dense_reference.hpp"
#include "vch/diagnostics.hpp"
#include "vch/grid.hpp"
#include "vch/harness.hpp"
#include "vch/snapshot.hpp"
#include "vch/stepper.hpp"

using namespace vch;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void criterion(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct DefaultScenario {
  RunConfig cfg = parse_config("");
  Grid grid;
  PotentialSet ps;
  Field mu0, rho0;

  DefaultScenario() : grid(make_grid(cfg)), ps(make_potentials(cfg)), mu0(grid), rho0(grid) {
    auto fields = make_initial_fields(cfg, grid);
    mu0 = std::move(fields.first);
    rho0 = std::move(fields.second);
  }
};

void run_criterion_1_2_3(const DefaultScenario& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const Trajectory traj = run(s.grid, s.ps, s.mu0, s.rho0, s.cfg.tau, s.cfg.T, 1, s.cfg.solver);
  const double energy = energy_identity_residual(traj, s.ps, traj.total_steps);
  const double elapsed = seconds_since(t0);
  {
    char detail[160];
    std::snprintf(detail, sizeof(detail), "relative residual %.3e <= 1e-8 at m = %d, %.2f s",
                  energy, traj.total_steps, elapsed);
    criterion(1, "summed mu-equation energy identity", energy <= 1e-8 && elapsed <= 10.0,
              detail);
  }
  {
    double mass_max = 0.0;
    for (const StepReport& r : traj.reports)
      mass_max = std::max(mass_max, r.mass_identity_residual);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "max relative residual %.3e <= 1e-10", mass_max);
    criterion(2, "per-step mass identity", mass_max <= 1e-10, detail);
  }
  {
    bool mu_ok = true;
    double mu_min = 0.0;
    auto margin_of = [&](const Trajectory& t) {
      double margin = 1.0;
      for (const StepReport& r : t.reports)
        margin = std::min(margin, std::min(r.rho_min, 1.0 - r.rho_max));
      return margin;
    };
    for (const StepReport& r : traj.reports) {
      const double mu_linf = std::max(std::abs(r.mu_min), std::abs(r.mu_max));
      mu_ok = mu_ok && r.mu_min >= -1e-12 * mu_linf;
      mu_min = std::min(mu_min, r.mu_min);
    }
    const double eps0 = margin_of(traj);
    const Trajectory half =
        run(s.grid, s.ps, s.mu0, s.rho0, s.cfg.tau / 2.0, s.cfg.T, 1, s.cfg.solver);
    const Trajectory quarter =
        run(s.grid, s.ps, s.mu0, s.rho0, s.cfg.tau / 4.0, s.cfg.T, 1, s.cfg.solver);
    const double eps1 = margin_of(half);
    const double eps2 = margin_of(quarter);
    const bool margins_ok =
        eps0 > 0.0 && eps1 >= 0.95 * eps0 && eps2 >= 0.95 * eps1;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "min mu %.3e >= -1e-12*|mu|_inf; rho margin %.6f -> %.6f -> %.6f under "
                  "tau-halving",
                  mu_min, eps0, eps1, eps2);
    criterion(3, "positivity and interiority", mu_ok && margins_ok, detail);
  }
}

void run_criterion_4(const DefaultScenario& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> taus = ladder_taus(s.cfg);  // T/{16,32,64,128,256}
  const double tau_ref = s.cfg.T / 2048.0;
  const ConvergenceTable table =
      convergence_study(s.grid, s.ps, s.mu0, s.rho0, s.cfg.T, taus, tau_ref, s.cfg.solver);
  const double elapsed = seconds_since(t0);
  const size_t n = table.rates.size();
  const double p1 = table.rates[n - 2];
  const double p2 = table.rates[n - 1];
  const bool in_window =
      p1 >= 0.8 && p1 <= 1.2 && p2 >= 0.8 && p2 <= 1.2 && elapsed <= 300.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "observed orders %.3f, %.3f in [0.8, 1.2] on the last two pairs, %.2f s", p1, p2,
                elapsed);
  criterion(4, "first-order temporal convergence", in_window, detail);

  // low-regularity regime, recorded but not gated
  RunConfig rough_cfg = parse_config("init.preset = rough\n");
  const auto [mu_r, rho_r] = make_initial_fields(rough_cfg, s.grid);
  const ConvergenceTable rough =
      convergence_study(s.grid, s.ps, mu_r, rho_r, s.cfg.T, taus, tau_ref, s.cfg.solver);
  std::printf("[info] rough-data observed orders:");
  for (double p : rough.rates) std::printf(" %.3f", p);
  std::printf(" (low-regularity regime, informational)\n");
}

void run_criterion_5(const DefaultScenario& s) {
  const Grid g = build_grid(1, {4}, {1.0});
  dense::Potentials dp;
  dp.f_d1 = [&](double r) { return s.ps.f_d1(r); };
  dp.f_d2 = [&](double r) { return s.ps.f_d2(r); };
  dp.g_value = [&](double r) { return s.ps.g.value(r); };
  dp.g_d1 = [&](double r) { return s.ps.g.d1(r); };

  SchemeState state = make_initial_state(s.ps, Field(g, 1.0), Field(g, {0.3, 0.4, 0.6, 0.7}));
  std::vector<double> mu_ref = state.mu.values();
  std::vector<double> rho_ref = state.rho.values();
  double worst = 0.0;
  for (int step = 0; step < 3; ++step) {
    const auto [next, report] = advance(state, 0.01, s.ps, s.cfg.solver);
    auto [mu_o, rho_o] = dense::advance(mu_ref, rho_ref, 0.01, g.spacing[0], dp, 1e-12);
    for (int i = 0; i < 4; ++i) {
      worst = std::max(worst, std::abs(next.rho[i] - rho_o[i]));
      worst = std::max(worst, std::abs(next.mu[i] - mu_o[i]));
    }
    state = next;
    mu_ref = std::move(mu_o);
    rho_ref = std::move(rho_o);
  }
  char detail[128];
  std::snprintf(detail, sizeof(detail), "max per-cell deviation %.3e <= 1e-8 over 3 steps",
                worst);
  criterion(5, "dense brute-force oracle equivalence", worst <= 1e-8, detail);
}

void run_criterion_6(const DefaultScenario& s) {
  // one step from the mid-run state of the default scenario
  const Trajectory traj =
      run(s.grid, s.ps, s.mu0, s.rho0, s.cfg.tau, s.cfg.T / 2.0, 1, s.cfg.solver);
  const SchemeState& state = traj.states.back();
  const double tau = s.cfg.tau;
  const auto [rho_next, nrep] = rho_step(state, tau, s.ps, s.cfg.solver);
  const auto [mu_next, lrep] = mu_step(state, rho_next, tau, s.ps, s.cfg.solver);
  const Field gamma_next = map_values(rho_next, [&](double r) { return s.ps.g.value(r); });

  Field b(s.grid);
  for (int i = 0; i < b.size(); ++i)
    b[i] = state.rho[i] + tau * state.mu[i] * s.ps.g.d1(state.rho[i]);
  auto j2 = [&](const Field& v) {
    const double h1 = seminorm_h1(v);
    double f_int = 0.0;
    for (int i = 0; i < v.size(); ++i) f_int += s.ps.f_value(v[i]);
    f_int *= v.grid().cell_volume;
    return 0.5 * tau * h1 * h1 + 0.5 * inner_l2(v, v) + tau * f_int - inner_l2(b, v);
  };
  auto j1 = [&](const Field& v) {
    const double h1 = seminorm_h1(v);
    double quad = 0.0, lin = 0.0;
    for (int i = 0; i < v.size(); ++i) {
      quad += (1.0 + state.gamma[i] + gamma_next[i]) * v[i] * v[i];
      lin += (1.0 + 2.0 * state.gamma[i]) * state.mu[i] * v[i];
    }
    quad *= v.grid().cell_volume;
    lin *= v.grid().cell_volume;
    return 0.5 * tau * h1 * h1 + 0.5 * quad - lin;
  };

  std::mt19937 rng(77);
  std::uniform_real_distribution<double> bump(-1e-3, 1e-3);
  const double j2_min = j2(rho_next);
  const double j1_min = j1(mu_next);
  double worst2 = 0.0, worst1 = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Field rho_p = rho_next;
    Field mu_p = mu_next;
    for (int i = 0; i < rho_p.size(); ++i) {
      double d = bump(rng);
      if (rho_p[i] + d <= 0.0 || rho_p[i] + d >= 1.0) d = -d;
      rho_p[i] += d;
      mu_p[i] += bump(rng);
    }
    worst2 = std::max(worst2, j2_min - j2(rho_p));
    worst1 = std::max(worst1, j1_min - j1(mu_p));
  }
  const bool ok2 = worst2 <= 1e-12 * (1.0 + std::abs(j2_min));
  const bool ok1 = worst1 <= 1e-12 * (1.0 + std::abs(j1_min));
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "worst violations: J2 %.3e, J1 %.3e (tolerance 1e-12*(1+|J|))", worst2, worst1);
  criterion(6, "variational minimizer properties", ok1 && ok2, detail);
}

void run_criterion_7() {
  const Grid g = build_grid(1, {2}, {1.0});
  std::mt19937 rng(88);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::uniform_int_distribution<int> length(2, 64);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Field> nodes(static_cast<size_t>(length(rng)) + 1, Field(g));
    for (Field& f : nodes) {
      const double v = dist(rng);
      for (int i = 0; i < f.size(); ++i) f[i] = v;
    }
    const Interpolants z = make_interpolants(std::move(nodes), 0.02);
    worst = std::max(worst, interp_identity_linf_residual(z));
    worst = std::max(worst, interp_identity_l2_residual(z));
  }
  char detail[128];
  std::snprintf(detail, sizeof(detail), "max relative residual %.3e <= 1e-13 on 50 vectors",
                worst);
  criterion(7, "interpolation identities", worst <= 1e-13, detail);
}

void run_criterion_8() {
  std::vector<double> errs;
  for (int n : {32, 64, 128, 256}) {
    const Grid g = build_grid(1, {n}, {1.0});
    Field u(g);
    for (int i = 0; i < n; ++i) u[i] = std::cos(kPi * g.center(0, i));
    const Field lap = neumann_laplacian_apply(g, u);
    double err = 0.0;
    for (int i = 0; i < n; ++i)
      err = std::max(err, std::abs(lap[i] + kPi * kPi * std::cos(kPi * g.center(0, i))));
    errs.push_back(err);
  }
  bool ok = true;
  std::string orders;
  for (size_t k = 0; k + 1 < errs.size(); ++k) {
    const double p = std::log2(errs[k] / errs[k + 1]);
    ok = ok && p >= 1.8 && p <= 2.2;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%s%.3f", k ? ", " : "", p);
    orders += buf;
  }
  criterion(8, "spatial operator order on cos(pi x)",
            ok, "observed orders " + orders + " in [1.8, 2.2] across N = 32..256");
}

void run_criterion_9(const DefaultScenario& s) {
  // potentials: central differences against analytic derivatives
  double worst_pot = 0.0;
  auto fd_check = [&](const ScalarFn& value, const ScalarFn& d1) {
    const double h = 1e-6;
    for (int k = 0; k < 100; ++k) {
      const double r = 0.01 + 0.98 * (k + 0.5) / 100.0;
      const double fd = (value(r + h) - value(r - h)) / (2.0 * h);
      worst_pot =
          std::max(worst_pot, std::abs(fd - d1(r)) / std::max(std::abs(d1(r)), 1e-8));
    }
  };
  fd_check(s.ps.f1.value, s.ps.f1.d1);
  fd_check(s.ps.f1.d1, s.ps.f1.d2);
  fd_check(s.ps.f2.value, s.ps.f2.d1);
  fd_check(s.ps.f2.d1, s.ps.f2.d2);
  fd_check(s.ps.g.value, s.ps.g.d1);
  fd_check(s.ps.g.d1, s.ps.g.d2);

  // Newton residual Jacobian: directional derivative on a random state
  const Grid g = build_grid(1, {32}, {1.0});
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> mid(0.25, 0.75);
  std::uniform_real_distribution<double> dir(-1.0, 1.0);
  Field rho(g), v(g), b(g);
  for (int i = 0; i < 32; ++i) {
    rho[i] = mid(rng);
    v[i] = dir(rng);
    b[i] = mid(rng);
  }
  const double tau = 0.02;
  auto residual = [&](const Field& r) {
    const Field lap = neumann_laplacian_apply(g, r);
    Field F(g);
    for (int i = 0; i < F.size(); ++i)
      F[i] = r[i] - tau * lap[i] + tau * s.ps.f_d1(r[i]) - b[i];
    return F;
  };
  const double eps = 1e-7;
  Field shifted = rho;
  for (int i = 0; i < 32; ++i) shifted[i] += eps * v[i];
  const Field fd = (1.0 / eps) * (residual(shifted) - residual(rho));
  const Field lap_v = neumann_laplacian_apply(g, v);
  Field jv(g);
  for (int i = 0; i < 32; ++i)
    jv[i] = (1.0 + tau * s.ps.f_d2(rho[i])) * v[i] - tau * lap_v[i];
  const double jac_rel = norm_l2(fd - jv) / norm_l2(jv);

  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "potentials max rel error %.3e <= 1e-6; Jacobian rel error %.3e <= 1e-5",
                worst_pot, jac_rel);
  criterion(9, "derivative consistency", worst_pot <= 1e-6 && jac_rel <= 1e-5, detail);
}

}  // namespace

int main() {
  const DefaultScenario s;
  run_criterion_1_2_3(s);
  run_criterion_4(s);
  run_criterion_5(s);
  run_criterion_6(s);
  run_criterion_7();
  run_criterion_8();
  run_criterion_9(s);

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
