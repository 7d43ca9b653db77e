#include "vch/stepper.hpp"

#include <algorithm>
#include <cmath>

#include "vch/snapshot.hpp"

namespace vch {

const SchemeState& Trajectory::state_at(int n) const {
  auto it = std::lower_bound(states.begin(), states.end(), n,
                             [](const SchemeState& s, int key) { return s.n < key; });
  if (it == states.end() || it->n != n)
    throw VchError("missing-state", "state " + std::to_string(n) + " was not stored");
  return *it;
}

SchemeState make_initial_state(const PotentialSet& ps, Field mu0, Field rho0) {
  require_same_grid(mu0, rho0);
  require_finite(mu0, "mu0");
  require_finite(rho0, "rho0");
  if (min_value(mu0) < 0.0)
    throw ConfigError("initial chemical potential must be nonnegative, min = " +
                          format_double(min_value(mu0)),
                      "init-data");
  if (!(min_distance_to_unit_bounds(rho0) > 0.0))
    throw ConfigError("initial order parameter must lie strictly inside (0,1)", "init-data");
  SchemeState s;
  s.n = 0;
  s.t = 0.0;
  s.gamma = map_values(rho0, [&](double r) { return ps.g.value(r); });
  s.mu = std::move(mu0);
  s.rho = std::move(rho0);
  return s;
}

std::pair<Field, NewtonReport> rho_step(const SchemeState& state, double tau,
                                        const PotentialSet& ps, const SolverOptions& opts) {
  const Grid& grid = state.rho.grid();
  // explicit coupling: b = rho_n + tau * mu_n * g'(rho_n)
  Field b(grid);
  for (int i = 0; i < b.size(); ++i)
    b[i] = state.rho[i] + tau * state.mu[i] * ps.g.d1(state.rho[i]);
  const double abs_tol = opts.newton_tol * std::sqrt(grid.domain_volume());
  return newton_barrier_solve(ps, tau, b, state.rho, abs_tol, opts.newton_max_iters, opts.theta,
                              opts.cg_tol, opts.cg_max_iters);
}

std::pair<Field, LinearSolveReport> mu_step(const SchemeState& state, const Field& rho_next,
                                            double tau, const PotentialSet& ps,
                                            const SolverOptions& opts) {
  const Grid& grid = state.mu.grid();
  require_same_grid(state.mu, rho_next);
  const Field gamma_next = map_values(rho_next, [&](double r) { return ps.g.value(r); });

  Field coeff(grid);
  for (int i = 0; i < coeff.size(); ++i) coeff[i] = 1.0 + state.gamma[i] + gamma_next[i];
  auto apply = [&](const Field& v) {
    const Field lap = neumann_laplacian_apply(grid, v);
    Field out(grid);
    for (int i = 0; i < out.size(); ++i) out[i] = coeff[i] * v[i] - tau * lap[i];
    return out;
  };
  Field rhs(grid);
  for (int i = 0; i < rhs.size(); ++i) rhs[i] = (1.0 + 2.0 * state.gamma[i]) * state.mu[i];

  const int max_iters = opts.cg_max_iters > 0 ? opts.cg_max_iters : 10 * grid.total_cells();
  auto [mu_next, report] = cg_solve(apply, rhs, opts.cg_tol, max_iters, &state.mu);

  // comparison principle: mu stays nonnegative; asserted, never clipped
  const double dip = min_value(mu_next);
  if (dip < -1e-12 * norm_linf(mu_next))
    throw VchError("mu-positivity",
                   "chemical potential dipped to " + format_double(dip) + " after step " +
                       std::to_string(state.n + 1));
  return {std::move(mu_next), report};
}

std::pair<SchemeState, StepReport> advance(const SchemeState& state, double tau,
                                           const PotentialSet& ps, const SolverOptions& opts) {
  StepReport report;
  auto [rho_next, newton_report] = rho_step(state, tau, ps, opts);
  report.newton = newton_report;
  auto [mu_next, linear_report] = mu_step(state, rho_next, tau, ps, opts);
  report.linear = linear_report;

  SchemeState next;
  next.n = state.n + 1;
  next.t = next.n * tau;
  next.gamma = map_values(rho_next, [&](double r) { return ps.g.value(r); });

  // integrated mu equation; the Laplacian drops out (vanishing column sums)
  double lhs = 0.0, rhs = 0.0;
  for (int i = 0; i < mu_next.size(); ++i) {
    lhs += (1.0 + state.gamma[i] + next.gamma[i]) * mu_next[i];
    rhs += (1.0 + 2.0 * state.gamma[i]) * state.mu[i];
  }
  lhs *= state.mu.grid().cell_volume;
  rhs *= state.mu.grid().cell_volume;
  report.mass_identity_residual = (rhs != 0.0) ? std::abs(lhs - rhs) / std::abs(rhs)
                                               : std::abs(lhs - rhs);

  report.mu_min = min_value(mu_next);
  report.mu_max = max_value(mu_next);
  report.rho_min = min_value(rho_next);
  report.rho_max = max_value(rho_next);
  report.xi_l2 = norm_l2(map_values(rho_next, [&](double r) { return ps.f1.d1(r); }));

  next.mu = std::move(mu_next);
  next.rho = std::move(rho_next);
  return {std::move(next), report};
}

Trajectory run(const Grid& grid, const PotentialSet& ps, const Field& mu0, const Field& rho0,
               double tau, double T, int store_every, const SolverOptions& opts) {
  if (!(tau > 0.0)) throw ConfigError("time step must be positive", "time-params");
  if (T < 0.0) throw ConfigError("final time must be nonnegative", "time-params");
  if (store_every < 1) throw ConfigError("store stride must be >= 1", "output-params");
  if (!(mu0.grid() == grid) || !(rho0.grid() == grid))
    throw VchError("grid-mismatch", "initial fields do not live on the given grid");

  const double steps_real = T / tau;
  const int N = static_cast<int>(std::llround(steps_real));
  if (std::abs(steps_real - N) > 1e-9)
    throw ConfigError("T/tau = " + format_double(steps_real) + " is not integral", "time-params");

  Trajectory traj;
  traj.tau = tau;
  traj.T = T;
  traj.total_steps = N;
  traj.store_every = store_every;
  traj.reports.reserve(static_cast<size_t>(N));

  SchemeState state = make_initial_state(ps, mu0, rho0);
  traj.states.push_back(state);
  for (int n = 0; n < N; ++n) {
    try {
      auto [next, report] = advance(state, tau, ps, opts);
      traj.reports.push_back(report);
      state = std::move(next);
    } catch (const VchError& e) {
      if (traj.states.back().n != state.n) traj.states.push_back(state);
      throw RunFailure(e.tag(),
                       "step " + std::to_string(n + 1) + " failed: " + e.what(),
                       std::move(traj));
    }
    if (state.n % store_every == 0 || state.n == N) traj.states.push_back(state);
  }
  return traj;
}

}  // namespace vch
