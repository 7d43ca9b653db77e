#pragma once

#include <utility>
#include <vector>

#include "vch/grid.hpp"
#include "vch/potentials.hpp"
#include "vch/solvers.hpp"

namespace vch {

struct SolverOptions {
  // Newton tolerance density; the absolute tolerance on |F|_L2 is
  // newton_tol * sqrt(domain volume).
  double newton_tol = 1e-10;
  int newton_max_iters = 50;
  double cg_tol = 1e-12;
  int cg_max_iters = 0;  // 0 means 10 * total cells
  double theta = 0.9;    // fraction-to-boundary factor
};

// Solution pair at one time level, with gamma = g(rho) cached.
struct SchemeState {
  int n = 0;
  double t = 0.0;
  Field mu;
  Field rho;
  Field gamma;
};

struct StepReport {
  NewtonReport newton;
  LinearSolveReport linear;
  double mu_min = 0.0, mu_max = 0.0;
  double rho_min = 0.0, rho_max = 0.0;
  // relative defect of the integrated mu equation,
  //   int (1+g_n+g_{n+1}) mu_{n+1} = int (1+2 g_n) mu_n
  double mass_identity_residual = 0.0;
  double xi_l2 = 0.0;  // |f1'(rho_{n+1})|_L2
};

struct Trajectory {
  double tau = 0.0;
  double T = 0.0;
  int total_steps = 0;
  int store_every = 1;
  std::vector<SchemeState> states;   // always includes n = 0 and n = N
  std::vector<StepReport> reports;   // one per step, all steps

  bool stores_every_step() const {
    return static_cast<int>(states.size()) == total_steps + 1;
  }
  // Stored state with index n; throws if that level was not stored.
  const SchemeState& state_at(int n) const;
};

// A step failure mid-run; carries everything integrated so far.
class RunFailure : public VchError {
 public:
  Trajectory partial;
  RunFailure(std::string tag, const std::string& msg, Trajectory traj)
      : VchError(std::move(tag), msg), partial(std::move(traj)) {}
};

// Validates the initial data (mu0 >= 0, rho0 strictly inside (0,1)) and
// caches gamma.
SchemeState make_initial_state(const PotentialSet& ps, Field mu0, Field rho0);

// One semi-implicit step: first the order-parameter problem
//   rho_{n+1} - tau*L rho_{n+1} + tau*f'(rho_{n+1}) = rho_n + tau*mu_n*g'(rho_n),
// solved with the barrier-safeguarded Newton method,
std::pair<Field, NewtonReport> rho_step(const SchemeState& state, double tau,
                                        const PotentialSet& ps, const SolverOptions& opts = {});

// then the chemical-potential problem with gamma_{n+1} = g(rho_{n+1}) known:
//   (1 + g_n + g_{n+1}) mu_{n+1} - tau*L mu_{n+1} = (1 + 2 g_n) mu_n,
// an SPD system solved with CG. The result must stay nonnegative up to
// 1e-12*|mu|_inf (discrete comparison principle); a deeper dip throws.
std::pair<Field, LinearSolveReport> mu_step(const SchemeState& state, const Field& rho_next,
                                            double tau, const PotentialSet& ps,
                                            const SolverOptions& opts = {});

std::pair<SchemeState, StepReport> advance(const SchemeState& state, double tau,
                                           const PotentialSet& ps, const SolverOptions& opts = {});

// N = T/tau steps (T/tau must be integral within 1e-9). States are stored at
// the given stride plus always n = 0 and n = N; reports for every step.
Trajectory run(const Grid& grid, const PotentialSet& ps, const Field& mu0, const Field& rho0,
               double tau, double T, int store_every = 1, const SolverOptions& opts = {});

}  // namespace vch
