#pragma once

#include <functional>
#include <utility>

#include "vch/grid.hpp"
#include "vch/potentials.hpp"

namespace vch {

struct LinearSolveReport {
  int iterations = 0;
  double final_relative_residual = 0.0;
};

struct NewtonReport {
  int iterations = 0;
  double final_residual_l2 = 0.0;
  double min_distance_to_bounds = 0.0;  // min over cells of min(rho_i, 1 - rho_i)
  int damped_steps = 0;                 // iterations where the step length was < 1
};

class CgFailure : public VchError {
 public:
  LinearSolveReport report;
  CgFailure(const std::string& msg, LinearSolveReport r)
      : VchError("cg-no-convergence", msg), report(r) {}
};

class NewtonFailure : public VchError {
 public:
  NewtonReport report;
  NewtonFailure(std::string tag, const std::string& msg, NewtonReport r)
      : VchError(std::move(tag), msg), report(r) {}
};

using LinearOperator = std::function<Field(const Field&)>;

// Conjugate gradients for a symmetric positive definite operator.
// Stops when the true residual satisfies |rhs - A x| <= rel_tol * |rhs| in the
// discrete L2 norm. Deterministic given its inputs.
std::pair<Field, LinearSolveReport> cg_solve(const LinearOperator& apply, const Field& rhs,
                                             double rel_tol, int max_iters,
                                             const Field* x0 = nullptr);

// Damped Newton for the semilinear barrier problem
//   F(rho) = rho - tau*L rho + tau*f'(rho) - b = 0,  rho in (0,1) cellwise.
// Safeguards: fraction-to-boundary step cap (factor theta) keeping all
// iterates strictly interior, plus halving until the L2 residual decreases.
// Requires the step-size gate tau*sup|f2''| <= 1/2, which makes the Newton
// systems SPD; they are solved with cg_solve.
std::pair<Field, NewtonReport> newton_barrier_solve(const PotentialSet& ps, double tau,
                                                    const Field& b, const Field& init,
                                                    double abs_tol, int max_iters,
                                                    double theta = 0.9, double cg_rel_tol = 1e-12,
                                                    int cg_max_iters = 0);

}  // namespace vch
