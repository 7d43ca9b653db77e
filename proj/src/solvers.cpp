#include "vch/solvers.hpp"

#include <cmath>
#include <limits>

#include "vch/snapshot.hpp"

namespace vch {

std::pair<Field, LinearSolveReport> cg_solve(const LinearOperator& apply, const Field& rhs,
                                             double rel_tol, int max_iters, const Field* x0) {
  const Grid& grid = rhs.grid();
  require_finite(rhs, "cg rhs");
  const double rhs_norm = norm_l2(rhs);
  LinearSolveReport report;

  if (rhs_norm == 0.0) return {Field(grid, 0.0), report};

  Field x = (x0 != nullptr) ? *x0 : Field(grid, 0.0);
  if (x0 != nullptr) require_same_grid(x, rhs);
  Field r = rhs - apply(x);
  double rr = inner_l2(r, r);
  const double stop = rel_tol * rhs_norm;
  if (std::sqrt(rr) <= stop) {
    report.final_relative_residual = std::sqrt(rr) / rhs_norm;
    return {x, report};
  }

  Field p = r;
  for (int it = 1; it <= max_iters; ++it) {
    const Field q = apply(p);
    const double pq = inner_l2(p, q);
    if (!(pq > 0.0))
      throw CgFailure("operator is not positive definite (p'Ap = " + format_double(pq) + ")",
                      {it, std::sqrt(rr) / rhs_norm});
    const double alpha = rr / pq;
    x += alpha * p;
    r -= alpha * q;
    double rr_next = inner_l2(r, r);
    if (std::sqrt(rr_next) <= stop) {
      // recursion residual can drift; accept only on the true residual
      const Field rt = rhs - apply(x);
      const double true_norm = norm_l2(rt);
      if (true_norm <= stop) {
        report.iterations = it;
        report.final_relative_residual = true_norm / rhs_norm;
        require_finite(x, "cg solution");
        return {x, report};
      }
      r = rt;
      rr_next = true_norm * true_norm;
      p = r;  // restart descent direction
      rr = rr_next;
      continue;
    }
    const double beta = rr_next / rr;
    rr = rr_next;
    p = r + beta * p;
  }
  throw CgFailure("no convergence in " + std::to_string(max_iters) + " iterations",
                  {max_iters, std::sqrt(rr) / rhs_norm});
}

namespace {

bool strictly_interior(const Field& u) {
  for (int i = 0; i < u.size(); ++i)
    if (!(u[i] > 0.0) || !(u[i] < 1.0)) return false;
  return true;
}

}  // namespace

std::pair<Field, NewtonReport> newton_barrier_solve(const PotentialSet& ps, double tau,
                                                    const Field& b, const Field& init,
                                                    double abs_tol, int max_iters, double theta,
                                                    double cg_rel_tol, int cg_max_iters) {
  const TauAdmissibility gate = check_admissible_tau(tau, ps);
  if (!gate.ok) throw ConfigError(gate.message, "tau-inadmissible");
  require_same_grid(b, init);
  require_finite(b, "newton rhs");
  if (!strictly_interior(init))
    throw VchError("newton-init", "initial guess must lie strictly inside (0,1)");
  if (cg_max_iters <= 0) cg_max_iters = 10 * b.grid().total_cells();

  const Grid& grid = b.grid();
  auto residual = [&](const Field& rho) {
    const Field lap = neumann_laplacian_apply(grid, rho);
    Field F(grid);
    for (int i = 0; i < F.size(); ++i)
      F[i] = rho[i] - tau * lap[i] + tau * ps.f_d1(rho[i]) - b[i];
    return F;
  };

  Field rho = init;
  Field F = residual(rho);
  double res_norm = norm_l2(F);
  NewtonReport report;
  report.min_distance_to_bounds = min_distance_to_unit_bounds(rho);

  while (res_norm > abs_tol) {
    if (report.iterations >= max_iters) {
      report.final_residual_l2 = res_norm;
      throw NewtonFailure("newton-no-convergence",
                          "no convergence in " + std::to_string(max_iters) +
                              " iterations, residual " + format_double(res_norm),
                          report);
    }

    // J = I - tau*L + tau*diag(f''(rho)); SPD under the admissibility gate
    Field diag(grid);
    for (int i = 0; i < diag.size(); ++i) diag[i] = 1.0 + tau * ps.f_d2(rho[i]);
    auto jacobian_apply = [&](const Field& v) {
      const Field lap = neumann_laplacian_apply(grid, v);
      Field out(grid);
      for (int i = 0; i < out.size(); ++i) out[i] = diag[i] * v[i] - tau * lap[i];
      return out;
    };
    const auto [step, cg_report] = cg_solve(jacobian_apply, -F, cg_rel_tol, cg_max_iters);

    // fraction-to-boundary cap: never consume more than theta of the distance
    // to {0,1} in any cell
    double to_boundary = std::numeric_limits<double>::infinity();
    for (int i = 0; i < step.size(); ++i) {
      if (step[i] > 0.0)
        to_boundary = std::min(to_boundary, (1.0 - rho[i]) / step[i]);
      else if (step[i] < 0.0)
        to_boundary = std::min(to_boundary, rho[i] / (-step[i]));
    }
    double alpha = std::min(1.0, theta * to_boundary);
    bool damped = alpha < 1.0;

    // monotone residual safeguard
    Field trial(grid);
    Field trial_res(grid);
    double trial_norm;
    for (;;) {
      if (alpha < 1e-14) {
        report.final_residual_l2 = res_norm;
        throw NewtonFailure("newton-damping-collapse",
                            "step length collapsed below 1e-14 at residual " +
                                format_double(res_norm),
                            report);
      }
      trial = rho;
      for (int i = 0; i < trial.size(); ++i) trial[i] += alpha * step[i];
      if (!strictly_interior(trial)) {
        alpha *= 0.5;
        damped = true;
        continue;
      }
      trial_res = residual(trial);
      trial_norm = norm_l2(trial_res);
      if (trial_norm < res_norm) break;
      alpha *= 0.5;
      damped = true;
    }

    rho = trial;
    F = trial_res;
    res_norm = trial_norm;
    ++report.iterations;
    if (damped) ++report.damped_steps;
    report.min_distance_to_bounds = min_distance_to_unit_bounds(rho);
    if (!(report.min_distance_to_bounds > 0.0))
      throw NewtonFailure("newton-interiority", "iterate left the open interval (0,1)", report);
  }

  report.final_residual_l2 = res_norm;
  require_finite(rho, "newton solution");
  return {rho, report};
}

}  // namespace vch
