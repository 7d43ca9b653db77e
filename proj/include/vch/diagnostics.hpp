#pragma once

#include <vector>

#include "vch/grid.hpp"
#include "vch/potentials.hpp"
#include "vch/stepper.hpp"

namespace vch {

enum class InterpKind { backward, forward, linear };

// Time reconstructions of a discrete vector z_0..z_N on the lattice
// t_n = n*tau: backward piecewise-constant (value z_n on ((n-1)tau, n*tau]),
// forward piecewise-constant (value z_{n-1} there), and piecewise-linear.
class Interpolants {
 public:
  Interpolants(std::vector<Field> nodes, double tau);

  double tau() const { return tau_; }
  int segments() const { return static_cast<int>(nodes_.size()) - 1; }  // N
  double horizon() const { return segments() * tau_; }
  const Field& node(int n) const { return nodes_.at(static_cast<size_t>(n)); }

  Field eval(InterpKind kind, double t) const;
  Field eval_backward(double t) const { return eval(InterpKind::backward, t); }
  Field eval_forward(double t) const { return eval(InterpKind::forward, t); }
  Field eval_linear(double t) const { return eval(InterpKind::linear, t); }

 private:
  double tau_;
  std::vector<Field> nodes_;
};

Interpolants make_interpolants(std::vector<Field> fields, double tau);

// Max relative discrepancy among three independent computations of the
// sup-norm identity  |zbar - zhat|_{Linf(0,T;H)} = max_n |z_{n+1} - z_n|_H
//                  = tau * |d/dt zhat|_{Linf(0,T;H)}.
double interp_identity_linf_residual(const Interpolants& z);

// Same for the squared-L2 identity
//   |zbar - zhat|^2_{L2(0,T;H)} = (tau/3) sum_n |z_{n+1} - z_n|^2_H
//                               = (tau^2/3) |d/dt zhat|^2_{L2(0,T;H)},
// the first expression evaluated by interval-exact Gauss quadrature on the
// evaluators, the others from nodes and from the linear evaluator.
double interp_identity_l2_residual(const Interpolants& z);

// Relative defect of the summed per-step mu-equation identity
//   int (1/2+g_m) mu_m^2 + sum_{n<m} int (1/2+g_n)(mu_{n+1}-mu_n)^2
//     + tau sum_{n<m} |grad mu_{n+1}|^2  =  int (1/2+g_0) mu_0^2,
// with the gradient term taken as the operator-consistent H1 seminorm, so the
// identity is exact up to linear-solver residuals. Needs every step stored.
double energy_identity_residual(const Trajectory& traj, const PotentialSet& ps, int m);

// The whole series m = 1..N in one sweep (running sums, O(N * cells)).
std::vector<double> energy_identity_series(const Trajectory& traj, const PotentialSet& ps);

// Free energy  Psi = int [ -(1/2+g(rho)) mu + f(rho) ] + 1/2 |grad rho|^2.
// Reported per step; no monotonicity is asserted.
double free_energy(const Field& mu, const Field& rho, const PotentialSet& ps);

// Time-lattice error norms of a nodal difference d_0..d_N (piecewise-linear
// in time): time integrals evaluated analytically per interval, suprema as
// maxima over nodes.
struct ErrorNorms {
  double h1_0T_H = 0.0;   // |d/dt dhat|_{L2(0,T;L2)}
  double linf_0T_V = 0.0; // max_n |d_n|_V
  double linf_0T_H = 0.0; // max_n |d_n|_L2
  double l2_0T_V = 0.0;   // sqrt(tau * sum_{n>=1} |d_n|_V^2)
};

struct TrajectoryErrors {
  ErrorNorms rho;
  ErrorNorms mu;
  double rho_part = 0.0;  // rho.h1_0T_H + rho.linf_0T_V
  double mu_part = 0.0;   // mu.linf_0T_H + mu.l2_0T_V
  double total = 0.0;     // rho_part + mu_part
};

// Differences between the piecewise-linear interpolants of traj and ref,
// restricted to the coarse time nodes; ref.tau must divide traj.tau and both
// must store every step on the same grid.
TrajectoryErrors error_norms(const Trajectory& traj, const Trajectory& ref);

}  // namespace vch
