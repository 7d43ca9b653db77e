#include "vch/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "vch/snapshot.hpp"

namespace vch {

Interpolants::Interpolants(std::vector<Field> nodes, double tau)
    : tau_(tau), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw VchError("interpolant-nodes", "need at least one node");
  if (!(tau_ > 0.0)) throw VchError("interpolant-tau", "tau must be positive");
  for (size_t i = 1; i < nodes_.size(); ++i) require_same_grid(nodes_[0], nodes_[i]);
}

Interpolants make_interpolants(std::vector<Field> fields, double tau) {
  return Interpolants(std::move(fields), tau);
}

Field Interpolants::eval(InterpKind kind, double t) const {
  const int N = segments();
  const double T = horizon();
  if (t < -1e-12 * tau_ || t > T + 1e-12 * std::max(tau_, T))
    throw VchError("interpolant-range", "t = " + format_double(t) + " outside [0, " +
                                            format_double(T) + "]");
  t = std::clamp(t, 0.0, T);

  switch (kind) {
    case InterpKind::backward: {
      if (t <= 0.0) return nodes_[0];
      // value z_n on the half-open interval ((n-1)tau, n*tau]
      const int n = std::clamp(static_cast<int>(std::ceil(t / tau_ - 1e-12)), 1, std::max(N, 1));
      return nodes_[static_cast<size_t>(std::min(n, N))];
    }
    case InterpKind::forward: {
      if (t <= 0.0) return nodes_[0];
      const int n = std::clamp(static_cast<int>(std::ceil(t / tau_ - 1e-12)), 1, std::max(N, 1));
      return nodes_[static_cast<size_t>(std::min(n, N)) - 1];
    }
    case InterpKind::linear: {
      if (N == 0) return nodes_[0];
      const double s = t / tau_;
      const int n0 = std::clamp(static_cast<int>(std::floor(s)), 0, N - 1);
      const double w = s - n0;
      Field out = nodes_[static_cast<size_t>(n0)];
      const Field& right = nodes_[static_cast<size_t>(n0) + 1];
      for (int i = 0; i < out.size(); ++i) out[i] = (1.0 - w) * out[i] + w * right[i];
      return out;
    }
  }
  throw VchError("interpolant-kind", "unknown interpolant kind");
}

namespace {

double rel_spread(std::initializer_list<double> values) {
  double lo = *values.begin(), hi = *values.begin(), mag = 0.0;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mag = std::max(mag, std::abs(v));
  }
  if (mag == 0.0) return 0.0;
  return (hi - lo) / mag;
}

}  // namespace

double interp_identity_linf_residual(const Interpolants& z) {
  const int N = z.segments();
  if (N < 1) throw VchError("interpolant-nodes", "identity needs at least two nodes");
  const double tau = z.tau();

  // route 1: node differences
  double a = 0.0;
  for (int n = 0; n < N; ++n) a = std::max(a, norm_l2(z.node(n + 1) - z.node(n)));

  // route 2: tau * Linf norm of d/dt zhat, from the linear evaluator at nodes
  double b = 0.0;
  for (int n = 1; n <= N; ++n) {
    const Field d = z.eval_linear(n * tau) - z.eval_linear((n - 1) * tau);
    b = std::max(b, norm_l2(d));
  }

  // route 3: sup of |zbar - zhat| per interval; the gap decays linearly in
  // the interval, so two interior samples extrapolate exactly to the sup
  double c = 0.0;
  for (int n = 1; n <= N; ++n) {
    const double t0 = (n - 1) * tau;
    const double q13 = norm_l2(z.eval_backward(t0 + tau / 3.0) - z.eval_linear(t0 + tau / 3.0));
    const double q23 =
        norm_l2(z.eval_backward(t0 + 2.0 * tau / 3.0) - z.eval_linear(t0 + 2.0 * tau / 3.0));
    c = std::max(c, 2.0 * q13 - q23);
  }
  return rel_spread({a, b, c});
}

double interp_identity_l2_residual(const Interpolants& z) {
  const int N = z.segments();
  if (N < 1) throw VchError("interpolant-nodes", "identity needs at least two nodes");
  const double tau = z.tau();

  // route 1: interval-wise 2-point Gauss quadrature of |zbar - zhat|^2 (the
  // integrand is quadratic in t, so the rule is exact); interior nodes only,
  // which keeps the half-open endpoint convention out of the integral
  const double g1 = 0.5 - 0.5 / std::sqrt(3.0);
  const double g2 = 0.5 + 0.5 / std::sqrt(3.0);
  double a = 0.0;
  for (int n = 1; n <= N; ++n) {
    const double t0 = (n - 1) * tau;
    for (double s : {g1, g2}) {
      const Field d = z.eval_backward(t0 + s * tau) - z.eval_linear(t0 + s * tau);
      a += 0.5 * tau * inner_l2(d, d);
    }
  }

  // route 2: (tau/3) * sum of squared node increments
  double b = 0.0;
  for (int n = 0; n < N; ++n) {
    const Field d = z.node(n + 1) - z.node(n);
    b += inner_l2(d, d);
  }
  b *= tau / 3.0;

  // route 3: (tau^2/3) |d/dt zhat|^2_{L2}
  double c = 0.0;
  for (int n = 1; n <= N; ++n) {
    Field d = z.eval_linear(n * tau) - z.eval_linear((n - 1) * tau);
    d *= 1.0 / tau;
    c += tau * inner_l2(d, d);
  }
  c *= tau * tau / 3.0;

  return rel_spread({a, b, c});
}

namespace {

double weighted_mu_square(const SchemeState& s) {
  double acc = 0.0;
  for (int i = 0; i < s.mu.size(); ++i) acc += (0.5 + s.gamma[i]) * s.mu[i] * s.mu[i];
  return acc * s.mu.grid().cell_volume;
}

double weighted_increment_square(const SchemeState& from, const SchemeState& to) {
  double acc = 0.0;
  for (int i = 0; i < from.mu.size(); ++i) {
    const double d = to.mu[i] - from.mu[i];
    acc += (0.5 + from.gamma[i]) * d * d;
  }
  return acc * from.mu.grid().cell_volume;
}

}  // namespace

std::vector<double> energy_identity_series(const Trajectory& traj, const PotentialSet&) {
  if (!traj.stores_every_step())
    throw VchError("missing-state", "energy identity needs every step stored");
  const int N = traj.total_steps;
  std::vector<double> residuals;
  residuals.reserve(static_cast<size_t>(N));
  const double rhs = weighted_mu_square(traj.states[0]);
  double increments = 0.0;
  double gradients = 0.0;
  for (int m = 1; m <= N; ++m) {
    const SchemeState& prev = traj.states[static_cast<size_t>(m - 1)];
    const SchemeState& cur = traj.states[static_cast<size_t>(m)];
    increments += weighted_increment_square(prev, cur);
    const double h1 = seminorm_h1(cur.mu);
    gradients += traj.tau * h1 * h1;
    const double lhs = weighted_mu_square(cur) + increments + gradients;
    residuals.push_back(rhs != 0.0 ? std::abs(lhs - rhs) / rhs : std::abs(lhs - rhs));
  }
  return residuals;
}

double energy_identity_residual(const Trajectory& traj, const PotentialSet& ps, int m) {
  if (m < 1 || m > traj.total_steps)
    throw VchError("bad-index", "m must lie in [1, N]");
  return energy_identity_series(traj, ps)[static_cast<size_t>(m - 1)];
}

double free_energy(const Field& mu, const Field& rho, const PotentialSet& ps) {
  require_same_grid(mu, rho);
  double acc = 0.0;
  for (int i = 0; i < mu.size(); ++i)
    acc += -(0.5 + ps.g.value(rho[i])) * mu[i] + ps.f_value(rho[i]);
  acc *= mu.grid().cell_volume;
  const double h1 = seminorm_h1(rho);
  return acc + 0.5 * h1 * h1;
}

namespace {

ErrorNorms nodal_error_norms(const std::vector<Field>& d, double tau) {
  ErrorNorms norms;
  double h1_acc = 0.0;
  double l2v_acc = 0.0;
  for (size_t n = 0; n < d.size(); ++n) {
    const double l2 = norm_l2(d[n]);
    const double h1 = seminorm_h1(d[n]);
    const double v2 = l2 * l2 + h1 * h1;
    norms.linf_0T_H = std::max(norms.linf_0T_H, l2);
    norms.linf_0T_V = std::max(norms.linf_0T_V, std::sqrt(v2));
    if (n >= 1) {
      l2v_acc += tau * v2;
      const Field inc = d[n] - d[n - 1];
      h1_acc += inner_l2(inc, inc) / tau;
    }
  }
  norms.h1_0T_H = std::sqrt(h1_acc);
  norms.l2_0T_V = std::sqrt(l2v_acc);
  return norms;
}

}  // namespace

TrajectoryErrors error_norms(const Trajectory& traj, const Trajectory& ref) {
  if (!traj.stores_every_step() || !ref.stores_every_step())
    throw VchError("missing-state", "error norms need every step stored in both trajectories");
  if (!(traj.states[0].mu.grid() == ref.states[0].mu.grid()))
    throw VchError("grid-mismatch", "trajectories live on different grids");
  if (std::abs(traj.T - ref.T) > 1e-12 * std::max(1.0, std::abs(traj.T)))
    throw VchError("time-mismatch", "trajectories cover different horizons");
  const double ratio = traj.tau / ref.tau;
  const int k = static_cast<int>(std::llround(ratio));
  if (k < 1 || std::abs(ratio - k) > 1e-9)
    throw VchError("tau-mismatch", "reference tau must divide trajectory tau");

  const int N = traj.total_steps;
  std::vector<Field> d_rho, d_mu;
  d_rho.reserve(static_cast<size_t>(N) + 1);
  d_mu.reserve(static_cast<size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) {
    const SchemeState& a = traj.states[static_cast<size_t>(n)];
    const SchemeState& b = ref.states[static_cast<size_t>(n) * k];
    d_rho.push_back(a.rho - b.rho);
    d_mu.push_back(a.mu - b.mu);
  }

  TrajectoryErrors errors;
  errors.rho = nodal_error_norms(d_rho, traj.tau);
  errors.mu = nodal_error_norms(d_mu, traj.tau);
  errors.rho_part = errors.rho.h1_0T_H + errors.rho.linf_0T_V;
  errors.mu_part = errors.mu.linf_0T_H + errors.mu.l2_0T_V;
  errors.total = errors.rho_part + errors.mu_part;
  return errors;
}

}  // namespace vch
