#include "vch/dense_reference.hpp"

#include <cmath>
#include <stdexcept>

namespace vch::dense {

Matrix neumann_laplacian_matrix(int n, double h) {
  const double s = 1.0 / (h * h);
  Matrix a(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
  for (int i = 0; i < n; ++i) {
    // mirrored ghosts fold the missing neighbor back onto the diagonal
    if (i > 0) a[i][i - 1] += s;
    if (i < n - 1) a[i][i + 1] += s;
    a[i][i] -= ((i > 0 ? 1 : 0) + (i < n - 1 ? 1 : 0)) * s;
  }
  return a;
}

std::vector<double> lu_solve(Matrix a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-300) throw std::runtime_error("singular dense system");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < n; ++r) {
      const double factor = a[r][col] / a[col][col];
      if (factor == 0.0) continue;
      for (int c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(static_cast<size_t>(n), 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

double bisection_root(const ScalarFn& f, double lo, double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw std::runtime_error("bisection needs a sign change");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

double euclidean_norm(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

bool inside_unit_interval(const std::vector<double>& v) {
  for (double x : v)
    if (!(x > 0.0) || !(x < 1.0)) return false;
  return true;
}

}  // namespace

std::vector<double> rho_step(const std::vector<double>& rho, const std::vector<double>& mu,
                             double tau, double h, const Potentials& pot, double tol) {
  const int n = static_cast<int>(rho.size());
  const Matrix lap = neumann_laplacian_matrix(n, h);

  std::vector<double> b(rho);
  for (int i = 0; i < n; ++i) b[i] += tau * mu[i] * pot.g_d1(rho[i]);

  auto residual = [&](const std::vector<double>& x) {
    std::vector<double> f(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      double lap_x = 0.0;
      for (int j = 0; j < n; ++j) lap_x += lap[i][j] * x[j];
      f[i] = x[i] - tau * lap_x + tau * pot.f_d1(x[i]) - b[i];
    }
    return f;
  };

  std::vector<double> x(rho);
  std::vector<double> f = residual(x);
  double fnorm = euclidean_norm(f);
  for (int it = 0; it < 200 && fnorm > tol; ++it) {
    Matrix jac(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) jac[i][j] = -tau * lap[i][j];
      jac[i][i] += 1.0 + tau * pot.f_d2(x[i]);
    }
    std::vector<double> rhs(f);
    for (double& v : rhs) v = -v;
    const std::vector<double> step = lu_solve(jac, rhs);

    double alpha = 1.0;
    for (;;) {
      if (alpha < 1e-18) throw std::runtime_error("dense newton backtracking stalled");
      std::vector<double> trial(x);
      for (int i = 0; i < n; ++i) trial[i] += alpha * step[i];
      if (inside_unit_interval(trial)) {
        const std::vector<double> ftrial = residual(trial);
        const double tnorm = euclidean_norm(ftrial);
        if (tnorm < fnorm) {
          x = trial;
          f = ftrial;
          fnorm = tnorm;
          break;
        }
      }
      alpha *= 0.5;
    }
  }
  if (fnorm > tol) throw std::runtime_error("dense newton did not converge");
  return x;
}

std::vector<double> mu_step(const std::vector<double>& rho, const std::vector<double>& rho_next,
                            const std::vector<double>& mu, double tau, double h,
                            const Potentials& pot) {
  const int n = static_cast<int>(mu.size());
  const Matrix lap = neumann_laplacian_matrix(n, h);
  Matrix a(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
  std::vector<double> rhs(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = -tau * lap[i][j];
    a[i][i] += 1.0 + pot.g_value(rho[i]) + pot.g_value(rho_next[i]);
    rhs[i] = (1.0 + 2.0 * pot.g_value(rho[i])) * mu[i];
  }
  return lu_solve(std::move(a), std::move(rhs));
}

std::pair<std::vector<double>, std::vector<double>> advance(const std::vector<double>& mu,
                                                            const std::vector<double>& rho,
                                                            double tau, double h,
                                                            const Potentials& pot, double tol) {
  std::vector<double> rho_next = rho_step(rho, mu, tau, h, pot, tol);
  std::vector<double> mu_next = mu_step(rho, rho_next, mu, tau, h, pot);
  return {std::move(mu_next), std::move(rho_next)};
}

}  // namespace vch::dense
