#pragma once

#include <functional>
#include <utility>
#include <vector>

// Brute-force dense reference for small 1D problems. Everything here is
// deliberately independent of the solver library: its own ghost-cell
// Laplacian assembly, dense LU linear algebra, and a backtracking Newton /
// bisection root finder. Used by tests and by the CLI self-check to
// cross-validate the production stepper.
namespace vch::dense {

using Matrix = std::vector<std::vector<double>>;
using ScalarFn = std::function<double(double)>;

struct Potentials {
  ScalarFn f_d1;     // f'(r)
  ScalarFn f_d2;     // f''(r)
  ScalarFn g_value;  // g(r)
  ScalarFn g_d1;     // g'(r)
};

// Dense matrix of the 1D second-difference operator with mirrored ghosts.
Matrix neumann_laplacian_matrix(int n, double h);

// Gaussian elimination with partial pivoting; throws std::runtime_error on a
// (numerically) singular matrix.
std::vector<double> lu_solve(Matrix a, std::vector<double> b);

// Scalar bisection on [lo, hi]; requires a sign change.
double bisection_root(const ScalarFn& f, double lo, double hi, double tol);

// rho_{n+1} - tau*L rho_{n+1} + tau*f'(rho_{n+1}) = rho_n + tau*mu_n*g'(rho_n),
// solved by dense-LU Newton with plain backtracking (halve until the trial
// stays in (0,1) and the Euclidean residual decreases).
std::vector<double> rho_step(const std::vector<double>& rho, const std::vector<double>& mu,
                             double tau, double h, const Potentials& pot, double tol);

// (1 + g(rho_n) + g(rho_{n+1})) mu_{n+1} - tau*L mu_{n+1} = (1 + 2 g(rho_n)) mu_n
std::vector<double> mu_step(const std::vector<double>& rho, const std::vector<double>& rho_next,
                            const std::vector<double>& mu, double tau, double h,
                            const Potentials& pot);

std::pair<std::vector<double>, std::vector<double>> advance(const std::vector<double>& mu,
                                                            const std::vector<double>& rho,
                                                            double tau, double h,
                                                            const Potentials& pot, double tol);

}  // namespace vch::dense
