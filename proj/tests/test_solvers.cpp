#include <doctest.h>

#include <cmath>
#include <random>

#include "vch/dense_reference.hpp"
#include "vch/grid.hpp"
#include "vch/solvers.hpp"

using namespace vch;

namespace {

Field random_field(const Grid& g, std::mt19937& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Field f(g);
  for (int i = 0; i < f.size(); ++i) f[i] = dist(rng);
  return f;
}

// discrete J2 functional, evaluated by quadrature over cells
double j2_value(const Field& v, const Field& b, double tau, const PotentialSet& ps) {
  const double h1 = seminorm_h1(v);
  double f_int = 0.0;
  for (int i = 0; i < v.size(); ++i) f_int += ps.f_value(v[i]);
  f_int *= v.grid().cell_volume;
  return 0.5 * tau * h1 * h1 + 0.5 * inner_l2(v, v) + tau * f_int - inner_l2(b, v);
}

}  // namespace

TEST_CASE("cg solves the identity system in one iteration") {
  const Grid g = build_grid(1, {8}, {1.0});
  std::mt19937 rng(21);
  const Field rhs = random_field(g, rng, -1.0, 1.0);
  auto identity = [](const Field& v) { return v; };
  const auto [x, report] = cg_solve(identity, rhs, 1e-12, 100);
  CHECK(report.iterations <= 1);
  for (int i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(rhs[i]).epsilon(1e-14));
}

TEST_CASE("cg solves a decoupled diagonal system") {
  const Grid g = build_grid(1, {8}, {1.0});
  std::mt19937 rng(22);
  const Field d = random_field(g, rng, 0.5, 3.0);
  const Field rhs = random_field(g, rng, -1.0, 1.0);
  auto apply = [&](const Field& v) {
    Field out(g);
    for (int i = 0; i < v.size(); ++i) out[i] = d[i] * v[i];
    return out;
  };
  const auto [x, report] = cg_solve(apply, rhs, 1e-13, 100);
  for (int i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - rhs[i] / d[i]) <= 1e-12);
  CHECK(report.final_relative_residual <= 1e-13);
}

TEST_CASE("cg matches a dense elimination oracle on 2I - L") {
  const Grid g = build_grid(1, {8}, {1.0});
  std::mt19937 rng(23);
  const Field rhs = random_field(g, rng, -1.0, 1.0);
  auto apply = [&](const Field& v) {
    const Field lap = neumann_laplacian_apply(g, v);
    Field out(g);
    for (int i = 0; i < v.size(); ++i) out[i] = 2.0 * v[i] - lap[i];
    return out;
  };
  const auto [x, report] = cg_solve(apply, rhs, 1e-13, 1000);

  dense::Matrix a = dense::neumann_laplacian_matrix(8, g.spacing[0]);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) a[i][j] = (i == j ? 2.0 : 0.0) - a[i][j];
  const std::vector<double> exact = dense::lu_solve(a, rhs.values());
  for (int i = 0; i < 8; ++i) CHECK(std::abs(x[i] - exact[i]) <= 1e-10);
}

TEST_CASE("cg handles zero rhs and reports non-convergence") {
  const Grid g = build_grid(1, {8}, {1.0});
  auto identity = [](const Field& v) { return v; };
  const auto [x, report] = cg_solve(identity, Field(g, 0.0), 1e-12, 10);
  CHECK(norm_linf(x) == 0.0);
  CHECK(report.iterations == 0);

  // an indefinite operator must be rejected rather than iterated blindly
  auto indefinite = [](const Field& v) { return -1.0 * v; };
  std::mt19937 rng(24);
  const Field rhs = random_field(g, rng, 0.5, 1.0);
  CHECK_THROWS_AS(cg_solve(indefinite, rhs, 1e-12, 10), CgFailure);

  // unreasonably tight budget
  const Grid big = build_grid(1, {64}, {1.0});
  auto stencil = [&](const Field& v) {
    const Field lap = neumann_laplacian_apply(big, v);
    Field out(big);
    for (int i = 0; i < v.size(); ++i) out[i] = v[i] - 0.5 * lap[i];
    return out;
  };
  const Field rhs2 = random_field(big, rng, -1.0, 1.0);
  CHECK_THROWS_AS(cg_solve(stencil, rhs2, 1e-14, 2), CgFailure);
}

TEST_CASE("newton returns a manufactured root immediately") {
  const Grid g = build_grid(1, {16}, {1.0});
  const PotentialSet ps = make_logistic_potentials({1.0, 0.5, 0.0});
  const double tau = 0.05;
  std::mt19937 rng(31);
  const Field root = random_field(g, rng, 0.2, 0.8);
  // b = rho - tau*L rho + tau*f'(rho) makes `root` an exact zero of F
  const Field lap = neumann_laplacian_apply(g, root);
  Field b(g);
  for (int i = 0; i < b.size(); ++i) b[i] = root[i] - tau * lap[i] + tau * ps.f_d1(root[i]);

  const auto [x, report] = newton_barrier_solve(ps, tau, b, root, 1e-10, 50);
  CHECK(report.iterations <= 1);
  CHECK(report.final_residual_l2 <= 1e-10);
  for (int i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - root[i]) <= 1e-12);
}

TEST_CASE("single-cell roots: odd symmetry and bisection oracle") {
  // two cells with constant data emulate the scalar problem (L vanishes)
  const Grid g = build_grid(1, {2}, {1.0});
  const PotentialSet ps = make_logistic_potentials({1.0, 0.0, 0.0});
  const double tau = 0.1;

  {
    const auto [x, report] =
        newton_barrier_solve(ps, tau, Field(g, 0.5), Field(g, 0.4), 1e-13, 50);
    CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-12));  // root of r + 0.1 ln(r/(1-r)) = 0.5
    CHECK(x[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
  {
    const auto [x, report] =
        newton_barrier_solve(ps, tau, Field(g, 0.8), Field(g, 0.5), 1e-13, 50);
    const double oracle = dense::bisection_root(
        [&](double r) { return r + tau * ps.f_d1(r) - 0.8; }, 1e-12, 1.0 - 1e-12, 1e-13);
    CHECK(std::abs(x[0] - oracle) <= 1e-10);
    CHECK(std::abs(x[1] - oracle) <= 1e-10);
  }
}

TEST_CASE("newton iterates stay strictly interior under extreme data") {
  const Grid g = build_grid(1, {16}, {1.0});
  const PotentialSet ps = make_logistic_potentials({1.0, 0.5, 0.0});
  const double tau = 0.1;
  // strong pull toward the upper boundary; the root sits about 4e-5 from 1
  const Field b(g, 2.0);
  const auto [x, report] = newton_barrier_solve(ps, tau, b, Field(g, 0.5), 1e-9, 200);
  CHECK(report.min_distance_to_bounds > 0.0);
  CHECK(min_distance_to_unit_bounds(x) > 0.0);
  CHECK(max_value(x) < 1.0);
  CHECK(max_value(x) > 0.999);
  CHECK(report.final_residual_l2 <= 1e-9);
  CHECK(report.damped_steps > 0);
}

TEST_CASE("newton rejects inadmissible tau and bad initial guesses") {
  const Grid g = build_grid(1, {4}, {1.0});
  const PotentialSet well = make_logistic_potentials({1.0, 1.0, 0.0});  // tau_max = 0.25
  CHECK_THROWS_AS(newton_barrier_solve(well, 0.3, Field(g, 0.5), Field(g, 0.5), 1e-10, 50),
                  ConfigError);
  CHECK_THROWS_AS(newton_barrier_solve(well, 0.1, Field(g, 0.5), Field(g, 1.0), 1e-10, 50),
                  VchError);
  CHECK_THROWS_AS(newton_barrier_solve(well, 0.1, Field(g, 0.9), Field(g, 0.5), 1e-16, 1),
                  NewtonFailure);
}

TEST_CASE("newton residual Jacobian matches directional finite differences") {
  const Grid g = build_grid(1, {16}, {1.0});
  const PotentialSet ps = make_logistic_potentials({1.0, 0.5, 0.1});
  const double tau = 0.02;
  std::mt19937 rng(41);
  const Field rho = random_field(g, rng, 0.25, 0.75);
  const Field v = random_field(g, rng, -1.0, 1.0);
  const Field b = random_field(g, rng, 0.3, 0.7);

  auto residual = [&](const Field& r) {
    const Field lap = neumann_laplacian_apply(g, r);
    Field F(g);
    for (int i = 0; i < F.size(); ++i) F[i] = r[i] - tau * lap[i] + tau * ps.f_d1(r[i]) - b[i];
    return F;
  };
  auto jacobian = [&](const Field& w) {
    const Field lap = neumann_laplacian_apply(g, w);
    Field out(g);
    for (int i = 0; i < out.size(); ++i)
      out[i] = (1.0 + tau * ps.f_d2(rho[i])) * w[i] - tau * lap[i];
    return out;
  };

  const double eps = 1e-7;
  Field shifted = rho;
  for (int i = 0; i < shifted.size(); ++i) shifted[i] += eps * v[i];
  const Field fd = (1.0 / eps) * (residual(shifted) - residual(rho));
  const Field jv = jacobian(v);
  CHECK(norm_l2(fd - jv) <= 1e-5 * norm_l2(jv));
}

TEST_CASE("newton result minimizes the implicit functional") {
  const Grid g = build_grid(1, {16}, {1.0});
  const PotentialSet ps = make_logistic_potentials({1.0, 0.5, 0.0});
  const double tau = 0.01;
  std::mt19937 rng(51);
  const Field b = random_field(g, rng, 0.35, 0.65);
  const auto [rho, report] = newton_barrier_solve(ps, tau, b, Field(g, 0.5), 1e-12, 50);

  const double j_min = j2_value(rho, b, tau, ps);
  std::uniform_real_distribution<double> bump(-1e-3, 1e-3);
  for (int trial = 0; trial < 100; ++trial) {
    Field perturbed = rho;
    for (int i = 0; i < perturbed.size(); ++i) {
      double d = bump(rng);
      if (perturbed[i] + d <= 0.0 || perturbed[i] + d >= 1.0) d = -d;
      perturbed[i] += d;
    }
    CHECK(j2_value(perturbed, b, tau, ps) >= j_min - 1e-12 * (1.0 + std::abs(j_min)));
  }
}
