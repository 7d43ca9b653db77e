#include "vch/potentials.hpp"

#include <cmath>
#include <limits>

#include "vch/snapshot.hpp"

namespace vch {

PotentialSet make_logistic_potentials(const LogisticParams& p, GChoice g_choice,
                                      const CouplingG* custom_g) {
  if (!(p.alpha1 > 0.0))
    throw ConfigError("potential.alpha1 must be > 0 (barrier property), got " +
                          format_double(p.alpha1),
                      "potential-params");
  if (p.alpha2 < 0.0 || p.alpha3 < 0.0)
    throw ConfigError("potential.alpha2 and potential.alpha3 must be >= 0", "potential-params");

  const double a1 = p.alpha1;
  const double a2 = p.alpha2;
  const double a3 = p.alpha3;

  PotentialSet ps;
  ps.f1.value = [a1](double r) {
    return a1 * (r * std::log(r) + (1.0 - r) * std::log(1.0 - r) + std::log(2.0));
  };
  ps.f1.d1 = [a1](double r) { return a1 * std::log(r / (1.0 - r)); };
  ps.f1.d2 = [a1](double r) { return a1 / (r * (1.0 - r)); };

  ps.f2.value = [a2, a3](double r) { return a2 * r * (1.0 - r) + a3 * r; };
  ps.f2.d1 = [a2, a3](double r) { return a2 * (1.0 - 2.0 * r) + a3; };
  ps.f2.d2 = [a2](double) { return -2.0 * a2; };
  ps.f2.d2_sup = 2.0 * a2;

  if (g_choice == GChoice::identity) {
    ps.g.value = [](double r) { return r; };
    ps.g.d1 = [](double) { return 1.0; };
    ps.g.d2 = [](double) { return 0.0; };
  } else {
    if (custom_g == nullptr || !custom_g->value || !custom_g->d1 || !custom_g->d2)
      throw ConfigError("custom g requested but no coupling supplied", "potential-params");
    ps.g = *custom_g;
  }
  return ps;
}

TauAdmissibility check_admissible_tau(double tau, const PotentialSet& ps) {
  TauAdmissibility res;
  const double s = ps.f2.d2_sup;
  res.tau_max = (s > 0.0) ? 0.5 / s : std::numeric_limits<double>::infinity();
  if (!(tau > 0.0)) {
    res.ok = false;
    res.message = "time step must be positive, got " + format_double(tau);
    return res;
  }
  res.ok = (tau * s <= 0.5);
  if (!res.ok) {
    res.message = "step-size admissibility violated: tau*sup|f2''| = " + format_double(tau * s) +
                  " exceeds 1/2; maximal admissible tau = " + format_double(res.tau_max);
  }
  return res;
}

void validate_potentials(const PotentialSet& ps) {
  const int n = 1001;
  const double tol = 1e-12;
  double d2_max = 0.0;
  for (int k = 0; k < n; ++k) {
    // strictly interior samples; f1 is only defined on (0,1)
    const double r = (k + 0.5) / n;
    if (ps.f1.value(r) < -tol)
      throw ConfigError("f1 must be nonnegative on (0,1); f1(" + format_double(r) +
                            ") = " + format_double(ps.f1.value(r)),
                        "potential-invariant");
    if (ps.f1.d2(r) < -tol)
      throw ConfigError("f1 must be convex on (0,1); f1''(" + format_double(r) +
                            ") = " + format_double(ps.f1.d2(r)),
                        "potential-invariant");
    if (ps.g.value(r) < -tol)
      throw ConfigError("g must be nonnegative on [0,1]; g(" + format_double(r) +
                            ") = " + format_double(ps.g.value(r)),
                        "potential-invariant");
    d2_max = std::max(d2_max, std::abs(ps.f2.d2(r)));
  }
  if (ps.f2.d2_sup < d2_max * (1.0 - 1e-12))
    throw ConfigError("f2.d2_sup = " + format_double(ps.f2.d2_sup) +
                          " is below the sampled max |f2''| = " + format_double(d2_max),
                      "potential-invariant");
}

}  // namespace vch
