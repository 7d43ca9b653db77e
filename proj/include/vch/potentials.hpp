#pragma once

#include <functional>
#include <string>

#include "vch/errors.hpp"

namespace vch {

using ScalarFn = std::function<double(double)>;

// Convex singular part f1 of the potential, defined on (0,1).
// f1 >= 0, f1'' >= 0, and f1' blows up to -inf / +inf at the endpoints.
struct ConvexBarrier {
  ScalarFn value;
  ScalarFn d1;
  ScalarFn d2;
};

// Smooth (possibly nonconvex) part f2 on [0,1], with a known bound on |f2''|.
struct SmoothPart {
  ScalarFn value;
  ScalarFn d1;
  ScalarFn d2;
  double d2_sup = 0.0;  // sup over [0,1] of |f2''|
};

// Nonnegative coupling g on [0,1].
struct CouplingG {
  ScalarFn value;
  ScalarFn d1;
  ScalarFn d2;
};

// The triple (f1, f2, g); f = f1 + f2.
struct PotentialSet {
  ConvexBarrier f1;
  SmoothPart f2;
  CouplingG g;

  double f_value(double r) const { return f1.value(r) + f2.value(r); }
  double f_d1(double r) const { return f1.d1(r) + f2.d1(r); }
  double f_d2(double r) const { return f1.d2(r) + f2.d2(r); }
};

struct LogisticParams {
  double alpha1 = 1.0;  // entropy barrier weight, must be > 0
  double alpha2 = 0.5;  // double-well depth
  double alpha3 = 0.0;  // linear tilt
};

enum class GChoice { identity, custom };

// Logarithmic double-well potentials:
//   f1(r) = alpha1*(r ln r + (1-r) ln(1-r)) + alpha1*ln 2   (shifted so min f1 = 0)
//   f2(r) = alpha2*r*(1-r) + alpha3*r
//   g(r)  = r for the identity choice.
// Only f' enters the dynamics, so the additive shift changes no trajectory.
PotentialSet make_logistic_potentials(const LogisticParams& p, GChoice g_choice = GChoice::identity,
                                      const CouplingG* custom_g = nullptr);

struct TauAdmissibility {
  bool ok = false;
  double tau_max = 0.0;  // largest admissible step (inf when f2'' vanishes)
  std::string message;   // diagnostic on failure
};

// Step-size gate: accepts iff tau * sup|f2''| <= 1/2, which keeps the
// integrand r -> r^2/2 + tau*f2(r) uniformly convex with margin 1/2.
TauAdmissibility check_admissible_tau(double tau, const PotentialSet& ps);

// Sampled sanity checks of the structural assumptions (f1 >= 0 and convex,
// g >= 0, d2_sup consistent with a 1001-point sample). Throws on violation.
void validate_potentials(const PotentialSet& ps);

}  // namespace vch
