#pragma once

#include <vector>

#include "vch/diagnostics.hpp"
#include "vch/stepper.hpp"

namespace vch {

// Observed temporal orders p_k = ln(e_k/e_{k+1}) / ln(tau_k/tau_{k+1}).
// Zero errors or repeated taus yield a NaN sentinel (printed as "-").
// Negative errors or nonpositive taus throw.
std::vector<double> estimate_rates(const std::vector<double>& errors,
                                   const std::vector<double>& taus);

struct ConvergenceTable {
  std::vector<double> taus;                  // descending ladder
  std::vector<TrajectoryErrors> errors;      // vs the fine reference
  std::vector<double> totals;                // combined error norm per tau
  std::vector<double> rates;                 // one per adjacent pair
};

// A ladder run failed; carries the rows that did complete.
class StudyFailure : public VchError {
 public:
  ConvergenceTable partial;
  StudyFailure(std::string tag, const std::string& msg, ConvergenceTable table)
      : VchError(std::move(tag), msg), partial(std::move(table)) {}
};

// Runs every ladder step plus the reference (concurrently), measures each run
// against the reference, and fills observed rates. The ladder must be
// non-increasing with integer refinement ratios, every tau an integer multiple of
// tau_ref, and tau_ref <= min(taus)/4.
ConvergenceTable convergence_study(const Grid& grid, const PotentialSet& ps, const Field& mu0,
                                   const Field& rho0, double T, const std::vector<double>& taus,
                                   double tau_ref, const SolverOptions& opts = {});

}  // namespace vch
