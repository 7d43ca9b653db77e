#include "vch/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "vch/snapshot.hpp"

namespace vch {

std::vector<double> estimate_rates(const std::vector<double>& errors,
                                   const std::vector<double>& taus) {
  if (errors.size() != taus.size())
    throw ConfigError("errors and taus must have equal length", "rate-inputs");
  for (double e : errors)
    if (e < 0.0) throw ConfigError("errors must be nonnegative", "rate-inputs");
  for (double t : taus)
    if (!(t > 0.0)) throw ConfigError("taus must be positive", "rate-inputs");

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> rates;
  if (taus.size() < 2) return rates;
  rates.reserve(taus.size() - 1);
  for (size_t k = 0; k + 1 < taus.size(); ++k) {
    if (errors[k] == 0.0 || errors[k + 1] == 0.0 || taus[k] == taus[k + 1]) {
      rates.push_back(nan);
      continue;
    }
    rates.push_back(std::log(errors[k] / errors[k + 1]) / std::log(taus[k] / taus[k + 1]));
  }
  return rates;
}

namespace {

void validate_ladder(const std::vector<double>& taus, double tau_ref) {
  if (taus.empty()) throw ConfigError("empty tau ladder", "ladder-not-nested");
  for (double t : taus)
    if (!(t > 0.0)) throw ConfigError("ladder taus must be positive", "ladder-not-nested");
  if (!(tau_ref > 0.0)) throw ConfigError("tau_ref must be positive", "ladder-not-nested");
  for (size_t k = 0; k + 1 < taus.size(); ++k) {
    if (taus[k + 1] > taus[k])
      throw ConfigError("tau ladder must be non-increasing", "ladder-not-nested");
    const double ratio = taus[k] / taus[k + 1];
    if (std::abs(ratio - std::llround(ratio)) > 1e-9)
      throw ConfigError("tau ladder is not nested: " + format_double(taus[k]) + " / " +
                            format_double(taus[k + 1]) + " is not an integer",
                        "ladder-not-nested");
  }
  for (double t : taus) {
    const double ratio = t / tau_ref;
    if (std::abs(ratio - std::llround(ratio)) > 1e-9)
      throw ConfigError("reference tau does not divide ladder tau " + format_double(t),
                        "ladder-not-nested");
  }
  const double tau_min = *std::min_element(taus.begin(), taus.end());
  if (tau_ref > tau_min / 4.0)
    throw ConfigError("reference tau must be at most min(taus)/4", "ladder-ref-too-coarse");
}

}  // namespace

ConvergenceTable convergence_study(const Grid& grid, const PotentialSet& ps, const Field& mu0,
                                   const Field& rho0, double T, const std::vector<double>& taus,
                                   double tau_ref, const SolverOptions& opts) {
  validate_ladder(taus, tau_ref);

  // run each distinct tau once; degenerate duplicates reuse the result
  std::vector<double> unique_taus = taus;
  std::sort(unique_taus.begin(), unique_taus.end());
  unique_taus.erase(std::unique(unique_taus.begin(), unique_taus.end()), unique_taus.end());

  auto launch = [&](double tau) {
    return std::async(std::launch::async,
                      [&, tau] { return run(grid, ps, mu0, rho0, tau, T, 1, opts); });
  };
  std::vector<std::future<Trajectory>> futures;
  futures.reserve(unique_taus.size());
  for (double tau : unique_taus) futures.push_back(launch(tau));
  std::future<Trajectory> ref_future = launch(tau_ref);

  std::vector<Trajectory> runs;
  std::string first_error_tag, first_error_msg;
  std::vector<size_t> completed;
  for (size_t k = 0; k < futures.size(); ++k) {
    try {
      runs.push_back(futures[k].get());
      completed.push_back(k);
    } catch (const VchError& e) {
      runs.emplace_back();
      if (first_error_tag.empty()) {
        first_error_tag = e.tag();
        first_error_msg = "run at tau = " + format_double(unique_taus[k]) + " failed: " + e.what();
      }
    }
  }
  Trajectory ref;
  bool ref_ok = false;
  try {
    ref = ref_future.get();
    ref_ok = true;
  } catch (const VchError& e) {
    if (first_error_tag.empty()) {
      first_error_tag = e.tag();
      first_error_msg = std::string("reference run failed: ") + e.what();
    }
  }

  ConvergenceTable table;
  for (double tau : taus) {
    const size_t idx = static_cast<size_t>(
        std::lower_bound(unique_taus.begin(), unique_taus.end(), tau) - unique_taus.begin());
    const bool have = ref_ok && std::find(completed.begin(), completed.end(), idx) !=
                                   completed.end();
    if (!have) continue;
    table.taus.push_back(tau);
    table.errors.push_back(error_norms(runs[idx], ref));
    table.totals.push_back(table.errors.back().total);
  }
  table.rates = estimate_rates(table.totals, table.taus);
  if (!first_error_tag.empty())
    throw StudyFailure(std::move(first_error_tag), first_error_msg, std::move(table));
  return table;
}

}  // namespace vch
