#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "sleepscale/reduction.hpp"

namespace sleepscale {

enum class GapBranch : int { active_whole_gap = 0, run_then_sleep = 1 };

/// Per-gap split of the spanning volume; b sums to big_b.
struct GapAllocation {
  std::vector<double> b;
  std::vector<GapBranch> branch;
};

enum class Verdict : int { partition_exists = 0, no_partition = 1 };

struct DecisionResult {
  double min_energy;
  double threshold;
  double gap_bound;            // gap_lower_bound(params)
  double certified_gap_bound;  // certified_gap_bound(params)
  double decision_tolerance;
  Verdict verdict;
  Verdict oracle_verdict;
  std::optional<std::vector<std::size_t>> witness;
};

/// Maximum number of gaps min_energy_structured will enumerate (2^n masks).
inline constexpr std::size_t kEnumerationCap = 20;

/// Cheapest way to put w >= l_i units of work into gap i: the lower envelope
/// of running the whole gap at w/L_i and running at s_star then sleeping.
/// Throws std::domain_error for w < l_i (the per-gap volume is mandatory).
double gap_cost(const ReductionParams& params, std::size_t i, double w);

/// Exact minimum of (n+1)*delta*P(s_star) + sum_i gap_cost(i, l_i + b_i) over
/// all b >= 0 with sum b = big_b. Enumerates the 2^n branch assignments in
/// ascending mask order (first minimum wins ties); inside an assignment the
/// active gaps share one speed (equal marginal cost, floored at l_i/L_i)
/// found by bisection on the marginal, any remainder flowing to sleeping
/// gaps at marginal `ratio`. Throws std::invalid_argument beyond the
/// enumeration cap.
std::pair<double, GapAllocation> min_energy_structured(const ReductionParams& params);

/// Independent lattice oracle: splits big_b into `resolution` equal units and
/// runs an exact dynamic program over gaps (state = units still to place).
/// Upper-bounds min_energy_structured and converges to it as the resolution
/// grows. resolution >= 1.
double min_energy_grid(const ReductionParams& params, int resolution);

/// Subset-sum dynamic program against target sum(a)/2 (immediately false for
/// odd totals); witness indices are 0-based, reconstructed by backtracking.
std::pair<bool, std::optional<std::vector<std::size_t>>> partition_oracle(
    const PartitionInstance& partition);

/// Proven lower bound on min_energy_structured - threshold when no equal-sum
/// split exists: the half-integer shortfall rho = 1/(2k) is carried either at
/// the sleep-branch marginal (linear term) or by detuning the shared active
/// speed (quadratic term with curvature at least P''_min / sum L_i).
double certified_gap_bound(const ReductionParams& params);

/// derive -> certify (throws on failure) -> threshold/bounds/minimum, then
/// compares against the subset-sum oracle. tolerance =
/// min(1e-9 * threshold, certified_gap_bound / 4), unless overridden. A
/// verdict mismatch throws std::runtime_error("equivalence violation ...");
/// with the computed tolerance that never happens, so the override is the
/// fault-injection hook for exercising the error path.
DecisionResult decide(const PartitionInstance& partition, const PowerModel& model,
                      double c_wake, double epsilon, double delta,
                      std::optional<double> tolerance_override = std::nullopt);

}  // namespace sleepscale
