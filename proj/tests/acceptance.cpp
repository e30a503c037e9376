// Acceptance suite: one numbered check per line, [PASS]/[FAIL] prefix,
// nonzero exit if anything failed. Check 4 asserts a linear lower bound on
// the no-instance energy excess that the exact solver provably undercuts
// (the optimal allocation detunes the shared active speed, which costs only
// quadratically in the half-integer shortfall); it is implemented exactly as
// stated and reported honestly, with the valid quadratic-aware bound
// (certified_gap_bound) reported alongside.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "sleepscale/json_io.hpp"
#include "sleepscale/solver.hpp"
#include "test_util.hpp"

using namespace sleepscale;

namespace {

int g_failures = 0;

void report(int id, const std::string& label, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id, label.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

struct Run {
  PartitionInstance partition;
  testutil::SweepConfig cfg;
  ReductionParams params;
  double threshold_value;
  double structured;
  GapAllocation alloc;
  bool oracle_yes;
  std::vector<std::size_t> witness;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

int main() {
  constexpr int kInstances = 200;
  const auto configs = testutil::sweep_configs();

  testutil::Rng rng(20250810);
  std::vector<std::vector<long long>> partitions;
  partitions.reserve(kInstances);
  for (int i = 0; i < kInstances; ++i)
    partitions.push_back(testutil::random_partition(rng, 1, 10, 2, 12));

  // shared sweep data for criteria 1-6
  std::vector<Run> runs;
  runs.reserve(partitions.size() * configs.size());
  for (const auto& values : partitions) {
    for (const auto& cfg : configs) {
      PartitionInstance a(values);
      ReductionParams p = derive_params(a, cfg.model, cfg.c_wake, cfg.epsilon, cfg.delta);
      const double thr = threshold(p);
      auto [structured, alloc] = min_energy_structured(p);
      auto [yes, wit] = partition_oracle(a);
      runs.push_back(Run{std::move(a), cfg, std::move(p), thr, structured, std::move(alloc),
                         yes, wit ? *wit : std::vector<std::size_t>{}});
    }
  }

  {  // 1: decision equivalence against the subset-sum oracle
    const auto t0 = std::chrono::steady_clock::now();
    int agree = 0, total = 0;
    for (const Run& r : runs) {
      ++total;
      try {
        const DecisionResult d =
            decide(r.partition, r.cfg.model, r.cfg.c_wake, r.cfg.epsilon, r.cfg.delta);
        if (d.verdict == d.oracle_verdict) ++agree;
      } catch (const std::exception&) {
        // a mismatch surfaces as the hard "equivalence violation" error
      }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(1, "decision agreement with the subset-sum oracle",
           agree == total && secs < 120.0,
           std::to_string(agree) + "/" + std::to_string(total) + " verdicts agree (" +
               std::to_string(partitions.size()) + " instances x " +
               std::to_string(configs.size()) + " configs) in " + fmt(secs) + "s");
  }

  {  // 2: the nine construction checks pass with positive margins
    int pass_runs = 0;
    int checks_seen = 0;
    for (const Run& r : runs) {
      const CertificateReport rep = certify(r.params, r.partition);
      checks_seen = static_cast<int>(rep.checks.size());
      if (rep.pass) ++pass_runs;
    }
    report(2, "construction certificates",
           pass_runs == static_cast<int>(runs.size()) && checks_seen == 9,
           std::to_string(pass_runs) + "/" + std::to_string(runs.size()) +
               " certificates pass, " + std::to_string(checks_seen) + " checks each");
  }

  {  // 3: witness schedules validate and meet the threshold exactly
    int yes_runs = 0, good = 0;
    bool anchor = false;
    for (const Run& r : runs) {
      if (!r.oracle_yes) continue;
      ++yes_runs;
      const Schedule s = yes_schedule(r.params, r.partition, r.witness);
      const SchedulingInstance inst = build_instance(r.params, r.partition);
      const bool feasible = validate(inst, s).empty();
      const double total = energy(s, r.cfg.model, r.cfg.c_wake).total;
      if (feasible && std::abs(total - r.threshold_value) <= 1e-9 * r.threshold_value) ++good;
    }
    {
      const PartitionInstance a({1, 2, 3});
      const ReductionParams p = derive_params(a, PowerModel(1, 2, 1), 1.0, 0.25, 1.0);
      const double thr = threshold(p);
      const Schedule s = yes_schedule(p, a, {2});
      const double total = energy(s, p.model, p.c_wake).total;
      anchor = std::abs(thr - 79.6875) <= 1e-9 * 79.6875 &&
               std::abs(total - thr) <= 1e-9 * thr &&
               validate(build_instance(p, a), s).empty();
    }
    report(3, "witness schedule exactness", good == yes_runs && anchor,
           std::to_string(good) + "/" + std::to_string(yes_runs) +
               " witness schedules exact; worked anchor at 79.6875 " +
               (anchor ? "reproduced" : "MISSED"));
  }

  {  // 4: no-instance excess vs the stated linear shortfall bound
    int no_runs = 0, stated_ok = 0, certified_ok = 0;
    double min_excess = 1e300, min_stated = 1e300;
    for (const Run& r : runs) {
      if (r.oracle_yes) continue;
      ++no_runs;
      const double excess = r.structured - r.threshold_value;
      const double stated = gap_lower_bound(r.params);
      const double certified = certified_gap_bound(r.params);
      if (excess >= stated - 1e-9 * r.threshold_value) ++stated_ok;
      if (excess >= certified - 1e-9 * r.threshold_value) ++certified_ok;
      min_excess = std::min(min_excess, excess);
      min_stated = std::min(min_stated, stated);
    }
    bool anchor = false;
    {
      const ReductionParams p =
          derive_params(PartitionInstance({1, 2, 4}), PowerModel(1, 2, 1), 1.0, 0.25, 1.0);
      anchor = std::abs(gap_lower_bound(p) - 0.0078125) <= 1e-12;
    }
    const bool stated_holds = stated_ok == no_runs;
    report(4, "no-instance energy gap (stated linear bound)", stated_holds && anchor,
           std::to_string(stated_ok) + "/" + std::to_string(no_runs) +
               " no-instances meet the stated bound (anchor 0.0078125 " +
               (anchor ? "ok" : "MISSED") + "); min excess " + fmt(min_excess) +
               "; the quadratic-aware certified bound holds in " +
               std::to_string(certified_ok) + "/" + std::to_string(no_runs));
  }

  {  // 5: lattice oracle sandwich at resolution 10^4
    int ok = 0, total = 0;
    double worst_low = 0.0, worst_high = 0.0;
    for (const Run& r : runs) {
      ++total;
      const double grid = min_energy_grid(r.params, 10000);
      const double diff = grid - r.structured;
      const double hi = 5.0 * (r.params.big_b / 1e4) * r.params.critical.ratio;
      const double lo = -1e-9 * std::max(1.0, r.structured);
      if (diff >= lo && diff <= hi) ++ok;
      worst_low = std::min(worst_low, diff);
      worst_high = std::max(worst_high, diff / hi);
    }
    report(5, "lattice oracle sandwich", ok == total,
           std::to_string(ok) + "/" + std::to_string(total) + " inside [0, 5*(B/1e4)*ratio]; " +
               "most negative diff " + fmt(worst_low) + ", max diff/bound " + fmt(worst_high));
  }

  {  // 6: merge-point tangency and the chord-slope minimum
    int gaps = 0, tangency_ok = 0, slope_ok = 0;
    for (const Run& r : runs) {
      const ReductionParams& p = r.params;
      const double pd = power_deriv(p.model, p.d);
      for (std::size_t i = 0; i < p.gap_count(); ++i) {
        ++gaps;
        const double l = p.level1_volume[i];
        const double share = static_cast<double>(r.partition.values[i]) / p.k;
        const double tangent = power_deriv(p.model, (l + share) / p.gap_length[i]);
        const double chord =
            slope_from(p.model, p.critical, p.c_wake, p.gap_length[i], l, l + share);
        if (std::abs(tangent - pd) <= 1e-9 * std::max(1.0, pd) &&
            std::abs(chord - pd) <= 1e-9 * std::max(1.0, pd))
          ++tangency_ok;

        const double cap = p.gap_length[i] * p.critical.s_star - l;
        bool all_above = true;
        for (int s = 1; s <= 100; ++s) {
          const double b = cap * s / 101.0;
          if (std::abs(b - share) <= cap / 404.0) continue;  // skip the tangency point
          if (!(slope_from(p.model, p.critical, p.c_wake, p.gap_length[i], l, l + b) > pd))
            all_above = false;
        }
        if (all_above) ++slope_ok;
      }
    }
    report(6, "merge-point tangency and chord-slope minimum",
           tangency_ok == gaps && slope_ok == gaps,
           std::to_string(tangency_ok) + "/" + std::to_string(gaps) + " tangencies within 1e-9; " +
               std::to_string(slope_ok) + "/" + std::to_string(gaps) +
               " gaps keep every sampled chord above P'(d)");
  }

  {  // 7: max-density scheduler correctness
    bool forced_ok = false;
    {
      SchedulingInstance inst;
      inst.horizon = 2.0;
      inst.jobs.push_back({0, JobLevel::per_gap, 0.0, 2.0, 4.0});
      const Schedule s = yds(inst);
      forced_ok = validate(inst, s).empty() && s.segments.size() == 1 &&
                  std::abs(s.segments[0].speed - 2.0) <= 1e-12;
    }

    int small_total = 0, small_ok = 0;
    {
      const PowerModel m(1, 2, 1);
      testutil::Rng yrng(777);
      for (int rep = 0; rep < 15; ++rep) {
        SchedulingInstance inst;
        const int n = static_cast<int>(yrng.uniform(1, 3));
        double horizon = 0.0;
        for (int j = 0; j < n; ++j) {
          const double rel = yrng.uniform_real(0.0, 4.0);
          const double len = yrng.uniform_real(0.5, 4.0);
          inst.jobs.push_back({j, JobLevel::per_gap, rel, rel + len,
                               yrng.uniform_real(0.2, 3.0)});
          horizon = std::max(horizon, rel + len);
        }
        inst.horizon = horizon;
        ++small_total;
        const Schedule s = yds(inst);
        const double brute = testutil::brute_force_best_energy(inst, m, 40);
        if (validate(inst, s).empty() && energy(s, m, 1.0).total <= brute + 1e-6) ++small_ok;
      }
    }

    int reduced_total = 0, reduced_ok = 0;
    for (std::size_t idx = 0; idx < runs.size(); idx += 97) {  // a spread of reduced instances
      const Run& r = runs[idx];
      ++reduced_total;
      const SchedulingInstance inst = build_instance(r.params, r.partition);
      const Schedule s = yds(inst);
      bool ok = validate(inst, s).empty();
      for (const Segment& seg : s.segments) {
        if (seg.mode != SegmentMode::run) continue;
        for (const Job& j : inst.jobs)
          if (j.id == seg.job && j.level == JobLevel::separator &&
              std::abs(seg.speed - r.params.critical.s_star) > 1e-9)
            ok = false;
      }
      if (ok) ++reduced_ok;
    }

    report(7, "max-density scheduler correctness",
           forced_ok && small_ok == small_total && reduced_ok == reduced_total,
           std::string("forced case ") + (forced_ok ? "exact" : "WRONG") + "; " +
               std::to_string(small_ok) + "/" + std::to_string(small_total) +
               " small instances within 1e-6 of brute force; " + std::to_string(reduced_ok) +
               "/" + std::to_string(reduced_total) +
               " reduced instances pin separators at s_star");
  }

  {  // 8: critical speed closed form vs bracketed numeric root
    testutil::Rng crng(9091);
    int ok = 0;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const PowerModel m(crng.uniform_real(0.1, 10.0), crng.uniform_real(1.5, 3.0),
                         crng.uniform_real(0.1, 10.0));
      const double closed = critical_speed(m).s_star;
      const double numeric = critical_speed_numeric(m);
      const double rel = std::abs(closed - numeric) / closed;
      worst = std::max(worst, rel);
      if (rel <= 1e-10) ++ok;
    }
    report(8, "critical speed closed form vs numeric root", ok == 50,
           std::to_string(ok) + "/50 within relative 1e-10; worst " + fmt(worst));
  }

  if (g_failures > 0)
    std::printf("%d criterion(s) failed\n", g_failures);
  else
    std::printf("all criteria passed\n");
  return g_failures == 0 ? 0 : 1;
}
