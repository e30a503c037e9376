#pragma once

#include <string>
#include <vector>

#include "sleepscale/instance.hpp"
#include "sleepscale/power_model.hpp"
#include "sleepscale/schedule.hpp"

namespace sleepscale {

/// Everything the instance builder, the certifier and the solver consume,
/// derived from (model, c_wake, epsilon, delta, partition values). Scalar
/// field names match the serialized schema:
///   d      shared run speed (1 - epsilon) * s_star
///   e      gap length before the per-value shrink, c_wake / R(d)
///   f      gap shrink per unit of partition value, c_wake / (P(0) * a_max)
///   k      partition value carried per unit of spanning work, -R'(d)/(f R(d))
///   big_b  volume of the spanning job, sum(a) / (2k)
struct ReductionParams {
  PowerModel model;
  CriticalPoint critical;
  double c_wake;
  double epsilon;
  double delta;
  double d;
  double e;
  double f;
  double k;
  double big_b;
  std::vector<double> gap_length;     // L_i = e - f * a_i
  std::vector<double> level1_volume;  // l_i = d * L_i - a_i / k
  std::vector<double> root_low;
  std::vector<double> root_high;

  std::size_t gap_count() const { return gap_length.size(); }
};

struct CertificateCheck {
  std::string id;
  double lhs;
  double rhs;
  double margin;
  bool pass;
};

/// Nine numeric checks, C1..C9. Inequalities report margin = slack (pass iff
/// > 0); identities report margin = |lhs - rhs| (pass iff <= 1e-9 scaled).
///   C1 P'(s) < P(s)/s < ratio on 1000 samples below s_star, equality at s_star
///   C2 R(d) < epsilon * P(0)
///   C3 R(d)/|R'(d)| < epsilon * s_star
///   C4 every gap length and per-gap volume positive
///   C5 every gap density and the whole-horizon density below s_star
///   C6 H and F cross twice: G(0) > 0 and G(L_i s_star) = -c_wake
///   C7 merge-point tangency: H'(l_i + a_i/k) = chord slope = P'(d)
///   C8 l_i below the first crossing
///   C9 l_i + a_i/k strictly between the two crossings
struct CertificateReport {
  std::vector<CertificateCheck> checks;
  bool pass = false;
};

/// Throws std::invalid_argument for epsilon outside (0, 1/2) (guard band 1e-6),
/// non-positive c_wake/delta, or when R(d) underflows so that e = c_wake/R(d)
/// is not finite ("epsilon too small for this model").
ReductionParams derive_params(const PartitionInstance& partition, const PowerModel& model,
                              double c_wake, double epsilon, double delta);

/// Timeline: separator job j occupies [t_j, t_j + delta], j = 0..n, with
/// t_0 = 0 and t_j = t_{j-1} + delta + L_j; gap i is [t_{i-1} + delta, t_i]
/// and carries the per-gap job of volume l_i; the spanning job covers
/// [0, horizon] with volume big_b.
SchedulingInstance build_instance(const ReductionParams& params, const PartitionInstance& partition);

CertificateReport certify(const ReductionParams& params, const PartitionInstance& partition);

/// (n+1)*delta*P(s_star) + sum_i F(l_i) + big_b*P'(d): the energy level that
/// separates instances with an equal-sum split from those without.
double threshold(const ReductionParams& params);

/// Explicit schedule meeting threshold() exactly, given a witness subset
/// (0-based indices) whose values sum to half the total. Witness gaps run
/// the per-gap job plus their a_i/k share of the spanning job at speed d;
/// the others run at s_star and sleep until the gap ends.
Schedule yes_schedule(const ReductionParams& params, const PartitionInstance& partition,
                      const std::vector<std::size_t>& subset);

/// (1/(2k)) * (ratio - P'(d)): the energy premium of carrying the smallest
/// possible half-integer shortfall of spanning work at the sleep-branch
/// marginal rate instead of the merged rate P'(d).
double gap_lower_bound(const ReductionParams& params);

}  // namespace sleepscale
