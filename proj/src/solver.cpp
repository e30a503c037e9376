#include "sleepscale/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sleepscale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Inverse of P': the speed whose marginal cost equals mu.
double speed_at_marginal(const PowerModel& m, double mu) {
  if (mu <= 0.0) return 0.0;
  return std::pow(mu / (m.scale * m.exponent), 1.0 / (m.exponent - 1.0));
}

struct AssignmentMin {
  double cost = kInf;
  std::vector<double> b;
  bool feasible = false;
};

// Spill `rem` onto the sleeping gaps, respecting the run-then-sleep capacity
// L_i*s_star - l_i of each; the cost is linear so the split never matters.
bool spill_to_sleepers(const ReductionParams& p, const std::vector<std::size_t>& sleepers,
                       double rem, std::vector<double>& b) {
  for (std::size_t i : sleepers) {
    if (rem <= 0.0) break;
    const double cap = p.gap_length[i] * p.critical.s_star - p.level1_volume[i];
    const double take = std::min(rem, std::max(cap, 0.0));
    b[i] = take;
    rem -= take;
  }
  return rem <= 1e-12 * std::max(1.0, p.big_b);
}

// Minimize sum of gap costs for one branch assignment: gaps in `mask` stay
// active for the whole gap (cost H_i), the rest run then sleep (cost F).
// Active gaps share one marginal cost; bisection on that marginal pins the
// common speed, floored at l_i/L_i and capped at s_star, where the sleeping
// branch's constant marginal `ratio` takes over.
AssignmentMin assignment_min(const ReductionParams& p, std::uint64_t mask) {
  const std::size_t n = p.gap_count();
  std::vector<std::size_t> active, sleepers;
  for (std::size_t i = 0; i < n; ++i)
    ((mask >> i) & 1u ? active : sleepers).push_back(i);

  AssignmentMin res;
  res.b.assign(n, 0.0);

  if (active.empty()) {
    if (!spill_to_sleepers(p, sleepers, p.big_b, res.b)) return res;
  } else {
    auto need = [&](double mu) {
      const double s = speed_at_marginal(p.model, mu);
      double tot = 0.0;
      for (std::size_t i : active)
        tot += std::max(0.0, p.gap_length[i] * s - p.level1_volume[i]);
      return tot;
    };
    const double ratio = p.critical.ratio;
    if (need(ratio) < p.big_b) {
      double used = 0.0;
      for (std::size_t i : active) {
        res.b[i] = std::max(0.0, p.gap_length[i] * p.critical.s_star - p.level1_volume[i]);
        used += res.b[i];
      }
      if (!spill_to_sleepers(p, sleepers, p.big_b - used, res.b)) return res;
    } else {
      double lo = 0.0, hi = ratio;
      for (int it = 0; it < 120; ++it) {
        const double mid = 0.5 * (lo + hi);
        (need(mid) < p.big_b ? lo : hi) = mid;
      }
      const double s = speed_at_marginal(p.model, hi);
      double placed = 0.0;
      std::size_t widest = active.front();
      for (std::size_t i : active) {
        res.b[i] = std::max(0.0, p.gap_length[i] * s - p.level1_volume[i]);
        placed += res.b[i];
        if (res.b[i] > res.b[widest]) widest = i;
      }
      res.b[widest] = std::max(0.0, res.b[widest] + (p.big_b - placed));
    }
  }

  double cost = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = p.level1_volume[i] + res.b[i];
    cost += ((mask >> i) & 1u) ? h_curve(p.model, p.gap_length[i], w)
                               : f_line(p.critical, p.c_wake, w);
  }
  res.cost = cost;
  res.feasible = true;
  return res;
}

// Row minima of M[r][m] = prev[m] + gcost[r-m] for a convex gcost: the matrix
// is Monge in (r, m), so the argmin over m is nondecreasing in r and divide
// and conquer applies. Every output is a real candidate value, so any
// monotonicity loss to rounding can only err upward.
void convex_convolve_rec(const std::vector<double>& prev, const std::vector<double>& gcost,
                         std::vector<double>& out, int r_lo, int r_hi, int m_lo, int m_hi) {
  if (r_lo > r_hi) return;
  const int r = r_lo + (r_hi - r_lo) / 2;
  int best_m = -1;
  double best = kInf;
  const int m_max = std::min(m_hi, r);
  for (int m = m_lo; m <= m_max; ++m) {
    const double v = prev[static_cast<std::size_t>(m)] + gcost[static_cast<std::size_t>(r - m)];
    if (v < best) {
      best = v;
      best_m = m;
    }
  }
  out[static_cast<std::size_t>(r)] = best;
  if (best_m < 0) best_m = m_lo;
  convex_convolve_rec(prev, gcost, out, r_lo, r - 1, m_lo, best_m);
  convex_convolve_rec(prev, gcost, out, r + 1, r_hi, best_m, m_hi);
}

std::vector<double> convex_convolve(const std::vector<double>& prev,
                                    const std::vector<double>& gcost) {
  const int R = static_cast<int>(prev.size()) - 1;
  std::vector<double> out(prev.size(), kInf);
  convex_convolve_rec(prev, gcost, out, 0, R, 0, R);
  return out;
}

}  // namespace

double gap_cost(const ReductionParams& p, std::size_t i, double w) {
  if (i >= p.gap_count()) throw std::domain_error("gap index out of range");
  if (w < p.level1_volume[i])
    throw std::domain_error("gap work below the mandatory per-gap volume");
  return lower_envelope(p.model, p.critical, p.c_wake, p.gap_length[i], w);
}

// The search ranges only over per-gap splits of the spanning volume, with the
// separator jobs pinned at s_star: separator windows are the only intervals
// at density s_star (everything else is strictly below), so every optimal
// schedule runs them exactly there, and routing spanning work through one
// would cost marginal P'(s > s_star) > ratio, which the sleep branch of any
// gap already beats.
std::pair<double, GapAllocation> min_energy_structured(const ReductionParams& p) {
  const std::size_t n = p.gap_count();
  if (n > kEnumerationCap)
    throw std::invalid_argument("gap count exceeds the branch enumeration cap");

  const double base =
      static_cast<double>(n + 1) * p.delta * p.critical.p_at_star;
  double best = kInf;
  std::uint64_t best_mask = 0;
  std::vector<double> best_b;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    AssignmentMin am = assignment_min(p, mask);
    if (am.feasible && am.cost < best) {
      best = am.cost;
      best_mask = mask;
      best_b = std::move(am.b);
    }
  }

  GapAllocation alloc;
  alloc.b = std::move(best_b);
  alloc.branch.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    alloc.branch.push_back(((best_mask >> i) & 1u) ? GapBranch::active_whole_gap
                                                   : GapBranch::run_then_sleep);
  return {base + best, alloc};
}

double min_energy_grid(const ReductionParams& p, int resolution) {
  if (resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
  const std::size_t n = p.gap_count();
  const std::size_t R = static_cast<std::size_t>(resolution);

  auto work_at = [&](std::size_t i, std::size_t j) {
    return p.level1_volume[i] +
           (static_cast<double>(j) / static_cast<double>(R)) * p.big_b;
  };

  std::vector<double> value(R + 1);
  for (std::size_t j = 0; j <= R; ++j) value[j] = gap_cost(p, 0, work_at(0, j));

  std::vector<double> branch_f(R + 1), branch_h(R + 1);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j <= R; ++j) {
      const double w = work_at(i, j);
      branch_f[j] = f_line(p.critical, p.c_wake, w);
      branch_h[j] = h_curve(p.model, p.gap_length[i], w);
    }
    std::vector<double> via_f = convex_convolve(value, branch_f);
    std::vector<double> via_h = convex_convolve(value, branch_h);
    for (std::size_t r = 0; r <= R; ++r) value[r] = std::min(via_f[r], via_h[r]);
  }

  const double base =
      static_cast<double>(n + 1) * p.delta * p.critical.p_at_star;
  return base + value[R];
}

std::pair<bool, std::optional<std::vector<std::size_t>>> partition_oracle(
    const PartitionInstance& partition) {
  const long long total = partition.total();
  if (total % 2 != 0) return {false, std::nullopt};
  const long long target = total / 2;
  if (target > 100'000'000LL)
    throw std::invalid_argument("partition values too large for the subset-sum oracle");

  // first_user[s] = index of the value that first reached sum s (-1: unreachable)
  std::vector<int> first_user(static_cast<std::size_t>(target) + 1, -1);
  std::vector<long long> reached{0};
  constexpr int kStart = std::numeric_limits<int>::max();
  first_user[0] = kStart;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    const long long a = partition.values[i];
    const std::size_t known = reached.size();
    for (std::size_t r = 0; r < known; ++r) {
      const long long s = reached[r] + a;
      if (s <= target && first_user[static_cast<std::size_t>(s)] < 0) {
        first_user[static_cast<std::size_t>(s)] = static_cast<int>(i);
        reached.push_back(s);
      }
    }
    if (first_user[static_cast<std::size_t>(target)] >= 0) break;
  }
  if (first_user[static_cast<std::size_t>(target)] < 0) return {false, std::nullopt};

  std::vector<std::size_t> witness;
  long long s = target;
  while (s > 0) {
    const int i = first_user[static_cast<std::size_t>(s)];
    witness.push_back(static_cast<std::size_t>(i));
    s -= partition.values[static_cast<std::size_t>(i)];
  }
  std::sort(witness.begin(), witness.end());
  return {true, witness};
}

double certified_gap_bound(const ReductionParams& p) {
  const double rho = 1.0 / (2.0 * p.k);
  const double pd = power_deriv(p.model, p.d);
  const double linear = 0.5 * rho * (p.critical.ratio - pd);

  double u_lo = p.d, u_hi = p.d, sum_len = 0.0;
  for (std::size_t i = 0; i < p.gap_count(); ++i) {
    u_lo = std::min(u_lo, p.level1_volume[i] / p.gap_length[i]);
    u_hi = std::max(u_hi, (p.level1_volume[i] + p.big_b) / p.gap_length[i]);
    sum_len += p.gap_length[i];
  }
  // P'' is monotone for the power-law family, so the bracket minimum is at an end.
  const double curv = std::min(power_second_deriv(p.model, u_lo),
                               power_second_deriv(p.model, u_hi));
  const double quad = 0.125 * curv * rho * rho / sum_len;
  return std::min(linear, quad);
}

DecisionResult decide(const PartitionInstance& partition, const PowerModel& model,
                      double c_wake, double epsilon, double delta,
                      std::optional<double> tolerance_override) {
  const ReductionParams params = derive_params(partition, model, c_wake, epsilon, delta);
  const CertificateReport cert = certify(params, partition);
  if (!cert.pass)
    throw std::runtime_error("invalid reduction parameters: certificate failed");

  const double thr = threshold(params);
  const double gb = gap_lower_bound(params);
  const double cgb = certified_gap_bound(params);
  const double tol =
      tolerance_override ? *tolerance_override : std::min(1e-9 * thr, 0.25 * cgb);
  auto [min_energy, alloc] = min_energy_structured(params);
  (void)alloc;

  const Verdict sched_verdict =
      min_energy <= thr + tol ? Verdict::partition_exists : Verdict::no_partition;
  auto [oracle_yes, witness] = partition_oracle(partition);
  const Verdict oracle_verdict = oracle_yes ? Verdict::partition_exists : Verdict::no_partition;
  if (sched_verdict != oracle_verdict)
    throw std::runtime_error("equivalence violation: scheduling verdict disagrees with the subset-sum oracle");

  return DecisionResult{min_energy, thr,    gb,             cgb,
                        tol,        sched_verdict, oracle_verdict, std::move(witness)};
}

}  // namespace sleepscale
