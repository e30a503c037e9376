#include "sleepscale/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sleepscale {

namespace {

constexpr double kIdentityTol = 1e-9;
constexpr double kEpsilonGuard = 1e-6;

// Timeline anchors: start of gap i and release of separator j, computed the
// same way everywhere so windows tile bit-exactly.
struct Timeline {
  std::vector<double> sep_release;  // t_j, j = 0..n
  std::vector<double> gap_start;    // t_{i-1} + delta, i = 1..n
  double horizon;
};

Timeline layout(const ReductionParams& p) {
  Timeline tl;
  const std::size_t n = p.gap_count();
  double t = 0.0;
  tl.sep_release.push_back(t);
  for (std::size_t i = 0; i < n; ++i) {
    const double gs = t + p.delta;
    tl.gap_start.push_back(gs);
    t = gs + p.gap_length[i];
    tl.sep_release.push_back(t);
  }
  tl.horizon = t + p.delta;
  return tl;
}

}  // namespace

ReductionParams derive_params(const PartitionInstance& partition, const PowerModel& model,
                              double c_wake, double epsilon, double delta) {
  if (!(c_wake > 0.0)) throw std::invalid_argument("c_wake must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(epsilon >= kEpsilonGuard && epsilon <= 0.5 - kEpsilonGuard))
    throw std::invalid_argument("epsilon must lie in (0, 1/2), guard band 1e-6");

  const CriticalPoint critical = critical_speed(model);
  const double d = (1.0 - epsilon) * critical.s_star;
  const double rd = r_func(model, critical, d);
  const double e = c_wake / rd;
  if (!(rd > 0.0) || !std::isfinite(e))
    throw std::invalid_argument("epsilon too small for this model");
  const double f = c_wake / (model.static_power * static_cast<double>(partition.max_value()));
  const double k = -r_deriv(model, critical, d) / (f * rd);
  const double big_b = static_cast<double>(partition.total()) / (2.0 * k);

  ReductionParams p{model, critical, c_wake, epsilon, delta, d, e, f, k, big_b, {}, {}, {}, {}};
  for (std::size_t i = 0; i < partition.size(); ++i) {
    const double a = static_cast<double>(partition.values[i]);
    const double L = e - f * a;
    if (!(L > 0.0)) throw std::invalid_argument("derived gap length is not positive");
    const double l = d * L - a / k;
    const GapCurves gc =
        make_gap_curves(model, critical, c_wake, L, static_cast<int>(i));
    p.gap_length.push_back(L);
    p.level1_volume.push_back(l);
    p.root_low.push_back(gc.root_low);
    p.root_high.push_back(gc.root_high);
  }
  return p;
}

SchedulingInstance build_instance(const ReductionParams& params, const PartitionInstance& partition) {
  if (params.gap_count() != partition.size())
    throw std::invalid_argument("params and partition instance disagree on size");
  const std::size_t n = params.gap_count();
  const Timeline tl = layout(params);

  SchedulingInstance inst;
  inst.horizon = tl.horizon;
  inst.jobs.push_back(Job{0, JobLevel::spanning, 0.0, tl.horizon, params.big_b});
  for (std::size_t i = 0; i < n; ++i)
    inst.jobs.push_back(Job{static_cast<int>(i + 1), JobLevel::per_gap, tl.gap_start[i],
                            tl.sep_release[i + 1], params.level1_volume[i]});
  for (std::size_t j = 0; j <= n; ++j)
    inst.jobs.push_back(Job{static_cast<int>(n + 1 + j), JobLevel::separator, tl.sep_release[j],
                            tl.sep_release[j] + params.delta,
                            params.delta * params.critical.s_star});
  return inst;
}

CertificateReport certify(const ReductionParams& p, const PartitionInstance& partition) {
  CertificateReport rep;
  const PowerModel& m = p.model;
  const CriticalPoint& c = p.critical;
  const std::size_t n = p.gap_count();
  const double pd = power_deriv(m, p.d);
  const double rd = r_func(m, c, p.d);

  auto push = [&rep](std::string id, double lhs, double rhs, double margin, bool pass) {
    rep.checks.push_back(CertificateCheck{std::move(id), lhs, rhs, margin, pass});
  };

  {  // C1: P'(s) < ratio < P(s)/s strictly below s_star; all equal at s_star
    double worst = std::numeric_limits<double>::infinity();
    double worst_lhs = 0.0, worst_rhs = 0.0;
    for (int j = 1; j <= 1000; ++j) {
      const double s = c.s_star * j / 1001.0;
      const double per_work = power(m, s) / s;
      const double lo_gap = c.ratio - power_deriv(m, s);
      const double hi_gap = per_work - c.ratio;
      if (std::min(lo_gap, hi_gap) < worst) {
        worst = std::min(lo_gap, hi_gap);
        worst_lhs = power_deriv(m, s);
        worst_rhs = per_work;
      }
    }
    const double at_star = std::abs(power_deriv(m, c.s_star) - c.ratio);
    push("C1", worst_lhs, worst_rhs, worst,
         worst > 0.0 && at_star <= kIdentityTol * std::max(1.0, c.ratio));
  }
  {  // C2: R(d) < epsilon * P(0)
    const double rhs = p.epsilon * m.static_power;
    push("C2", rd, rhs, rhs - rd, rd < rhs);
  }
  {  // C3: R(d)/|R'(d)| < epsilon * s_star
    const double lhs = rd / std::abs(r_deriv(m, c, p.d));
    const double rhs = p.epsilon * c.s_star;
    push("C3", lhs, rhs, rhs - lhs, lhs < rhs);
  }
  {  // C4: gap lengths and per-gap volumes positive
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      lo = std::min({lo, p.gap_length[i], p.level1_volume[i]});
    push("C4", lo, 0.0, lo, lo > 0.0);
  }
  {  // C5: all densities below s_star
    double dens = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      dens = std::max(dens, p.level1_volume[i] / p.gap_length[i]);
    const double sum_l = std::accumulate(p.level1_volume.begin(), p.level1_volume.end(), 0.0);
    const double sum_L = std::accumulate(p.gap_length.begin(), p.gap_length.end(), 0.0);
    dens = std::max(dens, (p.big_b + sum_l) / sum_L);
    push("C5", dens, c.s_star, c.s_star - dens, dens < c.s_star);
  }
  {  // C6: two crossings per gap: G(0) > 0 and G(L_i s_star) = -c_wake
    double g0 = std::numeric_limits<double>::infinity();
    double eq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double L = p.gap_length[i];
      g0 = std::min(g0, h_curve(m, L, 0.0) - f_line(c, p.c_wake, 0.0));
      const double knee = L * c.s_star;
      eq = std::max(eq, std::abs(h_curve(m, L, knee) - f_line(c, p.c_wake, knee) + p.c_wake));
    }
    push("C6", g0, 0.0, g0, g0 > 0.0 && eq <= kIdentityTol * std::max(1.0, p.c_wake));
  }
  {  // C7: tangent and chord slope at the merge point both equal P'(d)
    double dev = 0.0;
    double worst_lhs = pd;
    for (std::size_t i = 0; i < n; ++i) {
      const double merge = p.level1_volume[i] +
                           static_cast<double>(partition.values[i]) / p.k;
      const double tangent = power_deriv(m, merge / p.gap_length[i]);
      const double chord =
          slope_from(m, c, p.c_wake, p.gap_length[i], p.level1_volume[i], merge);
      for (double v : {tangent, chord}) {
        if (std::abs(v - pd) > dev) {
          dev = std::abs(v - pd);
          worst_lhs = v;
        }
      }
    }
    push("C7", worst_lhs, pd, dev, dev <= kIdentityTol * std::max(1.0, pd));
  }
  {  // C8: per-gap volume sits below the first crossing
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      slack = std::min(slack, p.root_low[i] - p.level1_volume[i]);
    push("C8", slack, 0.0, slack, slack > 0.0);
  }
  {  // C9: merge point strictly between the crossings
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double merge = p.level1_volume[i] +
                           static_cast<double>(partition.values[i]) / p.k;
      slack = std::min({slack, merge - p.root_low[i], p.root_high[i] - merge});
    }
    push("C9", slack, 0.0, slack, slack > 0.0);
  }

  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(),
                         [](const CertificateCheck& ch) { return ch.pass; });
  return rep;
}

double threshold(const ReductionParams& p) {
  const double n1 = static_cast<double>(p.gap_count() + 1);
  double sum_f = 0.0;
  for (double l : p.level1_volume) sum_f += f_line(p.critical, p.c_wake, l);
  return n1 * p.delta * p.critical.p_at_star + sum_f + p.big_b * power_deriv(p.model, p.d);
}

Schedule yes_schedule(const ReductionParams& params, const PartitionInstance& partition,
                      const std::vector<std::size_t>& subset) {
  const std::size_t n = params.gap_count();
  long long subset_sum = 0;
  std::vector<bool> merged(n, false);
  for (std::size_t i : subset) {
    if (i >= n) throw std::invalid_argument("witness index out of range");
    if (merged[i]) throw std::invalid_argument("witness index repeated");
    merged[i] = true;
    subset_sum += partition.values[i];
  }
  if (2 * subset_sum != partition.total())
    throw std::invalid_argument("subset is not a partition witness");

  const Timeline tl = layout(params);
  const double s_star = params.critical.s_star;
  Schedule sched;
  sched.horizon = tl.horizon;
  for (std::size_t i = 0; i < n; ++i) {
    const int sep_id = static_cast<int>(n + 1 + i);
    sched.segments.push_back(
        Segment{tl.sep_release[i], tl.gap_start[i], SegmentMode::run, sep_id, s_star});
    const double gs = tl.gap_start[i];
    const double ge = tl.sep_release[i + 1];
    const int gap_job = static_cast<int>(i + 1);
    if (merged[i]) {
      // per-gap job first (earlier deadline), then the spanning share, both at d
      const double split = gs + params.level1_volume[i] / params.d;
      sched.segments.push_back(Segment{gs, split, SegmentMode::run, gap_job, params.d});
      sched.segments.push_back(Segment{split, ge, SegmentMode::run, 0, params.d});
    } else {
      const double split = gs + params.level1_volume[i] / s_star;
      sched.segments.push_back(Segment{gs, split, SegmentMode::run, gap_job, s_star});
      sched.segments.push_back(Segment{split, ge, SegmentMode::sleep});
    }
  }
  sched.segments.push_back(Segment{tl.sep_release[n], tl.horizon, SegmentMode::run,
                                   static_cast<int>(2 * n + 1), s_star});
  return sched;
}

double gap_lower_bound(const ReductionParams& p) {
  return (1.0 / (2.0 * p.k)) * (p.critical.ratio - power_deriv(p.model, p.d));
}

}  // namespace sleepscale
