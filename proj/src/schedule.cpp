#include "sleepscale/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace sleepscale {

namespace {

constexpr double kSeamSnap = 1e-12;
constexpr double kOverlapSnap = 1e-9;

void check_structure(const SchedulingInstance& instance, const Schedule& schedule) {
  double prev_start = -std::numeric_limits<double>::infinity();
  for (const Segment& s : schedule.segments) {
    if (!(s.start < s.end)) throw std::invalid_argument("schedule: segment with non-positive length");
    if (s.start < prev_start) throw std::invalid_argument("schedule: segments out of order");
    prev_start = s.start;
    if (s.mode == SegmentMode::run) {
      if (!(s.speed > 0.0)) throw std::invalid_argument("schedule: run segment with non-positive speed");
      const bool known = std::any_of(instance.jobs.begin(), instance.jobs.end(),
                                     [&](const Job& j) { return j.id == s.job; });
      if (!known) throw std::invalid_argument("schedule: run segment for unknown job id");
    }
  }
}

struct WorkItem {
  int id;
  double release;
  double deadline;
  double volume;
};

struct DensityPick {
  double lo = 0.0;
  double hi = 0.0;
  double dens = -1.0;
};

DensityPick max_density_over(const std::vector<WorkItem>& items) {
  std::vector<double> starts, ends;
  starts.reserve(items.size());
  ends.reserve(items.size());
  for (const WorkItem& w : items) {
    starts.push_back(w.release);
    ends.push_back(w.deadline);
  }
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());

  DensityPick best;
  for (double s : starts) {
    for (double e : ends) {
      if (!(e > s)) continue;
      double vol = 0.0;
      for (const WorkItem& w : items)
        if (w.release >= s && w.deadline <= e) vol += w.volume;
      if (vol <= 0.0) continue;
      const double dens = vol / (e - s);
      const bool better = dens > best.dens ||
                          (dens == best.dens &&
                           (s < best.lo || (s == best.lo && (e - s) < (best.hi - best.lo))));
      if (better) best = DensityPick{s, e, dens};
    }
  }
  return best;
}

// Preemptive earliest-deadline-first at constant speed within [t1, t2].
std::vector<Segment> edf_at_speed(std::vector<WorkItem> items, double t1, double speed) {
  std::vector<double> remaining;
  remaining.reserve(items.size());
  for (const WorkItem& w : items) remaining.push_back(w.volume);

  std::vector<Segment> out;
  double t = t1;
  std::size_t done = 0;
  while (done < items.size()) {
    int cur = -1;
    double next_release = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (remaining[i] <= 0.0) continue;
      if (items[i].release <= t) {
        if (cur < 0 || items[i].deadline < items[cur].deadline ||
            (items[i].deadline == items[cur].deadline && items[i].id < items[cur].id))
          cur = static_cast<int>(i);
      } else {
        next_release = std::min(next_release, items[i].release);
      }
    }
    if (cur < 0) {  // nothing released yet; the hole becomes idle later
      t = next_release;
      continue;
    }
    const double finish = t + remaining[cur] / speed;
    const double stop = std::min(finish, next_release);
    out.push_back(Segment{t, stop, SegmentMode::run, items[cur].id, speed});
    if (stop == finish) {
      remaining[cur] = 0.0;
      ++done;
    } else {
      remaining[cur] -= speed * (stop - t);
    }
    t = stop;
  }
  return out;
}

// One peeling step: schedule the densest interval, compress it away, recurse.
std::vector<Segment> peel(std::vector<WorkItem> items) {
  if (items.empty()) return {};

  const DensityPick pick = max_density_over(items);
  const double t1 = pick.lo, t2 = pick.hi, len = t2 - t1;

  std::vector<WorkItem> inside, rest;
  for (const WorkItem& w : items) {
    if (w.release >= t1 && w.deadline <= t2) inside.push_back(w);
    else rest.push_back(w);
  }

  std::vector<Segment> out = edf_at_speed(std::move(inside), t1, pick.dens);

  auto compress = [&](double t) {
    if (t <= t1) return t;
    if (t >= t2) return t - len;
    return t1;
  };
  for (WorkItem& w : rest) {
    w.release = compress(w.release);
    w.deadline = compress(w.deadline);
  }

  for (const Segment& s : peel(std::move(rest))) {
    if (s.end <= t1) {
      out.push_back(s);
    } else if (s.start >= t1) {
      out.push_back(Segment{s.start + len, s.end + len, s.mode, s.job, s.speed});
    } else {  // straddles the excised block
      out.push_back(Segment{s.start, t1, s.mode, s.job, s.speed});
      out.push_back(Segment{t2, s.end + len, s.mode, s.job, s.speed});
    }
  }
  return out;
}

// Sort run segments, snap sub-kOverlapSnap seams, fill the rest with idle.
// Rounding drift across peel levels can leave seams of a few ulps in either
// direction; snapping moves boundaries by far less than the volume tolerance.
Schedule assemble(std::vector<Segment> runs, double horizon) {
  std::sort(runs.begin(), runs.end(), [](const Segment& a, const Segment& b) {
    return a.start < b.start || (a.start == b.start && a.end < b.end);
  });
  Schedule sched;
  sched.horizon = horizon;
  double t = 0.0;
  for (Segment s : runs) {
    s.end = std::min(s.end, horizon);
    if (s.start - t > kSeamSnap) {
      sched.segments.push_back(Segment{t, s.start, SegmentMode::idle});
      t = s.start;
    }
    if (t - s.start > kOverlapSnap) throw std::logic_error("assemble: overlapping run segments");
    s.start = t;
    if (s.end - s.start <= kSeamSnap) continue;
    sched.segments.push_back(s);
    t = s.end;
  }
  if (horizon - t > kSeamSnap)
    sched.segments.push_back(Segment{t, horizon, SegmentMode::idle});
  else if (!sched.segments.empty())
    sched.segments.back().end = horizon;
  return sched;
}

}  // namespace

std::vector<Violation> validate(const SchedulingInstance& instance, const Schedule& schedule) {
  check_structure(instance, schedule);
  std::vector<Violation> out;
  const double tol_t = kFeasibilityTol * std::max(1.0, schedule.horizon);

  double t = 0.0;
  for (const Segment& s : schedule.segments) {
    if (s.start - t > tol_t)
      out.push_back({ViolationKind::coverage_gap, -1, t, s.start, s.start - t});
    if (t - s.start > tol_t)
      out.push_back({ViolationKind::overlap, -1, s.start, t, t - s.start});
    t = s.end;
  }
  if (std::abs(schedule.horizon - t) > tol_t)
    out.push_back({ViolationKind::coverage_gap, -1, t, schedule.horizon,
                   std::abs(schedule.horizon - t)});

  for (const Job& job : instance.jobs) {
    double got = 0.0;
    double breach = 0.0;
    double breach_lo = 0.0, breach_hi = 0.0;
    for (const Segment& s : schedule.segments) {
      if (s.mode != SegmentMode::run || s.job != job.id) continue;
      got += s.speed * (s.end - s.start);
      const double over = std::max(job.release - s.start, s.end - job.deadline);
      if (over > breach) {
        breach = over;
        breach_lo = s.start;
        breach_hi = s.end;
      }
    }
    if (breach > tol_t)
      out.push_back({ViolationKind::window_breach, job.id, breach_lo, breach_hi, breach});
    if (std::abs(got - job.volume) > kFeasibilityTol * job.volume)
      out.push_back({ViolationKind::volume_shortfall, job.id, job.release, job.deadline,
                     std::abs(got - job.volume)});
  }
  return out;
}

EnergyReport energy(const Schedule& schedule, const PowerModel& model, double c_wake) {
  EnergyReport rep;
  for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
    const Segment& s = schedule.segments[i];
    const double dt = s.end - s.start;
    switch (s.mode) {
      case SegmentMode::run:
        rep.active_energy += power(model, s.speed) * dt;
        break;
      case SegmentMode::idle:
        rep.active_energy += power(model, 0.0) * dt;
        break;
      case SegmentMode::sleep:
        if (i + 1 < schedule.segments.size() &&
            schedule.segments[i + 1].mode != SegmentMode::sleep)
          ++rep.wake_count;
        break;
    }
  }
  rep.wake_energy = rep.wake_count * c_wake;
  rep.total = rep.active_energy + rep.wake_energy;
  return rep;
}

EnergyReport energy(const Schedule& schedule, const PowerModel& model, double c_wake,
                    const SchedulingInstance& instance) {
  EnergyReport rep = energy(schedule, model, c_wake);
  std::map<int, int> level_of;
  for (const Job& j : instance.jobs) level_of[j.id] = static_cast<int>(j.level);

  int last_run_level = -1;
  for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
    const Segment& s = schedule.segments[i];
    if (s.mode == SegmentMode::run) {
      auto it = level_of.find(s.job);
      if (it == level_of.end()) continue;
      last_run_level = it->second;
      rep.per_level[static_cast<std::size_t>(it->second)] +=
          power(model, s.speed) * (s.end - s.start);
    } else if (s.mode == SegmentMode::sleep) {
      const bool wakes = i + 1 < schedule.segments.size() &&
                         schedule.segments[i + 1].mode != SegmentMode::sleep;
      if (!wakes) continue;
      int lvl = last_run_level;
      if (lvl < 0) {  // leading sleep: charge the job that wakes up
        for (std::size_t n = i + 1; n < schedule.segments.size(); ++n)
          if (schedule.segments[n].mode == SegmentMode::run) {
            auto it = level_of.find(schedule.segments[n].job);
            if (it != level_of.end()) lvl = it->second;
            break;
          }
      }
      if (lvl >= 0) rep.per_level[static_cast<std::size_t>(lvl)] += c_wake;
    }
  }
  return rep;
}

double density(const SchedulingInstance& instance, std::pair<double, double> interval) {
  const auto [lo, hi] = interval;
  if (!(hi > lo)) throw std::domain_error("density: interval must have positive length");
  double vol = 0.0;
  for (const Job& j : instance.jobs)
    if (j.release >= lo && j.deadline <= hi) vol += j.volume;
  return vol / (hi - lo);
}

std::pair<std::pair<double, double>, double> max_density_interval(const SchedulingInstance& instance) {
  if (instance.jobs.empty())
    throw std::invalid_argument("max_density_interval: instance has no jobs");
  std::vector<WorkItem> items;
  items.reserve(instance.jobs.size());
  for (const Job& j : instance.jobs) items.push_back({j.id, j.release, j.deadline, j.volume});
  const DensityPick pick = max_density_over(items);
  return {{pick.lo, pick.hi}, pick.dens};
}

Schedule yds(const SchedulingInstance& instance) {
  if (instance.jobs.empty()) throw std::invalid_argument("yds: instance has no jobs");
  std::vector<WorkItem> items;
  items.reserve(instance.jobs.size());
  for (const Job& j : instance.jobs) items.push_back({j.id, j.release, j.deadline, j.volume});
  return assemble(peel(std::move(items)), instance.horizon);
}

}  // namespace sleepscale
