#pragma once

#include <array>
#include <utility>
#include <vector>

#include "sleepscale/instance.hpp"
#include "sleepscale/power_model.hpp"

namespace sleepscale {

enum class SegmentMode : int { run = 0, idle = 1, sleep = 2 };

/// One piece of the piecewise-constant machine state. job/speed are only
/// meaningful for run segments (speed > 0).
struct Segment {
  double start;
  double end;
  SegmentMode mode;
  int job = -1;
  double speed = 0.0;
};

/// Time-ordered segments tiling [0, horizon] with no gaps or overlaps.
struct Schedule {
  std::vector<Segment> segments;
  double horizon = 0.0;
};

enum class ViolationKind : int {
  volume_shortfall = 0,
  window_breach = 1,
  overlap = 2,
  coverage_gap = 3,
};

struct Violation {
  ViolationKind kind;
  int job = -1;  // -1 for interval findings
  double lo = 0.0;
  double hi = 0.0;
  double magnitude = 0.0;
};

struct EnergyReport {
  double active_energy = 0.0;
  int wake_count = 0;
  double wake_energy = 0.0;
  double total = 0.0;
  std::array<double, 3> per_level{0.0, 0.0, 0.0};
};

inline constexpr double kFeasibilityTol = 1e-9;

/// Empty iff every job receives its full volume (relative 1e-9) inside its
/// window and the segments tile [0, horizon]. Structurally malformed input
/// (negative lengths, unsorted segments, runs without a job or with
/// non-positive speed, unknown job ids) throws std::invalid_argument.
std::vector<Violation> validate(const SchedulingInstance& instance, const Schedule& schedule);

/// Run segments pay P(speed)*(end-start), idle pays P(0)*(end-start), sleep
/// pays nothing; every sleep->active transition inside the horizon pays
/// c_wake. The machine starts active, so the first activation is free.
EnergyReport energy(const Schedule& schedule, const PowerModel& model, double c_wake);

/// As above, and also itemizes energy by job level: each run segment goes to
/// its job's level and each wake-up to the job that ran right before the
/// sleep. Idle energy is left unattributed.
EnergyReport energy(const Schedule& schedule, const PowerModel& model, double c_wake,
                    const SchedulingInstance& instance);

/// Total volume of the jobs whose windows lie entirely inside the interval,
/// divided by the interval length. Throws std::domain_error on empty intervals.
double density(const SchedulingInstance& instance, std::pair<double, double> interval);

/// Maximum of density() over all intervals with endpoints at releases and
/// deadlines; ties broken by earliest start, then shortest length.
std::pair<std::pair<double, double>, double> max_density_interval(const SchedulingInstance& instance);

/// Iterative max-density scheduler: peel the densest interval, schedule the
/// jobs fully inside it earliest-deadline-first at the interval density,
/// excise the interval from the timeline and repeat. Output has run and idle
/// segments only (it never sleeps).
Schedule yds(const SchedulingInstance& instance);

}  // namespace sleepscale
