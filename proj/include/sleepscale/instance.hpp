#pragma once

#include <cstddef>
#include <vector>

namespace sleepscale {

/// Positive integers to be split into two halves of equal sum.
struct PartitionInstance {
  std::vector<long long> values;

  /// Throws std::invalid_argument unless the list is nonempty, every value
  /// is >= 1 and the maximum is >= 2.
  explicit PartitionInstance(std::vector<long long> v);

  std::size_t size() const { return values.size(); }
  long long total() const;
  long long max_value() const;
};

/// 0: the single job spanning the whole horizon; 1: one job per gap;
/// 2: the full-density separator jobs between gaps.
enum class JobLevel : int { spanning = 0, per_gap = 1, separator = 2 };

struct Job {
  int id;
  JobLevel level;
  double release;
  double deadline;
  double volume;

  double density() const { return volume / (deadline - release); }
};

struct SchedulingInstance {
  std::vector<Job> jobs;
  double horizon = 0.0;
};

}  // namespace sleepscale
