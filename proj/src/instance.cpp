#include "sleepscale/instance.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sleepscale {

PartitionInstance::PartitionInstance(std::vector<long long> v) : values(std::move(v)) {
  if (values.empty()) throw std::invalid_argument("partition instance: needs at least one value");
  for (long long a : values)
    if (a < 1) throw std::invalid_argument("partition instance: values must be positive integers");
  if (max_value() < 2)
    throw std::invalid_argument("partition instance: requires a_max >= 2");
}

long long PartitionInstance::total() const {
  return std::accumulate(values.begin(), values.end(), 0LL);
}

long long PartitionInstance::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

}  // namespace sleepscale
