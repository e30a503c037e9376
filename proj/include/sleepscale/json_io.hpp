#pragma once

#include <string>

#include "json.hpp"
#include "sleepscale/instance.hpp"
#include "sleepscale/power_model.hpp"
#include "sleepscale/reduction.hpp"
#include "sleepscale/schedule.hpp"
#include "sleepscale/solver.hpp"

namespace sleepscale {

// Serializers (ADL hooks for nlohmann::json). Keys are fixed and doubles are
// emitted in the shortest form that parses back to the identical bits, so
// output is byte-stable across runs.
void to_json(nlohmann::json& j, const PowerModel& m);
void to_json(nlohmann::json& j, const CriticalPoint& c);
void to_json(nlohmann::json& j, const PartitionInstance& p);
void to_json(nlohmann::json& j, const Job& job);
void to_json(nlohmann::json& j, const SchedulingInstance& inst);
void to_json(nlohmann::json& j, const ReductionParams& p);
void to_json(nlohmann::json& j, const CertificateCheck& c);
void to_json(nlohmann::json& j, const CertificateReport& r);
void to_json(nlohmann::json& j, const Segment& s);
void to_json(nlohmann::json& j, const Schedule& s);
void to_json(nlohmann::json& j, const EnergyReport& r);
void to_json(nlohmann::json& j, const Violation& v);
void to_json(nlohmann::json& j, const GapAllocation& a);
void to_json(nlohmann::json& j, const DecisionResult& r);

// Parsers for the types with validating constructors.
PowerModel power_model_from_json(const nlohmann::json& j);
PartitionInstance partition_from_json(const nlohmann::json& j);
SchedulingInstance instance_from_json(const nlohmann::json& j);
Schedule schedule_from_json(const nlohmann::json& j);
ReductionParams params_from_json(const nlohmann::json& j);

std::string verdict_name(Verdict v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace sleepscale
