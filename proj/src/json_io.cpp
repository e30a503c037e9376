#include "sleepscale/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sleepscale {

using nlohmann::json;

namespace {

const char* mode_name(SegmentMode m) {
  switch (m) {
    case SegmentMode::run: return "run";
    case SegmentMode::idle: return "idle";
    case SegmentMode::sleep: return "sleep";
  }
  return "?";
}

SegmentMode mode_from(const std::string& s) {
  if (s == "run") return SegmentMode::run;
  if (s == "idle") return SegmentMode::idle;
  if (s == "sleep") return SegmentMode::sleep;
  throw std::invalid_argument("unknown segment mode: " + s);
}

const char* violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::volume_shortfall: return "volume_shortfall";
    case ViolationKind::window_breach: return "window_breach";
    case ViolationKind::overlap: return "overlap";
    case ViolationKind::coverage_gap: return "coverage_gap";
  }
  return "?";
}

}  // namespace

std::string verdict_name(Verdict v) {
  return v == Verdict::partition_exists ? "partition_exists" : "no_partition";
}

void to_json(json& j, const PowerModel& m) {
  j = json{{"scale", m.scale}, {"exponent", m.exponent}, {"static", m.static_power}};
}

void to_json(json& j, const CriticalPoint& c) {
  j = json{{"s_star", c.s_star}, {"p_at_star", c.p_at_star}, {"ratio", c.ratio}};
}

void to_json(json& j, const PartitionInstance& p) { j = p.values; }

void to_json(json& j, const Job& job) {
  j = json{{"id", job.id},
           {"level", static_cast<int>(job.level)},
           {"release", job.release},
           {"deadline", job.deadline},
           {"volume", job.volume}};
}

void to_json(json& j, const SchedulingInstance& inst) {
  j = json{{"horizon", inst.horizon}, {"jobs", inst.jobs}};
}

void to_json(json& j, const ReductionParams& p) {
  j = json{{"model", p.model},
           {"critical", p.critical},
           {"c_wake", p.c_wake},
           {"epsilon", p.epsilon},
           {"delta", p.delta},
           {"d", p.d},
           {"e", p.e},
           {"f", p.f},
           {"k", p.k},
           {"big_b", p.big_b},
           {"gap_length", p.gap_length},
           {"level1_volume", p.level1_volume},
           {"root_low", p.root_low},
           {"root_high", p.root_high}};
}

void to_json(json& j, const CertificateCheck& c) {
  j = json{{"id", c.id}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"margin", c.margin}, {"pass", c.pass}};
}

void to_json(json& j, const CertificateReport& r) {
  j = json{{"checks", r.checks}, {"pass", r.pass}};
}

void to_json(json& j, const Segment& s) {
  j = json{{"start", s.start}, {"end", s.end}, {"mode", mode_name(s.mode)}};
  if (s.mode == SegmentMode::run) {
    j["job"] = s.job;
    j["speed"] = s.speed;
  }
}

void to_json(json& j, const Schedule& s) {
  j = json{{"horizon", s.horizon}, {"segments", s.segments}};
}

void to_json(json& j, const EnergyReport& r) {
  j = json{{"active_energy", r.active_energy},
           {"wake_count", r.wake_count},
           {"wake_energy", r.wake_energy},
           {"total", r.total},
           {"per_level", r.per_level}};
}

void to_json(json& j, const Violation& v) {
  j = json{{"kind", violation_name(v.kind)},
           {"job", v.job},
           {"lo", v.lo},
           {"hi", v.hi},
           {"magnitude", v.magnitude}};
}

void to_json(json& j, const GapAllocation& a) {
  std::vector<std::string> names;
  names.reserve(a.branch.size());
  for (GapBranch b : a.branch)
    names.emplace_back(b == GapBranch::active_whole_gap ? "active_whole_gap" : "run_then_sleep");
  j = json{{"b", a.b}, {"branch", names}};
}

void to_json(json& j, const DecisionResult& r) {
  j = json{{"min_energy", r.min_energy},
           {"threshold", r.threshold},
           {"gap_bound", r.gap_bound},
           {"certified_gap_bound", r.certified_gap_bound},
           {"decision_tolerance", r.decision_tolerance},
           {"verdict", verdict_name(r.verdict)},
           {"oracle_verdict", verdict_name(r.oracle_verdict)}};
  if (r.witness) {
    j["witness"] = *r.witness;
  } else {
    j["witness"] = nullptr;
  }
}

PowerModel power_model_from_json(const json& j) {
  return PowerModel(j.at("scale").get<double>(), j.at("exponent").get<double>(),
                    j.at("static").get<double>());
}

PartitionInstance partition_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("partition JSON must be an array of integers");
  return PartitionInstance(j.get<std::vector<long long>>());
}

SchedulingInstance instance_from_json(const json& j) {
  SchedulingInstance inst;
  inst.horizon = j.at("horizon").get<double>();
  for (const json& job : j.at("jobs")) {
    const int level = job.at("level").get<int>();
    if (level < 0 || level > 2) throw std::invalid_argument("job level must be 0, 1 or 2");
    Job parsed{job.at("id").get<int>(), static_cast<JobLevel>(level),
               job.at("release").get<double>(), job.at("deadline").get<double>(),
               job.at("volume").get<double>()};
    if (!(parsed.release < parsed.deadline))
      throw std::invalid_argument("job release must precede its deadline");
    if (!(parsed.volume > 0.0)) throw std::invalid_argument("job volume must be positive");
    if (parsed.release < 0.0 || parsed.deadline > inst.horizon)
      throw std::invalid_argument("job window must lie inside [0, horizon]");
    inst.jobs.push_back(parsed);
  }
  return inst;
}

Schedule schedule_from_json(const json& j) {
  Schedule s;
  s.horizon = j.at("horizon").get<double>();
  for (const json& seg : j.at("segments")) {
    Segment parsed{seg.at("start").get<double>(), seg.at("end").get<double>(),
                   mode_from(seg.at("mode").get<std::string>())};
    if (parsed.mode == SegmentMode::run) {
      parsed.job = seg.at("job").get<int>();
      parsed.speed = seg.at("speed").get<double>();
    }
    s.segments.push_back(parsed);
  }
  return s;
}

ReductionParams params_from_json(const json& j) {
  ReductionParams p{power_model_from_json(j.at("model")),
                    CriticalPoint{j.at("critical").at("s_star").get<double>(),
                                  j.at("critical").at("p_at_star").get<double>(),
                                  j.at("critical").at("ratio").get<double>()},
                    j.at("c_wake").get<double>(),
                    j.at("epsilon").get<double>(),
                    j.at("delta").get<double>(),
                    j.at("d").get<double>(),
                    j.at("e").get<double>(),
                    j.at("f").get<double>(),
                    j.at("k").get<double>(),
                    j.at("big_b").get<double>(),
                    j.at("gap_length").get<std::vector<double>>(),
                    j.at("level1_volume").get<std::vector<double>>(),
                    j.at("root_low").get<std::vector<double>>(),
                    j.at("root_high").get<std::vector<double>>()};
  const std::size_t n = p.gap_length.size();
  if (p.level1_volume.size() != n || p.root_low.size() != n || p.root_high.size() != n)
    throw std::invalid_argument("params JSON: per-gap arrays disagree on length");
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace sleepscale
