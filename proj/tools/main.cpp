#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sleepscale/json_io.hpp"
#include "sleepscale/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool verbose_logging() {
  const char* v = std::getenv("SLEEPSCALE_LOG");
  if (v == nullptr) return false;
  const std::string s(v);
  return s == "debug" || s == "trace" || s == "verbose";
}

void log_note(const std::string& msg) {
  if (verbose_logging()) std::cerr << "[sleepscale] " << msg << "\n";
}

struct RunConfig {
  double model_scale = 1.0;
  double model_exponent = 2.0;
  double model_static = 1.0;
  double c_wake = 1.0;
  double epsilon = 0.25;
  double delta = 1.0;
  long long seed = 0;  // reserved for randomized experiment generation
  std::string out_dir = ".";
  int grid_resolution = 0;
  double decision_tolerance = std::numeric_limits<double>::quiet_NaN();

  sleepscale::PowerModel model() const {
    return sleepscale::PowerModel(model_scale, model_exponent, model_static);
  }
};

void add_config_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--model-scale", cfg.model_scale, "Power model scale")->capture_default_str();
  cmd->add_option("--model-exponent", cfg.model_exponent, "Power model exponent")->capture_default_str();
  cmd->add_option("--model-static", cfg.model_static, "Power model static term, P(0)")->capture_default_str();
  cmd->add_option("--c-wake", cfg.c_wake, "Energy per sleep->active transition")->capture_default_str();
  cmd->add_option("--epsilon", cfg.epsilon, "Run-speed detuning in (0, 1/2)")->capture_default_str();
  cmd->add_option("--delta", cfg.delta, "Separator job window length")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Seed for randomized experiment generation")->capture_default_str();
  cmd->add_option("--out-dir", cfg.out_dir, "Directory for output artifacts")->capture_default_str();
  cmd->add_option("--grid-resolution", cfg.grid_resolution,
                  "If > 0, decide also reports the lattice-oracle minimum at this resolution")
      ->capture_default_str();
  cmd->add_option("--decision-tolerance", cfg.decision_tolerance,
                  "Override the decision tolerance (testing hook; a negative value forces "
                  "an equivalence-violation error on yes-instances)");
}

sleepscale::PartitionInstance read_partition(const std::string& path) {
  std::string text = sleepscale::read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw std::invalid_argument("empty partition file: " + path);
  if (text[first] == '[') return sleepscale::partition_from_json(json::parse(text));

  std::vector<long long> values;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("partition file: not an integer: '" + tok + "'");
    }
    if (used != tok.size())
      throw std::invalid_argument("partition file: not an integer: '" + tok + "'");
    values.push_back(v);
  }
  return sleepscale::PartitionInstance(std::move(values));
}

void write_json(const RunConfig& cfg, const std::string& name, const json& j) {
  fs::create_directories(cfg.out_dir);
  const std::string path = (fs::path(cfg.out_dir) / name).string();
  sleepscale::write_file(path, j.dump(2) + "\n");
  log_note("wrote " + path);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int cmd_reduce(const RunConfig& cfg, const std::string& partition_path, bool certificate_only) {
  const auto partition = read_partition(partition_path);
  const auto params = sleepscale::derive_params(partition, cfg.model(), cfg.c_wake,
                                                cfg.epsilon, cfg.delta);
  const auto cert = sleepscale::certify(params, partition);
  if (!certificate_only) {
    write_json(cfg, "params.json", params);
    write_json(cfg, "instance.json", sleepscale::build_instance(params, partition));
  }
  write_json(cfg, "certificate.json", cert);
  std::cout << json(cert).dump(2) << "\n";
  return cert.pass ? 0 : 1;
}

int cmd_decide(const RunConfig& cfg, const std::string& partition_path) {
  const auto partition = read_partition(partition_path);
  std::optional<double> override;
  if (!std::isnan(cfg.decision_tolerance)) override = cfg.decision_tolerance;
  const auto result = sleepscale::decide(partition, cfg.model(), cfg.c_wake, cfg.epsilon,
                                         cfg.delta, override);
  json j = result;
  if (cfg.grid_resolution > 0) {
    const auto params = sleepscale::derive_params(partition, cfg.model(), cfg.c_wake,
                                                  cfg.epsilon, cfg.delta);
    j["min_energy_grid"] = sleepscale::min_energy_grid(params, cfg.grid_resolution);
  }
  write_json(cfg, "decision.json", j);
  std::cout << j.dump(2) << "\n";
  return result.verdict == sleepscale::Verdict::partition_exists ? 0 : 3;
}

// Witness instances get the explicit threshold-matching schedule; the rest get
// the solver's optimal allocation rendered as per-gap work blocks and sleeps.
sleepscale::Schedule render_allocation(const sleepscale::ReductionParams& params,
                                       const sleepscale::GapAllocation& alloc) {
  const std::size_t n = params.gap_count();
  const double s_star = params.critical.s_star;
  sleepscale::Schedule sched;

  double t = 0.0;
  std::vector<double> sep_release;
  std::vector<double> gap_start;
  sep_release.push_back(t);
  for (std::size_t i = 0; i < n; ++i) {
    gap_start.push_back(t + params.delta);
    t = gap_start.back() + params.gap_length[i];
    sep_release.push_back(t);
  }
  sched.horizon = t + params.delta;

  for (std::size_t i = 0; i < n; ++i) {
    const int sep_id = static_cast<int>(n + 1 + i);
    sched.segments.push_back({sep_release[i], gap_start[i], sleepscale::SegmentMode::run,
                              sep_id, s_star});
    const double gs = gap_start[i];
    const double ge = sep_release[i + 1];
    const int gap_job = static_cast<int>(i + 1);
    const double w = params.level1_volume[i] + alloc.b[i];
    if (alloc.branch[i] == sleepscale::GapBranch::active_whole_gap) {
      const double speed = w / params.gap_length[i];
      const double split = gs + params.level1_volume[i] / speed;
      sched.segments.push_back({gs, split, sleepscale::SegmentMode::run, gap_job, speed});
      if (ge > split)
        sched.segments.push_back({split, ge, sleepscale::SegmentMode::run, 0, speed});
    } else {
      const double split = gs + params.level1_volume[i] / s_star;
      sched.segments.push_back({gs, split, sleepscale::SegmentMode::run, gap_job, s_star});
      double rest = split;
      if (alloc.b[i] > 0.0) {
        rest = split + alloc.b[i] / s_star;
        sched.segments.push_back({split, rest, sleepscale::SegmentMode::run, 0, s_star});
      }
      if (ge - rest > 1e-12)
        sched.segments.push_back({rest, ge, sleepscale::SegmentMode::sleep});
    }
  }
  sched.segments.push_back({sep_release[n], sched.horizon, sleepscale::SegmentMode::run,
                            static_cast<int>(2 * n + 1), s_star});
  return sched;
}

int cmd_solve(const RunConfig& cfg, const std::string& partition_path) {
  const auto partition = read_partition(partition_path);
  const auto params = sleepscale::derive_params(partition, cfg.model(), cfg.c_wake,
                                                cfg.epsilon, cfg.delta);
  const auto instance = sleepscale::build_instance(params, partition);

  sleepscale::Schedule sched;
  const auto [has_witness, witness] = sleepscale::partition_oracle(partition);
  if (has_witness) {
    sched = sleepscale::yes_schedule(params, partition, *witness);
    log_note("witness found; emitting the explicit threshold schedule");
  } else {
    const auto [min_energy, alloc] = sleepscale::min_energy_structured(params);
    (void)min_energy;
    sched = render_allocation(params, alloc);
    log_note("no witness; emitting the optimal gap allocation");
  }

  const auto violations = sleepscale::validate(instance, sched);
  if (!violations.empty()) throw std::logic_error("internal: emitted schedule is infeasible");
  const auto report = sleepscale::energy(sched, params.model, params.c_wake, instance);

  write_json(cfg, "schedule.json", sched);
  write_json(cfg, "energy.json", report);
  std::cout << json(report).dump(2) << "\n";
  return 0;
}

int cmd_yds(const RunConfig& cfg, const std::string& instance_path) {
  const auto instance = sleepscale::instance_from_json(json::parse(sleepscale::read_file(instance_path)));
  const auto sched = sleepscale::yds(instance);
  const auto report = sleepscale::energy(sched, cfg.model(), cfg.c_wake, instance);
  write_json(cfg, "yds_schedule.json", sched);
  write_json(cfg, "yds_energy.json", report);
  std::cout << json(report).dump(2) << "\n";
  return 0;
}

struct CurveRange {
  int gap = 0;
  double x_max = -1.0;
  double x_step = -1.0;
  double s_max = -1.0;
  double s_step = -1.0;
};

int cmd_curves(const RunConfig& cfg, const std::string& partition_path, CurveRange range) {
  const auto partition = read_partition(partition_path);
  const auto params = sleepscale::derive_params(partition, cfg.model(), cfg.c_wake,
                                                cfg.epsilon, cfg.delta);
  if (range.gap < 0 || static_cast<std::size_t>(range.gap) >= params.gap_count())
    throw std::invalid_argument("gap index out of range");
  const std::size_t g = static_cast<std::size_t>(range.gap);
  const double L = params.gap_length[g];

  if (range.x_max <= 0.0) range.x_max = 1.25 * params.root_high[g];
  if (range.x_step <= 0.0) range.x_step = range.x_max / 500.0;
  if (range.s_max <= 0.0) range.s_max = 1.5 * params.critical.s_star;
  if (range.s_step <= 0.0) range.s_step = range.s_max / 500.0;

  std::string gap_csv = "x,F,H,G,LE\n";
  for (int i = 0;; ++i) {
    const double x = i * range.x_step;
    if (x > range.x_max * (1.0 + 1e-12)) break;
    const double fv = sleepscale::f_line(params.critical, params.c_wake, x);
    const double hv = sleepscale::h_curve(params.model, L, x);
    const double le = sleepscale::lower_envelope(params.model, params.critical, params.c_wake, L, x);
    gap_csv += fmt17(x) + "," + fmt17(fv) + "," + fmt17(hv) + "," + fmt17(hv - fv) + "," +
               fmt17(le) + "\n";
  }

  std::string power_csv = "s,P,R\n";
  for (int i = 0;; ++i) {
    const double s = i * range.s_step;
    if (s > range.s_max * (1.0 + 1e-12)) break;
    power_csv += fmt17(s) + "," + fmt17(sleepscale::power(params.model, s)) + "," +
                 fmt17(sleepscale::r_func(params.model, params.critical, s)) + "\n";
  }

  fs::create_directories(cfg.out_dir);
  sleepscale::write_file((fs::path(cfg.out_dir) / "gap_curves.csv").string(), gap_csv);
  sleepscale::write_file((fs::path(cfg.out_dir) / "power_curves.csv").string(), power_csv);
  log_note("wrote gap_curves.csv and power_curves.csv");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-optimal speed scaling with a sleep state: build scheduling "
               "instances from partition instances, certify the construction, and "
               "solve/decide via the gap-allocation structure."};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string input;
  CurveRange range;

  CLI::App* reduce = app.add_subcommand("reduce", "Build instance, params and certificate");
  reduce->add_option("partition", input, "Partition file (one integer per line, or JSON array)")
      ->required();
  add_config_flags(reduce, cfg);

  CLI::App* certify = app.add_subcommand("certify", "Emit just the certificate");
  certify->add_option("partition", input, "Partition file")->required();
  add_config_flags(certify, cfg);

  CLI::App* decide = app.add_subcommand("decide", "Decide the partition instance by energy");
  decide->add_option("partition", input, "Partition file")->required();
  add_config_flags(decide, cfg);

  CLI::App* solve = app.add_subcommand("solve", "Emit a minimum-energy schedule");
  solve->add_option("partition", input, "Partition file")->required();
  add_config_flags(solve, cfg);

  CLI::App* yds_cmd = app.add_subcommand("yds", "Speed-scale an instance JSON without sleeping");
  yds_cmd->add_option("instance", input, "Scheduling instance JSON")->required();
  add_config_flags(yds_cmd, cfg);

  CLI::App* curves = app.add_subcommand("curves", "Emit curve CSVs for plotting");
  curves->add_option("partition", input, "Partition file")->required();
  add_config_flags(curves, cfg);
  curves->add_option("--gap", range.gap, "Gap index (0-based)")->capture_default_str();
  curves->add_option("--x-max", range.x_max, "Work-axis upper end (default 1.25 * root_high)");
  curves->add_option("--x-step", range.x_step, "Work-axis step (default x_max / 500)");
  curves->add_option("--s-max", range.s_max, "Speed-axis upper end (default 1.5 * s_star)");
  curves->add_option("--s-step", range.s_step, "Speed-axis step (default s_max / 500)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (reduce->parsed()) return cmd_reduce(cfg, input, false);
    if (certify->parsed()) return cmd_reduce(cfg, input, true);
    if (decide->parsed()) return cmd_decide(cfg, input);
    if (solve->parsed()) return cmd_solve(cfg, input);
    if (yds_cmd->parsed()) return cmd_yds(cfg, input);
    if (curves->parsed()) return cmd_curves(cfg, input, range);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
