#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "sleepscale/json_io.hpp"
#include "sleepscale/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir =
      fs::temp_directory_path() / ("sleepscale_cli_" + tag + "_" + std::to_string(::getpid()) +
                                   "_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const fs::path& workdir, const std::string& args) {
  const fs::path out = workdir / "_stdout.txt";
  const fs::path err = workdir / "_stderr.txt";
  const std::string cmd = "cd '" + workdir.string() + "' && '" + SLEEPSCALE_CLI_PATH + "' " +
                          args + " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("reduce writes params, instance and certificate") {
  const fs::path dir = fresh_dir("reduce");
  write(dir / "partition.txt", "1\n2\n3\n");
  const CliResult r = run_cli(dir, "reduce partition.txt");
  CHECK(r.code == 0);

  const json params = json::parse(slurp(dir / "params.json"));
  CHECK(params.at("e") == 16.0);
  CHECK(params.at("k") == 24.0);

  const json inst = json::parse(slurp(dir / "instance.json"));
  CHECK(inst.at("horizon") == 50.0);
  CHECK(inst.at("jobs").size() == 8);

  const json cert = json::parse(slurp(dir / "certificate.json"));
  CHECK(cert.at("pass") == true);

  // reruns are byte-identical
  const std::string before_params = slurp(dir / "params.json");
  const std::string before_inst = slurp(dir / "instance.json");
  const CliResult again = run_cli(dir, "reduce partition.txt");
  CHECK(again.code == 0);
  CHECK(slurp(dir / "params.json") == before_params);
  CHECK(slurp(dir / "instance.json") == before_inst);
  CHECK(again.out == r.out);
}

TEST_CASE("reduce accepts JSON arrays") {
  const fs::path dir = fresh_dir("reduce_json");
  write(dir / "partition.json", "[3, 5, 8, 16]\n");
  CHECK(run_cli(dir, "reduce partition.json").code == 0);
}

TEST_CASE("reduce rejects bad partitions with named constraints") {
  const fs::path dir = fresh_dir("reduce_bad");
  write(dir / "one.txt", "1\n");
  const CliResult r = run_cli(dir, "reduce one.txt");
  CHECK(r.code == 1);
  CHECK(r.err.find("a_max >= 2") != std::string::npos);

  write(dir / "empty.txt", "");
  CHECK(run_cli(dir, "reduce empty.txt").code == 1);

  write(dir / "garbage.txt", "1 two 3");
  CHECK(run_cli(dir, "reduce garbage.txt").code == 1);

  CHECK(run_cli(dir, "reduce missing.txt").code == 1);
}

TEST_CASE("certify emits only the certificate") {
  const fs::path dir = fresh_dir("certify");
  write(dir / "p.txt", "2 3 5\n");
  const CliResult r = run_cli(dir, "certify p.txt");
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "certificate.json"));
  CHECK(!fs::exists(dir / "params.json"));
  CHECK(json::parse(r.out).at("pass") == true);
}

TEST_CASE("decide exit codes follow the verdict") {
  const fs::path dir = fresh_dir("decide");
  write(dir / "yes.txt", "1\n2\n3\n");
  write(dir / "no.txt", "1\n2\n4\n");

  const CliResult yes = run_cli(dir, "decide yes.txt");
  CHECK(yes.code == 0);
  const json jy = json::parse(yes.out);
  CHECK(jy.at("verdict") == "partition_exists");
  CHECK(jy.at("threshold") == 79.6875);

  const CliResult no = run_cli(dir, "decide no.txt --grid-resolution 2000");
  CHECK(no.code == 3);
  const json jn = json::parse(no.out);
  CHECK(jn.at("verdict") == "no_partition");
  CHECK(jn.contains("min_energy_grid"));
  CHECK(jn.at("min_energy_grid").get<double>() >= jn.at("min_energy").get<double>() - 1e-9);

  write(dir / "bad.txt", "1\n");
  CHECK(run_cli(dir, "decide bad.txt").code == 1);

  // fault injection: an impossible tolerance must surface as a hard error
  const CliResult forced = run_cli(dir, "decide yes.txt --decision-tolerance=-1");
  CHECK(forced.code == 1);
  CHECK(forced.err.find("equivalence violation") != std::string::npos);
}

TEST_CASE("solve emits a feasible schedule with its energy report") {
  const fs::path dir = fresh_dir("solve");
  write(dir / "yes.txt", "1\n2\n3\n");
  REQUIRE(run_cli(dir, "reduce yes.txt").code == 0);  // for instance.json
  const CliResult r = run_cli(dir, "solve yes.txt");
  CHECK(r.code == 0);

  const json energy_report = json::parse(slurp(dir / "energy.json"));
  CHECK(energy_report.at("total").get<double>() == doctest::Approx(79.6875).epsilon(1e-9));
  // one sleeping gap per non-witness index
  CHECK(energy_report.at("wake_count").get<int>() == 1);  // witness {1,2} leaves one gap asleep

  const auto inst = sleepscale::instance_from_json(json::parse(slurp(dir / "instance.json")));
  const auto sched = sleepscale::schedule_from_json(json::parse(slurp(dir / "schedule.json")));
  CHECK(sleepscale::validate(inst, sched).empty());

  // separator segments all run at the critical speed
  for (const auto& seg : sched.segments)
    if (seg.mode == sleepscale::SegmentMode::run && seg.job >= 4)
      CHECK(seg.speed == doctest::Approx(1.0).epsilon(1e-12));

  // no-instances get the optimal allocation rendered as a schedule
  write(dir / "no.txt", "1\n2\n4\n");
  REQUIRE(run_cli(dir, "reduce no.txt").code == 0);
  const CliResult rn = run_cli(dir, "solve no.txt");
  CHECK(rn.code == 0);
  const auto inst_no = sleepscale::instance_from_json(json::parse(slurp(dir / "instance.json")));
  const auto sched_no = sleepscale::schedule_from_json(json::parse(slurp(dir / "schedule.json")));
  CHECK(sleepscale::validate(inst_no, sched_no).empty());
  const json energy_no = json::parse(slurp(dir / "energy.json"));
  const auto params_no = sleepscale::derive_params(sleepscale::PartitionInstance({1, 2, 4}),
                                                   sleepscale::PowerModel(1, 2, 1), 1.0, 0.25,
                                                   1.0);
  const auto [min_energy, alloc] = sleepscale::min_energy_structured(params_no);
  (void)alloc;
  CHECK(energy_no.at("total").get<double>() == doctest::Approx(min_energy).epsilon(1e-9));
}

TEST_CASE("yds subcommand speed-scales an instance file") {
  const fs::path dir = fresh_dir("yds");
  write(dir / "p.txt", "1\n2\n3\n");
  REQUIRE(run_cli(dir, "reduce p.txt").code == 0);
  const CliResult r = run_cli(dir, "yds instance.json");
  CHECK(r.code == 0);

  const auto inst = sleepscale::instance_from_json(json::parse(slurp(dir / "instance.json")));
  const auto sched = sleepscale::schedule_from_json(json::parse(slurp(dir / "yds_schedule.json")));
  CHECK(sleepscale::validate(inst, sched).empty());
  for (const auto& seg : sched.segments)
    CHECK(seg.mode != sleepscale::SegmentMode::sleep);

  CHECK(run_cli(dir, "yds nonexistent.json").code == 1);
}

TEST_CASE("curves emit plottable tables") {
  const fs::path dir = fresh_dir("curves");
  write(dir / "p.txt", "1\n2\n3\n");
  const CliResult r =
      run_cli(dir, "curves p.txt --gap 2 --x-max 30 --x-step 0.25 --s-max 2 --s-step 0.25");
  CHECK(r.code == 0);

  const std::string gap_csv = slurp(dir / "gap_curves.csv");
  CHECK(gap_csv.rfind("x,F,H,G,LE\n", 0) == 0);

  // row-wise: LE = min(F, H); at x = L*s_star = 15 the difference G is -c_wake
  std::istringstream lines(gap_csv);
  std::string line;
  std::getline(lines, line);  // header
  bool saw_knee = false;
  while (std::getline(lines, line)) {
    double x, fv, hv, gv, le;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &x, &fv, &hv, &gv, &le) == 5);
    CHECK(le == doctest::Approx(std::min(fv, hv)).epsilon(1e-12));
    if (x == 15.0) {
      saw_knee = true;
      CHECK(gv == doctest::Approx(-1.0).epsilon(1e-9));
    }
  }
  CHECK(saw_knee);

  const std::string power_csv = slurp(dir / "power_curves.csv");
  CHECK(power_csv.rfind("s,P,R\n", 0) == 0);
  std::istringstream plines(power_csv);
  std::getline(plines, line);
  bool saw_star = false;
  while (std::getline(plines, line)) {
    double s, pv, rv;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &s, &pv, &rv) == 3);
    if (s == 1.0) {
      saw_star = true;
      CHECK(rv == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
  CHECK(saw_star);

  // reruns are byte-identical
  const std::string before = gap_csv;
  REQUIRE(run_cli(dir, "curves p.txt --gap 2 --x-max 30 --x-step 0.25 --s-max 2 --s-step 0.25")
              .code == 0);
  CHECK(slurp(dir / "gap_curves.csv") == before);

  CHECK(run_cli(dir, "curves p.txt --gap 7").code == 1);
}
