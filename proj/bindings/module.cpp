#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sleepscale/json_io.hpp"
#include "sleepscale/solver.hpp"

namespace py = pybind11;
using namespace sleepscale;

namespace {

template <typename T>
std::string dump_json(const T& value) {
  nlohmann::json j = value;
  return j.dump(2);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Energy-optimal speed scaling with a sleep state: instance construction, "
            "numeric certification, exact gap solvers and the max-density scheduler.";

  py::class_<PowerModel>(m, "PowerModel")
      .def(py::init<double, double, double>(), py::arg("scale"), py::arg("exponent"),
           py::arg("static_power"))
      .def_readonly("scale", &PowerModel::scale)
      .def_readonly("exponent", &PowerModel::exponent)
      .def_readonly("static_power", &PowerModel::static_power)
      .def("__repr__", [](const PowerModel& mdl) {
        return "PowerModel(scale=" + std::to_string(mdl.scale) +
               ", exponent=" + std::to_string(mdl.exponent) +
               ", static_power=" + std::to_string(mdl.static_power) + ")";
      });

  py::class_<CriticalPoint>(m, "CriticalPoint")
      .def_readonly("s_star", &CriticalPoint::s_star)
      .def_readonly("p_at_star", &CriticalPoint::p_at_star)
      .def_readonly("ratio", &CriticalPoint::ratio);

  py::class_<GapCurves>(m, "GapCurves")
      .def_readonly("gap_index", &GapCurves::gap_index)
      .def_readonly("gap_length", &GapCurves::gap_length)
      .def_readonly("c_wake", &GapCurves::c_wake)
      .def_readonly("root_low", &GapCurves::root_low)
      .def_readonly("root_high", &GapCurves::root_high);

  m.def("power", &power, py::arg("model"), py::arg("s"));
  m.def("power_deriv", &power_deriv, py::arg("model"), py::arg("s"));
  m.def("power_second_deriv", &power_second_deriv, py::arg("model"), py::arg("s"));
  m.def("critical_speed", &critical_speed, py::arg("model"));
  m.def("critical_speed_numeric", &critical_speed_numeric, py::arg("model"));
  m.def("r_func", &r_func, py::arg("model"), py::arg("critical"), py::arg("s"));
  m.def("r_deriv", &r_deriv, py::arg("model"), py::arg("critical"), py::arg("s"));
  m.def("f_line", &f_line, py::arg("critical"), py::arg("c_wake"), py::arg("x"));
  m.def("h_curve", &h_curve, py::arg("model"), py::arg("gap_length"), py::arg("x"));
  m.def("lower_envelope", &lower_envelope, py::arg("model"), py::arg("critical"),
        py::arg("c_wake"), py::arg("gap_length"), py::arg("x"));
  m.def("intersection_roots", &intersection_roots, py::arg("model"), py::arg("critical"),
        py::arg("c_wake"), py::arg("gap_length"));
  m.def("make_gap_curves", &make_gap_curves, py::arg("model"), py::arg("critical"),
        py::arg("c_wake"), py::arg("gap_length"), py::arg("gap_index"));
  m.def("slope_from", &slope_from, py::arg("model"), py::arg("critical"), py::arg("c_wake"),
        py::arg("gap_length"), py::arg("anchor"), py::arg("x"));

  py::class_<PartitionInstance>(m, "PartitionInstance")
      .def(py::init<std::vector<long long>>(), py::arg("values"))
      .def_readonly("values", &PartitionInstance::values)
      .def_property_readonly("total", &PartitionInstance::total)
      .def("__len__", &PartitionInstance::size);

  py::enum_<JobLevel>(m, "JobLevel")
      .value("spanning", JobLevel::spanning)
      .value("per_gap", JobLevel::per_gap)
      .value("separator", JobLevel::separator);

  py::class_<Job>(m, "Job")
      .def_readonly("id", &Job::id)
      .def_readonly("level", &Job::level)
      .def_readonly("release", &Job::release)
      .def_readonly("deadline", &Job::deadline)
      .def_readonly("volume", &Job::volume)
      .def("density", &Job::density);

  py::class_<SchedulingInstance>(m, "SchedulingInstance")
      .def_readonly("jobs", &SchedulingInstance::jobs)
      .def_readonly("horizon", &SchedulingInstance::horizon)
      .def("to_json", &dump_json<SchedulingInstance>);

  py::class_<ReductionParams>(m, "ReductionParams")
      .def_readonly("model", &ReductionParams::model)
      .def_readonly("critical", &ReductionParams::critical)
      .def_readonly("c_wake", &ReductionParams::c_wake)
      .def_readonly("epsilon", &ReductionParams::epsilon)
      .def_readonly("delta", &ReductionParams::delta)
      .def_readonly("d", &ReductionParams::d)
      .def_readonly("e", &ReductionParams::e)
      .def_readonly("f", &ReductionParams::f)
      .def_readonly("k", &ReductionParams::k)
      .def_readonly("big_b", &ReductionParams::big_b)
      .def_readonly("gap_length", &ReductionParams::gap_length)
      .def_readonly("level1_volume", &ReductionParams::level1_volume)
      .def_readonly("root_low", &ReductionParams::root_low)
      .def_readonly("root_high", &ReductionParams::root_high)
      .def("gap_count", &ReductionParams::gap_count)
      .def("to_json", &dump_json<ReductionParams>);

  py::class_<CertificateCheck>(m, "CertificateCheck")
      .def_readonly("id", &CertificateCheck::id)
      .def_readonly("lhs", &CertificateCheck::lhs)
      .def_readonly("rhs", &CertificateCheck::rhs)
      .def_readonly("margin", &CertificateCheck::margin)
      .def_readonly("pass_", &CertificateCheck::pass);

  py::class_<CertificateReport>(m, "CertificateReport")
      .def_readonly("checks", &CertificateReport::checks)
      .def_readonly("pass_", &CertificateReport::pass)
      .def("to_json", &dump_json<CertificateReport>);

  py::enum_<SegmentMode>(m, "SegmentMode")
      .value("run", SegmentMode::run)
      .value("idle", SegmentMode::idle)
      .value("sleep", SegmentMode::sleep);

  py::class_<Segment>(m, "Segment")
      .def_readonly("start", &Segment::start)
      .def_readonly("end", &Segment::end)
      .def_readonly("mode", &Segment::mode)
      .def_readonly("job", &Segment::job)
      .def_readonly("speed", &Segment::speed);

  py::class_<Schedule>(m, "Schedule")
      .def_readonly("segments", &Schedule::segments)
      .def_readonly("horizon", &Schedule::horizon)
      .def("to_json", &dump_json<Schedule>);

  py::enum_<ViolationKind>(m, "ViolationKind")
      .value("volume_shortfall", ViolationKind::volume_shortfall)
      .value("window_breach", ViolationKind::window_breach)
      .value("overlap", ViolationKind::overlap)
      .value("coverage_gap", ViolationKind::coverage_gap);

  py::class_<Violation>(m, "Violation")
      .def_readonly("kind", &Violation::kind)
      .def_readonly("job", &Violation::job)
      .def_readonly("lo", &Violation::lo)
      .def_readonly("hi", &Violation::hi)
      .def_readonly("magnitude", &Violation::magnitude);

  py::class_<EnergyReport>(m, "EnergyReport")
      .def_readonly("active_energy", &EnergyReport::active_energy)
      .def_readonly("wake_count", &EnergyReport::wake_count)
      .def_readonly("wake_energy", &EnergyReport::wake_energy)
      .def_readonly("total", &EnergyReport::total)
      .def_readonly("per_level", &EnergyReport::per_level)
      .def("to_json", &dump_json<EnergyReport>);

  m.def("derive_params", &derive_params, py::arg("partition"), py::arg("model"),
        py::arg("c_wake"), py::arg("epsilon"), py::arg("delta"));
  m.def("build_instance", &build_instance, py::arg("params"), py::arg("partition"));
  m.def("certify", &certify, py::arg("params"), py::arg("partition"));
  m.def("threshold", &threshold, py::arg("params"));
  m.def("yes_schedule", &yes_schedule, py::arg("params"), py::arg("partition"),
        py::arg("subset"));
  m.def("gap_lower_bound", &gap_lower_bound, py::arg("params"));

  m.def("validate", &validate, py::arg("instance"), py::arg("schedule"));
  m.def("energy",
        py::overload_cast<const Schedule&, const PowerModel&, double>(&energy),
        py::arg("schedule"), py::arg("model"), py::arg("c_wake"));
  m.def("energy",
        py::overload_cast<const Schedule&, const PowerModel&, double, const SchedulingInstance&>(
            &energy),
        py::arg("schedule"), py::arg("model"), py::arg("c_wake"), py::arg("instance"));
  m.def("density", &density, py::arg("instance"), py::arg("interval"));
  m.def("max_density_interval", &max_density_interval, py::arg("instance"));
  m.def("yds", &yds, py::arg("instance"));

  py::enum_<GapBranch>(m, "GapBranch")
      .value("active_whole_gap", GapBranch::active_whole_gap)
      .value("run_then_sleep", GapBranch::run_then_sleep);

  py::class_<GapAllocation>(m, "GapAllocation")
      .def_readonly("b", &GapAllocation::b)
      .def_readonly("branch", &GapAllocation::branch);

  py::enum_<Verdict>(m, "Verdict")
      .value("partition_exists", Verdict::partition_exists)
      .value("no_partition", Verdict::no_partition);

  py::class_<DecisionResult>(m, "DecisionResult")
      .def_readonly("min_energy", &DecisionResult::min_energy)
      .def_readonly("threshold", &DecisionResult::threshold)
      .def_readonly("gap_bound", &DecisionResult::gap_bound)
      .def_readonly("certified_gap_bound", &DecisionResult::certified_gap_bound)
      .def_readonly("decision_tolerance", &DecisionResult::decision_tolerance)
      .def_readonly("verdict", &DecisionResult::verdict)
      .def_readonly("oracle_verdict", &DecisionResult::oracle_verdict)
      .def_readonly("witness", &DecisionResult::witness)
      .def("to_json", &dump_json<DecisionResult>);

  m.def("gap_cost", &gap_cost, py::arg("params"), py::arg("i"), py::arg("w"));
  m.def("min_energy_structured", &min_energy_structured, py::arg("params"));
  m.def("min_energy_grid", &min_energy_grid, py::arg("params"), py::arg("resolution"));
  m.def("partition_oracle", &partition_oracle, py::arg("partition"));
  m.def("certified_gap_bound", &certified_gap_bound, py::arg("params"));
  m.def("decide", &decide, py::arg("partition"), py::arg("model"), py::arg("c_wake"),
        py::arg("epsilon"), py::arg("delta"), py::arg("tolerance_override") = py::none());

#ifdef SLEEPSCALE_VERSION
  m.attr("__version__") = SLEEPSCALE_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
