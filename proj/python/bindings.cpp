#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "powernap/error.hpp"
#include "powernap/harness.hpp"
#include "powernap/protocol.hpp"

namespace py = pybind11;
using namespace powernap;

PYBIND11_MODULE(powernap, m) {
    m.doc() = "Scheduled-sleep power manager and battery drain simulator";

    py::register_exception<Error>(m, "PowernapError");

    py::enum_<SleepLevel>(m, "SleepLevel")
        .value("SUSPEND_TO_RAM", SleepLevel::SuspendToRam)
        .value("SUSPEND_TO_DISK", SleepLevel::SuspendToDisk)
        .value("COMPLETE_OFF", SleepLevel::CompleteOff);

    py::class_<DeviceProfile>(m, "DeviceProfile")
        .def_readonly("name", &DeviceProfile::name)
        .def_readonly("capacity_mah", &DeviceProfile::capacity_mah)
        .def_readonly("idle_rate_ma", &DeviceProfile::idle_rate_ma)
        .def_readonly("ram_retention_rate_ma", &DeviceProfile::ram_retention_rate_ma)
        .def_readonly("timer_rate_ma", &DeviceProfile::timer_rate_ma)
        .def_readonly("peripheral_leak_rate_ma", &DeviceProfile::peripheral_leak_rate_ma)
        .def_readonly("snapshot_cost_mah", &DeviceProfile::snapshot_cost_mah)
        .def_readonly("restore_cost_mah", &DeviceProfile::restore_cost_mah);

    py::class_<SleepSchedule>(m, "SleepSchedule")
        .def_readonly("sleep_time", &SleepSchedule::sleep_time)
        .def_readonly("wake_time", &SleepSchedule::wake_time)
        .def_readonly("level", &SleepSchedule::level)
        .def_readonly("enabled", &SleepSchedule::enabled)
        .def("window_minutes", &SleepSchedule::window_minutes);

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_readonly("profile", &Scenario::profile)
        .def_readonly("duration_hours", &Scenario::duration_hours)
        .def_property_readonly("schedule",
                               [](const Scenario& s) { return s.schedule; })
        .def("start", &Scenario::start)
        .def("end", &Scenario::end);

    py::class_<Breakdown::Row>(m, "BreakdownRow")
        .def_readonly("name", &Breakdown::Row::name)
        .def_readonly("consumed_mah", &Breakdown::Row::consumed_mah)
        .def_readonly("share", &Breakdown::Row::share);

    py::class_<Breakdown>(m, "Breakdown")
        .def_readonly("total_mah", &Breakdown::total_mah)
        .def_readonly("per_source", &Breakdown::per_source)
        .def_readonly("per_category", &Breakdown::per_category);

    py::class_<Event>(m, "Event")
        .def_readonly("at", &Event::at)
        .def_property_readonly("kind", [](const Event& e) { return std::string(to_token(e.kind)); })
        .def_readonly("detail", &Event::detail)
        .def("__repr__", [](const Event& e) { return to_line(e); });

    py::class_<TimeSeriesPoint>(m, "TimeSeriesPoint")
        .def_readonly("at", &TimeSeriesPoint::at)
        .def_readonly("remaining_mah", &TimeSeriesPoint::remaining_mah);

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_readonly("scenario", &ExperimentResult::scenario)
        .def_readonly("device", &ExperimentResult::device)
        .def_readonly("capacity_mah", &ExperimentResult::capacity_mah)
        .def_readonly("consumed_mah", &ExperimentResult::consumed_mah)
        .def_readonly("remaining_mah", &ExperimentResult::remaining_mah)
        .def_readonly("remaining_pct", &ExperimentResult::remaining_pct)
        .def_readonly("breakdown", &ExperimentResult::breakdown)
        .def_readonly("event_log", &ExperimentResult::event_log)
        .def_readonly("time_series", &ExperimentResult::time_series)
        .def("to_json", [](const ExperimentResult& r) { return result_to_json(r); });

    py::class_<CompareRow>(m, "CompareRow")
        .def_readonly("config", &CompareRow::config)
        .def_readonly("device", &CompareRow::device)
        .def_readonly("capacity_mah", &CompareRow::capacity_mah)
        .def_readonly("consumed_mah", &CompareRow::consumed_mah)
        .def_readonly("remaining_pct", &CompareRow::remaining_pct);

    py::class_<Comparison>(m, "Comparison")
        .def_readonly("rows", &Comparison::rows);

    py::class_<Engine>(m, "Engine")
        .def("run_until", &Engine::run_until, py::arg("end"))
        .def("now", &Engine::now)
        .def("apply", [](Engine& e, const std::string& line) { return to_line(apply_line(line, e)); },
             py::arg("line"), "Apply one protocol command line; returns the reply line.")
        .def("remaining_mah", [](const Engine& e) { return e.device().battery().remaining_mah(); })
        .def("is_active", [](const Engine& e) { return e.device().state().is_active(); })
        .def("event_log", [](const Engine& e) { return e.event_log(); });

    m.def("load_scenario", &load_scenario, py::arg("path"),
          "Load and validate a scenario JSON file.");
    m.def("parse_scenario", &parse_scenario, py::arg("json_text"), py::arg("origin") = "<string>");
    m.def("make_engine",
          [](const Scenario& scenario) { return make_engine(scenario); },
          py::arg("scenario"), "Build a ready-to-run engine for a scenario.");
    m.def("run_experiment", &run_experiment, py::arg("scenario"));
    m.def("compare_levels", &compare_levels, py::arg("scenario"));
    m.def("render_report", [](const ExperimentResult& result, const std::string& format) {
        return render_report(result, parse_report_format(format));
    }, py::arg("result"), py::arg("format") = "text");
    m.def("render_comparison", [](const Comparison& comparison, const std::string& format) {
        return render_comparison(comparison, parse_report_format(format));
    }, py::arg("comparison"), py::arg("format") = "text");
}
