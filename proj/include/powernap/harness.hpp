#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "powernap/scheduler.hpp"

namespace powernap {

struct ScenarioCommand {
    SimTime at = 0.0;  // minutes from scenario start
    std::string line;
};

// A complete experiment description, loaded from a versioned JSON file.
struct Scenario {
    int version = 1;
    std::string name;
    DeviceProfile profile;
    std::vector<Device::DaemonSpec> sources;  // baseline daemons; rates sum to idle_rate
    std::optional<SleepSchedule> schedule;
    std::set<std::string> minimal_functions;
    int start_tod = 0;  // time of day at simulation start; defaults to sleep_time
    double duration_hours = 0.0;
    std::vector<ScenarioCommand> commands;
    unsigned seed = 0;  // reserved, the simulation is deterministic

    void validate() const;  // throws InvariantViolation
    SimTime start() const { return static_cast<SimTime>(start_tod); }
    SimTime end() const { return start() + hours_to_minutes(duration_hours); }
};

Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& json_text, const std::string& origin);

// Builds a ready-to-run engine for the scenario: device with baseline
// daemons, schedule and minimal set installed, queued commands loaded.
Engine make_engine(const Scenario& scenario, EngineConfig config = {});

struct ExperimentResult {
    std::string scenario;
    std::string device;
    double capacity_mah = 0.0;
    SimTime start = 0.0;
    SimTime end = 0.0;
    double consumed_mah = 0.0;
    double remaining_mah = 0.0;
    double remaining_pct = 0.0;  // percent of capacity
    Breakdown breakdown;         // empty for zero-duration runs
    std::vector<Event> event_log;
    std::vector<TimeSeriesPoint> time_series;
};

ExperimentResult run_experiment(const Scenario& scenario);

// One line of the level comparison table, in config order
// before, suspend-to-ram, suspend-to-disk, complete-off.
struct CompareRow {
    std::string config;
    std::string device;
    double capacity_mah = 0.0;
    double consumed_mah = 0.0;
    double remaining_pct = 0.0;
};

struct Comparison {
    std::vector<CompareRow> rows;
    std::vector<ExperimentResult> results;  // same order as rows
};

// Runs the scenario four ways: scheduling disabled ("before") and once per
// sleep level. Requires a schedule window in the scenario.
Comparison compare_levels(const Scenario& scenario);

enum class ReportFormat { Csv, Text };
ReportFormat parse_report_format(const std::string& token);

// Deterministic renderings; identical inputs give identical bytes.
std::string render_report(const ExperimentResult& result, ReportFormat format);
std::string render_comparison(const Comparison& comparison, ReportFormat format);

void emit_report(const ExperimentResult& result, ReportFormat format,
                 const std::filesystem::path& path);
void emit_comparison(const Comparison& comparison, ReportFormat format,
                     const std::filesystem::path& path);

// Result files for the `report` CLI subcommand.
std::string result_to_json(const ExperimentResult& result);
ExperimentResult result_from_json(const std::string& json_text, const std::string& origin);
void save_result(const ExperimentResult& result, const std::filesystem::path& path);
ExperimentResult load_result(const std::filesystem::path& path);

}  // namespace powernap
