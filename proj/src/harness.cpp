#include "powernap/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "powernap/error.hpp"

namespace powernap {

using nlohmann::json;

namespace {

constexpr double kRateSumTolMa = 1e-6;

std::string fmt(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
}

[[noreturn]] void scenario_error(const std::string& origin, const std::string& message) {
    throw Error(ErrorCode::ParseError, origin + ": " + message);
}

double get_number(const json& node, const std::string& origin, const std::string& field) {
    if (!node.contains(field) || !node[field].is_number()) {
        scenario_error(origin, "field \"" + field + "\" must be a number");
    }
    return node[field].get<double>();
}

std::string get_string(const json& node, const std::string& origin, const std::string& field) {
    if (!node.contains(field) || !node[field].is_string()) {
        scenario_error(origin, "field \"" + field + "\" must be a string");
    }
    return node[field].get<std::string>();
}

}  // namespace

void Scenario::validate() const {
    profile.validate();
    if (duration_hours < 0) {
        throw Error(ErrorCode::InvariantViolation, "duration must be >= 0");
    }
    if (start_tod < 0 || start_tod >= kMinutesPerDay) {
        throw Error(ErrorCode::InvariantViolation, "start time of day out of range");
    }
    if (sources.empty()) {
        throw Error(ErrorCode::InvariantViolation, "scenario needs at least one baseline source");
    }
    double sum = 0.0;
    for (const auto& source : sources) {
        if (source.rate_ma < 0) {
            throw Error(ErrorCode::InvariantViolation,
                        "source \"" + source.name + "\" has negative rate");
        }
        if (source.category != SourceCategory::Platform &&
            source.category != SourceCategory::Application) {
            throw Error(ErrorCode::InvariantViolation,
                        "source \"" + source.name + "\" must be platform or application");
        }
        sum += source.rate_ma;
    }
    if (std::abs(sum - profile.idle_rate_ma) > kRateSumTolMa) {
        throw Error(ErrorCode::InvariantViolation,
                    "baseline source rates sum to " + fmt(sum, 6) + " mA, expected idle rate " +
                        fmt(profile.idle_rate_ma, 6) + " mA");
    }
    if (schedule) schedule->validate();
    for (const auto& name : minimal_functions) {
        bool known = false;
        for (const auto& source : sources) known = known || source.name == name;
        if (!known) {
            throw Error(ErrorCode::InvariantViolation,
                        "minimal function \"" + name + "\" is not a scenario source");
        }
    }
}

namespace {

Scenario extract_scenario(const json& root, const std::string& origin) {
    Scenario scenario;
    if (!root.contains("version") || !root["version"].is_number_integer()) {
        scenario_error(origin, "field \"version\" must be an integer");
    }
    scenario.version = root["version"].get<int>();
    if (scenario.version != 1) {
        scenario_error(origin, "unsupported version " + std::to_string(scenario.version));
    }
    scenario.name = get_string(root, origin, "name");

    if (!root.contains("profile") || !root["profile"].is_object()) {
        scenario_error(origin, "field \"profile\" must be an object");
    }
    const json& profile = root["profile"];
    scenario.profile.name = get_string(profile, origin + ".profile", "name");
    scenario.profile.capacity_mah = get_number(profile, origin + ".profile", "capacity_mah");
    scenario.profile.idle_rate_ma = get_number(profile, origin + ".profile", "idle_rate_ma");
    scenario.profile.ram_retention_rate_ma =
        get_number(profile, origin + ".profile", "ram_retention_rate_ma");
    scenario.profile.timer_rate_ma = get_number(profile, origin + ".profile", "timer_rate_ma");
    scenario.profile.peripheral_leak_rate_ma =
        profile.value("peripheral_leak_rate_ma", 0.0);
    scenario.profile.snapshot_cost_mah = profile.value("snapshot_cost_mah", 0.0);
    scenario.profile.restore_cost_mah = profile.value("restore_cost_mah", 0.0);

    if (!root.contains("sources") || !root["sources"].is_array()) {
        scenario_error(origin, "field \"sources\" must be an array");
    }
    for (const json& node : root["sources"]) {
        if (!node.is_object()) scenario_error(origin, "sources entries must be objects");
        Device::DaemonSpec spec;
        spec.name = get_string(node, origin + ".sources", "name");
        spec.category =
            parse_source_category(get_string(node, origin + ".sources", "category"));
        spec.rate_ma = get_number(node, origin + ".sources", "rate_ma");
        scenario.sources.push_back(std::move(spec));
    }

    if (root.contains("schedule") && !root["schedule"].is_null()) {
        const json& node = root["schedule"];
        if (!node.is_object()) scenario_error(origin, "field \"schedule\" must be an object");
        SleepSchedule schedule;
        schedule.sleep_time = parse_time_of_day(get_string(node, origin + ".schedule", "sleep"));
        schedule.wake_time = parse_time_of_day(get_string(node, origin + ".schedule", "wake"));
        schedule.level = parse_sleep_level(get_string(node, origin + ".schedule", "level"));
        schedule.enabled = node.value("enabled", true);
        scenario.schedule = schedule;
    }

    if (root.contains("minimal_functions")) {
        for (const json& node : root["minimal_functions"]) {
            if (!node.is_string()) scenario_error(origin, "minimal_functions must be strings");
            scenario.minimal_functions.insert(node.get<std::string>());
        }
    }

    if (root.contains("start")) {
        scenario.start_tod = parse_time_of_day(get_string(root, origin, "start"));
    } else if (scenario.schedule) {
        scenario.start_tod = scenario.schedule->sleep_time;
    }

    scenario.duration_hours = get_number(root, origin, "duration_hours");

    if (root.contains("commands")) {
        if (!root["commands"].is_array()) scenario_error(origin, "commands must be an array");
        for (const json& node : root["commands"]) {
            ScenarioCommand command;
            command.at = get_number(node, origin + ".commands", "at_minute");
            command.line = get_string(node, origin + ".commands", "line");
            scenario.commands.push_back(std::move(command));
        }
    }

    scenario.seed = root.value("seed", 0u);
    return scenario;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        scenario_error(origin, e.what());
    }
    if (!root.is_object()) scenario_error(origin, "top level must be an object");

    Scenario scenario;
    try {
        scenario = extract_scenario(root, origin);
    } catch (const json::exception& e) {
        scenario_error(origin, e.what());
    }
    try {
        scenario.validate();
    } catch (const Error& e) {
        throw Error(e.code(), origin + ": " + e.what());
    }
    return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open scenario file " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str(), path.filename().string());
}

Engine make_engine(const Scenario& scenario, EngineConfig config) {
    scenario.validate();
    Device device(scenario.profile, scenario.sources);
    Engine engine(std::move(device), scenario.start(), std::move(config));
    if (!engine.state_loaded()) {
        if (scenario.schedule) engine.set_schedule(*scenario.schedule);
        if (!scenario.minimal_functions.empty()) {
            engine.set_minimal_functions(scenario.minimal_functions);
        }
    }
    for (const auto& command : scenario.commands) {
        engine.queue_command(scenario.start() + command.at, command.line);
    }
    return engine;
}

ExperimentResult run_experiment(const Scenario& scenario) {
    Engine engine = make_engine(scenario);
    engine.run_until(scenario.end());

    ExperimentResult result;
    result.scenario = scenario.name;
    result.device = scenario.profile.name;
    result.capacity_mah = scenario.profile.capacity_mah;
    result.start = scenario.start();
    result.end = scenario.end();
    result.remaining_mah = engine.device().battery().remaining_mah();
    result.consumed_mah = result.capacity_mah - result.remaining_mah;
    result.remaining_pct = engine.device().battery().remaining_fraction() * 100.0;
    if (result.end > result.start) {
        result.breakdown =
            engine.device().ledger().report(engine.device().sources(), result.start, result.end);
    }
    result.event_log = engine.event_log();
    result.time_series = engine.time_series();
    return result;
}

Comparison compare_levels(const Scenario& scenario) {
    if (!scenario.schedule) {
        throw Error(ErrorCode::InvariantViolation,
                    "level comparison needs a scenario with a schedule window");
    }
    Comparison comparison;

    auto run_config = [&](const std::string& config_name, std::optional<SleepLevel> level) {
        Scenario variant = scenario;
        variant.schedule->enabled = level.has_value();
        if (level) variant.schedule->level = *level;
        ExperimentResult result = run_experiment(variant);
        CompareRow row;
        row.config = config_name;
        row.device = variant.profile.name;
        row.capacity_mah = variant.profile.capacity_mah;
        row.consumed_mah = result.consumed_mah;
        row.remaining_pct = result.remaining_pct;
        comparison.rows.push_back(row);
        comparison.results.push_back(std::move(result));
    };

    run_config("before", std::nullopt);
    run_config("suspend-to-ram", SleepLevel::SuspendToRam);
    run_config("suspend-to-disk", SleepLevel::SuspendToDisk);
    run_config("complete-off", SleepLevel::CompleteOff);
    return comparison;
}

ReportFormat parse_report_format(const std::string& token) {
    if (token == "csv") return ReportFormat::Csv;
    if (token == "text") return ReportFormat::Text;
    throw Error(ErrorCode::ParseError, "unknown report format \"" + token + "\"");
}

std::string render_report(const ExperimentResult& result, ReportFormat format) {
    std::ostringstream out;
    bool empty = result.end <= result.start;
    if (format == ReportFormat::Csv) {
        out << "section,key,mah,fraction\n";
        if (empty) return out.str();
        out << "summary,capacity," << fmt(result.capacity_mah, 3) << ",\n";
        out << "summary,consumed," << fmt(result.consumed_mah, 3) << ","
            << fmt(result.consumed_mah / result.capacity_mah, 4) << "\n";
        out << "summary,remaining," << fmt(result.remaining_mah, 3) << ","
            << fmt(result.remaining_mah / result.capacity_mah, 4) << "\n";
        for (const auto& row : result.breakdown.per_source) {
            out << "source," << row.name << "," << fmt(row.consumed_mah, 3) << ","
                << fmt(row.share, 4) << "\n";
        }
        for (const auto& row : result.breakdown.per_category) {
            out << "category," << row.name << "," << fmt(row.consumed_mah, 3) << ","
                << fmt(row.share, 4) << "\n";
        }
        return out.str();
    }

    out << "scenario: " << result.scenario << "\n";
    out << "device: " << result.device << " (" << fmt(result.capacity_mah, 3) << " mAh)\n";
    out << "window: t=" << format_sim_time(result.start) << " .. t=" << format_sim_time(result.end)
        << " (" << fmt(minutes_to_hours(result.end - result.start), 2) << " h)\n";
    out << "consumed: " << fmt(result.consumed_mah, 3) << " mAh\n";
    out << "remaining: " << fmt(result.remaining_mah, 3) << " mAh (" << fmt(result.remaining_pct, 2)
        << "%)\n";
    if (!empty) {
        out << "breakdown by source:\n";
        for (const auto& row : result.breakdown.per_source) {
            out << "  " << row.name << ": " << fmt(row.consumed_mah, 3) << " mAh ("
                << fmt(row.share * 100.0, 2) << "%)\n";
        }
        out << "breakdown by category:\n";
        for (const auto& row : result.breakdown.per_category) {
            out << "  " << row.name << ": " << fmt(row.consumed_mah, 3) << " mAh ("
                << fmt(row.share * 100.0, 2) << "%)\n";
        }
    }
    out << "events:\n";
    if (result.event_log.empty()) out << "  (none)\n";
    for (const auto& event : result.event_log) {
        out << "  " << to_line(event) << "\n";
    }
    return out.str();
}

std::string render_comparison(const Comparison& comparison, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::Csv) {
        out << "config,device,capacity_mah,consumed_mah,remaining_pct\n";
        for (const auto& row : comparison.rows) {
            out << row.config << "," << row.device << "," << fmt(row.capacity_mah, 3) << ","
                << fmt(row.consumed_mah, 3) << "," << fmt(row.remaining_pct, 3) << "\n";
        }
        return out.str();
    }
    out << "config            device                        capacity_mah  consumed_mah  remaining_pct\n";
    for (const auto& row : comparison.rows) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-17s %-29s %12.3f %13.3f %14.3f\n", row.config.c_str(),
                      row.device.c_str(), row.capacity_mah, row.consumed_mah, row.remaining_pct);
        out << line;
    }
    return out.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

json breakdown_rows_to_json(const std::vector<Breakdown::Row>& rows) {
    json out = json::array();
    for (const auto& row : rows) {
        out.push_back({{"name", row.name},
                       {"consumed_mah", row.consumed_mah},
                       {"share", row.share}});
    }
    return out;
}

std::vector<Breakdown::Row> breakdown_rows_from_json(const json& node) {
    std::vector<Breakdown::Row> rows;
    for (const json& item : node) {
        Breakdown::Row row;
        row.name = item.at("name").get<std::string>();
        row.consumed_mah = item.at("consumed_mah").get<double>();
        row.share = item.at("share").get<double>();
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

void emit_report(const ExperimentResult& result, ReportFormat format,
                 const std::filesystem::path& path) {
    write_file(path, render_report(result, format));
}

void emit_comparison(const Comparison& comparison, ReportFormat format,
                     const std::filesystem::path& path) {
    write_file(path, render_comparison(comparison, format));
}

std::string result_to_json(const ExperimentResult& result) {
    json root;
    root["version"] = 1;
    root["scenario"] = result.scenario;
    root["device"] = result.device;
    root["capacity_mah"] = result.capacity_mah;
    root["start"] = result.start;
    root["end"] = result.end;
    root["consumed_mah"] = result.consumed_mah;
    root["remaining_mah"] = result.remaining_mah;
    root["remaining_pct"] = result.remaining_pct;
    root["breakdown"] = {{"total_mah", result.breakdown.total_mah},
                         {"per_source", breakdown_rows_to_json(result.breakdown.per_source)},
                         {"per_category", breakdown_rows_to_json(result.breakdown.per_category)}};
    json events = json::array();
    for (const auto& event : result.event_log) {
        events.push_back({{"at", event.at}, {"kind", to_token(event.kind)}, {"detail", event.detail}});
    }
    root["event_log"] = events;
    json series = json::array();
    for (const auto& point : result.time_series) {
        series.push_back({{"at", point.at}, {"remaining_mah", point.remaining_mah}});
    }
    root["time_series"] = series;
    return root.dump(2) + "\n";
}

namespace {

EventKind parse_event_kind(const std::string& token) {
    for (EventKind kind : {EventKind::Arm, EventKind::EnterSleep, EventKind::TimerFire,
                           EventKind::Wake, EventKind::FailedWake, EventKind::Failure,
                           EventKind::Warning, EventKind::Command}) {
        if (token == to_token(kind)) return kind;
    }
    throw Error(ErrorCode::ParseError, "unknown event kind \"" + token + "\"");
}

}  // namespace

ExperimentResult result_from_json(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, origin + ": " + e.what());
    }
    try {
        ExperimentResult result;
        result.scenario = root.at("scenario").get<std::string>();
        result.device = root.at("device").get<std::string>();
        result.capacity_mah = root.at("capacity_mah").get<double>();
        result.start = root.at("start").get<double>();
        result.end = root.at("end").get<double>();
        result.consumed_mah = root.at("consumed_mah").get<double>();
        result.remaining_mah = root.at("remaining_mah").get<double>();
        result.remaining_pct = root.at("remaining_pct").get<double>();
        const json& breakdown = root.at("breakdown");
        result.breakdown.window_begin = result.start;
        result.breakdown.window_end = result.end;
        result.breakdown.total_mah = breakdown.at("total_mah").get<double>();
        result.breakdown.per_source = breakdown_rows_from_json(breakdown.at("per_source"));
        result.breakdown.per_category = breakdown_rows_from_json(breakdown.at("per_category"));
        for (const json& node : root.at("event_log")) {
            Event event;
            event.at = node.at("at").get<double>();
            event.kind = parse_event_kind(node.at("kind").get<std::string>());
            event.detail = node.at("detail").get<std::string>();
            result.event_log.push_back(std::move(event));
        }
        for (const json& node : root.at("time_series")) {
            result.time_series.push_back(
                {node.at("at").get<double>(), node.at("remaining_mah").get<double>()});
        }
        return result;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, origin + ": " + e.what());
    }
}

void save_result(const ExperimentResult& result, const std::filesystem::path& path) {
    write_file(path, result_to_json(result));
}

ExperimentResult load_result(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open result file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return result_from_json(text.str(), path.filename().string());
}

}  // namespace powernap
