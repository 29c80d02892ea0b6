#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "powernap/error.hpp"
#include "powernap/harness.hpp"
#include "powernap/protocol.hpp"

namespace {

using namespace powernap;

Scenario load_with_override(const std::string& path, std::optional<double> duration_hours) {
    Scenario scenario = load_scenario(path);
    if (duration_hours) {
        scenario.duration_hours = *duration_hours;
        scenario.validate();
    }
    return scenario;
}

int cmd_run(const std::string& scenario_path, std::optional<double> duration_hours,
            const std::string& out_path, const std::string& format_token) {
    Scenario scenario = load_with_override(scenario_path, duration_hours);
    ExperimentResult result = run_experiment(scenario);
    std::cout << render_report(result, ReportFormat::Text);
    if (!out_path.empty()) {
        if (format_token == "json") {
            save_result(result, out_path);
        } else {
            emit_report(result, parse_report_format(format_token), out_path);
        }
    }
    return 0;
}

int cmd_compare(const std::string& scenario_path, std::optional<double> duration_hours,
                const std::string& out_path, const std::string& format_token) {
    Scenario scenario = load_with_override(scenario_path, duration_hours);
    Comparison comparison = compare_levels(scenario);
    std::cout << render_comparison(comparison, ReportFormat::Text);
    if (!out_path.empty()) {
        emit_comparison(comparison, parse_report_format(format_token), out_path);
    }
    return 0;
}

int cmd_client(const std::string& scenario_path, const std::vector<std::string>& lines,
               const std::string& state_file, const std::string& timer_image) {
    Scenario scenario = load_scenario(scenario_path);
    EngineConfig config;
    if (!state_file.empty()) config.state_file = state_file;
    if (!timer_image.empty()) config.timer_image_file = timer_image;
    Engine engine = make_engine(scenario, config);

    auto serve = [&](const std::string& line) { std::cout << to_line(apply_line(line, engine)) << "\n"; };

    if (lines.empty()) {
        std::string line;
        while (std::getline(std::cin, line)) serve(line);
    } else {
        for (const auto& line : lines) serve(line);
    }
    return 0;
}

int cmd_report(const std::string& result_path, const std::string& out_path,
               const std::string& format_token) {
    ExperimentResult result = load_result(result_path);
    ReportFormat format = parse_report_format(format_token);
    if (out_path.empty()) {
        std::cout << render_report(result, format);
    } else {
        emit_report(result, format, out_path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"powernap: scheduled sleep power manager and battery drain simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;
    std::string format_token = "csv";
    std::optional<double> duration_hours;

    auto* run = app.add_subcommand("run", "run one scenario and report consumption");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_path, "write a report or result file");
    run->add_option("--format", format_token, "csv, text or json (for --out)")
        ->check(CLI::IsMember({"csv", "text", "json"}));
    run->add_option("--duration-hours", duration_hours, "override scenario duration");

    auto* compare = app.add_subcommand("compare", "compare before/ram/disk/off configurations");
    compare->add_option("scenario", scenario_path, "scenario JSON file")->required();
    compare->add_option("--out", out_path, "write the comparison table");
    compare->add_option("--format", format_token, "csv or text")
        ->check(CLI::IsMember({"csv", "text"}));
    compare->add_option("--duration-hours", duration_hours, "override scenario duration");

    std::vector<std::string> client_lines;
    std::string state_file;
    std::string timer_image;
    auto* client = app.add_subcommand("client", "send protocol commands to an engine");
    client->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    client->add_option("--state-file", state_file, "persist schedule state here");
    client->add_option("--timer-image", timer_image, "mirror the battery timer image here");
    client->add_option("command", client_lines, "command lines (stdin when omitted)");

    std::string result_path;
    auto* report = app.add_subcommand("report", "render a stored result file");
    report->add_option("result", result_path, "result JSON file from run --format json")->required();
    report->add_option("--out", out_path, "write instead of printing");
    report->add_option("--format", format_token, "csv or text")
        ->check(CLI::IsMember({"csv", "text"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run)) {
            return cmd_run(scenario_path, duration_hours, out_path, format_token);
        }
        if (app.got_subcommand(compare)) {
            return cmd_compare(scenario_path, duration_hours, out_path, format_token);
        }
        if (app.got_subcommand(client)) {
            return cmd_client(scenario_path, client_lines, state_file, timer_image);
        }
        return cmd_report(result_path, out_path, format_token);
    } catch (const powernap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
