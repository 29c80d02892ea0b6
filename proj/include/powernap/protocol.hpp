#pragma once

#include <set>
#include <string>
#include <variant>

#include "powernap/scheduler.hpp"

namespace powernap {

// Line protocol commands. Wire format: one UTF-8 line per command, verb
// first, then key=value arguments separated by single spaces. The full
// grammar lives in docs/formats.md.
struct SetScheduleCmd {
    int sleep_time = 0;
    int wake_time = 0;
    SleepLevel level = SleepLevel::CompleteOff;
    friend bool operator==(const SetScheduleCmd&, const SetScheduleCmd&) = default;
};

struct SetMinimalCmd {
    std::set<std::string> names;
    friend bool operator==(const SetMinimalCmd&, const SetMinimalCmd&) = default;
};

struct StatusCmd {
    friend bool operator==(const StatusCmd&, const StatusCmd&) = default;
};

struct DisableCmd {
    friend bool operator==(const DisableCmd&, const DisableCmd&) = default;
};

using Command = std::variant<SetScheduleCmd, SetMinimalCmd, StatusCmd, DisableCmd>;

// Parses one command line. Errors carry a stable code and name the offending
// token and its byte position in the line.
Command parse_command(const std::string& line);

// Canonical textual form; parse_command(format_command(c)) == c.
std::string format_command(const Command& command);

struct Reply {
    bool ok = false;
    std::string code;  // stable error token, empty when ok
    std::string body;
};

// "OK <body>" or "ERR <code> <body>".
std::string to_line(const Reply& reply);

// Applies a parsed command to the engine. A command whose reply is not ok
// leaves the engine untouched. While asleep the device is unreachable,
// except that suspend-to-ram still answers status queries.
Reply apply_command(const Command& command, Engine& engine);

// parse + apply; parse failures become ERR replies instead of exceptions.
Reply apply_line(const std::string& line, Engine& engine);

}  // namespace powernap
