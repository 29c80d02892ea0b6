#include "powernap/protocol.hpp"

#include <cstdio>
#include <sstream>

#include "powernap/error.hpp"

namespace powernap {

namespace {

struct Token {
    std::string text;
    std::size_t position = 0;  // byte offset in the line
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == ' ') {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ') ++i;
        tokens.push_back({line.substr(start, i - start), start});
    }
    return tokens;
}

std::string at_position(const Token& token) {
    return "\"" + token.text + "\" at position " + std::to_string(token.position);
}

// key=value arguments after the verb; names/order validated by the caller.
struct Args {
    std::vector<std::pair<std::string, Token>> entries;

    const Token* find(const std::string& key) const {
        for (const auto& [k, v] : entries) {
            if (k == key) return &v;
        }
        return nullptr;
    }
};

Args parse_args(const std::vector<Token>& tokens, std::size_t first,
                const std::vector<std::string>& allowed) {
    Args args;
    for (std::size_t i = first; i < tokens.size(); ++i) {
        const Token& token = tokens[i];
        auto eq = token.text.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw Error(ErrorCode::MalformedArgument, at_position(token));
        }
        std::string key = token.text.substr(0, eq);
        std::string value = token.text.substr(eq + 1);
        bool ok = false;
        for (const auto& name : allowed) ok = ok || name == key;
        if (!ok) throw Error(ErrorCode::UnexpectedArgument, at_position(token));
        if (args.find(key)) throw Error(ErrorCode::MalformedArgument, "duplicate " + at_position(token));
        args.entries.emplace_back(key, Token{value, token.position + eq + 1});
    }
    return args;
}

const Token& require(const Args& args, const std::string& key, const std::string& verb) {
    const Token* token = args.find(key);
    if (!token) {
        throw Error(ErrorCode::MissingArgument, verb + " requires " + key + "=");
    }
    return *token;
}

int parse_time_token(const Token& token) {
    try {
        return parse_time_of_day(token.text);
    } catch (const Error&) {
        throw Error(ErrorCode::MalformedTime, at_position(token));
    }
}

std::string format_double(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
}

std::string join(const std::set<std::string>& names) {
    std::string out;
    for (const auto& name : names) {
        if (!out.empty()) out += ",";
        out += name;
    }
    return out;
}

}  // namespace

Command parse_command(const std::string& line) {
    auto tokens = tokenize(line);
    if (tokens.empty()) {
        throw Error(ErrorCode::EmptyLine, "no command verb");
    }
    const std::string& verb = tokens[0].text;

    if (verb == "SET-SCHEDULE") {
        Args args = parse_args(tokens, 1, {"sleep", "wake", "level"});
        SetScheduleCmd cmd;
        cmd.sleep_time = parse_time_token(require(args, "sleep", verb));
        cmd.wake_time = parse_time_token(require(args, "wake", verb));
        const Token& level = require(args, "level", verb);
        try {
            cmd.level = parse_sleep_level(level.text);
        } catch (const Error&) {
            throw Error(ErrorCode::UnknownLevel, at_position(level));
        }
        return cmd;
    }
    if (verb == "SET-MINIMAL") {
        Args args = parse_args(tokens, 1, {"names"});
        SetMinimalCmd cmd;
        if (const Token* names = args.find("names")) {
            std::istringstream stream(names->text);
            std::string name;
            while (std::getline(stream, name, ',')) {
                if (name.empty()) {
                    throw Error(ErrorCode::MalformedArgument, "empty name in " + at_position(*names));
                }
                cmd.names.insert(name);
            }
        }
        return cmd;
    }
    if (verb == "STATUS") {
        parse_args(tokens, 1, {});
        return StatusCmd{};
    }
    if (verb == "DISABLE") {
        parse_args(tokens, 1, {});
        return DisableCmd{};
    }
    throw Error(ErrorCode::UnknownVerb, at_position(tokens[0]));
}

std::string format_command(const Command& command) {
    if (const auto* cmd = std::get_if<SetScheduleCmd>(&command)) {
        return "SET-SCHEDULE sleep=" + format_time_of_day(cmd->sleep_time) +
               " wake=" + format_time_of_day(cmd->wake_time) +
               " level=" + to_token(cmd->level);
    }
    if (const auto* cmd = std::get_if<SetMinimalCmd>(&command)) {
        if (cmd->names.empty()) return "SET-MINIMAL";
        return "SET-MINIMAL names=" + join(cmd->names);
    }
    if (std::holds_alternative<StatusCmd>(command)) return "STATUS";
    return "DISABLE";
}

std::string to_line(const Reply& reply) {
    if (reply.ok) return reply.body.empty() ? "OK" : "OK " + reply.body;
    return "ERR " + reply.code + (reply.body.empty() ? "" : " " + reply.body);
}

namespace {

Reply error_reply(const Error& e) {
    Reply reply;
    reply.ok = false;
    reply.code = to_token(e.code());
    std::string what = e.what();
    // Error::what() is "<token>: <message>"; keep just the message.
    std::string prefix = reply.code + ": ";
    reply.body = what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
    return reply;
}

Reply status_reply(const Engine& engine) {
    Engine::Status status = engine.status();
    std::string body = "state=";
    body += status.active ? "active" : std::string("asleep:") + to_token(*status.level);
    body += " remaining_mah=" + format_double(status.remaining_mah, 3);
    body += " remaining_pct=" + format_double(status.remaining_pct, 2);
    if (status.schedule) {
        body += " schedule=" + format_time_of_day(status.schedule->sleep_time) + "-" +
                format_time_of_day(status.schedule->wake_time);
        body += " level=";
        body += to_token(status.schedule->level);
        body += " enabled=";
        body += status.schedule->enabled ? "true" : "false";
    } else {
        body += " schedule=none";
    }
    body += " minimal=" + (status.minimal.empty() ? "none" : join(status.minimal));
    Reply reply;
    reply.ok = true;
    reply.body = body;
    return reply;
}

}  // namespace

Reply apply_command(const Command& command, Engine& engine) {
    // Reachability: asleep devices are unreachable, except that
    // suspend-to-ram keeps enough alive to answer status queries.
    if (!engine.device().state().is_active()) {
        bool status_ok = engine.device().state().sleep_level() == SleepLevel::SuspendToRam &&
                         std::holds_alternative<StatusCmd>(command);
        if (!status_ok) {
            Reply reply;
            reply.ok = false;
            reply.code = to_token(ErrorCode::DeviceAsleep);
            reply.body = std::string("device is in ") +
                         to_token(*engine.device().state().sleep_level());
            return reply;
        }
    }

    try {
        if (const auto* cmd = std::get_if<SetScheduleCmd>(&command)) {
            SleepSchedule schedule;
            schedule.sleep_time = cmd->sleep_time;
            schedule.wake_time = cmd->wake_time;
            schedule.level = cmd->level;
            schedule.enabled = true;
            engine.set_schedule(schedule);
            Reply reply;
            reply.ok = true;
            reply.body = "scheduled sleep=" + format_time_of_day(schedule.sleep_time) +
                         " wake=" + format_time_of_day(schedule.wake_time) + " level=" +
                         to_token(schedule.level) +
                         " window_min=" + std::to_string(schedule.window_minutes());
            return reply;
        }
        if (const auto* cmd = std::get_if<SetMinimalCmd>(&command)) {
            engine.set_minimal_functions(cmd->names);
            Reply reply;
            reply.ok = true;
            reply.body = "minimal=" + (cmd->names.empty() ? "none" : join(cmd->names));
            return reply;
        }
        if (std::holds_alternative<StatusCmd>(command)) {
            return status_reply(engine);
        }
        engine.disable_schedule();
        Reply reply;
        reply.ok = true;
        reply.body = "disabled";
        return reply;
    } catch (const Error& e) {
        return error_reply(e);
    }
}

Reply apply_line(const std::string& line, Engine& engine) {
    try {
        return apply_command(parse_command(line), engine);
    } catch (const Error& e) {
        return error_reply(e);
    }
}

}  // namespace powernap
