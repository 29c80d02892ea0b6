#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "powernap/error.hpp"
#include "powernap/protocol.hpp"

using namespace powernap;

namespace {

ErrorCode parse_failure(const std::string& line) {
    try {
        parse_command(line);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a parse error for: " << line);
    return ErrorCode::ParseError;
}

Engine handset_engine(SimTime start = 0.0) {
    Device device(test::dual_core_profile(), test::handset_sources());
    return Engine(std::move(device), start);
}

}  // namespace

TEST_CASE("SET-SCHEDULE parses times and level") {
    Command command = parse_command("SET-SCHEDULE sleep=22:30 wake=06:30 level=complete-off");
    REQUIRE(std::holds_alternative<SetScheduleCmd>(command));
    const auto& cmd = std::get<SetScheduleCmd>(command);
    CHECK(cmd.sleep_time == 1350);
    CHECK(cmd.wake_time == 390);
    CHECK(cmd.level == SleepLevel::CompleteOff);

    // argument order does not matter
    CHECK(parse_command("SET-SCHEDULE level=suspend-to-ram wake=06:30 sleep=22:30") ==
          Command{SetScheduleCmd{1350, 390, SleepLevel::SuspendToRam}});
}

TEST_CASE("bare verbs") {
    CHECK(std::holds_alternative<StatusCmd>(parse_command("STATUS")));
    CHECK(std::holds_alternative<DisableCmd>(parse_command("DISABLE")));
    CHECK(parse_command("SET-MINIMAL") == Command{SetMinimalCmd{}});
    CHECK(parse_command("SET-MINIMAL names=phone,sms") ==
          Command{SetMinimalCmd{{"phone", "sms"}}});
}

TEST_CASE("parse errors carry stable codes and name the offending token") {
    CHECK(parse_failure("") == ErrorCode::EmptyLine);
    CHECK(parse_failure("   ") == ErrorCode::EmptyLine);
    CHECK(parse_failure("REBOOT") == ErrorCode::UnknownVerb);
    CHECK(parse_failure("set-schedule sleep=22:30 wake=06:30 level=complete-off") ==
          ErrorCode::UnknownVerb);
    CHECK(parse_failure("SET-SCHEDULE sleep=25:00 wake=06:30 level=complete-off") ==
          ErrorCode::MalformedTime);
    CHECK(parse_failure("SET-SCHEDULE sleep=2:30 wake=06:30 level=complete-off") ==
          ErrorCode::MalformedTime);
    CHECK(parse_failure("SET-SCHEDULE sleep=22:30 wake=06:30 level=off") ==
          ErrorCode::UnknownLevel);
    CHECK(parse_failure("SET-SCHEDULE sleep=22:30 wake=06:30") == ErrorCode::MissingArgument);
    CHECK(parse_failure("SET-SCHEDULE sleep=22:30 wake=06:30 level=complete-off extra=1") ==
          ErrorCode::UnexpectedArgument);
    CHECK(parse_failure("SET-SCHEDULE sleep=22:30 sleep=23:00 wake=06:30 level=complete-off") ==
          ErrorCode::MalformedArgument);
    CHECK(parse_failure("STATUS now") == ErrorCode::MalformedArgument);
    CHECK(parse_failure("STATUS verbose=1") == ErrorCode::UnexpectedArgument);
    CHECK(parse_failure("SET-MINIMAL names=a,,b") == ErrorCode::MalformedArgument);

    try {
        parse_command("SET-SCHEDULE sleep=25:00 wake=06:30 level=complete-off");
    } catch (const Error& e) {
        std::string what = e.what();
        CHECK(what.find("25:00") != std::string::npos);
        CHECK(what.find("position 19") != std::string::npos);
    }
}

TEST_CASE("canonical formatting round trips") {
    std::vector<Command> commands = {
        SetScheduleCmd{1350, 390, SleepLevel::CompleteOff},
        SetScheduleCmd{0, 1439, SleepLevel::SuspendToRam},
        SetMinimalCmd{},
        SetMinimalCmd{{"phone", "sms"}},
        StatusCmd{},
        DisableCmd{},
    };
    for (const auto& command : commands) {
        std::string text = format_command(command);
        CHECK(parse_command(text) == command);
        CHECK(format_command(parse_command(text)) == text);
    }

    // canonicalization: odd spacing parses to the same command
    CHECK(format_command(parse_command("SET-SCHEDULE   sleep=22:30  wake=06:30 level=complete-off")) ==
          "SET-SCHEDULE sleep=22:30 wake=06:30 level=complete-off");
}

TEST_CASE("property: random valid commands survive format/parse") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> tod(0, 1439);
    std::uniform_int_distribution<int> level(0, 2);
    std::uniform_int_distribution<int> kind(0, 3);
    std::vector<std::string> names = {"phone", "sms", "wifi", "screen", "gmail", "android-os"};
    std::uniform_int_distribution<std::size_t> name_pick(0, names.size() - 1);
    std::uniform_int_distribution<int> name_count(0, 4);

    for (int trial = 0; trial < 500; ++trial) {
        Command command;
        switch (kind(rng)) {
            case 0: {
                SetScheduleCmd cmd;
                cmd.sleep_time = tod(rng);
                do {
                    cmd.wake_time = tod(rng);
                } while (cmd.wake_time == cmd.sleep_time);
                cmd.level = static_cast<SleepLevel>(level(rng));
                command = cmd;
                break;
            }
            case 1: {
                SetMinimalCmd cmd;
                int n = name_count(rng);
                for (int i = 0; i < n; ++i) cmd.names.insert(names[name_pick(rng)]);
                command = cmd;
                break;
            }
            case 2: command = StatusCmd{}; break;
            default: command = DisableCmd{}; break;
        }
        std::string canonical = format_command(command);
        CHECK(parse_command(canonical) == command);
        CHECK(format_command(parse_command(canonical)) == canonical);
    }
}

TEST_CASE("status on a fresh device") {
    Engine engine = handset_engine();
    Reply reply = apply_line("STATUS", engine);
    CHECK(reply.ok);
    CHECK(to_line(reply) ==
          "OK state=active remaining_mah=1650.000 remaining_pct=100.00 schedule=none minimal=none");
}

TEST_CASE("commands drive the engine") {
    Engine engine = handset_engine();

    Reply reply = apply_line("SET-SCHEDULE sleep=22:30 wake=06:30 level=complete-off", engine);
    CHECK(reply.ok);
    CHECK(to_line(reply) ==
          "OK scheduled sleep=22:30 wake=06:30 level=complete-off window_min=480");
    REQUIRE(engine.schedule().has_value());
    CHECK(engine.schedule()->sleep_time == 1350);

    reply = apply_line("SET-MINIMAL names=phone,sms", engine);
    CHECK(reply.ok);
    reply = apply_line("STATUS", engine);
    CHECK(reply.body.find("minimal=phone,sms") != std::string::npos);
    CHECK(reply.body.find("schedule=22:30-06:30") != std::string::npos);

    reply = apply_line("DISABLE", engine);
    CHECK(reply.ok);
    reply = apply_line("STATUS", engine);
    CHECK(reply.body.find("enabled=false") != std::string::npos);
}

TEST_CASE("equal sleep and wake times are refused") {
    Engine engine = handset_engine();
    Reply reply = apply_line("SET-SCHEDULE sleep=10:00 wake=10:00 level=complete-off", engine);
    CHECK_FALSE(reply.ok);
    CHECK(reply.code == "equal-times");
    CHECK_FALSE(engine.schedule().has_value());
}

TEST_CASE("asleep devices are unreachable except ram status") {
    Engine engine = handset_engine(1350.0);
    apply_line("SET-SCHEDULE sleep=22:30 wake=06:30 level=complete-off", engine);
    engine.run_until(1400.0);  // now in complete-off
    REQUIRE_FALSE(engine.device().state().is_active());

    Reply reply = apply_line("SET-SCHEDULE sleep=23:00 wake=07:00 level=complete-off", engine);
    CHECK_FALSE(reply.ok);
    CHECK(reply.code == "device-asleep");
    CHECK(engine.schedule()->sleep_time == 1350);  // unchanged

    reply = apply_line("STATUS", engine);
    CHECK_FALSE(reply.ok);
    CHECK(reply.code == "device-asleep");

    // suspend-to-ram still answers status queries, nothing else
    Engine ram_engine = handset_engine(1350.0);
    apply_line("SET-MINIMAL names=phone,sms", ram_engine);
    apply_line("SET-SCHEDULE sleep=22:30 wake=06:30 level=suspend-to-ram", ram_engine);
    ram_engine.run_until(1400.0);
    REQUIRE_FALSE(ram_engine.device().state().is_active());

    reply = apply_line("STATUS", ram_engine);
    CHECK(reply.ok);
    CHECK(reply.body.find("state=asleep:suspend-to-ram") != std::string::npos);

    reply = apply_line("SET-MINIMAL names=phone", ram_engine);
    CHECK_FALSE(reply.ok);
    CHECK(reply.code == "device-asleep");
    reply = apply_line("DISABLE", ram_engine);
    CHECK_FALSE(reply.ok);
    CHECK(reply.code == "device-asleep");
}

TEST_CASE("schedules can be set regardless of battery level") {
    DeviceProfile profile = test::dual_core_profile();
    profile.capacity_mah = 0.001;
    Device device(profile, test::handset_sources());
    Engine engine(std::move(device), 0.0);
    engine.run_until(60.0);  // long depleted
    REQUIRE(engine.device().battery().depleted());

    Reply reply = apply_line("SET-SCHEDULE sleep=22:30 wake=06:30 level=complete-off", engine);
    CHECK(reply.ok);  // validation never consults the battery
}

TEST_CASE("unknown daemons in SET-MINIMAL leave state untouched") {
    Engine engine = handset_engine();
    std::string before = to_line(apply_line("STATUS", engine));
    Reply reply = apply_line("SET-MINIMAL names=quux", engine);
    CHECK_FALSE(reply.ok);
    CHECK(reply.code == "unknown-daemon");
    CHECK(to_line(apply_line("STATUS", engine)) == before);
}

TEST_CASE("malformed lines never mutate the engine") {
    std::vector<std::pair<std::string, std::string>> corpus = {
        {"", "empty-line"},
        {"NOPE", "unknown-verb"},
        {"SET-SCHEDULE sleep=24:00 wake=06:30 level=complete-off", "malformed-time"},
        {"SET-SCHEDULE sleep=22:30 wake=06:30 level=hibernate", "unknown-level"},
        {"SET-SCHEDULE wake=06:30 level=complete-off", "missing-argument"},
        {"SET-SCHEDULE sleep=22:30 wake=06:30 level=complete-off bogus=1", "unexpected-argument"},
        {"STATUS STATUS", "malformed-argument"},
    };
    Engine engine = handset_engine();
    std::string before = to_line(apply_line("STATUS", engine));
    for (const auto& [line, code] : corpus) {
        Reply reply = apply_line(line, engine);
        CHECK_FALSE(reply.ok);
        CHECK(reply.code == code);
        CHECK(to_line(reply).rfind("ERR " + code, 0) == 0);
    }
    CHECK(to_line(apply_line("STATUS", engine)) == before);
}
