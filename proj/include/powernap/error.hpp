#pragma once

#include <stdexcept>
#include <string>

namespace powernap {

// Stable machine-readable error codes. The kebab-case token of each code is
// part of the external interface (protocol ERR replies, CLI exit messages).
enum class ErrorCode {
    DuplicateName,
    UnknownSource,
    DepletedBattery,
    InvalidTransition,
    EqualTimes,
    MalformedTime,
    UnknownDaemon,
    DisabledSchedule,
    PastInstant,
    AlreadyArmed,
    ClockRegression,
    CorruptImage,
    DeviceAsleep,
    EmptyWindow,
    WindowOutOfRange,
    EmptyLine,
    UnknownVerb,
    UnknownLevel,
    MissingArgument,
    UnexpectedArgument,
    MalformedArgument,
    ParseError,
    InvariantViolation,
    IoError,
};

const char* to_token(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_token(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace powernap
