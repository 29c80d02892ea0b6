#include "powernap/error.hpp"

namespace powernap {

const char* to_token(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateName: return "duplicate-name";
        case ErrorCode::UnknownSource: return "unknown-source";
        case ErrorCode::DepletedBattery: return "depleted-battery";
        case ErrorCode::InvalidTransition: return "invalid-transition";
        case ErrorCode::EqualTimes: return "equal-times";
        case ErrorCode::MalformedTime: return "malformed-time";
        case ErrorCode::UnknownDaemon: return "unknown-daemon";
        case ErrorCode::DisabledSchedule: return "disabled-schedule";
        case ErrorCode::PastInstant: return "past-instant";
        case ErrorCode::AlreadyArmed: return "already-armed";
        case ErrorCode::ClockRegression: return "clock-regression";
        case ErrorCode::CorruptImage: return "corrupt-image";
        case ErrorCode::DeviceAsleep: return "device-asleep";
        case ErrorCode::EmptyWindow: return "empty-window";
        case ErrorCode::WindowOutOfRange: return "window-out-of-range";
        case ErrorCode::EmptyLine: return "empty-line";
        case ErrorCode::UnknownVerb: return "unknown-verb";
        case ErrorCode::UnknownLevel: return "unknown-level";
        case ErrorCode::MissingArgument: return "missing-argument";
        case ErrorCode::UnexpectedArgument: return "unexpected-argument";
        case ErrorCode::MalformedArgument: return "malformed-argument";
        case ErrorCode::ParseError: return "parse-error";
        case ErrorCode::InvariantViolation: return "invariant-violation";
        case ErrorCode::IoError: return "io-error";
    }
    return "unknown-error";
}

}  // namespace powernap
