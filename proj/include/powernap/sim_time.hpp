#pragma once

#include <string>

namespace powernap {

// Simulation time is measured in minutes since midnight of day 0. Values are
// doubles so that analytically exact instants (e.g. partial-minute depletion)
// can be represented; the event loop itself only generates whole minutes.
using SimTime = double;

constexpr int kMinutesPerDay = 1440;
constexpr double kMinutesPerHour = 60.0;

inline double minutes_to_hours(double minutes) { return minutes / kMinutesPerHour; }
inline double hours_to_minutes(double hours) { return hours * kMinutesPerHour; }

// Time of day in whole minutes since midnight, range [0, 1440).
int time_of_day(SimTime t);

// Parses "HH:MM" (00:00 .. 23:59) into minutes since midnight.
// Throws Error(MalformedTime) naming the offending token.
int parse_time_of_day(const std::string& text);

// Formats minutes since midnight as "HH:MM".
std::string format_time_of_day(int minutes);

// Canonical textual form of a simulation instant, e.g. "1350" or "1350.25".
// Integral values print without a decimal point so logs stay byte-stable.
std::string format_sim_time(SimTime t);

}  // namespace powernap
