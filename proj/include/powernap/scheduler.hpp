#pragma once

#include <deque>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "powernap/power_state.hpp"
#include "powernap/rtc_timer.hpp"

namespace powernap {

// User-chosen daily sleep window. Times of day are minutes since midnight;
// the window may cross midnight and is closed at sleep_time, open at
// wake_time, so each boundary fires exactly once per day.
struct SleepSchedule {
    int sleep_time = 0;
    int wake_time = 0;
    SleepLevel level = SleepLevel::CompleteOff;
    bool enabled = true;

    void validate() const;      // throws MalformedTime, EqualTimes
    int window_minutes() const; // (wake_time - sleep_time) mod 1440, in (0, 1440)
    bool contains(int tod) const;
};

struct ScheduleBoundary {
    bool is_sleep = false;  // false: wake boundary
    SimTime at = 0.0;
};

// Earliest future boundary of the schedule window relative to `now`. Inside
// the window the next boundary is the wake instant, outside it the sleep
// instant. Throws DisabledSchedule when the schedule is off.
ScheduleBoundary next_event(SimTime now, const SleepSchedule& schedule);

enum class EventKind {
    Arm,
    EnterSleep,
    TimerFire,
    Wake,
    FailedWake,
    Failure,
    Warning,
    Command,
};

const char* to_token(EventKind kind);

struct Event {
    SimTime at = 0.0;
    EventKind kind = EventKind::Failure;
    std::string detail;  // canonical key=value text, byte-stable across runs
};

std::string to_line(const Event& event);

struct TimeSeriesPoint {
    SimTime at = 0.0;
    double remaining_mah = 0.0;
};

struct EngineConfig {
    std::optional<std::filesystem::path> state_file;        // schedule persistence
    std::optional<std::filesystem::path> timer_image_file;  // mirrored timer image
    int sample_every_min = 10;
    int wake_lead_min = 0;  // wake this many minutes before wake_time
};

// The sleep time manager: owns the device, the battery timer and the
// simulated clock, and drives sleep/wake transitions from the schedule.
// Single-threaded; commands are queued and drained between events.
class Engine {
  public:
    Engine(Device device, SimTime start, EngineConfig config = {});

    // Replaces the current schedule. Persists to the state file when one is
    // configured, before returning. Validation never consults battery level.
    void set_schedule(const SleepSchedule& schedule);
    void disable_schedule();
    const std::optional<SleepSchedule>& schedule() const { return schedule_; }

    void set_minimal_functions(const std::set<std::string>& names);

    // Enqueues a protocol line for delivery at simulation instant `at`.
    void queue_command(SimTime at, const std::string& line);

    // Advances simulated time to `end`, integrating drain between events and
    // firing, in order: arm + enter_sleep at each sleep boundary, timer_fire
    // + wake at each armed wake instant. Transition errors become failure
    // events; the simulation continues. Returns events appended by this call.
    std::vector<Event> run_until(SimTime end);

    SimTime now() const { return clock_.now(); }
    Device& device() { return device_; }
    const Device& device() const { return device_; }
    const BatteryTimer& timer() const { return timer_; }
    const std::vector<Event>& event_log() const { return log_; }
    const std::vector<TimeSeriesPoint>& time_series() const { return series_; }

    struct Status {
        bool active = true;
        std::optional<SleepLevel> level;
        double remaining_mah = 0.0;
        double remaining_pct = 0.0;
        std::optional<SleepSchedule> schedule;
        std::set<std::string> minimal;
    };
    Status status() const;

    // True when a persisted state file was found and applied at construction.
    bool state_loaded() const { return state_loaded_; }

  private:
    void persist_state() const;
    void load_state();
    void persist_timer() const;
    void log_event(SimTime at, EventKind kind, std::string detail);
    void sample(SimTime at);
    void handle_sleep_boundary(SimTime at);
    void handle_timer_fire(const WakeEvent& fired);
    void drain_commands(SimTime upto);
    std::optional<SimTime> next_sleep_boundary() const;

    Device device_;
    SimClock clock_;
    BatteryTimer timer_;
    std::optional<SleepSchedule> schedule_;
    EngineConfig config_;

    std::vector<Event> log_;
    std::vector<TimeSeriesPoint> series_;
    std::deque<std::pair<SimTime, std::string>> pending_commands_;
    SimTime start_;
    SimTime last_sleep_boundary_ = -1.0;
    SimTime next_sample_ = 0.0;
    bool started_ = false;
    bool state_loaded_ = false;
};

}  // namespace powernap
