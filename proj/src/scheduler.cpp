#include "powernap/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "powernap/error.hpp"
#include "powernap/protocol.hpp"

namespace powernap {

void SleepSchedule::validate() const {
    if (sleep_time < 0 || sleep_time >= kMinutesPerDay) {
        throw Error(ErrorCode::MalformedTime, "sleep time " + std::to_string(sleep_time));
    }
    if (wake_time < 0 || wake_time >= kMinutesPerDay) {
        throw Error(ErrorCode::MalformedTime, "wake time " + std::to_string(wake_time));
    }
    if (sleep_time == wake_time) {
        throw Error(ErrorCode::EqualTimes, "sleep and wake at " + format_time_of_day(sleep_time));
    }
}

int SleepSchedule::window_minutes() const {
    return ((wake_time - sleep_time) % kMinutesPerDay + kMinutesPerDay) % kMinutesPerDay;
}

bool SleepSchedule::contains(int tod) const {
    if (sleep_time < wake_time) return tod >= sleep_time && tod < wake_time;
    return tod >= sleep_time || tod < wake_time;
}

ScheduleBoundary next_event(SimTime now, const SleepSchedule& schedule) {
    if (!schedule.enabled) {
        throw Error(ErrorCode::DisabledSchedule, "schedule is disabled");
    }
    schedule.validate();
    int tod = time_of_day(now);
    double into_minute = now - std::floor(now / kMinutesPerDay) * kMinutesPerDay - tod;
    if (schedule.contains(tod)) {
        int ahead = ((schedule.wake_time - tod) % kMinutesPerDay + kMinutesPerDay) % kMinutesPerDay;
        if (ahead == 0) ahead = kMinutesPerDay;  // tod == wake only via fractional carry
        return {false, now - into_minute + ahead};
    }
    int ahead = ((schedule.sleep_time - tod) % kMinutesPerDay + kMinutesPerDay) % kMinutesPerDay;
    return {true, now - into_minute + ahead};
}

const char* to_token(EventKind kind) {
    switch (kind) {
        case EventKind::Arm: return "arm";
        case EventKind::EnterSleep: return "enter-sleep";
        case EventKind::TimerFire: return "timer-fire";
        case EventKind::Wake: return "wake";
        case EventKind::FailedWake: return "failed-wake";
        case EventKind::Failure: return "failure";
        case EventKind::Warning: return "warning";
        case EventKind::Command: return "command";
    }
    return "unknown";
}

std::string to_line(const Event& event) {
    std::string line = "t=" + format_sim_time(event.at) + " " + to_token(event.kind);
    if (!event.detail.empty()) line += " " + event.detail;
    return line;
}

Engine::Engine(Device device, SimTime start, EngineConfig config)
    : device_(std::move(device)), clock_(start), config_(std::move(config)), start_(start) {
    if (config_.sample_every_min < 1) config_.sample_every_min = 1;
    next_sample_ = start;
    if (config_.state_file) load_state();
    device_.set_timer_installed(schedule_ && schedule_->enabled);
    persist_timer();
}

void Engine::set_schedule(const SleepSchedule& schedule) {
    schedule.validate();
    schedule_ = schedule;
    device_.set_timer_installed(schedule_->enabled);
    persist_state();
}

void Engine::disable_schedule() {
    if (schedule_) schedule_->enabled = false;
    device_.set_timer_installed(false);
    persist_state();
}

void Engine::set_minimal_functions(const std::set<std::string>& names) {
    device_.services().set_minimal_functions(names);
    persist_state();
}

void Engine::queue_command(SimTime at, const std::string& line) {
    pending_commands_.emplace_back(at, line);
    std::stable_sort(pending_commands_.begin(), pending_commands_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
}

Engine::Status Engine::status() const {
    Status s;
    s.active = device_.state().is_active();
    s.level = device_.state().sleep_level();
    s.remaining_mah = device_.battery().remaining_mah();
    s.remaining_pct = device_.battery().remaining_fraction() * 100.0;
    s.schedule = schedule_;
    s.minimal = device_.services().minimal_names();
    return s;
}

std::optional<SimTime> Engine::next_sleep_boundary() const {
    if (!schedule_ || !schedule_->enabled || !device_.state().is_active()) return std::nullopt;
    SimTime now = clock_.now();
    int tod = time_of_day(now);
    SimTime minute_start = std::floor(now);
    int ahead = ((schedule_->sleep_time - tod) % kMinutesPerDay + kMinutesPerDay) % kMinutesPerDay;
    SimTime at = minute_start + ahead;  // whole-minute boundary, >= now
    while (at <= last_sleep_boundary_ || at < now) at += kMinutesPerDay;
    return at;
}

void Engine::log_event(SimTime at, EventKind kind, std::string detail) {
    log_.push_back({at, kind, std::move(detail)});
}

void Engine::sample(SimTime at) {
    series_.push_back({at, device_.battery().remaining_mah()});
}

void Engine::handle_sleep_boundary(SimTime at) {
    last_sleep_boundary_ = at;
    const SleepSchedule& schedule = *schedule_;

    SimTime wake_at = at + schedule.window_minutes();
    if (config_.wake_lead_min > 0) {
        wake_at = std::max(at + 1.0, wake_at - config_.wake_lead_min);
    }

    try {
        timer_.arm(wake_at, at);
        persist_timer();
        log_event(at, EventKind::Arm, "wake_at=" + format_sim_time(wake_at));
    } catch (const Error& e) {
        log_event(at, EventKind::Failure, std::string("code=") + to_token(e.code()));
        return;
    }

    if (schedule.level != SleepLevel::SuspendToRam &&
        !device_.services().minimal_names().empty()) {
        log_event(at, EventKind::Warning,
                  std::string("minimal functions ignored for level=") + to_token(schedule.level));
    }

    try {
        TransitionRecord record = device_.enter_sleep(schedule.level, at);
        std::string detail = std::string("level=") + to_token(record.level) +
                             " stopped=" + std::to_string(record.daemons.size());
        if (record.transition_cost_mah > 0) {
            detail += " cost_mah=" + format_sim_time(record.transition_cost_mah);
        }
        log_event(at, EventKind::EnterSleep, detail);
    } catch (const Error& e) {
        log_event(at, EventKind::Failure, std::string("code=") + to_token(e.code()));
    }
}

void Engine::handle_timer_fire(const WakeEvent& fired) {
    persist_timer();
    log_event(fired.at, EventKind::TimerFire, "");
    try {
        TransitionRecord record = device_.wake(fired.at);
        std::string detail = std::string("level=") + to_token(record.level) +
                             " restarted=" + std::to_string(record.daemons.size());
        if (record.transition_cost_mah > 0) {
            detail += " cost_mah=" + format_sim_time(record.transition_cost_mah);
        }
        log_event(fired.at, EventKind::Wake, detail);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::DepletedBattery) {
            log_event(fired.at, EventKind::FailedWake, "code=depleted-battery");
        } else {
            log_event(fired.at, EventKind::Failure, std::string("code=") + to_token(e.code()));
        }
    }
}

void Engine::drain_commands(SimTime upto) {
    while (!pending_commands_.empty() && pending_commands_.front().first <= upto) {
        auto [at, line] = pending_commands_.front();
        pending_commands_.pop_front();
        Reply reply = apply_line(line, *this);
        log_event(upto, EventKind::Command, "line=\"" + line + "\" reply=\"" + to_line(reply) + "\"");
    }
}

std::vector<Event> Engine::run_until(SimTime end) {
    if (end < clock_.now()) {
        throw Error(ErrorCode::ClockRegression, "run_until into the past");
    }
    std::size_t log_mark = log_.size();

    if (!started_) {
        started_ = true;
        sample(clock_.now());
        next_sample_ = clock_.now() + config_.sample_every_min;
        drain_commands(clock_.now());
    }

    while (true) {
        SimTime now = clock_.now();

        SimTime next = end;
        if (timer_.armed() && timer_.wake_at() < next) next = std::max(timer_.wake_at(), now);
        if (auto boundary = next_sleep_boundary(); boundary && *boundary < next) {
            next = std::max(*boundary, now);
        }
        if (!pending_commands_.empty() && pending_commands_.front().first < next) {
            next = std::max(pending_commands_.front().first, now);
        }
        if (next_sample_ < next) next = std::max(next_sample_, now);

        if (next > now) {
            device_.integrate(now, next - now);
        }
        auto fired = timer_.advance(clock_, next);
        if (fired) handle_timer_fire(*fired);

        if (auto boundary = next_sleep_boundary(); boundary && *boundary <= next) {
            handle_sleep_boundary(*boundary);
        }

        drain_commands(next);

        while (next_sample_ <= next) {
            sample(next_sample_);
            next_sample_ += config_.sample_every_min;
        }

        if (next >= end) break;
    }

    if (series_.empty() || series_.back().at < end) sample(end);
    return {log_.begin() + static_cast<std::ptrdiff_t>(log_mark), log_.end()};
}

namespace {
std::string join(const std::set<std::string>& names) {
    std::string out;
    for (const auto& name : names) {
        if (!out.empty()) out += ",";
        out += name;
    }
    return out;
}
}  // namespace

void Engine::persist_state() const {
    if (!config_.state_file) return;
    std::ostringstream out;
    out << "version=1\n";
    if (schedule_) {
        out << "schedule.enabled=" << (schedule_->enabled ? "true" : "false") << "\n";
        out << "schedule.sleep=" << format_time_of_day(schedule_->sleep_time) << "\n";
        out << "schedule.wake=" << format_time_of_day(schedule_->wake_time) << "\n";
        out << "schedule.level=" << to_token(schedule_->level) << "\n";
    }
    out << "minimal=" << join(device_.services().minimal_names()) << "\n";
    std::ofstream file(*config_.state_file, std::ios::trunc);
    if (!file) {
        throw Error(ErrorCode::IoError, "cannot write " + config_.state_file->string());
    }
    file << out.str();
}

void Engine::load_state() {
    std::ifstream file(*config_.state_file);
    if (!file) return;  // no persisted state: scenario defaults apply
    state_loaded_ = true;

    std::optional<SleepSchedule> schedule;
    std::set<std::string> minimal;
    bool have_schedule = false;
    SleepSchedule loaded;
    loaded.enabled = false;

    std::string line;
    int lineno = 0;
    while (std::getline(file, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ParseError, config_.state_file->string() + ":" +
                                                   std::to_string(lineno) + ": expected key=value");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        if (key == "version") {
            if (value != "1") {
                throw Error(ErrorCode::ParseError, "unsupported state file version " + value);
            }
        } else if (key == "schedule.enabled") {
            loaded.enabled = value == "true";
            have_schedule = true;
        } else if (key == "schedule.sleep") {
            loaded.sleep_time = parse_time_of_day(value);
            have_schedule = true;
        } else if (key == "schedule.wake") {
            loaded.wake_time = parse_time_of_day(value);
            have_schedule = true;
        } else if (key == "schedule.level") {
            loaded.level = parse_sleep_level(value);
            have_schedule = true;
        } else if (key == "minimal") {
            std::istringstream names(value);
            std::string name;
            while (std::getline(names, name, ',')) {
                if (!name.empty()) minimal.insert(name);
            }
        } else {
            throw Error(ErrorCode::ParseError, config_.state_file->string() + ":" +
                                                   std::to_string(lineno) + ": unknown key " + key);
        }
    }
    if (have_schedule) {
        loaded.validate();
        schedule = loaded;
    }
    schedule_ = schedule;
    device_.services().set_minimal_functions(minimal);
}

void Engine::persist_timer() const {
    if (config_.timer_image_file) timer_.save_image(*config_.timer_image_file);
}

}  // namespace powernap
