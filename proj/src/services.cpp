#include "powernap/services.hpp"

#include "powernap/error.hpp"

namespace powernap {

const char* to_token(SleepLevel level) {
    switch (level) {
        case SleepLevel::SuspendToRam: return "suspend-to-ram";
        case SleepLevel::SuspendToDisk: return "suspend-to-disk";
        case SleepLevel::CompleteOff: return "complete-off";
    }
    return "unknown";
}

SleepLevel parse_sleep_level(const std::string& token) {
    if (token == "suspend-to-ram") return SleepLevel::SuspendToRam;
    if (token == "suspend-to-disk") return SleepLevel::SuspendToDisk;
    if (token == "complete-off") return SleepLevel::CompleteOff;
    throw Error(ErrorCode::UnknownLevel, "\"" + token + "\" is not a sleep level");
}

void ServiceRegistry::add_daemon(const std::string& name, SourceCategory category,
                                 SourceId source) {
    if (category != SourceCategory::Platform && category != SourceCategory::Application) {
        throw Error(ErrorCode::InvariantViolation,
                    "daemon \"" + name + "\" must be platform or application");
    }
    if (find(name)) {
        throw Error(ErrorCode::DuplicateName, "daemon \"" + name + "\" already exists");
    }
    daemons_.push_back({name, category, source, true, false});
}

void ServiceRegistry::set_minimal_functions(const std::set<std::string>& names) {
    for (const auto& name : names) {
        if (!has_daemon(name)) {
            throw Error(ErrorCode::UnknownDaemon, "no daemon named \"" + name + "\"");
        }
    }
    for (auto& daemon : daemons_) daemon.minimal = names.count(daemon.name) > 0;
}

std::set<std::string> ServiceRegistry::stop_for_level(SleepLevel level) {
    std::set<std::string> stopped;
    for (auto& daemon : daemons_) {
        bool spare = level == SleepLevel::SuspendToRam && daemon.minimal;
        if (spare || !daemon.running) continue;
        daemon.running = false;
        stopped.insert(daemon.name);
    }
    return stopped;
}

std::set<std::string> ServiceRegistry::restart_all() {
    std::set<std::string> started;
    for (auto& daemon : daemons_) {
        if (daemon.running) continue;
        daemon.running = true;
        started.insert(daemon.name);
    }
    return started;
}

std::vector<SourceId> ServiceRegistry::active_sources() const {
    std::vector<SourceId> out;
    for (const auto& daemon : daemons_) {
        if (daemon.running) out.push_back(daemon.source);
    }
    return out;
}

std::set<std::string> ServiceRegistry::running_names() const {
    std::set<std::string> out;
    for (const auto& daemon : daemons_) {
        if (daemon.running) out.insert(daemon.name);
    }
    return out;
}

std::set<std::string> ServiceRegistry::minimal_names() const {
    std::set<std::string> out;
    for (const auto& daemon : daemons_) {
        if (daemon.minimal) out.insert(daemon.name);
    }
    return out;
}

bool ServiceRegistry::all_running() const {
    for (const auto& daemon : daemons_) {
        if (!daemon.running) return false;
    }
    return true;
}

bool ServiceRegistry::has_daemon(const std::string& name) const {
    for (const auto& daemon : daemons_) {
        if (daemon.name == name) return true;
    }
    return false;
}

ServiceDaemon* ServiceRegistry::find(const std::string& name) {
    for (auto& daemon : daemons_) {
        if (daemon.name == name) return &daemon;
    }
    return nullptr;
}

}  // namespace powernap
