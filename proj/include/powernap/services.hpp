#pragma once

#include <set>
#include <string>
#include <vector>

#include "powernap/battery.hpp"

namespace powernap {

enum class SleepLevel {
    SuspendToRam,
    SuspendToDisk,
    CompleteOff,
};

const char* to_token(SleepLevel level);
SleepLevel parse_sleep_level(const std::string& token);  // throws UnknownLevel

// A platform or application daemon backed by one drain source. Stopped
// daemons contribute no drain: active_sources() simply skips them.
struct ServiceDaemon {
    std::string name;
    SourceCategory category = SourceCategory::Platform;  // Platform or Application
    SourceId source;
    bool running = true;
    bool minimal = false;
};

class ServiceRegistry {
  public:
    void add_daemon(const std::string& name, SourceCategory category, SourceId source);

    // Flags exactly the named daemons as minimal functions; all others are
    // cleared. Throws UnknownDaemon (and changes nothing) on a bad name.
    void set_minimal_functions(const std::set<std::string>& names);

    // Stops daemons for a sleep level: suspend-to-ram spares the minimal set,
    // the other levels stop everything. Returns the names stopped by this
    // call, so a repeated call returns the empty set.
    std::set<std::string> stop_for_level(SleepLevel level);

    // Starts every daemon; returns the names that were stopped.
    std::set<std::string> restart_all();

    std::vector<SourceId> active_sources() const;
    std::set<std::string> running_names() const;
    std::set<std::string> minimal_names() const;
    bool all_running() const;
    bool has_daemon(const std::string& name) const;
    const std::vector<ServiceDaemon>& daemons() const { return daemons_; }

  private:
    ServiceDaemon* find(const std::string& name);
    std::vector<ServiceDaemon> daemons_;
};

}  // namespace powernap
