#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "powernap/battery.hpp"
#include "powernap/services.hpp"

namespace powernap {

// Per-device power parameters. Rates are mA, costs are mAh per transition.
struct DeviceProfile {
    std::string name;
    double capacity_mah = 0.0;
    double idle_rate_ma = 0.0;            // platform + application total while active
    double ram_retention_rate_ma = 0.0;   // memory refresh during suspend-to-ram
    double timer_rate_ma = 0.0;           // battery timer, on in every sleep level
    double peripheral_leak_rate_ma = 0.0; // SoC peripheral leak, suspend-to-disk only
    double snapshot_cost_mah = 0.0;       // charged on suspend-to-disk entry
    double restore_cost_mah = 0.0;        // charged on suspend-to-disk wake

    // Throws InvariantViolation unless capacity > 0, rates and costs are
    // non-negative, and idle_rate > ram_retention + timer > timer.
    void validate() const;
};

// Residual drain sources for a sleep level, derived from the profile alone.
// Minimal-function daemons kept alive in suspend-to-ram come on top of this;
// the device composes the two sets.
std::vector<DrainSource> residual_drain(SleepLevel level, const DeviceProfile& profile);

// Canonical names of the profile-derived sources as they appear in ledgers.
namespace source_names {
inline constexpr const char* kTimer = "battery-timer";
inline constexpr const char* kMemoryRetention = "memory-retention";
inline constexpr const char* kPeripheralLeak = "peripheral-leak";
inline constexpr const char* kDiskSnapshot = "disk-snapshot";
inline constexpr const char* kDiskRestore = "disk-restore";
}  // namespace source_names

struct TransitionRecord {
    SimTime at = 0.0;
    bool entering = false;  // true for enter_sleep, false for wake
    SleepLevel level = SleepLevel::SuspendToRam;
    std::set<std::string> daemons;  // stopped on entry, restarted on wake
    double transition_cost_mah = 0.0;
    std::vector<std::string> drains;  // active source names after the transition
};

// Guards the Active <-> Asleep(level) transitions. Asleep-to-asleep moves are
// rejected; every enter has at most one matching wake.
class PowerStateMachine {
  public:
    bool is_active() const { return !level_.has_value(); }
    std::optional<SleepLevel> sleep_level() const { return level_; }
    SimTime entered_at() const { return entered_at_; }

    void enter_sleep(SleepLevel level, SimTime now);  // throws InvalidTransition
    SleepLevel wake(SimTime now);                     // throws InvalidTransition

  private:
    std::optional<SleepLevel> level_;
    SimTime entered_at_ = 0.0;
};

// The modeled device: profile, battery, drain sources, daemons and the power
// state machine, wired together. The sleep level controller lives here;
// scheduling (when to sleep and wake) is the engine's job.
class Device {
  public:
    // Daemon-backed sources; each entry becomes a registered drain source
    // plus a service daemon of the same name.
    struct DaemonSpec {
        std::string name;
        SourceCategory category = SourceCategory::Platform;
        double rate_ma = 0.0;
    };

    Device(DeviceProfile profile, const std::vector<DaemonSpec>& daemons);

    // Stops daemons for the level, charges the snapshot cost for
    // suspend-to-disk, and installs the residual drain set.
    // Throws InvalidTransition when already asleep, DepletedBattery at 0.
    TransitionRecord enter_sleep(SleepLevel level, SimTime now);

    // Restarts all daemons, charges the restore cost for suspend-to-disk and
    // reinstalls the full idle drain set.
    TransitionRecord wake(SimTime now);

    // Active drain source ids for the current power state. The battery timer
    // source is included only while the timer is marked installed: the timer
    // hardware belongs to the power-management path, so a device that never
    // schedules sleep (the plain "before" system) does not pay for it.
    std::vector<SourceId> active_drains() const;

    void set_timer_installed(bool installed) { timer_installed_ = installed; }
    bool timer_installed() const { return timer_installed_; }

    double integrate(SimTime start, double duration_min);

    const DeviceProfile& profile() const { return profile_; }
    Battery& battery() { return battery_; }
    const Battery& battery() const { return battery_; }
    SourceRegistry& sources() { return sources_; }
    const SourceRegistry& sources() const { return sources_; }
    ServiceRegistry& services() { return services_; }
    const ServiceRegistry& services() const { return services_; }
    ConsumptionLedger& ledger() { return ledger_; }
    const ConsumptionLedger& ledger() const { return ledger_; }
    const PowerStateMachine& state() const { return machine_; }

  private:
    std::vector<std::string> drain_names(const std::vector<SourceId>& ids) const;

    DeviceProfile profile_;
    Battery battery_;
    SourceRegistry sources_;
    ServiceRegistry services_;
    ConsumptionLedger ledger_;
    PowerStateMachine machine_;
    bool timer_installed_ = false;

    SourceId timer_source_;
    SourceId memory_source_;
    std::optional<SourceId> peripheral_source_;
    std::optional<SourceId> snapshot_source_;
    std::optional<SourceId> restore_source_;
};

}  // namespace powernap
