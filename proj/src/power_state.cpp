#include "powernap/power_state.hpp"

#include <algorithm>

#include "powernap/error.hpp"

namespace powernap {

void DeviceProfile::validate() const {
    if (!(capacity_mah > 0)) {
        throw Error(ErrorCode::InvariantViolation, "profile \"" + name + "\": capacity must be > 0");
    }
    const double rates[] = {idle_rate_ma, ram_retention_rate_ma, timer_rate_ma,
                            peripheral_leak_rate_ma, snapshot_cost_mah, restore_cost_mah};
    for (double r : rates) {
        if (r < 0) {
            throw Error(ErrorCode::InvariantViolation,
                        "profile \"" + name + "\": rates and costs must be >= 0");
        }
    }
    if (!(idle_rate_ma > ram_retention_rate_ma + timer_rate_ma)) {
        throw Error(ErrorCode::InvariantViolation,
                    "profile \"" + name + "\": idle rate must exceed ram retention + timer");
    }
    if (!(ram_retention_rate_ma + timer_rate_ma > timer_rate_ma)) {
        throw Error(ErrorCode::InvariantViolation,
                    "profile \"" + name + "\": ram retention rate must be positive");
    }
}

std::vector<DrainSource> residual_drain(SleepLevel level, const DeviceProfile& profile) {
    std::vector<DrainSource> out;
    switch (level) {
        case SleepLevel::SuspendToRam:
            out.push_back({source_names::kMemoryRetention, SourceCategory::MemoryRetention,
                           profile.ram_retention_rate_ma});
            break;
        case SleepLevel::SuspendToDisk:
            if (profile.peripheral_leak_rate_ma > 0) {
                out.push_back({source_names::kPeripheralLeak, SourceCategory::Peripheral,
                               profile.peripheral_leak_rate_ma});
            }
            break;
        case SleepLevel::CompleteOff:
            break;
    }
    out.push_back({source_names::kTimer, SourceCategory::Timer, profile.timer_rate_ma});
    return out;
}

void PowerStateMachine::enter_sleep(SleepLevel level, SimTime now) {
    if (level_) {
        throw Error(ErrorCode::InvalidTransition,
                    "already asleep in " + std::string(to_token(*level_)));
    }
    level_ = level;
    entered_at_ = now;
}

SleepLevel PowerStateMachine::wake(SimTime now) {
    if (!level_) {
        throw Error(ErrorCode::InvalidTransition, "already active");
    }
    SleepLevel level = *level_;
    level_.reset();
    entered_at_ = now;
    return level;
}

Device::Device(DeviceProfile profile, const std::vector<DaemonSpec>& daemons)
    : profile_(std::move(profile)), battery_(profile_.capacity_mah) {
    for (const auto& spec : daemons) {
        SourceId id = sources_.register_source({spec.name, spec.category, spec.rate_ma});
        services_.add_daemon(spec.name, spec.category, id);
    }
    timer_source_ = sources_.register_source(
        {source_names::kTimer, SourceCategory::Timer, profile_.timer_rate_ma});
    memory_source_ = sources_.register_source({source_names::kMemoryRetention,
                                               SourceCategory::MemoryRetention,
                                               profile_.ram_retention_rate_ma});
    if (profile_.peripheral_leak_rate_ma > 0) {
        peripheral_source_ = sources_.register_source({source_names::kPeripheralLeak,
                                                       SourceCategory::Peripheral,
                                                       profile_.peripheral_leak_rate_ma});
    }
    if (profile_.snapshot_cost_mah > 0) {
        snapshot_source_ =
            sources_.register_source({source_names::kDiskSnapshot, SourceCategory::Peripheral, 0});
    }
    if (profile_.restore_cost_mah > 0) {
        restore_source_ =
            sources_.register_source({source_names::kDiskRestore, SourceCategory::Peripheral, 0});
    }
}

TransitionRecord Device::enter_sleep(SleepLevel level, SimTime now) {
    if (!machine_.is_active()) {
        throw Error(ErrorCode::InvalidTransition,
                    "already asleep in " + std::string(to_token(*machine_.sleep_level())));
    }
    if (battery_.depleted()) {
        throw Error(ErrorCode::DepletedBattery, "cannot enter sleep with an empty battery");
    }

    TransitionRecord record;
    record.at = now;
    record.entering = true;
    record.level = level;
    record.daemons = services_.stop_for_level(level);
    machine_.enter_sleep(level, now);

    if (level == SleepLevel::SuspendToDisk && profile_.snapshot_cost_mah > 0) {
        record.transition_cost_mah =
            battery_.deduct(sources_, *snapshot_source_, now, profile_.snapshot_cost_mah, ledger_);
    }
    record.drains = drain_names(active_drains());
    return record;
}

TransitionRecord Device::wake(SimTime now) {
    if (machine_.is_active()) {
        throw Error(ErrorCode::InvalidTransition, "already active");
    }
    if (battery_.depleted()) {
        throw Error(ErrorCode::DepletedBattery, "cannot wake at zero charge");
    }

    TransitionRecord record;
    record.at = now;
    record.entering = false;
    record.level = machine_.wake(now);
    record.daemons = services_.restart_all();

    if (record.level == SleepLevel::SuspendToDisk && profile_.restore_cost_mah > 0) {
        record.transition_cost_mah =
            battery_.deduct(sources_, *restore_source_, now, profile_.restore_cost_mah, ledger_);
    }
    record.drains = drain_names(active_drains());
    return record;
}

std::vector<SourceId> Device::active_drains() const {
    std::vector<SourceId> out;
    if (machine_.is_active()) {
        out = services_.active_sources();
    } else {
        switch (*machine_.sleep_level()) {
            case SleepLevel::SuspendToRam:
                out = services_.active_sources();  // minimal functions only
                out.push_back(memory_source_);
                break;
            case SleepLevel::SuspendToDisk:
                if (peripheral_source_) out.push_back(*peripheral_source_);
                break;
            case SleepLevel::CompleteOff:
                break;
        }
    }
    if (timer_installed_) out.push_back(timer_source_);
    return out;
}

double Device::integrate(SimTime start, double duration_min) {
    if (battery_.depleted()) {
        ledger_.cover(start, start + duration_min);
        return 0.0;
    }
    return battery_.integrate(sources_, active_drains(), start, duration_min, ledger_);
}

std::vector<std::string> Device::drain_names(const std::vector<SourceId>& ids) const {
    std::vector<std::string> names;
    names.reserve(ids.size());
    for (SourceId id : ids) names.push_back(sources_.at(id).name);
    std::sort(names.begin(), names.end());
    return names;
}

}  // namespace powernap
