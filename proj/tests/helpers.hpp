#pragma once

#include <random>
#include <string>
#include <vector>

#include "powernap/harness.hpp"

namespace powernap::test {

// Dual-core phone defaults used across the suites.
inline DeviceProfile dual_core_profile() {
    DeviceProfile profile;
    profile.name = "dual-core smart phone";
    profile.capacity_mah = 1650.0;
    profile.idle_rate_ma = 39.375;
    profile.ram_retention_rate_ma = 4.0;
    profile.timer_rate_ma = 2.0625;
    return profile;
}

inline std::vector<Device::DaemonSpec> dual_core_sources() {
    return {
        {"cell-standby", SourceCategory::Platform, 10.5},
        {"device-idle", SourceCategory::Platform, 10.5},
        {"android-os", SourceCategory::Platform, 10.5},
        {"wifi", SourceCategory::Application, 2.625},
        {"screen", SourceCategory::Application, 2.625},
        {"gmail", SourceCategory::Application, 2.625},
    };
}

// Eight-daemon variant with phone/sms for minimal-function tests; rates
// still sum to the profile idle rate.
inline std::vector<Device::DaemonSpec> handset_sources() {
    return {
        {"cell-standby", SourceCategory::Platform, 10.5},
        {"device-idle", SourceCategory::Platform, 10.5},
        {"android-os", SourceCategory::Platform, 10.5},
        {"phone", SourceCategory::Application, 1.0},
        {"sms", SourceCategory::Application, 0.5},
        {"wifi", SourceCategory::Application, 2.625},
        {"screen", SourceCategory::Application, 2.625},
        {"gmail", SourceCategory::Application, 1.125},
    };
}

inline Scenario dual_core_scenario(std::optional<SleepSchedule> schedule,
                                   double duration_hours = 8.0, int start_tod = 22 * 60 + 30) {
    Scenario scenario;
    scenario.name = "dual_core_test";
    scenario.profile = dual_core_profile();
    scenario.sources = dual_core_sources();
    scenario.schedule = schedule;
    scenario.start_tod = start_tod;
    scenario.duration_hours = duration_hours;
    return scenario;
}

inline SleepSchedule overnight(SleepLevel level) {
    SleepSchedule schedule;
    schedule.sleep_time = 22 * 60 + 30;
    schedule.wake_time = 6 * 60 + 30;
    schedule.level = level;
    schedule.enabled = true;
    return schedule;
}

inline std::string scenario_dir() {
#ifdef POWERNAP_SCENARIO_DIR
    return POWERNAP_SCENARIO_DIR;
#else
    return "scenarios";
#endif
}

}  // namespace powernap::test
