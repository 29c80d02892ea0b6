#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "powernap/sim_time.hpp"

namespace powernap {

// Monotone simulated clock (the clocksource half of the timer).
class SimClock {
  public:
    explicit SimClock(SimTime start = 0.0) : now_(start) {}
    SimTime now() const { return now_; }
    void advance_to(SimTime to);  // throws ClockRegression on to < now

  private:
    SimTime now_;
};

struct TimerMemory {
    bool armed = false;
    SimTime wake_at = 0.0;
    friend bool operator==(const TimerMemory&, const TimerMemory&) = default;
};

struct WakeEvent {
    SimTime at = 0.0;  // equals the armed wake instant, not the advance target
};

// Fixed 20-byte persisted image: magic "PNT1", armed flag, 3 pad bytes, the
// wake instant as a little-endian IEEE-754 double, and a CRC-32 over the
// first 16 bytes. Byte layout is documented in docs/formats.md and is part
// of the external interface.
constexpr std::size_t kTimerImageSize = 20;

std::vector<std::uint8_t> serialize_timer_memory(const TimerMemory& memory);
TimerMemory deserialize_timer_memory(const std::vector<std::uint8_t>& image);  // throws CorruptImage

std::uint32_t crc32(const std::uint8_t* data, std::size_t size);

// One-shot hardware alarm (the clockevent half). The wake instant is written
// to the persisted image before arm() returns, so a power cut immediately
// afterwards still wakes the device.
class BatteryTimer {
  public:
    BatteryTimer();

    // Throws PastInstant unless wake_at > now, AlreadyArmed if pending.
    void arm(SimTime wake_at, SimTime now);

    // Moves the clock to `to`. If armed and the wake instant has been
    // reached, fires exactly once: returns an event stamped wake_at and
    // disarms.
    std::optional<WakeEvent> advance(SimClock& clock, SimTime to);

    const TimerMemory& memory() const { return memory_; }
    bool armed() const { return memory_.armed; }
    SimTime wake_at() const { return memory_.wake_at; }

    const std::vector<std::uint8_t>& persisted_image() const { return persisted_; }

    // Rebuilds the timer purely from its persisted image, as after a total
    // power loss of the main system. Throws CorruptImage on checksum or
    // layout damage.
    static BatteryTimer restore_from_image(const std::vector<std::uint8_t>& image);
    BatteryTimer power_cut_roundtrip() const { return restore_from_image(persisted_); }

    // Optional on-disk mirror of the persisted image.
    void save_image(const std::filesystem::path& path) const;               // throws IoError
    static BatteryTimer load_image(const std::filesystem::path& path);      // throws IoError, CorruptImage

  private:
    void persist();

    TimerMemory memory_;
    std::vector<std::uint8_t> persisted_;
};

}  // namespace powernap
