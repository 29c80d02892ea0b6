#include "powernap/rtc_timer.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "powernap/error.hpp"

namespace powernap {

namespace {

constexpr std::uint8_t kMagic[4] = {'P', 'N', 'T', '1'};

void put_u32_le(std::uint8_t* out, std::uint32_t v) {
    out[0] = static_cast<std::uint8_t>(v);
    out[1] = static_cast<std::uint8_t>(v >> 8);
    out[2] = static_cast<std::uint8_t>(v >> 16);
    out[3] = static_cast<std::uint8_t>(v >> 24);
}

std::uint32_t get_u32_le(const std::uint8_t* in) {
    return static_cast<std::uint32_t>(in[0]) | static_cast<std::uint32_t>(in[1]) << 8 |
           static_cast<std::uint32_t>(in[2]) << 16 | static_cast<std::uint32_t>(in[3]) << 24;
}

void put_f64_le(std::uint8_t* out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(bits >> (8 * i));
}

double get_f64_le(const std::uint8_t* in) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

}  // namespace

// CRC-32 (IEEE 802.3, reflected, polynomial 0xEDB88320), table-driven.
std::uint32_t crc32(const std::uint8_t* data, std::size_t size) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < size; ++i) {
        crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
    }
    return crc ^ 0xFFFFFFFFu;
}

void SimClock::advance_to(SimTime to) {
    if (to < now_) {
        throw Error(ErrorCode::ClockRegression, "advance to " + format_sim_time(to) +
                                                    " before now " + format_sim_time(now_));
    }
    now_ = to;
}

std::vector<std::uint8_t> serialize_timer_memory(const TimerMemory& memory) {
    std::vector<std::uint8_t> image(kTimerImageSize, 0);
    std::memcpy(image.data(), kMagic, 4);
    image[4] = memory.armed ? 1 : 0;
    // bytes 5..7 stay zero (reserved)
    put_f64_le(image.data() + 8, memory.wake_at);
    put_u32_le(image.data() + 16, crc32(image.data(), 16));
    return image;
}

TimerMemory deserialize_timer_memory(const std::vector<std::uint8_t>& image) {
    if (image.size() != kTimerImageSize) {
        throw Error(ErrorCode::CorruptImage, "image is " + std::to_string(image.size()) +
                                                 " bytes, expected " +
                                                 std::to_string(kTimerImageSize));
    }
    if (get_u32_le(image.data() + 16) != crc32(image.data(), 16)) {
        throw Error(ErrorCode::CorruptImage, "checksum mismatch");
    }
    if (std::memcmp(image.data(), kMagic, 4) != 0) {
        throw Error(ErrorCode::CorruptImage, "bad magic");
    }
    if (image[4] > 1 || image[5] != 0 || image[6] != 0 || image[7] != 0) {
        throw Error(ErrorCode::CorruptImage, "bad flag bytes");
    }
    TimerMemory memory;
    memory.armed = image[4] == 1;
    memory.wake_at = get_f64_le(image.data() + 8);
    return memory;
}

BatteryTimer::BatteryTimer() { persist(); }

void BatteryTimer::arm(SimTime wake_at, SimTime now) {
    if (memory_.armed) {
        throw Error(ErrorCode::AlreadyArmed,
                    "pending wake at " + format_sim_time(memory_.wake_at));
    }
    if (!(wake_at > now)) {
        throw Error(ErrorCode::PastInstant, "wake instant " + format_sim_time(wake_at) +
                                                " is not after now " + format_sim_time(now));
    }
    memory_.armed = true;
    memory_.wake_at = wake_at;
    persist();
}

std::optional<WakeEvent> BatteryTimer::advance(SimClock& clock, SimTime to) {
    clock.advance_to(to);
    if (memory_.armed && memory_.wake_at <= to) {
        WakeEvent event{memory_.wake_at};
        memory_.armed = false;
        memory_.wake_at = 0.0;
        persist();
        return event;
    }
    return std::nullopt;
}

BatteryTimer BatteryTimer::restore_from_image(const std::vector<std::uint8_t>& image) {
    TimerMemory memory = deserialize_timer_memory(image);
    BatteryTimer timer;
    timer.memory_ = memory;
    timer.persist();
    return timer;
}

void BatteryTimer::persist() { persisted_ = serialize_timer_memory(memory_); }

void BatteryTimer::save_image(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(persisted_.data()),
              static_cast<std::streamsize>(persisted_.size()));
    if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

BatteryTimer BatteryTimer::load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::vector<std::uint8_t> image((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return restore_from_image(image);
}

}  // namespace powernap
