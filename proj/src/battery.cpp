#include "powernap/battery.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "powernap/error.hpp"

namespace powernap {

namespace {
constexpr double kChargeEpsMah = 1e-6;  // absolute tolerance for charge comparisons
}

const char* to_token(SourceCategory category) {
    switch (category) {
        case SourceCategory::Platform: return "platform";
        case SourceCategory::Application: return "application";
        case SourceCategory::Timer: return "timer";
        case SourceCategory::Peripheral: return "peripheral";
        case SourceCategory::MemoryRetention: return "memory-retention";
    }
    return "unknown";
}

SourceCategory parse_source_category(const std::string& token) {
    if (token == "platform") return SourceCategory::Platform;
    if (token == "application") return SourceCategory::Application;
    if (token == "timer") return SourceCategory::Timer;
    if (token == "peripheral") return SourceCategory::Peripheral;
    if (token == "memory-retention") return SourceCategory::MemoryRetention;
    throw Error(ErrorCode::ParseError, "unknown source category \"" + token + "\"");
}

SourceId SourceRegistry::register_source(DrainSource source) {
    if (source.rate_ma < 0) {
        throw Error(ErrorCode::InvariantViolation,
                    "source \"" + source.name + "\" has negative rate");
    }
    if (find(source.name)) {
        throw Error(ErrorCode::DuplicateName, "source \"" + source.name + "\" already registered");
    }
    sources_.push_back(std::move(source));
    return SourceId{static_cast<std::uint32_t>(sources_.size() - 1)};
}

const DrainSource& SourceRegistry::at(SourceId id) const {
    if (id.value >= sources_.size()) {
        throw Error(ErrorCode::UnknownSource, "source id " + std::to_string(id.value));
    }
    return sources_[id.value];
}

std::optional<SourceId> SourceRegistry::find(const std::string& name) const {
    for (std::size_t i = 0; i < sources_.size(); ++i) {
        if (sources_[i].name == name) return SourceId{static_cast<std::uint32_t>(i)};
    }
    return std::nullopt;
}

void ConsumptionLedger::record(LedgerEntry entry) {
    cover(entry.begin, entry.end);
    entries_.push_back(entry);
}

void ConsumptionLedger::cover(SimTime begin, SimTime end) {
    if (!has_history_) {
        history_begin_ = begin;
        history_end_ = end;
        has_history_ = true;
    } else {
        history_begin_ = std::min(history_begin_, begin);
        history_end_ = std::max(history_end_, end);
    }
}

Breakdown ConsumptionLedger::report(const SourceRegistry& registry, SimTime begin,
                                    SimTime end) const {
    if (!(begin < end)) {
        throw Error(ErrorCode::EmptyWindow, "window [" + format_sim_time(begin) + ", " +
                                                format_sim_time(end) + ")");
    }
    if (!has_history_ || begin < history_begin_ - 1e-9 || end > history_end_ + 1e-9) {
        throw Error(ErrorCode::WindowOutOfRange, "window outside simulated history");
    }

    std::vector<double> consumed(registry.size(), 0.0);
    std::vector<bool> seen(registry.size(), false);
    for (const auto& entry : entries_) {
        if (entry.source.value >= registry.size()) {
            throw Error(ErrorCode::UnknownSource, "ledger references unregistered source");
        }
        double amount = 0.0;
        if (entry.begin == entry.end) {
            // instantaneous charge: counted when it lies inside the window
            if (entry.begin < begin || entry.begin > end) continue;
            amount = entry.consumed_mah;
        } else {
            double lo = std::max(entry.begin, begin);
            double hi = std::min(entry.end, end);
            if (hi <= lo) continue;
            amount = entry.consumed_mah * (hi - lo) / (entry.end - entry.begin);
        }
        consumed[entry.source.value] += amount;
        seen[entry.source.value] = true;
    }

    Breakdown out;
    out.window_begin = begin;
    out.window_end = end;
    for (double c : consumed) out.total_mah += c;

    for (std::size_t i = 0; i < registry.size(); ++i) {
        if (!seen[i]) continue;
        Breakdown::Row row;
        row.name = registry.at(SourceId{static_cast<std::uint32_t>(i)}).name;
        row.consumed_mah = consumed[i];
        row.share = out.total_mah > 0 ? consumed[i] / out.total_mah : 0.0;
        out.per_source.push_back(std::move(row));
    }

    constexpr std::array<SourceCategory, 5> kCategories = {
        SourceCategory::Platform, SourceCategory::Application, SourceCategory::Timer,
        SourceCategory::Peripheral, SourceCategory::MemoryRetention};
    for (SourceCategory category : kCategories) {
        double total = 0.0;
        bool present = false;
        for (std::size_t i = 0; i < registry.size(); ++i) {
            if (!seen[i]) continue;
            if (registry.at(SourceId{static_cast<std::uint32_t>(i)}).category != category) continue;
            total += consumed[i];
            present = true;
        }
        if (!present) continue;
        Breakdown::Row row;
        row.name = to_token(category);
        row.consumed_mah = total;
        row.share = out.total_mah > 0 ? total / out.total_mah : 0.0;
        out.per_category.push_back(std::move(row));
    }
    return out;
}

Battery::Battery(double capacity_mah) : capacity_mah_(capacity_mah), remaining_mah_(capacity_mah) {
    if (!(capacity_mah > 0)) {
        throw Error(ErrorCode::InvariantViolation, "battery capacity must be positive");
    }
}

double Battery::integrate(const SourceRegistry& registry, const std::vector<SourceId>& active,
                          SimTime start, double duration_min, ConsumptionLedger& ledger) {
    if (duration_min < 0) {
        throw Error(ErrorCode::InvariantViolation, "negative integration interval");
    }
    double total_rate = 0.0;
    for (SourceId id : active) total_rate += registry.at(id).rate_ma;

    if (duration_min == 0) return 0.0;
    if (depleted()) {
        throw Error(ErrorCode::DepletedBattery, "battery is empty");
    }

    SimTime end = start + duration_min;
    double want = total_rate * minutes_to_hours(duration_min);

    if (want <= 0) {
        ledger.cover(start, end);
        return 0.0;
    }

    double actual = want;
    SimTime drained_until = end;
    if (want >= remaining_mah_ - kChargeEpsMah) {
        // drains dry mid-interval; closed-form depletion instant
        actual = remaining_mah_;
        drained_until = start + hours_to_minutes(remaining_mah_ / total_rate);
        depleted_at_ = drained_until;
        remaining_mah_ = 0.0;
    } else {
        remaining_mah_ -= want;
    }

    for (SourceId id : active) {
        const auto& source = registry.at(id);
        if (source.rate_ma <= 0) continue;
        ledger.record({start, drained_until, id, actual * (source.rate_ma / total_rate)});
    }
    ledger.cover(start, end);
    return actual;
}

double Battery::deduct(const SourceRegistry& registry, SourceId source, SimTime at,
                       double amount_mah, ConsumptionLedger& ledger) {
    registry.at(source);  // validate id
    if (amount_mah < 0) {
        throw Error(ErrorCode::InvariantViolation, "negative deduction");
    }
    if (depleted()) {
        throw Error(ErrorCode::DepletedBattery, "battery is empty");
    }
    double actual = std::min(amount_mah, remaining_mah_);
    remaining_mah_ -= actual;
    if (remaining_mah_ <= kChargeEpsMah) {
        remaining_mah_ = 0.0;
        depleted_at_ = at;
    }
    if (actual > 0) ledger.record({at, at, source, actual});
    return actual;
}

}  // namespace powernap
