#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "powernap/sim_time.hpp"

namespace powernap {

enum class SourceCategory {
    Platform,
    Application,
    Timer,
    Peripheral,
    MemoryRetention,
};

const char* to_token(SourceCategory category);
SourceCategory parse_source_category(const std::string& token);

// A named battery consumer with a piecewise-constant drain rate in mA.
struct DrainSource {
    std::string name;
    SourceCategory category = SourceCategory::Platform;
    double rate_ma = 0.0;
};

struct SourceId {
    std::uint32_t value = 0;
    friend bool operator==(SourceId a, SourceId b) { return a.value == b.value; }
    friend bool operator<(SourceId a, SourceId b) { return a.value < b.value; }
};

// Registry of drain sources known to the battery monitoring unit.
// Names are unique; ids are dense and stable in registration order.
class SourceRegistry {
  public:
    SourceId register_source(DrainSource source);  // throws DuplicateName
    const DrainSource& at(SourceId id) const;      // throws UnknownSource
    std::optional<SourceId> find(const std::string& name) const;
    std::size_t size() const { return sources_.size(); }
    const std::vector<DrainSource>& all() const { return sources_; }

  private:
    std::vector<DrainSource> sources_;
};

// One accounting record: `source` drew `consumed_mah` over [begin, end].
// Instantaneous charges (transition costs) have begin == end.
struct LedgerEntry {
    SimTime begin = 0.0;
    SimTime end = 0.0;
    SourceId source;
    double consumed_mah = 0.0;
};

struct Breakdown {
    struct Row {
        std::string name;
        double consumed_mah = 0.0;
        double share = 0.0;  // of total window consumption; 0 when total is 0
    };
    SimTime window_begin = 0.0;
    SimTime window_end = 0.0;
    double total_mah = 0.0;
    std::vector<Row> per_source;    // registration order
    std::vector<Row> per_category;  // category enum order, present categories only
};

// Append-only consumption history; the source of truth for breakdown reports.
class ConsumptionLedger {
  public:
    void record(LedgerEntry entry);
    const std::vector<LedgerEntry>& entries() const { return entries_; }

    bool empty() const { return entries_.empty(); }
    SimTime history_begin() const { return history_begin_; }
    SimTime history_end() const { return history_end_; }
    // Extends the covered history without consumption (zero-drain intervals).
    void cover(SimTime begin, SimTime end);

    // Per-source and per-category totals over [begin, end]; interval entries
    // overlapping the window boundary are prorated linearly.
    // Throws EmptyWindow on begin >= end, WindowOutOfRange outside history.
    Breakdown report(const SourceRegistry& registry, SimTime begin, SimTime end) const;

  private:
    std::vector<LedgerEntry> entries_;
    bool has_history_ = false;
    SimTime history_begin_ = 0.0;
    SimTime history_end_ = 0.0;
};

// Battery charge state. Remaining charge only ever decreases; there is no
// charging path anywhere in the engine.
class Battery {
  public:
    explicit Battery(double capacity_mah);

    double capacity_mah() const { return capacity_mah_; }
    double remaining_mah() const { return remaining_mah_; }
    double remaining_fraction() const { return remaining_mah_ / capacity_mah_; }
    std::optional<SimTime> depleted_at() const { return depleted_at_; }
    bool depleted() const { return depleted_at_.has_value(); }

    // Integrates the active sources' drain over [start, start + duration_min].
    // Consumption is attributed per source pro rata to its rate and recorded
    // in the ledger. If the battery empties mid-interval, remaining clamps to
    // zero and depleted_at is the closed-form depletion instant.
    // Returns the amount actually consumed in mAh.
    // Throws DepletedBattery when already empty, UnknownSource on a bad id.
    double integrate(const SourceRegistry& registry, const std::vector<SourceId>& active,
                     SimTime start, double duration_min, ConsumptionLedger& ledger);

    // Instantaneous charge deduction (sleep transition costs). Clamps at zero
    // like integrate(). Returns the amount actually deducted.
    double deduct(const SourceRegistry& registry, SourceId source, SimTime at, double amount_mah,
                  ConsumptionLedger& ledger);

  private:
    double capacity_mah_;
    double remaining_mah_;
    std::optional<SimTime> depleted_at_;
};

}  // namespace powernap
