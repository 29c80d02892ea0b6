#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "powernap/battery.hpp"
#include "powernap/error.hpp"

using namespace powernap;

namespace {

SourceId reg(SourceRegistry& registry, const char* name, SourceCategory category, double rate) {
    return registry.register_source({name, category, rate});
}

}  // namespace

TEST_CASE("source registration enforces unique names") {
    SourceRegistry registry;
    SourceId id = reg(registry, "cell standby", SourceCategory::Platform, 13.1);
    CHECK(registry.at(id).rate_ma == doctest::Approx(13.1));

    reg(registry, "battery-timer", SourceCategory::Timer, 2.0625);

    try {
        reg(registry, "cell standby", SourceCategory::Platform, 1.0);
        FAIL("duplicate registration must throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DuplicateName);
        CHECK(std::string(e.what()).find("cell standby") != std::string::npos);
    }

    CHECK_THROWS_AS(reg(registry, "negative", SourceCategory::Platform, -1.0), Error);
}

TEST_CASE("unknown source ids are rejected") {
    SourceRegistry registry;
    reg(registry, "only", SourceCategory::Platform, 1.0);
    Battery battery(100.0);
    ConsumptionLedger ledger;
    CHECK_THROWS_AS(battery.integrate(registry, {SourceId{7}}, 0.0, 10.0, ledger), Error);
}

TEST_CASE("eight idle hours drain the figure-one baseline") {
    SourceRegistry registry;
    std::vector<SourceId> active;
    for (const auto& spec : test::dual_core_sources()) {
        active.push_back(reg(registry, spec.name.c_str(), spec.category, spec.rate_ma));
    }
    Battery battery(1650.0);
    ConsumptionLedger ledger;

    double consumed = battery.integrate(registry, active, 0.0, 8.0 * 60.0, ledger);
    CHECK(consumed == doctest::Approx(315.0).epsilon(1e-12));
    CHECK(battery.remaining_mah() == doctest::Approx(1335.0).epsilon(1e-12));
    CHECK_FALSE(battery.depleted());

    Breakdown breakdown = ledger.report(registry, 0.0, 480.0);
    CHECK(breakdown.total_mah == doctest::Approx(315.0));
    REQUIRE(breakdown.per_category.size() == 2);
    CHECK(breakdown.per_category[0].name == "platform");
    CHECK(breakdown.per_category[0].consumed_mah == doctest::Approx(252.0));
    CHECK(breakdown.per_category[0].share == doctest::Approx(0.80));
    CHECK(breakdown.per_category[1].name == "application");
    CHECK(breakdown.per_category[1].consumed_mah == doctest::Approx(63.0));
    CHECK(breakdown.per_category[1].share == doctest::Approx(0.20));
}

TEST_CASE("zero-duration integration changes nothing") {
    SourceRegistry registry;
    SourceId id = reg(registry, "s", SourceCategory::Platform, 40.0);
    Battery battery(50.0);
    ConsumptionLedger ledger;
    CHECK(battery.integrate(registry, {id}, 5.0, 0.0, ledger) == 0.0);
    CHECK(battery.remaining_mah() == 50.0);
    CHECK(ledger.empty());
}

TEST_CASE("depletion instant is the closed-form crossing") {
    SourceRegistry registry;
    SourceId id = reg(registry, "hog", SourceCategory::Platform, 40.0);
    Battery battery(10.0);
    ConsumptionLedger ledger;

    double consumed = battery.integrate(registry, {id}, 100.0, 60.0, ledger);
    CHECK(consumed == doctest::Approx(10.0));
    CHECK(battery.remaining_mah() == 0.0);
    REQUIRE(battery.depleted());
    CHECK(*battery.depleted_at() == doctest::Approx(100.0 + 15.0));  // 10 mAh / 40 mA = 0.25 h

    // terminal: further integration is refused
    CHECK_THROWS_AS(battery.integrate(registry, {id}, 160.0, 1.0, ledger), Error);
    // but a zero-length interval is still a no-op
    CHECK(battery.integrate(registry, {id}, 160.0, 0.0, ledger) == 0.0);
}

TEST_CASE("instantaneous deductions clamp and ledger") {
    SourceRegistry registry;
    SourceId cost = reg(registry, "disk-snapshot", SourceCategory::Peripheral, 0.0);
    Battery battery(3.0);
    ConsumptionLedger ledger;

    CHECK(battery.deduct(registry, cost, 10.0, 1.0, ledger) == doctest::Approx(1.0));
    CHECK(battery.remaining_mah() == doctest::Approx(2.0));
    REQUIRE(ledger.entries().size() == 1);
    CHECK(ledger.entries()[0].begin == 10.0);
    CHECK(ledger.entries()[0].end == 10.0);

    CHECK(battery.deduct(registry, cost, 11.0, 5.0, ledger) == doctest::Approx(2.0));
    CHECK(battery.remaining_mah() == 0.0);
    REQUIRE(battery.depleted());
    CHECK(*battery.depleted_at() == 11.0);
}

TEST_CASE("breakdown attributes pro rata to rates") {
    SourceRegistry registry;
    SourceId a = reg(registry, "a", SourceCategory::Platform, 30.0);
    SourceId b = reg(registry, "b", SourceCategory::Application, 10.0);
    Battery battery(1000.0);
    ConsumptionLedger ledger;
    battery.integrate(registry, {a, b}, 0.0, 123.0, ledger);

    Breakdown breakdown = ledger.report(registry, 0.0, 123.0);
    REQUIRE(breakdown.per_source.size() == 2);
    // oracle: share_i = rate_i / total rate, independent of window length
    CHECK(breakdown.per_source[0].share == doctest::Approx(30.0 / 40.0).epsilon(1e-12));
    CHECK(breakdown.per_source[1].share == doctest::Approx(10.0 / 40.0).epsilon(1e-12));
}

TEST_CASE("single active source owns the whole breakdown") {
    SourceRegistry registry;
    SourceId a = reg(registry, "solo", SourceCategory::Timer, 2.0);
    Battery battery(100.0);
    ConsumptionLedger ledger;
    battery.integrate(registry, {a}, 0.0, 60.0, ledger);
    Breakdown breakdown = ledger.report(registry, 0.0, 60.0);
    REQUIRE(breakdown.per_source.size() == 1);
    CHECK(breakdown.per_source[0].share == doctest::Approx(1.0));
}

TEST_CASE("breakdown windows are validated") {
    SourceRegistry registry;
    SourceId a = reg(registry, "a", SourceCategory::Platform, 1.0);
    Battery battery(10.0);
    ConsumptionLedger ledger;
    battery.integrate(registry, {a}, 0.0, 100.0, ledger);

    CHECK_THROWS_AS(ledger.report(registry, 50.0, 50.0), Error);
    CHECK_THROWS_AS(ledger.report(registry, 60.0, 20.0), Error);
    CHECK_THROWS_AS(ledger.report(registry, -10.0, 50.0), Error);
    CHECK_THROWS_AS(ledger.report(registry, 0.0, 101.0), Error);
    CHECK_NOTHROW(ledger.report(registry, 0.0, 100.0));
}

TEST_CASE("window proration splits interval entries linearly") {
    SourceRegistry registry;
    SourceId a = reg(registry, "a", SourceCategory::Platform, 60.0);  // 1 mAh per minute
    Battery battery(1000.0);
    ConsumptionLedger ledger;
    battery.integrate(registry, {a}, 0.0, 100.0, ledger);

    Breakdown part = ledger.report(registry, 25.0, 75.0);
    CHECK(part.total_mah == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("properties: conservation, step invariance, monotonicity, share sums") {
    std::mt19937 rng(20240809);
    std::uniform_real_distribution<double> rate_dist(0.0, 50.0);
    std::uniform_real_distribution<double> dur_dist(0.1, 300.0);
    std::uniform_int_distribution<int> n_sources(1, 6);
    std::uniform_int_distribution<int> n_steps(1, 40);

    for (int trial = 0; trial < 200; ++trial) {
        SourceRegistry registry;
        std::vector<SourceId> active;
        double total_rate = 0.0;
        int n = n_sources(rng);
        for (int i = 0; i < n; ++i) {
            double rate = rate_dist(rng);
            total_rate += rate;
            active.push_back(registry.register_source(
                {"s" + std::to_string(i),
                 i % 2 == 0 ? SourceCategory::Platform : SourceCategory::Application, rate}));
        }

        // one shot vs the same span in random sub-steps
        double span = dur_dist(rng);
        Battery one(100000.0);
        ConsumptionLedger one_ledger;
        double one_consumed = one.integrate(registry, active, 0.0, span, one_ledger);

        Battery many(100000.0);
        ConsumptionLedger many_ledger;
        double t = 0.0;
        double many_consumed = 0.0;
        int steps = n_steps(rng);
        std::uniform_real_distribution<double> cut(0.0, 1.0);
        std::vector<double> cuts;
        for (int i = 0; i + 1 < steps; ++i) cuts.push_back(cut(rng) * span);
        cuts.push_back(span);
        std::sort(cuts.begin(), cuts.end());
        double prev_remaining = many.remaining_mah();
        for (double edge : cuts) {
            many_consumed += many.integrate(registry, active, t, edge - t, many_ledger);
            CHECK(many.remaining_mah() <= prev_remaining);  // monotone
            prev_remaining = many.remaining_mah();
            t = edge;
        }

        double expected = total_rate * minutes_to_hours(span);
        CHECK(one_consumed == doctest::Approx(expected).epsilon(1e-9));
        CHECK(many_consumed == doctest::Approx(expected).epsilon(1e-9));
        CHECK(one.remaining_mah() ==
              doctest::Approx(many.remaining_mah()).epsilon(1e-9));
        CHECK(one.capacity_mah() - one.remaining_mah() ==
              doctest::Approx(one_consumed).epsilon(1e-9));

        if (expected > 0) {
            Breakdown breakdown = many_ledger.report(registry, 0.0, span);
            double share_sum = 0.0;
            for (const auto& row : breakdown.per_source) share_sum += row.share;
            CHECK(share_sum == doctest::Approx(1.0).epsilon(1e-9));

            // category totals equal member sums exactly
            for (const auto& cat : breakdown.per_category) {
                double members = 0.0;
                for (std::size_t i = 0; i < registry.size(); ++i) {
                    const auto& source = registry.at(SourceId{static_cast<std::uint32_t>(i)});
                    if (std::string(to_token(source.category)) != cat.name) continue;
                    for (const auto& row : breakdown.per_source) {
                        if (row.name == source.name) members += row.consumed_mah;
                    }
                }
                CHECK(cat.consumed_mah == members);
            }
        }
    }
}
