"""Smoke tests for the powernap extension module."""

import os
from pathlib import Path

import pytest

powernap = pytest.importorskip("powernap")


def scenario_path(name: str) -> str:
    root = os.environ.get(
        "POWERNAP_SCENARIO_DIR", str(Path(__file__).resolve().parents[2] / "scenarios")
    )
    return str(Path(root) / f"{name}.json")


def test_idle_baseline():
    scenario = powernap.load_scenario(scenario_path("dual_core_phone_idle"))
    assert scenario.profile.capacity_mah == 1650.0

    result = powernap.run_experiment(scenario)
    assert result.consumed_mah == pytest.approx(315.0, abs=1e-6)
    assert result.remaining_pct == pytest.approx(80.909, abs=1e-2)

    categories = {row.name: row for row in result.breakdown.per_category}
    assert categories["platform"].consumed_mah == pytest.approx(252.0, abs=1e-6)
    assert categories["platform"].share == pytest.approx(0.80, abs=1e-9)
    assert categories["application"].share == pytest.approx(0.20, abs=1e-9)


def test_compare_levels_ordering_and_savings():
    scenario = powernap.load_scenario(scenario_path("dual_core_phone"))
    comparison = powernap.compare_levels(scenario)
    rows = {row.config: row for row in comparison.rows}

    assert rows["before"].remaining_pct < rows["suspend-to-ram"].remaining_pct
    assert rows["suspend-to-ram"].remaining_pct < rows["suspend-to-disk"].remaining_pct
    assert rows["suspend-to-disk"].remaining_pct == pytest.approx(
        rows["complete-off"].remaining_pct
    )
    saving = rows["complete-off"].remaining_pct - rows["before"].remaining_pct
    assert saving == pytest.approx(18.0, abs=0.5)


def test_scheduled_run_event_log():
    scenario = powernap.load_scenario(scenario_path("dual_core_phone"))
    result = powernap.run_experiment(scenario)
    kinds = [event.kind for event in result.event_log]
    assert kinds == ["arm", "enter-sleep", "timer-fire", "wake"]
    assert result.consumed_mah == pytest.approx(16.5, abs=1e-9)


def test_engine_protocol():
    scenario = powernap.load_scenario(scenario_path("dual_core_phone_idle"))
    engine = powernap.make_engine(scenario)

    reply = engine.apply("STATUS")
    assert reply.startswith("OK state=active remaining_mah=1650.000")

    reply = engine.apply("SET-SCHEDULE sleep=23:00 wake=07:00 level=suspend-to-ram")
    assert reply == "OK scheduled sleep=23:00 wake=07:00 level=suspend-to-ram window_min=480"

    reply = engine.apply("SET-SCHEDULE sleep=25:00 wake=07:00 level=suspend-to-ram")
    assert reply.startswith("ERR malformed-time")


def test_csv_rendering():
    scenario = powernap.load_scenario(scenario_path("laptop"))
    comparison = powernap.compare_levels(scenario)
    csv = powernap.render_comparison(comparison, "csv")
    lines = csv.strip().splitlines()
    assert lines[0] == "config,device,capacity_mah,consumed_mah,remaining_pct"
    assert len(lines) == 5
