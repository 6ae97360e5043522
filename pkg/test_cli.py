#!/usr/bin/env python3
"""
Tests for the command line, presets, sweeps and the user config loader.
"""

import os
import csv
import sys
import json
import logging
import tempfile
import traceback
from pathlib import Path

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import get_config, load_user_config, setup_logging
from mission_planner.bench import MetricsRow, dispatch, make_cells, run_bench_cell, summarize, sweep_plot_data
from mission_planner.cli import (
    EXIT_INFEASIBLE, EXIT_OK, EXIT_PARSE, EXIT_USAGE, EXIT_VALIDATION, main,
)
from mission_planner.models import Point3
from mission_planner.presets import get_all_presets, get_preset
from start import worker_command


def run_cli(workdir: Path, *argv) -> int:
    os.environ["LOG_FILE"] = str(workdir / "logs" / "test.log")
    os.environ["MISSION_OUTPUT_DIR"] = str(workdir / "output")
    os.environ["MISSION_USER_CONFIG"] = str(workdir / ".mission.yml")
    os.environ["MISSION_ASYNC"] = "0"
    return main(["--log-level", "WARNING", *[str(a) for a in argv]])


def generate(workdir: Path, name="scenario.json", *extra) -> Path:
    path = workdir / name
    assert run_cli(workdir, "gen", "--n", 12, "--m", 2, "--seed", 4, "--out", path, *extra) == EXIT_OK
    return path


def read_rows(path: Path):
    with path.open(newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))


def test_gen_is_deterministic():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        first, second = generate(tmp, "a.json"), generate(tmp, "b.json")
        assert first.read_bytes() == second.read_bytes()
        doc = json.loads(first.read_text())
        assert doc["schema"] == "uav-ugv-scenario/1"
        assert len(doc["points"]) == 12 and len(doc["teams"]) == 2


def test_gen_rejects_more_teams_than_points():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        assert run_cli(tmp, "gen", "--n", 2, "--m", 3, "--out", tmp / "x.json") == EXIT_USAGE
        assert not (tmp / "x.json").exists()


def test_plan_and_validate():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        scenario = generate(tmp)
        plan = tmp / "plan.json"
        assert run_cli(tmp, "plan", scenario, "--out", plan, "--emit-plot-data") == EXIT_OK
        first = plan.read_bytes()
        assert run_cli(tmp, "plan", scenario, "--out", plan) == EXIT_OK
        assert plan.read_bytes() == first
        assert (tmp / "plan.plot.json").exists()
        assert run_cli(tmp, "validate", plan, scenario) == EXIT_OK

        doc = json.loads(first)
        for team in doc["teams"]:
            for row in team["rows"]:
                if row["visits"]:
                    row["visits"] = row["visits"][1:]
                    break
        broken = tmp / "broken.json"
        broken.write_text(json.dumps(doc))
        assert run_cli(tmp, "validate", broken, scenario) == EXIT_VALIDATION


def test_plan_margin_overrides():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        scenario = generate(tmp)
        plan = tmp / "plan.json"
        assert run_cli(tmp, "plan", scenario, "--delta-a", 60, "--delta-g", 60, "--out", plan) == EXIT_OK
        doc = json.loads(plan.read_text())
        for team in doc["teams"]:
            for row in team["rows"]:
                assert row["delta_hat_a"] >= 60.0 - 1e-6
                assert row["delta_hat_g"] >= 60.0 - 1e-6


def test_plan_exit_codes():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        scenario = generate(tmp)
        doc = json.loads(scenario.read_text())
        doc["params"]["tau_a_max"] = 80.0
        tight = tmp / "tight.json"
        tight.write_text(json.dumps(doc))
        assert run_cli(tmp, "plan", tight, "--out", tmp / "p.json") == EXIT_INFEASIBLE

        doc["schema"] = "something-else/1"
        wrong = tmp / "wrong.json"
        wrong.write_text(json.dumps(doc))
        assert run_cli(tmp, "plan", wrong, "--out", tmp / "p.json") == EXIT_PARSE

        assert run_cli(tmp, "plan", tmp / "missing.json") == EXIT_USAGE


def test_bad_overrides_are_usage_errors():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        scenario = generate(tmp)
        plan = tmp / "plan.json"
        assert run_cli(tmp, "plan", scenario, "--delta-a=-5", "--out", plan) == EXIT_USAGE
        assert not plan.exists()
        out = tmp / "bench.csv"
        assert run_cli(tmp, "bench", "--n", 3, "--m", 1, "--repeats", 1, "--delta-g=-1", "--out", out) == EXIT_USAGE
        assert not out.exists()


def test_worker_launch_settings():
    command = worker_command("solo", 3, "mission-planner@%h", "DEBUG")
    assert command[command.index("-A") + 1:command.index("-A") + 3] == ["tasks", "worker"]
    assert command[command.index("-n") + 1] == "mission-planner@%h"
    assert command[command.index("-P") + 1] == "solo"
    assert command[command.index("--concurrency") + 1] == "3"
    assert "--loglevel=DEBUG" in command
    settings = get_config()
    assert {"WORKER_LOG_FILE", "WORKER_NAME", "LOG_FILE"} <= set(settings)

    with tempfile.TemporaryDirectory() as tmp:
        log_file = Path(tmp) / "logs" / "worker.log"
        setup_logging("INFO", str(log_file), component="worker")
        logging.info("worker ready")
        for handler in logging.getLogger().handlers:
            handler.flush()
        text = log_file.read_text()
        setup_logging("WARNING")
    assert "mission-worker" in text and "worker ready" in text


def test_simulate_writes_report():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        scenario = generate(tmp)
        plan = tmp / "plan.json"
        assert run_cli(tmp, "plan", scenario, "--delta-a", 60, "--delta-g", 60, "--out", plan) == EXIT_OK
        report = tmp / "sim.csv"
        assert run_cli(tmp, "simulate", plan, scenario, "--trials", 3, "--obstacles", 4,
                       "--out", report, "--emit-plot-data") == EXIT_OK
        rows = read_rows(report)
        assert rows
        assert {r["seed"] for r in rows} == {"0", "1", "2"}
        assert "search_policy" in rows[0] and "new_release" in rows[0]
        assert (tmp / "sim.plot.json").exists()


def test_bench_oracle_preset():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        out = tmp / "bench.csv"
        assert run_cli(tmp, "bench", "--preset", "table4", "--n", 2, "--repeats", 2, "--out", out) == EXIT_OK
        rows = read_rows(out)
        assert len(rows) == 2
        for row in rows:
            assert row["status"] == "ok"
            assert float(row["ratio"]) >= 1.0 - 1e-9
        assert run_cli(tmp, "bench", "--preset", "table4", "--n", 6, "--repeats", 1, "--out", out) == EXIT_USAGE


def test_bench_small_grid():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        out = tmp / "bench.csv"
        assert run_cli(tmp, "bench", "--n", 3, 4, "--m", 1, 2, "--repeats", 2, "--gamma", 0, 1,
                       "--out", out, "--emit-plot-data") == EXIT_OK
        rows = read_rows(out)
        assert len(rows) == 16
        keys = [(r["n"], r["m"], r["gamma"], int(r["seed"])) for r in rows]
        assert keys == sorted(keys)
        assert all(r["ratio"] == "" for r in rows)
        assert all(len(r["team_times"].split(";")) == int(r["m"]) for r in rows)
        plot = json.loads((tmp / "bench.plot.json").read_text())
        assert set(plot["series"]) == {"mission_time_vs_n", "planning_time_vs_n", "ratio_vs_n"}


def test_preset_registry():
    names = sorted(cls.name for cls in get_all_presets())
    assert names == ["custom", "table3", "table4"]
    table3 = get_preset("table3")
    n_values, m_values = table3.default_grid()
    assert len(make_cells("table3", n_values, m_values, [0])) == 24
    assert len(make_cells("table3", [2, 5], [3], [0, 1])) == 2
    try:
        get_preset("missing")
    except ValueError:
        return
    raise AssertionError("unknown preset accepted")


def test_custom_preset_reads_user_config():
    config = {
        "bounds": [2000, 2000, 300],
        "params": {"delta_a": 60, "gamma": 0},
        "teams": [{"start": [0, 0], "finish": [2000, 2000]}, {"start": [2000, 0, 0], "finish": [0, 2000, 0]}],
        "obstacles": [{"min": [900, 900, 0], "max": [1000, 1000, 40]}],
        "grid": {"n": [5, 10], "m": [2]},
    }
    preset = get_preset("custom", config)
    assert preset.default_grid() == ([5, 10], [2])
    scenario = preset.generate(1, 5, 2)
    assert scenario.params.delta_a == 60 and scenario.params.gamma == 0
    assert scenario.teams[1].start == Point3(2000, 0, 0)
    assert scenario.environment.bounds == (2000.0, 2000.0, 300.0)
    assert len(scenario.environment.known_obstacles) == 1
    assert all(p.x <= 2000 and p.y <= 2000 for p in scenario.points)
    try:
        preset.generate(1, 5, 3)
    except ValueError:
        return
    raise AssertionError("three teams generated from two definitions")


def test_bench_cell_reports_infeasible():
    (cell,) = make_cells("table3", [3], [1], [0])
    cell["overrides"]["delta_a"] = 590.0
    row = MetricsRow.from_dict(dispatch(run_bench_cell, "mission.bench_cell", [cell])[0])
    assert row.status == "infeasible"
    assert row.objective is None


def test_metrics_rows_and_summary():
    rows = [
        MetricsRow("table3", 2, 25, 1, 1.0, 2.5, 0.0, 0.0, objective=300.0, team_times=[300.0]),
        MetricsRow("table3", 1, 25, 1, 1.0, 2.5, 0.0, 0.0, objective=100.0, team_times=[100.0]),
        MetricsRow("table3", 1, 25, 2, 1.0, 2.5, 0.0, 0.0, status="infeasible"),
    ]
    ordered = sorted(rows, key=lambda r: r.sort_key)
    assert [(r.m, r.seed) for r in ordered] == [(1, 1), (1, 2), (2, 1)]
    assert rows[0].to_csv_row()["team_times"] == "300.000"
    assert rows[2].to_csv_row()["objective"] == ""
    summary = summarize(rows)
    assert len(summary) == 2
    assert summary[0]["objective_mean"] == 200.0 and summary[0]["runs"] == 2
    assert summary[1]["infeasible"] == 1 and summary[1]["objective_mean"] is None
    series = sweep_plot_data(rows)["series"]["mission_time_vs_n"]
    assert series == {"m=1 gamma=1 v_g=2.5": [[25, 200.0, 100.0]]}


def test_load_user_config():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        assert load_user_config(str(tmp / "absent.yml")) == {}
        good = tmp / "good.yml"
        good.write_text("params:\n  delta_a: 60\ngrid:\n  n: [25]\n")
        assert load_user_config(str(good)) == {"params": {"delta_a": 60}, "grid": {"n": [25]}}
        listing = tmp / "list.yml"
        listing.write_text("- 1\n- 2\n")
        assert load_user_config(str(listing)) == {}
        broken = tmp / "broken.yml"
        broken.write_text("params: [unclosed\n")
        assert load_user_config(str(broken)) == {}
        empty = tmp / "empty.yml"
        empty.write_text("")
        assert load_user_config(str(empty)) == {}


def main_tests():
    tests = [
        test_gen_is_deterministic,
        test_gen_rejects_more_teams_than_points,
        test_plan_and_validate,
        test_plan_margin_overrides,
        test_plan_exit_codes,
        test_bad_overrides_are_usage_errors,
        test_worker_launch_settings,
        test_simulate_writes_report,
        test_bench_oracle_preset,
        test_bench_small_grid,
        test_preset_registry,
        test_custom_preset_reads_user_config,
        test_bench_cell_reports_infeasible,
        test_metrics_rows_and_summary,
        test_load_user_config,
    ]
    failed = 0
    for test in tests:
        try:
            test()
            print(f"✓ {test.__name__}")
        except Exception as e:
            failed += 1
            print(f"✗ {test.__name__}: {e}")
            traceback.print_exc()
    return failed == 0


if __name__ == "__main__":
    sys.exit(0 if main_tests() else 1)
