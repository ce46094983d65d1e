"""Acceptance gate: the headline results this package must reproduce.

Each test covers one numbered criterion and emits a single PASS line
with the measured values once its assertions hold (the line bypasses
output capture so it is visible in normal runs).
"""
import random
import time

import pytest

from conftest import (
    V55,
    assert_trace_legal,
    flat_channel,
    make_scenario,
    random_scenario,
)
from oracles import (
    connectivity_by_tick_count,
    line_of_sight_dense,
    pass_time_by_integration,
)
from passfeas import (
    Direction,
    EncounterConfig,
    LinearEdge,
    Placement,
    TerrainProfile,
    Verdict,
    feasibility,
    line_of_sight,
    maneuver_bounds,
    min_pass_time,
    run_altitude_case,
    run_encounter,
)
from passfeas.cli import main as cli_main
from passfeas.config import (
    build_encounter_config,
    default_channel_table,
    load_json_file,
    resolve_input_path,
    resolve_scenario_document,
)


def announce(capsys, message: str) -> None:
    with capsys.disabled():
        print("\n" + message)


def test_criterion_1_closed_form_bounds(capsys):
    bounds = maneuver_bounds(make_scenario())
    assert bounds.min_time == pytest.approx(12.16, abs=0.05)
    assert bounds.min_range == pytest.approx(712.4, abs=2.0)
    announce(capsys, f"ACCEPTANCE 1 closed-form bounds: PASS "
             f"(min_time={bounds.min_time:.4f} s, "
             f"min_range={bounds.min_range:.2f} m)")


def test_criterion_2_feasibility_verdicts(capsys):
    scenario = make_scenario()
    inside = feasibility(scenario, 466.0)
    rooftop = feasibility(scenario, 1000.0)
    assert inside.verdict is Verdict.INFEASIBLE
    assert rooftop.verdict is Verdict.SAFE_PASS_FEASIBLE
    announce(capsys, f"ACCEPTANCE 2 feasibility verdicts: PASS "
             f"(466 m -> {inside.verdict.value}, "
             f"1000 m -> {rooftop.verdict.value})")


def test_criterion_3_oracle_agreement(capsys):
    start = time.perf_counter()
    rng = random.Random(40)
    scenarios = [make_scenario()] + [random_scenario(rng) for _ in range(99)]
    worst = 0.0
    for scenario in scenarios:
        closed = min_pass_time(scenario)
        oracle = pass_time_by_integration(scenario)
        rel = abs(closed - oracle) / oracle
        worst = max(worst, rel)
        assert rel <= 1e-6
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    announce(capsys, f"ACCEPTANCE 3 integration oracle: PASS "
             f"(100 scenarios, worst rel err {worst:.2e}, {elapsed:.2f} s)")


def test_criterion_4_connectivity_window(capsys):
    start = time.perf_counter()
    rng = random.Random(41)
    worst = 0.0
    for _ in range(20):
        mid = rng.uniform(18.0, 35.0)
        delta = rng.uniform(0.0, 6.0)
        v1, v2 = mid + delta, mid - delta
        pair_speed = 0.5 * (v1 + v2)
        r_fwd = rng.uniform(200.0, 900.0)
        r_bwd = rng.uniform(200.0, 900.0)
        interval = rng.choice([0.05, 0.1, 0.2])
        separation = r_fwd * rng.uniform(1.05, 1.6)
        config = EncounterConfig(
            scenario=make_scenario(v1=v1, v2=v2),
            channel=flat_channel(r_fwd, r_bwd, pair_speed),
            initial_separation=separation,
            beacon_interval=interval,
            time_step=interval / 5.0,
            duration_limit=(separation + max(r_fwd, r_bwd)) / (v1 + v2) * 1.5 + 5.0,
        )
        report = run_encounter(config)
        expected = (r_fwd + r_bwd) / (v1 + v2)
        err = abs(report.connectivity_duration - expected)
        worst = max(worst, err / interval)
        assert err <= interval + 1e-9
        oracle = connectivity_by_tick_count(separation, v1, v2, interval,
                                            r_fwd, r_bwd)
        assert report.connectivity_duration == pytest.approx(oracle, abs=1e-9)
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    announce(capsys, f"ACCEPTANCE 4 connectivity window: PASS "
             f"(20 configs, worst {worst:.2f} beacon intervals, "
             f"{elapsed:.2f} s)")


def test_criterion_5_calibration_table(capsys):
    table = default_channel_table()
    v70 = 70 * 0.44704
    cells = [
        (Direction.FORWARD, V55, 466.0),
        (Direction.FORWARD, v70, 401.0),
        (Direction.BACKWARD, V55, 327.0),
        (Direction.BACKWARD, v70, 400.0),
    ]
    for direction, speed, expected in cells:
        assert table.max_range(Placement.INSIDE, direction, speed) == expected
    ratios = []
    for speed in (V55, v70):
        fwd = table.max_range(Placement.ROOFTOP, Direction.FORWARD, speed)
        bwd = table.max_range(Placement.ROOFTOP, Direction.BACKWARD, speed)
        ratios.append(abs(fwd - bwd) / fwd)
        assert ratios[-1] <= 0.05
    announce(capsys, f"ACCEPTANCE 5 calibration table: PASS "
             f"(inside cells exact, rooftop asymmetry {max(ratios):.1%})")


def test_criterion_6_terrain_occlusion(capsys):
    path = resolve_input_path("paper_55mph.json")
    doc = resolve_scenario_document(load_json_file(path), base=path.parent,
                                    terrain_override="crest_terrain.json")
    report = run_altitude_case(build_encounter_config(doc))
    assert report.first_contact_distance <= 300.0
    assert report.verdict.verdict is Verdict.INFEASIBLE
    assert report.verdict.reason == "range_deficit"

    start = time.perf_counter()
    rng = random.Random(2024)
    checks = 0
    for _ in range(50):
        n = rng.randint(3, 8)
        xs = sorted(rng.uniform(-1200.0, 2400.0) for _ in range(n))
        while len(set(xs)) < n:
            xs = sorted(rng.uniform(-1200.0, 2400.0) for _ in range(n))
        profile = TerrainProfile(
            samples=tuple((x, rng.uniform(0.0, 15.0)) for x in xs),
            antenna_height=rng.uniform(1.0, 3.0))
        lo, hi = profile.span
        for _ in range(4):
            a = rng.uniform(lo, hi)
            b = rng.uniform(lo, hi)
            assert line_of_sight(profile, a, b) \
                == line_of_sight_dense(profile, a, b, step=0.1)
            checks += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    announce(capsys, f"ACCEPTANCE 6 terrain occlusion: PASS "
             f"(first contact {report.first_contact_distance:.1f} m <= 300, "
             f"{checks} LOS checks vs dense oracle, {elapsed:.2f} s)")


def test_criterion_7_determinism_and_invariants(capsys):
    start = time.perf_counter()

    def rooftop(**overrides):
        fields = dict(scenario=make_scenario(),
                      channel=flat_channel(1000.0, 1000.0, V55),
                      initial_separation=1200.0, duration_limit=60.0)
        fields.update(overrides)
        return EncounterConfig(**fields)

    assert run_encounter(rooftop()) == run_encounter(rooftop())
    fading = flat_channel(1000.0, 1000.0, V55, loss=LinearEdge(edge_width=400.0))
    for seed in (0, 7, 12345):
        a = run_encounter(rooftop(channel=fading, rng_seed=seed))
        b = run_encounter(rooftop(channel=fading, rng_seed=seed))
        assert a == b
    assert run_encounter(rooftop(time_step=0.01)) \
        == run_encounter(rooftop(time_step=0.005))

    rng = random.Random(42)
    for _ in range(12):
        scenario = random_scenario(rng)
        pair_speed = 0.5 * (scenario.v1 + scenario.v2)
        r_fwd = rng.uniform(150.0, 900.0)
        r_bwd = rng.uniform(150.0, 900.0)
        width = rng.uniform(0.0, 0.5 * min(r_fwd, r_bwd))
        channel = flat_channel(r_fwd, r_bwd, pair_speed,
                               loss=LinearEdge(edge_width=width))
        separation = r_fwd * rng.uniform(1.1, 1.8)
        config = EncounterConfig(
            scenario=scenario, channel=channel,
            initial_separation=separation,
            rng_seed=rng.randrange(2 ** 32),
            duration_limit=(separation + max(r_fwd, r_bwd))
            / (scenario.v1 + scenario.v2) * 1.5 + 5.0)
        report = run_encounter(config)
        assert run_encounter(config) == report
        assert_trace_legal(report.advisory_trace)
        assert report.total_beacons_delivered <= report.total_beacons_sent
        assert 0.0 <= report.connectivity_duration <= config.duration_limit
        if report.first_contact_distance is not None:
            assert 0.0 < report.first_contact_distance <= max(r_fwd, r_bwd)
        times = [b.t for b in report.beacons]
        assert times == sorted(times)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    announce(capsys, f"ACCEPTANCE 7 determinism + invariants: PASS "
             f"(bit-identical reruns, dt refinement, 12 randomized runs, "
             f"{elapsed:.2f} s)")


def test_criterion_8_repro_command(capsys):
    code = cli_main(["repro"])
    captured = capsys.readouterr()
    assert code == 0
    assert all(line.endswith("[PASS]") for line in captured.out.splitlines())
    announce(capsys, "ACCEPTANCE 8 repro command: PASS (exit 0, all rows PASS)")
