import random

import pytest

from passfeas import (
    AdvisoryPhase,
    ChannelModel,
    Direction,
    PassScenario,
    Placement,
    RangeEntry,
    RangeTable,
)
from passfeas.config import default_channel_table
from passfeas.units import mph_to_mps

V55 = mph_to_mps(55.0)
V70 = mph_to_mps(70.0)


def make_scenario(**overrides) -> PassScenario:
    """The 55-mph two-lane benchmark scenario, field-overridable."""
    fields = dict(v1=V55, v2=V55, headway=24.6, reaction_time=1.0,
                  car_length=5.0, truck_length=20.0, safety_margin=40.0,
                  max_accel=0.67)
    fields.update(overrides)
    return PassScenario(**fields)


def random_scenario(rng: random.Random) -> PassScenario:
    """A random scenario comfortably inside the model's domain."""
    v1 = rng.uniform(15.0, 40.0)
    headway = rng.uniform(0.0, 60.0)
    car = rng.uniform(3.5, 6.0)
    truck = rng.uniform(10.0, 30.0)
    clearance = 2.0 * headway + car + truck
    reaction = rng.uniform(0.2, max(0.25, min(2.5, 0.8 * clearance / v1)))
    return PassScenario(v1=v1, v2=rng.uniform(15.0, 40.0), headway=headway,
                        reaction_time=reaction, car_length=car,
                        truck_length=truck,
                        safety_margin=rng.uniform(0.0, 80.0),
                        max_accel=rng.uniform(0.3, 3.0))


def flat_channel(range_forward: float, range_backward: float, speed: float,
                 placement: Placement = Placement.ROOFTOP,
                 **channel_kwargs) -> ChannelModel:
    """Single-speed calibration with given forward/backward ranges."""
    table = RangeTable(entries=(
        RangeEntry(placement, Direction.FORWARD, speed, range_forward),
        RangeEntry(placement, Direction.BACKWARD, speed, range_backward),
    ))
    return ChannelModel(table=table, **channel_kwargs)


_LEGAL_TRANSITIONS = {
    (AdvisoryPhase.IDLE, AdvisoryPhase.ONCOMING_DETECTED),
    (AdvisoryPhase.ONCOMING_DETECTED, AdvisoryPhase.SAFE_TO_PASS),
    (AdvisoryPhase.ONCOMING_DETECTED, AdvisoryPhase.DO_NOT_PASS),
    (AdvisoryPhase.SAFE_TO_PASS, AdvisoryPhase.DO_NOT_PASS),
}


def assert_trace_legal(trace) -> None:
    times = [t for t, _ in trace]
    assert times == sorted(times)
    phases = [state.phase for _, state in trace]
    assert phases[0] is AdvisoryPhase.IDLE
    for before, after in zip(phases, phases[1:]):
        assert (before, after) in _LEGAL_TRANSITIONS, (before, after)
    for _, state in trace:
        if state.phase is AdvisoryPhase.DO_NOT_PASS:
            assert state.reason is not None
        else:
            assert state.reason is None


@pytest.fixture(scope="session")
def default_table():
    return default_channel_table()
