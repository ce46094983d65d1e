"""Deterministic discrete-time simulation of one passing encounter.

Three vehicles on a straight two-lane road: the host car behind a truck
(both eastbound at ``v1``) and an oncoming car (westbound at ``v2``).
Host and oncoming car exchange periodic V2V beacons through the channel
model; the host runs an advisory state machine that, on first radio
contact, decides whether a pass begun now would finish safely.

Positions are closed-form functions of an integer step counter
(``pos = start + v * (n * time_step)``), so refining the time step does
not accumulate floating-point drift: ten steps of 0.01 s land on exactly
the same positions as one step of 0.1 s.

Beacons fire every ``beacon_interval`` (an integer number of steps,
step 0 included).  On each beacon tick both directions are evaluated:
host -> oncoming and oncoming -> host.  When direct delivery fails and
relaying is enabled, the truck is tried as a one-relay chain for the
same beacon.  Link direction is geometric: a receiver ahead of the
sender's heading is FORWARD, behind is BACKWARD -- so both links run
antenna-forward while the cars approach and antenna-backward once they
have passed each other.  A link's speed is the mean of its endpoint
speeds.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from enum import Enum

from .channel import ChannelModel, Direction, Placement, delivery_probability, line_of_sight
from .pass_model import (
    AdvisoryVerdict,
    PassScenario,
    Verdict,
    min_comm_range,
    min_pass_time,
)

HOST = "host"
TRUCK = "truck"
ONCOMING = "oncoming"


class AdvisoryPhase(Enum):
    IDLE = "idle"
    ONCOMING_DETECTED = "oncoming_detected"
    SAFE_TO_PASS = "safe_to_pass"
    DO_NOT_PASS = "do_not_pass"


class DoNotPassReason(Enum):
    RANGE_DEFICIT = "range_deficit"
    TIME_DEFICIT = "time_deficit"
    LINK_LOST = "link_lost"


@dataclass(frozen=True)
class AdvisoryState:
    """Advisory machine state; DO_NOT_PASS is absorbing."""

    phase: AdvisoryPhase = AdvisoryPhase.IDLE
    first_contact_t: float | None = None
    reason: DoNotPassReason | None = None


@dataclass(frozen=True)
class BeaconRecord:
    t: float
    sender: str
    receiver: str
    distance: float
    los: bool
    delivered: bool
    via_relay: bool


class DurationLimitExceeded(Exception):
    """The encounter did not finish (vehicles still within possible
    contact) before the configured duration limit."""


@dataclass(frozen=True)
class EncounterConfig:
    """Full specification of one simulated encounter.

    ``placement`` may be omitted when the channel table covers a single
    antenna placement, in which case it is inferred.  ``host_start``
    anchors the host's initial position on the terrain axis.  The link
    is declared lost after ``link_loss_ticks`` consecutive missed
    beacons while a SAFE_TO_PASS advisory is active and the vehicles
    have not yet met.
    """

    scenario: PassScenario
    channel: ChannelModel
    initial_separation: float          # host-to-oncoming gap at t=0, m
    beacon_interval: float = 0.1       # s
    time_step: float = 0.01            # s
    duration_limit: float = 120.0      # s
    rng_seed: int = 0
    relay_enabled: bool = False
    placement: Placement | None = None
    host_start: float = 0.0            # m
    link_loss_ticks: int = 3

    def __post_init__(self) -> None:
        if not self.time_step > 0:
            raise ValueError(f"time_step must be > 0, got {self.time_step!r}")
        if self.beacon_interval < self.time_step:
            raise ValueError("beacon_interval must be >= time_step")
        n = round(self.beacon_interval / self.time_step)
        if n < 1 or not math.isclose(n * self.time_step, self.beacon_interval,
                                     rel_tol=1e-9, abs_tol=0.0):
            raise ValueError(
                f"beacon_interval {self.beacon_interval!r} is not an integer "
                f"multiple of time_step {self.time_step!r}")
        if not self.initial_separation > 0:
            raise ValueError("initial_separation must be > 0")
        if not self.duration_limit > 0:
            raise ValueError("duration_limit must be > 0")
        if self.link_loss_ticks < 1:
            raise ValueError("link_loss_ticks must be >= 1")

        placements = self.channel.table.placements()
        if self.placement is None:
            if len(placements) != 1:
                raise ValueError(
                    "placement is required when the channel table covers "
                    f"multiple placements ({sorted(p.value for p in placements)})")
            object.__setattr__(self, "placement", next(iter(placements)))
        elif self.placement not in placements:
            raise ValueError(
                f"placement {self.placement.value!r} has no calibration entries")

        # Fail fast on configurations the engine could not evaluate later:
        # the scenario must be inside the pass model's domain, the table
        # must cover every link speed the encounter will query, and the
        # terrain must cover every position reachable within the limit.
        min_pass_time(self.scenario)
        pair_speed = 0.5 * (self.scenario.v1 + self.scenario.v2)
        link_speeds = {pair_speed}
        if self.relay_enabled:
            link_speeds.add(self.scenario.v1)  # host <-> truck hops
        for speed in link_speeds:
            for direction in (Direction.FORWARD, Direction.BACKWARD):
                self.channel.max_range(self.placement, direction, speed)

        terrain = self.channel.terrain
        if terrain is not None:
            t_max = self.duration_limit
            truck0 = self.host_start + self.scenario.headway + self.scenario.truck_length
            onc0 = self.host_start + self.initial_separation
            lo_needed = min(self.host_start, onc0 - self.scenario.v2 * t_max)
            hi_needed = max(onc0, truck0 + self.scenario.v1 * t_max)
            lo, hi = terrain.span
            if lo_needed < lo or hi_needed > hi:
                raise ValueError(
                    f"terrain span [{lo:.1f}, {hi:.1f}] does not cover the "
                    f"positions reachable within duration_limit "
                    f"([{lo_needed:.1f}, {hi_needed:.1f}])")

    @property
    def steps_per_beacon(self) -> int:
        return round(self.beacon_interval / self.time_step)


@dataclass(frozen=True)
class EncounterState:
    t: float
    step_index: int
    host_pos: float
    truck_pos: float
    oncoming_pos: float
    host_speed: float
    oncoming_speed: float
    advisory: AdvisoryState
    missed_ticks: int = 0  # consecutive silent beacon ticks under supervision


@dataclass(frozen=True)
class EncounterReport:
    first_contact_distance: float | None
    connectivity_duration: float
    total_beacons_sent: int
    total_beacons_delivered: int
    advisory_trace: tuple[tuple[float, AdvisoryState], ...]
    verdict: AdvisoryVerdict
    beacons: tuple[BeaconRecord, ...]
    los_blocked_intervals: tuple[tuple[float, float], ...]


def initial_state(config: EncounterConfig) -> EncounterState:
    s = config.scenario
    return EncounterState(
        t=0.0,
        step_index=0,
        host_pos=config.host_start,
        truck_pos=config.host_start + s.headway + s.truck_length,
        oncoming_pos=config.host_start + config.initial_separation,
        host_speed=s.v1,
        oncoming_speed=s.v2,
        advisory=AdvisoryState(),
    )


def advisory_transition(current: AdvisoryState,
                        beacon: BeaconRecord | None,
                        scenario: PassScenario) -> AdvisoryState:
    """One transition of the advisory machine; pure.

    Only beacons delivered from the oncoming car to the host move the
    machine.  The first one detects the oncoming car; while detected,
    the next delivered beacon is evaluated against the pass bounds: the
    contact distance must strictly exceed the minimum communication
    range (an exact tie leaves no margin and fails on range), and the
    time until the vehicles meet, ``distance / (v1 + v2)``, must reach
    the minimum pass time (a tie is still enough time).  ``beacon=None``
    signals that link supervision timed out, which downgrades an active
    SAFE_TO_PASS to DO_NOT_PASS(LINK_LOST).  DO_NOT_PASS never exits.
    """
    if current.phase is AdvisoryPhase.DO_NOT_PASS:
        return current
    if beacon is None:
        if current.phase is AdvisoryPhase.SAFE_TO_PASS:
            return AdvisoryState(AdvisoryPhase.DO_NOT_PASS,
                                 first_contact_t=current.first_contact_t,
                                 reason=DoNotPassReason.LINK_LOST)
        return current
    if not beacon.delivered:
        return current
    if beacon.sender != ONCOMING or beacon.receiver != HOST:
        return current
    if current.phase is AdvisoryPhase.IDLE:
        return AdvisoryState(AdvisoryPhase.ONCOMING_DETECTED,
                             first_contact_t=beacon.t)
    if current.phase is AdvisoryPhase.ONCOMING_DETECTED:
        required = min_comm_range(scenario)
        needed_time = min_pass_time(scenario)
        available_time = beacon.distance / (scenario.v1 + scenario.v2)
        if not beacon.distance > required:
            reason = DoNotPassReason.RANGE_DEFICIT
        elif available_time < needed_time:
            reason = DoNotPassReason.TIME_DEFICIT
        else:
            return AdvisoryState(AdvisoryPhase.SAFE_TO_PASS,
                                 first_contact_t=current.first_contact_t)
        return AdvisoryState(AdvisoryPhase.DO_NOT_PASS,
                             first_contact_t=current.first_contact_t,
                             reason=reason)
    return current  # SAFE_TO_PASS holds while beacons keep arriving


def _sample(probability: float, rng: random.Random | None) -> bool:
    if probability >= 1.0:
        return True
    if probability <= 0.0:
        return False
    if rng is None:
        raise ValueError("an RNG is required for probabilistic delivery")
    return rng.random() < probability


def _link_direction(sender_heading: int, sender_pos: float,
                    receiver_pos: float) -> Direction:
    ahead = (receiver_pos - sender_pos) * sender_heading >= 0
    return Direction.FORWARD if ahead else Direction.BACKWARD


def _deliver(config: EncounterConfig, rng: random.Random | None,
             sender_pos: float, sender_speed: float, sender_heading: int,
             receiver_pos: float, receiver_speed: float) -> tuple[bool, bool, float]:
    """Evaluate one directed link; returns (delivered, los, distance)."""
    channel = config.channel
    distance = abs(receiver_pos - sender_pos)
    los = (line_of_sight(channel.terrain, sender_pos, receiver_pos)
           if channel.terrain is not None else True)
    direction = _link_direction(sender_heading, sender_pos, receiver_pos)
    speed = 0.5 * (sender_speed + receiver_speed)
    p = delivery_probability(channel, config.placement, direction,
                             speed, distance, los)
    return _sample(p, rng), los, distance


def _beacon_tick(state: EncounterState, config: EncounterConfig,
                 rng: random.Random | None,
                 beacon_log: list[BeaconRecord] | None,
                 advisory_log: list[tuple[float, AdvisoryState]] | None) -> EncounterState:
    """Evaluate both beacon directions at ``state`` and update the advisory."""
    s = config.scenario
    endpoints = (
        (HOST, state.host_pos, state.host_speed, +1,
         ONCOMING, state.oncoming_pos, state.oncoming_speed),
        (ONCOMING, state.oncoming_pos, state.oncoming_speed, -1,
         HOST, state.host_pos, state.host_speed),
    )
    advisory = state.advisory

    def move_to(nxt: AdvisoryState) -> AdvisoryState:
        if advisory_log is not None and nxt != advisory:
            advisory_log.append((state.t, nxt))
        return nxt

    host_heard = False
    for (sender, s_pos, s_speed, heading, receiver, r_pos, r_speed) in endpoints:
        delivered, los, distance = _deliver(config, rng, s_pos, s_speed,
                                            heading, r_pos, r_speed)
        via_relay = False
        if not delivered and config.relay_enabled:
            hop1, _, _ = _deliver(config, rng, s_pos, s_speed, heading,
                                  state.truck_pos, s.v1)
            if hop1:
                hop2, _, _ = _deliver(config, rng, state.truck_pos, s.v1, +1,
                                      r_pos, r_speed)
                if hop2:
                    delivered = True
                    via_relay = True
        record = BeaconRecord(t=state.t, sender=sender, receiver=receiver,
                              distance=distance, los=los,
                              delivered=delivered, via_relay=via_relay)
        if beacon_log is not None:
            beacon_log.append(record)
        if delivered and receiver == HOST:
            host_heard = True
            nxt = advisory_transition(advisory, record, s)
            while nxt != advisory:
                advisory = move_to(nxt)
                nxt = advisory_transition(advisory, record, s)

    # Link supervision: while a SAFE_TO_PASS advisory is active and the
    # vehicles are still approaching, silence on consecutive beacon
    # ticks eventually withdraws the advisory.
    missed = state.missed_ticks
    crossed = state.oncoming_pos < state.host_pos
    if host_heard:
        missed = 0
    elif advisory.phase is AdvisoryPhase.SAFE_TO_PASS and not crossed:
        missed += 1
        if missed >= config.link_loss_ticks:
            advisory = move_to(advisory_transition(advisory, None, s))
    else:
        missed = 0
    return replace(state, advisory=advisory, missed_ticks=missed)


def step(state: EncounterState, config: EncounterConfig,
         rng: random.Random | None = None,
         beacon_log: list[BeaconRecord] | None = None,
         advisory_log: list[tuple[float, AdvisoryState]] | None = None) -> EncounterState:
    """Advance the encounter by one time step.

    Positions are recomputed in closed form from the new step counter.
    If the new step lands on a beacon tick, both link directions are
    evaluated (appending to ``beacon_log`` when given) and the advisory
    machine is fed, recording each transition in ``advisory_log``.  The
    tick at t=0 belongs to the initial state and is evaluated by
    ``run_encounter`` before the first step.
    """
    if state.t >= config.duration_limit:
        raise DurationLimitExceeded(
            f"step at t={state.t:.3f} s would exceed the duration limit "
            f"({config.duration_limit:.3f} s)")
    s = config.scenario
    n = state.step_index + 1
    t = n * config.time_step
    new = EncounterState(
        t=t,
        step_index=n,
        host_pos=config.host_start + s.v1 * t,
        truck_pos=config.host_start + s.headway + s.truck_length + s.v1 * t,
        oncoming_pos=config.host_start + config.initial_separation - s.v2 * t,
        host_speed=s.v1,
        oncoming_speed=s.v2,
        advisory=state.advisory,
        missed_ticks=state.missed_ticks,
    )
    if n % config.steps_per_beacon == 0:
        new = _beacon_tick(new, config, rng, beacon_log, advisory_log)
    return new


def _contact_possible(state: EncounterState, config: EncounterConfig,
                      direct_limit: float, relay_interior: float) -> bool:
    """Geometric upper bound: could any beacon still be delivered?

    Uses the larger of the forward/backward ranges, ignoring terrain and
    edge fading (both only reduce delivery), so it never terminates an
    encounter early.
    """
    sep = abs(state.oncoming_pos - state.host_pos)
    if sep <= direct_limit:
        return True
    if config.relay_enabled:
        to_truck = abs(state.truck_pos - state.host_pos)
        truck_to_onc = abs(state.oncoming_pos - state.truck_pos)
        if to_truck <= relay_interior and truck_to_onc <= direct_limit:
            return True
    return False


def run_encounter(config: EncounterConfig) -> EncounterReport:
    """Simulate the encounter to completion and summarise it.

    Runs until the vehicles have met and separated beyond any possible
    contact, or raises ``DurationLimitExceeded`` if that never happens
    within the duration limit.  Connectivity counts beacon ticks on
    which at least one direction delivered, converted to seconds.
    """
    rng = random.Random(config.rng_seed)
    beacons: list[BeaconRecord] = []
    state = initial_state(config)
    trace: list[tuple[float, AdvisoryState]] = [(0.0, state.advisory)]

    s = config.scenario
    pair_speed = 0.5 * (s.v1 + s.v2)
    direct_limit = max(
        config.channel.max_range(config.placement, d, pair_speed)
        for d in (Direction.FORWARD, Direction.BACKWARD))
    if config.relay_enabled:
        relay_interior = max(
            config.channel.max_range(config.placement, d, s.v1)
            for d in (Direction.FORWARD, Direction.BACKWARD))
    else:
        relay_interior = 0.0

    # Beacon tick at t=0 belongs to the initial state.
    state = _beacon_tick(state, config, rng, beacons, trace)

    crossed_once = state.oncoming_pos < state.host_pos
    while True:
        crossed_once = crossed_once or state.oncoming_pos < state.host_pos
        if crossed_once and not _contact_possible(state, config,
                                                  direct_limit, relay_interior):
            break
        if state.t >= config.duration_limit:
            raise DurationLimitExceeded(
                f"encounter still within contact at the duration limit "
                f"({config.duration_limit:.3f} s)")
        state = step(state, config, rng, beacons, trace)

    # Aggregate per-tick facts from the log.
    tick_delivered: dict[float, bool] = {}
    for rec in beacons:
        tick_delivered[rec.t] = tick_delivered.get(rec.t, False) or rec.delivered
    connectivity_ticks = sum(tick_delivered.values())

    first_contact = next((rec.distance for rec in beacons if rec.delivered), None)

    blocked: list[tuple[float, float]] = []
    if config.channel.terrain is not None:
        open_start: float | None = None
        last_t: float | None = None
        for rec in beacons:
            if rec.sender != HOST:
                continue
            if not rec.los:
                if open_start is None:
                    open_start = rec.t
                last_t = rec.t
            elif open_start is not None:
                blocked.append((open_start, last_t))
                open_start = None
        if open_start is not None:
            blocked.append((open_start, last_t))

    verdict = _verdict(state.advisory, config, beacons)
    return EncounterReport(
        first_contact_distance=first_contact,
        connectivity_duration=connectivity_ticks * config.beacon_interval,
        total_beacons_sent=len(beacons),
        total_beacons_delivered=sum(1 for rec in beacons if rec.delivered),
        advisory_trace=tuple(trace),
        verdict=verdict,
        beacons=tuple(beacons),
        los_blocked_intervals=tuple(blocked),
    )


def _verdict(advisory: AdvisoryState, config: EncounterConfig,
             beacons: list[BeaconRecord]) -> AdvisoryVerdict:
    required = min_comm_range(config.scenario)
    eval_distance = next((rec.distance for rec in beacons
                          if rec.delivered and rec.receiver == HOST), None)
    if advisory.phase is AdvisoryPhase.SAFE_TO_PASS:
        return AdvisoryVerdict(Verdict.SAFE_PASS_FEASIBLE,
                               required_range_m=required,
                               available_range_m=eval_distance)
    if advisory.phase is AdvisoryPhase.DO_NOT_PASS:
        assert advisory.reason is not None
        deficit = None
        if advisory.reason is DoNotPassReason.RANGE_DEFICIT and eval_distance is not None:
            deficit = required - eval_distance
        return AdvisoryVerdict(Verdict.INFEASIBLE,
                               required_range_m=required,
                               available_range_m=eval_distance,
                               deficit_m=deficit,
                               reason=advisory.reason.value)
    return AdvisoryVerdict(Verdict.UNKNOWN,
                           required_range_m=required,
                           available_range_m=eval_distance,
                           reason="no_contact")


def run_altitude_case(config: EncounterConfig) -> EncounterReport:
    """Run an encounter over non-flat terrain.

    Identical to ``run_encounter`` but requires a terrain profile; the
    report's ``los_blocked_intervals`` records when the direct host to
    oncoming sightline was occluded.
    """
    if config.channel.terrain is None:
        raise ValueError("run_altitude_case requires a terrain profile")
    return run_encounter(config)
