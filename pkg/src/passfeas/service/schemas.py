"""Request and response bodies for the HTTP service.

These mirror the scenario-document JSON layout one to one, so a file
accepted by the CLI is also a valid request body.  Value-level
invariants (positivity, table consistency, ...) are enforced by the
core types, not duplicated here.
"""
from __future__ import annotations

from typing import Literal

from pydantic import BaseModel


class SpeedIn(BaseModel):
    value: float
    unit: Literal["mph", "mps"]


class PassScenarioIn(BaseModel):
    v1: SpeedIn
    v2: SpeedIn
    headway_m: float
    reaction_time_s: float
    car_length_m: float
    truck_length_m: float
    safety_margin_m: float
    max_accel_mps2: float


class RangeEntryIn(BaseModel):
    placement: Literal["inside", "rooftop"]
    direction: Literal["forward", "backward"]
    speed_mps: float
    max_range_m: float


class DeliveryIn(BaseModel):
    model: Literal["deterministic", "linear_edge"] = "deterministic"
    edge_width_m: float | None = None


class ChannelIn(BaseModel):
    entries: list[RangeEntryIn]
    delivery: DeliveryIn | None = None


class TerrainIn(BaseModel):
    samples: list[tuple[float, float]]
    antenna_height_m: float | None = None


class SimIn(BaseModel):
    initial_separation_m: float
    beacon_interval_s: float = 0.1
    time_step_s: float = 0.01
    duration_limit_s: float = 120.0
    rng_seed: int = 0
    relay_enabled: bool = False
    placement: Literal["inside", "rooftop"] | None = None
    host_start_m: float = 0.0
    link_loss_ticks: int = 3


class ScenarioDoc(BaseModel):
    pass_scenario: PassScenarioIn
    channel: ChannelIn
    terrain: TerrainIn | None = None
    sim: SimIn | None = None


class FeasibilityLine(BaseModel):
    placement: str
    forward_range_m: float
    verdict: str
    deficit_m: float | None = None


class BoundsResponse(BaseModel):
    min_pass_time_s: float
    min_comm_range_m: float
    feasibility: list[FeasibilityLine]


class AdvisoryTraceEntry(BaseModel):
    t_s: float
    phase: str
    reason: str | None = None


class BeaconOut(BaseModel):
    t_s: float
    sender: str
    receiver: str
    distance_m: float
    los: bool
    delivered: bool
    via_relay: bool


class RunResponse(BaseModel):
    verdict: str
    reason: str | None = None
    required_range_m: float | None = None
    available_range_m: float | None = None
    deficit_m: float | None = None
    first_contact_distance_m: float | None = None
    connectivity_duration_s: float
    total_beacons_sent: int
    total_beacons_delivered: int
    los_blocked_intervals: list[tuple[float, float]]
    advisory_trace: list[AdvisoryTraceEntry]
    beacons: list[BeaconOut]


class SweepRequest(BaseModel):
    scenario: ScenarioDoc
    parameter: str
    values: list[float]
    unit: str | None = None


class SweepRow(BaseModel):
    param: float
    min_time_s: float
    min_range_m: float
    verdict: str
    connectivity_s: float


class SweepResponse(BaseModel):
    parameter: str
    rows: list[SweepRow]


class ReproRow(BaseModel):
    name: str
    expected: str
    actual: str
    passed: bool


class ReproResponse(BaseModel):
    ok: bool
    rows: list[ReproRow]
