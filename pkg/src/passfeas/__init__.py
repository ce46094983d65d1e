"""Feasibility toolkit for a V2V safe-pass advisory on two-lane highways.

Answers, from closed-form kinematics plus an empirically calibrated
radio model, whether a car stuck behind a truck can be told "safe to
pass" in time -- and simulates individual encounters to watch the
advisory play out beacon by beacon.
"""
from .channel import (
    DEFAULT_ANTENNA_HEIGHT,
    ChannelModel,
    DeliveryModel,
    Deterministic,
    Direction,
    ExtrapolationError,
    LinearEdge,
    OutOfProfileError,
    Placement,
    RangeEntry,
    RangeTable,
    TerrainProfile,
    delivery_probability,
    effective_multihop_range,
    line_of_sight,
)
from .pass_model import (
    AdvisoryVerdict,
    DomainError,
    ManeuverBounds,
    PassScenario,
    Verdict,
    feasibility,
    maneuver_bounds,
    min_comm_range,
    min_pass_time,
)
from .sim import (
    HOST,
    ONCOMING,
    TRUCK,
    AdvisoryPhase,
    AdvisoryState,
    BeaconRecord,
    DoNotPassReason,
    DurationLimitExceeded,
    EncounterConfig,
    EncounterReport,
    EncounterState,
    advisory_transition,
    initial_state,
    run_altitude_case,
    run_encounter,
    step,
)
from .units import MPS_PER_MPH, mph_to_mps, speed_to_mps

__version__ = "0.1.0"

__all__ = [
    "AdvisoryPhase",
    "AdvisoryState",
    "AdvisoryVerdict",
    "BeaconRecord",
    "ChannelModel",
    "DEFAULT_ANTENNA_HEIGHT",
    "DeliveryModel",
    "Deterministic",
    "Direction",
    "DoNotPassReason",
    "DomainError",
    "DurationLimitExceeded",
    "EncounterConfig",
    "EncounterReport",
    "EncounterState",
    "ExtrapolationError",
    "HOST",
    "LinearEdge",
    "MPS_PER_MPH",
    "ManeuverBounds",
    "ONCOMING",
    "OutOfProfileError",
    "PassScenario",
    "Placement",
    "RangeEntry",
    "RangeTable",
    "TRUCK",
    "TerrainProfile",
    "Verdict",
    "advisory_transition",
    "delivery_probability",
    "effective_multihop_range",
    "feasibility",
    "initial_state",
    "line_of_sight",
    "maneuver_bounds",
    "min_comm_range",
    "min_pass_time",
    "mph_to_mps",
    "run_altitude_case",
    "run_encounter",
    "speed_to_mps",
    "step",
]
