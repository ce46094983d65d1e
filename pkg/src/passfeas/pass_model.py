"""Closed-form kinematic bounds for a two-lane-highway passing maneuver.

A host car trails a truck on a two-lane highway and wants to overtake
using the opposing lane.  The maneuver is modeled as: the driver waits a
reaction time while still moving at road speed, then accelerates at the
maximum comfortable rate until the car has gained enough relative
distance on the truck to merge back ahead of it.  The advisory question
is whether an oncoming car, detectable only through V2V radio, is far
enough away for the whole maneuver to finish with a safety margin.

Two quantities fall out of the model:

* the minimum time the pass takes (``min_pass_time``), and
* the minimum host-to-oncoming separation at which the pass can still be
  advised (``min_comm_range``) -- which is exactly the communication
  range the radio link must provide, since the advisory can only act on
  vehicles it can hear.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class DomainError(Exception):
    """Scenario outside the model's validity.

    Raised when the distance travelled during the driver's reaction time
    already exceeds the relative gap the car needs to gain, so the
    required acceleration time has no real solution.
    """


@dataclass(frozen=True)
class PassScenario:
    """One passing situation, all values SI.

    ``v1`` is the speed of the host car and the truck (the host matches
    the truck's speed before pulling out), ``v2`` the speed of the
    oncoming car.  ``headway`` is the bumper-to-bumper gap the host keeps
    behind the truck and also the gap it must re-establish ahead of the
    truck when merging back.
    """

    v1: float              # host/truck speed, m/s
    v2: float              # oncoming-car speed, m/s
    headway: float         # gap behind (and re-established ahead of) the truck, m
    reaction_time: float   # driver reaction delay before accelerating, s
    car_length: float      # m
    truck_length: float    # m
    safety_margin: float   # required host-to-oncoming buffer at merge-back, m
    max_accel: float       # maximum sustained acceleration at this speed, m/s^2

    def __post_init__(self) -> None:
        for name in ("v1", "v2", "reaction_time", "car_length",
                     "truck_length", "max_accel"):
            if not getattr(self, name) > 0:
                raise ValueError(f"PassScenario.{name} must be > 0, "
                                 f"got {getattr(self, name)!r}")
        for name in ("headway", "safety_margin"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"PassScenario.{name} must be >= 0, "
                                 f"got {getattr(self, name)!r}")

    @property
    def clearance(self) -> float:
        """Relative distance the host must gain on the truck: both gaps
        plus both vehicle lengths."""
        return 2.0 * self.headway + self.car_length + self.truck_length


class Verdict(Enum):
    SAFE_PASS_FEASIBLE = "safe_pass_feasible"
    INFEASIBLE = "infeasible"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class AdvisoryVerdict:
    """Outcome of comparing the required range against what is available.

    ``deficit_m`` is ``required - available`` and is only populated for
    infeasible range verdicts.  ``reason`` names the binding constraint
    ("range_deficit", "time_deficit", "link_lost") or, for UNKNOWN, why
    no determination could be made.
    """

    verdict: Verdict
    required_range_m: float | None = None
    available_range_m: float | None = None
    deficit_m: float | None = None
    reason: str | None = None


@dataclass(frozen=True)
class ManeuverBounds:
    min_time: float   # minimum pass duration, s
    min_range: float  # minimum communication range, m


def min_pass_time(scenario: PassScenario) -> float:
    """Minimum time to complete the pass, reaction delay included.

    During the reaction delay the host gains nothing on the truck (equal
    speeds) while the clearance requirement keeps growing against the
    distance the truck covers; thereafter constant acceleration closes
    the remaining relative distance.
    """
    gap = scenario.clearance - scenario.reaction_time * scenario.v1
    if gap < 0:
        raise DomainError(
            "reaction-time travel "
            f"({scenario.reaction_time * scenario.v1:.3f} m) exceeds the "
            f"clearance to gain ({scenario.clearance:.3f} m); "
            "the pass model does not apply")
    return math.sqrt(2.0 * gap / scenario.max_accel)


def min_comm_range(scenario: PassScenario) -> float:
    """Minimum host-to-oncoming separation for a safe pass.

    While the host completes the pass, host and oncoming car close on
    each other at ``v1 + v2``; with equal-speed traffic both contribute
    ``v1 * t``.  On top of the closing distance the host must still be
    clear of the oncoming car by the safety margin, and the clearance
    distance itself is consumed ahead of the host.
    """
    t = min_pass_time(scenario)
    return scenario.clearance + scenario.safety_margin + 2.0 * scenario.v1 * t


def maneuver_bounds(scenario: PassScenario) -> ManeuverBounds:
    return ManeuverBounds(min_time=min_pass_time(scenario),
                          min_range=min_comm_range(scenario))


def feasibility(scenario: PassScenario, available_range: float) -> AdvisoryVerdict:
    """Decide whether the advisory can clear a pass given the radio range.

    Feasible only when the required range is *strictly* less than what
    the link provides; a tie leaves no margin and is ruled infeasible.
    Scenarios outside the model's domain yield UNKNOWN rather than a
    guess either way.
    """
    if not available_range >= 0:
        raise ValueError(f"available_range must be >= 0, got {available_range!r}")
    try:
        required = min_comm_range(scenario)
    except DomainError as exc:
        return AdvisoryVerdict(Verdict.UNKNOWN,
                               available_range_m=available_range,
                               reason=str(exc))
    if required < available_range:
        return AdvisoryVerdict(Verdict.SAFE_PASS_FEASIBLE,
                               required_range_m=required,
                               available_range_m=available_range)
    return AdvisoryVerdict(Verdict.INFEASIBLE,
                           required_range_m=required,
                           available_range_m=available_range,
                           deficit_m=required - available_range,
                           reason="range_deficit")
