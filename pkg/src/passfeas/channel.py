"""Empirical V2V channel model: range table, terrain occlusion, delivery.

The radio is characterised by a calibration table of measured maximum
communication ranges, keyed by antenna placement (inside the cabin vs.
on the roof), link direction relative to the sender's heading, and
vehicle speed.  Between measured speeds the range is interpolated
linearly; outside the measured span the model refuses to guess.

On top of the range limit, an optional terrain profile can occlude the
line of sight between two antennas, and a delivery model turns distance
into a delivery probability (hard disk or a linear fade at the edge).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union


class Placement(str, Enum):
    INSIDE = "inside"
    ROOFTOP = "rooftop"


class Direction(str, Enum):
    FORWARD = "forward"    # receiver lies ahead of the sender's heading
    BACKWARD = "backward"  # receiver lies behind


# Default antenna heights above the road surface, m.
DEFAULT_ANTENNA_HEIGHT = {
    Placement.ROOFTOP: 1.5,
    Placement.INSIDE: 1.1,
}


class ExtrapolationError(Exception):
    """Speed outside the calibrated span; the table will not extrapolate."""


class OutOfProfileError(Exception):
    """Position outside the sampled terrain span."""


@dataclass(frozen=True)
class RangeEntry:
    placement: Placement
    direction: Direction
    speed: float      # vehicle speed the range was measured at, m/s
    max_range: float  # measured maximum communication range, m

    def __post_init__(self) -> None:
        if not self.max_range > 0:
            raise ValueError(f"max_range must be > 0, got {self.max_range!r}")


@dataclass(frozen=True)
class RangeTable:
    """Calibration table of measured ranges.

    Entries must be unique per (placement, direction, speed) key.
    """

    entries: tuple[RangeEntry, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("RangeTable needs at least one entry")
        object.__setattr__(self, "entries", tuple(self.entries))
        seen = set()
        for e in self.entries:
            key = (e.placement, e.direction, e.speed)
            if key in seen:
                raise ValueError(f"duplicate calibration entry for {key}")
            seen.add(key)

    def placements(self) -> set[Placement]:
        return {e.placement for e in self.entries}

    def _series(self, placement: Placement, direction: Direction) -> list[RangeEntry]:
        series = sorted((e for e in self.entries
                         if e.placement == placement and e.direction == direction),
                        key=lambda e: e.speed)
        if not series:
            raise ValueError(f"no calibration entries for placement="
                             f"{placement.value} direction={direction.value}")
        return series

    def smallest_range(self) -> float:
        return min(e.max_range for e in self.entries)

    def max_range(self, placement: Placement, direction: Direction,
                  speed: float) -> float:
        """Maximum communication range at ``speed``, m.

        Exact at calibrated speeds, linear in between, and an
        ``ExtrapolationError`` outside the calibrated span.
        """
        series = self._series(placement, direction)
        lo, hi = series[0].speed, series[-1].speed
        if speed < lo or speed > hi:
            raise ExtrapolationError(
                f"speed {speed:.4f} m/s outside calibrated span "
                f"[{lo:.4f}, {hi:.4f}] for placement={placement.value} "
                f"direction={direction.value}")
        for e in series:
            if e.speed == speed:
                return e.max_range
        for left, right in zip(series, series[1:]):
            if left.speed < speed < right.speed:
                frac = (speed - left.speed) / (right.speed - left.speed)
                return left.max_range + frac * (right.max_range - left.max_range)
        raise AssertionError("unreachable: span checked above")


@dataclass(frozen=True)
class TerrainProfile:
    """Piecewise-linear road elevation along the encounter axis.

    ``samples`` are (position, elevation) pairs with strictly increasing
    positions; ``antenna_height`` is added on top of the road surface at
    each antenna location.
    """

    samples: tuple[tuple[float, float], ...]
    antenna_height: float

    def __post_init__(self) -> None:
        samples = tuple((float(p), float(z)) for p, z in self.samples)
        object.__setattr__(self, "samples", samples)
        if len(samples) < 2:
            raise ValueError("TerrainProfile needs at least two samples")
        for (p0, _), (p1, _) in zip(samples, samples[1:]):
            if not p1 > p0:
                raise ValueError("TerrainProfile positions must be strictly "
                                 f"increasing, got {p0!r} then {p1!r}")
        if not self.antenna_height >= 0:
            raise ValueError(f"antenna_height must be >= 0, "
                             f"got {self.antenna_height!r}")

    @property
    def span(self) -> tuple[float, float]:
        return self.samples[0][0], self.samples[-1][0]

    def elevation(self, position: float) -> float:
        lo, hi = self.span
        if position < lo or position > hi:
            raise OutOfProfileError(
                f"position {position:.2f} m outside terrain span "
                f"[{lo:.2f}, {hi:.2f}]")
        for (p0, z0), (p1, z1) in zip(self.samples, self.samples[1:]):
            if p0 <= position <= p1:
                return z0 + (z1 - z0) * (position - p0) / (p1 - p0)
        raise AssertionError("unreachable: span checked above")


def line_of_sight(terrain: TerrainProfile, pos_a: float, pos_b: float) -> bool:
    """True when the sightline between the two antennas clears the terrain.

    The chord between the antenna tips (road elevation + antenna height
    at each position) is compared against the profile at every terrain
    sample strictly between them, which is exact for a piecewise-linear
    profile.  Symmetric in its two positions by construction.
    """
    lo, hi = (pos_a, pos_b) if pos_a <= pos_b else (pos_b, pos_a)
    z_lo = terrain.elevation(lo) + terrain.antenna_height
    z_hi = terrain.elevation(hi) + terrain.antenna_height
    if lo == hi:
        return True
    for pos, elev in terrain.samples:
        if lo < pos < hi:
            chord = z_lo + (z_hi - z_lo) * (pos - lo) / (hi - lo)
            if elev > chord:
                return False
    return True


@dataclass(frozen=True)
class Deterministic:
    """Hard-disk delivery: certain within range, impossible beyond."""


@dataclass(frozen=True)
class LinearEdge:
    """Delivery fades linearly from 1 to 0 across the last ``edge_width``
    metres before the range limit."""

    edge_width: float

    def __post_init__(self) -> None:
        if not self.edge_width >= 0:
            raise ValueError(f"edge_width must be >= 0, got {self.edge_width!r}")


DeliveryModel = Union[Deterministic, LinearEdge]


@dataclass(frozen=True)
class ChannelModel:
    """Range table plus optional terrain occlusion and a delivery model."""

    table: RangeTable
    terrain: TerrainProfile | None = None
    loss: DeliveryModel = field(default_factory=Deterministic)

    def __post_init__(self) -> None:
        if isinstance(self.loss, LinearEdge):
            smallest = self.table.smallest_range()
            if self.loss.edge_width > smallest:
                raise ValueError(
                    f"edge_width {self.loss.edge_width!r} exceeds the smallest "
                    f"calibrated range {smallest!r}")

    def max_range(self, placement: Placement, direction: Direction,
                  speed: float) -> float:
        return self.table.max_range(placement, direction, speed)


def delivery_probability(model: ChannelModel, placement: Placement,
                         direction: Direction, speed: float,
                         distance: float, los: bool) -> float:
    """Probability that a single beacon crosses ``distance``.

    Zero without line of sight regardless of distance.  Under the
    deterministic model delivery is certain up to and including the
    range limit; under the linear-edge model it stays certain up to
    ``range - edge_width`` and fades linearly to zero at the limit.
    """
    if not distance >= 0:
        raise ValueError(f"distance must be >= 0, got {distance!r}")
    if not los:
        return 0.0
    limit = model.max_range(placement, direction, speed)
    loss = model.loss
    if isinstance(loss, Deterministic) or loss.edge_width == 0:
        return 1.0 if distance <= limit else 0.0
    if distance <= limit - loss.edge_width:
        return 1.0
    if distance >= limit:
        return 0.0
    return (limit - distance) / loss.edge_width


def effective_multihop_range(model: ChannelModel, hop_positions: list[float],
                             placement: Placement, speed: float) -> float:
    """Farthest end-to-end separation a relay chain can bridge, m.

    ``hop_positions`` lists every node in the chain in road order: the
    sending vehicle first, then any same-direction relays, with the
    oncoming receiver last.  Interior hops connect same-direction
    traffic and must close in both directions (the sender must also hear
    acknowledgements), so they are limited by the smaller of the forward
    and backward ranges; the final hop faces the oncoming receiver
    head-on and uses the forward range.  The chain is walked until the
    first hop that cannot close; the result is the distance from the
    first node to the last reachable one.  An empty chain degenerates to
    the direct single-hop forward range.
    """
    forward = model.max_range(placement, Direction.FORWARD, speed)
    if len(hop_positions) == 0:
        return forward
    for a, b in zip(hop_positions, hop_positions[1:]):
        if b < a:
            raise ValueError("hop_positions must be ordered along the road")
    if len(hop_positions) == 1:
        return 0.0
    backward = model.max_range(placement, Direction.BACKWARD, speed)
    interior_limit = min(forward, backward)
    start = hop_positions[0]
    reach = start
    last = len(hop_positions) - 1
    for i in range(1, last + 1):
        a, b = hop_positions[i - 1], hop_positions[i]
        limit = forward if i == last else interior_limit
        ok = (b - a) <= limit
        if ok and model.terrain is not None:
            ok = line_of_sight(model.terrain, a, b)
        if not ok:
            break
        reach = b
    return reach - start
