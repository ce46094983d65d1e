"""Independent numerical oracles the test-suite checks the library against.

Each oracle recomputes a quantity by a different method than the library
uses: step-integrated kinematics with bisection instead of the closed
form, dense sampling instead of vertex checks, and direct tick counting
instead of the simulation loop.
"""
from __future__ import annotations

import numpy as np

from passfeas import PassScenario, TerrainProfile


def pass_time_by_integration(scenario: PassScenario, dt: float = 0.01,
                             iterations: int = 80) -> float:
    """Minimum pass time found without the closed form.

    Steps the post-reaction relative motion forward with exact
    constant-acceleration updates until the gained distance brackets the
    clearance target, then bisects the crossing instant inside the last
    step.  No square root of the governing relation is ever taken.
    """
    target = (2.0 * scenario.headway + scenario.car_length
              + scenario.truck_length
              - scenario.reaction_time * scenario.v1)
    if target <= 0:
        if target == 0:
            return 0.0
        raise ValueError("scenario outside the model's domain")
    a = scenario.max_accel
    t, x, v = 0.0, 0.0, 0.0
    while True:
        x_next = x + v * dt + 0.5 * a * dt * dt
        if x_next >= target:
            break
        x, v, t = x_next, v + a * dt, t + dt
    lo, hi = 0.0, dt
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if x + v * mid + 0.5 * a * mid * mid >= target:
            hi = mid
        else:
            lo = mid
    return t + 0.5 * (lo + hi)


def line_of_sight_dense(terrain: TerrainProfile, pos_a: float, pos_b: float,
                        step: float = 0.1) -> bool:
    """Sightline check by dense sampling of the profile."""
    lo, hi = sorted((pos_a, pos_b))
    positions = np.array([p for p, _ in terrain.samples])
    elevations = np.array([z for _, z in terrain.samples])
    z_lo = float(np.interp(lo, positions, elevations)) + terrain.antenna_height
    z_hi = float(np.interp(hi, positions, elevations)) + terrain.antenna_height
    if hi == lo:
        return True
    count = max(2, int(np.ceil((hi - lo) / step)) + 1)
    xs = np.linspace(lo, hi, count)
    ground = np.interp(xs, positions, elevations)
    chord = z_lo + (z_hi - z_lo) * (xs - lo) / (hi - lo)
    return bool(np.all(ground <= chord + 1e-9))


def connectivity_by_tick_count(separation: float, v1: float, v2: float,
                               beacon_interval: float,
                               range_forward: float,
                               range_backward: float) -> float:
    """Connectivity window for a flat, deterministic encounter.

    Walks the beacon grid analytically: while the vehicles approach the
    link runs antenna-forward, afterwards antenna-backward; a tick
    counts when the separation is within the applicable range.
    """
    closing = v1 + v2
    t_end = (separation + max(range_forward, range_backward)) / closing \
        + 2.0 * beacon_interval
    ticks = 0
    k = 0
    while True:
        t = k * beacon_interval
        if t > t_end:
            break
        d = separation - closing * t
        limit = range_forward if d >= 0 else range_backward
        if abs(d) <= limit:
            ticks += 1
        k += 1
    return ticks * beacon_interval
