"""Loading and resolution of scenario documents and data files.

A scenario document is a JSON object with sections:

* ``pass_scenario`` -- the kinematic situation; speeds are objects with
  ``value`` and ``unit`` ("mph" or "mps"), everything else is SI with
  the unit in the key name.
* ``channel`` -- a calibration-table file reference, an inline entry
  list, or an object with ``entries`` and an optional ``delivery``
  model.
* ``terrain`` -- optional; a file reference or inline profile.
* ``sim`` -- knobs for the encounter simulation.

Bare file names are searched in the directory named by the
``PASSFEAS_DATA_DIR`` environment variable, falling back to the data
files shipped with the package.
"""
from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path

from .channel import (
    DEFAULT_ANTENNA_HEIGHT,
    ChannelModel,
    DeliveryModel,
    Deterministic,
    Direction,
    LinearEdge,
    Placement,
    RangeEntry,
    RangeTable,
    TerrainProfile,
)
from .pass_model import PassScenario
from .sim import EncounterConfig
from .units import speed_to_mps

DATA_DIR_ENV = "PASSFEAS_DATA_DIR"


def data_dir() -> Path:
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        return Path(override)
    return Path(os.fspath(resources.files("passfeas").joinpath("data")))


def resolve_input_path(ref: str | os.PathLike, base: Path | None = None) -> Path:
    """Resolve a file reference: as given, relative to ``base``, then in
    the data directory."""
    p = Path(ref)
    candidates = [p]
    if not p.is_absolute():
        if base is not None:
            candidates.append(base / p)
        candidates.append(data_dir() / p)
    for candidate in candidates:
        if candidate.is_file():
            return candidate
    searched = ", ".join(str(c) for c in candidates)
    raise FileNotFoundError(f"cannot find input file {str(ref)!r} "
                            f"(searched: {searched})")


def load_json_file(path: Path):
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid JSON in {path}: {exc}") from exc


def _require(doc: dict, key: str, context: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ValueError(f"missing required key {key!r} in {context}")
    return doc[key]


def _speed(doc, context: str) -> float:
    if not isinstance(doc, dict) or "value" not in doc or "unit" not in doc:
        raise ValueError(f"{context} must be an object with 'value' and "
                         "'unit' keys; bare numbers are ambiguous")
    return speed_to_mps(float(doc["value"]), doc["unit"])


def build_scenario(doc: dict) -> PassScenario:
    ctx = "pass_scenario"
    return PassScenario(
        v1=_speed(_require(doc, "v1", ctx), f"{ctx}.v1"),
        v2=_speed(_require(doc, "v2", ctx), f"{ctx}.v2"),
        headway=float(_require(doc, "headway_m", ctx)),
        reaction_time=float(_require(doc, "reaction_time_s", ctx)),
        car_length=float(_require(doc, "car_length_m", ctx)),
        truck_length=float(_require(doc, "truck_length_m", ctx)),
        safety_margin=float(_require(doc, "safety_margin_m", ctx)),
        max_accel=float(_require(doc, "max_accel_mps2", ctx)),
    )


def build_range_table(doc) -> RangeTable:
    entries_doc = doc
    if isinstance(doc, dict):
        entries_doc = _require(doc, "entries", "channel table")
    if not isinstance(entries_doc, list):
        raise ValueError("channel table entries must be a list")
    entries = []
    for i, e in enumerate(entries_doc):
        ctx = f"channel entry #{i}"
        try:
            placement = Placement(_require(e, "placement", ctx))
            direction = Direction(_require(e, "direction", ctx))
        except ValueError as exc:
            raise ValueError(f"{ctx}: {exc}") from None
        entries.append(RangeEntry(
            placement=placement,
            direction=direction,
            speed=float(_require(e, "speed_mps", ctx)),
            max_range=float(_require(e, "max_range_m", ctx)),
        ))
    return RangeTable(entries=tuple(entries))


def build_delivery(doc: dict | None) -> DeliveryModel:
    if not doc:
        return Deterministic()
    model = doc.get("model", "deterministic")
    if model == "deterministic":
        return Deterministic()
    if model == "linear_edge":
        return LinearEdge(edge_width=float(_require(doc, "edge_width_m",
                                                    "delivery model")))
    raise ValueError(f"unknown delivery model {model!r}")


def build_terrain(doc: dict, default_height: float | None = None) -> TerrainProfile:
    samples = _require(doc, "samples", "terrain")
    height = doc.get("antenna_height_m", default_height)
    if height is None:
        raise ValueError("terrain needs 'antenna_height_m' (no placement "
                         "to take a default from)")
    return TerrainProfile(samples=tuple((float(p), float(z)) for p, z in samples),
                          antenna_height=float(height))


def _inline_channel(ref, base: Path | None) -> dict:
    """Normalise a channel section to {"entries": [...], "delivery": {...}}."""
    if isinstance(ref, (str, os.PathLike)):
        return _inline_channel(load_json_file(resolve_input_path(ref, base)), base)
    if isinstance(ref, list):
        return {"entries": ref}
    if isinstance(ref, dict):
        if "table" in ref:
            inner = _inline_channel(ref["table"], base)
            out = {"entries": inner["entries"]}
            delivery = ref.get("delivery", inner.get("delivery"))
            if delivery is not None:
                out["delivery"] = delivery
            return out
        if "entries" in ref:
            return {key: ref[key] for key in ("entries", "delivery") if key in ref}
    raise ValueError("channel section must be a file reference, an entry "
                     "list, or an object with 'entries'")


def resolve_scenario_document(doc: dict, base: Path | None = None,
                              channel_override: str | None = None,
                              terrain_override: str | None = None) -> dict:
    """Return a fully-inline copy of a scenario document.

    File references in the channel/terrain sections are loaded and
    inlined so the result is self-contained.  Overrides replace the
    respective section; a channel override drops a configured placement
    that the new table cannot satisfy, so it can be re-inferred.
    """
    out = dict(doc)
    channel_ref = channel_override if channel_override is not None else out.get("channel")
    if channel_ref is None:
        raise ValueError("scenario document needs a 'channel' section")
    out["channel"] = _inline_channel(channel_ref, base)

    if channel_override is not None:
        table = build_range_table(out["channel"])
        sim = dict(out.get("sim") or {})
        configured = sim.get("placement")
        if configured is not None and Placement(configured) not in table.placements():
            sim.pop("placement")
            out["sim"] = sim

    terrain_ref = terrain_override if terrain_override is not None else out.get("terrain")
    if isinstance(terrain_ref, (str, os.PathLike)):
        out["terrain"] = load_json_file(resolve_input_path(terrain_ref, base))
    elif terrain_ref is not None:
        out["terrain"] = terrain_ref
    return out


def build_channel(doc: dict, terrain_doc: dict | None = None,
                  placement: Placement | None = None) -> ChannelModel:
    table = build_range_table(doc)
    delivery = build_delivery(doc.get("delivery") if isinstance(doc, dict) else None)
    terrain = None
    if terrain_doc is not None:
        placements = table.placements()
        effective = placement
        if effective is None and len(placements) == 1:
            effective = next(iter(placements))
        default_height = DEFAULT_ANTENNA_HEIGHT.get(effective) if effective else None
        terrain = build_terrain(terrain_doc, default_height)
    return ChannelModel(table=table, terrain=terrain, loss=delivery)


def build_encounter_config(doc: dict) -> EncounterConfig:
    """Build a runnable encounter from a fully-inline scenario document."""
    scenario = build_scenario(_require(doc, "pass_scenario", "scenario document"))
    sim = doc.get("sim")
    if not isinstance(sim, dict):
        raise ValueError("scenario document needs a 'sim' section to run")
    placement = Placement(sim["placement"]) if sim.get("placement") else None
    channel = build_channel(_require(doc, "channel", "scenario document"),
                            doc.get("terrain"), placement)
    return EncounterConfig(
        scenario=scenario,
        channel=channel,
        initial_separation=float(_require(sim, "initial_separation_m", "sim")),
        beacon_interval=float(sim.get("beacon_interval_s", 0.1)),
        time_step=float(sim.get("time_step_s", 0.01)),
        duration_limit=float(sim.get("duration_limit_s", 120.0)),
        rng_seed=int(sim.get("rng_seed", 0)),
        relay_enabled=bool(sim.get("relay_enabled", False)),
        placement=placement,
        host_start=float(sim.get("host_start_m", 0.0)),
        link_loss_ticks=int(sim.get("link_loss_ticks", 3)),
    )


def default_channel_table() -> RangeTable:
    """The calibration table shipped with the package (or the one in
    ``PASSFEAS_DATA_DIR`` when set)."""
    return build_range_table(load_json_file(
        resolve_input_path("default_calibration.json")))
