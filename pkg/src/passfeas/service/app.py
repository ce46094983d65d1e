"""FastAPI application for the pass-feasibility service.

Endpoints take the same scenario-document JSON the CLI reads from disk.
Errors surface as a JSON body ``{"code", "message"}``; the ``code`` is
what clients should dispatch on ("validation_error",
"extrapolation_error", "out_of_profile", "domain_error", "io_error",
"duration_limit_exceeded").
"""
from __future__ import annotations

import copy
from concurrent.futures import ThreadPoolExecutor

from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import __version__
from ..channel import Direction, ExtrapolationError, OutOfProfileError, Placement
from ..config import (
    build_encounter_config,
    build_range_table,
    build_scenario,
    load_json_file,
    resolve_input_path,
    resolve_scenario_document,
)
from ..pass_model import DomainError, Verdict, feasibility, maneuver_bounds
from ..sim import DurationLimitExceeded, EncounterReport, run_encounter
from ..units import mph_to_mps, speed_to_mps
from .schemas import (
    AdvisoryTraceEntry,
    BeaconOut,
    BoundsResponse,
    FeasibilityLine,
    ReproResponse,
    ReproRow,
    RunResponse,
    ScenarioDoc,
    SweepRequest,
    SweepResponse,
    SweepRow,
)

_ERROR_STATUS = {
    "validation_error": 422,
    "extrapolation_error": 422,
    "out_of_profile": 422,
    "domain_error": 400,
    "io_error": 404,
    "duration_limit_exceeded": 400,
}


def _error(code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=_ERROR_STATUS[code],
                        content={"code": code, "message": message})


def _register_error_handlers(app: FastAPI) -> None:
    @app.exception_handler(RequestValidationError)
    async def _invalid_request(request, exc):
        return _error("validation_error", str(exc))

    @app.exception_handler(ExtrapolationError)
    async def _extrapolation(request, exc):
        return _error("extrapolation_error", str(exc))

    @app.exception_handler(OutOfProfileError)
    async def _out_of_profile(request, exc):
        return _error("out_of_profile", str(exc))

    @app.exception_handler(DomainError)
    async def _domain(request, exc):
        return _error("domain_error", str(exc))

    @app.exception_handler(DurationLimitExceeded)
    async def _duration(request, exc):
        return _error("duration_limit_exceeded", str(exc))

    @app.exception_handler(FileNotFoundError)
    async def _missing_file(request, exc):
        return _error("io_error", str(exc))

    @app.exception_handler(ValueError)
    async def _invalid_value(request, exc):
        return _error("validation_error", str(exc))


def _run_response(report: EncounterReport) -> RunResponse:
    v = report.verdict
    return RunResponse(
        verdict=v.verdict.value,
        reason=v.reason,
        required_range_m=v.required_range_m,
        available_range_m=v.available_range_m,
        deficit_m=v.deficit_m,
        first_contact_distance_m=report.first_contact_distance,
        connectivity_duration_s=report.connectivity_duration,
        total_beacons_sent=report.total_beacons_sent,
        total_beacons_delivered=report.total_beacons_delivered,
        los_blocked_intervals=list(report.los_blocked_intervals),
        advisory_trace=[
            AdvisoryTraceEntry(t_s=t, phase=a.phase.value,
                               reason=a.reason.value if a.reason else None)
            for (t, a) in report.advisory_trace
        ],
        beacons=[
            BeaconOut(t_s=b.t, sender=b.sender, receiver=b.receiver,
                      distance_m=b.distance, los=b.los,
                      delivered=b.delivered, via_relay=b.via_relay)
            for b in report.beacons
        ],
    )


def _apply_parameter(doc: dict, path: str, value: float, unit: str | None) -> float:
    """Set a swept parameter inside a scenario document; returns the SI value."""
    parts = path.split(".")
    node = doc
    for part in parts[:-1]:
        if not isinstance(node, dict) or part not in node:
            raise ValueError(f"unknown parameter path {path!r}")
        node = node[part]
    leaf_key = parts[-1]
    if not isinstance(node, dict) or leaf_key not in node:
        raise ValueError(f"unknown parameter path {path!r}")
    leaf = node[leaf_key]
    if isinstance(leaf, dict) and "value" in leaf and "unit" in leaf:
        new_unit = unit if unit is not None else leaf["unit"]
        node[leaf_key] = {"value": float(value), "unit": new_unit}
        return speed_to_mps(float(value), new_unit)
    if unit is not None:
        raise ValueError(f"a unit override only applies to speed parameters, "
                         f"not {path!r}")
    node[leaf_key] = float(value)
    return float(value)


def _sweep_row(job: tuple[float, dict]) -> SweepRow:
    si_value, doc = job
    bounds = maneuver_bounds(build_scenario(doc["pass_scenario"]))
    report = run_encounter(build_encounter_config(doc))
    return SweepRow(param=si_value,
                    min_time_s=bounds.min_time,
                    min_range_m=bounds.min_range,
                    verdict=report.verdict.verdict.value,
                    connectivity_s=report.connectivity_duration)


def _repro_rows() -> list[ReproRow]:
    """Recompute the headline results from the shipped data files."""
    rows: list[ReproRow] = []

    def num(name: str, expected: float, tol: float, actual: float) -> None:
        rows.append(ReproRow(name=name,
                             expected=f"{expected:g} ± {tol:g}",
                             actual=f"{actual:.4f}",
                             passed=abs(actual - expected) <= tol))

    def exact(name: str, expected: float, actual: float) -> None:
        rows.append(ReproRow(name=name, expected=f"{expected:g}",
                             actual=f"{actual:g}", passed=actual == expected))

    def verdict_row(name: str, expected: Verdict, actual: Verdict) -> None:
        rows.append(ReproRow(name=name, expected=expected.value,
                             actual=actual.value, passed=actual is expected))

    doc = resolve_scenario_document(
        load_json_file(resolve_input_path("paper_55mph.json")))
    scenario = build_scenario(doc["pass_scenario"])
    bounds = maneuver_bounds(scenario)
    num("min_pass_time_55mph_s", 12.16, 0.05, bounds.min_time)
    num("min_comm_range_55mph_m", 712.4, 2.0, bounds.min_range)

    table = build_range_table(doc["channel"])
    v55 = scenario.v1
    v70 = mph_to_mps(70.0)
    cells = [
        ("range_inside_forward_55mph_m", Placement.INSIDE, Direction.FORWARD, v55, 466.0),
        ("range_inside_forward_70mph_m", Placement.INSIDE, Direction.FORWARD, v70, 401.0),
        ("range_inside_backward_55mph_m", Placement.INSIDE, Direction.BACKWARD, v55, 327.0),
        ("range_inside_backward_70mph_m", Placement.INSIDE, Direction.BACKWARD, v70, 400.0),
    ]
    for name, placement, direction, speed, expected in cells:
        exact(name, expected, table.max_range(placement, direction, speed))

    inside_available = table.max_range(Placement.INSIDE, Direction.FORWARD, v55)
    rooftop_available = table.max_range(Placement.ROOFTOP, Direction.FORWARD, v55)
    verdict_row("feasibility_inside_forward_55mph", Verdict.INFEASIBLE,
                feasibility(scenario, inside_available).verdict)
    verdict_row("feasibility_rooftop_forward_55mph", Verdict.SAFE_PASS_FEASIBLE,
                feasibility(scenario, rooftop_available).verdict)

    rooftop_back = table.max_range(Placement.ROOFTOP, Direction.BACKWARD, v55)
    ratio = abs(rooftop_available - rooftop_back) / rooftop_available
    rows.append(ReproRow(name="rooftop_direction_symmetry",
                         expected="|forward - backward| / forward <= 5%",
                         actual=f"{100.0 * ratio:.2f}%",
                         passed=ratio <= 0.05))

    report = run_encounter(build_encounter_config(doc))
    verdict_row("encounter_rooftop_55mph", Verdict.SAFE_PASS_FEASIBLE,
                report.verdict.verdict)
    return rows


def create_app() -> FastAPI:
    app = FastAPI(title="passfeas", version=__version__)
    _register_error_handlers(app)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/bounds", response_model=BoundsResponse)
    def bounds(doc: ScenarioDoc) -> BoundsResponse:
        scenario = build_scenario(doc.pass_scenario.model_dump())
        b = maneuver_bounds(scenario)
        table = build_range_table([e.model_dump() for e in doc.channel.entries])
        pair_speed = 0.5 * (scenario.v1 + scenario.v2)
        lines = []
        for placement in sorted(table.placements(), key=lambda p: p.value):
            available = table.max_range(placement, Direction.FORWARD, pair_speed)
            verdict = feasibility(scenario, available)
            lines.append(FeasibilityLine(placement=placement.value,
                                         forward_range_m=available,
                                         verdict=verdict.verdict.value,
                                         deficit_m=verdict.deficit_m))
        return BoundsResponse(min_pass_time_s=b.min_time,
                              min_comm_range_m=b.min_range,
                              feasibility=lines)

    @app.post("/run", response_model=RunResponse)
    def run(doc: ScenarioDoc) -> RunResponse:
        config = build_encounter_config(doc.model_dump(exclude_none=True))
        return _run_response(run_encounter(config))

    @app.post("/sweep", response_model=SweepResponse)
    def sweep(req: SweepRequest) -> SweepResponse:
        if not req.values:
            raise ValueError("sweep needs at least one value")
        base = req.scenario.model_dump(exclude_none=True)
        jobs = []
        for value in req.values:
            doc = copy.deepcopy(base)
            si_value = _apply_parameter(doc, req.parameter, value, req.unit)
            jobs.append((si_value, doc))
        with ThreadPoolExecutor(max_workers=min(8, len(jobs))) as pool:
            rows = list(pool.map(_sweep_row, jobs))
        return SweepResponse(parameter=req.parameter, rows=rows)

    @app.get("/repro", response_model=ReproResponse)
    def repro() -> ReproResponse:
        rows = _repro_rows()
        return ReproResponse(ok=all(r.passed for r in rows), rows=rows)

    return app


app = create_app()
