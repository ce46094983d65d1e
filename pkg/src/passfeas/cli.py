"""Command-line client for the pass-feasibility service.

Every subcommand is a thin HTTP client: scenario files are resolved and
inlined locally, posted to the service, and the response is rendered.
By default the service runs in-process (no socket, same results);
``--server http://host:port`` targets a running instance instead, and
``passfeas serve`` starts one.

Exit codes: 0 success, 2 validation error, 3 scenario outside the pass
model's domain, 4 I/O error, 5 duration limit exceeded, 6 repro
mismatch.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

from .config import load_json_file, resolve_input_path, resolve_scenario_document

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DOMAIN = 3
EXIT_IO = 4
EXIT_DURATION = 5
EXIT_REPRO_MISMATCH = 6

_CODE_EXITS = {
    "validation_error": EXIT_VALIDATION,
    "extrapolation_error": EXIT_VALIDATION,
    "out_of_profile": EXIT_VALIDATION,
    "domain_error": EXIT_DOMAIN,
    "io_error": EXIT_IO,
    "duration_limit_exceeded": EXIT_DURATION,
}

BEACON_CSV_HEADER = "t_s,sender,receiver,distance_m,los,delivered,via_relay"
SWEEP_CSV_HEADER = "param,min_time_s,min_range_m,verdict,connectivity_s"


def _open_client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=300.0)
    # In-process ASGI transport: same service, no socket.
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import create_app
    return TestClient(create_app())


def _request(client: httpx.Client, method: str, url: str,
             payload: dict | None = None) -> tuple[int, dict | None]:
    """Issue a request; on error print the message and map the exit code."""
    if method == "GET":
        resp = client.get(url)
    else:
        resp = client.post(url, json=payload)
    try:
        data = resp.json()
    except ValueError:
        print(f"error: non-JSON response from service ({resp.status_code})",
              file=sys.stderr)
        return EXIT_IO, None
    if resp.status_code != 200:
        code = data.get("code", "validation_error") if isinstance(data, dict) else "validation_error"
        message = data.get("message", "") if isinstance(data, dict) else str(data)
        print(f"error [{code}]: {message}", file=sys.stderr)
        return _CODE_EXITS.get(code, EXIT_VALIDATION), None
    return EXIT_OK, data


def _load_scenario(args: argparse.Namespace) -> dict:
    path = resolve_input_path(args.scenario)
    doc = load_json_file(path)
    resolved = resolve_scenario_document(
        doc, base=path.parent,
        channel_override=getattr(args, "channel", None),
        terrain_override=getattr(args, "terrain", None))
    seed = getattr(args, "seed", None)
    if seed is not None:
        sim = dict(resolved.get("sim") or {})
        sim["rng_seed"] = seed
        resolved["sim"] = sim
    return resolved


def _csv_number(value: float) -> str:
    return repr(float(value))


def _csv_bool(value: bool) -> str:
    return "true" if value else "false"


def _write_beacon_csv(path: Path, beacons: list[dict]) -> None:
    lines = [BEACON_CSV_HEADER]
    for b in beacons:
        lines.append(",".join((
            _csv_number(b["t_s"]),
            b["sender"],
            b["receiver"],
            _csv_number(b["distance_m"]),
            _csv_bool(b["los"]),
            _csv_bool(b["delivered"]),
            _csv_bool(b["via_relay"]),
        )))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_sweep_csv(path: Path, rows: list[dict]) -> None:
    lines = [SWEEP_CSV_HEADER]
    for r in rows:
        lines.append(",".join((
            _csv_number(r["param"]),
            _csv_number(r["min_time_s"]),
            _csv_number(r["min_range_m"]),
            r["verdict"],
            _csv_number(r["connectivity_s"]),
        )))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _fmt(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.2f}"


def cmd_bounds(args: argparse.Namespace) -> int:
    doc = _load_scenario(args)
    with _open_client(args.server) as client:
        code, data = _request(client, "POST", "/bounds", doc)
    if code != EXIT_OK:
        return code
    if args.json:
        print(json.dumps(data, indent=2))
        return EXIT_OK
    print(f"min_pass_time_s: {data['min_pass_time_s']:.2f}")
    print(f"min_comm_range_m: {data['min_comm_range_m']:.2f}")
    for line in data["feasibility"]:
        suffix = ""
        if line.get("deficit_m") is not None:
            suffix = f" (deficit_m={line['deficit_m']:.2f})"
        print(f"feasibility[{line['placement']}, "
              f"forward_range_m={line['forward_range_m']:.2f}]: "
              f"{line['verdict']}{suffix}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    doc = _load_scenario(args)
    with _open_client(args.server) as client:
        code, data = _request(client, "POST", "/run", doc)
    if code != EXIT_OK:
        return code
    if args.csv:
        _write_beacon_csv(Path(args.csv), data["beacons"])
    if args.json:
        print(json.dumps(data, indent=2))
        return EXIT_OK
    print(f"verdict: {data['verdict']}"
          + (f" ({data['reason']})" if data.get("reason") else ""))
    print(f"required_range_m: {_fmt(data.get('required_range_m'))}")
    print(f"available_range_m: {_fmt(data.get('available_range_m'))}")
    print(f"first_contact_distance_m: {_fmt(data.get('first_contact_distance_m'))}")
    print(f"connectivity_duration_s: {data['connectivity_duration_s']:.2f}")
    print(f"total_beacons_sent: {data['total_beacons_sent']}")
    print(f"total_beacons_delivered: {data['total_beacons_delivered']}")
    for (start, end) in data.get("los_blocked_intervals", []):
        print(f"los_blocked_s: {start:.2f}..{end:.2f}")
    return EXIT_OK


def _parse_sweep_values(args: argparse.Namespace) -> list[float]:
    if args.values is not None:
        try:
            return [float(v) for v in args.values.split(",") if v.strip() != ""]
        except ValueError:
            raise ValueError(f"--values must be a comma-separated list of "
                             f"numbers, got {args.values!r}") from None
    if args.range is not None:
        parts = args.range.split(":")
        if len(parts) != 3:
            raise ValueError("--range expects start:stop:step")
        start, stop, step_size = (float(p) for p in parts)
        if step_size <= 0:
            raise ValueError("--range step must be > 0")
        values = []
        k = 0
        while True:
            v = start + k * step_size
            if v > stop + 1e-9 * max(1.0, abs(stop)):
                break
            values.append(v)
            k += 1
        return values
    raise ValueError("sweep needs --values or --range")


def cmd_sweep(args: argparse.Namespace) -> int:
    doc = _load_scenario(args)
    values = _parse_sweep_values(args)
    payload = {"scenario": doc, "parameter": args.parameter,
               "values": values, "unit": args.unit}
    with _open_client(args.server) as client:
        code, data = _request(client, "POST", "/sweep", payload)
    if code != EXIT_OK:
        return code
    if args.csv:
        _write_sweep_csv(Path(args.csv), data["rows"])
    if args.json:
        print(json.dumps(data, indent=2))
        return EXIT_OK
    print(SWEEP_CSV_HEADER)
    for r in data["rows"]:
        print(f"{r['param']:.2f},{r['min_time_s']:.2f},{r['min_range_m']:.2f},"
              f"{r['verdict']},{r['connectivity_s']:.2f}")
    return EXIT_OK


def cmd_repro(args: argparse.Namespace) -> int:
    with _open_client(args.server) as client:
        code, data = _request(client, "GET", "/repro")
    if code != EXIT_OK:
        return code
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        width = max(len(r["name"]) for r in data["rows"])
        for r in data["rows"]:
            status = "PASS" if r["passed"] else "FAIL"
            print(f"{r['name']:<{width}}  expected {r['expected']}: "
                  f"got {r['actual']}  [{status}]")
    if not data["ok"]:
        failing = ", ".join(r["name"] for r in data["rows"] if not r["passed"])
        print(f"repro mismatch: {failing}", file=sys.stderr)
        return EXIT_REPRO_MISMATCH
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn
    uvicorn.run("passfeas.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="passfeas",
        description="Safe-pass advisory feasibility: maneuver bounds, "
                    "encounter simulation, parameter sweeps.")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service "
                             "(default: run the service in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario_io(p: argparse.ArgumentParser, seed: bool = False) -> None:
        p.add_argument("scenario",
                       help="scenario file: a path, or the name of a shipped "
                            "preset (e.g. paper_55mph.json)")
        p.add_argument("--channel", default=None,
                       help="replace the channel section with this table file")
        p.add_argument("--terrain", default=None,
                       help="replace the terrain section with this profile file")
        if seed:
            p.add_argument("--seed", type=int, default=None,
                           help="override the simulation RNG seed")

    p_bounds = sub.add_parser(
        "bounds", help="closed-form pass bounds and per-placement feasibility")
    add_scenario_io(p_bounds)
    p_bounds.add_argument("--json", action="store_true")
    p_bounds.set_defaults(func=cmd_bounds)

    p_run = sub.add_parser("run", help="simulate one encounter")
    add_scenario_io(p_run, seed=True)
    p_run.add_argument("--csv", default=None, metavar="PATH",
                       help="write the beacon log as CSV")
    p_run.add_argument("--json", action="store_true")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep one scenario parameter")
    add_scenario_io(p_sweep, seed=True)
    p_sweep.add_argument("parameter",
                         help="dotted path, e.g. pass_scenario.safety_margin_m")
    p_sweep.add_argument("--values", default=None,
                         help="comma-separated values")
    p_sweep.add_argument("--range", default=None, metavar="START:STOP:STEP")
    p_sweep.add_argument("--unit", default=None,
                         help="unit of the swept values (speed parameters only)")
    p_sweep.add_argument("--csv", default=None, metavar="PATH",
                         help="write the sweep table as CSV")
    p_sweep.add_argument("--json", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    p_repro = sub.add_parser(
        "repro", help="recompute the headline results from shipped data")
    p_repro.add_argument("--json", action="store_true")
    p_repro.set_defaults(func=cmd_repro)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except IsADirectoryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except httpx.HTTPError as exc:
        print(f"error: cannot reach the service: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
