"""Command-line front end.

A thin client over the HTTP service: requests are sent either to an external
server (--server) or to the app in-process through an ASGI transport, so the
CLI and the service share one execution path.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import httpx

from . import __version__

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # in-process: drive the ASGI app directly so no server is needed
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service import create_app

    return TestClient(create_app(), base_url="http://spinqd.local")


def _load_scenario_doc(path: str, quad: str | None) -> dict:
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise SystemExit(_config_error(f"cannot read scenario file: {exc}"))
    if quad:
        try:
            n_theta, n_phi = (int(x) for x in quad.lower().split("x"))
        except ValueError:
            raise SystemExit(_config_error(f"bad --quad value {quad!r}, expected <n>x<m>"))
        doc.setdefault("quadrature", {})
        doc["quadrature"]["n_theta"] = n_theta
        doc["quadrature"]["n_phi"] = n_phi
    if "state" not in doc:
        raise SystemExit(_config_error("scenario file lacks a [state] section"))
    return doc


def _config_error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_CONFIG


def _read_optional(path: str | None) -> str | None:
    if path is None:
        return None
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemExit(_config_error(f"cannot read {path}: {exc}"))


def _handle_http_error(resp: httpx.Response) -> int:
    try:
        detail = resp.json().get("detail", resp.text)
    except ValueError:
        detail = resp.text
    print(f"error: {detail}", file=sys.stderr)
    if resp.status_code == 422:
        return EXIT_CONFIG
    if isinstance(detail, str) and detail.startswith("numerical"):
        return EXIT_NUMERICAL
    return 1


def _emit(text: str, out: str | None, filename: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        directory = Path(out)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / filename).write_text(text, encoding="utf-8")


def _run_payload(args) -> dict:
    doc = _load_scenario_doc(args.scenario, args.quad)
    return {
        "scenario": doc,
        "strict": args.strict,
        "threads": args.threads,
        "trajectory_csv": _read_optional(args.inject),
        "gamma_table_csv": _read_optional(args.gamma_table),
    }


def _csv_command(args, endpoint: str, filename: str) -> int:
    payload = _run_payload(args)
    with _client(args.server) as client:
        resp = client.post(endpoint, json=payload)
    if resp.status_code != 200:
        return _handle_http_error(resp)
    body = resp.json()
    if body["provenance"] == "approximation":
        print("warning: running in approximation mode", file=sys.stderr)
    _emit(body["csv"], args.out, filename)
    return 0


def cmd_eval(args) -> int:
    return _csv_command(args, "/eval", "eval.csv")


def cmd_volume(args) -> int:
    return _csv_command(args, "/volume", "volume.csv")


def cmd_negativity(args) -> int:
    payload = _run_payload(args)
    payload["kind"] = args.kind
    if args.time is not None:
        payload["t"] = args.time
    with _client(args.server) as client:
        resp = client.post("/negativity", json=payload)
    if resp.status_code != 200:
        return _handle_http_error(resp)
    _emit(json.dumps(resp.json(), sort_keys=True, indent=2) + "\n", args.out, "negativity.json")
    return 0


def cmd_figure(args) -> int:
    figure_id = args.figure or args.id
    if figure_id is None:
        return _config_error("a figure id is required (--figure <id>)")
    payload = {
        "strict": args.strict,
        "threads": args.threads,
        "trajectory_csv": _read_optional(args.inject),
        "gamma_table_csv": _read_optional(args.gamma_table),
    }
    with _client(args.server) as client:
        resp = client.post(f"/figure/{figure_id}", json=payload)
    if resp.status_code != 200:
        return _handle_http_error(resp)
    body = resp.json()
    if body["provenance"] == "approximation":
        print(
            "warning: figure uses a reduced-model approximation; "
            "inject a trajectory for reference dynamics",
            file=sys.stderr,
        )
    out = args.out or "."
    for name, text in body["files"].items():
        _emit(text, out, name)
    print(json.dumps(body["manifest"], sort_keys=True, indent=2), file=sys.stderr)
    return 0


def cmd_figures(args) -> int:
    with _client(args.server) as client:
        resp = client.get("/figures")
    if resp.status_code != 200:
        return _handle_http_error(resp)
    sys.stdout.write(json.dumps(resp.json(), indent=2) + "\n")
    return 0


def cmd_health(args) -> int:
    with _client(args.server) as client:
        resp = client.get("/health")
    if resp.status_code != 200:
        return _handle_http_error(resp)
    sys.stdout.write(json.dumps(resp.json()) + "\n")
    return 0


def _add_common(sp, scenario: bool) -> None:
    if scenario:
        sp.add_argument("--scenario", required=True, help="scenario TOML file")
        sp.add_argument("--quad", help="quadrature nodes as <n_theta>x<n_phi>")
    sp.add_argument("--out", help="output directory (default: stdout)")
    sp.add_argument("--strict", action="store_true",
                    help="refuse approximation fallbacks")
    sp.add_argument("--threads", type=int, default=1, help="worker threads")
    sp.add_argument("--server", help="base URL of a running service")
    sp.add_argument("--inject", help="CSV file with an externally computed state trajectory")
    sp.add_argument("--gamma-table", dest="gamma_table",
                    help="CSV file with (t, Gamma) decoherence values")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinqd",
        description="Quasiprobability distributions of spin systems under noise",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", help="W, P, Q, F time series for a scenario")
    _add_common(sp, scenario=True)
    sp.set_defaults(fn=cmd_eval)

    sp = sub.add_parser("volume", help="nonclassical volume time series")
    _add_common(sp, scenario=True)
    sp.set_defaults(fn=cmd_volume)

    sp = sub.add_parser("negativity", help="negativity report at one time")
    _add_common(sp, scenario=True)
    sp.add_argument("--kind", default="W", choices=["W", "P", "Q", "F"])
    sp.add_argument("--time", type=float, help="evaluation time (default: first scenario time)")
    sp.set_defaults(fn=cmd_negativity)

    sp = sub.add_parser("figure", help="emit CSV and gnuplot script for a registered figure")
    sp.add_argument("id", nargs="?", help="figure id, e.g. fig1a")
    sp.add_argument("--figure", help="figure id (alternative to the positional)")
    _add_common(sp, scenario=False)
    sp.set_defaults(fn=cmd_figure)

    sp = sub.add_parser("figures", help="list registered figures")
    sp.add_argument("--server", help="base URL of a running service")
    sp.set_defaults(fn=cmd_figures)

    sp = sub.add_parser("health", help="service health check")
    sp.add_argument("--server", help="base URL of a running service")
    sp.set_defaults(fn=cmd_health)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_CONFIG
    except httpx.HTTPError as exc:
        print(f"error: transport failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
