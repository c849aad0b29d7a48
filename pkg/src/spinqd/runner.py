"""Scenario execution: time sweeps of the distributions, nonclassical-volume
series, negativity reports, and deterministic CSV emission.

The runner turns a ScenarioConfig into rows.  Channel dispatch lives here so
the CLI and the HTTP service share one code path.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import cosh, expm1, sinh

import numpy as np

from .channels import (
    BathParams,
    apply_channel,
    load_decoherence_table,
    qnd_evolve_qubit,
    sgad_kraus,
    sgad_params,
    tensor_channel,
    two_qubit_qnd_evolve,
)
from .dicke import DickeParams, evolve_dicke
from .fixtures import ScenarioConfig, ScenarioError
from .measures import QuadratureSpec, negativity_scan, nonclassical_volume
from .multipole import DensityMatrix, decompose
from .qd_eval import QDKind, evaluate

__all__ = [
    "RunManifest",
    "NumericalError",
    "scenario_hash",
    "state_at",
    "run_eval",
    "run_volume",
    "run_negativity",
    "write_csv",
    "load_state_trajectory",
]

CSV_FORMAT_VERSION = 1
FLOAT_FMT = "%.17g"


class NumericalError(ArithmeticError):
    """Numerical failure during a run (quadrature, truncation, drift)."""


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce one run byte for byte."""

    scenario: ScenarioConfig
    quad: QuadratureSpec = QuadratureSpec()
    threads: int = 1
    strict: bool = False
    seed: int = 0
    trajectory_csv: str | None = None
    gamma_table_csv: str | None = None

    def __post_init__(self):
        if self.threads < 1:
            raise ScenarioError("threads must be >= 1")


def scenario_hash(m: RunManifest) -> str:
    """Stable short hash of the manifest for CSV provenance headers."""
    blob = json.dumps(
        {
            "version": CSV_FORMAT_VERSION,
            "state": [m.scenario.state_kind, m.scenario.state_params],
            "channel": [m.scenario.channel_kind, m.scenario.channel_params],
            "theta": list(m.scenario.theta),
            "phi": list(m.scenario.phi),
            "times": list(m.scenario.times),
            "quad": [m.scenario.n_theta, m.scenario.n_phi],
            "strict": m.strict,
            "seed": m.seed,
            "injected": m.trajectory_csv is not None or m.gamma_table_csv is not None,
        },
        sort_keys=True,
        default=str,
    ).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _bath_from(params: dict) -> BathParams:
    return BathParams(
        gamma0=float(params.get("gamma0", 0.1)),
        omega_c=float(params.get("omega_c", 100.0)),
        T=float(params.get("temperature", 0.0)),
        r=float(params.get("r", 0.0)),
        a=float(params.get("a", 0.0)),
        omega=float(params.get("omega", 1.0)),
    )


def _gad_mixing(b: BathParams) -> float:
    """Mixing weight p for which the damping Kraus family reproduces the
    thermal/squeezed master-equation map exactly (p = 1 at T = 0, r = 0)."""
    n_th = 0.0 if b.T == 0 else 1.0 / expm1(b.omega / b.T)
    big_n = n_th * (cosh(b.r) ** 2 + sinh(b.r) ** 2) + sinh(b.r) ** 2
    return (big_n + 1.0) / (2.0 * big_n + 1.0)


def _damping_channel(b: BathParams, t: float, p: float | None, xi: float):
    # p defaults to 1: the family's parameters stay in range for every
    # (r, T, t), and the closed form for a general p is out of scope
    p_eff = 1.0 if p is None else float(p)
    s = sgad_params(b, p_eff, t)
    return sgad_kraus(s, xi=xi)


def load_state_trajectory(text: str, dims):
    """Interpolating trajectory t -> DensityMatrix from CSV text.

    Each row is t followed by the row-major density matrix entries as
    alternating real and imaginary parts.  Entries are interpolated linearly
    in t, then re-symmetrized; validity is enforced by DensityMatrix.
    """
    dims = tuple(int(d) for d in dims)
    dim = int(np.prod(dims))
    times = []
    mats = []
    for rec in csv.reader(io.StringIO(text)):
        if not rec or rec[0].lstrip().startswith("#"):
            continue
        try:
            vals = [float(x) for x in rec]
        except ValueError:
            continue  # header row
        if len(vals) != 1 + 2 * dim * dim:
            raise ScenarioError(
                f"trajectory row has {len(vals)} fields, expected {1 + 2 * dim * dim}"
            )
        times.append(vals[0])
        flat = np.array(vals[1:]).reshape(dim * dim, 2)
        mats.append((flat[:, 0] + 1j * flat[:, 1]).reshape(dim, dim))
    if len(times) < 1:
        raise ScenarioError("trajectory table is empty")
    order = np.argsort(times)
    ts = np.array(times)[order]
    stack = np.array(mats)[order]

    def at(t: float) -> DensityMatrix:
        if t <= ts[0]:
            m = stack[0]
        elif t >= ts[-1]:
            m = stack[-1]
        else:
            i = int(np.searchsorted(ts, t)) - 1
            w = (t - ts[i]) / (ts[i + 1] - ts[i])
            m = (1 - w) * stack[i] + w * stack[i + 1]
        m = (m + m.conj().T) / 2
        m = m / np.trace(m).real
        return DensityMatrix(dims=dims, data=m)

    return at


def state_at(m: RunManifest, t: float) -> DensityMatrix:
    """State of the scenario at time t under the configured channel."""
    cfg = m.scenario
    rho0 = cfg.initial_state()
    kind = cfg.channel_kind
    cp = cfg.channel_params
    n = len(rho0.dims)

    if kind == "none":
        return rho0
    if kind == "injected":
        if m.trajectory_csv is None:
            raise ScenarioError("injected channel requires a trajectory table")
        return load_state_trajectory(m.trajectory_csv, rho0.dims)(t)
    if kind == "qnd":
        return qnd_evolve_qubit(rho0, _bath_from(cp), t)
    if kind == "qnd-2qubit":
        gamma_sq = None
        if m.gamma_table_csv is not None:
            gamma_sq = load_decoherence_table(io.StringIO(m.gamma_table_csv))
        elif m.strict:
            raise ScenarioError(
                "strict mode requires an injected decoherence table for qnd-2qubit"
            )
        return two_qubit_qnd_evolve(
            rho0,
            _bath_from(cp),
            float(cp.get("transit_time", 0.05)),
            t,
            gamma_sq=gamma_sq,
            strict=m.strict,
        )
    if kind == "dicke":
        p = DickeParams(
            n_atoms=int(cp.get("n_atoms", 4)),
            nbar=float(cp.get("nbar", 30.0)),
            g=float(cp.get("g", 0.1)),
            gamma=float(cp.get("gamma", 0.001)),
        )
        return evolve_dicke(p, t)
    if kind in ("ad", "ad-first"):
        b = _bath_from(cp)
        # amplitude damping: the T = 0, r = 0, p = 1 limit of the family
        ad = _damping_channel(
            BathParams(gamma0=b.gamma0, omega_c=b.omega_c, T=0.0, omega=b.omega), t, 1.0, 0.0
        )
        if kind == "ad":
            factors = [ad] * n
        else:
            factors = [ad] + [2] * (n - 1)
        return apply_channel(tensor_channel(factors), rho0)
    if kind in ("sgad", "gad"):
        b = _bath_from(cp)
        if kind == "gad" and b.r != 0:
            raise ScenarioError("gad channel requires r = 0; use sgad for r != 0")
        ch = _damping_channel(b, t, cp.get("p"), float(cp.get("xi", 0.0)))
        return apply_channel(tensor_channel([ch] * n), rho0)
    if kind in ("ad-each", "gad-each"):
        temps = cp.get("temperatures", [0.0] * n)
        if len(temps) != n:
            raise ScenarioError("temperatures list must have one entry per qubit")
        base = _bath_from(cp)
        factors = []
        for temp in temps:
            b = BathParams(
                gamma0=base.gamma0, omega_c=base.omega_c, T=float(temp),
                r=0.0, a=0.0, omega=base.omega,
            )
            factors.append(_damping_channel(b, t, cp.get("p"), 0.0))
        return apply_channel(tensor_channel(factors), rho0)
    raise ScenarioError(f"channel kind {kind!r} not dispatchable")


def _angle_points(cfg: ScenarioConfig, n: int):
    if len(cfg.theta) != n:
        raise ScenarioError(
            f"scenario has {len(cfg.theta)} angle pairs but the state has {n} particles"
        )
    return list(zip(cfg.theta, cfg.phi))


def _map_times(m: RunManifest, fn):
    """Apply fn to every scenario time, in order, optionally on a pool."""
    times = list(m.scenario.times)
    if m.threads == 1:
        return [fn(t) for t in times]
    with ThreadPoolExecutor(max_workers=m.threads) as pool:
        return list(pool.map(fn, times))


def _wrap_numerical(exc: Exception) -> Exception:
    if isinstance(exc, (ArithmeticError, np.linalg.LinAlgError)):
        return NumericalError(str(exc))
    return exc


def run_eval(m: RunManifest) -> tuple[list[str], list[list[float]]]:
    """Rows (t, theta..., phi..., W, P, Q, F) at the scenario's angle point."""
    rho0 = m.scenario.initial_state()
    n = len(rho0.dims)
    points = _angle_points(m.scenario, n)
    kinds = [QDKind.W, QDKind.P, QDKind.Q, QDKind.F]

    def one(t: float) -> list[float]:
        try:
            c = decompose(state_at(m, t))
            vals = [evaluate(k, c, points) for k in kinds]
        except Exception as exc:  # noqa: BLE001 - rewrapped below
            raise _wrap_numerical(exc) from exc
        return [t, *m.scenario.theta, *m.scenario.phi, *vals]

    header = (
        ["t"]
        + [f"theta{i + 1}" for i in range(n)]
        + [f"phi{i + 1}" for i in range(n)]
        + ["W", "P", "Q", "F"]
    )
    return header, _map_times(m, one)


def run_volume(m: RunManifest) -> tuple[list[str], list[list[float]]]:
    """Rows (t, delta) of the nonclassical volume along the time grid."""
    quad = QuadratureSpec(
        n_theta=m.scenario.n_theta, n_phi=m.scenario.n_phi,
        node_budget=m.quad.node_budget,
    )

    def one(t: float) -> list[float]:
        try:
            c = decompose(state_at(m, t))
            return [t, nonclassical_volume(c, quad)]
        except Exception as exc:  # noqa: BLE001
            raise _wrap_numerical(exc) from exc

    return ["t", "delta"], _map_times(m, one)


def run_negativity(m: RunManifest, kind: QDKind, t: float | None = None) -> dict:
    """Negativity report (grid minimum, location, negative weight fraction)
    of one distribution kind at one time, plus delta for the W kind."""
    kind = QDKind(kind)
    t = m.scenario.times[0] if t is None else float(t)
    quad = QuadratureSpec(
        n_theta=m.scenario.n_theta, n_phi=m.scenario.n_phi,
        node_budget=m.quad.node_budget,
    )
    try:
        c = decompose(state_at(m, t))
        report = negativity_scan(kind, c, quad)
        if kind is QDKind.W:
            report["delta"] = nonclassical_volume(c, quad)
    except Exception as exc:  # noqa: BLE001
        raise _wrap_numerical(exc) from exc
    report["t"] = t
    report["scenario"] = scenario_hash(m)
    return report


def header_lines(m: RunManifest, provenance: str = "exact", extra=()) -> list[str]:
    """Provenance comment lines embedded at the top of every CSV."""
    cfg = m.scenario
    lines = [
        f"# format_version: {CSV_FORMAT_VERSION}",
        f"# scenario: {scenario_hash(m)}",
        f"# provenance: {provenance}",
        f"# state: {cfg.state_kind} {json.dumps(cfg.state_params, sort_keys=True, default=str)}",
        f"# channel: {cfg.channel_kind} "
        f"{json.dumps(cfg.channel_params, sort_keys=True, default=str)}",
        f"# quadrature: {cfg.n_theta}x{cfg.n_phi}",
    ]
    lines.extend(f"# {x}" for x in extra)
    return lines


def write_csv(stream, comment_lines, columns, rows) -> None:
    """Deterministic CSV: fixed %.17g float formatting, LF line endings."""
    for line in comment_lines:
        stream.write(line + "\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(
            ",".join(FLOAT_FMT % v if isinstance(v, float) else str(v) for v in row) + "\n"
        )
