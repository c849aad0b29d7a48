"""Named figure configurations: parameter sets, CSV emission, gnuplot scripts.

Each figure id binds a fixed scenario (state, channel, angles, time or angle
sweep) so runs are reproducible from the id alone.  Figures based on the
two-qubit collective-bath model (fig4*, fig5*, fig6*, fig8c) use a reduced
master-equation approximation unless a state trajectory is injected; in
strict mode they refuse to run on the approximation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import cos, cosh, expm1, pi, sin, sinh, sqrt

import numpy as np
from scipy.linalg import expm

from .fixtures import ScenarioConfig, ScenarioError, named_state
from .measures import QuadratureSpec, nonclassical_volume
from .multipole import DensityMatrix, decompose
from .qd_eval import QDKind, evaluate
from .runner import (
    RunManifest,
    header_lines,
    load_state_trajectory,
    run_eval,
    scenario_hash,
    state_at,
    write_csv,
)

__all__ = [
    "FigureResult",
    "figure_ids",
    "figure_info",
    "build_figure",
    "collective_two_qubit_evolve",
]


# ---------------------------------------------------------------------------
# Reduced two-qubit collective-bath model (approximation mode)
# ---------------------------------------------------------------------------

def _ficek_f(x: float) -> float:
    # collective decay profile for transition dipoles orthogonal to the
    # interatomic axis; -> 1 as x -> 0
    if x < 1e-6:
        return 1.0 - x * x / 5.0
    return 1.5 * (sin(x) / x + cos(x) / x ** 2 - sin(x) / x ** 3)


def _ficek_omega(x: float) -> float:
    # dipole-dipole shift profile, same geometry; diverges as x -> 0
    return 0.75 * (-cos(x) / x + sin(x) / x ** 2 + cos(x) / x ** 3)


def _sigma_ops():
    # |0> = excited (m = +1/2), so the lowering operator is |1><0|
    sm = np.array([[0, 0], [1, 0]], dtype=complex)
    eye = np.eye(2, dtype=complex)
    sm1 = np.kron(sm, eye)
    sm2 = np.kron(eye, sm)
    return sm1, sm2


def _superop(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    # row-major vectorization: vec(A rho B) = (A kron B^T) vec(rho)
    return np.kron(A, B.T)


def collective_two_qubit_evolve(
    rho0: DensityMatrix,
    t: float,
    r12: float,
    gamma: float = 0.05,
    T: float = 0.0,
    r: float = 0.0,
    omega0: float = 1.0,
) -> DensityMatrix:
    """Two two-level atoms in a common (squeezed) thermal bath, reduced model.

    Collective decay Gamma_12 = gamma F(k0 r12) and dipole-dipole shift
    Omega_12 from the orthogonal-dipole profiles; thermal occupation and bath
    squeezing enter through the effective (N, M) coefficients.  Solved exactly
    by exponentiating the 16x16 Liouvillian, so the large Omega_12 at small
    spacing poses no stiffness problem.  This is a stand-in for externally
    tabulated dynamics and is flagged as an approximation by callers.
    """
    if rho0.dims != (2, 2):
        raise ValueError("expected a two-qubit state")
    x = omega0 * r12  # k0 = omega0 in these units
    g12 = gamma * _ficek_f(x)
    om12 = gamma * _ficek_omega(x)
    n_th = 0.0 if T == 0 else 1.0 / expm1(omega0 / T)
    big_n = n_th * (cosh(r) ** 2 + sinh(r) ** 2) + sinh(r) ** 2
    big_m = cosh(r) * sinh(r) * (2 * n_th + 1)

    sm1, sm2 = _sigma_ops()
    sms = (sm1, sm2)
    sz = sum(s.conj().T @ s for s in sms)
    H = omega0 * (np.eye(4) - sz) + om12 * (
        sm1.conj().T @ sm2 + sm2.conj().T @ sm1
    )
    rates = {(0, 0): gamma, (1, 1): gamma, (0, 1): g12, (1, 0): g12}
    eye4 = np.eye(4, dtype=complex)
    L = -1j * (_superop(H, eye4) - _superop(eye4, H))
    for (i, j), g in rates.items():
        a, b = sms[i], sms[j]
        ad, bd = a.conj().T, b.conj().T
        L += g * (big_n + 1) * (
            _superop(a, bd) - 0.5 * _superop(bd @ a, eye4) - 0.5 * _superop(eye4, bd @ a)
        )
        L += g * big_n * (
            _superop(ad, b) - 0.5 * _superop(b @ ad, eye4) - 0.5 * _superop(eye4, b @ ad)
        )
        if big_m != 0:
            L -= g * big_m * (
                _superop(ad, bd) - 0.5 * _superop(bd @ ad, eye4) - 0.5 * _superop(eye4, bd @ ad)
            )
            L -= g * big_m * (
                _superop(a, b) - 0.5 * _superop(b @ a, eye4) - 0.5 * _superop(eye4, b @ a)
            )
    vec = (expm(L * t) @ rho0.data.reshape(16)).reshape(4, 4)
    vec = (vec + vec.conj().T) / 2
    vec = vec / np.trace(vec).real
    return DensityMatrix(dims=(2, 2), data=vec)


def _excited_ground() -> DensityMatrix:
    return named_state("e1g2")


# ---------------------------------------------------------------------------
# Figure registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FigureResult:
    figure_id: str
    provenance: str  # exact | approximation | injected
    files: dict[str, str]
    manifest: dict


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    description: str
    mode: str  # exact | approximation
    builder: object = field(repr=False)


def _gnuplot(figure_id: str, columns, using_pairs, ylabel: str, xlabel: str) -> str:
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead outside",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
        "set zeroaxis",
        "plot \\",
    ]
    plots = [
        f"  '{figure_id}.csv' using 1:{col} with lines title '{title}'"
        for col, title in using_pairs
    ]
    lines.append(", \\\n".join(plots))
    return "\n".join(lines) + "\n"


def _csv_text(m: RunManifest, provenance: str, columns, rows, extra=()) -> str:
    import io

    buf = io.StringIO()
    write_csv(buf, header_lines(m, provenance, extra), columns, rows)
    return buf.getvalue()


def _times(stop: float, num: int, start: float = 0.0):
    return tuple(np.linspace(start, stop, num))


def _qnd_scenario(T: float, theta: float, phi: float, times) -> ScenarioConfig:
    return ScenarioConfig(
        state_kind="coherent",
        state_params={"j": 0.5, "alpha": pi / 2, "beta": pi / 3},
        channel_kind="qnd",
        channel_params={
            "gamma0": 0.1, "omega_c": 100.0, "temperature": T,
            "r": 0.0, "a": 0.0, "omega": 1.0,
        },
        theta=(theta,), phi=(phi,), times=times,
    )


def _fig1a(ctx):
    cfg = _qnd_scenario(1.0, pi / 3, pi / 4, _times(10.0, 201))
    m = RunManifest(scenario=cfg, threads=ctx["threads"])
    cols, rows = run_eval(m)
    csv_text = _csv_text(m, "exact", cols, rows)
    gp = _gnuplot("fig1a", cols, [(4, "W"), (5, "P"), (6, "Q")], "QD value", "t")
    return "exact", {"fig1a.csv": csv_text, "fig1a.gp": gp}, m


def _fig1_multi(ctx, figure_id: str, kind: QDKind):
    temps = [0.0, 1.0, 2.0]
    times = _times(10.0, 201)
    series = []
    m0 = None
    for T in temps:
        cfg = _qnd_scenario(T, pi / 3, pi / 4, times)
        m = RunManifest(scenario=cfg, threads=ctx["threads"])
        m0 = m0 or m
        series.append([
            evaluate(kind, decompose(state_at(m, t)), [(pi / 3, pi / 4)]) for t in times
        ])
    cols = ["t"] + [f"{kind.value}_T{int(T)}" for T in temps]
    rows = [[t, *(s[i] for s in series)] for i, t in enumerate(times)]
    csv_text = _csv_text(m0, "exact", cols, rows)
    gp = _gnuplot(figure_id, cols, [(i + 2, c) for i, c in enumerate(cols[1:])],
                  f"{kind.value} value", "t")
    return "exact", {f"{figure_id}.csv": csv_text, f"{figure_id}.gp": gp}, m0


def _sgad_scenario(T: float, r: float, times) -> ScenarioConfig:
    return ScenarioConfig(
        state_kind="coherent",
        state_params={"j": 0.5, "alpha": pi / 2, "beta": pi / 3},
        channel_kind="sgad",
        channel_params={
            "gamma0": 0.05, "omega_c": 100.0, "temperature": T,
            "r": r, "a": 0.0, "omega": 1.0, "xi": 0.0,
        },
        theta=(pi / 2,), phi=(pi / 3,), times=times,
    )


def _fig2(ctx, figure_id: str, T: float, r: float, t_stop: float):
    cfg = _sgad_scenario(T, r, _times(t_stop, 201))
    m = RunManifest(scenario=cfg, threads=ctx["threads"])
    cols, rows = run_eval(m)
    csv_text = _csv_text(m, "exact", cols, rows)
    gp = _gnuplot(figure_id, cols, [(4, "W"), (5, "P"), (6, "Q")], "QD value", "t")
    return "exact", {f"{figure_id}.csv": csv_text, f"{figure_id}.gp": gp}, m


def _fig3(ctx):
    # initial state: product of two equatorial coherent states (all elements 1/4)
    cfg = ScenarioConfig(
        state_kind="coherent",
        state_params={"j": 0.5, "alpha": pi / 2, "beta": 0.0, "n": 2},
        channel_kind="qnd-2qubit",
        channel_params={
            "gamma0": 0.01, "omega_c": 100.0, "temperature": 2.0,
            "r": 0.05, "a": 0.0, "omega": 1.0, "transit_time": 0.05,
        },
        theta=(pi / 3, pi / 4), phi=(pi, pi / 3), times=_times(10.0, 201),
    )
    provenance = "injected" if ctx["gamma_table_csv"] else "approximation"
    if ctx["strict"] and provenance == "approximation":
        raise ScenarioError("fig3 needs an injected decoherence table in strict mode")
    m = RunManifest(
        scenario=cfg, threads=ctx["threads"], strict=ctx["strict"],
        gamma_table_csv=ctx["gamma_table_csv"],
    )
    cols, rows = run_eval(m)
    extra = () if provenance == "injected" else (
        "warning: dephasing functional approximated by the single-qubit exponent",
    )
    csv_text = _csv_text(m, provenance, cols, rows, extra)
    gp = _gnuplot("fig3", cols, [(6, "W"), (7, "P"), (8, "Q")], "QD value", "t")
    return provenance, {"fig3.csv": csv_text, "fig3.gp": gp}, m


_VAC_ANGLES = ((pi / 8, pi / 3), (pi / 4, pi / 4))  # (theta1, theta2), (phi1, phi2)


def _vacuum_scenario(times) -> ScenarioConfig:
    return ScenarioConfig(
        state_kind="e1g2",
        channel_kind="none",
        theta=_VAC_ANGLES[0], phi=_VAC_ANGLES[1], times=times,
    )


def _collective_states(ctx, times, r12: float, T: float = 0.0, r: float = 0.0):
    """Trajectory of the collective-bath model (or the injected one for the
    caption's primary spacing r12 = 0.05)."""
    if ctx["trajectory_csv"] is not None and abs(r12 - 0.05) < 1e-12:
        at = load_state_trajectory(ctx["trajectory_csv"], (2, 2))
        return [at(t) for t in times], "injected"
    if ctx["strict"]:
        raise ScenarioError(
            "collective-bath figures need an injected trajectory in strict mode"
        )
    rho0 = _excited_ground()
    return (
        [collective_two_qubit_evolve(rho0, t, r12, T=T, r=r) for t in times],
        "approximation",
    )


_APPROX_NOTE = (
    "warning: collective-bath dynamics approximated by a reduced "
    "dipole-dipole master equation",
)


def _fig4_single(ctx, figure_id: str, kind: QDKind):
    times = _times(5.0, 101)
    points = list(zip(*_VAC_ANGLES))
    cols = ["t", f"{kind.value}_r0.05", f"{kind.value}_r2.0"]
    series = []
    provenance = "approximation"
    for r12 in (0.05, 2.0):
        states, prov = _collective_states(ctx, times, r12)
        if prov == "injected":
            provenance = "injected"
        series.append([evaluate(kind, decompose(s), points) for s in states])
    m = RunManifest(scenario=_vacuum_scenario(times), threads=ctx["threads"])
    rows = [[t, series[0][i], series[1][i]] for i, t in enumerate(times)]
    extra = () if provenance == "injected" else _APPROX_NOTE
    csv_text = _csv_text(m, provenance, cols, rows, extra)
    gp = _gnuplot(figure_id, cols, [(2, cols[1]), (3, cols[2])], f"{kind.value} value", "t")
    return provenance, {f"{figure_id}.csv": csv_text, f"{figure_id}.gp": gp}, m


def _fig4d(ctx):
    times = _times(5.0, 101)
    points = list(zip(*_VAC_ANGLES))
    states, provenance = _collective_states(ctx, times, 0.05)
    coeffs = [decompose(s) for s in states]
    rows = [
        [t, *(evaluate(k, c, points) for k in (QDKind.W, QDKind.P, QDKind.Q))]
        for t, c in zip(times, coeffs)
    ]
    cols = ["t", "W", "P", "Q"]
    m = RunManifest(scenario=_vacuum_scenario(times), threads=ctx["threads"])
    extra = () if provenance == "injected" else _APPROX_NOTE
    csv_text = _csv_text(m, provenance, cols, rows, extra)
    gp = _gnuplot("fig4d", cols, [(2, "W"), (3, "P"), (4, "Q")], "QD value", "t")
    return provenance, {"fig4d.csv": csv_text, "fig4d.gp": gp}, m


def _fig5(ctx, figure_id: str, kinds, fixed_times):
    spacings = np.linspace(0.05, 3.0, 120)
    points = list(zip(*_VAC_ANGLES))
    if ctx["strict"]:
        raise ScenarioError("spacing sweeps have no injectable trajectory; strict mode refuses")
    rho0 = _excited_ground()
    cols = ["r12"]
    series = []
    for t in fixed_times:
        for kind in kinds:
            cols.append(f"{kind.value}_t{t:g}")
            series.append([
                evaluate(kind, decompose(collective_two_qubit_evolve(rho0, t, s)), points)
                for s in spacings
            ])
    rows = [[float(s), *(col[i] for col in series)] for i, s in enumerate(spacings)]
    m = RunManifest(scenario=_vacuum_scenario((0.0,)), threads=ctx["threads"])
    csv_text = _csv_text(m, "approximation", cols, rows, _APPROX_NOTE)
    gp = _gnuplot(figure_id, cols, [(i + 2, c) for i, c in enumerate(cols[1:])],
                  "QD value", "r12")
    return "approximation", {f"{figure_id}.csv": csv_text, f"{figure_id}.gp": gp}, m


_SQ_ANGLES = ((pi / 4, pi / 8), (pi / 6, pi / 8))


def _fig6_sweep(ctx, figure_id: str, xname, xs, eval_state):
    if ctx["strict"] and figure_id != "fig6c":
        raise ScenarioError("squeezed-bath sweeps have no injectable trajectory; strict mode refuses")
    points = list(zip(*_SQ_ANGLES))
    kinds = (QDKind.W, QDKind.P, QDKind.Q)
    cols = [xname, "W", "P", "Q"]
    rows = []
    for x in xs:
        c = decompose(eval_state(float(x)))
        rows.append([float(x), *(evaluate(k, c, points) for k in kinds)])
    m = RunManifest(scenario=_vacuum_scenario((0.0,)), threads=ctx["threads"])
    csv_text = _csv_text(m, "approximation", cols, rows, _APPROX_NOTE)
    gp = _gnuplot(figure_id, cols, [(2, "W"), (3, "P"), (4, "Q")], "QD value", xname)
    return "approximation", {f"{figure_id}.csv": csv_text, f"{figure_id}.gp": gp}, m


def _fig6a(ctx):
    rho0 = _excited_ground()
    return _fig6_sweep(
        ctx, "fig6a", "T", np.linspace(0.0, 5.0, 51),
        lambda T: collective_two_qubit_evolve(rho0, 2.0, 0.08, T=T, r=0.5),
    )


def _fig6b(ctx):
    rho0 = _excited_ground()
    return _fig6_sweep(
        ctx, "fig6b", "T", np.linspace(0.0, 5.0, 51),
        lambda T: collective_two_qubit_evolve(rho0, 2.0, 1.5, T=T, r=-0.5),
    )


def _fig6c(ctx):
    times = _times(10.0, 101)
    points = list(zip(*_SQ_ANGLES))
    if ctx["trajectory_csv"] is not None:
        at = load_state_trajectory(ctx["trajectory_csv"], (2, 2))
        states = [at(t) for t in times]
        provenance = "injected"
    elif ctx["strict"]:
        raise ScenarioError("fig6c needs an injected trajectory in strict mode")
    else:
        rho0 = _excited_ground()
        states = [collective_two_qubit_evolve(rho0, t, 0.05, T=1.0, r=0.1) for t in times]
        provenance = "approximation"
    kinds = (QDKind.W, QDKind.P, QDKind.Q)
    rows = [
        [t, *(evaluate(k, decompose(s), points) for k in kinds)]
        for t, s in zip(times, states)
    ]
    cols = ["t", "W", "P", "Q"]
    m = RunManifest(scenario=_vacuum_scenario(times), threads=ctx["threads"])
    extra = () if provenance == "injected" else _APPROX_NOTE
    csv_text = _csv_text(m, provenance, cols, rows, extra)
    gp = _gnuplot("fig6c", cols, [(2, "W"), (3, "P"), (4, "Q")], "QD value", "t")
    return provenance, {"fig6c.csv": csv_text, "fig6c.gp": gp}, m


def _fig6d(ctx):
    rho0 = _excited_ground()
    return _fig6_sweep(
        ctx, "fig6d", "r12", np.linspace(0.05, 3.0, 120),
        lambda s: collective_two_qubit_evolve(rho0, 2.0, s, T=1.0, r=0.5),
    )


def _three_qubit_scenario(state_kind: str, channel_kind: str, theta, phi, times,
                          temps=None) -> ScenarioConfig:
    cp = {"gamma0": 0.1, "omega": 1.0}
    if temps is not None:
        cp["temperatures"] = list(temps)
    return ScenarioConfig(
        state_kind=state_kind, channel_kind=channel_kind, channel_params=cp,
        theta=theta, phi=phi, times=times,
    )


def _fig7(ctx, figure_id: str, state_kind: str, channel_kind: str, theta, phi, temps=None):
    cfg = _three_qubit_scenario(state_kind, channel_kind, theta, phi,
                                _times(10.0, 201), temps)
    m = RunManifest(scenario=cfg, threads=ctx["threads"])
    cols, rows = run_eval(m)
    csv_text = _csv_text(m, "exact", cols, rows)
    gp = _gnuplot(figure_id, cols, [(8, "W"), (9, "P"), (10, "Q")], "QD value", "t")
    return "exact", {f"{figure_id}.csv": csv_text, f"{figure_id}.gp": gp}, m


def _delta_series(m: RunManifest, quad: QuadratureSpec):
    out = []
    for t in m.scenario.times:
        out.append(nonclassical_volume(decompose(state_at(m, t)), quad))
    return out


def _fig8a(ctx):
    times = _times(10.0, 21)
    quad = QuadratureSpec()
    cols = ["t", "delta_T0", "delta_T1", "delta_T2"]
    series = []
    m0 = None
    for T in (0.0, 1.0, 2.0):
        cfg = _qnd_scenario(T, pi / 3, pi / 4, times)
        m = RunManifest(scenario=cfg, threads=ctx["threads"])
        m0 = m0 or m
        series.append(_delta_series(m, quad))
    rows = [[t, *(s[i] for s in series)] for i, t in enumerate(times)]
    csv_text = _csv_text(m0, "exact", cols, rows)
    gp = _gnuplot("fig8a", cols, [(2, "T=0"), (3, "T=1"), (4, "T=2")], "delta", "t")
    return "exact", {"fig8a.csv": csv_text, "fig8a.gp": gp}, m0


def _fig8b(ctx):
    times = _times(10.0, 21)
    quad = QuadratureSpec()
    cases = [("delta_AD", 0.0, 0.0), ("delta_GAD", 3.0, 0.0), ("delta_SGAD", 3.0, 1.0)]
    cols = ["t"] + [name for name, _, _ in cases]
    series = []
    m0 = None
    for _, T, r in cases:
        cfg = ScenarioConfig(
            state_kind="coherent",
            state_params={"j": 0.5, "alpha": pi / 2, "beta": pi / 3},
            channel_kind="sgad",
            channel_params={
                "gamma0": 0.1, "omega_c": 100.0, "temperature": T,
                "r": r, "a": 0.0, "omega": 1.0, "xi": 0.0,
            },
            theta=(pi / 2,), phi=(pi / 3,), times=times,
        )
        m = RunManifest(scenario=cfg, threads=ctx["threads"])
        m0 = m0 or m
        series.append(_delta_series(m, quad))
    rows = [[t, *(s[i] for s in series)] for i, t in enumerate(times)]
    csv_text = _csv_text(m0, "exact", cols, rows)
    gp = _gnuplot("fig8b", cols, [(2, "AD"), (3, "GAD"), (4, "SGAD")], "delta", "t")
    return "exact", {"fig8b.csv": csv_text, "fig8b.gp": gp}, m0


def _fig8c(ctx):
    times = _times(5.0, 21)
    quad = QuadratureSpec(n_theta=32, n_phi=32)
    cols = ["t", "delta_r0.05", "delta_r2.0"]
    series = []
    provenance = "approximation"
    for r12 in (0.05, 2.0):
        states, prov = _collective_states(ctx, times, r12)
        if prov == "injected":
            provenance = "injected"
        series.append([nonclassical_volume(decompose(s), quad) for s in states])
    rows = [[t, series[0][i], series[1][i]] for i, t in enumerate(times)]
    m = RunManifest(scenario=_vacuum_scenario(times), threads=ctx["threads"])
    extra = () if provenance == "injected" else _APPROX_NOTE
    csv_text = _csv_text(m, provenance, cols, rows, extra)
    gp = _gnuplot("fig8c", cols, [(2, cols[1]), (3, cols[2])], "delta", "t")
    return provenance, {"fig8c.csv": csv_text, "fig8c.gp": gp}, m


def _dicke_scenario(times) -> ScenarioConfig:
    return ScenarioConfig(
        state_kind="mixed", state_params={"dims": [5]},  # placeholder state
        channel_kind="dicke",
        channel_params={"n_atoms": 4, "nbar": 30.0, "g": 0.1, "gamma": 0.001},
        theta=(pi / 3,), phi=(pi / 2,), times=times,
    )


def _dicke_states(times):
    from .dicke import DickeParams, evolve_dicke

    p = DickeParams(n_atoms=4, nbar=30.0, g=0.1, gamma=0.001)
    return [evolve_dicke(p, t) for t in times]


def _fig8d(ctx):
    times = _times(200.0, 81)
    quad = QuadratureSpec()
    cols = ["t", "delta"]
    rows = [
        [t, nonclassical_volume(decompose(s), quad)]
        for t, s in zip(times, _dicke_states(times))
    ]
    m = RunManifest(scenario=_dicke_scenario(times), threads=ctx["threads"])
    csv_text = _csv_text(m, "exact", cols, rows)
    gp = _gnuplot("fig8d", cols, [(2, "delta")], "delta", "t")
    return "exact", {"fig8d.csv": csv_text, "fig8d.gp": gp}, m


def _fig9(ctx):
    times = _times(200.0, 201)
    point = [(pi / 3, pi / 2)]
    kinds = (QDKind.W, QDKind.P, QDKind.Q, QDKind.F)
    rows = [
        [t, *(evaluate(k, decompose(s), point) for k in kinds)]
        for t, s in zip(times, _dicke_states(times))
    ]
    cols = ["t", "W", "P", "Q", "F"]
    m = RunManifest(scenario=_dicke_scenario(times), threads=ctx["threads"])
    csv_text = _csv_text(m, "exact", cols, rows)
    gp = _gnuplot("fig9", cols, [(2, "W"), (3, "P"), (4, "Q"), (5, "F")], "QD value", "t")
    return "exact", {"fig9.csv": csv_text, "fig9.gp": gp}, m


def _fig10(ctx, figure_id: str, sweep: str):
    amp = 1 / sqrt(3)
    cfg = ScenarioConfig(
        state_kind="spin1", state_params={"amplitudes": [amp, amp, amp]},
        theta=(pi / 4,), phi=(2 * pi / 3,), times=(0.0,),
    )
    m = RunManifest(scenario=cfg, threads=ctx["threads"])
    c = decompose(cfg.initial_state())
    kinds = (QDKind.W, QDKind.P, QDKind.Q, QDKind.F)
    rows = []
    if sweep == "theta":
        xs = np.linspace(0.0, pi, 181)
        rows = [[float(x), *(evaluate(k, c, [(float(x), 2 * pi / 3)]) for k in kinds)]
                for x in xs]
        xname = "theta"
    else:
        xs = np.linspace(0.0, 2 * pi, 181)
        rows = [[float(x), *(evaluate(k, c, [(pi / 4, float(x))]) for k in kinds)]
                for x in xs]
        xname = "phi"
    cols = [xname, "W", "P", "Q", "F"]
    csv_text = _csv_text(m, "exact", cols, rows)
    gp = _gnuplot(figure_id, cols, [(2, "W"), (3, "P"), (4, "Q"), (5, "F")],
                  "QD value", xname)
    return "exact", {f"{figure_id}.csv": csv_text, f"{figure_id}.gp": gp}, m


def _registry() -> dict[str, FigureSpec]:
    specs = [
        FigureSpec("fig1a", "single-qubit dephasing: W, P, Q vs t at T=1", "exact", _fig1a),
        FigureSpec("fig1b", "single-qubit dephasing: W vs t for T=0,1,2", "exact",
                   lambda ctx: _fig1_multi(ctx, "fig1b", QDKind.W)),
        FigureSpec("fig1c", "single-qubit dephasing: P vs t for T=0,1,2", "exact",
                   lambda ctx: _fig1_multi(ctx, "fig1c", QDKind.P)),
        FigureSpec("fig2a", "SGAD qubit: QDs vs t at T=3, r=0", "exact",
                   lambda ctx: _fig2(ctx, "fig2a", 3.0, 0.0, 10.0)),
        FigureSpec("fig2b", "SGAD qubit: QDs vs t at T=3, r=1", "exact",
                   lambda ctx: _fig2(ctx, "fig2b", 3.0, 1.0, 10.0)),
        FigureSpec("fig2c", "SGAD qubit: QDs vs t at T=10, r=1", "exact",
                   lambda ctx: _fig2(ctx, "fig2c", 10.0, 1.0, 5.0)),
        FigureSpec("fig3", "two-qubit localized dephasing: QDs vs t", "approximation", _fig3),
        FigureSpec("fig4a", "two qubits, common vacuum bath: W vs t", "approximation",
                   lambda ctx: _fig4_single(ctx, "fig4a", QDKind.W)),
        FigureSpec("fig4b", "two qubits, common vacuum bath: P vs t", "approximation",
                   lambda ctx: _fig4_single(ctx, "fig4b", QDKind.P)),
        FigureSpec("fig4c", "two qubits, common vacuum bath: Q vs t", "approximation",
                   lambda ctx: _fig4_single(ctx, "fig4c", QDKind.Q)),
        FigureSpec("fig4d", "two qubits, common vacuum bath: QDs vs t at r12=0.05",
                   "approximation", _fig4d),
        FigureSpec("fig5a", "vacuum bath: W vs spacing at t=1,5", "approximation",
                   lambda ctx: _fig5(ctx, "fig5a", (QDKind.W,), (1.0, 5.0))),
        FigureSpec("fig5b", "vacuum bath: P vs spacing at t=1,5", "approximation",
                   lambda ctx: _fig5(ctx, "fig5b", (QDKind.P,), (1.0, 5.0))),
        FigureSpec("fig5c", "vacuum bath: QDs vs spacing at t=1", "approximation",
                   lambda ctx: _fig5(ctx, "fig5c", (QDKind.W, QDKind.P, QDKind.Q), (1.0,))),
        FigureSpec("fig5d", "vacuum bath: QDs vs spacing at t=5", "approximation",
                   lambda ctx: _fig5(ctx, "fig5d", (QDKind.W, QDKind.P, QDKind.Q), (5.0,))),
        FigureSpec("fig6a", "squeezed thermal bath: QDs vs T (r=0.5, r12=0.08)",
                   "approximation", _fig6a),
        FigureSpec("fig6b", "squeezed thermal bath: QDs vs T (r=-0.5, r12=1.5)",
                   "approximation", _fig6b),
        FigureSpec("fig6c", "squeezed thermal bath: QDs vs t (T=1, r=0.1, r12=0.05)",
                   "approximation", _fig6c),
        FigureSpec("fig6d", "squeezed thermal bath: QDs vs spacing (T=1, t=2, r=0.5)",
                   "approximation", _fig6d),
        FigureSpec("fig7a", "GHZ state, damping on first qubit: QDs vs t", "exact",
                   lambda ctx: _fig7(ctx, "fig7a", "ghz", "ad-first",
                                     (pi / 2, pi / 2, pi / 2), (pi / 4, pi / 3, pi / 6))),
        FigureSpec("fig7b", "GHZ state, thermal damping per qubit: QDs vs t", "exact",
                   lambda ctx: _fig7(ctx, "fig7b", "ghz", "gad-each",
                                     (pi / 2, pi / 2, pi / 2), (pi / 4, pi / 3, pi / 6),
                                     temps=(0.0, 1.0, 2.0))),
        FigureSpec("fig7c", "W state, damping on first qubit: QDs vs t", "exact",
                   lambda ctx: _fig7(ctx, "fig7c", "w", "ad-first",
                                     (pi / 4, pi / 6, pi / 3), (pi / 8, pi / 4, pi / 6))),
        FigureSpec("fig7d", "W state, thermal damping per qubit: QDs vs t", "exact",
                   lambda ctx: _fig7(ctx, "fig7d", "w", "gad-each",
                                     (pi / 4, pi / 6, pi / 3), (pi / 8, pi / 4, pi / 6),
                                     temps=(0.0, 1.0, 2.0))),
        FigureSpec("fig8a", "nonclassical volume vs t, dephasing, T=0,1,2", "exact", _fig8a),
        FigureSpec("fig8b", "nonclassical volume vs t: AD, GAD, SGAD", "exact", _fig8b),
        FigureSpec("fig8c", "nonclassical volume vs t, two-qubit vacuum bath",
                   "approximation", _fig8c),
        FigureSpec("fig8d", "nonclassical volume vs t, four-atom Dicke model", "exact", _fig8d),
        FigureSpec("fig9", "four-atom Dicke model: QDs vs t", "exact", _fig9),
        FigureSpec("fig10a", "spin-1 state: QDs vs theta at phi=2pi/3", "exact",
                   lambda ctx: _fig10(ctx, "fig10a", "theta")),
        FigureSpec("fig10b", "spin-1 state: QDs vs phi at theta=pi/4", "exact",
                   lambda ctx: _fig10(ctx, "fig10b", "phi")),
    ]
    return {s.figure_id: s for s in specs}


_REGISTRY = _registry()


def figure_ids() -> list[str]:
    return sorted(_REGISTRY)


def figure_info(figure_id: str) -> dict:
    spec = _REGISTRY.get(figure_id)
    if spec is None:
        raise ScenarioError(f"unknown figure id {figure_id!r}")
    return {"id": spec.figure_id, "description": spec.description, "mode": spec.mode}


def build_figure(
    figure_id: str,
    strict: bool = False,
    threads: int = 1,
    trajectory_csv: str | None = None,
    gamma_table_csv: str | None = None,
) -> FigureResult:
    """Run one registered figure and return its CSV and gnuplot files."""
    spec = _REGISTRY.get(figure_id)
    if spec is None:
        raise ScenarioError(f"unknown figure id {figure_id!r}")
    ctx = {
        "strict": strict,
        "threads": threads,
        "trajectory_csv": trajectory_csv,
        "gamma_table_csv": gamma_table_csv,
    }
    provenance, files, manifest = spec.builder(ctx)
    return FigureResult(
        figure_id=figure_id,
        provenance=provenance,
        files=files,
        manifest={
            "id": figure_id,
            "description": spec.description,
            "provenance": provenance,
            "scenario": scenario_hash(manifest),
            "strict": strict,
        },
    )
