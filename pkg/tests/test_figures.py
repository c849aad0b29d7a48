import numpy as np
import pytest

from spinqd.figures import (
    build_figure,
    collective_two_qubit_evolve,
    figure_ids,
    figure_info,
)
from spinqd.fixtures import ScenarioError, named_state
from spinqd.runner import FLOAT_FMT

ALL_IDS = [
    "fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c", "fig3",
    "fig4a", "fig4b", "fig4c", "fig4d", "fig5a", "fig5b", "fig5c", "fig5d",
    "fig6a", "fig6b", "fig6c", "fig6d", "fig7a", "fig7b", "fig7c", "fig7d",
    "fig8a", "fig8b", "fig8c", "fig8d", "fig9", "fig10a", "fig10b",
]


def test_registry_ids():
    assert figure_ids() == sorted(ALL_IDS)
    info = figure_info("fig4d")
    assert info["mode"] == "approximation"
    assert figure_info("fig1a")["mode"] == "exact"
    with pytest.raises(ScenarioError):
        figure_info("fig99")
    with pytest.raises(ScenarioError):
        build_figure("fig99")


def test_collective_evolve_is_physical():
    rho0 = named_state("e1g2")
    for t in (0.5, 3.0):
        out = collective_two_qubit_evolve(rho0, t, 0.05, T=1.0, r=0.3)
        assert np.trace(out.data).real == pytest.approx(1.0, abs=1e-12)
        assert np.abs(out.data - out.data.conj().T).max() < 1e-12
    with pytest.raises(ValueError):
        collective_two_qubit_evolve(named_state("ghz"), 1.0, 0.05)


def test_collective_evolve_vacuum_decay_at_large_spacing():
    # widely separated atoms in vacuum decay independently at rate gamma
    rho0 = named_state("e1g2")
    gamma, t = 0.05, 4.0
    out = collective_two_qubit_evolve(rho0, t, 50.0, gamma=gamma)
    # excited population of qubit 1 = rho[|eg>,|eg>] + rho[|ee>,|ee>]
    pop = (out.data[1, 1] + out.data[0, 0]).real
    assert pop == pytest.approx(np.exp(-gamma * t), abs=2e-3)


def check_figure_output(fid, provenance="exact", **kwargs):
    result = build_figure(fid, **kwargs)
    assert result.figure_id == fid
    assert result.provenance == provenance
    assert set(result.files) == {f"{fid}.csv", f"{fid}.gp"}
    csv_text = result.files[f"{fid}.csv"]
    assert csv_text.startswith("# format_version: 1\n")
    assert f"# provenance: {provenance}" in csv_text
    gp = result.files[f"{fid}.gp"]
    assert "set datafile separator ','" in gp
    assert f"'{fid}.csv'" in gp
    assert result.manifest["id"] == fid
    assert result.manifest["provenance"] == provenance
    return result


def test_build_exact_figures():
    check_figure_output("fig1a")
    check_figure_output("fig10a")
    check_figure_output("fig10b")


def test_fig1b_columns_are_per_temperature():
    result = build_figure("fig1b")
    header = [
        line for line in result.files["fig1b.csv"].splitlines()
        if not line.startswith("#")
    ][0]
    assert header == "t,W_T0,W_T1,W_T2"


def test_fig3_defaults_to_approximation():
    result = check_figure_output("fig3", provenance="approximation")
    assert "warning" in result.files["fig3.csv"]


def test_fig3_strict_refuses_without_table():
    with pytest.raises(ScenarioError):
        build_figure("fig3", strict=True)
    gamma_table = "t,Gamma\n0,0\n10,0.2\n"
    result = build_figure("fig3", strict=True, gamma_table_csv=gamma_table)
    assert result.provenance == "injected"


@pytest.mark.parametrize("fid", ["fig4d", "fig5a", "fig6a", "fig6c", "fig8c"])
def test_collective_figures_strict_refuse(fid):
    with pytest.raises(ScenarioError):
        build_figure(fid, strict=True)


def make_trajectory_csv(times, states):
    lines = []
    for t, s in zip(times, states):
        flat = []
        for v in s.data.reshape(-1):
            flat.append(FLOAT_FMT % v.real)
            flat.append(FLOAT_FMT % v.imag)
        lines.append(",".join([FLOAT_FMT % t] + flat))
    return "\n".join(lines) + "\n"


def test_fig4d_injected_trajectory():
    times = np.linspace(0.0, 5.0, 101)
    rho0 = named_state("e1g2")
    states = [collective_two_qubit_evolve(rho0, t, 0.05) for t in times]
    csv_text = make_trajectory_csv(times, states)
    result = build_figure("fig4d", strict=True, trajectory_csv=csv_text)
    assert result.provenance == "injected"
    # injected run has no approximation warning header
    assert "warning" not in result.files["fig4d.csv"]


def test_fig4a_approximation_columns():
    result = check_figure_output("fig4a", provenance="approximation")
    header = [
        line for line in result.files["fig4a.csv"].splitlines()
        if not line.startswith("#")
    ][0]
    assert header == "t,W_r0.05,W_r2.0"
    assert "warning" in result.files["fig4a.csv"]


def test_fig5c_spacing_sweep():
    result = check_figure_output("fig5c", provenance="approximation")
    body = [
        line for line in result.files["fig5c.csv"].splitlines()
        if not line.startswith("#")
    ]
    assert body[0] == "r12,W_t1,P_t1,Q_t1"
    assert len(body) == 1 + 120


def test_fig7a_three_qubit_columns():
    result = check_figure_output("fig7a")
    header = [
        line for line in result.files["fig7a.csv"].splitlines()
        if not line.startswith("#")
    ][0]
    assert header == "t,theta1,theta2,theta3,phi1,phi2,phi3,W,P,Q,F"
