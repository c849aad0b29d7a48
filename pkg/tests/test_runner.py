import io
import math

import numpy as np
import pytest

from spinqd.fixtures import ScenarioConfig, ScenarioError, named_state
from spinqd.qd_eval import QDKind
from spinqd.runner import (
    NumericalError,
    RunManifest,
    load_state_trajectory,
    run_eval,
    run_negativity,
    run_volume,
    scenario_hash,
    state_at,
    write_csv,
)


def qnd_manifest(times=(0.0, 1.0), **kwargs) -> RunManifest:
    cfg = ScenarioConfig(
        state_kind="coherent",
        state_params={"j": 0.5, "alpha": 1.0, "beta": 0.3},
        channel_kind="qnd",
        channel_params={"gamma0": 0.1, "omega_c": 100.0, "temperature": 1.0},
        theta=(0.7,), phi=(0.4,), times=times,
    )
    return RunManifest(scenario=cfg, **kwargs)


def ad_manifest(state_kind: str, channel_kind: str, lam: float, times=(0.0,)) -> RunManifest:
    # gamma0 chosen so that 1 - e^{-gamma0 t} = lam at t = 1
    gamma0 = -math.log(1 - lam) if lam < 1 else 50.0
    n = {"singlet": 2, "ghz": 3, "w": 3}[state_kind]
    cfg = ScenarioConfig(
        state_kind=state_kind,
        channel_kind=channel_kind,
        channel_params={"gamma0": gamma0, "omega": 1.0},
        theta=(0.5,) * n, phi=(0.2,) * n, times=times,
    )
    return RunManifest(scenario=cfg)


def test_manifest_validation():
    with pytest.raises(ScenarioError):
        qnd_manifest(threads=0)


def test_scenario_hash_is_stable_and_sensitive():
    a = scenario_hash(qnd_manifest())
    b = scenario_hash(qnd_manifest())
    assert a == b and len(a) == 16
    assert scenario_hash(qnd_manifest(times=(0.0, 2.0))) != a
    assert scenario_hash(qnd_manifest(strict=True)) != a


def test_state_at_none_returns_initial():
    cfg = ScenarioConfig(state_kind="ghz", theta=(0.1,) * 3, phi=(0.2,) * 3)
    m = RunManifest(scenario=cfg)
    assert np.abs(state_at(m, 5.0).data - named_state("ghz").data).max() == 0.0


@pytest.mark.parametrize("lam", [0.0, 0.3, 1.0])
def test_state_at_ad_each_on_singlet(lam):
    # damping both qubits of the singlet: known closed-form matrix
    m = ad_manifest("singlet", "ad", lam, times=(1.0,))
    rho = state_at(m, 1.0).data
    expected = np.zeros((4, 4))
    expected[1, 1] = expected[2, 2] = (1 - lam) / 2
    expected[1, 2] = expected[2, 1] = -(1 - lam) / 2
    expected[3, 3] = lam
    assert np.abs(rho - expected).max() < 1e-12


@pytest.mark.parametrize("lam", [0.0, 0.3, 1.0])
def test_state_at_ad_first_on_ghz(lam):
    m = ad_manifest("ghz", "ad-first", lam, times=(1.0,))
    rho = state_at(m, 1.0).data
    expected = np.zeros((8, 8))
    expected[0, 0] = (1 - lam) / 2
    expected[7, 7] = 0.5
    expected[0, 7] = expected[7, 0] = math.sqrt(1 - lam) / 2
    expected[4, 4] = lam / 2
    assert np.abs(rho - expected).max() < 1e-12


@pytest.mark.parametrize("lam", [0.0, 0.3, 1.0])
def test_state_at_ad_first_on_w(lam):
    m = ad_manifest("w", "ad-first", lam, times=(1.0,))
    rho = state_at(m, 1.0).data
    expected = np.zeros((8, 8))
    sq = math.sqrt(1 - lam)
    for i in (1, 2):
        expected[i, i] = (1 - lam) / 3
        expected[4, i] = expected[i, 4] = sq / 3
    expected[1, 2] = expected[2, 1] = (1 - lam) / 3
    expected[4, 4] = 1 / 3
    expected[5, 5] = expected[6, 6] = lam / 3
    expected[5, 6] = expected[6, 5] = lam / 3
    assert np.abs(rho - expected).max() < 1e-12


def test_state_at_gad_rejects_squeezing():
    cfg = ScenarioConfig(
        state_kind="coherent", state_params={"j": 0.5},
        channel_kind="gad",
        channel_params={"gamma0": 0.1, "temperature": 1.0, "r": 0.5},
        theta=(0.1,), phi=(0.1,),
    )
    with pytest.raises(ScenarioError):
        state_at(RunManifest(scenario=cfg), 1.0)


def test_state_at_ad_each_temperature_list_mismatch():
    cfg = ScenarioConfig(
        state_kind="ghz", channel_kind="gad-each",
        channel_params={"gamma0": 0.1, "temperatures": [0.0, 1.0]},
        theta=(0.1,) * 3, phi=(0.1,) * 3,
    )
    with pytest.raises(ScenarioError):
        state_at(RunManifest(scenario=cfg), 1.0)


def test_state_at_injected_requires_table():
    cfg = ScenarioConfig(
        state_kind="singlet", channel_kind="injected",
        theta=(0.1, 0.2), phi=(0.3, 0.4),
    )
    with pytest.raises(ScenarioError):
        state_at(RunManifest(scenario=cfg), 0.5)


def trajectory_csv() -> str:
    # two snapshots of a qubit: excited at t=0, ground at t=2
    rows = ["t,entries"]
    rows.append("0," + ",".join(str(v) for v in [1, 0, 0, 0, 0, 0, 0, 0]))
    rows.append("2," + ",".join(str(v) for v in [0, 0, 0, 0, 0, 0, 1, 0]))
    return "\n".join(rows) + "\n"


def test_state_at_injected_interpolates():
    cfg = ScenarioConfig(
        state_kind="coherent", state_params={"j": 0.5},
        channel_kind="injected", theta=(0.1,), phi=(0.2,),
    )
    m = RunManifest(scenario=cfg, trajectory_csv=trajectory_csv())
    rho = state_at(m, 1.0)
    assert rho.data[0, 0].real == pytest.approx(0.5)
    # clamped outside the table
    assert state_at(m, 10.0).data[1, 1].real == pytest.approx(1.0)


def test_load_state_trajectory_validation():
    with pytest.raises(ScenarioError):
        load_state_trajectory("t\n0,1,0\n", (2,))  # wrong field count
    with pytest.raises(ScenarioError):
        load_state_trajectory("# only comments\n", (2,))


def test_run_eval_shapes_and_angle_mismatch():
    m = qnd_manifest(times=(0.0, 0.5, 1.0))
    cols, rows = run_eval(m)
    assert cols == ["t", "theta1", "phi1", "W", "P", "Q", "F"]
    assert len(rows) == 3
    assert rows[1][0] == 0.5
    bad = ScenarioConfig(
        state_kind="singlet", channel_kind="none", theta=(0.1,), phi=(0.2,),
    )
    with pytest.raises(ScenarioError):
        run_eval(RunManifest(scenario=bad))


def test_run_eval_threads_deterministic():
    m1 = qnd_manifest(times=tuple(np.linspace(0, 2, 9)))
    m4 = qnd_manifest(times=tuple(np.linspace(0, 2, 9)), threads=4)
    _, rows1 = run_eval(m1)
    _, rows4 = run_eval(m4)
    assert rows1 == rows4


def test_run_volume_rows():
    cfg = ScenarioConfig(
        state_kind="coherent", state_params={"j": 0.5, "alpha": 1.0},
        channel_kind="qnd",
        channel_params={"gamma0": 0.1, "omega_c": 100.0},
        theta=(0.1,), phi=(0.2,), times=(0.0, 1.0),
        n_theta=32, n_phi=32,
    )
    cols, rows = run_volume(RunManifest(scenario=cfg))
    assert cols == ["t", "delta"]
    assert len(rows) == 2
    # a coherent state starts at the universal single-qubit value
    assert rows[0][1] == pytest.approx(2 / math.sqrt(3) - 1, abs=1e-4)


def test_run_negativity_report():
    cfg = ScenarioConfig(
        state_kind="singlet", channel_kind="none",
        theta=(0.1, 0.2), phi=(0.3, 0.4), times=(0.0,),
        n_theta=16, n_phi=16,
    )
    m = RunManifest(scenario=cfg)
    report = run_negativity(m, QDKind.W)
    assert report["t"] == 0.0
    assert report["scenario"] == scenario_hash(m)
    assert report["min"] < 0
    assert "delta" in report
    q_report = run_negativity(m, QDKind.Q, t=0.0)
    assert "delta" not in q_report


def dicke_out_of_regime_manifest(times=(100.0,)) -> RunManifest:
    cfg = ScenarioConfig(
        state_kind="mixed", state_params={"dims": [5]},
        channel_kind="dicke",
        channel_params={"n_atoms": 4, "nbar": 25.0, "g": 0.1, "gamma": 0.01},
        theta=(0.1,), phi=(0.2,), times=times,
    )
    return RunManifest(scenario=cfg)


def test_run_eval_wraps_numerical_failures():
    # photon-sum truncation failure surfaces as NumericalError, not a bare
    # ArithmeticError
    with pytest.raises(NumericalError):
        run_eval(dicke_out_of_regime_manifest())


def test_write_csv_is_deterministic():
    buf1, buf2 = io.StringIO(), io.StringIO()
    rows = [[0.1, 1 / 3], [0.2, 2 / 3]]
    for buf in (buf1, buf2):
        write_csv(buf, ["# scenario: abc"], ["t", "x"], rows)
    assert buf1.getvalue() == buf2.getvalue()
    text = buf1.getvalue()
    assert text.startswith("# scenario: abc\nt,x\n")
    assert "0.33333333333333331" in text  # fixed 17 significant digit format
