import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinqd.angular import HalfInt
from spinqd.fixtures import atomic_coherent_state, named_state
from spinqd.multipole import (
    DensityMatrix,
    decompose,
    kq_list,
    multipole_operator,
    reconstruct,
    rotate_density,
)


def random_density(rng, dims):
    total = int(np.prod(dims))
    a = rng.normal(size=(total, total)) + 1j * rng.normal(size=(total, total))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    return DensityMatrix(dims=tuple(dims), data=rho)


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix(dims=(2,), data=np.array([[1.0, 0.5], [0.1, 0.0]]))  # not Hermitian
    with pytest.raises(ValueError):
        DensityMatrix(dims=(2,), data=np.eye(2))  # trace 2
    with pytest.raises(ValueError):
        DensityMatrix(dims=(2,), data=np.diag([1.5, -0.5]))  # negative eigenvalue


def test_kq_list_counts():
    assert len(kq_list(0.5)) == 4
    assert len(kq_list(1)) == 9
    assert len(kq_list(2)) == 25


@pytest.mark.parametrize("j", [0.5, 1, 1.5, 2])
def test_multipole_operators_orthonormal(j):
    ops = {kq: multipole_operator(j, *kq) for kq in kq_list(j)}
    keys = list(ops)
    for i, a in enumerate(keys):
        for b in keys[i:]:
            inner = np.trace(ops[a].conj().T @ ops[b])
            expected = 1.0 if a == b else 0.0
            assert inner == pytest.approx(expected, abs=1e-13)


@pytest.mark.parametrize("j", [0.5, 1, 2])
def test_multipole_conjugation_symmetry(j):
    for K, Q in kq_list(j):
        lhs = multipole_operator(j, K, Q).conj().T
        rhs = (-1) ** Q * multipole_operator(j, K, -Q)
        assert np.abs(lhs - rhs).max() < 1e-13


def test_multipole_t10_is_scaled_jz():
    # T_10 must be proportional to Jz with a positive coefficient
    for j in (0.5, 1, 2):
        tj = HalfInt.of(j).twice_value
        op = multipole_operator(j, 1, 0)
        m = np.arange(tj, -tj - 1, -2) / 2
        ratio = op[0, 0].real / m[0]
        assert ratio > 0
        assert np.abs(np.diag(op) - ratio * m).max() < 1e-13


def test_decompose_reconstruct_roundtrip():
    rng = np.random.default_rng(3)
    for dims in [(2,), (3,), (2, 2), (2, 3), (2, 2, 2)]:
        rho = random_density(rng, dims)
        back = reconstruct(decompose(rho))
        assert np.abs(back.data - rho.data).max() < 1e-12


def test_decompose_identity_component():
    # the (0,0,...) coefficient of any state is fixed by the trace
    rho = named_state("ghz")
    c = decompose(rho)
    key = ((0, 0), (0, 0), (0, 0))
    expected = (1 / np.sqrt(2)) ** 3
    assert c.coeffs[key] == pytest.approx(expected, abs=1e-13)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_decompose_conjugation_residual(seed):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, (2, 2))
    assert decompose(rho).conjugation_residual() < 1e-12


def test_rotate_density_preserves_spectrum():
    rng = np.random.default_rng(11)
    rho = random_density(rng, (3,))
    rot = rotate_density(rho, 0.3, 1.1, 2.0)
    ev0 = np.sort(np.linalg.eigvalsh(rho.data))
    ev1 = np.sort(np.linalg.eigvalsh(rot.data))
    assert np.abs(ev0 - ev1).max() < 1e-12


def test_rotate_coherent_state_moves_the_peak():
    # rotating the north-pole coherent state by Euler angles lands it at
    # the coherent state with those angles
    rho = atomic_coherent_state(1.0, 0.0, 0.0)
    alpha, beta = 0.9, 0.4
    # the alpha=0 state sits at a pole; a polar tilt by -alpha (equivalently
    # an azimuth offset of pi) then an azimuthal turn by beta lands on the
    # (alpha, beta) coherent state under this phase convention
    rot = rotate_density(rho, beta, -alpha, 0.0)
    direct = atomic_coherent_state(1.0, alpha, beta)
    overlap = np.trace(rot.data @ direct.data).real
    assert overlap == pytest.approx(1.0, abs=1e-10)
