import math

import numpy as np
import pytest
from scipy.linalg import expm

from spinqd.dicke import (
    DickeParams,
    dressed_basis,
    evolve_dicke,
    spin2_fixture_matches,
    spin2_multipole_fixtures,
)


def test_dicke_params_validation():
    with pytest.raises(ValueError):
        DickeParams(n_atoms=0, nbar=30.0, g=0.1, gamma=0.0)
    with pytest.raises(ValueError):
        DickeParams(n_atoms=2, nbar=0.0, g=0.1, gamma=0.0)
    with pytest.raises(ValueError):
        # gamma/g must stay well below sqrt(nbar)
        DickeParams(n_atoms=2, nbar=25.0, g=0.1, gamma=1.0)
    with pytest.warns(UserWarning):
        DickeParams(n_atoms=4, nbar=10.0, g=0.1, gamma=0.0)


@pytest.mark.parametrize("n_atoms", [1, 2, 4])
def test_dressed_basis_is_orthogonal_and_diagonalizes(n_atoms):
    basis = dressed_basis(n_atoms)
    dim = n_atoms + 1
    assert np.abs(basis.C @ basis.C.conj().T - np.eye(dim)).max() < 1e-12
    assert np.allclose(basis.lambdas, np.arange(dim) - n_atoms / 2)
    with pytest.raises(ValueError):
        dressed_basis(0)


def test_evolve_dicke_initial_state_is_ground():
    p = DickeParams(n_atoms=4, nbar=30.0, g=0.1, gamma=0.0)
    rho = evolve_dicke(p, 0.0)
    # m = j..-j ordering puts the collective ground state in the last slot
    expected = np.zeros((5, 5))
    expected[-1, -1] = 1.0
    assert np.abs(rho.data - expected).max() < 1e-10
    with pytest.raises(ValueError):
        evolve_dicke(p, -1.0)


@pytest.mark.parametrize("t", [5.0, 50.0, 200.0])
def test_evolve_dicke_is_physical(t):
    p = DickeParams(n_atoms=4, nbar=30.0, g=0.1, gamma=1e-3)
    rho = evolve_dicke(p, t)
    assert np.abs(rho.data - rho.data.conj().T).max() < 1e-12
    assert np.trace(rho.data).real == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.eigvalsh(rho.data).min() > -1e-8


def test_evolve_dicke_truncation_is_converged():
    p = DickeParams(n_atoms=4, nbar=30.0, g=0.1, gamma=1e-3)
    a = evolve_dicke(p, 40.0)
    b = evolve_dicke(p, 40.0, n_extra=60)
    assert np.abs(a.data - b.data).max() < 1e-8


def exact_single_atom_reference(nbar, g, t):
    """Lossless single atom in a strong coherent field, resonant coupling,
    interaction picture: H = g (a sigma_+ + a^dag sigma_-)."""
    n_max = int(nbar + 14 * math.sqrt(nbar))
    ns = np.arange(n_max + 1)
    log_amp = -nbar / 2 + 0.5 * ns * np.log(nbar) - 0.5 * np.array(
        [math.lgamma(n + 1) for n in ns]
    )
    field = np.exp(log_amp)
    # atom basis (|e>, |g>); start in |g>
    dim = 2 * (n_max + 1)
    psi = np.zeros(dim, dtype=complex)
    psi[1::2] = field  # |g, n>
    h = np.zeros((dim, dim))
    for n in range(n_max):
        # <e, n| H |g, n+1> = g sqrt(n+1)
        h[2 * n, 2 * (n + 1) + 1] = g * math.sqrt(n + 1)
        h[2 * (n + 1) + 1, 2 * n] = g * math.sqrt(n + 1)
    psi_t = expm(-1j * h * t) @ psi
    rho_atom = np.zeros((2, 2), dtype=complex)
    for n in range(n_max + 1):
        block = psi_t[2 * n : 2 * n + 2]
        rho_atom += np.outer(block, block.conj())
    return rho_atom


@pytest.mark.parametrize("t", [2.0, 8.0])
def test_evolve_dicke_single_atom_matches_exact_model(t):
    nbar, g = 30.0, 0.1
    p = DickeParams(n_atoms=1, nbar=nbar, g=g, gamma=0.0)
    ours = evolve_dicke(p, t).data
    ref = exact_single_atom_reference(nbar, g, t)
    # the strong-field factorization approximates sqrt(n+1) by sqrt(n+1/2)
    assert np.abs(np.diag(ours).real - np.diag(ref).real).max() < 2e-3
    assert abs(abs(ours[0, 1]) - abs(ref[0, 1])) < 2e-3


def test_spin2_fixture_catalog_is_complete():
    fixtures = spin2_multipole_fixtures()
    assert len(fixtures) == 15
    assert set(fixtures) == {(K, Q) for K in range(5) for Q in range(K + 1)}


@pytest.mark.parametrize("K,Q", [(K, Q) for K in range(5) for Q in range(K + 1)])
def test_spin2_fixtures_match_generated_operators(K, Q):
    assert spin2_fixture_matches(K, Q) < 1e-14
