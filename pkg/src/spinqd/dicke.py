"""Dissipative strong-field dynamics of N two-level atoms in a cavity.

Solves the atomic reduced density matrix of N atoms coupled to one damped
field mode prepared in a strong coherent state (mean photon number nbar >> N),
in the regime gamma/g << sqrt(nbar).  The solution is a photon-number sum over
dressed-state propagators; the dressed basis diagonalizes the collective
Sigma_x operator.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import sqrt

import numpy as np
from scipy.special import gammaln

from .angular import HalfInt, wigner_d_matrix
from .multipole import DensityMatrix, multipole_operator

__all__ = [
    "DickeParams",
    "DressedBasis",
    "dressed_basis",
    "evolve_dicke",
    "spin2_multipole_fixtures",
]


@dataclass(frozen=True)
class DickeParams:
    """N atoms, initial mean photon number nbar, coupling g, cavity decay gamma."""

    n_atoms: int
    nbar: float
    g: float
    gamma: float

    def __post_init__(self):
        if self.n_atoms < 1:
            raise ValueError("need at least one atom")
        if self.nbar <= 0 or self.g <= 0 or self.gamma < 0:
            raise ValueError("require nbar > 0, g > 0, gamma >= 0")
        if self.nbar < 5 * self.n_atoms:
            warnings.warn(
                "strong-field regime assumes nbar >> N; results may be unreliable",
                stacklevel=2,
            )
        if self.gamma / self.g >= sqrt(self.nbar):
            raise ValueError("outside validity regime: gamma/g must be << sqrt(nbar)")


@dataclass(frozen=True)
class DressedBasis:
    """Rows of C are the dressed states over the bare excitation basis k=0..N."""

    C: np.ndarray
    lambdas: np.ndarray


def _collective_sigma_x(n_atoms: int) -> np.ndarray:
    # spin-N/2 J_x in the excitation basis k = 0..N (m ascending)
    dim = n_atoms + 1
    j = n_atoms / 2
    m = np.arange(dim) - j
    jp = np.zeros((dim, dim))
    for k in range(dim - 1):
        jp[k + 1, k] = sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    return (jp + jp.T) / 2


def dressed_basis(n_atoms: int) -> DressedBasis:
    """Dressed atomic basis with C[q, k] = <k | q~> and eigenvalues q - N/2.

    C is built from the small-d rotation by -pi/2 that maps Sigma_z eigenstates
    onto Sigma_x eigenstates; the index convention is fixed by requiring
    C Sigma_x C^dagger = diag(lambda_q) with lambda_q = q - N/2, which selects
    the real orthogonal matrix d^{N/2}_{q-N/2, k-N/2}(-pi/2).
    """
    if n_atoms < 1:
        raise ValueError("need at least one atom")
    dim = n_atoms + 1
    d = wigner_d_matrix(HalfInt(n_atoms), -np.pi / 2)  # rows m' = j..-j
    # map ascending excitation index q (m = q - N/2) onto the descending rows
    C = np.array(
        [[d[n_atoms - q, n_atoms - k] for k in range(dim)] for q in range(dim)],
        dtype=complex,
    )
    lambdas = np.arange(dim) - n_atoms / 2
    sx = _collective_sigma_x(n_atoms)
    residual = np.abs(C @ sx @ C.conj().T - np.diag(lambdas)).max()
    if residual > 1e-10:
        raise AssertionError(f"dressed basis fails to diagonalize Sigma_x ({residual:.3e})")
    return DressedBasis(C=C, lambdas=lambdas)


def evolve_dicke(p: DickeParams, t: float, n_extra: int = 0) -> DensityMatrix:
    """Atomic reduced state at time t, atoms starting in the ground state and
    the field in a coherent state.

    Returned in the standard |j, m> ordering m = j..-j (j = N/2).  The photon
    sum is truncated at nbar + 12 sqrt(nbar) (+ n_extra for convergence
    certificates); terms whose square roots would go negative lie outside the
    strong-field regime and are skipped, with their total weight certified
    negligible.
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    N = p.n_atoms
    dim = N + 1
    basis = dressed_basis(N)
    C = basis.C.real  # real orthogonal by construction
    lam = basis.lambdas

    nbar_t = p.nbar * np.exp(-p.gamma * t)
    n_max = int(p.nbar + 12 * sqrt(p.nbar)) + dim + n_extra
    a_idx = np.arange(n_max + dim + 1)
    # coherent amplitudes alpha_n(t) through log-space for stability
    with np.errstate(divide="ignore"):
        log_alpha = -nbar_t / 2 + 0.5 * a_idx * np.log(max(nbar_t, 1e-300)) - 0.5 * gammaln(a_idx + 1)
    alpha = np.exp(log_alpha)
    shifted = a_idx + 0.5 - N / 2
    valid = shifted >= 0
    root = np.where(valid, np.sqrt(np.abs(shifted)), 0.0)

    # dressed-pair decay exponents Theta_qp(t)
    theta = np.zeros((dim, dim), dtype=complex)
    if t > 0 and p.gamma > 0:
        scale = sqrt(nbar_t - N / 2 + 0.5)
        for q in range(dim):
            for r in range(dim):
                if q == r:
                    continue
                gamma_p = p.gamma + 1j * p.g * (lam[q] - lam[r]) / scale
                theta[q, r] = p.nbar * (
                    (1 - np.exp(-p.gamma * t)) - (p.gamma / gamma_p) * (1 - np.exp(-gamma_p * t))
                )
    damp = np.exp(-theta)

    # E[q, a] = exp(-2 i g t lambda_q sqrt(a + 1/2 - N/2))
    E = np.exp(-2j * p.g * t * np.outer(lam, root))

    ns = np.arange(0, n_max)
    rho = np.zeros((dim, dim), dtype=complex)
    skipped = 0.0
    for k in range(dim):
        for l in range(dim):
            a = ns + k
            b = ns + l
            ok = valid[a] & valid[b]
            weight = alpha[a] * alpha[b]
            skipped += float(np.sum(weight[~ok]))
            uk = (C[:, k] * C[:, 0])[:, None] * E[:, a]
            ul = (C[:, l] * C[:, 0])[:, None] * np.conj(E[:, b])
            inner = np.einsum("qn,qp,pn->n", uk, damp, ul)
            rho[k, l] = np.sum(weight * ok * inner)

    if skipped > 1e-6:
        raise ArithmeticError(
            f"out-of-regime photon terms carry weight {skipped:.3e}; nbar too small for N"
        )
    trace = np.trace(rho).real
    if abs(trace - 1.0) > 1e-6:
        raise ArithmeticError(f"photon-sum trace drift {abs(trace - 1.0):.3e} exceeds 1e-6")
    rho = (rho + rho.conj().T) / 2
    rho /= np.trace(rho).real
    # excitation index k = 0..N is m ascending; flip to the m = j..-j convention
    rho = rho[::-1, ::-1]
    return DensityMatrix(dims=(dim,), data=rho)


def _m(rows) -> np.ndarray:
    return np.array(rows, dtype=complex)


def spin2_multipole_fixtures() -> dict[tuple[int, int], np.ndarray]:
    """The fifteen spin-2 multipole operators as hard-coded fixtures.

    Given in the excitation-number ordering k = 0..4 (m ascending); each
    equals multipole_operator(2, K, Q) with both indices reversed.  Kept
    literal, never generated, so the operator conventions are validated end
    to end against independent reference data.
    """
    r2, r3, r6 = sqrt(2), sqrt(3), sqrt(6)
    fixtures = {
        (0, 0): _m(np.eye(5)) / sqrt(5),
        (1, 1): _m([
            [0, 0, 0, 0, 0],
            [-r2, 0, 0, 0, 0],
            [0, -r3, 0, 0, 0],
            [0, 0, -r3, 0, 0],
            [0, 0, 0, -r2, 0],
        ]) / sqrt(10),
        (1, 0): _m(np.diag([-2, -1, 0, 1, 2])) / sqrt(10),
        (2, 2): _m([
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [r2, 0, 0, 0, 0],
            [0, r3, 0, 0, 0],
            [0, 0, r2, 0, 0],
        ]) / sqrt(7),
        (2, 1): _m([
            [0, 0, 0, 0, 0],
            [r6, 0, 0, 0, 0],
            [0, 1, 0, 0, 0],
            [0, 0, -1, 0, 0],
            [0, 0, 0, -r6, 0],
        ]) / sqrt(14),
        # fourth diagonal entry forced to -1 by tracelessness / m -> -m symmetry
        (2, 0): _m(np.diag([2, -1, -2, -1, 2])) / sqrt(14),
        (3, 3): -_m([
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [1, 0, 0, 0, 0],
            [0, 1, 0, 0, 0],
        ]) / sqrt(2),
        (3, 2): _m([
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [-1, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [0, 0, 1, 0, 0],
        ]) / sqrt(2),
        (3, 1): _m([
            [0, 0, 0, 0, 0],
            [-r3, 0, 0, 0, 0],
            [0, r2, 0, 0, 0],
            [0, 0, r2, 0, 0],
            [0, 0, 0, -r3, 0],
        ]) / sqrt(10),
        (3, 0): _m(np.diag([-1, 2, 0, -2, 1])) / sqrt(10),
        (4, 4): _m([
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [1, 0, 0, 0, 0],
        ]),
        (4, 3): _m([
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [1, 0, 0, 0, 0],
            [0, -1, 0, 0, 0],
        ]) / sqrt(2),
        (4, 2): _m([
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [r3, 0, 0, 0, 0],
            [0, -2 * r2, 0, 0, 0],
            [0, 0, r3, 0, 0],
        ]) / sqrt(14),
        (4, 1): _m([
            [0, 0, 0, 0, 0],
            [1, 0, 0, 0, 0],
            [0, -r6, 0, 0, 0],
            [0, 0, r6, 0, 0],
            [0, 0, 0, -1, 0],
        ]) / sqrt(14),
        (4, 0): _m(np.diag([1, -4, 6, -4, 1])) / sqrt(70),
    }
    return fixtures


def spin2_fixture_matches(K: int, Q: int) -> float:
    """Max deviation between a printed fixture and the generated operator
    after mapping between excitation ordering and the m = j..-j ordering."""
    printed = spin2_multipole_fixtures()[(K, Q)]
    generated = multipole_operator(HalfInt(4), K, Q)[::-1, ::-1]
    return float(np.abs(printed - generated).max())
