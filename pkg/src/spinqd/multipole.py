"""Multipole (irreducible tensor) operator basis for spin density matrices.

Builds the orthonormal operators T_KQ, decomposes density matrices into
multipole coefficients, and reconstructs states from coefficients.  The
|j, m> basis is ordered m = j, j-1, ..., -j throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache, reduce
from itertools import product
from math import sqrt

import numpy as np

from .angular import HalfInt, wigner_3j, wigner_d_matrix

__all__ = [
    "DensityMatrix",
    "MultipoleCoeffs",
    "multipole_operator",
    "decompose",
    "reconstruct",
    "rotate_density",
]

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, trace-one, positive-semidefinite matrix over spin particles.

    dims holds the per-particle dimensions (2 j_i + 1); data is the full
    matrix over the tensor-product space.
    """

    dims: tuple[int, ...]
    data: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        data = np.asarray(self.data, dtype=complex)
        total = int(np.prod(dims))
        if data.shape != (total, total):
            raise ValueError(f"matrix shape {data.shape} does not match dims {dims}")
        if np.abs(data - data.conj().T).max() > HERMITICITY_TOL:
            raise ValueError("density matrix is not Hermitian within tolerance")
        if abs(np.trace(data).real - 1.0) > TRACE_TOL or abs(np.trace(data).imag) > TRACE_TOL:
            raise ValueError("density matrix trace differs from 1 beyond tolerance")
        if np.linalg.eigvalsh((data + data.conj().T) / 2).min() < -PSD_TOL:
            raise ValueError("density matrix has an eigenvalue below the PSD tolerance")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "data", data)

    @property
    def spins(self) -> tuple[HalfInt, ...]:
        return tuple(HalfInt(d - 1) for d in self.dims)


@dataclass(frozen=True)
class MultipoleCoeffs:
    """Coefficients rho_{K1 Q1 ... Kn Qn} in the tensor multipole basis.

    coeffs maps a tuple of per-particle (K, Q) pairs to a complex scalar.
    """

    spins: tuple[HalfInt, ...]
    coeffs: dict[tuple[tuple[int, int], ...], complex] = field(repr=False)

    def conjugation_residual(self) -> float:
        """Max |conj(c[K,Q]) - (-1)^{sum Q} c[K,-Q]| over all index tuples."""
        worst = 0.0
        for key, value in self.coeffs.items():
            partner = tuple((K, -Q) for K, Q in key)
            sign = (-1) ** sum(Q for _, Q in key)
            other = self.coeffs.get(partner, 0.0)
            worst = max(worst, abs(np.conj(value) - sign * other))
        return worst

    def key_lists(self) -> list[list[tuple[int, int]]]:
        """Per-particle (K, Q) index lists in a fixed deterministic order."""
        return [kq_list(s) for s in self.spins]

    def tensor(self) -> np.ndarray:
        """Dense coefficient tensor, one axis per particle over kq_list order."""
        lists = self.key_lists()
        shape = tuple(len(l) for l in lists)
        out = np.zeros(shape, dtype=complex)
        index = [{kq: i for i, kq in enumerate(l)} for l in lists]
        for key, value in self.coeffs.items():
            out[tuple(ix[kq] for ix, kq in zip(index, key))] = value
        return out


def kq_list(j) -> list[tuple[int, int]]:
    """All (K, Q) pairs for a spin j, K = 0..2j, Q = -K..K."""
    tj = HalfInt.of(j).twice_value
    return [(K, Q) for K in range(tj + 1) for Q in range(-K, K + 1)]


@lru_cache(maxsize=None)
def _multipole_operator_doubled(tj: int, K: int, Q: int) -> np.ndarray:
    dim = tj + 1
    out = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        tm = tj - 2 * i
        for k in range(dim):
            tmp = tj - 2 * k
            out[i, k] = (
                (-1) ** ((tj - tm) // 2)
                * sqrt(2 * K + 1)
                * wigner_3j(
                    HalfInt(tj), HalfInt(2 * K), HalfInt(tj),
                    HalfInt(-tm), HalfInt(2 * Q), HalfInt(tmp),
                )
            )
    out.setflags(write=False)
    return out


def multipole_operator(j, K: int, Q: int) -> np.ndarray:
    """Multipole operator T_KQ for spin j, basis ordered m = j..-j."""
    tj = HalfInt.of(j).twice_value
    if not 0 <= K <= tj:
        raise ValueError(f"require 0 <= K <= 2j, got K={K} for 2j={tj}")
    if abs(Q) > K:
        raise ValueError(f"require |Q| <= K, got Q={Q}, K={K}")
    return _multipole_operator_doubled(tj, K, Q)


def decompose(rho: DensityMatrix) -> MultipoleCoeffs:
    """Expand a density matrix in the tensor multipole basis.

    coeffs[(K1,Q1),...] = Tr{ rho . kron_i T_{Ki Qi}^dagger }.
    """
    spins = rho.spins
    per_particle = [
        {kq: multipole_operator(s, *kq).conj().T for kq in kq_list(s)} for s in spins
    ]
    coeffs: dict[tuple[tuple[int, int], ...], complex] = {}
    for combo in product(*(list(p.keys()) for p in per_particle)):
        op = reduce(np.kron, (per_particle[i][kq] for i, kq in enumerate(combo)))
        coeffs[combo] = complex(np.trace(op @ rho.data))
    return MultipoleCoeffs(spins=spins, coeffs=coeffs)


def reconstruct(c: MultipoleCoeffs) -> DensityMatrix:
    """Rebuild the density matrix from multipole coefficients."""
    residual = c.conjugation_residual()
    if residual > 1e-8:
        raise ValueError(
            f"inconsistent conjugation pairs in coefficients (residual {residual:.3e})"
        )
    dims = tuple(s.twice_value + 1 for s in c.spins)
    total = int(np.prod(dims))
    out = np.zeros((total, total), dtype=complex)
    for key, value in c.coeffs.items():
        op = reduce(np.kron, (multipole_operator(s, *kq) for s, kq in zip(c.spins, key)))
        out += value * op
    return DensityMatrix(dims=dims, data=out)


def _euler_unitary(dim: int, alpha: float, beta: float, gamma: float) -> np.ndarray:
    tj = dim - 1
    m = (tj - 2 * np.arange(dim)) / 2  # m = j .. -j
    rz_a = np.diag(np.exp(-1j * m * alpha))
    rz_g = np.diag(np.exp(-1j * m * gamma))
    return rz_a @ wigner_d_matrix(HalfInt(tj), beta).astype(complex) @ rz_g


def rotate_density(rho: DensityMatrix, alpha: float, beta: float, gamma: float = 0.0) -> DensityMatrix:
    """Apply the same z-y-z Euler rotation to every particle."""
    us = [_euler_unitary(d, alpha, beta, gamma) for d in rho.dims]
    u = reduce(np.kron, us)
    return DensityMatrix(dims=rho.dims, data=u @ rho.data @ u.conj().T)
