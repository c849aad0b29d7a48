"""Quadrature grids, normalization checks, negativity scans, and the
nonclassical-volume measure delta = int |W| dOmega - 1.

Per sphere the rule is Gauss-Legendre in cos(theta) crossed with a uniform
periodic rule in phi, which is exact for the band-limited (K <= 2j)
distributions in scope.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import pi

import numpy as np
from numpy.polynomial.legendre import leggauss

from .multipole import MultipoleCoeffs
from .qd_eval import IMAG_TOL, QDKind, kernel_matrix

__all__ = [
    "QuadratureSpec",
    "sphere_rule",
    "nonclassical_volume",
    "negativity_scan",
    "normalization_residual",
    "report_to_json",
]

NEGATIVITY_EPS = 1e-10


@dataclass(frozen=True)
class QuadratureSpec:
    """Per-sphere node counts and a budget on total product-grid nodes."""

    n_theta: int = 64
    n_phi: int = 64
    node_budget: int = 40_000_000

    def __post_init__(self):
        if self.n_theta < 8 or self.n_phi < 8:
            raise ValueError("need at least 8 nodes per angle")

    @property
    def nodes_per_sphere(self) -> int:
        return self.n_theta * self.n_phi


def sphere_rule(spec: QuadratureSpec):
    """Flat arrays (theta, phi, weight) covering one sphere.

    The weights integrate f(theta, phi) sin(theta) dtheta dphi exactly for
    spherical polynomials up to degree n_theta - 1 in cos(theta) and harmonics
    up to order n_phi - 1 in phi.
    """
    x, w = leggauss(spec.n_theta)
    theta = np.arccos(x)
    phi = np.arange(spec.n_phi) * (2 * pi / spec.n_phi)
    w_phi = 2 * pi / spec.n_phi
    th_grid = np.repeat(theta, spec.n_phi)
    ph_grid = np.tile(phi, spec.n_theta)
    weight = np.repeat(w, spec.n_phi) * w_phi
    return th_grid, ph_grid, weight


def _sphere_matrices(kind: QDKind, state: MultipoleCoeffs, spec: QuadratureSpec):
    rules = [sphere_rule(spec) for _ in state.spins]
    mats = [
        kernel_matrix(kind, s, kqs, th, ph)
        for s, kqs, (th, ph, _) in zip(state.spins, state.key_lists(), rules)
    ]
    weights = [w for (_, _, w) in rules]
    return rules, mats, weights


def _check_budget(state: MultipoleCoeffs, spec: QuadratureSpec) -> None:
    total = spec.nodes_per_sphere ** len(state.spins)
    if total > spec.node_budget:
        raise ValueError(
            f"product grid of {total} nodes exceeds the budget of {spec.node_budget}"
        )


def _grid_values(kind: QDKind, state: MultipoleCoeffs, spec: QuadratureSpec):
    """Yield (values_chunk, weight_chunk, start_index) over the product grid.

    Chunked over the first sphere so multi-sphere grids never materialize a
    full product array larger than one chunk.
    """
    n = len(state.spins)
    rules, mats, weights = _sphere_matrices(kind, state, spec)
    tensor = state.tensor()
    nodes = spec.nodes_per_sphere
    if n == 1:
        values = np.einsum("a,ap->p", tensor, mats[0])
        yield values, weights[0], 0
        return
    chunk = max(1, min(nodes, 2_000_000 // nodes ** (n - 1) + 1))
    rest_weight = weights[1]
    if n == 3:
        rest_weight = np.multiply.outer(weights[1], weights[2])
    for start in range(0, nodes, chunk):
        sl = slice(start, start + chunk)
        if n == 2:
            vals = np.einsum("ab,ap,bq->pq", tensor, mats[0][:, sl], mats[1])
        else:
            vals = np.einsum("abc,ap,bq,cr->pqr", tensor, mats[0][:, sl], mats[1], mats[2])
        w = np.multiply.outer(weights[0][sl], rest_weight)
        yield vals, w, start


def _real_checked(values: np.ndarray) -> np.ndarray:
    scale = max(1.0, float(np.abs(values).max()))
    if float(np.abs(values.imag).max()) > IMAG_TOL * scale:
        raise ArithmeticError("imaginary residue above tolerance in grid evaluation")
    return values.real


def nonclassical_volume(state: MultipoleCoeffs, q: QuadratureSpec = QuadratureSpec()) -> float:
    """delta = int |W| over the product of spheres, minus 1.

    Defined on the W distribution; zero for states whose W is everywhere
    nonnegative.  Multi-particle states use the product measure.
    """
    _check_budget(state, q)
    total = 0.0
    comp = 0.0  # Kahan compensation for the long weighted sum
    for vals, w, _ in _grid_values(QDKind.W, state, q):
        term = float(np.sum(np.abs(_real_checked(vals)) * w))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total - 1.0


def negativity_scan(kind: QDKind, state: MultipoleCoeffs, q: QuadratureSpec = QuadratureSpec()) -> dict:
    """Grid minimum, its location, and the fraction of quadrature weight on
    nodes where the distribution is below -1e-10."""
    kind = QDKind(kind)
    _check_budget(state, q)
    best = np.inf
    best_flat = 0
    neg_weight = 0.0
    total_weight = 0.0
    rules, _, _ = _sphere_matrices(kind, state, q)
    nodes = q.nodes_per_sphere
    n = len(state.spins)
    for vals, w, start in _grid_values(kind, state, q):
        vals = _real_checked(vals)
        idx = int(np.argmin(vals))
        if vals.reshape(-1)[idx] < best:
            best = float(vals.reshape(-1)[idx])
            local = np.unravel_index(idx, vals.shape)
            flat = (start + local[0],) + tuple(local[1:])
            best_flat = flat
        neg_weight += float(np.sum(w[vals < -NEGATIVITY_EPS]))
        total_weight += float(np.sum(w))
    argmin_theta = [float(rules[i][0][best_flat[i]]) for i in range(n)]
    argmin_phi = [float(rules[i][1][best_flat[i]]) for i in range(n)]
    return {
        "kind": kind.value,
        "min": best,
        "argmin": {"theta": argmin_theta, "phi": argmin_phi},
        "negative_fraction": neg_weight / total_weight,
    }


def normalization_residual(kind: QDKind, state: MultipoleCoeffs, q: QuadratureSpec = QuadratureSpec()) -> float:
    """|quadrature integral - 1|, computed from factorized per-sphere sums so
    even three-sphere grids stay cheap."""
    kind = QDKind(kind)
    _, mats, weights = _sphere_matrices(kind, state, q)
    tensor = state.tensor()
    # integral of each per-particle factor over its own sphere
    for i, (m, w) in enumerate(zip(mats, weights)):
        factor = m @ w
        tensor = np.tensordot(tensor, factor, axes=([0], [0]))
    return abs(complex(tensor) - 1.0)


def report_to_json(report: dict, delta: float | None = None) -> str:
    """Serialize a negativity report (optionally with delta) to stable JSON."""
    payload = dict(report)
    if delta is not None:
        payload["delta"] = delta
    return json.dumps(payload, sort_keys=True, indent=2)
