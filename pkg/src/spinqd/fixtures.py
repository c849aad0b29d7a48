"""Canonical states and scenario configuration.

State constructors for spin coherent states and the named multi-qubit
fixtures, plus the TOML scenario schema shared by the CLI and the service.

Basis conventions: |j, m> ordered m = j..-j per particle; computational
|0> is |m = +1/2>, so damping |0> -> |1> lowers the energy.
"""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass, field
from math import comb, cos, pi, sin, sqrt

import numpy as np

from .angular import HalfInt
from .multipole import DensityMatrix

__all__ = [
    "atomic_coherent_state",
    "named_state",
    "maximally_mixed",
    "ScenarioConfig",
    "ScenarioError",
]


def atomic_coherent_state(j, alpha: float, beta: float) -> DensityMatrix:
    """Pure spin coherent state |alpha, beta> for spin j.

    Amplitude on |j, m> is sqrt(C(2j, j+m)) sin^{j+m}(alpha/2)
    cos^{j-m}(alpha/2) e^{-i (j+m) beta}.
    """
    tj = HalfInt.of(j).twice_value
    dim = tj + 1
    vec = np.zeros(dim, dtype=complex)
    for i in range(dim):
        k = tj - i  # j + m as an integer, m = j - i
        vec[i] = (
            sqrt(comb(tj, k))
            * sin(alpha / 2) ** k
            * cos(alpha / 2) ** (tj - k)
            * np.exp(-1j * k * beta)
        )
    return DensityMatrix(dims=(dim,), data=np.outer(vec, vec.conj()))


def named_state(name: str, amplitudes=None) -> DensityMatrix:
    """Named pure fixtures: singlet, ghz, w, or spin1 with three amplitudes."""
    name = name.lower()
    if name == "singlet":
        vec = np.zeros(4, dtype=complex)
        vec[1] = 1 / sqrt(2)   # |+ ->
        vec[2] = -1 / sqrt(2)  # |- +>
        return DensityMatrix(dims=(2, 2), data=np.outer(vec, vec.conj()))
    if name == "ghz":
        vec = np.zeros(8, dtype=complex)
        vec[0] = vec[7] = 1 / sqrt(2)
        return DensityMatrix(dims=(2, 2, 2), data=np.outer(vec, vec.conj()))
    if name == "w":
        vec = np.zeros(8, dtype=complex)
        vec[1] = vec[2] = vec[4] = 1 / sqrt(3)  # |001> + |010> + |100>
        return DensityMatrix(dims=(2, 2, 2), data=np.outer(vec, vec.conj()))
    if name == "e1g2":
        # first qubit excited, second in the ground state
        vec = np.zeros(4, dtype=complex)
        vec[1] = 1.0
        return DensityMatrix(dims=(2, 2), data=np.outer(vec, vec.conj()))
    if name == "spin1":
        if amplitudes is None or len(amplitudes) != 3:
            raise ValueError("spin1 state needs amplitudes (a_plus, a_zero, a_minus)")
        vec = np.array([complex(a) for a in amplitudes])
        if abs(np.vdot(vec, vec).real - 1.0) > 1e-12:
            raise ValueError("spin1 amplitudes must be normalized")
        return DensityMatrix(dims=(3,), data=np.outer(vec, vec.conj()))
    raise ValueError(f"unknown state name {name!r}")


def maximally_mixed(dims) -> DensityMatrix:
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    return DensityMatrix(dims=dims, data=np.eye(total, dtype=complex) / total)


class ScenarioError(ValueError):
    """Raised for malformed or inconsistent scenario configuration."""


_STATE_KINDS = {"coherent", "singlet", "ghz", "w", "e1g2", "spin1", "mixed"}
_CHANNEL_KINDS = {
    "none", "qnd", "sgad", "ad", "gad", "ad-first", "ad-each", "gad-each",
    "qnd-2qubit", "dicke", "injected",
}


@dataclass(frozen=True)
class ScenarioConfig:
    """A full run description: state, channel, angles, times, quadrature."""

    state_kind: str
    state_params: dict = field(default_factory=dict)
    channel_kind: str = "none"
    channel_params: dict = field(default_factory=dict)
    theta: tuple[float, ...] = ()
    phi: tuple[float, ...] = ()
    times: tuple[float, ...] = (0.0,)
    n_theta: int = 64
    n_phi: int = 64

    def __post_init__(self):
        if self.state_kind not in _STATE_KINDS:
            raise ScenarioError(f"unknown state kind {self.state_kind!r}")
        if self.channel_kind not in _CHANNEL_KINDS:
            raise ScenarioError(f"unknown channel kind {self.channel_kind!r}")
        if len(self.theta) != len(self.phi):
            raise ScenarioError("theta and phi angle lists must have equal length")
        for v in list(self.theta) + list(self.phi):
            if not np.isfinite(v):
                raise ScenarioError("angles must be finite")
        if any(t < 0 for t in self.times):
            raise ScenarioError("times must be nonnegative")
        for key in ("lam", "p"):
            v = self.channel_params.get(key)
            if v is not None and not 0 <= v <= 1:
                raise ScenarioError(f"channel parameter {key}={v} outside [0, 1]")

    @classmethod
    def from_mapping(cls, doc: dict) -> "ScenarioConfig":
        try:
            state = dict(doc.get("state", {}))
            channel = dict(doc.get("channel", {}))
            angles = doc.get("angles", {})
            times_doc = doc.get("times", {})
            quad = doc.get("quadrature", {})
            state_kind = state.pop("kind", None)
            if state_kind is None:
                raise ScenarioError("missing state.kind")
            channel_kind = channel.pop("kind", "none")
            if isinstance(times_doc, dict):
                if times_doc:
                    start = float(times_doc.get("start", 0.0))
                    stop = float(times_doc["stop"])
                    num = int(times_doc.get("num", 2))
                    times = tuple(np.linspace(start, stop, num))
                else:
                    times = (0.0,)
            else:
                times = tuple(float(t) for t in times_doc)
            return cls(
                state_kind=str(state_kind),
                state_params=state,
                channel_kind=str(channel_kind),
                channel_params=channel,
                theta=tuple(float(v) for v in angles.get("theta", ())),
                phi=tuple(float(v) for v in angles.get("phi", ())),
                times=times,
                n_theta=int(quad.get("n_theta", 64)),
                n_phi=int(quad.get("n_phi", 64)),
            )
        except ScenarioError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"malformed scenario: {exc}") from exc

    @classmethod
    def from_toml(cls, path) -> "ScenarioConfig":
        try:
            with open(path, "rb") as fh:
                doc = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ScenarioError(f"cannot read scenario file: {exc}") from exc
        return cls.from_mapping(doc)

    def initial_state(self) -> DensityMatrix:
        p = self.state_params
        if self.state_kind == "coherent":
            one = atomic_coherent_state(
                p.get("j", 0.5), float(p.get("alpha", pi / 2)), float(p.get("beta", 0.0))
            )
            n = int(p.get("n", 1))
            if n == 1:
                return one
            data = one.data
            for _ in range(n - 1):
                data = np.kron(data, one.data)
            return DensityMatrix(dims=one.dims * n, data=data)
        if self.state_kind == "mixed":
            dims = tuple(int(d) for d in p.get("dims", (2,)))
            return maximally_mixed(dims)
        if self.state_kind == "spin1":
            amps = p.get("amplitudes")
            if amps is None:
                raise ScenarioError("spin1 state needs state.amplitudes")
            return named_state("spin1", amps)
        return named_state(self.state_kind)
