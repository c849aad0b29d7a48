"""Open-system evolutions.

Single-qubit pure dephasing driven by an Ohmic bath integral, the squeezed
generalized amplitude damping (SGAD) Kraus family with its GAD/AD limits,
per-qubit tensor channels, a localized two-qubit dephasing model, and a fixed
step Lindblad integrator for externally specified dynamics.

Units: hbar = k_B = 1 throughout.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import product
from math import cosh, exp, expm1, pi, sinh, sqrt

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from .multipole import DensityMatrix

__all__ = [
    "BathParams",
    "KrausChannel",
    "SgadParams",
    "qnd_decoherence_gamma",
    "qnd_evolve_qubit",
    "sgad_params",
    "sgad_kraus",
    "tensor_channel",
    "identity_channel",
    "apply_channel",
    "two_qubit_qnd_evolve",
    "integrate_lindblad",
    "load_decoherence_table",
]

COMPLETENESS_TOL = 1e-12
APPROX_PSD_TOL = 1e-2


@dataclass(frozen=True)
class BathParams:
    """Ohmic bath with squeezing: I(omega) = (gamma0/pi) omega e^{-omega/omega_c}.

    r is the bath squeezing magnitude and a the squeezing-phase slope
    (phase = a * omega); omega is the system transition frequency.
    """

    gamma0: float
    omega_c: float
    T: float = 0.0
    r: float = 0.0
    a: float = 0.0
    omega: float = 1.0

    def __post_init__(self):
        if self.gamma0 < 0:
            raise ValueError("gamma0 must be nonnegative")
        if self.omega_c <= 0:
            raise ValueError("omega_c must be positive")
        if self.T < 0:
            raise ValueError("temperature must be nonnegative")


@dataclass(frozen=True)
class KrausChannel:
    """A completely positive trace-preserving map given by Kraus operators."""

    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(op, dtype=complex) for op in self.operators)
        if not ops:
            raise ValueError("at least one Kraus operator required")
        dim = ops[0].shape[0]
        for op in ops:
            if op.shape != (dim, dim):
                raise ValueError("Kraus operators must be equal-size square matrices")
        total = sum(op.conj().T @ op for op in ops)
        if np.abs(total - np.eye(dim)).max() > COMPLETENESS_TOL:
            raise ValueError("Kraus completeness sum differs from identity")
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]


@dataclass(frozen=True)
class SgadParams:
    """Damping probabilities and squeezing angle of the SGAD channel."""

    lam: float
    mu: float
    nu: float
    p: float
    xi: float = 0.0

    def __post_init__(self):
        for name in ("lam", "mu", "nu", "p"):
            v = getattr(self, name)
            if not -1e-12 <= v <= 1 + 1e-12:
                raise ValueError(f"{name}={v} outside [0, 1]")
        conserved = self.p * self.lam + (1 - self.p) * (self.mu + self.nu)
        if conserved > 1 + 1e-12:
            raise ValueError("population conservation violated: p*lam + (1-p)(mu+nu) > 1")


def _coth_half(omega, T: float):
    # coth(omega / 2T), with the T=0 limit equal to 1; array-safe
    if T == 0:
        return np.ones_like(np.asarray(omega, dtype=float))
    x = np.asarray(omega, dtype=float) / (2 * T)
    with np.errstate(over="ignore"):
        return np.where(x > 350, 1.0, 1.0 / np.tanh(np.minimum(x, 360.0)))


def _qnd_integrand(b: BathParams, t: float):
    ch, sh = cosh(b.r), sinh(b.r)

    def f(w):
        mode = (np.exp(1j * w * t) - 1) * ch + (np.exp(-1j * w * t) - 1) * sh * np.exp(2j * b.a * w)
        spectral = (b.gamma0 / pi) * np.exp(-w / b.omega_c) / w  # I(w)/w^2
        return 0.5 * spectral * _coth_half(w, b.T) * np.abs(mode) ** 2

    return f


@lru_cache(maxsize=4096)
def qnd_decoherence_gamma(b: BathParams, t: float, method: str = "adaptive") -> float:
    """Dephasing exponent gamma(t) of the Ohmic-bath pure-dephasing model.

    Computed by quadrature of the continuum-limit mode sum.  gamma(0) = 0 and
    gamma is monotone nondecreasing for r = 0.  method selects an adaptive
    Gauss-Kronrod scheme or a fixed-order Gauss-Legendre cross-check.
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    if t == 0 or b.gamma0 == 0:
        return 0.0
    f = _qnd_integrand(b, t)
    upper = 40 * b.omega_c
    if method == "adaptive":
        # panel width must track the 2 pi / t oscillation scale of the mode sum
        n_panels = min(400, 8 + 8 * int(t))
        pieces = np.linspace(0.0, upper, n_panels + 1)
        total = 0.0
        err = 0.0
        for lo, hi in zip(pieces[:-1], pieces[1:]):
            val, e = quad(f, lo, hi, limit=300, epsabs=1e-13, epsrel=1e-9)
            total += val
            err += e
        if err > max(1e-8, 1e-6 * abs(total)):
            raise ArithmeticError(
                f"dephasing integral did not converge (residual estimate {err:.3e})"
            )
        return total
    if method == "fixed":
        # panel-wise fixed-order rule; resolves the e^{-w/wc} decay and the
        # oscillation scale 1/t
        nodes, weights = leggauss(120)
        panels = max(16, int(upper * t / (2 * pi)) + 1)
        panels = min(panels, 2000)
        edges = np.linspace(0.0, upper, panels + 1)
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            x = (hi - lo) / 2 * nodes + (hi + lo) / 2
            total += (hi - lo) / 2 * np.dot(weights, f(x))
        return float(total)
    raise ValueError(f"unknown quadrature method {method!r}")


def qnd_evolve_qubit(rho0: DensityMatrix, b: BathParams, t: float) -> DensityMatrix:
    """Pure-dephasing evolution of one qubit: populations frozen, coherence
    rotated by e^{-i omega t} and damped by e^{-omega^2 gamma(t)}."""
    if rho0.dims != (2,):
        raise ValueError("expected a single-qubit state")
    gamma = qnd_decoherence_gamma(b, t)
    factor = np.exp(-1j * b.omega * t) * exp(-(b.omega ** 2) * gamma)
    data = rho0.data.copy()
    data[0, 1] *= factor
    data[1, 0] *= np.conj(factor)
    return DensityMatrix(dims=(2,), data=data)


def sgad_params(b: BathParams, p: float, t: float) -> SgadParams:
    """Damping parameters (lam, mu, nu) of the SGAD channel at time t."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    if t == 0:
        return SgadParams(lam=0.0, mu=0.0, nu=0.0, p=p, xi=0.0)
    n_th = 0.0 if b.T == 0 or b.omega / b.T > 700 else 1.0 / expm1(b.omega / b.T)
    big_n = n_th * (cosh(b.r) ** 2 + sinh(b.r) ** 2) + sinh(b.r) ** 2
    a = sinh(2 * b.r) * (2 * n_th + 1)
    decay = exp(-b.gamma0 * (2 * big_n + 1) * t)
    if p == 1:
        mu = 0.0
        nu = 0.0
        lam = 1.0 - decay
    else:
        nu = big_n / ((1 - p) * (2 * big_n + 1)) * (1.0 - decay)
        # sinh(x)^2 / sinh(y)^2 with x <= y, in overflow-safe form
        x = b.gamma0 * a * t / 2
        y = b.gamma0 * (2 * big_n + 1) * t / 2
        if x == 0 or y == 0:
            mu = 0.0
        else:
            ratio = exp(2 * (x - y)) * ((1 - exp(-2 * x)) / (1 - exp(-2 * y))) ** 2
            mu = (2 * big_n + 1) / (2 * big_n * (1 - p)) * ratio * exp(-y)
        lam = (1.0 / p) * (1.0 - (1 - p) * (mu + nu) - decay)
    eps = 1e-9
    for name, v in (("lam", lam), ("mu", mu), ("nu", nu)):
        if not -eps <= v <= 1 + eps:
            raise ValueError(
                f"damping parameter {name}={v:.6g} outside [0, 1]: "
                "p is below the valid range for these bath parameters"
            )
    clamp = lambda x: min(max(x, 0.0), 1.0)
    return SgadParams(lam=clamp(lam), mu=clamp(mu), nu=clamp(nu), p=p, xi=0.0)


def sgad_kraus(s: SgadParams, p: float | None = None, xi: float | None = None) -> KrausChannel:
    """The four SGAD Kraus operators; exactly-zero operators are dropped."""
    p = s.p if p is None else p
    xi = s.xi if xi is None else xi
    e0 = sqrt(p) * np.array([[sqrt(1 - s.lam), 0], [0, 1]], dtype=complex)
    e1 = sqrt(p) * np.array([[0, 0], [sqrt(s.lam), 0]], dtype=complex)
    e2 = sqrt(1 - p) * np.array([[sqrt(1 - s.mu), 0], [0, sqrt(1 - s.nu)]], dtype=complex)
    e3 = sqrt(1 - p) * np.array(
        [[0, sqrt(s.nu)], [sqrt(s.mu) * np.exp(-1j * xi), 0]], dtype=complex
    )
    ops = [op for op in (e0, e1, e2, e3) if np.abs(op).max() > 0]
    return KrausChannel(operators=tuple(ops))


def ad_kraus(lam: float) -> KrausChannel:
    """Amplitude damping channel, the p=1, mu=nu=0 limit of SGAD."""
    return sgad_kraus(SgadParams(lam=lam, mu=0.0, nu=0.0, p=1.0, xi=0.0))


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel(operators=(np.eye(dim, dtype=complex),))


def tensor_channel(factors) -> KrausChannel:
    """Tensor product of per-particle channels.

    Each factor is a KrausChannel or an integer dimension standing for the
    identity channel on that particle.
    """
    channels = [f if isinstance(f, KrausChannel) else identity_channel(int(f)) for f in factors]
    ops = tuple(
        reduce(np.kron, combo) for combo in product(*(ch.operators for ch in channels))
    )
    return KrausChannel(operators=ops)


def apply_channel(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    if ch.dim != rho.data.shape[0]:
        raise ValueError("channel and state dimensions differ")
    out = sum(op @ rho.data @ op.conj().T for op in ch.operators)
    return DensityMatrix(dims=rho.dims, data=out)


# ---------------------------------------------------------------------------
# Localized two-qubit dephasing model
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _ohmic_phase_integrals(b: BathParams, transit_time: float, t: float) -> tuple[float, float]:
    """(Theta, Lambda) phase integrals of the localized two-qubit model.

    Theta = int I(w) (w t - sin w t)/w^2 cos(w t_s) dw,
    Lambda = int I(w) (1 - cos w t)/w^2 sin(w t_s) dw.
    """
    if t == 0 or b.gamma0 == 0:
        return 0.0, 0.0

    def spectral(w):
        return (b.gamma0 / pi) * np.exp(-w / b.omega_c) / w  # I(w)/w^2

    def f_theta(w):
        return spectral(w) * (w * t - np.sin(w * t)) * np.cos(w * transit_time)

    def f_lambda(w):
        return spectral(w) * (1 - np.cos(w * t)) * np.sin(w * transit_time)

    upper = 40 * b.omega_c
    # panel width tracks the 2 pi / t oscillation of the integrands
    n_panels = min(400, 8 + 8 * int(t))
    pieces = np.linspace(0.0, upper, n_panels + 1)
    theta = 0.0
    lam = 0.0
    for lo, hi in zip(pieces[:-1], pieces[1:]):
        theta += quad(f_theta, lo, hi, limit=300, epsrel=1e-9)[0]
        lam += quad(f_lambda, lo, hi, limit=300, epsrel=1e-9)[0]
    return theta, lam


def two_qubit_qnd_evolve(
    rho0: DensityMatrix,
    b: BathParams,
    transit_time: float,
    t: float,
    gamma_sq=None,
    strict: bool = False,
) -> DensityMatrix:
    """Localized two-qubit dephasing: diagonal frozen, coherences rotated by
    the (Theta, Lambda) phase integrals and damped by Gamma^sq.

    gamma_sq, when given, is a callable t -> Gamma for a unit energy gap (the
    exact squeezed-bath decoherence functional, e.g. loaded from a table via
    :func:`load_decoherence_table`); the default approximates it with the
    single-qubit dephasing exponent gamma(t), scaled per coherence by the
    squared energy gap.  strict mode refuses to run on the approximation.
    """
    if rho0.dims != (2, 2):
        raise ValueError("expected a two-qubit state")
    if t < 0:
        raise ValueError("time must be nonnegative")
    if gamma_sq is None:
        if strict:
            raise ValueError(
                "strict mode requires an injected decoherence functional gamma_sq"
            )
        base = qnd_decoherence_gamma(b, t) * b.omega ** 2
    else:
        base = float(gamma_sq(t))
    theta, lam = _ohmic_phase_integrals(b, transit_time, t)

    # tensor index 0..3 = |++>, |+->, |-+>, |--> with |0> = |m=+1/2>;
    # energy in units of omega: +1, 0, 0, -1
    energy = np.array([1.0, 0.0, 0.0, -1.0])
    # phase(theta, lambda) signs per (row, col), single-gap coherences only
    phase = np.zeros((4, 4), dtype=complex)
    for (i, k), (sg_t, sg_l) in {
        (0, 1): (+1, +1), (0, 2): (+1, -1),
        (1, 3): (-1, +1), (2, 3): (-1, -1),
    }.items():
        phase[i, k] = np.exp(1j * (sg_t * theta + sg_l * lam))
        phase[k, i] = np.conj(phase[i, k])
    for i in range(4):
        phase[i, i] = 1.0
    phase[0, 3] = phase[3, 0] = 1.0  # double-gap pair: real factor only
    phase[1, 2] = phase[2, 1] = 1.0  # zero-gap pair: unchanged

    data = rho0.data.copy()
    for i in range(4):
        for k in range(4):
            if i == k:
                continue
            gap2 = (energy[i] - energy[k]) ** 2
            data[i, k] *= phase[i, k] * exp(-gap2 * base)
    # the phase pattern is not of difference form, so the map is not
    # completely positive; clip the small negative eigenvalues it can
    # produce, failing loudly if the violation stops being small
    data = (data + data.conj().T) / 2
    evals, vecs = np.linalg.eigh(data)
    if evals.min() < -APPROX_PSD_TOL:
        raise ArithmeticError(
            f"two-qubit dephasing model produced eigenvalue {evals.min():.3e}; "
            "outside the approximation's validity range"
        )
    data = (vecs * np.clip(evals, 0.0, None)) @ vecs.conj().T
    data /= np.trace(data).real
    return DensityMatrix(dims=(2, 2), data=data)


def load_decoherence_table(source):
    """Decoherence functional from CSV rows (t, Gamma), linearly interpolated.

    source is a path or a file-like object / string of CSV text.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        try:
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
        except (OSError, ValueError):
            text = str(source)
    rows = []
    for rec in csv.reader(io.StringIO(text)):
        if not rec or rec[0].lstrip().startswith("#"):
            continue
        try:
            rows.append((float(rec[0]), float(rec[1])))
        except ValueError:
            continue  # header row
    if len(rows) < 2:
        raise ValueError("decoherence table needs at least two (t, Gamma) rows")
    rows.sort()
    ts = np.array([r[0] for r in rows])
    gs = np.array([r[1] for r in rows])

    def gamma_sq(t: float) -> float:
        return float(np.interp(t, ts, gs))

    return gamma_sq


# ---------------------------------------------------------------------------
# Generic Lindblad integrator
# ---------------------------------------------------------------------------

def integrate_lindblad(H, lindblad_ops, rho0: DensityMatrix, t_grid) -> list[DensityMatrix]:
    """Fixed-step RK4 integration of a Lindblad master equation.

    lindblad_ops is a list of (operator, rate) pairs.  Returns the state at
    every point of the increasing t_grid (which must start at the initial
    time of rho0, i.e. t_grid[0] carries rho0 itself).
    """
    H = np.asarray(H, dtype=complex)
    if np.abs(H - H.conj().T).max() > 1e-10:
        raise ValueError("Hamiltonian must be Hermitian")
    t_grid = [float(t) for t in t_grid]
    if any(b <= a for a, b in zip(t_grid[:-1], t_grid[1:])):
        raise ValueError("t_grid must be strictly increasing")
    ops = [(np.asarray(L, dtype=complex), float(g)) for L, g in lindblad_ops]
    pre = [(L, g, L.conj().T @ L) for L, g in ops]

    def rhs(rho):
        out = -1j * (H @ rho - rho @ H)
        for L, g, LdL in pre:
            out += g * (L @ rho @ L.conj().T - 0.5 * (LdL @ rho + rho @ LdL))
        return out

    states = [rho0]
    current = rho0.data.copy()
    for t_a, t_b in zip(t_grid[:-1], t_grid[1:]):
        span = t_b - t_a
        h = min(0.01, span / 10)
        steps = max(1, int(round(span / h)))
        h = span / steps
        for _ in range(steps):
            k1 = rhs(current)
            k2 = rhs(current + h / 2 * k1)
            k3 = rhs(current + h / 2 * k2)
            k4 = rhs(current + h * k3)
            current = current + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        drift = abs(np.trace(current).real - 1.0)
        if drift > 1e-8 * max(1.0, span):
            raise ArithmeticError(
                f"trace drift {drift:.3e} over [{t_a}, {t_b}]; step size unstable"
            )
        current = (current + current.conj().T) / 2
        current /= np.trace(current).real
        states.append(DensityMatrix(dims=rho0.dims, data=current))
    return states
