"""Angular-momentum special functions.

Wigner 3j symbols and Clebsch-Gordan coefficients evaluated through the Racah
sum over exact rationals, spherical harmonics with the Condon-Shortley phase,
and Wigner small-d rotation matrix elements.  Spin quantum numbers are carried
as doubled integers (:class:`HalfInt`) so half-integer values stay exact and
parity/triangle checks are integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import cos, factorial, pi, sin, sqrt

import numpy as np
from scipy.special import sph_harm_y

__all__ = [
    "HalfInt",
    "SphericalPoint",
    "wigner_3j",
    "clebsch_gordan",
    "spherical_harmonic",
    "wigner_small_d",
    "wigner_d_matrix",
]


@dataclass(frozen=True, order=True)
class HalfInt:
    """Integer or half-integer stored exactly as twice its value."""

    twice_value: int

    @classmethod
    def of(cls, value) -> "HalfInt":
        """Coerce an int, float, or HalfInt into a HalfInt."""
        if isinstance(value, HalfInt):
            return value
        doubled = round(2 * value)
        if abs(2 * value - doubled) > 1e-9:
            raise ValueError(f"{value!r} is not an integer or half-integer")
        return cls(doubled)

    @property
    def value(self) -> float:
        return self.twice_value / 2

    def __float__(self) -> float:
        return self.twice_value / 2

    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def __repr__(self) -> str:
        if self.twice_value % 2 == 0:
            return f"HalfInt({self.twice_value // 2})"
        return f"HalfInt({self.twice_value}/2)"


@dataclass(frozen=True)
class SphericalPoint:
    """Point on the unit sphere; theta in [0, pi], phi reduced mod 2 pi."""

    theta: float
    phi: float

    def __post_init__(self):
        theta = min(max(float(self.theta), 0.0), pi)
        phi = float(self.phi) % (2 * pi)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)


def _check_jm(tj: int, tm: int) -> None:
    if tj < 0:
        raise ValueError("negative spin magnitude")
    if (tj - tm) % 2 != 0:
        raise ValueError("projection parity inconsistent with spin magnitude")


def _fac2(tx: int) -> int:
    # factorial of tx/2 where tx is guaranteed even and nonnegative
    return factorial(tx // 2)


@lru_cache(maxsize=None)
def _wigner_3j_doubled(tj1: int, tj2: int, tj3: int, tm1: int, tm2: int, tm3: int) -> float:
    if tm1 + tm2 + tm3 != 0:
        return 0.0
    if not (abs(tj1 - tj2) <= tj3 <= tj1 + tj2):
        return 0.0
    if (tj1 + tj2 + tj3) % 2 != 0:
        return 0.0
    for tj, tm in ((tj1, tm1), (tj2, tm2), (tj3, tm3)):
        if abs(tm) > tj:
            return 0.0

    tri = Fraction(
        _fac2(tj1 + tj2 - tj3) * _fac2(tj1 - tj2 + tj3) * _fac2(-tj1 + tj2 + tj3),
        _fac2(tj1 + tj2 + tj3 + 2),
    )
    pre = (
        tri
        * _fac2(tj1 + tm1) * _fac2(tj1 - tm1)
        * _fac2(tj2 + tm2) * _fac2(tj2 - tm2)
        * _fac2(tj3 + tm3) * _fac2(tj3 - tm3)
    )
    total = Fraction(0)
    kmin = max(0, (tj2 - tj3 - tm1) // 2, (tj1 - tj3 + tm2) // 2)
    kmax = min((tj1 + tj2 - tj3) // 2, (tj1 - tm1) // 2, (tj2 + tm2) // 2)
    for k in range(kmin, kmax + 1):
        den = (
            factorial(k)
            * _fac2(tj1 + tj2 - tj3 - 2 * k)
            * _fac2(tj1 - tm1 - 2 * k)
            * _fac2(tj2 + tm2 - 2 * k)
            * _fac2(tj3 - tj2 + tm1 + 2 * k)
            * _fac2(tj3 - tj1 - tm2 + 2 * k)
        )
        total += Fraction((-1) ** k, den)
    sign = (-1) ** ((tj1 - tj2 - tm3) // 2)
    return sign * float(total) * sqrt(float(pre))


def wigner_3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3j symbol (j1 j2 j3 / m1 m2 m3).

    Returns 0 when the triangle inequality or the m-sum rule fails; raises for
    negative spins or inconsistent integer/half-integer parity.
    """
    tj1, tj2, tj3 = (HalfInt.of(j).twice_value for j in (j1, j2, j3))
    tm1, tm2, tm3 = (HalfInt.of(m).twice_value for m in (m1, m2, m3))
    _check_jm(tj1, tm1)
    _check_jm(tj2, tm2)
    _check_jm(tj3, tm3)
    return _wigner_3j_doubled(tj1, tj2, tj3, tm1, tm2, tm3)


def clebsch_gordan(j1, m1, j2, m2, j, m) -> float:
    """Clebsch-Gordan coefficient <j1 m1 j2 m2 | j m>."""
    tj1 = HalfInt.of(j1).twice_value
    tj2 = HalfInt.of(j2).twice_value
    tj = HalfInt.of(j).twice_value
    tm = HalfInt.of(m).twice_value
    three_j = wigner_3j(j1, j2, j, m1, m2, HalfInt(-tm))
    phase = (-1) ** ((tj1 - tj2 + tm) // 2)
    return phase * sqrt(tj + 1) * three_j


def spherical_harmonic(K: int, Q: int, p: SphericalPoint) -> complex:
    """Spherical harmonic Y_KQ(theta, phi) with the Condon-Shortley phase."""
    if K < 0 or abs(Q) > K:
        raise ValueError("require K >= 0 and |Q| <= K")
    return complex(sph_harm_y(K, Q, p.theta, p.phi))


def spherical_harmonic_array(K: int, Q: int, theta, phi):
    """Vectorized Y_KQ over matching arrays of angles."""
    if K < 0 or abs(Q) > K:
        raise ValueError("require K >= 0 and |Q| <= K")
    return sph_harm_y(K, Q, np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))


def wigner_small_d(j, mp, m, beta: float) -> float:
    """Wigner rotation matrix element d^j_{mp,m}(beta).

    Convention: d(beta) = exp(-i beta J_y) in the |j, m> basis, so for j=1/2
    d_{1/2,-1/2}(beta) = -sin(beta/2).
    """
    tj = HalfInt.of(j).twice_value
    tmp = HalfInt.of(mp).twice_value
    tm = HalfInt.of(m).twice_value
    _check_jm(tj, tmp)
    _check_jm(tj, tm)
    if abs(tmp) > tj or abs(tm) > tj:
        raise ValueError("|projection| exceeds spin magnitude")

    c = cos(beta / 2)
    s = sin(beta / 2)
    pre = sqrt(
        _fac2(tj + tmp) * _fac2(tj - tmp) * _fac2(tj + tm) * _fac2(tj - tm)
    )
    total = 0.0
    smin = max(0, (tm - tmp) // 2)
    smax = min((tj + tm) // 2, (tj - tmp) // 2)
    for k in range(smin, smax + 1):
        num = (-1) ** ((tmp - tm) // 2 + k)
        den = (
            _fac2(tj + tm - 2 * k)
            * factorial(k)
            * _fac2(tmp - tm + 2 * k)
            * _fac2(tj - tmp - 2 * k)
        )
        cos_pow = tj - 2 * k + (tm - tmp) // 2
        sin_pow = (tmp - tm) // 2 + 2 * k
        total += num * (c ** cos_pow) * (s ** sin_pow) / den
    return pre * total


def wigner_d_matrix(j, beta: float) -> np.ndarray:
    """Full small-d matrix, rows and columns ordered m = j, j-1, ..., -j."""
    tj = HalfInt.of(j).twice_value
    dim = tj + 1
    out = np.empty((dim, dim))
    for i in range(dim):
        tmp = tj - 2 * i
        for k in range(dim):
            tm = tj - 2 * k
            out[i, k] = wigner_small_d(HalfInt(tj), HalfInt(tmp), HalfInt(tm), beta)
    return out
