"""Gamma, Gauss 2F1 and the implicit time/width relation of the quartic-potential
cubic-friction problem.

The relation links the width sigma of rho ~ exp(-x^4 / 4 sigma^4) to time:

    F(1/3, 1/3; 4/3; u) u^(1/3) = (4/3) (K / b3)^(1/3) t,   u = K sigma^4 / theta.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

# Lanczos coefficients, g = 7, n = 9 (Godfrey)
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _gamma(x: float) -> float:
    # reflection for x < 1/2; poles at non-positive integers
    if x < 0.5:
        s = math.sin(math.pi * x)
        if s == 0.0:
            raise ValueError(f"gamma has a pole at {x}")
        return math.pi / (s * _gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS[0]
    t = x + _LANCZOS_G + 0.5
    for i, c in enumerate(_LANCZOS[1:], start=1):
        acc += c / (x + i)
    return math.sqrt(2 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def gamma_fn(x: float) -> float:
    """Gamma function for x > 0 (Lanczos approximation)."""
    if not x > 0:
        raise ValueError(f"gamma_fn is defined here for x > 0, got {x}")
    if x > 171.6:
        raise OverflowError("gamma overflows double precision for x > 171.6")
    return _gamma(float(x))


# the z <-> 1 - z transformation takes over above this point
_SERIES_MAX_Z = 0.7


def _series(a, b, c, z, max_terms=100000):
    term = 1.0
    total = 1.0
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
        if term == 0.0:
            return total
    raise ArithmeticError("hypergeometric series did not converge")


def _is_nonpos_int(x):
    return x <= 0 and x == math.floor(x)


def hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z in [0, 1].

    Power series for z <= 0.7, the linear z -> 1 - z transformation above
    (requires c - a - b non-integer) and Gauss's summation theorem at z = 1.
    """
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z must lie in [0, 1], got {z}")
    if not c > 0:
        raise ValueError("c must be > 0")
    if z == 0.0:
        return 1.0
    if _is_nonpos_int(a) or _is_nonpos_int(b):
        return _series(a, b, c, z)
    s = c - a - b
    if z == 1.0:
        if not s > 0:
            raise ValueError("2F1 diverges at z = 1 unless c - a - b > 0")
        return _gamma(c) * _gamma(s) / (_gamma(c - a) * _gamma(c - b))
    if z <= _SERIES_MAX_Z:
        return _series(a, b, c, z)
    if s == math.floor(s):
        # degenerate connection formula; the plain series still converges
        try:
            return _series(a, b, c, z, max_terms=1_000_000)
        except ArithmeticError:
            raise ValueError(
                "integer c - a - b this close to z = 1 is outside the supported regime") from None
    w = 1.0 - z
    t1 = _gamma(c) * _gamma(s) / (_gamma(c - a) * _gamma(c - b)) * _series(a, b, 1.0 - s, w)
    t2 = (w ** s * _gamma(c) * _gamma(-s) / (_gamma(a) * _gamma(b))
          * _series(c - a, c - b, 1.0 + s, w))
    return t1 + t2


@dataclass(frozen=True)
class Eq7Params:
    """Quartic stiffness K, thermal energy theta, cubic friction b3 (all > 0)."""

    K: float
    theta: float
    b3: float

    def __post_init__(self):
        for name in ("K", "theta", "b3"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")

    @property
    def sigma_eq(self) -> float:
        return (self.theta / self.K) ** 0.25

    @property
    def time_unit(self) -> float:
        """(3/4) (b3/K)^(1/3): maps the dimensionless time tau to t."""
        return 0.75 * (self.b3 / self.K) ** (1.0 / 3.0)


THIRD = 1.0 / 3.0
# F(1/3, 1/3; 4/3; 1) = Gamma(4/3) Gamma(2/3) = 2 pi / (3 sqrt 3)
TAU_STAR = 2.0 * math.pi / (3.0 * math.sqrt(3.0))


def _g(u: float) -> float:
    """F(1/3, 1/3; 4/3; u) u^(1/3): dimensionless time at u."""
    if u == 0.0:
        return 0.0
    return hyp2f1(THIRD, THIRD, 4 * THIRD, u) * u ** THIRD


def eq7_time_from_sigma(sigma: float, p: Eq7Params) -> float:
    """Time at which the quartic profile reaches width sigma."""
    se = p.sigma_eq
    if not 0.0 < sigma <= se * (1 + 1e-12):
        raise ValueError(f"sigma must lie in (0, {se}], got {sigma}")
    u = min(p.K * sigma**4 / p.theta, 1.0)
    return p.time_unit * _g(u)


def arrival_time(p: Eq7Params) -> float:
    """Finite time t* at which the width reaches (theta/K)^(1/4)."""
    return p.time_unit * TAU_STAR


def _invert_tau(tau: float) -> float:
    # solve G(v^3) = tau for v in (0, 1]; dG/dv = (1 - v^3)^(-1/3)
    if tau <= 0.0:
        return 0.0
    if tau >= TAU_STAR:
        return 1.0
    lo, hi = 0.0, 1.0
    v = min(tau, 1.0 - 1e-16)
    for _ in range(200):
        r = _g(v**3) - tau
        if r > 0:
            hi = v
        elif r < 0:
            lo = v
        else:
            return v
        vn = v - r * (1.0 - v**3) ** THIRD
        if not lo < vn < hi:
            vn = 0.5 * (lo + hi)
        if abs(vn - v) <= 1e-16 * max(v, 1e-300):
            return vn
        v = vn
    return v


def eq7_sigma_from_time(t: float, p: Eq7Params) -> float:
    """Width sigma(t) by inverting the implicit relation; clamps to the
    equilibrium width for t >= t*."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t == 0:
        return 0.0
    v = _invert_tau(t / p.time_unit)
    return p.sigma_eq * v**0.75
