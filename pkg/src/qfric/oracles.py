"""Closed-form dispersion laws and self-similar profiles, plus an ODE oracle
for the quartic-potential width that is independent of the special-function
inversion in :mod:`qfric.specfun`."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .core import DensityField, Grid1D, PhysParams
from .specfun import Eq7Params, eq7_sigma_from_time, gamma_fn

LAW_KINDS = ("linear_quantum", "classical_cubic_free", "quantum_cubic_free", "quartic_eq7")
PROFILE_KINDS = ("gaussian", "quartic", "abs_cubic")


@dataclass(frozen=True)
class DispersionLaw:
    """One of the sigma^2(t) laws.

    ``b1``/``b3`` are the friction coefficients; ``eq7`` defaults to
    ``Eq7Params(K, theta, b3)`` built from ``params``.
    """

    kind: str
    params: PhysParams = PhysParams()
    b1: float = 0.0
    b3: float = 0.0
    eq7: Eq7Params | None = None

    def __post_init__(self):
        k, p = self.kind, self.params
        if k not in LAW_KINDS:
            raise ValueError(f"unknown law {k!r}; expected one of {LAW_KINDS}")
        if k == "linear_quantum" and not self.b1 > 0:
            raise ValueError("b1: linear_quantum needs b1 > 0")
        if k in ("classical_cubic_free", "quantum_cubic_free") and not self.b3 > 0:
            raise ValueError(f"b3: {k} needs b3 > 0")
        if k == "classical_cubic_free" and not p.theta > 0:
            raise ValueError("theta: classical_cubic_free needs theta > 0")
        if k == "quartic_eq7" and self.eq7 is None:
            object.__setattr__(self, "eq7", Eq7Params(p.K, p.theta, self.b3))

    @property
    def exponent(self) -> float:
        """Log-log slope of sigma^2(t) at early times."""
        return {"linear_quantum": 0.5, "classical_cubic_free": 1.5,
                "quantum_cubic_free": 1.0, "quartic_eq7": 1.5}[self.kind]


def _sigma2_scalar(law: DispersionLaw, t: float) -> float:
    if not t >= 0:
        raise ValueError(f"t must be >= 0, got {t}")
    p = law.params
    if law.kind == "linear_quantum":
        return p.hbar * math.sqrt(t / (p.m * law.b1))
    if law.kind == "classical_cubic_free":
        return math.sqrt(64.0 * p.theta * t**3 / (27.0 * law.b3))
    if law.kind == "quantum_cubic_free":
        return 2.0 * (p.hbar**2 / (2.0 * p.m * law.b3)) ** (1.0 / 3.0) * t
    return eq7_sigma_from_time(t, law.eq7) ** 2


def sigma2(law: DispersionLaw, t):
    """sigma^2 at time(s) t; returns a float for scalar t."""
    if np.ndim(t) == 0:
        return _sigma2_scalar(law, float(t))
    return np.array([_sigma2_scalar(law, float(v)) for v in np.ravel(t)]).reshape(np.shape(t))


def profile_norm(kind: str, sigma: float) -> float:
    """Prefactor of the unit-mass profile of scale sigma."""
    if kind == "gaussian":
        return 1.0 / math.sqrt(2.0 * math.pi * sigma**2)
    if kind == "quartic":
        return gamma_fn(0.75) / (math.pi * sigma)
    if kind == "abs_cubic":
        return 3.0 * 3.0 ** (1.0 / 6.0) * gamma_fn(2.0 / 3.0) / (4.0 * math.pi * sigma)
    raise ValueError(f"unknown profile {kind!r}; expected one of {PROFILE_KINDS}")


def profile(kind: str, sigma: float, grid: Grid1D, center: float = 0.0) -> DensityField:
    """Closed-form self-similar density sampled on ``grid`` (not renormalized).

    gaussian: exp(-x^2/2 s^2), quartic: exp(-x^4/4 s^4), abs_cubic: exp(-|x|^3/3 s^3).
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    c = profile_norm(kind, sigma)
    if grid.length < 8 * sigma:
        raise ValueError(f"grid spans {grid.length:g}, profile needs at least 8 sigma = {8 * sigma:g}")
    z = np.abs(grid.x - center) / sigma
    if kind == "gaussian":
        shape = np.exp(-0.5 * z**2)
    elif kind == "quartic":
        shape = np.exp(-0.25 * z**4)
    else:
        shape = np.exp(-z**3 / 3.0)
    return DensityField(c * shape, grid)


def equilibrium_sigma(K: float, theta: float) -> float:
    """(theta/K)^(1/4), the width of the Boltzmann quartic profile."""
    if not (K > 0 and theta > 0):
        raise ValueError("K and theta must be > 0")
    return (theta / K) ** 0.25


# --------------------------------------------------------------- ODE oracle

def _free_time(sigma, p: Eq7Params):
    # free cubic law: sigma^(4/3) = (4/3) (theta/b3)^(1/3) t
    return 0.75 * sigma ** (4.0 / 3.0) * (p.b3 / p.theta) ** (1.0 / 3.0)


def _rhs(p: Eq7Params):
    def f(t, y):
        s = y[0]
        drive = max(p.theta - p.K * s**4, 0.0) / (p.b3 * s**4)
        return [s * np.cbrt(drive)]
    return f


def _start(p: Eq7Params, sigma0):
    s0 = 1e-3 * p.sigma_eq if sigma0 is None else float(sigma0)
    if not 0 < s0 < p.sigma_eq:
        raise ValueError("sigma0 must lie in (0, sigma_eq)")
    return s0, _free_time(s0, p)


def eq7_ode_oracle(p: Eq7Params, t_grid, sigma0: float | None = None) -> np.ndarray:
    """sigma(t) from d sigma/dt = sigma ((theta - K sigma^4)/(b3 sigma^4))^(1/3).

    Integration (DOP853) starts at sigma0 (default 1e-3 sigma_eq) at the
    time the free cubic law assigns to it; earlier times use that law.
    Values are clamped to sigma_eq.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid < 0):
        raise ValueError("times must be >= 0")
    s0, t0 = _start(p, sigma0)
    out = np.empty_like(t_grid)
    early = t_grid <= t0
    # free-law inversion below the start point
    out[early] = (t_grid[early] / (0.75 * (p.b3 / p.theta) ** (1.0 / 3.0))) ** 0.75
    late = ~early
    if late.any():
        tl = t_grid[late]
        order = np.argsort(tl)
        sol = solve_ivp(_rhs(p), (t0, float(tl.max())), [s0], method="DOP853",
                        t_eval=tl[order], rtol=1e-13, atol=1e-15 * p.sigma_eq)
        if not sol.success:
            raise RuntimeError(f"ODE oracle failed: {sol.message}")
        vals = np.empty(tl.size)
        vals[order] = sol.y[0]
        out[late] = vals
    return np.minimum(out, p.sigma_eq)


def ode_arrival_time(p: Eq7Params, rel: float = 1e-10, sigma0: float | None = None) -> float:
    """Time at which the ODE width reaches (1 - rel) sigma_eq.

    The approach is non-Lipschitz, sigma_eq - sigma ~ (t* - t)^(3/2), so
    the event time differs from t* by O(rel^(2/3)).
    """
    s0, t0 = _start(p, sigma0)
    target = (1.0 - rel) * p.sigma_eq

    def hit(t, y):
        return y[0] - target
    hit.terminal = True
    hit.direction = 1
    horizon = t0 + 10.0 * p.time_unit
    sol = solve_ivp(_rhs(p), (t0, horizon), [s0], method="DOP853", events=hit,
                    rtol=1e-13, atol=1e-15 * p.sigma_eq)
    if not sol.t_events[0].size:
        raise RuntimeError("ODE oracle did not reach the equilibrium width")
    return float(sol.t_events[0][0])
