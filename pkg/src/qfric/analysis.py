"""Moments, profile scales, local scaling exponents and error norms."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ScalarField, integrate
from .specfun import gamma_fn

# variance / sigma^2 for each self-similar profile family
FAMILY_VARIANCE = {
    "gaussian": 1.0,
    "quartic": 2.0 * gamma_fn(0.75) / gamma_fn(0.25),
    "abs_cubic": 3.0 ** (2.0 / 3.0) / gamma_fn(1.0 / 3.0),
}

REGIMES = ("sub", "normal", "super")


@dataclass
class DispersionSeries:
    """(t, sigma^2, alpha) samples; alpha is NaN where undefined."""

    t: np.ndarray
    sigma2: np.ndarray
    alpha: np.ndarray | None = None

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.sigma2 = np.asarray(self.sigma2, dtype=float)
        if self.t.shape != self.sigma2.shape or self.t.ndim != 1:
            raise ValueError("t and sigma2 must be 1-D arrays of equal length")
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("t must be strictly increasing")
        if np.any(self.sigma2 < 0):
            raise ValueError("sigma2 must be >= 0")
        if self.alpha is None:
            self.alpha = np.full(self.t.shape, np.nan)
        else:
            self.alpha = np.asarray(self.alpha, dtype=float)

    def __len__(self):
        return self.t.size


def _moments(rho):
    w = rho.grid.weights * rho.grid.dx
    mass = float(np.dot(w, rho.values))
    if not mass > 0:
        raise ValueError("density has no mass")
    x = rho.grid.x
    mean = float(np.dot(w, x * rho.values)) / mass
    return mass, mean, float(np.dot(w, (x - mean) ** 2 * rho.values)) / mass


def mean_position(rho) -> float:
    return _moments(rho)[1]


def variance(rho) -> float:
    """Second central moment by grid quadrature (mass-normalized)."""
    return _moments(rho)[2]


def scale_param(rho, family: str) -> float:
    """Profile-scale sigma^2 = variance / c_family."""
    if family not in FAMILY_VARIANCE:
        raise ValueError(f"unknown profile family {family!r}")
    return variance(rho) / FAMILY_VARIANCE[family]


def local_exponent(series: DispersionSeries) -> DispersionSeries:
    """Centered log-log slope d ln sigma^2 / d ln t; endpoints stay NaN."""
    t, s2 = series.t, series.sigma2
    if t.size < 3:
        raise ValueError("need at least 3 samples")
    if np.any(t <= 0) or np.any(s2 <= 0):
        raise ValueError("t and sigma2 must be positive")
    lt, ls = np.log(t), np.log(s2)
    alpha = np.full(t.size, np.nan)
    alpha[1:-1] = (ls[2:] - ls[:-2]) / (lt[2:] - lt[:-2])
    return DispersionSeries(t.copy(), s2.copy(), alpha)


def loglog_slope(t, s2) -> float:
    """Least-squares slope of ln sigma^2 against ln t."""
    return float(np.polyfit(np.log(t), np.log(s2), 1)[0])


def classify_regime(alpha: float, tol: float = 0.05) -> str:
    if not math.isfinite(alpha):
        raise ValueError("alpha must be finite")
    if alpha < 1 - tol:
        return "sub"
    if alpha > 1 + tol:
        return "super"
    return "normal"


def error_norms(a: ScalarField, b: ScalarField) -> tuple[float, float]:
    """(L2, Linf) of a - b; L2 uses the grid quadrature."""
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")
    d = a.values - b.values
    return math.sqrt(integrate(d * d, a.grid)), float(np.max(np.abs(d)))
