"""Uniform 1-D grids, fields, finite-difference stencils and quadrature.

Working units are dimensionless with ``hbar = m = 1`` by default.  Every
parameter (``theta = k_B T``, ``K``, friction coefficients, ...) is then
measured in those units; see the README for the mapping to the axes of the
dispersion plot.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NOFLUX = "noflux"
PERIODIC = "periodic"
_BCS = (NOFLUX, PERIODIC)

# relative floor applied before taking ln(rho)
DEFAULT_LOG_FLOOR = 1e-30


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid.

    Bounded (no-flux) grids place nodes on both end points, so
    ``dx = (x_max - x_min)/(n - 1)`` and boundary nodes own half cells.
    Periodic grids omit the right end point: ``dx = (x_max - x_min)/n``.
    """

    x_min: float
    x_max: float
    n: int
    bc: str = NOFLUX

    def __post_init__(self):
        if self.bc not in _BCS:
            raise ValueError(f"bc must be one of {_BCS}, got {self.bc!r}")
        if int(self.n) != self.n or self.n < 8:
            raise ValueError(f"n must be an integer >= 8, got {self.n}")
        if not self.x_min < self.x_max:
            raise ValueError("x_min must be < x_max")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))

    @property
    def periodic(self) -> bool:
        return self.bc == PERIODIC

    @property
    def dx(self) -> float:
        span = self.x_max - self.x_min
        return span / self.n if self.periodic else span / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def weights(self) -> np.ndarray:
        """Quadrature weights in units of dx (trapezoid or rectangle)."""
        w = np.ones(self.n)
        if not self.periodic:
            w[0] = w[-1] = 0.5
        return w

    def pad(self, f: np.ndarray, width: int) -> np.ndarray:
        """Ghost-extend ``f``: wraparound (periodic) or even mirror about the end nodes."""
        return np.pad(f, width, mode="wrap" if self.periodic else "reflect")


@dataclass
class ScalarField:
    """Samples of a scalar quantity on a grid (units documented per use).

    ``mask`` optionally flags nodes that received special treatment, e.g.
    floored logarithms.
    """

    values: np.ndarray
    grid: Grid1D
    mask: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape != (self.grid.n,):
            raise ValueError(
                f"field has shape {self.values.shape}, grid has {self.grid.n} nodes")

    def copy(self) -> "ScalarField":
        m = None if self.mask is None else self.mask.copy()
        return type(self)(self.values.copy(), self.grid, m)


# tolerance matching the solvers' positivity guard
NEGATIVE_TOL = 1e-12


@dataclass
class DensityField(ScalarField):
    """Non-negative probability density (1/length)."""

    def __post_init__(self):
        super().__post_init__()
        self.values = np.asarray(self.values, dtype=float)
        if np.any(self.values < -NEGATIVE_TOL):
            raise ValueError(f"density has negative values (min {self.values.min():.3e})")


@dataclass(frozen=True)
class PhysParams:
    """Physical constants of a scenario.

    theta is the thermal energy k_B T, K the quartic stiffness of
    ``U = K x^4 / 4``, k_rate and rho_eq the linearized reaction, V0 the
    convective velocity and nu the kinematic viscosity.
    """

    m: float = 1.0
    hbar: float = 1.0
    theta: float = 0.0
    K: float = 0.0
    k_rate: float = 0.0
    rho_eq: float = 0.0
    V0: float = 1.0
    nu: float = 0.5

    def __post_init__(self):
        for name in ("m", "hbar", "nu"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("theta", "K", "k_rate", "rho_eq"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not np.isfinite(self.V0):
            raise ValueError("V0 must be finite")


def _values(f, grid: Grid1D | None = None) -> tuple[np.ndarray, Grid1D]:
    if isinstance(f, ScalarField):
        return f.values, f.grid
    if grid is None:
        raise TypeError("a raw array needs an explicit grid")
    f = np.asarray(f)
    if f.shape != (grid.n,):
        raise ValueError(f"array has shape {f.shape}, grid has {grid.n} nodes")
    return f, grid


def diff_array(f: np.ndarray, grid: Grid1D, order: int) -> np.ndarray:
    """Central difference of ``order`` 1..4 on raw node values."""
    if order not in (1, 2, 3, 4):
        raise ValueError(f"derivative order must be 1..4, got {order}")
    if grid.n < order + 4:
        raise ValueError(f"grid needs at least {order + 4} points for order {order}")
    if f.shape != (grid.n,):
        raise ValueError(f"array has shape {f.shape}, grid has {grid.n} nodes")
    dx = grid.dx
    p = grid.pad(f, 2)
    fm2, fm1, f0, fp1, fp2 = p[:-4], p[1:-3], p[2:-2], p[3:-1], p[4:]
    if order == 1:
        return (fp1 - fm1) / (2 * dx)
    if order == 2:
        return (fp1 - 2 * f0 + fm1) / dx**2
    if order == 3:
        return (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * dx**3)
    return (fp2 - 4 * fp1 + 6 * f0 - 4 * fm1 + fm2) / dx**4


def derivative(f: ScalarField, order: int) -> ScalarField:
    """Second-order central derivative; ghost nodes follow the grid's bc."""
    values, grid = _values(f)
    return ScalarField(diff_array(values, grid, order), grid)


def integrate(f, grid: Grid1D | None = None) -> float:
    """Trapezoid rule on no-flux grids, rectangle rule on periodic ones."""
    values, grid = _values(f, grid)
    return float(np.dot(grid.weights, values) * grid.dx)


def normalize(rho: DensityField) -> DensityField:
    mass = integrate(rho)
    if not mass > 0:
        raise ValueError(f"cannot normalize a density with total mass {mass}")
    return DensityField(rho.values / mass, rho.grid)


def log_density(rho: DensityField, floor: float | None = None) -> ScalarField:
    """ln(max(rho, floor)); ``mask`` marks floored nodes.

    The default floor is ``1e-30 * max(rho)``.
    """
    values = rho.values
    if floor is None:
        floor = DEFAULT_LOG_FLOOR * float(np.max(values))
    if not floor > 0:
        raise ValueError("log floor must be > 0")
    floored = values < floor
    return ScalarField(np.log(np.maximum(values, floor)), rho.grid, floored)
