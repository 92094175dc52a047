"""Quantum potential, quantum pressure, chemical potential and friction laws."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import (
    DEFAULT_LOG_FLOOR,
    DensityField,
    Grid1D,
    PhysParams,
    ScalarField,
    diff_array,
    log_density,
)

LAW_KINDS = {
    "linear": kernels.LINEAR,
    "cubic": kernels.CUBIC,
    "combined": kernels.COMBINED,
    "activated": kernels.ACTIVATED,
}


@dataclass(frozen=True)
class FrictionLaw:
    """Friction force f(V) = -b1 V - b3 V^3, or the activated model.

    For ``kind="activated"`` the inverse is given directly,
    ``f^-1(g) = -amplitude * sinh(g / g0)``.  ``b1_x``/``b3_x`` optionally
    hold per-node coefficients that override the scalars.
    """

    kind: str = "linear"
    b1: float = 0.0
    b3: float = 0.0
    amplitude: float = 1.0
    g0: float = 1.0
    b1_x: np.ndarray | None = None
    b3_x: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in LAW_KINDS:
            raise ValueError(f"unknown friction law {self.kind!r}; expected one of {sorted(LAW_KINDS)}")
        b1 = self.b1 if self.b1_x is None else np.asarray(self.b1_x, dtype=float)
        b3 = self.b3 if self.b3_x is None else np.asarray(self.b3_x, dtype=float)
        if np.any(np.asarray(b1) < 0) or np.any(np.asarray(b3) < 0):
            raise ValueError("friction coefficients must be >= 0")
        if self.kind == "linear" and not np.all(np.asarray(b1) > 0):
            raise ValueError("linear friction needs b1 > 0")
        if self.kind == "cubic" and not np.all(np.asarray(b3) > 0):
            raise ValueError("cubic friction needs b3 > 0")
        if self.kind == "combined" and not np.all(np.asarray(b1) + np.asarray(b3) > 0):
            raise ValueError("combined friction needs b1 + b3 > 0")
        if self.kind == "activated" and not (self.amplitude > 0 and self.g0 > 0):
            raise ValueError("activated friction needs amplitude > 0 and g0 > 0")
        for name in ("b1_x", "b3_x"):
            arr = getattr(self, name)
            if arr is not None:
                object.__setattr__(self, name, np.asarray(arr, dtype=float))

    @property
    def code(self) -> int:
        return LAW_KINDS[self.kind]

    @property
    def position_dependent(self) -> bool:
        return self.b1_x is not None or self.b3_x is not None

    def node_coeffs(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        b1 = np.full(n, float(self.b1)) if self.b1_x is None else self.b1_x
        b3 = np.full(n, float(self.b3)) if self.b3_x is None else self.b3_x
        if b1.shape != (n,) or b3.shape != (n,):
            raise ValueError("position-dependent friction arrays must match the grid")
        return b1, b3

    def face_coeffs(self, grid: Grid1D) -> tuple[np.ndarray, np.ndarray]:
        """Coefficients on faces i+1/2 (arithmetic mean of the two nodes)."""
        b1, b3 = self.node_coeffs(grid.n)
        if not self.position_dependent:
            return b1, b3
        return 0.5 * (b1 + np.roll(b1, -1)), 0.5 * (b3 + np.roll(b3, -1))

    def invert(self, g, b1=None, b3=None) -> np.ndarray:
        """Vectorized f^-1(g); b1/b3 default to the scalar coefficients."""
        g = np.atleast_1d(np.asarray(g, dtype=float))
        b1 = np.broadcast_to(np.asarray(self.b1 if b1 is None else b1, dtype=float), g.shape)
        b3 = np.broadcast_to(np.asarray(self.b3 if b3 is None else b3, dtype=float), g.shape)
        return kernels.invert_array(
            g, self.code, np.ascontiguousarray(b1), np.ascontiguousarray(b3),
            float(self.amplitude), float(self.g0))


def invert_friction(g: float, law: FrictionLaw) -> float:
    """V = f^-1(g): the velocity at which friction balances the gradient g.

    For the combined law this is the unique real root of
    b3 V^3 + b1 V + g = 0 (safeguarded Newton, bisection fallback).
    """
    if law.position_dependent:
        raise ValueError("scalar inversion needs scalar coefficients")
    return float(law.invert(g)[0])


def _sqrt_floor(rho: DensityField) -> np.ndarray:
    floor = DEFAULT_LOG_FLOOR * float(np.max(rho.values))
    return np.sqrt(np.maximum(rho.values, floor))


def bohm_potential(rho: DensityField, m: float = 1.0, hbar: float = 1.0) -> ScalarField:
    """Q = -hbar^2 (sqrt rho)'' / (2 m sqrt rho)."""
    sr = _sqrt_floor(rho)
    return ScalarField(-hbar**2 * diff_array(sr, rho.grid, 2) / (2 * m * sr), rho.grid)


def quantum_pressure(rho: DensityField, m: float = 1.0, hbar: float = 1.0) -> ScalarField:
    """p_Q = -(hbar^2 / 4m) rho (ln rho)''."""
    lr = log_density(rho)
    return ScalarField(-hbar**2 / (4 * m) * rho.values * diff_array(lr.values, rho.grid, 2), rho.grid)


def chemical_potential(rho: DensityField, U: ScalarField | None, params: PhysParams,
                       quantum: bool = True) -> ScalarField:
    """mu = Q + theta ln rho + U.  ``quantum=False`` drops Q (classical mode)."""
    grid = rho.grid
    mu = np.zeros(grid.n)
    if quantum:
        mu += bohm_potential(rho, params.m, params.hbar).values
    if params.theta > 0:
        mu += params.theta * log_density(rho).values
    if U is not None:
        if U.grid.n != grid.n:
            raise ValueError("potential and density live on different grids")
        mu += U.values
    return ScalarField(mu, grid)


def drift_velocity(rho: DensityField, U: ScalarField | None, law: FrictionLaw,
                   params: PhysParams, quantum: bool = True) -> ScalarField:
    """Nodewise V = f^-1(d mu/dx) with a central difference of mu."""
    grid = rho.grid
    parts = []
    if quantum:
        parts.append(bohm_potential(rho, params.m, params.hbar).values)
    if params.theta > 0:
        parts.append(params.theta * log_density(rho).values)
    if U is not None:
        if U.grid.n != grid.n:
            raise ValueError("potential and density live on different grids")
        parts.append(U.values)
    mu = np.sum(parts, axis=0) if parts else np.zeros(grid.n)
    scale = np.sum(np.abs(parts), axis=0) if parts else np.zeros(grid.n)
    # differences of mu at the roundoff level of its terms count as zero;
    # the cube root would otherwise turn them into visible velocities
    sp = grid.pad(scale, 1)
    mp = grid.pad(mu, 1)
    dmu = mp[2:] - mp[:-2]
    dmu[np.abs(dmu) <= kernels.DEADBAND * np.finfo(float).eps * (sp[2:] + sp[:-2])] = 0.0
    g = dmu / (2 * grid.dx)
    b1, b3 = law.node_coeffs(grid.n)
    return ScalarField(law.invert(g, b1, b3), rho.grid)


def electron_gas_diffusion(m: float, hbar: float, nu: float) -> float:
    """Effective diffusion constant hbar^2 / (4 m^2 nu) of a viscous electron gas."""
    if not nu > 0:
        raise ValueError(f"viscosity must be > 0, got {nu}")
    return hbar**2 / (4 * m**2 * nu)


def self_consistent_viscosity(m: float, hbar: float) -> float:
    """nu = hbar / 2m, the positive root of hbar^2 / (4 m^2 nu) = nu."""
    if not (m > 0 and hbar > 0):
        raise ValueError("m and hbar must be > 0")
    return hbar / (2 * m)
