"""Linear equations around a uniform state: finite differences and exact spectra.

    reaction_diffusion10:  d rho/dt = -B4 rho'''' + D rho'' - k (rho - rho_eq)
    convective14:          d rho/dt = -V0 rho' - B3 rho''' - k (rho - rho_eq)
    electron_gas17:        d rho/dt = D_e rho'' - k (rho - rho_eq)

with D = theta/b1, B4 = hbar^2/(4 m b1), B3 = hbar^2/(4 m^2 V0) and
D_e = hbar^2/(4 m^2 nu).  The constant-coefficient operator commutes with the
reaction term, so the reaction is applied exactly as exp(-k dt) on the
deviation rho - rho_eq and the rest is advanced by a theta-scheme
(theta = 0 forward Euler, 1/2 Crank-Nicolson).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..core import NEGATIVE_TOL, DensityField, Grid1D, PhysParams, diff_array
from ..physics import electron_gas_diffusion
from ._probe import banded_matrix
from .scenario import NumericalError, Scenario, ScenarioError, StabilityError


@dataclass(frozen=True)
class LinearCoeffs:
    D: float = 0.0     # rho''
    B4: float = 0.0    # -rho''''
    V0: float = 0.0    # -rho'
    B3: float = 0.0    # -rho'''
    k: float = 0.0
    rho_eq: float = 0.0


def coefficients(scenario: Scenario) -> LinearCoeffs:
    p = scenario.params
    eq = scenario.equation
    if eq == "reaction_diffusion10":
        b1 = scenario.friction().b1
        if scenario.law.b1_x is not None:
            raise ScenarioError("b1: reaction_diffusion10 needs a constant b1")
        return LinearCoeffs(D=p.theta / b1, B4=p.hbar**2 / (4 * p.m * b1), k=p.k_rate, rho_eq=p.rho_eq)
    if eq == "convective14":
        return LinearCoeffs(V0=p.V0, B3=p.hbar**2 / (4 * p.m**2 * p.V0), k=p.k_rate, rho_eq=p.rho_eq)
    if eq == "electron_gas17":
        return LinearCoeffs(D=electron_gas_diffusion(p.m, p.hbar, p.nu), k=p.k_rate, rho_eq=p.rho_eq)
    raise ScenarioError(f"equation: {eq} is not one of the linear equations")


def _stencil_matrix(grid: Grid1D, order: int) -> sp.csr_matrix:
    A = banded_matrix(lambda f: diff_array(f, grid, order), np.zeros(grid.n), grid.periodic)
    A.eliminate_zeros()
    return A.tocsr()


@lru_cache(maxsize=32)
def _operator(grid: Grid1D, c: LinearCoeffs) -> sp.csr_matrix:
    A = sp.csr_matrix((grid.n, grid.n))
    if c.D:
        A = A + c.D * _stencil_matrix(grid, 2)
    if c.B4:
        A = A - c.B4 * _stencil_matrix(grid, 4)
    if c.V0:
        A = A - c.V0 * _stencil_matrix(grid, 1)
    if c.B3:
        A = A - c.B3 * _stencil_matrix(grid, 3)
    return A.tocsr()


@lru_cache(maxsize=32)
def _factor(grid: Grid1D, c: LinearCoeffs, dt: float, theta: float):
    A = _operator(grid, c)
    eye = sp.identity(grid.n, format="csc")
    lhs = (eye - theta * dt * A).tocsc()
    rhs = (eye + (1 - theta) * dt * A).tocsr()
    return spla.splu(lhs), rhs


def linear_step(values: np.ndarray, grid: Grid1D, c: LinearCoeffs, dt: float,
                theta: float = 0.5) -> np.ndarray:
    """Advance by dt: theta-scheme for the differential part, exact reaction."""
    u = values - c.rho_eq
    if theta == 0.0:
        u = u + dt * (_operator(grid, c) @ u)
    else:
        lu, rhs = _factor(grid, c, float(dt), float(theta))
        u = lu.solve(rhs @ u)
    if c.k:
        u = u * np.exp(-c.k * dt)
    out = u + c.rho_eq
    if not np.all(np.isfinite(out)):
        raise NumericalError("non-finite values in linear step")
    return out


def _theta_for(scenario: Scenario) -> float:
    return 0.0 if scenario.scheme == "explicit" else 0.5


def _linear(rho: DensityField, scenario: Scenario, dt: float | None, equation: str) -> DensityField:
    if scenario.equation != equation:
        raise ScenarioError(f"equation: expected {equation}, got {scenario.equation}")
    from .overdamped import stable_dt

    theta = _theta_for(scenario)
    if dt is None:
        dt = scenario.dt if scenario.dt is not None else default_linear_dt(scenario)
    if theta == 0.0:
        limit = stable_dt(scenario, safety=1.0)
        if dt > limit * (1 + 1e-12):
            raise StabilityError(f"dt = {dt:.3e} exceeds the stability estimate {limit:.3e}")
    out = linear_step(rho.values, rho.grid, coefficients(scenario), dt, theta)
    if out.min() < -NEGATIVE_TOL:
        raise NumericalError(f"negative density {out.min():.3e}")
    return DensityField(out, rho.grid)


def default_linear_dt(scenario: Scenario) -> float:
    """Explicit: the stability estimate.  Crank-Nicolson: safety * dx / max(1, |V0|)."""
    from .overdamped import stable_dt

    if _theta_for(scenario) == 0.0:
        return stable_dt(scenario)
    c = coefficients(scenario)
    return scenario.safety * scenario.grid.dx / max(1.0, abs(c.V0))


def step_reaction_diffusion(rho: DensityField, scenario: Scenario, dt: float | None = None) -> DensityField:
    return _linear(rho, scenario, dt, "reaction_diffusion10")


def step_convective14(rho: DensityField, scenario: Scenario, dt: float | None = None) -> DensityField:
    """Central differences for -V0 rho' (upwinding would damp the modes)."""
    return _linear(rho, scenario, dt, "convective14")


def step_electron_gas17(rho: DensityField, scenario: Scenario, dt: float | None = None) -> DensityField:
    return _linear(rho, scenario, dt, "electron_gas17")


# ----------------------------------------------------------------- spectra

@dataclass
class SpectralState:
    """Fourier content of a real field on a periodic grid.

    ``amplitude[j]`` multiplies exp(i q_j (x - x_min)); the q = 0 term is kept
    separately in ``mean_channel``.
    """

    q: np.ndarray
    amplitude: np.ndarray
    mean_channel: float
    grid: Grid1D

    @classmethod
    def from_field(cls, rho) -> "SpectralState":
        grid = rho.grid
        if not grid.periodic:
            raise ValueError("spectral states need a periodic grid")
        c = np.fft.fft(rho.values) / grid.n
        q = 2 * np.pi * np.fft.fftfreq(grid.n, grid.dx)
        return cls(q[1:], c[1:], float(c[0].real), grid)

    def to_values(self) -> np.ndarray:
        c = np.concatenate(([self.mean_channel], self.amplitude))
        return np.fft.ifft(c * self.grid.n).real

    def mode(self, q: float) -> complex:
        j = int(np.argmin(np.abs(self.q - q)))
        return complex(self.amplitude[j])


def _decay_rd(q, params: PhysParams, b1: float):
    D = params.theta / b1
    B = params.hbar**2 / (4 * params.m * b1)
    return params.k_rate + D * q**2 + B * q**4


def _mean_relax(mean0, t, params: PhysParams):
    e = np.exp(-params.k_rate * t)
    return params.rho_eq * (1 - e) + mean0 * e


def evolve_spectral_rd(state: SpectralState, t: float, params: PhysParams, b1: float) -> SpectralState:
    """Each mode times exp[-(k + D q^2 + hbar^2 q^4 / 4 m b1) t]."""
    if t < 0:
        raise ValueError("t must be >= 0")
    amp = state.amplitude * np.exp(-_decay_rd(state.q, params, b1) * t)
    return SpectralState(state.q, amp, _mean_relax(state.mean_channel, t, params), state.grid)


def phase_velocity(q, params: PhysParams):
    """V0 [1 - (hbar q / 2 m V0)^2]."""
    return params.V0 * (1 - (params.hbar * np.asarray(q) / (2 * params.m * params.V0)) ** 2)


def evolve_spectral_conv(state: SpectralState, t: float, params: PhysParams) -> SpectralState:
    """Each mode times exp[-(k + i q V0 - i q^3 hbar^2 / 4 m^2 V0) t]."""
    if t < 0:
        raise ValueError("t must be >= 0")
    q = state.q
    B3 = params.hbar**2 / (4 * params.m**2 * params.V0)
    rate = params.k_rate + 1j * q * params.V0 - 1j * q**3 * B3
    amp = state.amplitude * np.exp(-rate * t)
    return SpectralState(q, amp, _mean_relax(state.mean_channel, t, params), state.grid)
