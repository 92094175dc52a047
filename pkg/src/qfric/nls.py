"""Split-step integrator for i hbar psi_t = -hbar^2 psi''/2m + U psi - I psi,
where the information density I(rho) comes from an entropy functional, and
the Madelung map psi -> (rho, V)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .core import DEFAULT_LOG_FLOOR, DensityField, Grid1D, PhysParams, ScalarField, integrate
from .analysis import variance

ENTROPY_KINDS = ("none", "shannon", "linear")


@dataclass
class WaveField:
    """Complex amplitude (1/sqrt(length)) on a periodic grid."""

    values: np.ndarray
    grid: Grid1D

    def __post_init__(self):
        if not self.grid.periodic:
            raise ValueError("wave fields live on periodic grids")
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.n,):
            raise ValueError(f"field has shape {self.values.shape}, grid has {self.grid.n} nodes")

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def norm(self) -> float:
        return integrate(self.density, self.grid)

    def normalized(self) -> "WaveField":
        n = self.norm()
        if not n > 0:
            raise ValueError("cannot normalize a zero wave function")
        return WaveField(self.values / math.sqrt(n), self.grid)


@dataclass(frozen=True)
class EntropyFunctional:
    """I(rho) = -strength ln rho (shannon), strength (1 - rho) (linear), or 0."""

    kind: str = "none"
    strength: float = 0.0

    def __post_init__(self):
        if self.kind not in ENTROPY_KINDS:
            raise ValueError(f"unknown entropy functional {self.kind!r}; expected one of {ENTROPY_KINDS}")
        if not self.strength >= 0:
            raise ValueError("strength must be >= 0")

    @classmethod
    def thermal(cls, theta: float) -> "EntropyFunctional":
        """Shannon functional with strength k_B T."""
        return cls("shannon", theta)

    def information(self, rho: np.ndarray) -> np.ndarray:
        if self.kind == "none" or self.strength == 0.0:
            return np.zeros_like(rho)
        if self.kind == "shannon":
            floor = DEFAULT_LOG_FLOOR * max(float(np.max(rho)), 1e-300)
            return -self.strength * np.log(np.maximum(rho, floor))
        return self.strength * (1.0 - rho)


def _kinetic_phase(grid: Grid1D, dt: float, params: PhysParams) -> np.ndarray:
    q = 2 * np.pi * np.fft.fftfreq(grid.n, grid.dx)
    return np.exp(-1j * params.hbar * q**2 * dt / (2 * params.m))


def split_step(psi: WaveField, dt: float, U: ScalarField | None = None,
               ent: EntropyFunctional = EntropyFunctional(),
               params: PhysParams = PhysParams()) -> WaveField:
    """One Strang step: half potential rotation, exact kinetic step in
    Fourier space, half potential rotation."""
    if not dt > 0:
        raise ValueError("dt must be > 0")
    u = np.zeros(psi.grid.n) if U is None else np.asarray(U.values, dtype=float)
    half = dt / (2 * params.hbar)
    v = psi.values
    v = v * np.exp(-1j * half * (u - ent.information(np.abs(v) ** 2)))
    v = np.fft.ifft(_kinetic_phase(psi.grid, dt, params) * np.fft.fft(v))
    v = v * np.exp(-1j * half * (u - ent.information(np.abs(v) ** 2)))
    if not np.all(np.isfinite(v)):
        raise FloatingPointError("non-finite wave function")
    return WaveField(v, psi.grid)


def propagate(psi: WaveField, dt: float, steps: int, U: ScalarField | None = None,
              ent: EntropyFunctional = EntropyFunctional(),
              params: PhysParams = PhysParams(), every: int = 0):
    """Apply ``steps`` split steps; with ``every > 0`` also return the list
    of (t, psi) snapshots taken every ``every`` steps (t = 0 included)."""
    snaps = [(0.0, psi)] if every else None
    # the kinetic factor is the same every step
    kin = _kinetic_phase(psi.grid, dt, params)
    u = np.zeros(psi.grid.n) if U is None else np.asarray(U.values, dtype=float)
    half = dt / (2 * params.hbar)
    v = psi.values.copy()
    for k in range(1, steps + 1):
        v *= np.exp(-1j * half * (u - ent.information(np.abs(v) ** 2)))
        v = np.fft.ifft(kin * np.fft.fft(v))
        v *= np.exp(-1j * half * (u - ent.information(np.abs(v) ** 2)))
        if every and k % every == 0:
            if not np.all(np.isfinite(v)):
                raise FloatingPointError(f"non-finite wave function at step {k}")
            snaps.append((k * dt, WaveField(v.copy(), psi.grid)))
    if not np.all(np.isfinite(v)):
        raise FloatingPointError("non-finite wave function")
    out = WaveField(v, psi.grid)
    return (out, snaps) if every else out


def phase_increments(psi: WaveField, floor_rel: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Phase differences arg(psi_{i+1}/psi_i) in (-pi, pi] and a mask of the
    links touching a node with |psi|^2 < floor_rel * max."""
    v = psi.values
    rho = np.abs(v) ** 2
    low = rho < floor_rel * rho.max()
    nxt = np.roll(v, -1)
    return np.angle(nxt * np.conj(v)), low | np.roll(low, -1)


def unwrapped_phase(psi: WaveField, floor_rel: float = 1e-8) -> np.ndarray:
    """Phase accumulated link by link from node 0.

    Raises if a link touches a masked node: the jump across it is unknown.
    """
    d, bad = phase_increments(psi, floor_rel)
    if bad[:-1].any():
        raise ValueError("phase unwrapping crosses a low-density region")
    return np.angle(psi.values[0]) + np.concatenate(([0.0], np.cumsum(d[:-1])))


def madelung_decompose(psi: WaveField, params: PhysParams = PhysParams(),
                       floor_rel: float = 1e-8) -> tuple[DensityField, ScalarField]:
    """rho = |psi|^2 and V = (hbar/m) dS/dx.

    The phase gradient at node i is the mean of the two adjacent link
    increments (each taken modulo 2 pi).  Nodes next to a low-density node
    get V = NaN and are flagged in ``V.mask``.
    """
    d, bad = phase_increments(psi, floor_rel)
    grad = 0.5 * (d + np.roll(d, 1)) / psi.grid.dx
    mask = bad | np.roll(bad, 1)
    V = params.hbar / params.m * grad
    V[mask] = np.nan
    return DensityField(psi.density, psi.grid), ScalarField(V, psi.grid, mask)


def concentration_metric(rho: DensityField, prominence: float = 1e-6) -> float:
    """Mass of the heaviest density basin over the total mass.

    Basins are separated at the minima between local maxima whose
    prominence exceeds ``prominence * max(rho)``.
    """
    r = np.asarray(rho.values, dtype=float)
    grid = rho.grid
    w = grid.weights * grid.dx
    total = float(np.dot(w, r))
    if not total > 0:
        raise ValueError("density has no mass")
    if grid.periodic:
        # start at the global minimum so no basin wraps around
        s = int(np.argmin(r))
        r, w = np.roll(r, -s), np.roll(w, -s)
        padded = np.concatenate(([-np.inf], r, [-np.inf]))
    else:
        padded = np.concatenate(([-np.inf], r, [-np.inf]))
    peaks, _ = find_peaks(padded, prominence=prominence * r.max())
    peaks = peaks - 1
    if peaks.size <= 1:
        return 1.0
    cuts = [p + int(np.argmin(r[p:q + 1])) for p, q in zip(peaks[:-1], peaks[1:])]
    m = w * r
    masses = []
    for a, b in zip([0, *cuts], [*cuts, r.size - 1]):
        # each cut node is shared evenly by its two basins
        inner = float(np.sum(m[a + 1:b]))
        ends = (0.5 if a > 0 else 1.0) * m[a] + (0.5 if b < r.size - 1 else 1.0) * m[b]
        masses.append(inner + ends)
    return max(masses) / total


def packet_variance(psi: WaveField) -> float:
    """Position variance of |psi|^2 (periodic grid treated as an interval)."""
    return variance(DensityField(psi.density, psi.grid))


def free_packet_variance(s0: float, t: float, params: PhysParams = PhysParams()) -> float:
    """s0^2 (1 + (hbar t / 2 m s0^2)^2) for a Gaussian of position spread s0."""
    return s0**2 * (1.0 + (params.hbar * t / (2 * params.m * s0**2)) ** 2)
