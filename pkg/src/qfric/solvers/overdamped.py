"""Conservative flux-form solvers for the overdamped equations.

All of them share  d rho/dt = -d/dx (rho V)  with a face velocity V that
depends on the equation:

* general4 / smoluchowski5 / cubic6: V = f^-1((mu_{i+1} - mu_i)/dx),
  mu = Q + theta ln rho + U;
* quantum_cubic8_*: V = cbrt(hbar^2 (L' L'' + reg L''') / 4 m b3), L = ln rho.

Two integrators are provided: a single explicit Euler step (the ``step_*``
functions) and an implicit BDF1/BDF2 step solved by Newton's method in the
unknown L = ln rho.  The implicit residual is divided by rho so that it only
involves differences of L; after convergence the new density is rebuilt from
the flux divergence, which keeps the mass exact to roundoff.
"""
from __future__ import annotations

import numpy as np
from scipy.ndimage import distance_transform_edt
import scipy.sparse.linalg as spla
from scipy.linalg import solve_banded

from .. import kernels
from ..core import DEFAULT_LOG_FLOOR, NEGATIVE_TOL, DensityField
from ._probe import banded_diagonals, banded_matrix
from .scenario import NumericalError, Scenario, ScenarioError, StabilityError

_FD_STEP = 1e-7
# nodes more than exp(-ACTIVE_DEPTH) below the peak are held during implicit steps
ACTIVE_DEPTH = 46.0
# half bandwidth of the interleaved (L, V) Jacobian
_MIXED_BAND = 3
# relative size of a velocity update beyond which the face is reprojected
_V_TRUST = 1e-2
# absorbing layer for the dispersive reduced cubic quantum law: third-derivative
# damping of strength up to SPONGE_REG on the last SPONGE_WIDTH active nodes
SPONGE_REG = 1.0
SPONGE_WIDTH = 10


class OverdampedOperator:
    """Face velocities and flux divergence of one overdamped scenario."""

    def __init__(self, scenario: Scenario):
        sc = scenario
        self.scenario = sc
        self.grid = sc.grid
        self.periodic = self.grid.periodic
        self.dx = self.grid.dx
        p = sc.params
        self.qcubic = sc.equation.startswith("quantum_cubic8")
        law = sc.friction()
        self.law = law
        b1f, b3f = law.face_coeffs(self.grid)
        self.b1f = np.ascontiguousarray(b1f, dtype=float)
        self.b3f = np.ascontiguousarray(b3f, dtype=float)
        if self.qcubic:
            self.reg = 1.0 if sc.equation.endswith("full") else float(sc.reg)
            self.coef = p.hbar**2 / (4 * p.m * self.b3f)
            self.sponge = None   # per-face third-derivative damping, set per step
        else:
            self.U = np.ascontiguousarray(sc.potential_values(), dtype=float)
            self.qcoef = p.hbar**2 / (2 * p.m) if sc.quantum else 0.0
            self.theta = float(p.theta)

    def log_rho(self, rho: np.ndarray) -> np.ndarray:
        floor = DEFAULT_LOG_FLOOR * float(np.max(rho))
        return np.log(np.maximum(rho, floor))

    def velocity(self, L: np.ndarray) -> np.ndarray:
        if self.qcubic:
            if self.sponge is None:
                return kernels.face_velocity_qcubic(L, self.periodic, self.dx, self.coef, self.reg)
            return np.cbrt(self.drive(L))
        law = self.law
        return kernels.face_velocity_mu(
            L, self.U, self.periodic, self.dx, self.qcoef, self.theta,
            law.code, self.b1f, self.b3f, float(law.amplitude), float(law.g0))

    def rhs(self, rho: np.ndarray) -> np.ndarray:
        """-div(rho V) at the nodes."""
        V = self.velocity(self.log_rho(rho))
        return -kernels.flux_divergence(rho, V, self.periodic, self.dx)

    # -------------------------------------------------------------- implicit

    def drive(self, L: np.ndarray) -> np.ndarray:
        """Face drive: d mu/dx, or the scaled third-order term for the cubic quantum law."""
        if self.qcubic:
            d = kernels.face_drive_qcubic(L, self.periodic, self.dx, self.coef, self.reg)
            if self.sponge is not None:
                d = d + self.coef * self.sponge * _face_third(L, self.periodic, self.dx)
            return d
        return kernels.face_drive_mu(L, self.U, self.periodic, self.dx, self.qcoef, self.theta, False)

    def face_residual(self, L: np.ndarray, V: np.ndarray) -> np.ndarray:
        """Friction balance on faces, written without any root extraction."""
        d = self.drive(L)
        if self.qcubic:
            r = V**3 - d
        elif self.law.kind == "activated":
            r = V + self.law.amplitude * np.sinh(np.clip(d / self.law.g0, -700.0, 700.0))
        else:
            r = (self.b3f * V * V + self.b1f) * V + d
        if not self.periodic:
            r[-1] = V[-1]
        return r

    # -------------------------------------------------------------- implicit
    #
    # Unknowns z = (L_0, V_0, L_1, V_1, ...): log density on nodes and velocity
    # on the face to the right.  Solving for V together with L keeps the
    # system smooth: a cube-root law has infinite slope at zero drive and
    # Newton on V = cbrt(g) diverges there.

    def mixed_residual(self, z, hist, bdt, held=None, held_faces=None, pin=None):
        L, V = z[0::2], z[1::2]
        H1, c1, H2, c2 = hist
        R = np.empty_like(z)
        Rm = kernels.scaled_residual(L, H1, c1, H2, c2, V, self.periodic, self.dx, bdt)
        Rf = self.face_residual(L, V)
        if held is not None:
            Rm[held] = L[held] - (H1 if pin is None else pin)[held]
            Rf[held_faces] = V[held_faces]
        R[0::2] = Rm
        R[1::2] = Rf
        return R

    def _solve(self, z, hist, bdt, R, held, held_faces, pin):
        f = lambda v: self.mixed_residual(v, hist, bdt, held, held_faces, pin)  # noqa: E731
        if self.periodic:
            J = banded_matrix(f, z, True, step=_FD_STEP, f0=R, half=_MIXED_BAND)
            return spla.spsolve(J.tocsc(), -R)
        ab = banded_diagonals(f, z, step=_FD_STEP, f0=R, half=_MIXED_BAND)
        return solve_banded((_MIXED_BAND, _MIXED_BAND), ab, -R, check_finite=False)

    def newton(self, L0, hist, bdt, held=None, pin=None, tol=1e-10, maxit=12):
        """Solve one implicit step by damped Newton.  Returns (L, V, iterations).

        Held nodes are fixed at ``pin`` (default: the first history level).
        """
        n = L0.size
        z = np.empty(2 * n)
        z[0::2] = L0
        z[1::2] = self.velocity(L0)
        held_faces = None
        if held is not None:
            held_faces = held & np.roll(held, -1)
            z[1::2][held_faces] = 0.0
        for it in range(1, maxit + 1):
            R = self.mixed_residual(z, hist, bdt, held, held_faces, pin)
            if not np.all(np.isfinite(R)):
                raise NumericalError("non-finite implicit residual")
            try:
                dz = self._solve(z, hist, bdt, R, held, held_faces, pin)
            except (RuntimeError, np.linalg.LinAlgError) as exc:
                raise NumericalError(f"Jacobian solve failed: {exc}") from exc
            if not np.all(np.isfinite(dz)):
                raise NumericalError("non-finite Newton update")
            dL, dV = dz[0::2], dz[1::2]
            big = np.max(np.abs(dL))
            dvmax = np.max(np.abs(dV))
            # damp the log density node by node; velocities take the full step
            np.clip(dL, -1.0, 1.0, out=dL)
            vscale = np.max(np.abs(z[1::2]))
            wild = np.abs(dV) > np.maximum(np.abs(z[1::2]), _V_TRUST * vscale)
            z += dz
            if wild.any():
                # near V = 0 the linearized law overshoots; put these faces
                # back on the friction branch of the updated density
                Vb = self.velocity(z[0::2])
                if held_faces is not None:
                    Vb[held_faces] = 0.0
                z[1::2][wild] = Vb[wild]
            vscale = np.max(np.abs(z[1::2]))
            if big <= tol and dvmax <= tol * max(vscale, 1e-300):
                return z[0::2].copy(), z[1::2].copy(), it
        raise NumericalError(f"Newton did not converge in {maxit} iterations")


def _face_third(L, periodic, dx):
    n = L.size
    Lp = np.pad(L, 2, mode="wrap" if periodic else "edge")
    d3 = (Lp[4:n + 4] - 3.0 * Lp[3:n + 3] + 3.0 * Lp[2:n + 2] - Lp[1:n + 1]) / dx**3
    if not periodic:
        d3[-1] = 0.0
    return d3


def _sponge(held, periodic):
    """Damping weights on faces within SPONGE_WIDTH nodes of the held tail."""
    n = held.size
    if periodic:
        dist = distance_transform_edt(~np.tile(held, 3))[n:2 * n]
    else:
        dist = distance_transform_edt(~held)
    face = np.minimum(dist, np.roll(dist, -1))
    return SPONGE_REG * np.clip(1.0 - face / SPONGE_WIDTH, 0.0, 1.0) ** 2


def _operator(scenario: Scenario) -> OverdampedOperator:
    cache = getattr(scenario, "_op_cache", None)
    if cache is None:
        cache = OverdampedOperator(scenario)
        object.__setattr__(scenario, "_op_cache", cache)
    return cache


# ---------------------------------------------------------------- stable dt

def _max_speed(scenario: Scenario, rho: np.ndarray | None) -> float:
    if rho is None:
        rho = scenario.initial.values
    op = _operator(scenario)
    return float(np.max(np.abs(op.velocity(op.log_rho(rho)))))


def stable_dt(scenario: Scenario, rho: np.ndarray | None = None, safety: float | None = None) -> float:
    """Explicit time-step estimate times the safety factor (default ``scenario.safety``).

    Bounds combined (minimum taken): diffusion dx^2/(2 D); biharmonic
    dx^4 (4 m b1)/(2 hbar^2); advection dx/|V0|; for cube-root fluxes the
    CFL bound dx/max|V| and dx^(4/3) (b3/E)^(1/3), E being the largest
    grid-scale energy of mu (theta + hbar^2/(2 m dx^2), or hbar^2/(4 m dx^2)
    for the zero-temperature cubic quantum law).
    """
    c = scenario.safety if safety is None else safety
    sc = scenario
    p = sc.params
    dx = sc.grid.dx
    eq = sc.equation
    bounds = [np.inf]

    def diffusive(D):
        if D > 0:
            bounds.append(dx**2 / (2 * D))

    def biharmonic(b1):
        bounds.append(dx**4 * (4 * p.m * b1) / (2 * p.hbar**2))

    if eq == "electron_gas17":
        diffusive(p.hbar**2 / (4 * p.m**2 * p.nu))
    elif eq == "convective14":
        bounds.append(dx / abs(p.V0))
    elif eq == "reaction_diffusion10":
        b1 = float(np.min(sc.friction().node_coeffs(sc.grid.n)[0]))
        diffusive(p.theta / b1)
        biharmonic(b1)
    else:
        law = sc.friction()
        b1n, b3n = law.node_coeffs(sc.grid.n)
        if eq.startswith("quantum_cubic8"):
            E = p.hbar**2 / (4 * p.m * dx**2)
            vmax = _max_speed(sc, rho)
            if vmax > 0:
                bounds.append(dx / vmax)
            bounds.append(dx ** (4 / 3) * (float(np.min(b3n)) / E) ** (1 / 3))
        else:
            E = p.theta + (p.hbar**2 / (2 * p.m * dx**2) if sc.quantum else 0.0)
            kind = law.kind
            if kind == "combined" and np.min(b1n) > 0:
                kind = "linear"
            if kind == "activated":
                # largest mobility df^-1/dg over the current gradients
                vmax = _max_speed(sc, rho)
                gmax = law.g0 * np.arcsinh(vmax / law.amplitude)
                mob = law.amplitude / law.g0 * np.cosh(gmax)
                b1_eff = 1.0 / mob
                diffusive(p.theta / b1_eff)
                if sc.quantum:
                    biharmonic(b1_eff)
            elif kind == "linear":
                b1 = float(np.min(b1n))
                diffusive(p.theta / b1)
                if sc.quantum:
                    biharmonic(b1)
            else:
                vmax = _max_speed(sc, rho)
                if vmax > 0:
                    bounds.append(dx / vmax)
                if E > 0:
                    bounds.append(dx ** (4 / 3) * (float(np.min(b3n)) / E) ** (1 / 3))
    return c * min(bounds)


# ------------------------------------------------------------ explicit steps

def _explicit(rho: DensityField, scenario: Scenario, dt: float | None) -> DensityField:
    if dt is None:
        dt = scenario.dt if scenario.dt is not None else stable_dt(scenario, rho.values)
    limit = stable_dt(scenario, rho.values, safety=1.0)
    if dt > limit * (1 + 1e-12):
        raise StabilityError(f"dt = {dt:.3e} exceeds the stability estimate {limit:.3e}")
    op = _operator(scenario)
    new = rho.values + dt * op.rhs(rho.values)
    if not np.all(np.isfinite(new)):
        raise NumericalError("non-finite density after explicit step")
    if new.min() < -NEGATIVE_TOL:
        raise NumericalError(f"negative density {new.min():.3e}; reduce dt")
    return DensityField(new, rho.grid)


def _require(scenario: Scenario, *equations):
    if scenario.equation not in equations:
        raise ScenarioError(f"equation: expected {' or '.join(equations)}, got {scenario.equation}")


def step_overdamped_general(rho: DensityField, scenario: Scenario, dt: float | None = None) -> DensityField:
    """One explicit flux-form step of d rho/dt = -d/dx[rho f^-1(d mu/dx)]."""
    _require(scenario, "general4")
    return _explicit(rho, scenario, dt)


def step_smoluchowski(rho: DensityField, scenario: Scenario, dt: float | None = None) -> DensityField:
    _require(scenario, "smoluchowski5")
    return _explicit(rho, scenario, dt)


def step_cubic(rho: DensityField, scenario: Scenario, dt: float | None = None) -> DensityField:
    _require(scenario, "cubic6")
    return _explicit(rho, scenario, dt)


def step_quantum_cubic8(rho: DensityField, scenario: Scenario, variant: str | None = None,
                        dt: float | None = None) -> DensityField:
    """Explicit step of the zero-temperature free quantum cubic-friction equation.

    ``variant`` ('full' or 'reduced') must agree with the scenario's equation
    when given.
    """
    _require(scenario, "quantum_cubic8_full", "quantum_cubic8_reduced")
    if variant is not None and not scenario.equation.endswith(variant):
        raise ScenarioError(f"variant: {variant!r} does not match {scenario.equation}")
    return _explicit(rho, scenario, dt)


# ------------------------------------------------------------ implicit steps

def continue_log(L: np.ndarray, ok: np.ndarray, periodic: bool) -> np.ndarray:
    """Fill the nodes where ``ok`` is False by extending L from trusted nodes.

    Extensions keep a non-increasing slope and non-positive curvature (exact
    for Gaussian tails); a gap bounded on both sides takes the larger of the
    two extensions.  A flat floor instead would put a kink into ln rho and
    with it a spurious quantum-potential spike.
    """
    L = np.array(L, dtype=float)
    n = L.size
    if ok.all() or not ok.any():
        return L
    if periodic:
        shift = int(np.argmax(ok))
        return np.roll(continue_log(np.roll(L, -shift), np.roll(ok, -shift), False), shift)

    def extend(edge, direction, count):
        pts = [edge - direction * j for j in range(3)]
        pts = [q for q in pts if 0 <= q < n and ok[q]]
        k = np.arange(1, count + 1)
        if len(pts) < 2:
            return np.full(count, L[edge])
        slope = min(L[pts[0]] - L[pts[1]], 0.0)
        curv = min(L[pts[0]] - 2 * L[pts[1]] + L[pts[2]], 0.0) if len(pts) == 3 else 0.0
        return L[edge] + slope * k + 0.5 * curv * k * (k + 1)

    i = 0
    while i < n:
        if ok[i]:
            i += 1
            continue
        j = i
        while j < n and not ok[j]:
            j += 1
        cands = []
        if i > 0:
            cands.append(extend(i - 1, +1, j - i))
        if j < n:
            cands.append(extend(j, -1, j - i)[::-1])
        L[i:j] = np.maximum.reduce(cands)
        i = j
    return L


def smooth_log(rho: np.ndarray, periodic: bool, floor_rel: float = DEFAULT_LOG_FLOOR) -> np.ndarray:
    """ln rho with nodes below ``floor_rel * max`` continued smoothly."""
    rho = np.asarray(rho, dtype=float)
    top = float(np.max(rho))
    ok = rho >= floor_rel * top
    L = np.full(rho.size, np.log(floor_rel * top))
    L[ok] = np.log(rho[ok])
    return continue_log(L, ok, periodic)


class ImplicitIntegrator:
    """Variable-step BDF1/BDF2 in L = ln rho with exact mass bookkeeping.

    Two states are carried: the log density L (the Newton unknown) and the
    density rebuilt from the converged fluxes, whose total mass is exact to
    roundoff.  Nodes more than ``ACTIVE_DEPTH`` e-folds below the peak are
    held: they keep their value during the solve, fluxes between two held
    nodes vanish, and afterwards they are re-extended from the active region.
    Without this the far tail of a spreading profile (ln rho ~ -1e3 and
    below, where the log changes by hundreds per step at no mass) dominates
    every Newton iteration.
    """

    def __init__(self, scenario: Scenario, rho0: np.ndarray | None = None):
        self.op = _operator(scenario)
        self.order = scenario.bdf_order
        rho0 = scenario.initial.values if rho0 is None else rho0
        self.rho = np.array(rho0, dtype=float)
        self.L = self._relax_tail(smooth_log(self.rho, self.op.periodic))
        self.prev = None      # (rho, L) one step back
        self.prev_dt = None
        self.newton_iters = 0
        self.last_iters = 0
        self._pending = None

    def _active(self, L):
        return L > np.max(L) - ACTIVE_DEPTH

    def _relax_tail(self, L):
        return continue_log(L, self._active(L), self.op.periodic)

    def try_step(self, dt: float) -> np.ndarray:
        """Solve one step of size dt; returns the new density (not yet accepted)."""
        op = self.op
        held = ~self._active(self.L)
        if self.order == 2 and self.prev is not None:
            w = dt / self.prev_dt
            a0 = (1 + w) ** 2 / (1 + 2 * w)
            a1 = w**2 / (1 + 2 * w)
            beta = (1 + w) / (1 + 2 * w)
            hist = (self.L, a0, self.prev[1], -a1)
            C = a0 * self.rho - a1 * self.prev[0]
        else:
            beta = 1.0
            hist = (self.L, 1.0, self.L, 0.0)
            C = self.rho
        damp = op.qcubic and op.reg < SPONGE_REG and held.any()
        op_sponge = _sponge(held, op.periodic) if damp else None
        if op.qcubic:
            op.sponge = op_sponge
        try:
            L, V, its = op.newton(self.L, hist, beta * dt, held if held.any() else None)
        finally:
            if op.qcubic:
                op.sponge = None
        self.newton_iters += its
        self.last_iters = its
        new = C - beta * dt * kernels.flux_divergence(np.exp(L), V, op.periodic, op.dx)
        if not np.all(np.isfinite(new)):
            raise NumericalError("non-finite density after implicit step")
        if new.min() < -NEGATIVE_TOL:
            raise NumericalError(f"negative density {new.min():.3e}")
        self._pending = (new, self._relax_tail(L), dt)
        return new

    def accept(self):
        new, L, dt = self._pending
        self.prev = (self.rho, self.L)
        self.prev_dt = dt
        self.rho, self.L = new, L
        self._pending = None

    def reset_history(self):
        self.prev = None
        self.prev_dt = None


def step_implicit(rho: DensityField, scenario: Scenario, dt: float) -> DensityField:
    """One backward-Euler step."""
    if scenario.equation not in ("general4", "smoluchowski5", "cubic6",
                                 "quantum_cubic8_full", "quantum_cubic8_reduced"):
        raise ScenarioError(f"equation: {scenario.equation} has no nonlinear implicit step")
    integ = ImplicitIntegrator(scenario, rho.values)
    return DensityField(integ.try_step(dt), rho.grid)
