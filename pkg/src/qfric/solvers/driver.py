"""Time loop shared by all equations."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..analysis import FAMILY_VARIANCE, variance
from ..core import DensityField, integrate
from .linear import coefficients, default_linear_dt, linear_step
from .overdamped import ImplicitIntegrator, _explicit, stable_dt
from .scenario import LINEAR, NumericalError, Scenario

MAX_HALVINGS = 20
# step-size controller for the implicit integrator
_GROW, _SHRINK = 1.5, 0.5
# Newton iteration count above which the step stops growing
_HARD_NEWTON = 6


@dataclass
class TimeSeriesRecord:
    t: float
    mass: float
    variance: float
    sigma2: float
    rho: np.ndarray | None = None


@dataclass
class RunStats:
    steps: int = 0
    rejected: int = 0
    newton_iters: int = 0


def _record(t, values, sc: Scenario) -> TimeSeriesRecord:
    rho = DensityField(np.maximum(values, 0.0), sc.grid)
    var = variance(rho)
    return TimeSeriesRecord(
        t=float(t), mass=integrate(values, sc.grid), variance=var,
        sigma2=var / FAMILY_VARIANCE[sc.family],
        rho=values.copy() if sc.keep_snapshots else None)


def _targets(sc: Scenario):
    if sc.record_times is None:
        return [sc.t_end]
    out = [t for t in sc.record_times if t > 0]
    if not out or out[-1] < sc.t_end:
        out.append(sc.t_end)
    return out


def _land(t, dt, target):
    # avoid slivers: take the remainder, or split it in two
    rem = target - t
    if rem <= dt * (1 + 1e-12):
        return rem, True
    if rem < 2 * dt:
        return 0.5 * rem, False
    return dt, False


def run(scenario: Scenario, stats: RunStats | None = None) -> list[TimeSeriesRecord]:
    """Integrate to t_end and return the records (always including t = 0)."""
    sc = scenario
    stats = stats if stats is not None else RunStats()
    rho = np.array(sc.initial.values, dtype=float)
    records = [_record(0.0, rho, sc)]
    if sc.t_end == 0:
        return records
    if sc.equation in LINEAR:
        stepper = _LinearLoop(sc)
    elif sc.scheme == "implicit":
        stepper = _ImplicitLoop(sc)
    else:
        stepper = _ExplicitLoop(sc)

    t = 0.0
    cadence = sc.record_times is None
    for target in _targets(sc):
        while t < target:
            rho, dt_taken, landed = stepper.advance(rho, t, target, stats)
            t = target if landed else t + dt_taken
            stats.steps += 1
            if not np.all(np.isfinite(rho)):
                raise NumericalError(f"non-finite density at t = {t:.6g}")
            if cadence and stats.steps % sc.every == 0 and t < target:
                records.append(_record(t, rho, sc))
        if records[-1].t < t:
            records.append(_record(t, rho, sc))
    return records


class _ExplicitLoop:
    def __init__(self, sc):
        self.sc = sc

    def advance(self, rho, t, target, stats):
        sc = self.sc
        dt = sc.dt if sc.dt is not None else stable_dt(sc, rho)
        dt, landed = _land(t, dt, target)
        field = DensityField(np.maximum(rho, 0.0), sc.grid) if rho.min() < 0 else DensityField(rho, sc.grid)
        for _ in range(MAX_HALVINGS + 1):
            try:
                out = _explicit(field, sc, dt).values
                return out, dt, landed
            except NumericalError:
                stats.rejected += 1
                dt *= 0.5
                landed = False
        raise NumericalError(f"step rejected after {MAX_HALVINGS} halvings at t = {t:.6g}")


class _ImplicitLoop:
    def __init__(self, sc):
        self.sc = sc
        self.integ = ImplicitIntegrator(sc)
        self.dt = sc.dt if sc.dt is not None else min(stable_dt(sc), sc.t_end / 100)
        self.adaptive = sc.dt is None

    def advance(self, rho, t, target, stats):
        sc = self.sc
        integ = self.integ
        dt = self.dt
        if integ.prev_dt is not None:
            dt = min(dt, _GROW * integ.prev_dt)
        dt, landed = _land(t, dt, target)
        for _ in range(MAX_HALVINGS + 1):
            try:
                out = integ.try_step(dt)
                break
            except NumericalError:
                stats.rejected += 1
                dt *= 0.5
                landed = False
                self.dt = dt
                integ.reset_history()
        else:
            raise NumericalError(f"implicit step failed after {MAX_HALVINGS} halvings at t = {t:.6g}")
        stats.newton_iters = integ.newton_iters
        if self.adaptive:
            change = float(np.max(np.abs(out - rho)) / np.max(rho))
            factor = _GROW if change == 0 else 0.9 * sc.change_target / change
            if integ.last_iters > _HARD_NEWTON:
                factor = min(factor, 1.0)
            proposal = dt * min(_GROW, max(_SHRINK, factor))
            # a short landing step does not shrink the running step size
            self.dt = max(proposal, self.dt) if landed and factor >= 1 else proposal
        integ.accept()
        return out, dt, landed


class _LinearLoop:
    def __init__(self, sc):
        self.sc = sc
        self.c = coefficients(sc)
        self.theta = 0.0 if sc.scheme == "explicit" else 0.5
        self.dt = sc.dt if sc.dt is not None else default_linear_dt(sc)
        if self.theta == 0.0:
            limit = stable_dt(sc, safety=1.0)
            if self.dt > limit * (1 + 1e-12):
                from .scenario import StabilityError
                raise StabilityError(f"dt = {self.dt:.3e} exceeds the stability estimate {limit:.3e}")

    def advance(self, rho, t, target, stats):
        # uniform steps per record interval keep the factorization cache small
        rem = target - t
        nsteps = max(1, math.ceil(rem / self.dt - 1e-9))
        dt = rem / nsteps
        return linear_step(rho, self.sc.grid, self.c, dt, self.theta), dt, nsteps == 1
