"""Scenario description and per-equation validation."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..core import DensityField, PhysParams, ScalarField, integrate
from ..physics import FrictionLaw

EQUATIONS = (
    "general4",
    "smoluchowski5",
    "cubic6",
    "quantum_cubic8_full",
    "quantum_cubic8_reduced",
    "reaction_diffusion10",
    "convective14",
    "electron_gas17",
)
OVERDAMPED = EQUATIONS[:5]
LINEAR = EQUATIONS[5:]
POTENTIALS = ("none", "quartic", "tabulated")
SCHEMES = ("explicit", "implicit")
FAMILIES = ("gaussian", "quartic", "abs_cubic")

# weight of the third-derivative term kept in the reduced cubic quantum
# variant (0 drops it entirely)
DEFAULT_EQ8_REG = 0.0

_DEFAULT_FAMILY = {
    "cubic6": "quartic",
    "quantum_cubic8_full": "abs_cubic",
    "quantum_cubic8_reduced": "abs_cubic",
}


class ScenarioError(ValueError):
    """Invalid scenario; the message names the offending field."""


class StabilityError(RuntimeError):
    """Requested explicit time step exceeds the stability estimate."""


class NumericalError(RuntimeError):
    """Non-finite values, lost positivity or failed nonlinear solves."""


@dataclass
class Scenario:
    """Everything needed to reproduce one run.

    ``dt=None`` selects the automatic policy with safety factor ``safety``.
    Output happens every ``every`` steps, or exactly at ``record_times`` when
    given.  ``quantum=False`` removes the Bohm potential (classical mode).
    """

    equation: str
    initial: DensityField
    t_end: float
    params: PhysParams = field(default_factory=PhysParams)
    law: FrictionLaw | None = None
    potential: str = "none"
    U_table: ScalarField | None = None
    dt: float | None = None
    safety: float = 0.4
    every: int = 1
    record_times: tuple | None = None
    quantum: bool = True
    scheme: str = "explicit"
    reg: float = DEFAULT_EQ8_REG
    profile_family: str | None = None
    keep_snapshots: bool = False
    change_target: float = 0.05
    bdf_order: int = 2

    def __post_init__(self):
        self.validate()

    @property
    def grid(self):
        return self.initial.grid

    @property
    def family(self) -> str:
        return self.profile_family or _DEFAULT_FAMILY.get(self.equation, "gaussian")

    def potential_values(self) -> np.ndarray:
        if self.potential == "none":
            return np.zeros(self.grid.n)
        if self.potential == "quartic":
            return 0.25 * self.params.K * self.grid.x**4
        return np.asarray(self.U_table.values, dtype=float)

    def friction(self) -> FrictionLaw:
        """Friction law implied by the equation (the explicit law for general4)."""
        eq = self.equation
        if eq == "general4":
            return self.law
        if eq in ("smoluchowski5", "reaction_diffusion10"):
            b1 = self.law.b1 if self.law is not None else 0.0
            return FrictionLaw("linear", b1=b1, b1_x=None if self.law is None else self.law.b1_x)
        if eq.startswith(("cubic6", "quantum_cubic8")):
            b3 = self.law.b3 if self.law is not None else 0.0
            return FrictionLaw("cubic", b3=b3, b3_x=None if self.law is None else self.law.b3_x)
        return self.law

    def validate(self):
        eq = self.equation
        if eq not in EQUATIONS:
            raise ScenarioError(f"equation: unknown {eq!r}; expected one of {EQUATIONS}")
        if not isinstance(self.initial, DensityField):
            raise ScenarioError("initial: must be a DensityField")
        if not (np.isfinite(self.t_end) and self.t_end >= 0):
            raise ScenarioError(f"t_end: must be >= 0, got {self.t_end}")
        if self.dt is not None and not self.dt > 0:
            raise ScenarioError(f"dt: must be > 0, got {self.dt}")
        if not 0 < self.safety <= 1:
            raise ScenarioError(f"safety: must lie in (0, 1], got {self.safety}")
        if int(self.every) != self.every or self.every < 1:
            raise ScenarioError(f"every: must be an integer >= 1, got {self.every}")
        if self.potential not in POTENTIALS:
            raise ScenarioError(f"potential: expected one of {POTENTIALS}, got {self.potential!r}")
        if self.potential == "tabulated":
            if self.U_table is None or self.U_table.values.shape != (self.grid.n,):
                raise ScenarioError("U_table: tabulated potential must match the grid")
        if self.scheme not in SCHEMES:
            raise ScenarioError(f"scheme: expected one of {SCHEMES}, got {self.scheme!r}")
        if self.profile_family is not None and self.profile_family not in FAMILIES:
            raise ScenarioError(f"profile_family: expected one of {FAMILIES}")
        if self.bdf_order not in (1, 2):
            raise ScenarioError("bdf_order: must be 1 or 2")
        if not self.reg >= 0:
            raise ScenarioError("reg: must be >= 0")
        if self.record_times is not None:
            rt = np.asarray(self.record_times, dtype=float)
            if rt.ndim != 1 or np.any(np.diff(rt) <= 0) or np.any(rt < 0) or np.any(rt > self.t_end):
                raise ScenarioError("record_times: must be strictly increasing within [0, t_end]")
            self.record_times = tuple(float(v) for v in rt)

        p = self.params
        law = self.law
        b1 = 0.0 if law is None else law.b1
        b3 = 0.0 if law is None else law.b3
        if eq == "general4" and law is None:
            raise ScenarioError("law: general4 needs a friction law")
        if eq in ("smoluchowski5", "reaction_diffusion10"):
            ok = law is not None and (np.all(law.b1_x > 0) if law.b1_x is not None else b1 > 0)
            if not ok:
                raise ScenarioError(f"b1: {eq} requires b1 > 0")
        if eq in ("cubic6", "quantum_cubic8_full", "quantum_cubic8_reduced"):
            ok = law is not None and (np.all(law.b3_x > 0) if law.b3_x is not None else b3 > 0)
            if not ok:
                raise ScenarioError(f"b3: {eq} requires b3 > 0")
        if eq.startswith("quantum_cubic8"):
            if p.theta != 0:
                raise ScenarioError(f"theta: {eq} is a zero-temperature law (theta must be 0)")
            if self.potential != "none":
                raise ScenarioError(f"potential: {eq} describes a free particle (potential must be none)")
        if eq == "convective14" and p.V0 == 0:
            raise ScenarioError("V0: convective14 requires V0 != 0")
        if eq in OVERDAMPED:
            mass = integrate(self.initial)
            if abs(mass - 1) > 1e-6:
                raise ScenarioError(f"initial: density must be normalized (mass {mass:.9g})")
