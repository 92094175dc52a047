"""Time integration of the overdamped and linearized equations."""
from .driver import RunStats, TimeSeriesRecord, run
from .linear import (
    SpectralState,
    evolve_spectral_conv,
    evolve_spectral_rd,
    linear_step,
    phase_velocity,
    step_convective14,
    step_electron_gas17,
    step_reaction_diffusion,
)
from .overdamped import (
    ImplicitIntegrator,
    OverdampedOperator,
    stable_dt,
    step_cubic,
    step_implicit,
    step_overdamped_general,
    step_quantum_cubic8,
    step_smoluchowski,
)
from .scenario import (
    DEFAULT_EQ8_REG,
    EQUATIONS,
    NumericalError,
    Scenario,
    ScenarioError,
    StabilityError,
)

__all__ = [
    "DEFAULT_EQ8_REG", "EQUATIONS", "ImplicitIntegrator", "NumericalError",
    "OverdampedOperator", "RunStats", "Scenario", "ScenarioError", "SpectralState",
    "StabilityError", "TimeSeriesRecord", "evolve_spectral_conv", "evolve_spectral_rd",
    "linear_step", "phase_velocity", "run", "stable_dt", "step_convective14", "step_cubic",
    "step_electron_gas17", "step_implicit", "step_overdamped_general", "step_quantum_cubic8",
    "step_reaction_diffusion", "step_smoluchowski",
]
