"""1-D dissipative Madelung hydrodynamics with nonlinear friction.

Subpackages and modules:

- ``core``: grids, fields, stencils, quadrature
- ``physics``: quantum potential and pressure, chemical potential, friction laws
- ``specfun``: gamma, Gauss hypergeometric function, quartic-potential width law
- ``solvers``: overdamped and linearized time integration
- ``oracles``: closed-form dispersion laws and profiles, ODE oracle
- ``analysis``: moments, profile scales, local exponents, error norms
- ``nls``: split-step nonlinear Schroedinger integrator and Madelung map
- ``cli``: command-line front end
"""
from .core import DensityField, Grid1D, PhysParams, ScalarField
from .kernels import BACKEND
from .physics import FrictionLaw

__version__ = "0.1.0"

__all__ = ["BACKEND", "DensityField", "FrictionLaw", "Grid1D", "PhysParams", "ScalarField", "__version__"]
