"""Flat-surface solutions of a multi-layer tumour model with replication delay.

Submodules
----------
hyperbolics      overflow-safe kernels and integration identities
stationary       undelayed closed forms and the delayed fixed-point solver
tau_expansion    first-order-in-delay corrections to the stationary state
spectrum         mode growth rates, thresholds and the instability threshold mu_*
first_order_mode mode profiles and the first-order amplitude equation
evolution        mode trajectories, decay certificates and surface synthesis
cli              command-line front end
"""
from .errors import ModelError, NumericalError, ValidationError
from .spectrum import ModeIndex, growth_rate_h, mu_star
from .stationary import ModelParams, solve_rho_s, solve_stationary
from .tau_expansion import rho_star_1

__all__ = [
    "ModelError", "NumericalError", "ValidationError", "ModeIndex", "growth_rate_h",
    "mu_star", "ModelParams", "solve_rho_s", "solve_stationary", "rho_star_1",
]
