"""Steady-state photon statistics of pair-pumped, one-atom and two-photon
micromasers: transit kernels, coarse-grained rate matrices, truncated
linear-system steady states, and independent oracles (detailed balance,
time relaxation, Monte Carlo)."""

__version__ = "0.1.0"

from .backend import default_backend, make_backend
from .gain import (EmissionKernel, build_kernel, kernel_closed_form,
                   kernel_one_atom, kernel_unitary)
from .generator import Bands, Generator, assemble, gain_rates, loss_rates
from .model import (DICKE_PAIR, ONE_ATOM, TWO_PHOTON, ConfigurationError,
                    ModelSpec)
from .oracle import (MonteCarloResult, TrajectoryConfig, monte_carlo,
                     ode_relax, one_atom_detailed_balance,
                     thermal_distribution)
from .sector import (EigenSystem, InvalidSectorError, SectorHamiltonian,
                     build_sector, eigensystem_general, eigensystem_resonant)
from .steady import (Moments, NonConvergenceError, PhotonDistribution,
                     SolverFailure, SweepRow, moments, residual_inf,
                     solve_adaptive, solve_truncated, sweep)

__all__ = [
    "__version__",
    "default_backend", "make_backend",
    "EmissionKernel", "build_kernel", "kernel_closed_form", "kernel_one_atom",
    "kernel_unitary",
    "Bands", "Generator", "assemble", "gain_rates", "loss_rates",
    "DICKE_PAIR", "ONE_ATOM", "TWO_PHOTON", "ConfigurationError", "ModelSpec",
    "MonteCarloResult", "TrajectoryConfig", "monte_carlo", "ode_relax",
    "one_atom_detailed_balance", "thermal_distribution",
    "EigenSystem", "InvalidSectorError", "SectorHamiltonian", "build_sector",
    "eigensystem_general", "eigensystem_resonant",
    "Moments", "NonConvergenceError", "PhotonDistribution", "SolverFailure",
    "SweepRow", "moments", "residual_inf", "solve_adaptive", "solve_truncated",
    "sweep",
]
