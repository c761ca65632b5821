"""Steady-state simulator for a driven resonator-plasmon-vibration network.

Builds the linearized drift/diffusion model of the three standard
topologies, solves the Lyapunov equation for the stationary covariance,
and extracts logarithmic negativity, phonon occupation, EPR-variance
sums, and the closed-form spectral/cooling quantities, with a sweep
engine and CLI on top.
"""

from .errors import ComsimError
from .linalg import (
    StabilityReport,
    integrate_lyapunov_oracle,
    lyapunov_residual,
    solve_lyapunov,
    stability,
)
from .metrics import (
    Covariance,
    duan_sum,
    log_negativity,
    min_symplectic_pt,
    phonon_occupation,
    reduce_modes,
    steady_covariance,
    symplectic_eigenvalues,
)
from .model import (
    LinearModel,
    SteadyAmplitudes,
    SystemParams,
    Topology,
    build_model,
    degenerate_pair_model,
    pump_amplitude,
    pump_power_for_coupling,
    resolve_coupling,
    steady_state,
    thermal_occupation,
)
from .spectra import (
    CoolingRates,
    ResponsePair,
    cooling_rates,
    noise_spectrum,
    redirection_ratio,
    simplified_absorption,
    stokes_response,
)
from .sweep import (
    SweepAxis,
    SweepRecord,
    SweepSpec,
    TraceRecord,
    TwoWgmOptimum,
    run_sweep,
    trace_local_max,
    two_wgm_optimum,
)

__version__ = "0.1.0"

__all__ = [
    "ComsimError",
    "CoolingRates",
    "Covariance",
    "LinearModel",
    "ResponsePair",
    "StabilityReport",
    "SteadyAmplitudes",
    "SweepAxis",
    "SweepRecord",
    "SweepSpec",
    "SystemParams",
    "Topology",
    "TraceRecord",
    "TwoWgmOptimum",
    "build_model",
    "cooling_rates",
    "degenerate_pair_model",
    "duan_sum",
    "integrate_lyapunov_oracle",
    "log_negativity",
    "lyapunov_residual",
    "min_symplectic_pt",
    "noise_spectrum",
    "phonon_occupation",
    "pump_amplitude",
    "pump_power_for_coupling",
    "redirection_ratio",
    "reduce_modes",
    "resolve_coupling",
    "run_sweep",
    "simplified_absorption",
    "solve_lyapunov",
    "stability",
    "steady_covariance",
    "steady_state",
    "stokes_response",
    "sweep",
    "symplectic_eigenvalues",
    "thermal_occupation",
    "trace_local_max",
    "two_wgm_optimum",
]
