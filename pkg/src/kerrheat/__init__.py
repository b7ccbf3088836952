"""Pumped Kerr nonlinear resonator toolkit: semiclassical bistability,
quantum heating of the dressed mode, brute-force Lindblad oracles, and
qubit sideband thermometry."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    AmbiguityError,
    ConfigError,
    ContractError,
    ConvergenceError,
    DomainError,
    FitError,
    KerrheatError,
    LinearizationError,
    NoBistabilityError,
    SolverError,
    TruncationError,
)
from .model import (  # noqa: F401
    DriveParams,
    QubitParams,
    ResonatorParams,
    amplitude_to_power,
    critical_power,
    detuning,
    omega_p_for_reduced_detuning,
    power_to_amplitude,
    reduced_detuning,
)
from .steadystate import (  # noqa: F401
    BistabilityDiagram,
    Branch,
    Region,
    SteadyStateSolution,
    bifurcation_thresholds,
    classify_stability,
    photon_number_roots,
    solve_steady_states,
    stability_diagram,
)
from .fluctuations import (  # noqa: F401
    HeatingPoint,
    LinearizedMode,
    effective_temperature,
    heating_sweep,
    linearize,
)
