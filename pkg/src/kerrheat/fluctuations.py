"""Quadratic fluctuation theory about a semiclassical working point.

Expanding the rotating-frame generator to second order in delta_a =
a - alpha gives

    H_2 = A*delta_a'*delta_a + (lambda*delta_a'^2 + c.c.),
    lambda = (K/2 + K'*n) * alpha^2,

with A from steadystate.drift_coefficients.  A symplectic (Bogoliubov)
mix  a_tilde = mu*delta_a + nu*delta_a'  with  mu^2 - |nu|^2 = 1
diagonalizes H_2 into  delta_tilde * a_tilde' * a_tilde  where

    tanh(2r) = |C|/|A|,   C = (K + 2K'n)*n,
    delta_tilde = sign(A)*sqrt(A^2 - C^2) = sign(A)*sqrt(B).

Zero-temperature damping of the bare mode then feeds the dressed mode an
effective thermal occupation <n_tilde> = |nu|^2 = sinh^2(r): quantum
heating.  The dressed mode sits at lab frequency
omega_c_tilde = omega_p + delta_tilde.

The squeezing phase follows the steady-state phase theta_c = arg(alpha):
theta = theta_c when sign(delta_tilde) matches the sign of the effective
Kerr constant K + 2K'n, and theta_c + pi/2 otherwise.  (Only |nu| enters
scalar observables; the phase matters when building displaced-frame
operators.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.constants import hbar, k as k_B

from .errors import ContractError, LinearizationError, NoBistabilityError
from .model import DriveParams, ResonatorParams, detuning, omega_p_for_reduced_detuning, power_to_amplitude
from .steadystate import (
    Branch,
    SteadyStateSolution,
    bifurcation_thresholds,
    drift_coefficients,
    solve_steady_states,
)

TEFF_CONVENTIONS = ("dressed-lab", "quasienergy")


@dataclass(frozen=True)
class LinearizedMode:
    A: float              # rad/s
    B: float              # (rad/s)^2
    delta_tilde: float    # rad/s, signed dressed detuning from the pump
    omega_c_tilde: float  # rad/s, dressed mode lab frequency
    r: float              # squeezing magnitude
    theta: float          # squeezing phase (rad)
    mu: float
    nu: complex
    n_tilde: float        # dressed-mode thermal occupation |nu|^2
    T_eff: float          # kelvin, dressed-lab convention
    # context carried along for downstream spectroscopy/oracle use
    alpha: complex
    n: float
    kappa: float
    omega_c: float
    omega_p: float


def linearize(
    res: ResonatorParams, drive: DriveParams, solution: SteadyStateSolution
) -> LinearizedMode:
    """Bogoliubov mode about a stable steady state.

    Raises LinearizationError when B <= 0 (within 1e-10 of A^2 counts as
    zero): there the rotating-wave thermal picture breaks down even
    though the point itself may still be dynamically stable.
    """
    if not solution.stable:
        raise ContractError("linearize requires a stable steady state")
    n = solution.n
    A, C, B = drift_coefficients(res, drive, n)
    if B <= 1e-10 * A * A:
        raise LinearizationError(
            f"A^2 - C^2 = {B:.3e} (rad/s)^2 is not positive: no rotating dressed mode here"
        )
    delta_tilde = math.copysign(math.sqrt(B), A)
    t = abs(C) / abs(A)
    r = 0.5 * math.atanh(t)
    s = math.sinh(r)
    mu = math.sqrt(1.0 + s * s)
    theta_c = np.angle(solution.alpha)
    k_eff = res.K + 2.0 * res.K_prime * n
    if k_eff == 0.0 or math.copysign(1.0, delta_tilde) == math.copysign(1.0, k_eff):
        theta = theta_c
    else:
        theta = theta_c + 0.5 * math.pi
    nu = np.exp(2j * theta) * s
    n_tilde = s * s
    omega_c_tilde = drive.omega_p + delta_tilde
    mode = LinearizedMode(
        A=A, B=B, delta_tilde=delta_tilde, omega_c_tilde=omega_c_tilde,
        r=r, theta=theta, mu=mu, nu=nu, n_tilde=n_tilde, T_eff=0.0,
        alpha=solution.alpha, n=n, kappa=res.kappa,
        omega_c=res.omega_c, omega_p=drive.omega_p,
    )
    return replace(mode, T_eff=effective_temperature(mode))


def effective_temperature(mode: LinearizedMode, convention: str = "dressed-lab") -> float:
    """Temperature assigning Bose occupation n_tilde to a reference
    frequency: the dressed lab frequency omega_c_tilde ("dressed-lab",
    default) or the quasienergy spacing |delta_tilde| ("quasienergy").

    The two differ by orders of magnitude for microwave resonators;
    every emitted data file records which one was used.
    """
    if convention not in TEFF_CONVENTIONS:
        raise ContractError(
            f"unknown T_eff convention {convention!r}; pick one of {TEFF_CONVENTIONS}"
        )
    if mode.n_tilde <= 0.0:
        return 0.0
    omega_ref = mode.omega_c_tilde if convention == "dressed-lab" else abs(mode.delta_tilde)
    return hbar * omega_ref / (k_B * math.log1p(1.0 / mode.n_tilde))


@dataclass(frozen=True)
class HeatingPoint:
    p_watts: float
    p_over_pplus: float   # NaN when no bistable window exists at this Omega
    branch: Branch
    n: float
    delta_tilde: float    # rad/s
    n_tilde: float
    t_eff: float          # kelvin
    t_eff_convention: str


def heating_sweep(
    res: ResonatorParams,
    omega_reduced: float,
    power_grid_watts,
    branch: Branch | str,
    teff_convention: str = "dressed-lab",
) -> list[HeatingPoint]:
    """Dressed-mode occupation and effective temperature along a pump
    power ramp at fixed reduced detuning, on one branch.

    Grid points where the requested branch does not exist (or where the
    linearization fails right at a fold) are skipped; valid points come
    back in grid order.
    """
    branch = Branch(branch)
    if branch is Branch.UNSTABLE:
        raise ContractError("heating_sweep needs a stable branch (L or H)")
    power_grid_watts = np.asarray(power_grid_watts, dtype=float)
    if np.any(np.diff(power_grid_watts) <= 0):
        raise ContractError("power grid must be strictly ascending")
    omega_p = omega_p_for_reduced_detuning(res, omega_reduced)
    try:
        _, p_plus = bifurcation_thresholds(res, omega_reduced)
    except NoBistabilityError:
        p_plus = math.nan
    rows = []
    for p in power_grid_watts:
        drive = DriveParams(
            omega_p=omega_p, epsilon_p=power_to_amplitude(res, omega_p, p)
        )
        sols = [s for s in solve_steady_states(res, drive) if s.branch is branch]
        if not sols:
            continue
        try:
            mode = linearize(res, drive, sols[0])
        except LinearizationError:
            continue
        rows.append(
            HeatingPoint(
                p_watts=float(p),
                p_over_pplus=float(p / p_plus) if math.isfinite(p_plus) else math.nan,
                branch=branch,
                n=sols[0].n,
                delta_tilde=mode.delta_tilde,
                n_tilde=mode.n_tilde,
                t_eff=effective_temperature(mode, teff_convention),
                t_eff_convention=teff_convention,
            )
        )
    return rows
