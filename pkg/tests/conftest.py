import numpy as np
import pytest

from kerrheat.model import (
    TWOPI,
    DriveParams,
    QubitParams,
    ResonatorParams,
    omega_p_for_reduced_detuning,
    power_to_amplitude,
)
from kerrheat.steadystate import Branch, bifurcation_thresholds, solve_steady_states


@pytest.fixture(scope="session")
def res_scaled():
    """Sample-A anharmonicity ratios in kappa = 1 units."""
    return ResonatorParams(omega_c=1000.0, K=-0.0625, K_prime=-1.25e-4, kappa=1.0)


@pytest.fixture(scope="session")
def res_physical():
    return ResonatorParams(
        omega_c=TWOPI * 6.4535e9,
        K=TWOPI * -625e3,
        K_prime=TWOPI * -1.25e3,
        kappa=TWOPI * 10e6,
    )


@pytest.fixture(scope="session")
def qubit_physical():
    return QubitParams(omega_ge=TWOPI * 5.718e9, g0=TWOPI * 44e6)


def drive_at(res, omega_reduced, p_over_pplus):
    """Drive tuned relative to the upper bistability threshold."""
    omega_p = omega_p_for_reduced_detuning(res, omega_reduced)
    _, p_plus = bifurcation_thresholds(res, omega_reduced)
    eps = power_to_amplitude(res, omega_p, p_over_pplus * p_plus)
    return DriveParams(omega_p=omega_p, epsilon_p=eps)


def branch_solution(res, drive, branch):
    sols = [s for s in solve_steady_states(res, drive) if s.branch is branch]
    assert sols, f"no {branch} solution at this drive"
    return sols[0]


def h_branch_point(res, omega_reduced, p_over_pplus):
    drive = drive_at(res, omega_reduced, p_over_pplus)
    return drive, branch_solution(res, drive, Branch.H)


def l_branch_point(res, omega_reduced, p_over_pplus):
    drive = drive_at(res, omega_reduced, p_over_pplus)
    return drive, branch_solution(res, drive, Branch.L)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20120814)
