"""Semiclassical steady states of the pumped Kerr resonator.

The mean-field amplitude obeys

    (Delta_p + K*n + K'*n^2 - i*kappa/2) * alpha = -i * epsilon_p,

with n = |alpha|^2, so the moduli satisfy a quintic in n (a cubic when
K' = 0).  All root finding here is done on that polynomial with every
rate divided by kappa, which keeps the coefficients O(1) across the
physically relevant parameter space.

Stability comes from the linearized drift about each root: writing the
quadratic expansion coefficients

    A = Delta_p + 2*K*n + 3*K'*n^2      (detuning of fluctuations)
    C = (K + 2*K'*n) * n                (parametric coupling strength)
    B = A^2 - C^2,

the drift eigenvalues are -kappa/2 +- sqrt(-B).  A root is stable when
B > 0 (underdamped rotation) or when B < 0 with sqrt(-B) < kappa/2.
Fold (saddle-node) points sit exactly at B = -kappa^2/4.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.constants import hbar

from .errors import ContractError, NoBistabilityError
from .model import (
    DriveParams,
    ResonatorParams,
    detuning,
    omega_p_for_reduced_detuning,
)

RESIDUAL_TOL = 1e-9   # times max(epsilon_p, kappa)
DEDUP_RTOL = 1e-8


class Branch(str, Enum):
    L = "L"
    H = "H"
    UNSTABLE = "UNSTABLE"


class Region(str, Enum):
    L = "L"
    H = "H"
    B = "B"


@dataclass(frozen=True)
class SteadyStateSolution:
    alpha: complex
    n: float
    stable: bool
    branch: Branch


@dataclass(frozen=True)
class BistabilityDiagram:
    omega_axis: np.ndarray   # reduced detuning values
    power_axis: np.ndarray   # P/P_c values
    region: np.ndarray       # shape (len(omega_axis), len(power_axis)), Region values
    p_plus: np.ndarray       # P_+(Omega)/P_c, NaN where no window
    p_minus: np.ndarray      # P_-(Omega)/P_c, NaN where no window


def _scaled(res: ResonatorParams, drive: DriveParams):
    """(d, k, k2, e): detuning, Kerr constants and amplitude over kappa."""
    kap = res.kappa
    return (detuning(res, drive) / kap, res.K / kap, res.K_prime / kap,
            drive.epsilon_p / kap)


def _photon_poly(d: float, k: float, k2: float, e: float) -> np.ndarray:
    """Ascending coefficients of n*((d + k*n + k2*n^2)^2 + 1/4) - e^2."""
    f = np.array([d, k, k2])
    body = npoly.polymul(f, f)
    body[0] += 0.25
    poly = npoly.polymulx(body)
    poly[0] -= e * e
    # Strip trailing coefficients that are zero or far below the coefficient
    # scale (underflow-level Kerr constants); they only move roots at
    # astronomically large n and otherwise poison the companion balancing.
    scale = float(np.max(np.abs(poly)))
    keep = poly.size
    while keep > 1 and abs(poly[keep - 1]) <= 1e-16 * scale:
        keep -= 1
    return poly[:keep]

def _g_and_dg(n, d, k, k2, e):
    f = d + n * (k + n * k2)
    df = k + 2.0 * k2 * n
    g = n * (f * f + 0.25) - e * e
    dg = f * f + 0.25 + 2.0 * n * f * df
    return g, dg


def _polish(n: float, d: float, k: float, k2: float, e: float) -> float:
    for _ in range(12):
        g, dg = _g_and_dg(n, d, k, k2, e)
        if dg == 0.0:
            break
        step = g / dg
        n_new = n - step
        if n_new < 0.0:
            n_new = 0.5 * n
        if abs(n_new - n) <= 1e-15 * (1.0 + abs(n)):
            return n_new
        n = n_new
    return n


def photon_number_roots(res: ResonatorParams, drive: DriveParams) -> list[float]:
    """All real non-negative photon-number roots, ascending, deduplicated
    at relative tolerance 1e-8."""
    d, k, k2, e = _scaled(res, drive)
    poly = _photon_poly(d, k, k2, e)
    if poly.size <= 1:
        return [0.0]
    raw = npoly.polyroots(poly)
    roots = []
    for z in raw:
        if abs(z.imag) > 1e-7 * (1.0 + abs(z.real)):
            continue
        n = z.real
        if n < -1e-10:
            continue
        n = _polish(max(n, 0.0), d, k, k2, e)
        if n >= 0.0:
            roots.append(n)
    roots.sort()
    merged: list[float] = []
    for n in roots:
        if merged and abs(n - merged[-1]) <= DEDUP_RTOL * max(1.0, abs(n)):
            # keep whichever satisfies the polynomial best
            g_old = abs(_g_and_dg(merged[-1], d, k, k2, e)[0])
            g_new = abs(_g_and_dg(n, d, k, k2, e)[0])
            if g_new < g_old:
                merged[-1] = n
        else:
            merged.append(n)
    return merged


def steady_residual(res: ResonatorParams, drive: DriveParams, alpha: complex) -> float:
    """|(Delta_p + K*n + K'*n^2 - i*kappa/2)*alpha + i*epsilon_p| in 1/s,
    with n recomputed from alpha."""
    n = abs(alpha) ** 2
    f = detuning(res, drive) + res.K * n + res.K_prime * n * n
    return abs((f - 0.5j * res.kappa) * alpha + 1j * drive.epsilon_p)


def drift_coefficients(res: ResonatorParams, drive: DriveParams, n: float):
    """(A, C, B) of the linearized drift about a working point with
    photon number n.  C carries the sign of the effective Kerr constant."""
    A = detuning(res, drive) + 2.0 * res.K * n + 3.0 * res.K_prime * n * n
    C = (res.K + 2.0 * res.K_prime * n) * n
    return A, C, A * A - C * C


def _is_stable(res: ResonatorParams, B: float) -> bool:
    # Drift eigenvalues are -kappa/2 +- sqrt(-B): decay wins for B >= 0
    # (oscillatory or critically damped) and for sqrt(-B) < kappa/2.
    if B >= 0.0:
        return True
    return bool(np.sqrt(-B) < 0.5 * res.kappa)


def classify_stability(res: ResonatorParams, drive: DriveParams, alpha: complex) -> bool:
    """Stability of a steady-state amplitude from the drift eigenvalues
    -kappa/2 +- sqrt(-B).  Raises if alpha is not actually a steady state."""
    tol = RESIDUAL_TOL * max(drive.epsilon_p, res.kappa)
    r = steady_residual(res, drive, alpha)
    if r > tol:
        raise ContractError(
            f"alpha is not a steady state: residual {r:.3e} exceeds {tol:.3e}"
        )
    _, _, B = drift_coefficients(res, drive, abs(alpha) ** 2)
    return _is_stable(res, B)


def _amplitude_for_root(res: ResonatorParams, drive: DriveParams, n: float) -> complex:
    f = detuning(res, drive) + res.K * n + res.K_prime * n * n
    return -1j * drive.epsilon_p / (f - 0.5j * res.kappa)


def turning_points(res: ResonatorParams, drive_or_omega_p) -> list[tuple[float, float]]:
    """Local extrema of the drive strength seen as a function of photon
    number: points where d(epsilon_p^2)/dn = 0 with n > 0.

    Returns (n, epsilon_p^2) pairs sorted by n, epsilon_p^2 in (1/s)^2.
    These are the fold positions bounding any multi-root power window.
    """
    omega_p = getattr(drive_or_omega_p, "omega_p", drive_or_omega_p)
    kap = res.kappa
    d = (res.omega_c - omega_p) / kap
    k = res.K / kap
    k2 = res.K_prime / kap
    poly = _photon_poly(d, k, k2, 0.0)
    dpoly = npoly.polyder(poly)
    out = []
    if dpoly.size > 1:
        for z in npoly.polyroots(dpoly):
            # A degenerate double fold (pure Kerr at the critical detuning)
            # splits into a conjugate pair with imag ~ sqrt(eps_machine); keep
            # its real projection, so the pinched window is still two folds.
            if abs(z.imag) > 1e-5 * (1.0 + abs(z.real)) or z.real <= 0.0:
                continue
            n = z.real
            e2 = npoly.polyval(n, poly)
            if e2 > 0.0:
                out.append((n, e2 * kap * kap))
    out.sort()
    return out


def _label_single(res, drive, n: float) -> Branch:
    """Branch name for an isolated stable root, continuous with the
    bistable window: below the low fold it is L, above the high fold H."""
    folds = turning_points(res, drive)
    if len(folds) < 2:
        return Branch.L
    n_lo = folds[0][0]
    n_hi = folds[-1][0]
    if n <= n_lo:
        return Branch.L
    if n >= n_hi:
        return Branch.H
    return Branch.L if (n - n_lo) < (n_hi - n) else Branch.H


def solve_steady_states(res: ResonatorParams, drive: DriveParams) -> list[SteadyStateSolution]:
    """All steady states, ascending in photon number, with stability and
    branch labels.  Stable solutions are labelled L (lowest) / H; every
    unstable one is labelled UNSTABLE."""
    roots = photon_number_roots(res, drive)
    entries = []
    for n_root in roots:
        alpha = _amplitude_for_root(res, drive, n_root)
        n = abs(alpha) ** 2
        _, _, B = drift_coefficients(res, drive, n)
        entries.append((alpha, n, _is_stable(res, B)))
    entries.sort(key=lambda t: t[1])
    stable_count = sum(1 for t in entries if t[2])
    out = []
    seen_stable = 0
    for alpha, n, stable in entries:
        if not stable:
            branch = Branch.UNSTABLE
        elif stable_count >= 2:
            branch = Branch.L if seen_stable == 0 else Branch.H
            seen_stable += 1
        else:
            branch = _label_single(res, drive, n)
        out.append(SteadyStateSolution(alpha=alpha, n=n, stable=stable, branch=branch))
    return out


def bifurcation_thresholds(res: ResonatorParams, omega_reduced: float) -> tuple[float, float]:
    """Power window (P_minus, P_plus) in watts over which several steady
    states coexist at reduced detuning Omega.

    The window edges are the fold powers, i.e. the local extrema of
    epsilon_p^2(n); at the degenerate point (pure Kerr, Omega = sqrt(3))
    both collapse onto the critical power.
    """
    omega_p = omega_p_for_reduced_detuning(res, omega_reduced)
    folds = turning_points(res, omega_p)
    if len(folds) < 2:
        raise NoBistabilityError(
            f"no multi-root window at reduced detuning {omega_reduced}"
        )
    e2 = [f[1] for f in folds]
    to_watts = hbar * omega_p / res.kappa
    return min(e2) * to_watts, max(e2) * to_watts


def stability_diagram(
    res: ResonatorParams,
    omega_grid,
    p_over_pc_grid,
    threads: int = 1,
) -> BistabilityDiagram:
    """Region classification on an (Omega, P/P_c) grid.

    Cells with two (or more) stable solutions are B; single-stable cells
    take that solution's branch label.  Threshold curves P_+-(Omega)/P_c
    ride along, NaN where no window exists.
    """
    from .model import critical_power, power_to_amplitude

    omega_grid = np.asarray(omega_grid, dtype=float)
    p_grid = np.asarray(p_over_pc_grid, dtype=float)
    if omega_grid.size == 0 or p_grid.size == 0:
        raise ContractError("diagram grids must be non-empty")
    if np.any(np.diff(omega_grid) <= 0) or np.any(np.diff(p_grid) <= 0):
        raise ContractError("diagram grids must be strictly ascending")

    def row(omega_reduced: float):
        omega_p = omega_p_for_reduced_detuning(res, omega_reduced)
        pc = critical_power(res, omega_p)
        try:
            p_lo, p_hi = bifurcation_thresholds(res, omega_reduced)
            curve = (p_lo / pc, p_hi / pc)
        except NoBistabilityError:
            curve = (np.nan, np.nan)
        labels = []
        for p_rel in p_grid:
            drive = DriveParams(
                omega_p=omega_p,
                epsilon_p=power_to_amplitude(res, omega_p, p_rel * pc),
            )
            sols = solve_steady_states(res, drive)
            stable = [s for s in sols if s.stable]
            if len(stable) >= 2:
                labels.append(Region.B)
            elif len(stable) == 1:
                labels.append(Region(stable[0].branch.value))
            else:
                # marginal cell (fold touching the grid point); group with L
                labels.append(Region.L)
        return labels, curve

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(row, omega_grid))
    else:
        results = [row(om) for om in omega_grid]

    region = np.array([[r.value for r in labels] for labels, _ in results])
    p_minus = np.array([curve[0] for _, curve in results])
    p_plus = np.array([curve[1] for _, curve in results])
    return BistabilityDiagram(
        omega_axis=omega_grid,
        power_axis=p_grid,
        region=region,
        p_plus=p_plus,
        p_minus=p_minus,
    )
