"""Reference implementations used only by the test suite.

Each oracle deliberately avoids the code path it is meant to check:
polynomial roots come from an explicitly assembled companion matrix fed
to a generic eigensolver, root counts from a dense sign-change scan with
bracketed bisection, squeezed states from expm of the generator, and
Gaussian steady moments from the closed 3x3 moment system.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
from scipy.optimize import brentq

from kerrheat.model import DriveParams, ResonatorParams, detuning


def horner(coeffs_ascending, x):
    acc = np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
    for c in reversed(coeffs_ascending):
        acc = acc * x + c
    return acc


def count_sign_changes_near(res: ResonatorParams, omega_p: float, eps2: float,
                            center: float, halfwidth: float,
                            grid: int = 40001) -> int:
    """Number of polynomial sign changes in a window of photon numbers."""
    drive = DriveParams(omega_p=omega_p, epsilon_p=float(np.sqrt(eps2)))
    poly = photon_polynomial(res, drive)
    xs = np.linspace(max(center - halfwidth, 0.0), center + halfwidth, grid)
    vals = horner(poly, xs)
    return int(np.sum(vals[:-1] * vals[1:] < 0.0))


def companion_roots(coeffs_ascending) -> np.ndarray:
    """All complex roots via a hand-built companion matrix.

    Trailing coefficients below 1e-16 of the coefficient scale are treated
    as zero: keeping them would put their reciprocals into the companion
    matrix and destroy every root of interest.
    """
    c = np.asarray(coeffs_ascending, dtype=float)
    scale = np.max(np.abs(c)) if c.size else 0.0
    while c.size and abs(c[-1]) <= 1e-16 * scale:
        c = c[:-1]
    if c.size < 2:
        return np.array([], dtype=complex)
    monic = c / c[-1]
    n = c.size - 1
    mat = np.zeros((n, n))
    if n > 1:
        mat[1:, :-1] = np.eye(n - 1)
    mat[:, -1] = -monic[:-1]
    return scipy.linalg.eigvals(mat)


def photon_polynomial(res: ResonatorParams, drive: DriveParams):
    """Ascending coefficients of n*((d + K n + K' n^2)^2 + kappa^2/4) - eps^2."""
    d = detuning(res, drive)
    k, kp, kap = res.K, res.K_prime, res.kappa
    return [
        -drive.epsilon_p ** 2,
        d * d + kap * kap / 4.0,
        2.0 * d * k,
        k * k + 2.0 * d * kp,
        2.0 * k * kp,
        kp * kp,
    ]


def positive_roots_by_scan(res: ResonatorParams, drive: DriveParams,
                           grid_points: int = 20001) -> list[float]:
    """Positive photon-number roots by dense sign-change scan + bisection."""
    poly = photon_polynomial(res, drive)
    # For n beyond eps^2/(kappa^2/4) + resonance span the polynomial is positive.
    d = abs(detuning(res, drive))
    n_hi = 4.0 * (drive.epsilon_p ** 2 / (res.kappa ** 2 / 4.0) + 1.0)
    if res.K != 0.0:
        n_hi += 4.0 * d / abs(res.K)
    xs = np.linspace(0.0, n_hi, grid_points)
    vals = np.array([horner(poly, x) for x in xs])
    roots = []
    for i in range(len(xs) - 1):
        if vals[i] == 0.0:
            if xs[i] > 0:
                roots.append(xs[i])
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(brentq(lambda x: horner(poly, x), xs[i], xs[i + 1],
                                xtol=1e-14, rtol=1e-14))
    return [r for r in roots if r > 0.0]


def threshold_window_by_scan(res: ResonatorParams, omega_p: float,
                             eps2_hi: float, coarse: int = 400,
                             refine_iters: int = 60) -> tuple[float, float]:
    """(eps2_lower, eps2_upper) edges of the three-root window, by bisecting
    the root count. Assumes a single bistable window below eps2_hi."""

    def count(eps2: float) -> int:
        drive = DriveParams(omega_p=omega_p, epsilon_p=np.sqrt(eps2))
        return len(positive_roots_by_scan(res, drive, grid_points=4001))

    grid = np.linspace(eps2_hi / coarse, eps2_hi, coarse)
    counts = [count(e) for e in grid]
    inside = [i for i, c in enumerate(counts) if c >= 3]
    if not inside:
        raise AssertionError("scan found no three-root window")
    lo_out, lo_in = grid[inside[0] - 1], grid[inside[0]]
    hi_in, hi_out = grid[inside[-1]], grid[min(inside[-1] + 1, coarse - 1)]
    for _ in range(refine_iters):
        mid = 0.5 * (lo_out + lo_in)
        if count(mid) >= 3:
            lo_in = mid
        else:
            lo_out = mid
        mid = 0.5 * (hi_in + hi_out)
        if count(mid) >= 3:
            hi_in = mid
        else:
            hi_out = mid
    return 0.5 * (lo_out + lo_in), 0.5 * (hi_in + hi_out)


def squeeze_operator(dim: int, zeta: complex) -> np.ndarray:
    """expm(0.5 (conj(zeta) a^2 - zeta a^dag^2)), dense."""
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)
    gen = 0.5 * (np.conj(zeta) * (a @ a) - zeta * (a.conj().T @ a.conj().T))
    return scipy.linalg.expm(gen)


def gaussian_steady_moments(a_coeff: float, lam: complex, kappa: float):
    """Steady (n, m) of d rho/dt = -i[A d†d + lam d†² + conj(lam) d², rho]
    + kappa D[d] rho with a vacuum bath, from the closed moment equations

        dn/dt = -kappa n - 4 Im(conj(lam) m)
        dm/dt = -(2 i A + kappa) m - 2 i lam (2 n + 1).
    """
    lr, li = lam.real, lam.imag
    mat = np.array([
        [-kappa, 4.0 * li, -4.0 * lr],
        [4.0 * li, -kappa, 2.0 * a_coeff],
        [-4.0 * lr, -2.0 * a_coeff, -kappa],
    ])
    rhs = np.array([0.0, -2.0 * li, 2.0 * lr])
    n, mr, mi = np.linalg.solve(mat, rhs)
    return n, mr + 1j * mi


def lorentzian(x, center, fwhm, height):
    hw = fwhm / 2.0
    return height * hw * hw / (hw * hw + (x - center) ** 2)
