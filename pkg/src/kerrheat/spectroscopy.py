"""Qubit sideband spectroscopy of the dressed resonator mode.

A weak probe near the qubit transition sees, besides the power-broadened
central line at the Stark-shifted frequency, two satellites displaced by
+-delta_tilde: probe-assisted exchange of one dressed quantum.  Their
height ratio measures the dressed-mode occupation, which is the whole
thermometry game:

    r = height(anti-Stokes)/height(Stokes),  n_tilde = r/(1 - r).

Detuning convention: delta = omega_stark - omega_q (probe below the
Stark-shifted line means delta > 0).  With the rate Lorentzian
L(x) = (kappa/2)/(kappa^2/4 + (delta_tilde + x)^2), the probe-induced
qubit rates are

    gamma_up   = gamma_up_extra   + g_eff^2 * [(L(-d)+L(d))*n_tilde + L(d)]
    gamma_down = gamma_down_extra + g_eff^2 * [(L(-d)+L(d))*n_tilde + L(-d)]

so the up rate is resonantly enhanced at delta = -delta_tilde, i.e. at
omega_q = omega_stark + delta_tilde: that is the Stokes side (taller,
weight n_tilde + 1); the anti-Stokes side mirrors it with weight
n_tilde.  Which side of the line is which therefore flips with the sign
of delta_tilde, never with peak heights.

g_eff collapses the product of the qubit coupling, the probe-induced
resonator field and an order-one dressing factor into one scalar; the
height ratio is independent of it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import least_squares

from .errors import ContractError, DomainError, FitError
from .fluctuations import LinearizedMode, effective_temperature
from .model import QubitParams, ResonatorParams

@dataclass(frozen=True)
class SpectrumTrace:
    x: np.ndarray          # rad/s; absolute omega_q or detuning, see meta
    y: np.ndarray
    meta: dict

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise ContractError("trace axes must be 1-d and equally long")
        if np.any(np.diff(x) <= 0):
            raise ContractError("trace x axis must be strictly ascending")
        if not np.all(np.isfinite(y)):
            raise ContractError("trace values must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class LorentzianPeak:
    center: float   # rad/s
    fwhm: float     # rad/s
    height: float


@dataclass(frozen=True)
class LorentzianFit:
    peaks: tuple[LorentzianPeak, ...]   # sorted by center
    baseline: float
    residual_rms: float
    significant: tuple[bool, ...]       # clears the residual floor at a resolvable width?


def stark_shifted_frequency(qubit: QubitParams, res: ResonatorParams, n: float) -> float:
    """omega_ge + 2*chi*n with the lowest-order dispersive pull
    chi = g0^2/(omega_ge - omega_c)."""
    gap = qubit.omega_ge - res.omega_c
    if gap == 0.0:
        raise DomainError("qubit resonant with the cavity: dispersive shift diverges")
    chi = qubit.g0 ** 2 / gap
    return qubit.omega_ge + 2.0 * chi * n


def _lorentzian_rate(kappa: float, delta_tilde: float, x: float) -> float:
    return 0.5 * kappa / (0.25 * kappa * kappa + (delta_tilde + x) ** 2)


def sideband_rates(
    mode: LinearizedMode, qubit: QubitParams, g_eff: float, delta: float
) -> tuple[float, float]:
    """(gamma_up, gamma_down) of the probed qubit at probe detuning
    delta = omega_stark - omega_q."""
    if g_eff < 0.0:
        raise DomainError("g_eff must be >= 0")
    lm = _lorentzian_rate(mode.kappa, mode.delta_tilde, -delta)
    lp = _lorentzian_rate(mode.kappa, mode.delta_tilde, delta)
    shared = (lm + lp) * mode.n_tilde
    g2 = g_eff * g_eff
    gamma_up = qubit.gamma_up_extra + g2 * (shared + lp)
    gamma_down = qubit.gamma_down_extra + g2 * (shared + lm)
    return gamma_up, gamma_down


def qubit_spectrum_analytic(
    mode: LinearizedMode,
    qubit: QubitParams,
    g_eff: float,
    alpha_s: complex,
    omega_q_grid,
) -> SpectrumTrace:
    """Stationary excited-state population of the probed qubit versus
    probe frequency, from the adiabatically-eliminated two-level master
    equation.

    The central-line drive strength is g0*|alpha_s|; the satellite rates
    use g_eff (see module docstring).  Values are probabilities.
    """
    omega_q_grid = np.asarray(omega_q_grid, dtype=float)
    omega_stark = _stark_from_mode(mode, qubit)
    w2 = (qubit.g0 * abs(alpha_s)) ** 2
    out = np.empty_like(omega_q_grid)
    for i, wq in enumerate(omega_q_grid):
        delta = omega_stark - wq
        gu, gd = sideband_rates(mode, qubit, g_eff, delta)
        total = gu + gd
        if total <= 0.0:
            raise DomainError(
                "gamma_up + gamma_down = 0: nothing connects the qubit states"
            )
        p_eq = gu / total
        gamma2 = qubit.gamma_phi + 0.5 * total
        sat = gamma2 * w2 / total
        num = p_eq * (gamma2 * gamma2 + delta * delta) + 2.0 * sat
        den = gamma2 * gamma2 + 4.0 * sat + delta * delta
        out[i] = num / den
    return SpectrumTrace(
        x=omega_q_grid,
        y=out,
        meta={
            "axis": "omega_q",
            "kind": "qubit_spectrum_analytic",
            "omega_stark": omega_stark,
            "kappa": mode.kappa,
            "delta_tilde": mode.delta_tilde,
            "n_tilde_model": mode.n_tilde,
            "g_eff": g_eff,
            "alpha_s_abs": abs(alpha_s),
        },
    )


def _stark_from_mode(mode: LinearizedMode, qubit: QubitParams) -> float:
    gap = qubit.omega_ge - mode.omega_c
    if gap == 0.0:
        raise DomainError("qubit resonant with the cavity: dispersive shift diverges")
    return qubit.omega_ge + 2.0 * qubit.g0 ** 2 / gap * mode.n


def ratio_prediction(mode: LinearizedMode) -> float:
    """Predicted anti-Stokes/Stokes height ratio n_tilde/(1 + n_tilde).

    Quantitative only in the resolved-sideband regime; warns otherwise.
    """
    if abs(mode.delta_tilde) < 3.0 * mode.kappa:
        warnings.warn(
            "sidebands not well resolved (|delta_tilde| < 3*kappa); "
            "the height-ratio prediction carries O(kappa^2/delta_tilde^2) errors",
            stacklevel=2,
        )
    return mode.n_tilde / (1.0 + mode.n_tilde)


def _three_lorentzian_model(params, x):
    b = params[0]
    y = np.full_like(x, b)
    for k in range(3):
        c, w, h = params[1 + 3 * k : 4 + 3 * k]
        hw = 0.5 * w
        y = y + h * hw * hw / ((x - c) ** 2 + hw * hw)
    return y


def fit_three_lorentzians(trace: SpectrumTrace, expected_centers) -> LorentzianFit:
    """Damped least-squares fit of baseline + three Lorentzians.

    Initial centers come from the caller, initial widths from the trace
    metadata (kappa) when present, initial heights from the local data.
    Deterministic: fixed solver, fixed starting point, tolerance 1e-8.
    """
    x = trace.x
    y = trace.y
    centers = np.sort(np.asarray(expected_centers, dtype=float))
    if centers.size != 3:
        raise ContractError("exactly three expected centers required")
    if centers[0] < x[0] or centers[-1] > x[-1]:
        raise ContractError("expected centers must lie inside the trace")
    span = x[-1] - x[0]
    w0 = float(trace.meta.get("kappa", span / 10.0))
    # work on a normalized copy for conditioning; map back afterwards
    x0 = x[0]
    sx = span
    sy = max(float(np.max(np.abs(y))), 1e-300)
    xs = (x - x0) / sx
    ys = y / sy

    def h_init(c):
        i = int(np.argmin(np.abs(x - c)))
        lo = max(float(np.min(y)), 0.0)
        return max((y[i] - lo) / sy, 1e-6)

    p0 = [float(np.min(ys))]
    for c in centers:
        p0 += [(c - x0) / sx, w0 / sx, h_init(c)]
    p0 = np.array(p0)
    lo = np.full(10, -np.inf)
    hi = np.full(10, np.inf)
    for k in range(3):
        lo[1 + 3 * k] = -0.5          # centers may wander half a span out
        hi[1 + 3 * k] = 1.5
        lo[2 + 3 * k] = 1e-9          # fwhm > 0
        hi[2 + 3 * k] = 10.0
        lo[3 + 3 * k] = 0.0           # height >= 0
    res = least_squares(
        lambda p: _three_lorentzian_model(p, xs) - ys,
        p0, bounds=(lo, hi), method="trf", xtol=1e-8, ftol=1e-8, gtol=1e-8,
        max_nfev=2000,
    )
    resid = _three_lorentzian_model(res.x, xs) - ys
    rms = float(np.sqrt(np.mean(resid ** 2)) * sy)
    if not res.success:
        raise FitError(
            f"three-Lorentzian fit did not converge: {res.message}",
            best=res.x, residual_rms=rms,
        )
    peaks = []
    for k in range(3):
        c, w, h = res.x[1 + 3 * k : 4 + 3 * k]
        peaks.append(LorentzianPeak(center=c * sx + x0, fwhm=w * sx, height=h * sy))
    peaks.sort(key=lambda p: p.center)
    # a "peak" narrower than two grid steps is a noise spike, not evidence
    step = float(np.median(np.diff(x)))
    significant = tuple(p.height > 2.0 * rms and p.fwhm > 2.0 * step for p in peaks)
    return LorentzianFit(
        peaks=tuple(peaks),
        baseline=float(res.x[0] * sy),
        residual_rms=rms,
        significant=significant,
    )


def thermometry(
    fit: LorentzianFit, mode: LinearizedMode, teff_convention: str = "dressed-lab"
) -> tuple[float, float, float]:
    """(r, n_tilde, T_eff) from a fitted three-peak spectrum.

    The satellite on the omega_stark + delta_tilde side is Stokes (the
    sign of delta_tilde decides which fitted peak that is); r is the
    anti-Stokes/Stokes height ratio.
    """
    if len(fit.peaks) != 3:
        raise ContractError("need a three-peak fit")
    peaks = sorted(fit.peaks, key=lambda p: p.center)
    if mode.delta_tilde > 0:
        stokes, anti = peaks[2], peaks[0]
    else:
        stokes, anti = peaks[0], peaks[2]
    if stokes.height <= 0.0:
        raise DomainError("Stokes peak has zero height; no ratio defined")
    r = anti.height / stokes.height
    if r >= 1.0:
        raise DomainError(
            f"anti-Stokes/Stokes ratio {r:.4f} >= 1 is unphysical for a "
            "thermal dressed mode; the fit likely failed"
        )
    n_tilde = r / (1.0 - r)
    t_eff = effective_temperature(replace(mode, n_tilde=n_tilde), teff_convention)
    return r, n_tilde, t_eff


def detection_limit(noise_std: float, stokes_height: float) -> float:
    """Upper bound on a dressed occupation hiding below the noise floor:
    nf/(1 - nf) with nf = noise_std/stokes_height."""
    if noise_std < 0.0:
        raise DomainError("noise_std must be >= 0")
    if stokes_height <= noise_std:
        raise DomainError(
            "Stokes peak does not clear the noise floor: no bound available"
        )
    nf = noise_std / stokes_height
    return nf / (1.0 - nf)
