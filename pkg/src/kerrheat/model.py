"""Parameter types, unit conventions, and drive/power arithmetic.

Conventions used throughout the package:

* Every frequency-like quantity is stored as an angular rate in rad/s.
  Config files and CSV columns whose names end in ``_hz`` carry the
  cyclic value (angular / 2*pi) and are converted once at the boundary.
* The pump phase is fixed so that the drive amplitude ``epsilon_p`` is
  real and non-negative; all downstream phases are relative to it.
  Observables exposed here (photon number, dressed detuning, dressed
  occupation) do not depend on that choice.
* Nothing assumes signs of the Kerr constants or of the pump detuning;
  both signs occur in realistic devices.
"""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import dataclass

from scipy.constants import hbar

from .errors import ConfigError, DomainError

TWOPI = 2.0 * math.pi


@dataclass(frozen=True)
class ResonatorParams:
    """Bare resonator: frequency, two Kerr constants, energy decay rate."""

    omega_c: float   # rad/s
    K: float         # rad/s, self-Kerr (first anharmonicity)
    K_prime: float   # rad/s, second-order Kerr correction
    kappa: float     # 1/s, energy decay rate

    def __post_init__(self):
        if not (self.kappa > 0.0):
            raise DomainError(f"kappa must be > 0, got {self.kappa}")
        if not (self.omega_c > 0.0):
            raise DomainError(f"omega_c must be > 0, got {self.omega_c}")
        if not math.isfinite(self.Q) or self.Q <= 1.0:
            raise DomainError(f"quality factor {self.Q} out of range (> 1 required)")

    @property
    def Q(self) -> float:
        return self.omega_c / self.kappa


@dataclass(frozen=True)
class DriveParams:
    """Pump tone: frequency and real non-negative amplitude."""

    omega_p: float    # rad/s
    epsilon_p: float  # 1/s

    def __post_init__(self):
        if self.epsilon_p < 0.0:
            raise DomainError(f"epsilon_p must be >= 0, got {self.epsilon_p}")
        if not (self.omega_p > 0.0):
            raise DomainError(f"omega_p must be > 0, got {self.omega_p}")


@dataclass(frozen=True)
class QubitParams:
    """Two-level probe qubit and its extra (non-sideband) rates.

    gamma_down_extra / gamma_up_extra stand in for the relaxation and
    excitation channels not produced by the pumped resonator (Purcell,
    dressed dephasing, ...); gamma_phi is the pure dephasing rate
    entering the total linewidth.
    """

    omega_ge: float            # rad/s
    g0: float                  # rad/s
    gamma_down_extra: float = 0.0  # 1/s
    gamma_up_extra: float = 0.0    # 1/s
    gamma_phi: float = 0.0         # 1/s

    def __post_init__(self):
        for name in ("gamma_down_extra", "gamma_up_extra", "gamma_phi"):
            if getattr(self, name) < 0.0:
                raise DomainError(f"{name} must be >= 0")
        if not (self.omega_ge > 0.0):
            raise DomainError("omega_ge must be > 0")
        if self.g0 < 0.0:
            raise DomainError("g0 must be >= 0")


def check_dispersive(qubit: QubitParams, res: ResonatorParams) -> None:
    # Sanity only: the dispersive treatment needs |omega_ge - omega_c| >> g0.
    gap = abs(qubit.omega_ge - res.omega_c)
    if qubit.g0 > 0.0 and gap < 5.0 * qubit.g0:
        warnings.warn(
            f"qubit-resonator gap {gap:.3e} rad/s is less than 5*g0 = "
            f"{5.0 * qubit.g0:.3e}; dispersive formulas are unreliable here",
            stacklevel=2,
        )


def detuning(res: ResonatorParams, drive: DriveParams) -> float:
    """Pump detuning Delta_p = omega_c - omega_p (rad/s)."""
    return res.omega_c - drive.omega_p


def reduced_detuning(res: ResonatorParams, drive: DriveParams) -> float:
    """Dimensionless detuning Omega = 2*Q*Delta_p/omega_c = 2*Delta_p/kappa."""
    return 2.0 * res.Q * detuning(res, drive) / res.omega_c


def omega_p_for_reduced_detuning(res: ResonatorParams, omega_reduced: float) -> float:
    """Pump frequency realizing a given reduced detuning."""
    return res.omega_c - 0.5 * omega_reduced * res.kappa


def power_to_amplitude(res: ResonatorParams, omega_p: float, p_p: float) -> float:
    """Drive amplitude epsilon_p = sqrt(kappa * P_p / (hbar * omega_p)).

    p_p is the incident pump power in watts.
    """
    if p_p < 0.0:
        raise DomainError(f"pump power must be >= 0, got {p_p}")
    return math.sqrt(res.kappa * p_p / (hbar * omega_p))


def amplitude_to_power(res: ResonatorParams, omega_p: float, epsilon_p: float) -> float:
    """Inverse of power_to_amplitude (watts)."""
    if epsilon_p < 0.0:
        raise DomainError(f"epsilon_p must be >= 0, got {epsilon_p}")
    return epsilon_p ** 2 * hbar * omega_p / res.kappa


def critical_power(res: ResonatorParams, omega_p: float) -> float:
    """Pump power at which a bistable window first opens (watts).

    P_c = kappa^2 * hbar * omega_p / (3*sqrt(3)*|K|).  Independent of the
    sign of K; a linear resonator (K = 0) has no such point.
    """
    if res.K == 0.0:
        raise DomainError("critical power undefined for a linear resonator (K = 0)")
    return res.kappa ** 2 * hbar * omega_p / (3.0 * math.sqrt(3.0) * abs(res.K))


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


# --- config ingestion ------------------------------------------------------

_DRIVE_KEYS = ("epsilon_p", "P_p_dbm", "P_over_Pc")


def load_config(path: str) -> dict:
    """Read a TOML (.toml) or JSON (.json) run configuration.

    Returns the raw nested dict; interpretation happens in
    params_from_config so that the hash covers exactly what was read.
    """
    if path.endswith(".toml"):
        try:
            import tomllib
        except ModuleNotFoundError:  # Python 3.10
            import tomli as tomllib
        try:
            with open(path, "rb") as fh:
                return tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: TOML parse error: {exc}") from exc
    if path.endswith(".json"):
        try:
            with open(path, "r", encoding="utf-8") as fh:
                return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"{path}: JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from exc
    raise ConfigError(f"{path}: unsupported config extension (use .toml or .json)")


def config_hash(cfg: dict) -> str:
    """sha256 over a canonical JSON serialization of the raw config."""
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(blob.encode("ascii")).hexdigest()


def _require(block: dict, key: str, where: str) -> float:
    if key not in block:
        raise ConfigError(f"missing key '{key}' in [{where}]")
    value = block[key]
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"[{where}] {key} must be a number, got {value!r}")
    return float(value)


def resonator_from_config(cfg: dict) -> ResonatorParams:
    block = cfg.get("resonator")
    if not isinstance(block, dict):
        raise ConfigError("missing [resonator] block")
    return ResonatorParams(
        omega_c=TWOPI * _require(block, "omega_c_hz", "resonator"),
        K=TWOPI * _require(block, "K_hz", "resonator"),
        K_prime=TWOPI * block.get("K_prime_hz", 0.0),
        kappa=TWOPI * _require(block, "kappa_hz", "resonator"),
    )


def drive_from_config(cfg: dict, res: ResonatorParams) -> DriveParams:
    block = cfg.get("drive")
    if not isinstance(block, dict):
        raise ConfigError("missing [drive] block")
    omega_p = TWOPI * _require(block, "omega_p_hz", "drive")
    given = [k for k in _DRIVE_KEYS if k in block]
    if len(given) != 1:
        raise ConfigError(
            f"[drive] needs exactly one of {_DRIVE_KEYS}, got {given or 'none'}"
        )
    key = given[0]
    value = _require(block, key, "drive")
    if key == "epsilon_p":
        eps = value
    elif key == "P_p_dbm":
        eps = power_to_amplitude(res, omega_p, dbm_to_watts(value))
    else:  # P_over_Pc
        eps = power_to_amplitude(res, omega_p, value * critical_power(res, omega_p))
    return DriveParams(omega_p=omega_p, epsilon_p=eps)


def qubit_from_config(cfg: dict, res: ResonatorParams) -> QubitParams | None:
    block = cfg.get("qubit")
    if block is None:
        return None
    if not isinstance(block, dict):
        raise ConfigError("[qubit] must be a table")
    qubit = QubitParams(
        omega_ge=TWOPI * _require(block, "omega_ge_hz", "qubit"),
        g0=TWOPI * _require(block, "g0_hz", "qubit"),
        gamma_down_extra=TWOPI * block.get("gamma_down_extra_hz", 0.0),
        gamma_up_extra=TWOPI * block.get("gamma_up_extra_hz", 0.0),
        gamma_phi=TWOPI * block.get("gamma_phi_hz", 0.0),
    )
    check_dispersive(qubit, res)
    return qubit


def params_from_config(cfg: dict):
    """(resonator, drive, qubit-or-None) from a raw config dict."""
    res = resonator_from_config(cfg)
    drive = drive_from_config(cfg, res)
    qubit = qubit_from_config(cfg, res)
    return res, drive, qubit
