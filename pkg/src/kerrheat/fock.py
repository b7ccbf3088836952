"""Dense truncated-Fock operators. Truncation N means levels 0..N-1."""

from __future__ import annotations

import numpy as np


def destroy(N: int) -> np.ndarray:
    if N < 2:
        raise ValueError("need at least two Fock levels")
    return np.diag(np.sqrt(np.arange(1.0, N)), 1).astype(complex)


def create(N: int) -> np.ndarray:
    return destroy(N).conj().T


def number(N: int) -> np.ndarray:
    return np.diag(np.arange(N, dtype=float)).astype(complex)


def identity(N: int) -> np.ndarray:
    return np.eye(N, dtype=complex)


def coherent(N: int, alpha: complex) -> np.ndarray:
    """Normalized coherent-state vector (truncation renormalized)."""
    idx = np.arange(N)
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1.0, N)))))
    vec = np.exp(idx * np.log(complex(alpha)) - 0.5 * log_fact) if alpha != 0 else \
        np.eye(N, 1, dtype=complex).ravel()
    if alpha != 0:
        vec = np.asarray(vec, dtype=complex)
        vec *= np.exp(-0.5 * abs(alpha) ** 2)
    return vec / np.linalg.norm(vec)
