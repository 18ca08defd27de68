"""Coherence functions, entanglement measures and onset-time extraction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DomainError
from .hilbert import DensityMatrix, annihilation_operator, to_tensor_grid
from .linalg import hermitian_eigenvalues

NEGATIVE_EIG_CLAMP = 1e-10
DEFAULT_ONSET_THRESHOLD = 0.02


@dataclass(frozen=True)
class CoherenceSet:
    gamma12: float
    eta11: float
    eta22: float
    eta12: float


@dataclass(frozen=True)
class SuperpositionPopulations:
    rho_alpha_alpha: float
    rho_beta_beta: float
    rho_ss: float
    rho_uu: float
    rho_m: float


def _ratio(num, den):
    # 0/0 -> 0: no excitation, no coherence
    if den <= 0.0:
        return 0.0
    return float(num / den)


def _expect(rho: DensityMatrix, op: np.ndarray) -> complex:
    return complex(np.trace(rho.entries @ op))


def mean_photon_numbers(rho: DensityMatrix) -> tuple[float, float]:
    a = annihilation_operator("A", rho.basis).matrix
    b = annihilation_operator("B", rho.basis).matrix
    return _expect(rho, a.conj().T @ a).real, _expect(rho, b.conj().T @ b).real


def coherences(rho: DensityMatrix) -> CoherenceSet:
    """Normalized first-order and anomalous coherence magnitudes."""
    a = annihilation_operator("A", rho.basis).matrix
    b = annihilation_operator("B", rho.basis).matrix
    na, nb = mean_photon_numbers(rho)
    na, nb = max(na, 0.0), max(nb, 0.0)
    root = math.sqrt(na * nb)
    return CoherenceSet(
        gamma12=_ratio(abs(_expect(rho, a.conj().T @ b)), root),
        eta11=_ratio(abs(_expect(rho, a @ a)), na),
        eta22=_ratio(abs(_expect(rho, b @ b)), nb),
        eta12=_ratio(abs(_expect(rho, a @ b)), root),
    )


def partial_transpose(grid: np.ndarray, side: int, subsystem: Literal["A", "B"] = "B") -> np.ndarray:
    """Partial transpose of a ``side**2``-dimensional product-grid matrix."""
    t = grid.reshape(side, side, side, side)  # (nA, nB, mA, mB)
    if subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return t.reshape(side * side, side * side)


def negativity_sum(rho: DensityMatrix, subsystem: Literal["A", "B"] = "B") -> float:
    """|sum of negative eigenvalues| of the partial transpose."""
    side = rho.basis.K + 1
    pt = partial_transpose(to_tensor_grid(rho, rho.basis), side, subsystem)
    pt = 0.5 * (pt + pt.conj().T)
    eig = hermitian_eigenvalues(pt)
    neg = eig[eig < -NEGATIVE_EIG_CLAMP]
    return float(abs(neg.sum()))


def logarithmic_negativity(rho: DensityMatrix, subsystem: Literal["A", "B"] = "B") -> float:
    return math.log2(1.0 + 2.0 * negativity_sum(rho, subsystem))


def purity(rho: DensityMatrix) -> float:
    return float(np.trace(rho.entries @ rho.entries).real)


def superposition_weights(N: float) -> tuple[float, float]:
    """Amplitudes ``(c1, c4)`` of ``|alpha> = c1 |0,0> + c4 |1,1>``."""
    if N < 0:
        raise DomainError("N must be non-negative")
    return math.sqrt((N + 1) / (2 * N + 1)), math.sqrt(N / (2 * N + 1))


def superposition_populations(rho: DensityMatrix, N: float) -> SuperpositionPopulations:
    c1, c4 = superposition_weights(N)
    r11, r44 = rho.population(1), rho.population(4)
    rm = 0.5 * (rho.element(1, 4) + rho.element(4, 1)).real
    return SuperpositionPopulations(
        rho_alpha_alpha=c1 * c1 * r11 + c4 * c4 * r44 + 2 * c1 * c4 * rm,
        rho_beta_beta=c4 * c4 * r11 + c1 * c1 * r44 - 2 * c1 * c4 * rm,
        rho_ss=0.5 * (rho.population(2) + rho.population(3)),
        rho_uu=0.5 * (rho.population(5) + rho.population(6)),
        rho_m=rm,
    )


def entanglement_degree(N: float) -> float:
    if N < 0:
        raise DomainError("N must be non-negative")
    if math.isinf(N):
        return 1.0
    return 2 * math.sqrt(N * (N + 1)) / (2 * N + 1)


def onset_time(times: Sequence[float], values: Sequence[float], threshold: float = DEFAULT_ONSET_THRESHOLD):
    """First time ``values`` reaches ``threshold``, linearly interpolated.

    Returns ``None`` if the threshold is never reached.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.size == 0:
        raise DomainError("empty series")
    if t.shape != v.shape:
        raise DomainError("times and values differ in length")
    if not threshold > 0:
        raise DomainError("threshold must be positive")
    hits = np.flatnonzero(v >= threshold)
    if hits.size == 0:
        return None
    k = int(hits[0])
    if k == 0:
        return float(t[0])
    t0, t1, v0, v1 = t[k - 1], t[k], v[k - 1], v[k]
    return float(t0 + (threshold - v0) * (t1 - t0) / (v1 - v0))
