"""Squeezing spectra of a below-threshold OPO and reservoir parameter checks.

Frequencies are detunings ``omega_bar = omega_k - omega_p`` from half the pump
frequency.  ``lambda = kappa_c/2 + eps`` and ``mu = kappa_c/2 - eps``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import AboveThresholdError, DomainError, InvalidParameterError

PHYSICAL_TOL = 1e-12
BROADBAND_FACTOR = 10.0


class BroadbandWarning(UserWarning):
    """Squeezing bandwidth not much larger than the cavity linewidths."""


@dataclass(frozen=True)
class OpoParams:
    kind: Literal["degenerate", "nondegenerate"]
    kappa_c: float
    epsilon: float
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in ("degenerate", "nondegenerate"):
            raise InvalidParameterError(f"unknown OPO kind {self.kind!r}")
        if not self.kappa_c > 0:
            raise InvalidParameterError("kappa_c must be positive")
        if self.epsilon < 0:
            raise InvalidParameterError("epsilon must be non-negative")
        if self.epsilon >= self.kappa_c / 2:
            raise AboveThresholdError(
                f"epsilon={self.epsilon} >= kappa_c/2={self.kappa_c / 2}: OPO above threshold"
            )
        if self.alpha < 0:
            raise InvalidParameterError("alpha must be non-negative")


@dataclass(frozen=True)
class SqueezingParams:
    """Reservoir photon number ``N`` and two-photon correlation ``M``.

    ``N_b`` optionally gives a different photon number for cavity B; when
    ``None`` both cavities see ``N``.
    """

    N: float
    M: complex = 0.0
    N_b: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "M", complex(self.M))
        if self.N < 0 or (self.N_b is not None and self.N_b < 0):
            raise InvalidParameterError("reservoir photon number must be non-negative")

    @property
    def n_a(self) -> float:
        return self.N

    @property
    def n_b(self) -> float:
        return self.N if self.N_b is None else self.N_b

    @classmethod
    def maximal(cls, N: float) -> "SqueezingParams":
        """Maximally correlated reservoir, ``M = sqrt(N(N+1))``."""
        return cls(N, max_correlation(N))


def lambda_mu(params: OpoParams) -> tuple[float, float]:
    lam = params.kappa_c / 2 + params.epsilon
    mu = params.kappa_c / 2 - params.epsilon
    if mu <= 0:
        raise AboveThresholdError("mu <= 0: OPO above threshold")
    return lam, mu


def _check_below_threshold(lam, mu):
    if mu <= 0 or lam <= 0:
        raise AboveThresholdError(f"lambda={lam}, mu={mu}: need lambda >= mu > 0")
    if lam < mu:
        raise DomainError(f"lambda={lam} < mu={mu}")


def _lorentz_pair(w, lam, mu):
    amp = (lam * lam - mu * mu) / 4.0
    w2 = np.square(w)
    inv_mu = 1.0 / (w2 + mu * mu)
    inv_lam = 1.0 / (w2 + lam * lam)
    return amp * (inv_mu - inv_lam), amp * (inv_mu + inv_lam)


def degenerate_spectrum(omega_bar, lam: float, mu: float):
    """``(N, M)`` of a degenerate OPO at detuning ``omega_bar`` (scalar or array)."""
    _check_below_threshold(lam, mu)
    n, m = _lorentz_pair(np.asarray(omega_bar, dtype=float), lam, mu)
    if np.ndim(n) == 0:
        return float(n), float(m)
    return n, m


def nondegenerate_spectrum(
    omega_bar,
    lam: float,
    mu: float,
    alpha: float,
    beam: Literal["both", "signal", "idler"] = "both",
):
    """``(N, M)`` of a non-degenerate OPO with beams at ``omega_p +- alpha``.

    ``beam="both"`` returns the symmetrized two-peak form (sum of the pairs
    displaced by ``+alpha`` and ``-alpha``).  Where the two peaks overlap that
    sum does not satisfy ``M**2 = N (N + 1)``; ``beam="signal"``/``"idler"``
    return a single displaced pair, which does.
    """
    _check_below_threshold(lam, mu)
    if alpha < 0:
        raise DomainError("alpha must be non-negative")
    w = np.asarray(omega_bar, dtype=float)
    if beam == "both":
        n1, m1 = _lorentz_pair(w - alpha, lam, mu)
        n2, m2 = _lorentz_pair(w + alpha, lam, mu)
        n, m = n1 + n2, m1 + m2
    elif beam == "signal":
        n, m = _lorentz_pair(w - alpha, lam, mu)
    elif beam == "idler":
        n, m = _lorentz_pair(w + alpha, lam, mu)
    else:
        raise ValueError(f"unknown beam {beam!r}")
    if np.ndim(n) == 0:
        return float(n), float(m)
    return n, m


def spectrum(params: OpoParams, omega_bar):
    lam, mu = lambda_mu(params)
    if params.kind == "degenerate":
        return degenerate_spectrum(omega_bar, lam, mu)
    return nondegenerate_spectrum(omega_bar, lam, mu, params.alpha)


def max_correlation(N: float) -> float:
    if N < 0:
        raise DomainError(f"N must be non-negative, got {N}")
    return math.sqrt(N * (N + 1.0))


@dataclass(frozen=True)
class PhysicalityReport:
    ok: bool
    bound: float
    excess: float  # |M| - bound, positive when violated

    def __bool__(self):
        return self.ok


def validate_physical(sq: SqueezingParams, tol: float = PHYSICAL_TOL) -> PhysicalityReport:
    """Check ``|M| <= sqrt(N(N+1))``.

    With per-cavity photon numbers the bound is
    ``sqrt(N_A N_B + min(N_A, N_B))``.
    """
    bound = math.sqrt(sq.n_a * sq.n_b + min(sq.n_a, sq.n_b))
    excess = abs(sq.M) - bound
    return PhysicalityReport(excess <= tol, bound, excess)


def check_broadband(lam: float, mu: float, kappa1: float, kappa2: float) -> bool:
    """Warn (and return False) unless ``min(lam, mu) >= 10 max(kappa1, kappa2)``."""
    ok = min(lam, mu) >= BROADBAND_FACTOR * max(kappa1, kappa2)
    if not ok:
        warnings.warn(
            f"squeezing bandwidth min(lambda, mu)={min(lam, mu):g} is below "
            f"{BROADBAND_FACTOR:g} x max cavity rate {max(kappa1, kappa2):g}; "
            "white-reservoir treatment is questionable",
            BroadbandWarning,
            stacklevel=2,
        )
    return ok
