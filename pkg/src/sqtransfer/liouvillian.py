"""Master-equation generators for two cavities driven by a squeezed reservoir.

Density matrices are vectorized row-major, ``vec(rho) = rho.reshape(-1)``, so
that ``vec(A rho B) = kron(A, B.T) @ vec(rho)``.  All generators are dense
``D**2 x D**2`` complex matrices.

Convention for complex ``M``: ``M`` multiplies the ``a_i rho a_j`` and
``a_i a_j`` terms, ``conj(M)`` the ``a_i^+ rho a_j^+`` and ``a_i^+ a_j^+``
terms.  Every generator below uses it, so the jump/no-jump split is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .errors import DimensionError, InvalidParameterError, UnsupportedConfigurationError
from .hilbert import BasisSpec, DensityMatrix, annihilation_operator, enumerate_basis
from .reservoir import SqueezingParams

GeneratorKind = Literal[
    "full", "jump", "no_jump_strict", "effective_hamiltonian_part", "paper_b26"
]


@dataclass(frozen=True)
class SystemParams:
    """Cavity rates and reservoir parameters.

    ``kappa12`` defaults to ``sqrt(kappa1 * kappa2)``.  The coupling efficiency
    ``eta`` scales both ``N`` and ``M``.
    """

    kappa1: float
    kappa2: float
    squeezing: SqueezingParams
    kappa12: float | None = None
    eta: float = 1.0

    def __post_init__(self):
        if not (self.kappa1 > 0 and self.kappa2 > 0):
            raise InvalidParameterError("cavity decay rates must be positive")
        if self.kappa12 is None:
            object.__setattr__(self, "kappa12", math.sqrt(self.kappa1 * self.kappa2))
        if self.kappa12 < 0:
            raise InvalidParameterError("kappa12 must be non-negative")
        if not 0.0 <= self.eta <= 1.0:
            raise InvalidParameterError("eta must lie in [0, 1]")

    @classmethod
    def symmetric(cls, N: float, M: complex, kappa: float = 1.0, eta: float = 1.0):
        return cls(kappa, kappa, SqueezingParams(N, M), kappa12=kappa, eta=eta)

    # reservoir numbers as seen by the cavities
    @property
    def n_a(self) -> float:
        return self.eta * self.squeezing.n_a

    @property
    def n_b(self) -> float:
        return self.eta * self.squeezing.n_b

    @property
    def m(self) -> complex:
        return self.eta * self.squeezing.M

    @property
    def is_symmetric(self) -> bool:
        return (
            self.kappa1 == self.kappa2 == self.kappa12
            and self.squeezing.n_a == self.squeezing.n_b
        )


@dataclass(frozen=True, eq=False)
class Generator:
    matrix: np.ndarray
    basis: BasisSpec
    kind: GeneratorKind = "full"

    def __post_init__(self):
        d2 = self.basis.dim**2
        if self.matrix.shape != (d2, d2):
            raise DimensionError(f"generator shape {self.matrix.shape}, expected {(d2, d2)}")
        self.matrix.setflags(write=False)


def _ops(basis):
    a = {m: annihilation_operator(m, basis).matrix for m in "AB"}
    ad = {m: a[m].conj().T for m in "AB"}
    return a, ad


def _left(x, eye):
    return np.kron(x, eye)


def _right(x, eye):
    return np.kron(eye, x.T)


def _sandwich(x, y):
    return np.kron(x, y.T)


def build_full_generator(params: SystemParams, basis: BasisSpec | None = None) -> Generator:
    """Generator written term by term as nested commutators.

    Local terms per cavity j:
        -kappa_j/2 * eta N_j * ([a_j, a_j^+ rho] + [rho a_j, a_j^+])
        -kappa_j/2 * (eta N_j + 1) * ([a_j^+, a_j rho] + [rho a_j^+, a_j])
    Cross terms for (i, j) in {(A, B), (B, A)}:
        -kappa12/2 * eta M  * ([a_i rho, a_j] + [a_j, rho a_i])
        -kappa12/2 * eta M* * ([a_i^+ rho, a_j^+] + [a_j^+, rho a_i^+])
    """
    basis = basis or enumerate_basis(2)
    a, ad = _ops(basis)
    eye = np.eye(basis.dim)
    kap = {"A": params.kappa1, "B": params.kappa2}
    n = {"A": params.n_a, "B": params.n_b}
    m = params.m
    g = np.zeros((basis.dim**2,) * 2, dtype=complex)

    for j in "AB":
        aj, adj = a[j], ad[j]
        # [a, a^+ rho] + [rho a, a^+]
        pump = _left(aj @ adj, eye) - _sandwich(adj, aj) + _right(aj @ adj, eye) - _sandwich(adj, aj)
        # [a^+, a rho] + [rho a^+, a]
        loss = _left(adj @ aj, eye) - _sandwich(aj, adj) + _right(adj @ aj, eye) - _sandwich(aj, adj)
        g -= 0.5 * kap[j] * (n[j] * pump + (n[j] + 1.0) * loss)

    for i, j in (("A", "B"), ("B", "A")):
        # [a_i rho, a_j] + [a_j, rho a_i]
        t_m = _sandwich(a[i], a[j]) - _left(a[j] @ a[i], eye) + _sandwich(a[j], a[i]) - _right(a[i] @ a[j], eye)
        # [a_i^+ rho, a_j^+] + [a_j^+, rho a_i^+]
        t_mc = (
            _sandwich(ad[i], ad[j]) - _left(ad[j] @ ad[i], eye)
            + _sandwich(ad[j], ad[i]) - _right(ad[i] @ ad[j], eye)
        )
        g -= 0.5 * params.kappa12 * (m * t_m + np.conj(m) * t_mc)
    return Generator(g, basis, "full")


def build_jump_superoperator(params: SystemParams, basis: BasisSpec | None = None) -> Generator:
    """Sandwich (quantum-jump) part of the generator."""
    basis = basis or enumerate_basis(2)
    a, ad = _ops(basis)
    kap = {"A": params.kappa1, "B": params.kappa2}
    n = {"A": params.n_a, "B": params.n_b}
    m = params.m
    g = np.zeros((basis.dim**2,) * 2, dtype=complex)
    for j in "AB":
        g += kap[j] * ((n[j] + 1.0) * _sandwich(a[j], ad[j]) + n[j] * _sandwich(ad[j], a[j]))
    for i, j in (("A", "B"), ("B", "A")):
        g -= params.kappa12 * (m * _sandwich(a[i], a[j]) + np.conj(m) * _sandwich(ad[i], ad[j]))
    return Generator(g, basis, "jump")


def effective_hamiltonian(params: SystemParams, basis: BasisSpec | None = None) -> np.ndarray:
    """Non-Hermitian Hamiltonian of the no-jump evolution (hbar = 1).

    Free cavity terms are dropped (interaction picture at resonance).
    """
    basis = basis or enumerate_basis(2)
    a, ad = _ops(basis)
    kap = {"A": params.kappa1, "B": params.kappa2}
    n = {"A": params.n_a, "B": params.n_b}
    m = params.m
    h = np.zeros((basis.dim, basis.dim), dtype=complex)
    for j in "AB":
        h -= 0.5j * kap[j] * ((n[j] + 1.0) * ad[j] @ a[j] + n[j] * a[j] @ ad[j])
    for i, j in (("A", "B"), ("B", "A")):
        h += 0.5j * params.kappa12 * (m * a[i] @ a[j] + np.conj(m) * ad[i] @ ad[j])
    return h


def build_effective_hamiltonian_part(
    params: SystemParams, basis: BasisSpec | None = None
) -> Generator:
    """``rho -> -i (H_eff rho - rho H_eff^+)``; trace-decreasing in general."""
    basis = basis or enumerate_basis(2)
    h = effective_hamiltonian(params, basis)
    eye = np.eye(basis.dim)
    g = -1j * _left(h, eye) + 1j * _right(h.conj().T, eye)
    return Generator(g, basis, "effective_hamiltonian_part")


def build_strict_no_jump_generator(params: SystemParams, basis: BasisSpec | None = None) -> Generator:
    g = build_effective_hamiltonian_part(params, basis)
    return Generator(g.matrix.copy(), g.basis, "no_jump_strict")


def _element_mask(basis: BasisSpec, states) -> np.ndarray:
    """Boolean mask over vectorized elements with both indices in ``states``."""
    idx = [basis.index(*s) for s in states if basis.contains(*s)]
    mask = np.zeros((basis.dim, basis.dim), dtype=bool)
    mask[np.ix_(idx, idx)] = True
    return mask.reshape(-1)


def build_b26_generator(params: SystemParams, basis: BasisSpec | None = None) -> Generator:
    """Full generator with the jumps out of the one-photon manifold into the
    ``{|0,0>, |1,1>}`` block removed.

    For symmetric rates its projection onto ``(rho11, rho_ss, rho44, rho_uu,
    rho_m)`` is exactly :func:`build_b26_reduced_rhs`; jumps feeding the
    one- and two-photon mixtures are kept.
    """
    basis = basis or enumerate_basis(2)
    full = build_full_generator(params, basis)
    jump = build_jump_superoperator(params, basis)
    target = _element_mask(basis, [(0, 0), (1, 1)])
    source = _element_mask(basis, [(1, 0), (0, 1)])
    removed = np.where(np.outer(target, source), jump.matrix, 0.0)
    return Generator(full.matrix - removed, basis, "paper_b26")


def build_generator(params: SystemParams, basis: BasisSpec, mode: str = "full") -> Generator:
    """Generator for a propagation mode: ``full``, ``paper-b26`` or ``strict-no-jump``."""
    mode = mode.replace("_", "-")
    if mode == "full":
        return build_full_generator(params, basis)
    if mode == "paper-b26":
        return build_b26_generator(params, basis)
    if mode == "strict-no-jump":
        return build_strict_no_jump_generator(params, basis)
    raise UnsupportedConfigurationError(f"unknown jump mode {mode!r}")


def apply_generator(g: Generator, rho: DensityMatrix) -> DensityMatrix:
    if rho.basis.dim != g.basis.dim:
        raise DimensionError("state and generator live on different bases")
    d = g.basis.dim
    return DensityMatrix((g.matrix @ rho.entries.reshape(-1)).reshape(d, d), rho.basis)


# --- six-state reduced systems --------------------------------------------------


@dataclass(frozen=True)
class ReducedState:
    """Symmetrized populations and the real two-photon coherence.

    ``rho_ss = (rho22 + rho33)/2``, ``rho_uu = (rho55 + rho66)/2``,
    ``rho_m = (rho14 + rho41)/2``.
    """

    rho11: float
    rho_ss: float
    rho44: float
    rho_uu: float
    rho_m: float

    def as_array(self) -> np.ndarray:
        return np.array([self.rho11, self.rho_ss, self.rho44, self.rho_uu, self.rho_m])

    @classmethod
    def from_array(cls, x) -> "ReducedState":
        return cls(*(float(v) for v in x))

    @classmethod
    def from_density_matrix(cls, rho: DensityMatrix) -> "ReducedState":
        return cls(
            rho.population(1),
            0.5 * (rho.population(2) + rho.population(3)),
            rho.population(4),
            0.5 * (rho.population(5) + rho.population(6)),
            0.5 * (rho.element(1, 4) + rho.element(4, 1)).real,
        )

    @property
    def norm(self) -> float:
        return self.rho11 + 2 * self.rho_ss + self.rho44 + 2 * self.rho_uu


def _symmetric_nm(params: SystemParams):
    if not params.is_symmetric:
        raise UnsupportedConfigurationError(
            "reduced equations need kappa1 = kappa2 = kappa12 and equal N"
        )
    if params.m.imag != 0.0:
        raise UnsupportedConfigurationError("reduced equations need real M")
    return params.n_a, params.m.real, params.kappa1


def build_b26_reduced_rhs(params: SystemParams) -> Callable[[ReducedState], ReducedState]:
    """No-jump equations for the reduced variables (symmetric rates only)."""
    n, m, k = _symmetric_nm(params)

    def rhs(x: ReducedState) -> ReducedState:
        return ReducedState(
            rho11=-2 * n * k * x.rho11 + 2 * m * k * x.rho_m,
            rho_ss=(
                -(4 * n + 1) * k * x.rho_ss
                + (n + 1) * k * (x.rho44 + 2 * x.rho_uu)
                + n * k * x.rho11
                - 2 * m * k * x.rho_m
            ),
            rho44=-2 * (n + 1) * k * x.rho44 + 2 * m * k * x.rho_m,
            rho_uu=-2 * (n + 1) * k * x.rho_uu + 2 * n * k * x.rho_ss,
            rho_m=-(2 * n + 1) * k * x.rho_m + m * k * (x.rho11 + x.rho44),
        )

    return rhs


def build_reduced_full_rhs(params: SystemParams) -> Callable[[ReducedState], ReducedState]:
    """Reduced equations of the full dynamics (with jumps), symmetric rates."""
    n, m, k = _symmetric_nm(params)

    def rhs(x: ReducedState) -> ReducedState:
        return ReducedState(
            rho11=-2 * n * k * x.rho11 + 2 * (n + 1) * k * x.rho_ss + 2 * m * k * x.rho_m,
            rho_ss=(
                -(4 * n + 1) * k * x.rho_ss
                + (n + 1) * k * (x.rho44 + 2 * x.rho_uu)
                + n * k * x.rho11
                - 2 * m * k * x.rho_m
            ),
            rho44=-2 * (n + 1) * k * x.rho44 + 2 * n * k * x.rho_ss + 2 * m * k * x.rho_m,
            rho_uu=-2 * (n + 1) * k * x.rho_uu + 2 * n * k * x.rho_ss,
            rho_m=-(2 * n + 1) * k * x.rho_m + m * k * (x.rho11 + x.rho44 - 2 * x.rho_ss),
        )

    return rhs


A2_KEYS = ("11", "22", "33", "44", "55", "66", "14")


def reduced_rhs_A2(params: SystemParams, rho: dict) -> dict:
    """Hand-written equations for the six populations and ``rho14``.

    ``rho`` maps ``"11"``, ..., ``"66"``, ``"14"`` and ``"41"`` to element
    values (six-state labels).  Returns derivatives for the keys in
    ``A2_KEYS``.  Independent of the superoperator construction; used as its
    oracle.
    """
    n1, n2 = params.n_a, params.n_b
    k1, k2, k12 = params.kappa1, params.kappa2, params.kappa12
    m = params.m
    r = rho
    # M-weighted two-photon coherence feeding the populations
    cm = k12 * (m * r["41"] + np.conj(m) * r["14"])
    out = {
        "11": -(n1 * k1 + n2 * k2) * r["11"] + (n1 + 1) * k1 * r["22"] + (n2 + 1) * k2 * r["33"] + cm,
        "22": (
            -((2 * n1 + n1 + 1) * k1 + n2 * k2) * r["22"]
            + (n2 + 1) * k2 * r["44"]
            + n1 * k1 * r["11"]
            + 2 * (n1 + 1) * k1 * r["55"]
            - cm
        ),
        "33": (
            -((2 * n2 + n2 + 1) * k2 + n1 * k1) * r["33"]
            + (n1 + 1) * k1 * r["44"]
            + n2 * k2 * r["11"]
            + 2 * (n2 + 1) * k2 * r["66"]
            - cm
        ),
        "44": -((n1 + 1) * k1 + (n2 + 1) * k2) * r["44"] + n2 * k2 * r["22"] + n1 * k1 * r["33"] + cm,
        "55": -2 * (n1 + 1) * k1 * r["55"] + 2 * n1 * k1 * r["22"],
        "66": -2 * (n2 + 1) * k2 * r["66"] + 2 * n2 * k2 * r["33"],
        "14": (
            -0.5 * ((2 * n1 + 1) * k1 + (2 * n2 + 1) * k2) * r["14"]
            + m * k12 * (r["11"] + r["44"] - r["22"] - r["33"])
        ),
    }
    return out
