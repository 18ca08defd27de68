"""Truncated two-mode Fock space for the cavity pair.

States are restricted to ``n_A + n_B <= K``.  For ``K = 2`` the ordering is

    |1> = |0,0>, |2> = |1,0>, |3> = |0,1>, |4> = |1,1>, |5> = |2,0>, |6> = |0,2>

so that matrix index ``i - 1`` is the six-state label ``i``.  Larger ``K``
orders states by total photon number, then by ``n_A`` descending.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, InvalidTruncationError

# label -> (n_A, n_B) for the six-state basis
STATE_LABELS = {
    1: (0, 0),
    2: (1, 0),
    3: (0, 1),
    4: (1, 1),
    5: (2, 0),
    6: (0, 2),
}


@dataclass(frozen=True, order=True)
class BasisState:
    n_a: int
    n_b: int

    def __post_init__(self):
        if self.n_a < 0 or self.n_b < 0:
            raise InvalidTruncationError(f"negative photon number in {self!r}")

    @property
    def total(self) -> int:
        return self.n_a + self.n_b


@dataclass(frozen=True)
class BasisSpec:
    """Ordered list of two-mode Fock states with total photon number <= K."""

    K: int
    states: tuple[BasisState, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {(s.n_a, s.n_b): i for i, s in enumerate(self.states)}
        )

    @property
    def dim(self) -> int:
        return len(self.states)

    def index(self, n_a: int, n_b: int) -> int:
        try:
            return self._index[(n_a, n_b)]
        except KeyError:
            raise KeyError(f"state ({n_a},{n_b}) not in basis with K={self.K}") from None

    def contains(self, n_a: int, n_b: int) -> bool:
        return (n_a, n_b) in self._index

    def label_index(self, label: int) -> int:
        """Matrix index of a six-state label (1..6)."""
        return self.index(*STATE_LABELS[label])

    def shell_indices(self, n: int | None = None) -> list[int]:
        """Indices of states with total photon number ``n`` (default: K)."""
        n = self.K if n is None else n
        return [i for i, s in enumerate(self.states) if s.total == n]


def enumerate_basis(K: int) -> BasisSpec:
    if int(K) != K or K < 1:
        raise InvalidTruncationError(f"truncation K must be an integer >= 1, got {K!r}")
    K = int(K)
    if K == 2:
        pairs = [STATE_LABELS[i] for i in range(1, 7)]
    else:
        pairs = [(n - j, j) for n in range(K + 1) for j in range(n + 1)]
    return BasisSpec(K, tuple(BasisState(a, b) for a, b in pairs))


@dataclass(frozen=True, eq=False)
class ModeOperator:
    matrix: np.ndarray
    basis: BasisSpec
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.basis.dim, self.basis.dim):
            raise DimensionError(
                f"operator shape {m.shape} does not match basis dimension {self.basis.dim}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def dag(self) -> "ModeOperator":
        return operator_adjoint(self)

    def __matmul__(self, other: "ModeOperator") -> "ModeOperator":
        return operator_product(self, other)


def annihilation_operator(mode: str, basis: BasisSpec) -> ModeOperator:
    mode = mode.upper()
    if mode not in ("A", "B"):
        raise ValueError(f"mode must be 'A' or 'B', got {mode!r}")
    m = np.zeros((basis.dim, basis.dim), dtype=complex)
    for col, s in enumerate(basis.states):
        n = s.n_a if mode == "A" else s.n_b
        if n == 0:
            continue
        target = (s.n_a - 1, s.n_b) if mode == "A" else (s.n_a, s.n_b - 1)
        m[basis.index(*target), col] = np.sqrt(n)
    return ModeOperator(m, basis, f"a_{mode}")


def creation_operator(mode: str, basis: BasisSpec) -> ModeOperator:
    return operator_adjoint(annihilation_operator(mode, basis))


def operator_adjoint(op: ModeOperator) -> ModeOperator:
    label = op.label[:-1] if op.label.endswith("†") else op.label + "†"
    return ModeOperator(op.matrix.conj().T, op.basis, label)


def operator_product(x: ModeOperator, y: ModeOperator) -> ModeOperator:
    if x.basis != y.basis:
        raise DimensionError("operators live on different bases")
    return ModeOperator(x.matrix @ y.matrix, x.basis, f"{x.label} {y.label}".strip())


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Complex D x D state on a truncated basis.

    Construction does not validate physicality; see
    :func:`sqtransfer.dynamics.check_density_matrix`.
    """

    entries: np.ndarray
    basis: BasisSpec

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        if e.shape != (self.basis.dim, self.basis.dim):
            raise DimensionError(
                f"density matrix shape {e.shape} does not match basis dimension {self.basis.dim}"
            )
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @classmethod
    def from_diagonal(cls, basis: BasisSpec, weights: Sequence[float]) -> "DensityMatrix":
        """Diagonal state; ``weights`` are ordered by basis index."""
        w = np.zeros(basis.dim)
        w[: len(weights)] = weights
        return cls(np.diag(w).astype(complex), basis)

    @classmethod
    def basis_projector(cls, basis: BasisSpec, label: int) -> "DensityMatrix":
        """|label><label| for a six-state label 1..6."""
        e = np.zeros((basis.dim, basis.dim), dtype=complex)
        i = basis.label_index(label)
        e[i, i] = 1.0
        return cls(e, basis)

    @classmethod
    def pure(cls, basis: BasisSpec, amplitudes: dict) -> "DensityMatrix":
        """|psi><psi| from a mapping ``(n_A, n_B) -> amplitude`` (not renormalized)."""
        psi = np.zeros(basis.dim, dtype=complex)
        for (na, nb), c in amplitudes.items():
            psi[basis.index(na, nb)] = c
        return cls(np.outer(psi, psi.conj()), basis)

    def element(self, i: int, j: int) -> complex:
        """Matrix element rho_ij by six-state labels."""
        return complex(self.entries[self.basis.label_index(i), self.basis.label_index(j)])

    def population(self, label: int) -> float:
        return self.element(label, label).real

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)


def to_tensor_grid(rho: DensityMatrix | np.ndarray, basis: BasisSpec) -> np.ndarray:
    """Embed a truncated state into the (K+1)^2 product grid.

    Grid index of ``(n_A, n_B)`` is ``n_A * (K + 1) + n_B``; states outside the
    truncation get zero rows and columns.
    """
    entries = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
    side = basis.K + 1
    grid_idx = np.array([s.n_a * side + s.n_b for s in basis.states])
    out = np.zeros((side * side, side * side), dtype=complex)
    out[np.ix_(grid_idx, grid_idx)] = entries
    return out
