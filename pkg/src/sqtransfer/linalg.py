"""Eigenvalues of small Hermitian matrices by cyclic Jacobi rotations."""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError, DomainError

OFF_TOL = 1e-12
MAX_SWEEPS = 100
HERMITIAN_TOL = 1e-10


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def jacobi_eigenvalues(h, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Ascending eigenvalues of a complex Hermitian matrix.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation.  Iterates until the
    off-diagonal Frobenius norm drops below ``tol``.
    """
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    if n and np.max(np.abs(a - a.conj().T)) > HERMITIAN_TOL:
        raise DomainError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    if n <= 1:
        return np.sort(np.diag(a).real)

    for _ in range(max_sweeps):
        if _off_norm(a) < tol:
            return np.sort(np.diag(a).real)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = abs(apq)
                if g == 0.0:
                    continue
                phase = apq / g
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * g)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # U = diag(1, conj(phase)) @ [[c, s], [-s, c]] on coordinates (p, q)
                u = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = a[:, [p, q]] @ u
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = u.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * g
                a[q, q] = aqq + t * g
    if _off_norm(a) < tol:
        return np.sort(np.diag(a).real)
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")


def irreducible_blocks(h: np.ndarray) -> list[np.ndarray]:
    """Index sets of the connected components of the nonzero pattern of ``h``."""
    n = h.shape[0]
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    rows, cols = np.nonzero(h)
    for i, j in zip(rows, cols):
        ri, rj = find(int(i)), find(int(j))
        if ri != rj:
            parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [np.array(g) for g in groups.values()]


def hermitian_eigenvalues(h, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Sorted eigenvalues, splitting ``h`` into exactly-decoupled blocks first.

    Density matrices of this model are block-sparse (excitation-number
    selection rules), so the split keeps the Jacobi sweeps tiny.
    """
    a = np.asarray(h, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    if a.size and np.max(np.abs(a - a.conj().T)) > HERMITIAN_TOL:
        raise DomainError("matrix is not Hermitian")
    vals = []
    for idx in irreducible_blocks(a):
        if len(idx) == 1:
            vals.append(np.array([a[idx[0], idx[0]].real]))
        else:
            vals.append(jacobi_eigenvalues(a[np.ix_(idx, idx)], tol, max_sweeps))
    return np.sort(np.concatenate(vals)) if vals else np.zeros(0)
