"""Time propagation, steady states and state diagnostics."""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSteadyStateError, DimensionError, DomainError
from .hilbert import DensityMatrix
from .linalg import hermitian_eigenvalues
from .liouvillian import Generator, apply_generator
from .observables import coherences, logarithmic_negativity

log = logging.getLogger(__name__)

__all__ = [
    "DensityMatrix",
    "Tolerances",
    "StateDiagnostics",
    "TrajectoryRecord",
    "StateValidityWarning",
    "rk4_step",
    "rk4_step_matrix",
    "propagate",
    "steady_state",
    "hermitian_eigenvalues",
    "check_density_matrix",
]

SHELL_WARNING = 1e-3
STEADY_RESIDUAL = 1e-10


class StateValidityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Tolerances:
    trace: float = 1e-9
    hermiticity: float = 1e-10
    min_eigenvalue: float = -1e-9
    shell_population: float = SHELL_WARNING


@dataclass(frozen=True)
class StateDiagnostics:
    trace: float
    trace_deviation: float
    hermiticity_deviation: float
    min_eigenvalue: float
    shell_population: float
    flags: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.flags


def check_density_matrix(
    rho: DensityMatrix, tolerances: Tolerances = Tolerances(), trace_preserving: bool = True
) -> StateDiagnostics:
    """Trace, Hermiticity, positivity and boundary-shell population of ``rho``.

    With ``trace_preserving=False`` (no-jump propagation) a trace below one is
    reported but not flagged.  Shell population above its threshold is
    flagged as ``"shell"``, which callers treat as a warning.
    """
    e = rho.entries
    tr = float(np.trace(e).real)
    herm = float(np.max(np.abs(e - e.conj().T))) if e.size else 0.0
    min_eig = float(hermitian_eigenvalues(0.5 * (e + e.conj().T))[0])
    shell = float(sum(e[i, i].real for i in rho.basis.shell_indices()))
    flags = []
    if trace_preserving and abs(tr - 1.0) > tolerances.trace:
        flags.append("trace")
    if herm > tolerances.hermiticity:
        flags.append("hermiticity")
    if min_eig < tolerances.min_eigenvalue:
        flags.append("positivity")
    if shell > tolerances.shell_population:
        flags.append("shell")
    return StateDiagnostics(tr, tr - 1.0, herm, min_eig, shell, tuple(flags))


def _rhs(g: Generator, v: np.ndarray) -> np.ndarray:
    return g.matrix @ v


def rk4_step(g: Generator, rho: DensityMatrix, dt: float) -> DensityMatrix:
    """One classical fourth-order Runge-Kutta step of ``d rho/dt = G rho``."""
    if not dt > 0:
        raise DomainError("dt must be positive")
    if rho.basis.dim != g.basis.dim:
        raise DimensionError("state and generator live on different bases")
    v = rho.entries.reshape(-1)
    k1 = _rhs(g, v)
    k2 = _rhs(g, v + 0.5 * dt * k1)
    k3 = _rhs(g, v + 0.5 * dt * k2)
    k4 = _rhs(g, v + dt * k3)
    v = v + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    d = rho.basis.dim
    return DensityMatrix(v.reshape(d, d), rho.basis)


def rk4_step_matrix(g: Generator, dt: float) -> np.ndarray:
    """RK4 update matrix ``I + hG + (hG)^2/2 + (hG)^3/6 + (hG)^4/24``.

    For a constant linear generator this is the same map as :func:`rk4_step`.
    """
    h = dt * g.matrix
    s = np.eye(h.shape[0], dtype=complex)
    term = np.eye(h.shape[0], dtype=complex)
    for k in range(1, 5):
        term = term @ h / k
        s = s + term
    return s


@dataclass
class TrajectoryRecord:
    """Sampled propagation output.

    ``observables`` maps a column name to an array with one entry per time.
    Populations are stored as ``pop_<na><nb>`` (photon numbers), and the
    complex two-photon coherence ``<0,0|rho|1,1>`` as ``rho_00_11``.
    """

    times: np.ndarray
    observables: dict[str, np.ndarray]
    states: list[DensityMatrix] | None = None
    warnings: list[str] = field(default_factory=list)
    flagged: np.ndarray | None = None

    def __getitem__(self, key):
        return self.observables[key]

    def population(self, label: int) -> np.ndarray:
        from .hilbert import STATE_LABELS

        na, nb = STATE_LABELS[label]
        return self.observables[f"pop_{na}{nb}"]


def _sample_observables(rho: DensityMatrix, trace_preserving, tolerances, with_negativity):
    diag = check_density_matrix(rho, tolerances, trace_preserving)
    row = {
        "trace": diag.trace,
        "min_eigenvalue": diag.min_eigenvalue,
        "shell_population": diag.shell_population,
    }
    for i, s in enumerate(rho.basis.states):
        row[f"pop_{s.n_a}{s.n_b}"] = rho.entries[i, i].real
    b = rho.basis
    row["rho_00_11"] = rho.entries[b.index(0, 0), b.index(1, 1)] if b.contains(1, 1) else 0j
    coh = coherences(rho)
    row["gamma12"], row["eta11"], row["eta22"], row["eta12"] = (
        coh.gamma12, coh.eta11, coh.eta22, coh.eta12,
    )
    if with_negativity:
        row["negativity"] = logarithmic_negativity(rho)
    return row, diag


def propagate(
    g: Generator,
    rho0: DensityMatrix,
    t_max: float,
    dt: float = 1e-3,
    sample_interval: float = 0.01,
    keep_states: bool = False,
    with_negativity: bool = True,
    tolerances: Tolerances = Tolerances(),
) -> TrajectoryRecord:
    """Fixed-step RK4 propagation sampled every ``sample_interval``.

    ``sample_interval`` must be an integer multiple of ``dt``.  Samples that
    violate the validity tolerances are flagged and logged; the run goes on.
    """
    if not (t_max > 0 and dt > 0 and sample_interval > 0):
        raise DomainError("t_max, dt and sample_interval must be positive")
    if rho0.basis.dim != g.basis.dim:
        raise DimensionError("state and generator live on different bases")
    steps_per_sample = round(sample_interval / dt)
    if steps_per_sample < 1 or abs(steps_per_sample * dt - sample_interval) > 1e-9 * sample_interval:
        raise DomainError("sample_interval must be an integer multiple of dt")
    n_samples = int(math.floor(t_max / sample_interval + 1e-9))
    trace_preserving = g.kind == "full"
    step = rk4_step_matrix(g, dt)
    d = rho0.basis.dim

    v = rho0.entries.reshape(-1).copy()
    rows, states, flagged, messages = [], [], [], []
    for k in range(n_samples + 1):
        if k:
            for _ in range(steps_per_sample):
                v = step @ v
        rho = DensityMatrix(v.reshape(d, d), rho0.basis)
        row, diag = _sample_observables(rho, trace_preserving, tolerances, with_negativity)
        rows.append(row)
        hard = [f for f in diag.flags if f != "shell"]
        flagged.append(bool(hard))
        if hard:
            msg = f"t={k * sample_interval:.6g}: state validity violated ({', '.join(hard)})"
            messages.append(msg)
            log.warning(msg)
        if keep_states:
            states.append(rho)

    shell_max = max(r["shell_population"] for r in rows)
    # boundary leakage is reported, not flagged per sample
    if shell_max > tolerances.shell_population:
        messages.append(
            f"boundary-shell population reached {shell_max:.3g} "
            f"(threshold {tolerances.shell_population:g}); truncation may be inadequate"
        )
    n_bad = int(sum(flagged))
    if n_bad:
        warnings.warn(f"{n_bad} samples violate state validity", StateValidityWarning, stacklevel=2)

    times = np.arange(n_samples + 1) * sample_interval
    keys = rows[0].keys()
    obs = {key: np.array([r[key] for r in rows]) for key in keys}
    return TrajectoryRecord(times, obs, states if keep_states else None, messages, np.array(flagged))


def steady_state(g: Generator, rank_tol: float = 1e-10) -> DensityMatrix:
    """Stationary state from a dense solve with the trace condition.

    The equation for the first diagonal element is replaced by
    ``trace(rho) = 1``.
    """
    if g.kind != "full":
        raise DomainError("steady state requires the full, trace-preserving generator")
    basis = g.basis
    d = basis.dim
    sv = np.linalg.svd(g.matrix, compute_uv=False)
    null_dim = int(np.sum(sv < rank_tol * max(sv[0], 1.0)))
    if null_dim > 1:
        raise DegenerateSteadyStateError(f"generator has a {null_dim}-dimensional null space")

    a = g.matrix.copy()
    b = np.zeros(d * d, dtype=complex)
    a[0, :] = np.eye(d).reshape(-1)
    b[0] = 1.0
    v = np.linalg.solve(a, b)
    rho = v.reshape(d, d)
    rho = 0.5 * (rho + rho.conj().T)
    residual = float(np.max(np.abs(g.matrix @ rho.reshape(-1))))
    if residual > STEADY_RESIDUAL:
        raise DegenerateSteadyStateError(f"steady-state residual {residual:.3g} too large")
    return DensityMatrix(rho, basis)
