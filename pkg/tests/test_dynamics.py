import math

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import M0, N0, random_density_matrix, random_params
from sqtransfer.dynamics import (
    StateValidityWarning,
    Tolerances,
    check_density_matrix,
    propagate,
    rk4_step,
    rk4_step_matrix,
    steady_state,
)
from sqtransfer.errors import DegenerateSteadyStateError, DimensionError, DomainError
from sqtransfer.hilbert import DensityMatrix, enumerate_basis
from sqtransfer.liouvillian import (
    Generator,
    SystemParams,
    build_full_generator,
    build_generator,
    build_strict_no_jump_generator,
)
from sqtransfer.observables import logarithmic_negativity, purity, superposition_populations


def _exact(g, rho, t):
    d = rho.basis.dim
    return (expm(g.matrix * t) @ rho.entries.reshape(-1)).reshape(d, d)


def test_staged_step_equals_step_matrix(rng, basis2):
    g = build_full_generator(random_params(rng, complex_m=True), basis2)
    rho = random_density_matrix(basis2, rng)
    staged = rk4_step(g, rho, 0.05).entries.reshape(-1)
    assert np.allclose(rk4_step_matrix(g, 0.05) @ rho.entries.reshape(-1), staged, atol=1e-15)


def test_fourth_order_convergence(rng, basis2):
    g = build_full_generator(random_params(rng), basis2)
    rho0 = random_density_matrix(basis2, rng)
    errors = []
    for dt in (0.1, 0.05):
        rho = rho0
        for _ in range(round(1.0 / dt)):
            rho = rk4_step(g, rho, dt)
        errors.append(np.max(np.abs(rho.entries - _exact(g, rho0, 1.0))))
    assert 12 < errors[0] / errors[1] < 20


def test_rk4_rejects_bad_input(sym_params, basis2):
    g = build_full_generator(sym_params, basis2)
    rho = DensityMatrix.basis_projector(basis2, 1)
    with pytest.raises(DomainError):
        rk4_step(g, rho, 0.0)
    with pytest.raises(DimensionError):
        rk4_step(g, DensityMatrix.basis_projector(enumerate_basis(3), 1), 0.1)


def test_zero_generator_is_identity(rng, basis2):
    g = Generator(np.zeros((36, 36), dtype=complex), basis2, "full")
    rho = random_density_matrix(basis2, rng)
    rec = propagate(g, rho, 1.0, keep_states=True)
    assert np.array_equal(rec.states[-1].entries, rho.entries)


def test_two_photon_state_decays_exponentially(basis2):
    p = SystemParams.symmetric(0.0, 0.0, kappa=0.7)
    g = build_full_generator(p, basis2)
    rec = propagate(g, DensityMatrix.basis_projector(basis2, 5), 2.0)
    assert np.allclose(rec.population(5), np.exp(-2 * 0.7 * rec.times), atol=1e-11)
    # cascade |2,0> -> |1,0> -> |0,0>
    e = np.exp(-0.7 * rec.times)
    assert np.allclose(rec.population(2), 2 * e * (1 - e), atol=1e-11)


def test_vacuum_decay_of_pair(basis2):
    g = build_full_generator(SystemParams.symmetric(0.0, 0.0), basis2)
    rec = propagate(g, DensityMatrix.basis_projector(basis2, 4), 3.0)
    e = np.exp(-rec.times)
    assert np.allclose(rec.population(4), e * e, atol=1e-11)
    assert np.allclose(rec.population(2), e * (1 - e), atol=1e-11)


def test_matches_matrix_exponential(rng, basis2):
    g = build_full_generator(random_params(rng, complex_m=True), basis2)
    rho0 = random_density_matrix(basis2, rng)
    rec = propagate(g, rho0, 2.0, keep_states=True)
    assert np.max(np.abs(rec.states[-1].entries - _exact(g, rho0, 2.0))) < 1e-11


def test_step_halving(sym_params, basis2):
    g = build_full_generator(sym_params, basis2)
    rho0 = DensityMatrix.basis_projector(basis2, 2)
    a = propagate(g, rho0, 5.0, dt=1e-2, sample_interval=0.1)
    b = propagate(g, rho0, 5.0, dt=5e-3, sample_interval=0.1)
    assert np.max(np.abs(a["negativity"] - b["negativity"])) < 1e-8
    assert np.max(np.abs(a.population(2) - b.population(2))) < 1e-9


def test_trace_and_validity_along_trajectory(sym_params, basis2):
    g = build_full_generator(sym_params, basis2)
    rec = propagate(g, DensityMatrix.basis_projector(basis2, 2), 10.0)
    assert np.max(np.abs(rec["trace"] - 1)) < 1e-12
    assert np.all(rec["min_eigenvalue"] > -1e-9)
    assert not rec.flagged.any()
    # the two-photon shell of the K=2 basis is populated well above 1e-3
    assert any("boundary-shell" in w for w in rec.warnings)
    assert len(rec.times) == 1001 and rec.times[-1] == pytest.approx(10.0)


def test_sample_interval_must_be_multiple(sym_params, basis2):
    g = build_full_generator(sym_params, basis2)
    with pytest.raises(DomainError):
        propagate(g, DensityMatrix.basis_projector(basis2, 1), 1.0, dt=0.003, sample_interval=0.01)


def test_strict_no_jump_trace_decays(sym_params, basis2):
    g = build_strict_no_jump_generator(sym_params, basis2)
    rec = propagate(g, DensityMatrix.basis_projector(basis2, 2), 5.0)
    tr = rec["trace"]
    assert np.all(np.diff(tr) <= 1e-15) and tr[-1] < 0.5
    assert not rec.flagged.any()


def test_invalid_state_is_flagged(sym_params, basis2):
    g = build_full_generator(sym_params, basis2)
    bad = DensityMatrix.from_diagonal(basis2, [1.2, -0.2])
    with pytest.warns(StateValidityWarning):
        rec = propagate(g, bad, 0.05)
    assert rec.flagged[0] and any("positivity" in w for w in rec.warnings)


def test_check_density_matrix_flags(basis2):
    e = np.zeros((6, 6), dtype=complex)
    e[0, 0], e[0, 1] = 0.5, 0.1
    diag = check_density_matrix(DensityMatrix(e, basis2))
    assert "trace" in diag.flags and "hermiticity" in diag.flags
    ok = check_density_matrix(DensityMatrix.basis_projector(basis2, 1), Tolerances())
    assert ok.ok and ok.trace == 1.0


def test_steady_state_by_solve_and_by_propagation(sym_params, basis2):
    g = build_full_generator(sym_params, basis2)
    rho_ss = steady_state(g)
    rec = propagate(g, DensityMatrix.basis_projector(basis2, 2), 50.0, sample_interval=1.0, keep_states=True)
    assert np.max(np.abs(rec.states[-1].entries - rho_ss.entries)) < 1e-6
    assert rho_ss.population(1) == pytest.approx(0.9, abs=1e-12)
    assert rho_ss.element(1, 4) == pytest.approx(0.3, abs=1e-12)
    assert purity(rho_ss) == pytest.approx(1.0, abs=1e-12)
    assert superposition_populations(rho_ss, N0).rho_alpha_alpha == pytest.approx(1.0, abs=1e-12)
    assert logarithmic_negativity(rho_ss) == pytest.approx(math.log2(1.6), abs=1e-10)


@pytest.mark.parametrize("K", [2, 3, 4])
def test_uncorrelated_steady_state_is_thermal(K):
    n = 0.4
    basis = enumerate_basis(K)
    rho = steady_state(build_full_generator(SystemParams.symmetric(n, 0.0), basis))
    w = np.array([(n / (n + 1)) ** s.total for s in basis.states])
    assert np.allclose(rho.entries, np.diag(w / w.sum()), atol=1e-12)
    assert logarithmic_negativity(rho) == 0.0


def test_steady_state_errors(sym_params, basis2):
    with pytest.raises(DomainError):
        steady_state(build_generator(sym_params, basis2, "paper-b26"))
    with pytest.raises(DegenerateSteadyStateError):
        steady_state(Generator(np.zeros((36, 36), dtype=complex), basis2, "full"))
