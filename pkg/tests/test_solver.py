"""Tests for sgsvp_solver.
"""
import math

import numpy as np
import pytest

from sgsvp import sgsvp_solver
from sgsvp.sgsvp_errors import (
    DegenerateDenominatorError,
    InputError,
    SolverError,
)
from sgsvp.sgsvp_solver import PenaltyKind, PgdConfig

import oracles


def _random_pair(gen, num_shape=(6, 4), den_shape=(5, 4), boost=2.0):
    """A well-conditioned random pair: boost * [I; 0] plus Gaussian noise."""
    m = num_shape[1]
    A = 0.3 * gen.standard_normal(num_shape)
    B = 0.3 * gen.standard_normal(den_shape)
    A[:m] += boost * np.eye(m)
    B[:m] += boost * np.eye(m)
    return A, B


def _safe_alpha(A, B):
    # small enough for gradient descent on the Rayleigh quotient of any
    # iterate with norm >= 1
    sigma_B = np.linalg.svd(B, compute_uv=False)
    lam_max = float(
        np.max(np.linalg.eigvals(np.linalg.solve(B.T @ B, A.T @ A)).real)
    )
    return 0.5 * sigma_B[-1] ** 2 / (sigma_B[0] ** 2 * lam_max)


def test_rayleigh_quotient():
    I2 = np.eye(2)
    r = sgsvp_solver.rayleigh_quotient(I2, 2 * I2, np.array([1.0, 0.0]))
    assert r == 0.25, f"{r} != 0.25"
    A = np.array([[1.0, 2.0], [0.5, -1.0], [3.0, 0.0]])
    r = sgsvp_solver.rayleigh_quotient(A, A, np.array([0.3, -0.7]))
    assert math.isclose(r, 1.0, rel_tol=1e-15), f"{r} != 1.0"
    r = sgsvp_solver.rayleigh_quotient(
        np.array([[1.0, 0.0]]), np.array([[0.0, 1.0]]), np.array([0.0, 1.0])
    )
    assert r == 0.0, f"{r} != 0.0"


def test_rayleigh_quotient_scale_invariant():
    gen = oracles.rng(1)
    for _ in range(20):
        A, B = _random_pair(gen)
        z = gen.standard_normal(4)
        r = sgsvp_solver.rayleigh_quotient(A, B, z)
        for c in (-3.0, 1e-3, 250.0):
            r_c = sgsvp_solver.rayleigh_quotient(A, B, c * z)
            assert math.isclose(r, r_c, rel_tol=1e-12), f"{r} != {r_c}"


def test_degenerate_denominator():
    with pytest.raises(DegenerateDenominatorError) as excinfo:
        sgsvp_solver.rayleigh_quotient(
            np.array([[1.0, 0.0]]), np.array([[0.0, 1.0]]), np.array([1.0, 0.0])
        )
    assert "initial iterate" in str(excinfo.value)
    with pytest.raises(DegenerateDenominatorError) as excinfo:
        sgsvp_solver.solve(
            np.eye(2), np.zeros((2, 2)), PgdConfig(), PenaltyKind.L1, 1.0
        )
    assert excinfo.value.iteration == 0


def test_gradient():
    I2 = np.eye(2)
    grad = sgsvp_solver.gradient(I2, I2, np.array([1.0, 0.0]), 1.0)
    assert np.array_equal(grad, [0.0, 0.0]), f"{grad} != [0, 0]"

    A_num = np.diag([2.0, 1.0])
    z = np.array([1.0, 1.0])
    r = sgsvp_solver.rayleigh_quotient(A_num, I2, z)
    grad = sgsvp_solver.gradient(A_num, I2, z, r)
    assert grad[0] > 0 and grad[1] < 0, f"sign pattern of {grad} != [+, -]"
    assert np.allclose(grad, [1.5, -1.5]), f"{grad} != [1.5, -1.5]"


def test_gradient_finite_differences():
    gen = oracles.rng(2)
    for _ in range(50):
        A, B = _random_pair(gen, boost=1.0)
        z = gen.standard_normal(4)
        r = sgsvp_solver.rayleigh_quotient(A, B, z)
        grad = sgsvp_solver.gradient(A, B, z, r)
        fd = oracles.central_difference_gradient(
            lambda v, A=A, B=B: sgsvp_solver.rayleigh_quotient(A, B, v), z
        )
        np.testing.assert_allclose(
            grad, fd, rtol=1e-5, atol=1e-5 * np.abs(fd).max()
        )


def test_gd_step():
    for z, grad, alpha, expected in (
        ([1.0, 1.0], [0.0, 0.0], 7.0, [1.0, 1.0]),
        ([1.0, 0.0], [2.0, -2.0], 0.5, [0.0, 1.0]),
        ([0.0, 0.0], [3.0, -4.0], 1.0, [-3.0, 4.0]),
    ):
        result = sgsvp_solver.gd_step(np.array(z), np.array(grad), alpha)
        assert np.array_equal(result, expected), f"{result} != {expected}"


def test_prox_l1():
    result = sgsvp_solver.prox_l1(np.array([3.0, -1.0, 0.2]), 1.0, 1.0)
    assert np.allclose(result, [2.5, -0.5, 0.0]), f"{result}"
    result = sgsvp_solver.prox_l1(np.zeros(3), 0.1, 0.3)
    assert np.array_equal(result, np.zeros(3))


def test_prox_l1_optimality():
    gen = oracles.rng(3)
    for _ in range(20):
        y = gen.uniform(-2, 2, size=50)
        alpha, delta = gen.uniform(0.01, 1, size=2)
        thresh = alpha * delta / 2
        z = sgsvp_solver.prox_l1(y, alpha, delta)
        assert np.count_nonzero(z) <= np.count_nonzero(y)
        for y_l, z_l in zip(y, z):
            if z_l == 0:
                assert abs(y_l) <= thresh, f"{y_l} zeroed at threshold {thresh}"
            else:
                assert math.isclose(
                    z_l, y_l - math.copysign(thresh, z_l), rel_tol=1e-12
                ), f"{z_l} != {y_l} - sign * {thresh}"


def test_prox_oracles():
    gen = oracles.rng(4)
    ys = gen.uniform(-2, 2, size=1000)
    alphas = gen.uniform(0.01, 1, size=1000)
    deltas = gen.uniform(0.01, 2, size=1000)
    ds = gen.uniform(0.1, 10, size=1000)
    for y, alpha, delta, d in zip(ys, alphas, deltas, ds):
        z = sgsvp_solver.prox_l1(np.array([y]), alpha, delta)[0]
        z_grid = oracles.brute_force_prox_l1(y, alpha, delta)
        assert abs(z - z_grid) <= 1e-4, f"prox_l1({y}): {z} vs grid {z_grid}"
        z = sgsvp_solver.prox_lq(np.array([y]), np.array([d]), alpha, delta)[0]
        z_grid = oracles.brute_force_prox_lq(y, d, alpha, delta)
        assert abs(z - z_grid) <= 1e-4, f"prox_lq({y}): {z} vs grid {z_grid}"


def test_reweight_diagonal():
    d = sgsvp_solver.reweight_diagonal(np.zeros(4), 1.0, 0.5)
    assert np.array_equal(d, np.ones(4)), f"{d} != ones"
    d = sgsvp_solver.reweight_diagonal(np.array([math.sqrt(3)]), 1.0, 1.0)
    assert np.allclose(d, [0.5]), f"{d} != [0.5]"
    z = np.array([0.0, 0.1, -0.2, 0.5, -1.0, 4.0])
    d = sgsvp_solver.reweight_diagonal(z, 10**-2.5, 0.3)
    assert (d > 0).all()
    assert (np.diff(d[np.argsort(np.abs(z))]) < 0).all(), "d not decreasing in |z|"
    with pytest.raises(InputError):
        sgsvp_solver.reweight_diagonal(z, 0.0, 0.5)


def test_prox_lq():
    y = np.array([4.0, -2.0, 0.5])
    result = sgsvp_solver.prox_lq(y, np.ones(3), 1.0, 1.0)
    assert np.array_equal(result, y / 2), f"{result} != {y / 2}"
    result = sgsvp_solver.prox_lq(y, np.ones(3), 1e-300, 1e-300)
    assert np.array_equal(result, y)
    gen = oracles.rng(5)
    for _ in range(20):
        y = gen.standard_normal(10)
        d = gen.uniform(0.1, 10, size=10)
        z = sgsvp_solver.prox_lq(y, d, 0.01, 0.5)
        assert np.linalg.norm(z) < np.linalg.norm(y)


def test_pgd_config():
    cfg = PgdConfig(init="seeded-gaussian")
    assert cfg.init is sgsvp_solver.InitMode.SEEDED_GAUSSIAN
    for bad in (
        {"maxiter": 0},
        {"q": 0.0},
        {"q": 1.5},
        {"alpha": -1.0},
        {"delta1": 0.0},
        {"epsilon": 0.0},
        {"tol": -1e-4},
        {"init": "zeros"},
    ):
        with pytest.raises(InputError):
            PgdConfig(**bad)


def test_initial_iterate():
    z = sgsvp_solver.initial_iterate(4, PgdConfig())
    assert np.allclose(z, 0.5), f"{z}"
    cfg = PgdConfig(init="seeded-gaussian", seed=3)
    z1 = sgsvp_solver.initial_iterate(6, cfg)
    z2 = sgsvp_solver.initial_iterate(6, cfg)
    assert np.array_equal(z1, z2)
    assert math.isclose(np.linalg.norm(z1), 1.0)


def test_solve_closed_form():
    cfg = PgdConfig(alpha=1e-2)
    z, trace = sgsvp_solver.solve(
        np.array([[1.0, 0.0]]),
        np.array([[0.0, 1.0]]),
        cfg,
        PenaltyKind.L1,
        1e-6,
    )
    assert trace.converged
    assert trace.final_rayleigh <= 1e-3, f"{trace.final_rayleigh}"
    assert abs(z[0]) < 1e-2 * abs(z[1]), f"{z}"


def test_solve_trace_lengths():
    gen = oracles.rng(6)
    A, B = _random_pair(gen)
    _, trace = sgsvp_solver.solve(
        A, B, PgdConfig(maxiter=1, alpha=1e-3), PenaltyKind.L1, 0.1
    )
    assert len(trace.objective_history) == 2
    assert trace.iterations_run == 1
    for kind, q in (
        (PenaltyKind.L1, 1.0),
        (PenaltyKind.LQ, 0.5),
        (PenaltyKind.WEIGHTED_L1, 1.0),
    ):
        _, trace = sgsvp_solver.solve(
            A, B, PgdConfig(q=q, maxiter=25, tol=0.0, alpha=1e-3), kind, 0.1
        )
        assert len(trace.objective_history) == 26, kind
        assert len(trace.relative_change_history) == trace.iterations_run == 25
        assert not trace.converged


def test_solve_converged_flag():
    gen = oracles.rng(7)
    A, B = _random_pair(gen)
    cfg = PgdConfig(alpha=1e-3, tol=1e-4)
    _, trace = sgsvp_solver.solve(A, B, cfg, PenaltyKind.L1, 0.1)
    if trace.converged:
        assert trace.relative_change_history[-1] < cfg.tol
        assert trace.iterations_run < cfg.maxiter
    assert len(trace.objective_history) == trace.iterations_run + 1


def test_solve_lq_step_order():
    gen = oracles.rng(8)
    A, B = _random_pair(gen)
    cfg = PgdConfig(q=0.5, alpha=1e-2, maxiter=1, tol=0.0)
    delta = 0.3
    z, _ = sgsvp_solver.solve(A, B, cfg, PenaltyKind.LQ, delta)
    # one iteration by hand, with D evaluated at the incoming iterate
    z0 = sgsvp_solver.initial_iterate(4, cfg)
    d = sgsvp_solver.reweight_diagonal(z0, cfg.epsilon, cfg.q)
    r = sgsvp_solver.rayleigh_quotient(A, B, z0)
    y = sgsvp_solver.gd_step(z0, sgsvp_solver.gradient(A, B, z0, r), cfg.alpha)
    expected = sgsvp_solver.prox_lq(y, d, cfg.alpha, delta)
    np.testing.assert_allclose(z, expected, rtol=1e-14)


def test_solve_deterministic():
    gen = oracles.rng(9)
    A, B = _random_pair(gen)
    cfg = PgdConfig(q=0.3, init="seeded-gaussian", seed=11, maxiter=200)
    z1, trace1 = sgsvp_solver.solve(A, B, cfg, PenaltyKind.LQ, 0.05)
    z2, trace2 = sgsvp_solver.solve(A, B, cfg, PenaltyKind.LQ, 0.05)
    assert np.array_equal(z1, z2)
    assert np.array_equal(trace1.objective_history, trace2.objective_history)


def test_solve_rejects_lq_at_q_1():
    with pytest.raises(InputError):
        sgsvp_solver.solve(
            np.eye(3), np.eye(3), PgdConfig(q=1.0), PenaltyKind.LQ, 0.1
        )
    assert sgsvp_solver.penalty_for_q(1.0) is PenaltyKind.WEIGHTED_L1
    assert sgsvp_solver.penalty_for_q(0.4) is PenaltyKind.LQ


def test_solve_divergence():
    gen = oracles.rng(10)
    A, B = _random_pair(gen)
    with pytest.raises(SolverError):
        sgsvp_solver.solve(A, B, PgdConfig(alpha=1e300), PenaltyKind.L1, 0.1)


def test_solve_matches_generalized_eigenvalue():
    gen = oracles.rng(11)
    for _ in range(25):
        A, B = _random_pair(gen)
        cfg = PgdConfig(alpha=_safe_alpha(A, B), maxiter=8000, tol=0.0)
        _, trace = sgsvp_solver.solve(A, B, cfg, PenaltyKind.L1, 1e-8)
        lam = oracles.smallest_generalized_eigenvalue(A, B)
        assert trace.final_rayleigh >= lam * (1 - 1e-9), (
            f"Rayleigh quotient {trace.final_rayleigh} below the minimum {lam}"
        )
        assert trace.final_rayleigh <= 1.05 * lam, (
            f"Rayleigh quotient {trace.final_rayleigh} not within 5% of {lam}"
        )


def test_solve_decreases_objective():
    gen = oracles.rng(12)
    n_decreased = 0
    for _ in range(20):
        A, B = _random_pair(gen)
        cfg = PgdConfig(alpha=_safe_alpha(A, B), maxiter=2000)
        _, trace = sgsvp_solver.solve(A, B, cfg, PenaltyKind.L1, 1e-3)
        n_decreased += trace.final_objective <= trace.objective_history[0]
    assert n_decreased >= 18, f"objective decreased in only {n_decreased} of 20"


if __name__ == "__main__":
    test_rayleigh_quotient()
    test_rayleigh_quotient_scale_invariant()
    test_degenerate_denominator()
    test_gradient()
    test_gradient_finite_differences()
    test_gd_step()
    test_prox_l1()
    test_prox_l1_optimality()
    test_prox_oracles()
    test_reweight_diagonal()
    test_prox_lq()
    test_pgd_config()
    test_initial_iterate()
    test_solve_closed_form()
    test_solve_trace_lengths()
    test_solve_converged_flag()
    test_solve_lq_step_order()
    test_solve_deterministic()
    test_solve_rejects_lq_at_q_1()
    test_solve_divergence()
    test_solve_matches_generalized_eigenvalue()
    test_solve_decreases_objective()
