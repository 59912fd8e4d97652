import math

import numpy as np
import pytest

import regret_py as rp

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def test_psi():
    assert rp.psi(0.0) == 0.0
    assert rp.psi(1.0) == pytest.approx(GOLDEN, rel=1e-15)


def test_scalar_fixed_point_and_closed_form():
    sol = rp.solve_phi_tilde(np.eye(1), np.eye(1))
    assert sol.converged
    assert sol.phi_tilde[0, 0] == pytest.approx(0.6180339887, rel=1e-10)
    traj = rp.closed_form_trajectory(np.eye(1), np.eye(1), np.zeros(1), np.ones(1), 5)
    assert traj.shape == (6, 1)
    assert traj[1, 0] == pytest.approx(0.3819660113, rel=1e-9)


def test_finite_solve_matches_closed_form_regret():
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    b = np.array([0.5, -0.5])
    res = rp.solve_finite_quadratic(A, b, np.eye(2), np.array([1.0, 1.0]), 40)
    assert res.converged
    closed = rp.closed_form_trajectory(A, np.eye(2), b, np.array([1.0, 1.0]), 40)
    assert rp.quadratic_regret(A, b, np.eye(2), closed) == pytest.approx(res.regret, rel=1e-8)


def test_meta_and_baselines():
    run = rp.run_meta_quadratic(np.eye(1), np.zeros(1), np.ones(1), gamma=0.1, T=200)
    assert run.grad_evals == 201
    assert run.f_values[-1] <= 1e-6
    assert run.theta.shape == (201, 2)
    assert (run.theta > 0).all()
    gd = rp.gd_run(np.eye(1), np.zeros(1), np.ones(1), 0.1, 50)
    assert gd[50, 0] == pytest.approx(0.9**50, rel=1e-12)
    nes = rp.nesterov_run(np.eye(1), np.zeros(1), np.ones(1), 0.1, 100)
    assert nes.shape == (101, 1)


def test_rosenbrock():
    assert rp.rosenbrock(np.array([2.0, 2.0 / 9.0])) == pytest.approx(0.0, abs=1e-15)
    assert rp.rosenbrock(np.zeros(2)) == pytest.approx(0.1)
    assert rp.rosenbrock_gradient(np.array([2.0, 2.0 / 9.0])).shape == (2,)


def test_rate_bounds():
    reports = rp.rate_bounds(np.eye(1), np.eye(1), np.zeros(1), np.ones(1), 60)
    names = [r.name for r in reports]
    assert names[:3] == ["thm12", "thm13_smooth", "thm13_strong"]
    assert reports[0].holds_throughout()


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        rp.solve_phi_tilde(np.eye(2), np.eye(1))
