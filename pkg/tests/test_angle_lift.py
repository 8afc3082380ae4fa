"""Tests for SO(2) path lifting and the lift functions eta, theta and zeta."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from covergroup.angle_lift import (
    eta,
    product_decompose,
    record_lifts,
    so2_angle,
    theta,
    unwrap_along,
    wrap_angle,
    zeta,
)
from covergroup.domain_iv import random_domain_point
from covergroup.errors import NotRotation, SubdivisionExhausted
from covergroup.pseudo_orthogonal import random_element, rho
from covergroup.section import decompose, section_matrix


def _dense_unwrap(angle_of_t, samples=100_001):
    # Independent oracle: numpy's unwrap over a fixed fine grid.
    t = np.linspace(0, 1, samples)
    a = np.angle(np.exp(1j * angle_of_t(t)))
    return np.unwrap(a)[-1]


class TestSo2Angle:
    def test_identity(self):
        assert so2_angle(np.eye(2)) == (0.0, 0.0)

    def test_third_turn(self):
        ang, res = so2_angle(rho(np.pi / 3))
        assert ang == pytest.approx(np.pi / 3) and res < 1e-15

    def test_half_turn_convention(self):
        assert so2_angle(rho(np.pi))[0] == np.pi
        assert so2_angle(rho(-np.pi))[0] == np.pi

    def test_not_rotation(self):
        with pytest.raises(NotRotation):
            so2_angle(np.diag([1.0, -1.0]))

    def test_shape(self):
        with pytest.raises(ValueError):
            so2_angle(np.eye(3))


class TestUnwrap:
    def test_constant(self):
        rep = unwrap_along(lambda t: rho(np.full_like(t, 0.7)), start=0.7)
        assert rep.value == pytest.approx(0.7, abs=1e-15)

    def test_two_windings(self):
        rep = unwrap_along(lambda t: rho(4 * np.pi * t))
        assert rep.value == pytest.approx(4 * np.pi, abs=1e-12)
        assert rep.max_step < np.pi / 2

    def test_negative_windings_vs_dense_oracle(self):
        f = lambda t: -3.5 * np.pi * t  # noqa: E731
        rep = unwrap_along(lambda t: rho(f(t)))
        assert rep.value == pytest.approx(_dense_unwrap(f), abs=1e-9)
        assert rep.value == pytest.approx(-3.5 * np.pi, abs=1e-12)

    def test_fast_oscillation_gets_refined(self):
        # Final-step rotation of about 2.3 rad: above the threshold, below pi.
        f = lambda t: 6 * np.pi * t**2  # noqa: E731
        rep = unwrap_along(lambda t: rho(f(t)))
        assert rep.steps > 16 and rep.max_step < np.pi / 2
        assert rep.value == pytest.approx(6 * np.pi, abs=1e-9)

    def test_aliased_grid_is_caught(self):
        # Each of the 16 initial intervals turns by a full revolution plus a
        # little, which looks like a small step until the midpoint pass.
        rep = unwrap_along(lambda t: rho(2 * np.pi * 17 * t), steps=16)
        assert rep.value == pytest.approx(34 * np.pi, abs=1e-9)
        assert rep.max_step < np.pi / 2

    def test_wrong_start(self):
        with pytest.raises(ValueError):
            unwrap_along(lambda t: rho(t), start=1.0)

    def test_discontinuous_path_exhausts(self):
        path = lambda t: rho(np.where(t < 0.5, 0.0, np.pi))  # noqa: E731
        with pytest.raises(SubdivisionExhausted):
            unwrap_along(path, max_evaluations=2000)

    def test_off_group(self):
        with pytest.raises(NotRotation):
            unwrap_along(lambda t: rho(t) * (1 + t[:, None, None]))

    def test_recorder(self):
        with record_lifts() as outer:
            unwrap_along(lambda t: rho(t))
            with record_lifts() as inner:
                unwrap_along(lambda t: rho(2 * t))
        assert len(outer) == 2 and len(inner) == 1
        assert inner[0].value == pytest.approx(2.0)
        unwrap_along(lambda t: rho(t))
        assert len(outer) == 2

    @given(st.floats(-20, 20), st.floats(-3, 3))
    @settings(max_examples=100, deadline=None)
    def test_linear_paths(self, total, start):
        rep = unwrap_along(lambda t: rho(start + total * t), start=start)
        assert rep.value == pytest.approx(start + total, abs=1e-9)
        assert rep.residual < 1e-9

    def test_wrap_angle(self):
        assert wrap_angle(3 * np.pi / 2) == pytest.approx(-np.pi / 2)


class TestEta:
    def test_origin(self):
        assert eta(np.zeros((3, 2)), rho(1.3)) == 0.0

    def test_identity_rotation(self):
        assert abs(eta(random_domain_point(3, 0), np.eye(2))) < 1e-12

    def test_endpoint(self):
        rng = np.random.default_rng(0)
        for seed in range(50):
            beta = random_domain_point(3, seed)
            r = rho(rng.uniform(-np.pi, np.pi))
            from covergroup.section import a_hat

            target = np.linalg.solve(a_hat(beta @ r.T), r @ a_hat(beta) @ r.T)
            assert np.max(np.abs(rho(eta(beta, r)) - target)) < 1e-9


class TestTheta:
    def test_origin(self):
        z = np.zeros((3, 2))
        d = product_decompose(z, z)
        assert d.theta == 0.0 and np.allclose(d.m, 0) and np.allclose(d.R, np.eye(3))

    def test_left_origin(self):
        beta = random_domain_point(2, 1)
        d = product_decompose(np.zeros((3, 2)), beta)
        assert np.allclose(d.m, beta, atol=1e-12) and abs(d.theta) < 1e-12
        assert np.allclose(d.R, np.eye(3), atol=1e-12)

    def test_right_origin(self):
        assert abs(theta(random_domain_point(3, 1), np.zeros((4, 2)))) < 1e-12

    def test_endpoint_consistency(self):
        for seed in range(500):
            b1, b2 = random_domain_point(2, seed), random_domain_point(2, 1000 + seed)
            d = decompose(section_matrix(b1) @ section_matrix(b2))
            assert np.max(np.abs(d.psi - rho(theta(b1, b2)))) < 1e-9

    def test_path_independence(self):
        for seed in range(50):
            b1, b2 = random_domain_point(3, seed, 0.99), random_domain_point(3, 77 + seed, 0.99)
            assert abs(theta(b1, b2) - theta(b1, b2, path_kind="two_leg")) < 1e-9

    def test_unknown_path(self):
        with pytest.raises(ValueError):
            theta(np.zeros((3, 2)), np.zeros((3, 2)), path_kind="spiral")


class TestZeta:
    def test_left_identity(self):
        assert abs(zeta(np.eye(5), random_element(2, 0))) < 1e-14

    def test_right_identity(self):
        for seed in range(20):
            assert abs(zeta(random_element(3, seed), np.eye(6))) < 1e-12

    def test_minus_identity(self):
        assert abs(zeta(-np.eye(6), -np.eye(6))) < 1e-12

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_cocycle_identity(self, n):
        for seed in range(100):
            X, Y = random_element(n, seed), random_element(n, 5000 + seed)
            z = zeta(X, Y)
            lhs = decompose(X.matrix @ Y.matrix).psi
            assert np.max(np.abs(lhs - decompose(X).psi @ decompose(Y).psi @ rho(z))) < 1e-8

    def test_additive_cocycle(self):
        for seed in range(30):
            X, Y, Z = (random_element(2, 3 * seed + i) for i in range(3))
            lhs = zeta(X.matrix @ Y.matrix, Z) + zeta(X, Y)
            rhs = zeta(X, Y.matrix @ Z.matrix) + zeta(Y, Z)
            assert abs(lhs - rhs) < 1e-8

    def test_subdivision_stability_and_reports(self):
        for seed in range(30):
            X, Y = random_element(3, seed, scale=0.8), random_element(3, 90 + seed, scale=0.8)
            with record_lifts() as reports:
                a = zeta(X, Y)
            b = zeta(X, Y, steps=32)
            assert abs(a - b) < 1e-9
            assert all(r.max_step < np.pi / 2 and r.residual < 1e-9 for r in reports)
