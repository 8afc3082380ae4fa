"""Tests for the type IV domain, the Hua map and the Grassmannian model."""

import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from covergroup.domain_iv import (
    BoundaryWarning,
    DomainPoint,
    check_domain,
    contains,
    grassmann_embed,
    grassmann_recover,
    hua_inverse,
    hua_map,
    in_lie_ball,
    margin,
    moebius_action,
    mu,
    plane_projector,
    random_domain_point,
    random_lie_ball_point,
)
from covergroup.errors import DegenerateBasis, NearBoundary, NotNegative
from covergroup.pseudo_orthogonal import fiber_element, random_element, random_rotation, rho
from covergroup.section import base_point


def _half_e1_e2(n=2):
    beta = np.zeros((n + 1, 2))
    beta[0, 0] = beta[1, 1] = 0.5
    return beta


class TestMembership:
    def test_mu_origin(self):
        assert mu(np.zeros(3), np.zeros(3)) == 0.0

    def test_mu_hand_value(self):
        beta = _half_e1_e2()
        assert mu(beta[:, 0], beta[:, 1]) == pytest.approx(7 / 16, abs=1e-15)

    def test_mu_vs_eigenvalues(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            beta = rng.uniform(-0.9, 0.9, (3, 2))
            u, v = beta[:, 0], beta[:, 1]
            inside = np.linalg.eigvalsh(np.eye(2) - beta.T @ beta)[0] > 0
            assert inside == (mu(u, v) < 1 and u @ u < 1 and v @ v < 1)

    def test_origin(self):
        assert contains(np.zeros((3, 2))) == (True, 1.0)

    def test_boundary(self):
        beta = np.zeros((3, 2))
        beta[0, 0] = 1.0
        assert not contains(beta)[0]

    def test_margin_closed_form(self):
        # I - beta^T beta = diag(3/4, 3/4) for orthogonal columns of length 1/2
        ok, m = contains(_half_e1_e2())
        assert ok and m == pytest.approx(0.75, abs=1e-15)

    def test_margin_quadratic_formula(self):
        beta = np.array([[0.3, 0.2], [0.1, -0.4], [0.0, 0.1]])
        A = np.eye(2) - beta.T @ beta
        tr, det = np.trace(A), np.linalg.det(A)
        assert margin(beta) == pytest.approx(tr / 2 - np.sqrt(tr**2 / 4 - det), abs=1e-14)

    def test_bad_shape(self):
        with pytest.raises(ValueError):
            contains(np.zeros((3, 3)))

    def test_warning_near_boundary(self):
        beta = np.zeros((3, 2))
        beta[0, 0] = np.sqrt(1 - 1e-8)
        with pytest.warns(BoundaryWarning):
            check_domain(beta)

    def test_refused_outside(self):
        beta = np.zeros((3, 2))
        beta[0, 0] = 1.01
        with pytest.raises(NearBoundary):
            DomainPoint.of(beta)

    def test_domain_point(self):
        p = DomainPoint.of(_half_e1_e2())
        assert p.margin == pytest.approx(0.75)
        assert np.array_equal(p.u, [0.5, 0, 0])
        with pytest.raises(ValueError):
            p.beta[0, 0] = 0.0

    def test_star_shaped(self):
        for seed in range(50):
            beta = random_domain_point(3, seed)
            assert all(contains(t * beta)[0] for t in np.linspace(0, 1, 21))

    def test_sampler_stays_inside(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            for seed in range(200):
                assert contains(random_domain_point(4, seed))[1] > 0


class TestMoebiusAction:
    def test_identity(self):
        beta = random_domain_point(2, 1)
        assert np.allclose(moebius_action(np.eye(5), beta), beta, atol=1e-15)

    def test_isotropy_at_origin(self):
        X = fiber_element(rho(0.4), random_rotation(3, 0))
        assert np.allclose(moebius_action(X, np.zeros((3, 2))), 0, atol=1e-15)

    def test_fiber_rotation(self):
        beta = random_domain_point(2, 2)
        t = 0.9
        assert np.allclose(moebius_action(fiber_element(rho(t), np.eye(3)), beta), beta @ rho(-t), atol=1e-14)

    def test_action_law(self):
        for seed in range(50):
            X, Y = random_element(3, seed), random_element(3, 50 + seed)
            beta = random_domain_point(3, seed)
            lhs = moebius_action(X.matrix @ Y.matrix, beta)
            rhs = moebius_action(X, moebius_action(Y, beta))
            assert np.max(np.abs(lhs - rhs)) < 1e-9

    def test_preserves_domain(self):
        for seed in range(200):
            out = moebius_action(random_element(2, seed), random_domain_point(2, seed + 1))
            assert margin(out) > 0

    def test_origin_orbit_is_projection(self):
        for seed in range(50):
            X = random_element(4, seed)
            assert np.max(np.abs(moebius_action(X, np.zeros((5, 2))) - base_point(X))) < 1e-10


class TestHua:
    def test_origin(self):
        assert np.array_equal(hua_map(np.zeros(3, dtype=complex)), np.zeros((3, 2)))

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_roundtrip(self, n):
        for seed in range(200):
            z = random_lie_ball_point(n, seed)
            assert np.max(np.abs(hua_inverse(hua_map(z)) - z)) < 1e-10

    def test_image_in_domain(self):
        for seed in range(200):
            assert contains(hua_map(random_lie_ball_point(3, seed)))[0]

    def test_inverse_lands_in_ball(self):
        for seed in range(200):
            assert in_lie_ball(hua_inverse(random_domain_point(3, seed)))

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=100, deadline=None)
    def test_inverse_roundtrip_property(self, seed):
        beta = random_domain_point(2, seed)
        assert np.max(np.abs(hua_map(hua_inverse(beta)) - beta)) < 1e-10

    def test_outside_refused(self):
        beta = np.zeros((3, 2))
        beta[0, 0] = 1.2
        with pytest.raises(NearBoundary):
            hua_inverse(beta)


class TestGrassmann:
    def test_origin_plane(self):
        V = grassmann_embed(np.zeros((3, 2))).basis
        assert np.array_equal(V, np.eye(5)[:, :2])

    def test_first_gram_entry(self):
        beta = random_domain_point(2, 3)
        plane = grassmann_embed(beta)
        assert plane.gram()[0, 0] == pytest.approx(-1 + beta[:, 0] @ beta[:, 0], abs=1e-15)

    def test_negative_definite(self):
        for seed in range(500):
            assert grassmann_embed(random_domain_point(3, seed)).is_negative()

    def test_recover_embedded(self):
        beta = random_domain_point(3, 5)
        assert np.allclose(grassmann_recover(grassmann_embed(beta)), beta, atol=1e-14)

    def test_basis_change(self):
        beta = random_domain_point(2, 6)
        V = grassmann_embed(beta).basis
        W = np.stack([2 * V[:, 0], V[:, 1] + V[:, 0]], axis=1)
        assert np.allclose(grassmann_recover(W), beta, atol=1e-13)

    def test_translated_origin_plane(self):
        for seed in range(50):
            X = random_element(3, seed)
            beta = grassmann_recover(X.matrix[:, :2])
            assert np.max(np.abs(beta - moebius_action(X, np.zeros((4, 2))))) < 1e-10

    def test_projector_roundtrip(self):
        for seed in range(100):
            plane = grassmann_embed(random_domain_point(3, seed))
            back = grassmann_embed(grassmann_recover(plane))
            assert np.max(np.abs(plane_projector(plane) - plane_projector(back))) < 1e-10

    def test_degenerate_basis(self):
        V = grassmann_embed(random_domain_point(2, 0)).basis
        with pytest.raises(DegenerateBasis):
            grassmann_recover(np.stack([V[:, 0], 2 * V[:, 0]], axis=1))

    def test_not_negative(self):
        with pytest.raises(NotNegative):
            grassmann_recover(np.eye(5)[:, [0, 2]])
