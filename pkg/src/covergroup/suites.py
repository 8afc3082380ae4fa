"""Seeded property suites behind ``covergroup verify``.

Each suite is a list of checks. A check draws its inputs from a generator
seeded by ``(seed, check name, trial offset)``, so a failure can be rerun
from the offset alone, and returns a residual that is compared with the
check's tolerance. Reports are plain dictionaries ready for JSON.
"""

from __future__ import annotations

import hashlib
import time
import zlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from . import cover_group as cg
from . import einstein as es
from .angle_lift import eta, record_lifts, theta, zeta
from .domain_iv import (
    grassmann_embed,
    grassmann_recover,
    hua_inverse,
    hua_map,
    margin,
    moebius_action,
    mu,
    plane_projector,
    random_domain_point,
    random_lie_ball_point,
)
from .pseudo_orthogonal import (
    _gram_diag,
    certify,
    conformal_signature,
    fiber_element,
    moebius_conjugate,
    moebius_unconjugate,
    parabolic_assemble,
    parabolic_test,
    random_element,
    random_rotation,
    rho,
    rho1,
)
from .section import a_hat, a_hat_closed, base_point, c_hat_closed, decompose, section_matrix

__all__ = ["SUITES", "SuiteConfig", "Check", "run_suite", "suite_names", "UnknownSuite"]

Trial = Callable[[np.random.Generator, int], "tuple[float, tuple]"]


class UnknownSuite(KeyError):
    pass


@dataclass(frozen=True)
class Check:
    name: str
    tol: float
    trial: Trial
    odd_n: bool = False  # run on the next odd dimension when n is even


@dataclass
class SuiteConfig:
    suite: str = "group_axioms"
    n: int = 2
    samples: int = 200
    seed: int = 0
    tol: dict = field(default_factory=dict)
    verbose: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        if self.samples < 1:
            raise ValueError(f"samples must be positive, got {self.samples}")
        if self.suite != "all" and self.suite not in SUITES:
            raise UnknownSuite(self.suite)
        known = {c.name for name in suite_names(self.suite) for c in SUITES[name]}
        unknown = sorted(set(self.tol) - known)
        if unknown:
            raise ValueError(f"tolerance overrides for unknown checks: {', '.join(unknown)}")


def _digest(inputs: tuple) -> str:
    h = hashlib.sha256()
    for x in inputs:
        h.update(np.ascontiguousarray(np.asarray(x, dtype=float)).tobytes())
    return h.hexdigest()[:16]


def _max(*xs) -> float:
    return float(max(np.max(np.abs(np.asarray(x, dtype=float))) for x in xs))


def _cover(rng, n):
    return cg.random_cover_element(n, rng)


# -- group_axioms ----------------------------------------------------------------


def _identity_law(rng, n):
    a = _cover(rng, n)
    e = cg.identity(n)
    l, r = cg.star(e, a), cg.star(a, e)
    return max(*cg.cover_distance(l, a), *cg.cover_distance(r, a)), (a.matrix, a.tau)


def _inverse_law(rng, n):
    a = _cover(rng, n)
    inv = cg.star_inverse(a)
    e = cg.identity(n)
    return max(*cg.cover_distance(cg.star(a, inv), e), *cg.cover_distance(cg.star(inv, a), e)), (a.matrix, a.tau)


def _assoc(rng, n, slot):
    a, b, c = (_cover(rng, n) for _ in range(3))
    dm, dt = cg.cover_distance(cg.star(cg.star(a, b), c), cg.star(a, cg.star(b, c)))
    return (dm if slot == "matrix" else dt), (a.matrix, b.matrix, c.matrix)


def _homomorphism(rng, n):
    a, b = _cover(rng, n), _cover(rng, n)
    return _max(cg.sigma(cg.star(a, b)).matrix - a.matrix @ b.matrix), (a.matrix, b.matrix)


def _lift_roundtrip(rng, n):
    a = _cover(rng, n)
    ang = decompose(a.X).psi_angle
    b = cg.lift(a.X, int(np.round((a.tau - ang) / (2 * np.pi))))
    return max(*cg.cover_distance(a, b)), (a.matrix, a.tau)


def _chart_roundtrip(rng, n):
    beta = random_domain_point(n, rng)
    tau = rng.uniform(-10, 10)
    R = random_rotation(n + 1, rng)
    img = cg.parametrize(beta, tau, R)
    b2, t2, R2 = cg.unparametrize(img.element)
    return max(_max(b2 - beta, R2 - R), abs(t2 - tau), abs(img.discrepancy), img.literal_residual), (beta, tau, R)


# -- cocycle ---------------------------------------------------------------------


def _cocycle(rng, n):
    X, Y = random_element(n, rng), random_element(n, rng)
    z = zeta(X, Y)
    psi = lambda M: decompose(M).psi  # noqa: E731
    return _max(psi(X.matrix @ Y.matrix) - psi(X) @ psi(Y) @ rho(z)), (X.matrix, Y.matrix)


def _eta_fiber(rng, n):
    beta = random_domain_point(n, rng)
    r = rho(rng.uniform(-np.pi, np.pi))
    R = random_rotation(n + 1, rng)
    psi = decompose(fiber_element(r, R) @ section_matrix(beta)).psi
    return _max(psi - rho(eta(beta, r)) @ r), (beta, r, R)


def _eta_trivial(rng, n):
    beta = random_domain_point(n, rng)
    r = rho(rng.uniform(-np.pi, np.pi))
    return max(abs(eta(beta, np.eye(2))), abs(eta(np.zeros_like(beta), r))), (beta, r)


def _theta_endpoint(rng, n):
    b1, b2 = random_domain_point(n, rng), random_domain_point(n, rng)
    d = decompose(section_matrix(b1) @ section_matrix(b2))
    return _max(d.psi - rho(theta(b1, b2))), (b1, b2)


def _theta_paths(rng, n):
    b1, b2 = random_domain_point(n, rng), random_domain_point(n, rng)
    return abs(theta(b1, b2) - theta(b1, b2, path_kind="two_leg")), (b1, b2)


def _zeta_identity(rng, n):
    X = random_element(n, rng)
    I = np.eye(n + 3)
    return max(abs(zeta(I, X)), abs(zeta(X, I))), (X.matrix,)


def _lift_stability(rng, n):
    X, Y = random_element(n, rng), random_element(n, rng)
    return abs(zeta(X, Y, steps=16) - zeta(X, Y, steps=32)), (X.matrix, Y.matrix)


def _lift_reports(rng, n):
    X, Y = random_element(n, rng), random_element(n, rng)
    with record_lifts() as reports:
        zeta(X, Y)
        es.act_cover(cg.lift(X, 1), es.random_einstein_point(n, rng))
    worst_res = max(r.residual for r in reports)
    if max(r.max_step for r in reports) >= np.pi / 2:
        worst_res = float("inf")
    return worst_res, (X.matrix, Y.matrix)


# -- section_closed_forms ----------------------------------------------------------


def _a_closed(rng, n):
    beta = random_domain_point(n, rng)
    return _max(a_hat(beta) - a_hat_closed(beta)), (beta,)


def _c_closed(rng, n):
    beta = random_domain_point(n, rng)
    return _max(section_matrix(beta)[2:, :2] - c_hat_closed(beta)), (beta,)


def _a_rotation_invariance(rng, n):
    beta = random_domain_point(n, rng)
    R = random_rotation(n + 1, rng)
    return _max(a_hat(R @ beta) - a_hat(beta)), (beta, R)


def _a_twist_so2(rng, n):
    beta = random_domain_point(n, rng)
    r = rho(rng.uniform(-np.pi, np.pi))
    M = np.linalg.solve(a_hat(beta @ r.T), r @ a_hat(beta))
    return max(_max(M.T @ M - np.eye(2)), abs(np.linalg.det(M) - 1)), (beta, r)


def _section_group(rng, n):
    beta = random_domain_point(n, rng)
    P = certify(section_matrix(beta))
    return max(P.residual, _max(base_point(P) - beta)), (beta,)


def _decomposition(rng, n):
    X = random_element(n, rng)
    d = decompose(X)
    return max(d.residual, d.leakage), (X.matrix,)


# -- domain ------------------------------------------------------------------------


def _mu_det(rng, n):
    beta = random_domain_point(n, rng)
    return abs(1 - mu(beta[:, 0], beta[:, 1]) - np.linalg.det(np.eye(2) - beta.T @ beta)), (beta,)


def _action_invariance(rng, n):
    X = random_element(n, rng)
    beta = random_domain_point(n, rng)
    m = margin(moebius_action(X, beta))
    return max(0.0, -m), (X.matrix, beta)


def _projection_equivariance(rng, n):
    X, Y = random_element(n, rng), random_element(n, rng)
    return _max(base_point(X.matrix @ Y.matrix) - moebius_action(X, base_point(Y))), (X.matrix, Y.matrix)


def _action_law(rng, n):
    X, Y = random_element(n, rng), random_element(n, rng)
    beta = random_domain_point(n, rng)
    lhs = moebius_action(X.matrix @ Y.matrix, beta)
    rhs = moebius_action(X, moebius_action(Y, beta))
    return _max(lhs - rhs), (X.matrix, Y.matrix, beta)


# -- hua -----------------------------------------------------------------------------


def _hua_roundtrip(rng, n):
    z = random_lie_ball_point(n, rng)
    return float(np.max(np.abs(hua_inverse(hua_map(z)) - z))), (z.real, z.imag)


def _hua_inverse_roundtrip(rng, n):
    beta = random_domain_point(n, rng)
    return _max(hua_map(hua_inverse(beta)) - beta), (beta,)


def _hua_lands_in_domain(rng, n):
    z = random_lie_ball_point(n, rng)
    return max(0.0, -margin(hua_map(z))), (z.real, z.imag)


# -- grassmann -------------------------------------------------------------------------


def _grassmann_roundtrip(rng, n):
    beta = random_domain_point(n, rng)
    plane = grassmann_embed(beta)
    back = grassmann_embed(grassmann_recover(plane))
    return _max(plane_projector(plane) - plane_projector(back)), (beta,)


def _grassmann_translate(rng, n):
    X = random_element(n, rng)
    beta = random_domain_point(n, rng)
    moved = grassmann_recover(X.matrix @ grassmann_embed(beta).basis)
    base = grassmann_recover(X.matrix @ grassmann_embed(np.zeros((n + 1, 2))).basis)
    return max(_max(moved - moebius_action(X, beta)), _max(base - base_point(X))), (X.matrix, beta)


def _grassmann_basis_change(rng, n):
    beta = random_domain_point(n, rng)
    A = rng.standard_normal((2, 2)) + 3 * np.eye(2)
    return _max(grassmann_recover(grassmann_embed(beta).basis @ A) - beta), (beta, A)


# -- action_homomorphism -------------------------------------------------------------------

POINTS_PER_PAIR = 10


def _action_hom(rng, n, slot):
    a, b = _cover(rng, n), _cover(rng, n)
    ab = cg.star(a, b)
    worst = 0.0
    for _ in range(POINTS_PER_PAIR):
        p = es.random_einstein_point(n, rng)
        dt, dy = es.point_distance(es.act_cover(ab, p), es.act_cover(a, es.act_cover(b, p)))
        worst = max(worst, dt if slot == "tau" else dy)
    return worst, (a.matrix, a.tau, b.matrix, b.tau)


def _covering_compat(rng, n):
    a = _cover(rng, n)
    p = es.random_einstein_point(n, rng)
    q = es.act_cover(a, p)
    x, y = es.act_compact(a.X, rho1(p.tau), p.y)
    return _max(rho1(q.tau) - x, q.y - y), (a.matrix, a.tau, p.tau, p.y)


def _xi_paths(rng, n):
    beta = random_domain_point(n, rng)
    vt = rng.uniform(-8, 8)
    p = es.random_einstein_point(n, rng)
    return abs(es.xi_lift(beta, vt, p) - es.xi_lift(beta, vt, p, path_kind="two_leg")), (beta, vt, p.tau, p.y)


def _xi_shifts(rng, n):
    beta = random_domain_point(n, rng)
    vt = rng.uniform(-8, 8)
    p = es.random_einstein_point(n, rng)
    base = es.xi_lift(beta, vt, p)
    s1 = es.xi_lift(beta, vt + 2 * np.pi, p) - base - 2 * np.pi
    s2 = es.xi_lift(beta, vt, es.EinsteinPoint(p.tau + 2 * np.pi, p.y)) - base - 2 * np.pi
    return max(abs(s1), abs(s2)), (beta, vt, p.tau, p.y)


def _identity_acts_trivially(rng, n):
    p = es.random_einstein_point(n, rng)
    return max(*es.point_distance(es.act_cover(cg.identity(n), p), p)), (p.tau, p.y)


# -- deck_center ---------------------------------------------------------------------------


def _commutator(a, z, slot):
    c = cg.star(cg.star(cg.star_inverse(a), cg.star_inverse(z)), cg.star(a, z))
    dm, dt = cg.cover_distance(c, cg.identity(a.n))
    return dm if slot == "matrix" else dt


def _center_commutes(rng, n, slot):
    a = _cover(rng, n)
    return _commutator(a, cg.center(n, 1 if n % 2 == 0 else 2).element, slot), (a.matrix, a.tau)


def _odd_center_commutes(rng, n, slot):
    a = _cover(rng, n)
    return _commutator(a, cg.center(n, 1).element, slot), (a.matrix, a.tau)


def _odd_center_square(rng, n):
    z = cg.center(n, 1).element
    return max(*cg.cover_distance(cg.star(z, z), cg.center(n, 2).element)), ()


def _deck_shift(rng, n):
    p = es.random_einstein_point(n, rng)
    k = int(rng.integers(-3, 4))
    z = cg.CoverElement(cg.identity(n).X, 2 * np.pi * k, 0.0)
    q = es.act_cover(z, p)
    return max(abs(q.tau - p.tau - 2 * np.pi * k), _max(q.y - p.y)), (p.tau, p.y, k)


def _odd_deck_flip(rng, n):
    p = es.random_einstein_point(n, rng)
    q = es.act_cover(cg.center(n, 1).element, p)
    return max(abs(q.tau - p.tau - np.pi), _max(q.y + p.y)), (p.tau, p.y)


def _action_center_commutes(rng, n, odd):
    a = _cover(rng, n)
    k = int(rng.integers(1, 3))
    if odd:
        z = cg.center(n, 2 * k + 1).element
    else:
        z = cg.CoverElement(cg.identity(n).X, 2 * np.pi * k, 0.0)
    p = es.random_einstein_point(n, rng)
    lhs = es.act_cover(a, es.act_cover(z, p))
    rhs = es.act_cover(z, es.act_cover(a, p))
    return max(*es.point_distance(lhs, rhs)), (a.matrix, a.tau, p.tau, p.y, k)


# -- conformality --------------------------------------------------------------------------


def _conformal(rng, n, what):
    a = _cover(rng, n)
    p = es.random_einstein_point(n, rng)
    rep = es.conformal_check(a, p)
    value = {"off_ratio": rep.off_ratio, "orientation": float(rep.orient != 1),
             "time_orientation": float(rep.time_orient != 1)}[what]
    return value, (a.matrix, a.tau, p.tau, p.y)


def _fiber_isometry(rng, n):
    s = rng.uniform(-np.pi, np.pi)
    a = cg.make_cover_element(fiber_element(rho(s), random_rotation(n + 1, rng)), s)
    p = es.random_einstein_point(n, rng)
    rep = es.conformal_check(a, p)
    return max(abs(rep.factor - 1), rep.off_ratio), (a.matrix, p.tau, p.y)


def _compact_conformal(rng, n, k):
    a = _cover(rng, n)
    p = es.random_einstein_point(n, rng)
    q = a.matrix if k == 1 else cg.quotient_reduce(a, cg.QuotientKind.FIRST, k)
    rep = es.compact_conformal_check(q, p.tau / k, p.y)
    bad = float(rep.orient != 1 or rep.time_orient != 1)
    return max(rep.off_ratio, bad), (a.matrix, a.tau, p.tau, p.y)


# -- quotients -----------------------------------------------------------------------------

QUOTIENT_CASES = ((cg.QuotientKind.FIRST, 1), (cg.QuotientKind.FIRST, 2),
                  (cg.QuotientKind.SECOND, 0), (cg.QuotientKind.SECOND, 1))


def _deck_power(n, kind, h, j):
    period = cg.quotient_period(kind, h)
    X = np.eye(n + 3) * (-1 if kind is cg.QuotientKind.SECOND and j % 2 else 1)
    return cg.make_cover_element(X, j * period)


def _quotient_axioms(rng, n, kind, h):
    a, b, c = (cg.quotient_reduce(_cover(rng, n), kind, h) for _ in range(3))
    e = cg.quotient_identity(n, kind, h)
    assoc = cg.quotient_distance(cg.quotient_mul(cg.quotient_mul(a, b), c), cg.quotient_mul(a, cg.quotient_mul(b, c)))
    inv = cg.quotient_distance(cg.quotient_mul(a, cg.quotient_inverse(a)), e)
    ident = cg.quotient_distance(cg.quotient_mul(e, a), a)
    # Matrix parts are compared at 1e-8, angles at 1e-6.
    return max(100 * max(assoc[0], inv[0], ident[0]), assoc[1], inv[1], ident[1]), \
        (a.representative.matrix, b.representative.matrix)


def _quotient_well_defined(rng, n, kind, h):
    a, b = _cover(rng, n), _cover(rng, n)
    z = _deck_power(n, kind, h, int(rng.integers(-2, 3)))
    lhs = cg.quotient_reduce(cg.star(cg.star(z, a), b), kind, h)
    rhs = cg.quotient_reduce(cg.star(a, b), kind, h)
    prod = max(*cg.quotient_distance(lhs, rhs))
    p = es.random_einstein_point(n, rng)
    j = int(rng.integers(-2, 3))
    shifted = es.EinsteinPoint(p.tau + j * cg.quotient_period(kind, h),
                               -p.y if kind is cg.QuotientKind.SECOND and j % 2 else p.y)
    q = cg.quotient_reduce(a, kind, h)
    q_alt = cg.QuotientElement(kind, h, cg.star(z, a))  # non-canonical representative on purpose
    act1 = es.act_quotient(q, es.compact_reduce(p, kind, h))
    act2 = es.compact_reduce(es.act_cover(q_alt.representative, shifted), kind, h)
    act = max(*es.compact_distance(act1, act2))
    return max(prod, act), (a.matrix, b.matrix, p.tau, p.y)


def _quotient_first_compact(rng, n):
    a = _cover(rng, n)
    p = es.random_einstein_point(n, rng)
    out = es.act_quotient(cg.quotient_reduce(a, cg.QuotientKind.FIRST, 1),
                          es.compact_reduce(p, cg.QuotientKind.FIRST, 1)).representative
    x, y = es.act_compact(a.X, rho1(p.tau), p.y)
    return _max(rho1(out.tau) - x, out.y - y), (a.matrix, p.tau, p.y)


# -- parabolic ---------------------------------------------------------------------------------


def _random_lorentz(rng, k):
    g = _gram_diag(1, k - 1)
    K = rng.standard_normal((k, k)) * 0.3
    K = K - K.T
    return scipy.linalg.expm(g[:, None] * K)


def _random_parabolic(rng, n):
    sig = conformal_signature(n)
    return parabolic_assemble(float(np.exp(rng.normal(0, 0.5))), _random_lorentz(rng, n + 1),
                              rng.normal(0, 0.5, n + 1), sig)


def _parabolic_member(rng, n):
    sig = conformal_signature(n)
    Y = _random_parabolic(rng, n)
    X = moebius_unconjugate(Y, sig)
    ok = parabolic_test(Y, sig)
    return max(certify(X, tol=1e-6).residual, float(not ok)), (Y,)


def _parabolic_closed(rng, n):
    sig = conformal_signature(n)
    Y = _random_parabolic(rng, n) @ _random_parabolic(rng, n)
    return float(not parabolic_test(Y, sig)), (Y,)


def _moebius_roundtrip(rng, n):
    sig = conformal_signature(n)
    X = random_element(n, rng)
    return _max(moebius_unconjugate(moebius_conjugate(X, sig), sig) - X.matrix), (X.matrix,)


# -- null_lines --------------------------------------------------------------------------------


def _null_isotropy(rng, n):
    p = es.random_einstein_point(n, rng)
    return abs(es.null_ray(p).isotropy()), (p.tau, p.y)


def _null_equivariance(rng, n):
    X = random_element(n, rng)
    p = es.random_einstein_point(n, rng)
    return es.null_equivariance_check(X, p), (X.matrix, p.tau, p.y)


def _pk_fiber(rng, n):
    k = int(rng.integers(1, 6))
    x = np.exp(1j * rng.uniform(-np.pi, np.pi))
    roots = es.p_k_fiber(k, x)
    images = np.array([es.p_k_cover(k, r, np.zeros(n + 1))[0] for r in roots])
    distinct = np.min(np.abs(roots[:, None] - roots[None, :]) + 10 * np.eye(k)) > 1e-6
    return max(float(np.max(np.abs(images - x))), float(not distinct), abs(len(roots) - k)), (k, x.real, x.imag)


# -- registry -------------------------------------------------------------------------------------


def _bind(f, *args):
    return lambda rng, n: f(rng, n, *args)


SUITES: dict[str, list[Check]] = {
    "group_axioms": [
        Check("identity", 1e-9, _identity_law),
        Check("inverse", 1e-7, _inverse_law),
        Check("associativity_tau", 1e-6, _bind(_assoc, "tau")),
        Check("associativity_matrix", 1e-8, _bind(_assoc, "matrix")),
        Check("homomorphism", 1e-9, _homomorphism),
        Check("lift_roundtrip", 1e-9, _lift_roundtrip),
        Check("chart_roundtrip", 1e-8, _chart_roundtrip),
    ],
    "cocycle": [
        Check("cocycle_identity", 1e-8, _cocycle),
        Check("eta_fiber_identity", 1e-9, _eta_fiber),
        Check("eta_trivial", 1e-9, _eta_trivial),
        Check("theta_endpoint", 1e-9, _theta_endpoint),
        Check("theta_path_independence", 1e-9, _theta_paths),
        Check("zeta_identity", 1e-8, _zeta_identity),
        Check("lift_stability", 1e-9, _lift_stability),
        Check("lift_reports", 1e-9, _lift_reports),
    ],
    "section_closed_forms": [
        Check("a_hat_closed_form", 1e-10, _a_closed),
        Check("c_hat_closed_form", 1e-10, _c_closed),
        Check("a_hat_rotation_invariance", 1e-10, _a_rotation_invariance),
        Check("a_hat_twist_in_so2", 1e-10, _a_twist_so2),
        Check("section_in_group", 1e-10, _section_group),
        Check("decomposition", 1e-9, _decomposition),
    ],
    "domain": [
        Check("mu_is_det", 1e-12, _mu_det),
        Check("action_preserves_domain", 0.0, _action_invariance),
        Check("projection_equivariance", 1e-9, _projection_equivariance),
        Check("action_law", 1e-9, _action_law),
    ],
    "hua": [
        Check("hua_roundtrip", 1e-10, _hua_roundtrip),
        Check("hua_inverse_roundtrip", 1e-10, _hua_inverse_roundtrip),
        Check("hua_lands_in_domain", 0.0, _hua_lands_in_domain),
    ],
    "grassmann": [
        Check("grassmann_roundtrip", 1e-10, _grassmann_roundtrip),
        Check("grassmann_translate", 1e-9, _grassmann_translate),
        Check("grassmann_basis_change", 1e-10, _grassmann_basis_change),
    ],
    "action_homomorphism": [
        Check("action_composition_tau", 1e-6, _bind(_action_hom, "tau")),
        Check("action_composition_sphere", 1e-8, _bind(_action_hom, "y")),
        Check("covering_compatibility", 1e-9, _covering_compat),
        Check("xi_path_independence", 1e-9, _xi_paths),
        Check("xi_shift_law", 1e-9, _xi_shifts),
        Check("identity_acts_trivially", 1e-12, _identity_acts_trivially),
    ],
    "deck_center": [
        Check("center_commutes_tau", 1e-6, _bind(_center_commutes, "tau")),
        Check("center_commutes_matrix", 1e-9, _bind(_center_commutes, "matrix")),
        Check("deck_shift", 1e-9, _deck_shift),
        Check("action_center_commutes", 1e-7, _bind(_action_center_commutes, False)),
        Check("odd_center_commutes_tau", 1e-6, _bind(_odd_center_commutes, "tau"), odd_n=True),
        Check("odd_center_commutes_matrix", 1e-9, _bind(_odd_center_commutes, "matrix"), odd_n=True),
        Check("odd_center_square", 1e-9, _odd_center_square, odd_n=True),
        Check("odd_deck_flip", 1e-9, _odd_deck_flip, odd_n=True),
        Check("odd_action_center_commutes", 1e-7, _bind(_action_center_commutes, True), odd_n=True),
    ],
    "conformality": [
        Check("off_ratio", 1e-4, _bind(_conformal, "off_ratio")),
        Check("orientation", 0.0, _bind(_conformal, "orientation")),
        Check("time_orientation", 0.0, _bind(_conformal, "time_orientation")),
        Check("fiber_isometry", 1e-6, _fiber_isometry),
        Check("compact_form_k1", 1e-4, _bind(_compact_conformal, 1)),
        Check("compact_form_k2", 1e-4, _bind(_compact_conformal, 2)),
    ],
    "quotients": [
        *[Check(f"axioms_{kind.value}_{h}", 1e-6, _bind(_quotient_axioms, kind, h),
                odd_n=kind is cg.QuotientKind.SECOND) for kind, h in QUOTIENT_CASES],
        *[Check(f"well_defined_{kind.value}_{h}", 1e-7, _bind(_quotient_well_defined, kind, h),
                odd_n=kind is cg.QuotientKind.SECOND) for kind, h in QUOTIENT_CASES],
        Check("first_kind_matches_compact", 1e-9, _quotient_first_compact),
    ],
    "parabolic": [
        Check("parabolic_in_group", 1e-8, _parabolic_member),
        Check("parabolic_closed", 0.0, _parabolic_closed),
        Check("moebius_roundtrip", 1e-12, _moebius_roundtrip),
    ],
    "null_lines": [
        Check("isotropy", 1e-14, _null_isotropy),
        Check("equivariance", 1e-10, _null_equivariance),
        Check("k_fold_fiber", 1e-12, _pk_fiber),
    ],
}


def suite_names(suite: str) -> list[str]:
    if suite == "all":
        return list(SUITES)
    if suite not in SUITES:
        raise UnknownSuite(suite)
    return [suite]


def _run_check(check: Check, config: SuiteConfig) -> dict:
    n = config.n + 1 if check.odd_n and config.n % 2 == 0 else config.n
    tol = float(config.tol.get(check.name, check.tol))
    key = zlib.crc32(check.name.encode())
    worst = 0.0
    failures = []
    for offset in range(config.samples):
        rng = np.random.default_rng([config.seed, key, offset])
        try:
            residual, inputs = check.trial(rng, n)
        except Exception as exc:  # a raised library error is a failed trial
            residual, inputs = float("inf"), (offset,)
            error = f"{type(exc).__name__}: {exc}"
        else:
            error = None
        residual = float(residual)
        worst = max(worst, residual)
        if not residual <= tol:
            record = {"seed_offset": offset, "inputs_digest": _digest(inputs), "residual": residual}
            if error:
                record["error"] = error
            if config.verbose:
                record["inputs"] = [np.asarray(x, dtype=float).tolist() for x in inputs]
            failures.append(record)
    return {"name": check.name, "n": n, "tol": tol, "trials": config.samples,
            "max_residual": worst, "failures": failures}


def run_suite(config: SuiteConfig) -> dict:
    """Run a suite (or all of them) and return the JSON-ready report."""
    start = time.perf_counter()
    results = []
    for name in suite_names(config.suite):
        for check in SUITES[name]:
            report = _run_check(check, config)
            report["suite"] = name
            results.append(report)
    return {
        "suite": config.suite,
        "config": {"n": config.n, "samples": config.samples, "seed": config.seed, "tol": dict(config.tol)},
        "checks": results,
        "passed": all(not r["failures"] for r in results),
        "wall_time": time.perf_counter() - start,
    }
