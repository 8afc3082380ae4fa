"""The type IV domain of (n+1) x 2 matrices and its standard identifications.

A point is a real (n+1) x 2 matrix ``beta = (u v)`` with ``I_2 - beta^T beta``
positive definite, i.e. with largest singular value below one. The group
acts by linear fractional transformations, the quotient map sends X to
``c(X) a(X)^{-1}``, and ``beta`` corresponds to the negative 2-plane spanned
by ``(1, 0, u)`` and ``(0, 1, v)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBasis, IllConditioned, NearBoundary, NotNegative
from .pseudo_orthogonal import _gram_diag, as_matrix

__all__ = [
    "WARN_MARGIN",
    "MIN_MARGIN",
    "BoundaryWarning",
    "DomainPoint",
    "NegativePlane",
    "mu",
    "margin",
    "contains",
    "check_domain",
    "moebius_action",
    "in_lie_ball",
    "hua_map",
    "hua_inverse",
    "grassmann_embed",
    "grassmann_recover",
    "plane_projector",
    "random_domain_point",
    "random_lie_ball_point",
]

WARN_MARGIN = 1e-6
MIN_MARGIN = 1e-12


class BoundaryWarning(RuntimeWarning):
    """Emitted for domain points whose margin is below ``WARN_MARGIN``."""


def mu(u, v) -> float:
    """``|u|^2 + |v|^2 + (u.v)^2 - |u|^2 |v|^2``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    uu, vv, uv = u @ u, v @ v, u @ v
    return float(uu + vv + uv * uv - uu * vv)


def margin(beta) -> float:
    """Smallest eigenvalue of ``I_2 - beta^T beta``."""
    beta = np.asarray(beta, dtype=float)
    return float(np.linalg.eigvalsh(np.eye(2) - beta.T @ beta)[0])


def contains(beta, min_margin: float = 1e-8) -> tuple[bool, float]:
    """Membership test; returns ``(inside, margin)``."""
    beta = np.asarray(beta, dtype=float)
    if beta.ndim != 2 or beta.shape[1] != 2:
        raise ValueError(f"expected an (n+1) x 2 matrix, got shape {beta.shape}")
    m = margin(beta)
    return m >= min_margin, m


def check_domain(beta, min_margin: float = MIN_MARGIN) -> float:
    """Return the margin of ``beta``; warn near the boundary, refuse beyond it."""
    inside, m = contains(beta, min_margin)
    if not inside:
        raise NearBoundary(f"margin {m:.3e} below {min_margin:.1e}")
    if m < WARN_MARGIN:
        warnings.warn(f"domain point with margin {m:.3e}", BoundaryWarning, stacklevel=3)
    return m


@dataclass(frozen=True, eq=False)
class DomainPoint:
    beta: np.ndarray
    margin: float

    @classmethod
    def of(cls, beta, min_margin: float = 1e-8) -> "DomainPoint":
        beta = np.array(beta, dtype=float)
        m = check_domain(beta, min_margin)
        beta.setflags(write=False)
        return cls(beta, m)

    @property
    def u(self) -> np.ndarray:
        return self.beta[:, 0]

    @property
    def v(self) -> np.ndarray:
        return self.beta[:, 1]


def _beta(beta) -> np.ndarray:
    if isinstance(beta, DomainPoint):
        return beta.beta
    return np.asarray(beta, dtype=float)


def moebius_action(X, beta, max_cond: float = 1e12) -> np.ndarray:
    """``(d beta + c)(b beta + a)^{-1}``."""
    X = as_matrix(X)
    beta = _beta(beta)
    check_domain(beta)
    a, b, c, d = X[:2, :2], X[:2, 2:], X[2:, :2], X[2:, 2:]
    den = b @ beta + a
    cond = np.linalg.cond(den)
    if not cond <= max_cond:
        raise IllConditioned(f"cond(b beta + a) = {cond:.3e}")
    num = d @ beta + c
    return np.linalg.solve(den.T, num.T).T


def in_lie_ball(z) -> bool:
    """``2 z.conj(z) < 1 + |z.z|^2 < 2``."""
    z = np.asarray(z, dtype=complex)
    zz = np.vdot(z, z).real
    s2 = abs(z @ z) ** 2
    return bool(2 * zz < 1 + s2 < 2)


def hua_map(z) -> np.ndarray:
    """Hua's diffeomorphism from the Lie ball onto the matrix domain."""
    z = np.asarray(z, dtype=complex)
    s = z @ z
    sc = np.conj(s)
    M = np.array([[s + 1, sc + 1], [1j * (s - 1), -1j * (sc - 1)]])
    if abs(np.linalg.det(M)) < 1e-14:
        raise NearBoundary("singular 2x2 factor in Hua map")
    Z = np.stack([z, np.conj(z)], axis=1)
    beta = 2 * np.linalg.solve(M.T, Z.T).T
    return beta.real.copy()


def hua_inverse(beta) -> np.ndarray:
    """Inverse of :func:`hua_map`.

    With ``w = u + i v`` the first column of ``beta M = 2 (z conj(z))`` gives
    ``2 z = w s + conj(w)`` where ``s = z.z``; substituting back yields
    ``(w.w) s^2 + (2|w|^2 - 4) s + conj(w.w) = 0``, whose roots have product
    of modulus one. The root inside the unit disk is taken.
    """
    beta = _beta(beta)
    u, v = beta[:, 0], beta[:, 1]
    m = mu(u, v)
    if not (u @ u < 1 and v @ v < 1 and m < 1):
        raise NearBoundary("point outside the domain")
    w = u + 1j * v
    A = w @ w
    B = float(u @ u + v @ v)
    disc = max((4 - 2 * B) ** 2 - 4 * abs(A) ** 2, 0.0)
    s = 2 * np.conj(A) / ((4 - 2 * B) + np.sqrt(disc))
    return (w * s + np.conj(w)) / 2


@dataclass(frozen=True, eq=False)
class NegativePlane:
    """A 2-plane of R^{2,n+1}, given by an m x 2 basis matrix."""

    basis: np.ndarray

    def gram(self) -> np.ndarray:
        V = self.basis
        g = _gram_diag(2, V.shape[0] - 2)
        return V.T @ (g[:, None] * V)

    def is_negative(self) -> bool:
        return bool(np.linalg.eigvalsh(self.gram())[-1] < 0)


def grassmann_embed(beta) -> NegativePlane:
    beta = _beta(beta)
    k = beta.shape[0]
    V = np.zeros((k + 2, 2))
    V[0, 0] = V[1, 1] = 1.0
    V[2:, :] = beta
    return NegativePlane(V)


def grassmann_recover(plane: NegativePlane | np.ndarray) -> np.ndarray:
    """Domain point of a negative 2-plane, via ``(y y')(x x')^{-1}``."""
    V = plane.basis if isinstance(plane, NegativePlane) else np.asarray(plane, dtype=float)
    sv = np.linalg.svd(V, compute_uv=False)
    if not sv[-1] > 1e-12 * sv[0]:
        raise DegenerateBasis(f"singular values {sv}")
    g = _gram_diag(2, V.shape[0] - 2)
    gram = V.T @ (g[:, None] * V)
    if not np.linalg.eigvalsh(gram)[-1] < 0:
        raise NotNegative(f"Gram matrix eigenvalues {np.linalg.eigvalsh(gram)}")
    e1 = V[:, 0] / np.sqrt(-gram[0, 0])
    w = V[:, 1] + ((e1 * g) @ V[:, 1]) * e1
    e2 = w / np.sqrt(-((w * g) @ w))
    x = np.stack([e1[:2], e2[:2]], axis=1)
    y = np.stack([e1[2:], e2[2:]], axis=1)
    return np.linalg.solve(x.T, y.T).T


def plane_projector(plane: NegativePlane | np.ndarray) -> np.ndarray:
    """G-orthogonal projector ``V (V^T G V)^{-1} V^T G`` onto the plane."""
    V = plane.basis if isinstance(plane, NegativePlane) else np.asarray(plane, dtype=float)
    g = _gram_diag(2, V.shape[0] - 2)
    gram = V.T @ (g[:, None] * V)
    return V @ np.linalg.solve(gram, V.T * g)


def random_domain_point(n: int, seed, max_sv: float = 0.95) -> np.ndarray:
    """Random point with singular values drawn uniformly from ``[0, max_sv)``."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    Z = rng.standard_normal((n + 1, 2))
    U, _, Vt = np.linalg.svd(Z, full_matrices=False)
    return U @ np.diag(max_sv * rng.random(2)) @ Vt


def random_lie_ball_point(n: int, seed) -> np.ndarray:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    while True:
        z = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
        z *= rng.random() / np.linalg.norm(z)
        if in_lie_ball(z):
            return z
