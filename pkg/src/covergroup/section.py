"""Global section of the projection onto the domain and the induced factorization.

``P(beta)`` is obtained by signature Gram-Schmidt on the columns of
``B(beta) = [[I_2, beta^T], [beta, I_{n+1}]]``, i.e. on
``(j_1, j_2, B_1, ..., B_{n+1})``. Every group element then factors as
``X = P(base_point(X)) S(psi(X), Psi(X))`` with ``psi`` in SO(2) and ``Psi``
in SO(n+1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .domain_iv import DomainPoint, margin, mu
from .errors import BlockLeakage, NearBoundary
from .pseudo_orthogonal import GroupElement, _gram_diag, as_matrix, certify, rho, signature_gram_schmidt

__all__ = [
    "LEAKAGE_TOL",
    "SectionFrame",
    "Decomposition",
    "basis_matrix",
    "section_matrix",
    "section",
    "a_hat",
    "a_hat_closed",
    "c_hat_closed",
    "base_point",
    "decompose",
    "decompose_arrays",
    "fiber_part",
    "nearest_so2_angle",
    "nearest_rotation",
]

LEAKAGE_TOL = 1e-9
SECTION_MIN_MARGIN = 1e-8


def _beta(beta) -> np.ndarray:
    if isinstance(beta, DomainPoint):
        return beta.beta
    return np.asarray(beta, dtype=float)


def basis_matrix(beta) -> np.ndarray:
    """The positive basis ``B(beta)`` as columns; batched over leading axes."""
    beta = _beta(beta)
    k = beta.shape[-2]
    B = np.zeros(beta.shape[:-2] + (k + 2, k + 2))
    B[..., :2, :2] = np.eye(2)
    B[..., 2:, 2:] = np.eye(k)
    B[..., 2:, :2] = beta
    B[..., :2, 2:] = np.swapaxes(beta, -1, -2)
    return B


def section_matrix(beta, with_triangular: bool = False):
    """``P(beta)``, batched over leading axes of ``beta``.

    With ``with_triangular`` also returns the upper triangular ``T`` with
    ``P = B(beta) T``.
    """
    B = basis_matrix(beta)
    g = _gram_diag(2, B.shape[-1] - 2)
    P, R = signature_gram_schmidt(B, g)
    if not with_triangular:
        return P
    eye = np.broadcast_to(np.eye(R.shape[-1]), R.shape)
    if R.ndim == 2:
        T = scipy.linalg.solve_triangular(R, eye)
    else:
        T = np.stack([scipy.linalg.solve_triangular(r, np.eye(r.shape[-1])) for r in R.reshape((-1,) + R.shape[-2:])])
        T = T.reshape(R.shape)
    return P, T


@dataclass(frozen=True, eq=False)
class SectionFrame:
    beta: np.ndarray
    P: GroupElement
    T: np.ndarray

    @property
    def a_hat(self) -> np.ndarray:
        return self.P.matrix[:2, :2]

    @property
    def b_hat(self) -> np.ndarray:
        return self.P.matrix[:2, 2:]

    @property
    def c_hat(self) -> np.ndarray:
        return self.P.matrix[2:, :2]

    @property
    def d_hat(self) -> np.ndarray:
        return self.P.matrix[2:, 2:]


def section(beta) -> SectionFrame:
    beta = _beta(beta)
    m = margin(beta)
    if not m >= SECTION_MIN_MARGIN:
        raise NearBoundary(f"margin {m:.3e} below {SECTION_MIN_MARGIN:.0e}")
    P, T = section_matrix(beta, with_triangular=True)
    return SectionFrame(np.array(beta), certify(P), T)


def a_hat(beta) -> np.ndarray:
    """Timelike block of ``P(beta)`` (Gram-Schmidt route); batched."""
    return section_matrix(beta)[..., :2, :2]


def _closed_form_terms(beta):
    beta = _beta(beta)
    u, v = beta[:, 0], beta[:, 1]
    one_u = 1.0 - u @ u
    one_mu = 1.0 - mu(u, v)
    if not (one_u > 0 and one_mu > 0):
        raise NearBoundary(f"1-|u|^2 = {one_u:.3e}, 1-mu = {one_mu:.3e}")
    return u, v, one_u, one_mu


def a_hat_closed(beta) -> np.ndarray:
    u, v, one_u, one_mu = _closed_form_terms(beta)
    s_mu = np.sqrt(one_mu)
    return np.array([[1.0, (u @ v) / s_mu], [0.0, one_u / s_mu]]) / np.sqrt(one_u)


def c_hat_closed(beta) -> np.ndarray:
    u, v, one_u, one_mu = _closed_form_terms(beta)
    s_u = np.sqrt(one_u)
    first = u / s_u
    second = (one_u * v + (u @ v) * u) / (s_u * np.sqrt(one_mu))
    return np.stack([first, second], axis=1)


def base_point(X) -> np.ndarray:
    """``c(X) a(X)^{-1}``; batched over leading axes."""
    X = as_matrix(X)
    a = X[..., :2, :2]
    c = X[..., 2:, :2]
    return np.swapaxes(np.linalg.solve(np.swapaxes(a, -1, -2), np.swapaxes(c, -1, -2)), -1, -2)


def nearest_so2_angle(M):
    """``atan2(M21 - M12, M11 + M22)``, in (-pi, pi]; batched."""
    M = np.asarray(M, dtype=float)
    ang = np.arctan2(M[..., 1, 0] - M[..., 0, 1], M[..., 0, 0] + M[..., 1, 1])
    return np.where(ang == -np.pi, np.pi, ang)


def nearest_rotation(M) -> np.ndarray:
    """Orthogonal polar factor of M, forced into SO(k); batched."""
    U, _, Vt = np.linalg.svd(M)
    Q = U @ Vt
    det = np.linalg.det(Q)
    if np.any(det < 0):
        # Flip the direction of the smallest singular value.
        U = U.copy()
        U[..., :, -1] *= np.sign(det)[..., None]
        Q = U @ Vt
    return Q


def fiber_part(X):
    """Batched ``(beta, S, P)`` with ``S = P(beta)^{-1} X``, no projection applied."""
    X = as_matrix(X)
    beta = base_point(X)
    P = section_matrix(beta)
    g = _gram_diag(2, X.shape[-1] - 2)
    S = (g[:, None] * np.swapaxes(P, -1, -2) * g) @ X
    return beta, S, P


def decompose_arrays(X, leakage_tol: float = LEAKAGE_TOL):
    """Batched factorization; returns ``(beta, psi_angle, Psi, leakage, P)``."""
    beta, S, P = fiber_part(X)
    leakage = np.maximum(np.max(np.abs(S[..., :2, 2:]), axis=(-2, -1)), np.max(np.abs(S[..., 2:, :2]), axis=(-2, -1)))
    if np.any(leakage > leakage_tol):
        raise BlockLeakage(f"off-diagonal blocks up to {np.max(leakage):.3e}")
    return beta, nearest_so2_angle(S[..., :2, :2]), nearest_rotation(S[..., 2:, 2:]), leakage, P


@dataclass(frozen=True, eq=False)
class Decomposition:
    """``X = P(beta) S(psi, Psi)``."""

    beta: np.ndarray
    psi_angle: float
    Psi: np.ndarray
    leakage: float
    residual: float

    @property
    def psi(self) -> np.ndarray:
        return rho(self.psi_angle)


def decompose(X, leakage_tol: float = LEAKAGE_TOL) -> Decomposition:
    X = as_matrix(X)
    beta, ang, Psi, leakage, P = decompose_arrays(X, leakage_tol)
    S = np.zeros_like(X)
    S[:2, :2] = rho(ang)
    S[2:, 2:] = Psi
    residual = float(np.max(np.abs(X - P @ S)))
    return Decomposition(beta, float(ang), Psi, float(leakage), residual)
