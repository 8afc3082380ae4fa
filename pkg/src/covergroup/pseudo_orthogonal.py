"""Arithmetic on the identity component of O(2, n+1).

Matrices are dense float64 arrays acting on column vectors. The scalar
product on R^{p,q} has Gram matrix ``G = diag(-1, s, 1, ..., 1)`` with
``s = (-1)**(p-1)``, so for the conformal group (p = 2) it is
``diag(-1, -1, 1, ..., 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .errors import NearDegenerate, NotOrthogonal, WrongComponent

__all__ = [
    "DEFAULT_TOL",
    "Signature",
    "GroupElement",
    "LieAlgebraElement",
    "conformal_signature",
    "gram_matrix",
    "inner_product",
    "certify",
    "as_matrix",
    "group_inverse",
    "signature_gram_schmidt",
    "reorthonormalize",
    "random_algebra_element",
    "random_element",
    "random_rotation",
    "rho",
    "rho1",
    "fiber_element",
    "moebius_matrix",
    "moebius_gram",
    "moebius_conjugate",
    "moebius_unconjugate",
    "parabolic_assemble",
    "parabolic_test",
]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Signature:
    """Signature (p, q) of R^{p,q}; only p in {1, 2} is supported."""

    p: int
    q: int

    def __post_init__(self):
        if self.p not in (1, 2):
            raise ValueError(f"p must be 1 or 2, got {self.p}")
        if self.q <= self.p:
            raise ValueError(f"need q > p, got p={self.p}, q={self.q}")
        if self.p == 2 and self.q < 3:
            raise ValueError("signature (2, q) needs q >= 3 (n >= 2)")

    @property
    def m(self) -> int:
        return self.p + self.q

    @property
    def sign(self) -> int:
        """The sign ``(-1)**(p-1)`` in front of ``x^1 y^1``."""
        return 1 if self.p == 1 else -1


def conformal_signature(n: int) -> Signature:
    """Signature (2, n+1) of the conformal group of a (1+n)-dimensional Lorentz manifold."""
    return Signature(2, n + 1)


@lru_cache(maxsize=None)
def _gram_diag(p: int, q: int) -> np.ndarray:
    g = np.ones(p + q)
    g[0] = -1.0
    g[1] = 1.0 if p == 1 else -1.0
    g.setflags(write=False)
    return g


def gram_matrix(sig: Signature) -> np.ndarray:
    return np.diag(_gram_diag(sig.p, sig.q))


def inner_product(x, y, sig: Signature) -> float:
    """Scalar product of signature ``sig`` between two m-vectors."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (sig.m,) or y.shape != (sig.m,):
        raise ValueError(f"expected vectors of length {sig.m}, got {x.shape} and {y.shape}")
    return float(np.dot(x * _gram_diag(sig.p, sig.q), y))


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A matrix certified to lie in the identity component of O(p, q).

    The blocks ``a, b, c, d`` split rows and columns after the first p
    (timelike) coordinates.
    """

    matrix: np.ndarray
    residual: float
    sig: Signature

    @property
    def n(self) -> int:
        return self.sig.m - 3

    @property
    def a(self) -> np.ndarray:
        p = self.sig.p
        return self.matrix[:p, :p]

    @property
    def b(self) -> np.ndarray:
        p = self.sig.p
        return self.matrix[:p, p:]

    @property
    def c(self) -> np.ndarray:
        p = self.sig.p
        return self.matrix[p:, :p]

    @property
    def d(self) -> np.ndarray:
        p = self.sig.p
        return self.matrix[p:, p:]

    def __matmul__(self, other):
        if isinstance(other, GroupElement):
            return self.matrix @ other.matrix
        return self.matrix @ other


def as_matrix(X) -> np.ndarray:
    if isinstance(X, GroupElement):
        return X.matrix
    return np.asarray(X, dtype=float)


def _frozen(M: np.ndarray) -> np.ndarray:
    M = np.array(M, dtype=float, copy=True)
    M.setflags(write=False)
    return M


def _residual(M: np.ndarray, g: np.ndarray) -> float:
    return float(np.max(np.abs((M.T * g) @ M - np.diag(g))))


def certify(M, n: int | None = None, tol: float = DEFAULT_TOL, sig: Signature | None = None) -> GroupElement:
    """Certify ``M`` as an element of the identity component.

    Raises
    ------
    NotOrthogonal
        if ``max|M^T G M - G| > tol``.
    WrongComponent
        if the timelike or spacelike diagonal block has non-positive determinant.
    """
    M = as_matrix(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if sig is None:
        sig = conformal_signature(M.shape[0] - 3 if n is None else n)
    if M.shape != (sig.m, sig.m):
        raise ValueError(f"expected shape {(sig.m, sig.m)}, got {M.shape}")
    res = _residual(M, _gram_diag(sig.p, sig.q))
    if not res <= tol:
        raise NotOrthogonal(res, tol)
    p = sig.p
    det_a = float(np.linalg.det(M[:p, :p]))
    if det_a <= 0:
        raise WrongComponent("timelike", det_a)
    det_d = float(np.linalg.det(M[p:, p:]))
    if det_d <= 0:
        raise WrongComponent("spacelike", det_d)
    return GroupElement(_frozen(M), res, sig)


def _group_element(M: np.ndarray, sig: Signature) -> GroupElement:
    # Trusted construction: products and inverses of certified elements.
    return GroupElement(_frozen(M), _residual(M, _gram_diag(sig.p, sig.q)), sig)


def group_inverse(X) -> GroupElement | np.ndarray:
    """``X^{-1} = G X^T G``; returns the same kind of object it was given."""
    if isinstance(X, GroupElement):
        g = _gram_diag(X.sig.p, X.sig.q)
        return _group_element(g[:, None] * X.matrix.T * g, X.sig)
    M = np.asarray(X, dtype=float)
    m = M.shape[-1]
    g = _gram_diag(2, m - 2)
    return g[:, None] * np.swapaxes(M, -1, -2) * g


def signature_gram_schmidt(B, metric, min_pivot: float = 1e-9):
    """Gram-Schmidt on the columns of ``B`` for the diagonal metric ``metric``.

    Column j is normalized to ``<q_j, q_j> = metric[j]``; projections are
    applied twice (classical Gram-Schmidt with reorthogonalization).
    Leading dimensions of ``B`` are treated as a batch.

    Returns
    -------
    Q, R : ndarray
        ``B = Q R`` with R upper triangular with positive diagonal.

    Raises
    ------
    NearDegenerate
        if some pivot ``metric[j] * <w, w>`` is below ``min_pivot``.
    """
    B = np.asarray(B, dtype=float)
    g = np.asarray(metric, dtype=float)
    m = B.shape[-1]
    Q = np.empty_like(B)
    R = np.zeros_like(B)
    for j in range(m):
        w = B[..., :, j]
        if j:
            E = Q[..., :, :j]
            Et = np.swapaxes(E, -1, -2)
            for _ in range(2):
                coef = (Et @ (g * w)[..., None])[..., 0] * g[:j]
                w = w - (E @ coef[..., None])[..., 0]
                R[..., :j, j] += coef
        pivot = np.sum(w * g * w, axis=-1) * g[j]
        bad = ~(pivot >= min_pivot)
        if np.any(bad):
            worst = float(np.min(np.where(np.isnan(pivot), -np.inf, pivot)))
            raise NearDegenerate(f"column {j}: pivot {worst:.3e} (expected sign {g[j]:+.0f}, magnitude >= {min_pivot:.0e})")
        r = np.sqrt(pivot)
        Q[..., :, j] = w / r[..., None]
        R[..., j, j] = r
    return Q, R


def reorthonormalize(M, sig: Signature | None = None) -> GroupElement:
    """Project a nearly pseudo-orthogonal matrix back onto the group."""
    M = as_matrix(M)
    if sig is None:
        sig = conformal_signature(M.shape[0] - 3)
    Q, _ = signature_gram_schmidt(M, _gram_diag(sig.p, sig.q))
    return certify(Q, sig=sig)


@dataclass(frozen=True, eq=False)
class LieAlgebraElement:
    """A matrix A with ``A^T G + G A = 0``."""

    matrix: np.ndarray
    sig: Signature

    def __post_init__(self):
        g = _gram_diag(self.sig.p, self.sig.q)
        A = self.matrix
        GA = g[:, None] * A
        if not np.allclose(GA, -GA.T, rtol=0, atol=1e-12 * max(1.0, np.max(np.abs(A)))):
            raise ValueError("matrix is not G-antisymmetric")

    def exp(self) -> np.ndarray:
        return scipy.linalg.expm(self.matrix)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_algebra_element(n: int, seed, scale: float = 1.0) -> LieAlgebraElement:
    """``G K`` with K antisymmetric with independent N(0, scale^2) entries."""
    rng = _rng(seed)
    sig = conformal_signature(n)
    m = sig.m
    K = np.zeros((m, m))
    iu = np.triu_indices(m, 1)
    K[iu] = scale * rng.standard_normal(len(iu[0]))
    K = K - K.T
    return LieAlgebraElement(_gram_diag(sig.p, sig.q)[:, None] * K, sig)


def random_element(n: int, seed, scale: float = 0.4) -> GroupElement:
    """Product of three exponentials of random Lie algebra elements.

    Deterministic for a given integer seed. ``scale`` is the standard
    deviation of the independent antisymmetric entries.
    """
    if not scale >= 0:
        raise ValueError(f"scale must be non-negative, got {scale}")
    rng = _rng(seed)
    sig = conformal_signature(n)
    M = np.eye(sig.m)
    for _ in range(3):
        M = M @ random_algebra_element(n, rng, scale).exp()
    return reorthonormalize(M, sig)


def random_rotation(k: int, seed) -> np.ndarray:
    """Haar-random element of SO(k)."""
    rng = _rng(seed)
    Z = rng.standard_normal((k, k))
    Q, R = np.linalg.qr(Z)
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def rho(t):
    """Rotation matrix ``[[cos t, -sin t], [sin t, cos t]]``; vectorized over t."""
    t = np.asarray(t, dtype=float)
    c, s = np.cos(t), np.sin(t)
    return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)


def rho1(t):
    """First column ``(cos t, sin t)`` of ``rho(t)``."""
    t = np.asarray(t, dtype=float)
    return np.stack([np.cos(t), np.sin(t)], -1)


def fiber_element(r, R) -> np.ndarray:
    """Block-diagonal ``S(r, R)`` with r in SO(2), R in SO(n+1)."""
    r = np.asarray(r, dtype=float)
    R = np.asarray(R, dtype=float)
    k = R.shape[-1]
    S = np.zeros(r.shape[:-2] + (k + 2, k + 2))
    S[..., :2, :2] = r
    S[..., 2:, 2:] = R
    return S


@lru_cache(maxsize=None)
def _moebius_matrix(p: int, q: int) -> np.ndarray:
    m = p + q
    s = 1.0 if p == 1 else -1.0
    D = np.zeros((m, m))
    D[0, 0] = 1.0
    D[0, m - 1] = s
    D[m - 1, 0] = 1.0
    D[m - 1, m - 1] = -s
    D /= np.sqrt(2.0)
    for j in range(1, m - 1):
        D[j, j] = 1.0
    D.setflags(write=False)
    return D


def moebius_matrix(sig: Signature) -> np.ndarray:
    """The change of coordinates ``D_p`` to Moebius (light-cone) coordinates."""
    return _moebius_matrix(sig.p, sig.q).copy()


def moebius_gram(sig: Signature) -> np.ndarray:
    """Gram matrix of the scalar product in Moebius coordinates."""
    m = sig.m
    M = np.zeros((m, m))
    M[0, m - 1] = M[m - 1, 0] = -1.0
    M[1, 1] = sig.sign
    for j in range(2, m - 1):
        M[j, j] = 1.0
    return M


def moebius_conjugate(X, sig: Signature | None = None) -> np.ndarray:
    """``D_p X D_p^{-1}``."""
    X = as_matrix(X)
    if sig is None:
        sig = conformal_signature(X.shape[0] - 3)
    D = _moebius_matrix(sig.p, sig.q)
    return D @ np.linalg.solve(D.T, X.T).T


def moebius_unconjugate(Y, sig: Signature) -> np.ndarray:
    """``D_p^{-1} Y D_p``, the inverse of :func:`moebius_conjugate`."""
    D = _moebius_matrix(sig.p, sig.q)
    return np.linalg.solve(D, np.asarray(Y, dtype=float) @ D)


def _middle_metric(sig: Signature) -> np.ndarray:
    J = np.ones(sig.m - 2)
    J[0] = sig.sign
    return J


def parabolic_assemble(r: float, B, y, sig: Signature) -> np.ndarray:
    """Assemble ``X(r, B, y)`` in the parabolic subgroup fixing the ray of e_0.

    ``B`` must lie in the identity component of O(p-1, q-1) (SO(q-1) when
    p = 1) and ``y`` in R^{m-2}.
    """
    if not r > 0:
        raise ValueError(f"r must be positive, got {r}")
    m = sig.m
    B = np.asarray(B, dtype=float)
    y = np.asarray(y, dtype=float)
    if B.shape != (m - 2, m - 2) or y.shape != (m - 2,):
        raise ValueError(f"expected B of shape {(m - 2, m - 2)} and y of length {m - 2}")
    if sig.p == 2:
        certify(B, sig=Signature(1, sig.q - 1))
    else:
        if not np.allclose(B.T @ B, np.eye(m - 2), atol=DEFAULT_TOL) or np.linalg.det(B) <= 0:
            raise WrongComponent("rotation", float(np.linalg.det(B)))
    ystar = _middle_metric(sig) * y
    X = np.zeros((m, m))
    X[0, 0] = r
    X[0, 1:m - 1] = ystar @ B
    X[0, m - 1] = ystar @ y / (2.0 * r)
    X[1:m - 1, 1:m - 1] = B
    X[1:m - 1, m - 1] = y / r
    X[m - 1, m - 1] = 1.0 / r
    return X


def parabolic_test(M, sig: Signature, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``M`` is in the Moebius-form group and fixes the ray of e_0."""
    M = np.asarray(M, dtype=float)
    m = sig.m
    if M.shape != (m, m):
        return False
    col = M[:, 0]
    if not (col[0] > 0 and np.max(np.abs(col[1:])) <= tol * max(1.0, col[0])):
        return False
    Mg = moebius_gram(sig)
    if np.max(np.abs(M.T @ Mg @ M - Mg)) > tol * max(1.0, np.max(np.abs(M)) ** 2):
        return False
    try:
        certify(moebius_unconjugate(M, sig), sig=sig, tol=tol * max(1.0, np.max(np.abs(M)) ** 2))
    except (NotOrthogonal, WrongComponent):
        return False
    return True
