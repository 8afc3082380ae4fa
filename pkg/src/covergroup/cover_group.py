"""The canonical covering group of the identity component of O(2, n+1).

Elements are pairs ``(X, tau)`` with ``psi(X) = rho(tau)``, where ``psi`` is
the SO(2) factor of X. The product adds the cocycle :func:`zeta` to the
angles::

    (X, tau) * (X', tau') = (X X', tau + tau' + zeta(X, X'))

The center is ``{(I, 2 pi k)}`` for even n and ``{((-1)^k I, pi k)}`` for
odd n. Quotients by its discrete subgroups are represented by canonical
representatives (:class:`QuotientElement`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .angle_lift import DEFAULT_STEPS, so2_angle, zeta
from .errors import ConstraintViolated, ParityMismatch
from .pseudo_orthogonal import (
    GroupElement,
    _group_element,
    as_matrix,
    certify,
    conformal_signature,
    fiber_element,
    group_inverse,
    random_element,
    reorthonormalize,
    rho,
)
from .section import decompose, section_matrix

__all__ = [
    "CONSTRAINT_TOL",
    "CoverElement",
    "CenterElement",
    "CenterKind",
    "ChartImage",
    "QuotientKind",
    "QuotientElement",
    "make_cover_element",
    "identity",
    "lift",
    "star",
    "star_inverse",
    "sigma",
    "parametrize",
    "unparametrize",
    "center",
    "cover_distance",
    "random_cover_element",
    "quotient_period",
    "quotient_reduce",
    "quotient_mul",
    "quotient_inverse",
    "quotient_identity",
    "quotient_distance",
    "to_record",
    "from_record",
]

CONSTRAINT_TOL = 1e-7


def _constraint_residual(X: np.ndarray, tau: float) -> float:
    d = decompose(X)
    return float(np.max(np.abs(d.psi - rho(tau))))


@dataclass(frozen=True, eq=False)
class CoverElement:
    """A point ``(X, tau)`` of the covering group."""

    X: GroupElement
    tau: float
    constraint_residual: float

    @property
    def n(self) -> int:
        return self.X.n

    @property
    def matrix(self) -> np.ndarray:
        return self.X.matrix


def make_cover_element(X, tau: float, tol: float = CONSTRAINT_TOL) -> CoverElement:
    """Validate ``psi(X) = rho(tau)`` and build the element.

    Raises
    ------
    ConstraintViolated
        if the constraint residual exceeds ``tol``.
    """
    if not isinstance(X, GroupElement):
        X = certify(X)
    tau = float(tau)
    res = _constraint_residual(X.matrix, tau)
    if not res <= tol:
        raise ConstraintViolated(f"|psi(X) - rho(tau)| = {res:.3e} > {tol:.1e}")
    return CoverElement(X, tau, res)


def identity(n: int) -> CoverElement:
    sig = conformal_signature(n)
    return CoverElement(_group_element(np.eye(sig.m), sig), 0.0, 0.0)


def lift(X, branch: int = 0) -> CoverElement:
    """The element over X whose angle is ``angle(psi(X)) + 2 pi branch``."""
    if not isinstance(X, GroupElement):
        X = certify(X)
    ang, _ = so2_angle(decompose(X).psi)
    return make_cover_element(X, ang + 2 * np.pi * int(branch))


def star(a: CoverElement, b: CoverElement, steps: int = DEFAULT_STEPS) -> CoverElement:
    """Covering-group product; the matrix part is re-orthonormalized."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: n={a.n} and n={b.n}")
    X = reorthonormalize(a.X.matrix @ b.X.matrix, a.X.sig)
    return make_cover_element(X, a.tau + b.tau + zeta(a.X, b.X, steps))


def star_inverse(a: CoverElement, steps: int = DEFAULT_STEPS) -> CoverElement:
    """``(X^{-1}, -tau - zeta(X, X^{-1}))``."""
    Xinv = group_inverse(a.X)
    return make_cover_element(Xinv, -a.tau - zeta(a.X, Xinv, steps))


def sigma(a: CoverElement) -> GroupElement:
    """The covering homomorphism ``(X, tau) -> X``."""
    return a.X


def random_cover_element(n: int, seed, scale: float = 0.4, max_branch: int = 2) -> CoverElement:
    """Lift of :func:`random_element` to a random branch in ``[-max_branch, max_branch]``."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    X = random_element(n, rng, scale)
    return lift(X, int(rng.integers(-max_branch, max_branch + 1)))


def cover_distance(a: CoverElement, b: CoverElement) -> tuple[float, float]:
    """``(max |X_a - X_b|, |tau_a - tau_b|)``."""
    return float(np.max(np.abs(a.matrix - b.matrix))), abs(a.tau - b.tau)


# -- global chart ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChartImage:
    """Result of :func:`parametrize`.

    ``literal_tau`` is the input angle paired with ``P(beta) S(rho(tau), R)``
    as-is; ``element`` carries the angle that satisfies the constraint,
    chosen on the branch nearest ``literal_tau``. ``discrepancy`` is their
    difference; it vanishes because the factorization is unique.
    """

    element: CoverElement
    literal_tau: float
    literal_residual: float
    discrepancy: float


def parametrize(beta, tau: float, R) -> ChartImage:
    """``(beta, tau, R) -> (P(beta) S(rho(tau), R), tau)``."""
    beta = np.asarray(beta, dtype=float)
    X = certify(section_matrix(beta) @ fiber_element(rho(tau), np.asarray(R, dtype=float)))
    ang = decompose(X).psi_angle
    corrected = tau + float(np.remainder(ang - tau + np.pi, 2 * np.pi) - np.pi)
    literal_residual = _constraint_residual(X.matrix, tau)
    return ChartImage(make_cover_element(X, corrected), float(tau), literal_residual, corrected - tau)


def unparametrize(a: CoverElement) -> tuple[np.ndarray, float, np.ndarray]:
    """Inverse chart: ``(beta, tau, R)`` with ``a = (P(beta) S(rho(tau), R), tau)``."""
    d = decompose(a.X)
    return d.beta, a.tau, d.Psi


# -- center --------------------------------------------------------------------


class CenterKind(enum.Enum):
    EVEN_N = "even_n"
    ODD_N = "odd_n"


@dataclass(frozen=True, eq=False)
class CenterElement:
    k: int
    kind: CenterKind
    element: CoverElement


def center(n: int, k: int, kind: CenterKind | str | None = None) -> CenterElement:
    """The k-th power of the generator of the center.

    ``(I, 2 pi k)`` for even n, ``((-1)^k I, pi k)`` for odd n. Passing
    ``kind`` explicitly asserts the parity.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    actual = CenterKind.EVEN_N if n % 2 == 0 else CenterKind.ODD_N
    if kind is not None and CenterKind(kind) is not actual:
        raise ParityMismatch(f"{CenterKind(kind).value} center requested for n={n}")
    sig = conformal_signature(n)
    k = int(k)
    if actual is CenterKind.EVEN_N:
        M, tau = np.eye(sig.m), 2 * np.pi * k
    else:
        M, tau = (-1) ** (k % 2) * np.eye(sig.m), np.pi * k
    return CenterElement(k, actual, CoverElement(_group_element(M, sig), float(tau), 0.0))


# -- quotient groups -----------------------------------------------------------


class QuotientKind(enum.Enum):
    """First kind: divide by ``(I, 2 pi h)``. Second kind (odd n): by ``(-I, (2h+1) pi)``."""

    FIRST = "I"
    SECOND = "II"


def _check_kind(kind: QuotientKind, h: int, n: int) -> None:
    if kind is QuotientKind.FIRST and h < 1:
        raise ValueError(f"first-kind quotients need h >= 1, got {h}")
    if kind is QuotientKind.SECOND:
        if h < 0:
            raise ValueError(f"second-kind quotients need h >= 0, got {h}")
        if n % 2 == 0:
            raise ParityMismatch(f"second-kind quotients need odd n, got n={n}")


def quotient_period(kind: QuotientKind, h: int) -> float:
    """Angle shift of the generator of the divided subgroup."""
    return 2 * np.pi * h if kind is QuotientKind.FIRST else (2 * h + 1) * np.pi


@dataclass(frozen=True, eq=False)
class QuotientElement:
    """A coset, stored through its representative with angle in ``[0, period)``."""

    kind: QuotientKind
    h: int
    representative: CoverElement


def _shift(a: CoverElement, kind: QuotientKind, shifts: int, period: float) -> CoverElement:
    X = a.X
    if kind is QuotientKind.SECOND and shifts % 2:
        X = _group_element(-X.matrix, X.sig)
    return CoverElement(X, a.tau - shifts * period, a.constraint_residual)


def quotient_reduce(a: CoverElement, kind: QuotientKind | str, h: int) -> QuotientElement:
    kind = QuotientKind(kind)
    _check_kind(kind, h, a.n)
    period = quotient_period(kind, h)
    shifts = int(np.floor(a.tau / period))
    rep = _shift(a, kind, shifts, period)
    if rep.tau >= period:  # floor rounding at the upper edge
        rep = _shift(rep, kind, 1, period)
    return QuotientElement(kind, h, rep)


def quotient_identity(n: int, kind: QuotientKind | str, h: int) -> QuotientElement:
    return quotient_reduce(identity(n), kind, h)


def _same_group(p: QuotientElement, q: QuotientElement) -> None:
    if p.kind is not q.kind or p.h != q.h:
        raise ValueError(f"cosets of different quotients: ({p.kind.value},{p.h}) and ({q.kind.value},{q.h})")


def quotient_mul(p: QuotientElement, q: QuotientElement) -> QuotientElement:
    _same_group(p, q)
    return quotient_reduce(star(p.representative, q.representative), p.kind, p.h)


def quotient_inverse(p: QuotientElement) -> QuotientElement:
    return quotient_reduce(star_inverse(p.representative), p.kind, p.h)


def quotient_distance(p: QuotientElement, q: QuotientElement) -> tuple[float, float]:
    """Distance between cosets, robust to representatives on either side of the cut."""
    _same_group(p, q)
    period = quotient_period(p.kind, p.h)
    shifts = int(np.round((q.representative.tau - p.representative.tau) / period))
    return cover_distance(p.representative, _shift(q.representative, p.kind, shifts, period))


# -- serialization -------------------------------------------------------------


def to_record(a: CoverElement) -> dict:
    """JSON-ready record ``{n, matrix (row-major), tau, constraint_residual}``."""
    return {
        "n": a.n,
        "matrix": [float(x) for x in a.matrix.ravel()],
        "tau": float(a.tau),
        "constraint_residual": float(a.constraint_residual),
    }


def from_record(record: dict, tol: float = CONSTRAINT_TOL) -> CoverElement:
    try:
        n = int(record["n"])
        flat = np.asarray(record["matrix"], dtype=float)
        tau = float(record["tau"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed cover element record: {exc}") from exc
    m = n + 3
    if flat.shape != (m * m,):
        raise ValueError(f"matrix must have {m * m} entries for n={n}, got {flat.size}")
    return make_cover_element(certify(flat.reshape(m, m), n), tau, tol)
