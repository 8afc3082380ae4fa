"""The Einstein universe R x S^n, its compact forms, and the group actions on them.

A point is ``(tau, y)`` with y a unit vector of R^{n+1}; the metric is
``-dtau^2 + g_{S^n}``. The group O(2, n+1) acts on S^1 x S^n by projectivizing
its linear action on null vectors ``(x, y)``; the covering group acts on
R x S^n through the lift :func:`xi_lift` of the circle component.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angle_lift import DEFAULT_STEPS, unwrap_along
from .cover_group import CoverElement, QuotientElement, QuotientKind, quotient_period
from .errors import DegenerateNorm, KindMismatch, NotTangent, ParityMismatch, StepError
from .pseudo_orthogonal import _gram_diag, as_matrix, rho, rho1
from .section import base_point, decompose, section_matrix

__all__ = [
    "EinsteinPoint",
    "CompactFormPoint",
    "NullRay",
    "ConformalReport",
    "metric_eval",
    "act_compact",
    "xi_map",
    "xi_lift",
    "act_cover",
    "compact_reduce",
    "compact_distance",
    "act_quotient",
    "p_k_cover",
    "p_k_fiber",
    "null_ray",
    "null_equivariance_check",
    "tangent_frame",
    "conformal_check",
    "compact_conformal_check",
    "displacement",
    "effectiveness_probe",
    "random_einstein_point",
    "point_distance",
    "to_record",
    "from_record",
]

UNIT_TOL = 1e-9
TANGENT_TOL = 1e-10
NORM_FLOOR = 1e-12
MIN_STEP, MAX_STEP = 1e-7, 1e-3


@dataclass(frozen=True, eq=False)
class EinsteinPoint:
    tau: float
    y: np.ndarray

    @classmethod
    def of(cls, tau: float, y) -> "EinsteinPoint":
        """Validate ``|y| = 1`` (within 1e-9) and renormalize to machine precision."""
        y = np.array(y, dtype=float)
        if y.ndim != 1 or y.size < 3:
            raise ValueError(f"y must be a vector of length n+1 >= 3, got shape {y.shape}")
        norm = np.linalg.norm(y)
        if not abs(norm - 1.0) <= UNIT_TOL:
            raise ValueError(f"|y| = {norm!r} is not 1")
        y = y / norm
        y.setflags(write=False)
        return cls(float(tau), y)

    @property
    def n(self) -> int:
        return self.y.size - 1


def random_einstein_point(n: int, seed, tau_range: float = np.pi) -> EinsteinPoint:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    y = rng.standard_normal(n + 1)
    return EinsteinPoint.of(rng.uniform(-tau_range, tau_range), y / np.linalg.norm(y))


def point_distance(p: EinsteinPoint, q: EinsteinPoint) -> tuple[float, float]:
    """``(|tau_p - tau_q|, max |y_p - y_q|)``."""
    return abs(p.tau - q.tau), float(np.max(np.abs(p.y - q.y)))


def metric_eval(p: EinsteinPoint, v, w) -> float:
    """``-v_tau w_tau + v_y . w_y`` for tangent vectors ``[v_tau, v_y...]``."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    for vec in (v, w):
        if vec.shape != (p.y.size + 1,):
            raise ValueError(f"tangent vectors have length {p.y.size + 1}, got {vec.shape}")
        if abs(vec[1:] @ p.y) > TANGENT_TOL:
            raise NotTangent(f"sphere component has normal part {vec[1:] @ p.y:.3e}")
    return float(-v[0] * w[0] + v[1:] @ w[1:])


def _normalize(v, what: str) -> np.ndarray:
    norm = np.linalg.norm(v, axis=-1, keepdims=True)
    if np.any(norm < NORM_FLOOR):
        raise DegenerateNorm(f"{what} has norm {np.min(norm):.3e}")
    return v / norm


def act_compact(X, x, y) -> tuple[np.ndarray, np.ndarray]:
    """``((a x + b y)/|.|, (c x + d y)/|.|)`` on S^1 x S^n."""
    X = as_matrix(X)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    v = X @ np.concatenate([x, y])
    return _normalize(v[:2], "circle component"), _normalize(v[2:], "sphere component")


def xi_map(beta, vartheta, tau, y) -> np.ndarray:
    """``(a(beta) rho(vartheta) rho1(tau) + b(beta) y)/|.|``; batched over beta and vartheta."""
    P = section_matrix(beta)
    # rho(vartheta) rho1(tau) = rho1(vartheta + tau)
    v = (P[..., :2, :2] @ rho1(np.asarray(vartheta) + tau)[..., None])[..., 0]
    v = v + P[..., :2, 2:] @ np.asarray(y, dtype=float)
    return _normalize(v, "circle component")


def _relative_rotation(w: np.ndarray, tau: float) -> np.ndarray:
    # Rotation taking rho1(tau) to the unit vectors w (tau may be batched).
    W = np.stack([np.stack([w[..., 0], -w[..., 1]], -1), np.stack([w[..., 1], w[..., 0]], -1)], -2)
    return W @ rho(-np.asarray(tau))


def xi_lift(beta, vartheta: float, p: EinsteinPoint, steps: int = DEFAULT_STEPS, path_kind: str = "straight") -> float:
    """Continuous real lift of :func:`xi_map`, equal to tau on the slice ``beta = 0, vartheta = 0``.

    The straight path contracts ``(beta, vartheta)`` to the origin; the
    ``"two_leg"`` path first moves ``vartheta`` with ``beta = 0`` and then
    ``beta``. Both end on the same value.
    """
    beta = np.asarray(beta, dtype=float)
    tau = p.tau

    def leg(betas, thetas, start):
        # The carrier rotation rho(vartheta_t) is known in closed form; only the
        # remainder is unwrapped, so a large vartheta cannot alias the grid.
        c0, c1 = float(thetas(np.zeros(1))[0]), float(thetas(np.ones(1))[0])
        rest = unwrap_along(lambda ts: _relative_rotation(xi_map(betas(ts), thetas(ts), tau, p.y), tau + thetas(ts)),
                            start - c0, steps)
        return rest.value + c1

    if path_kind == "straight":
        return tau + leg(lambda ts: ts[:, None, None] * beta, lambda ts: ts * vartheta, 0.0)
    if path_kind == "two_leg":
        mid = leg(lambda ts: np.zeros((len(ts),) + beta.shape), lambda ts: ts * vartheta, 0.0)
        return tau + leg(lambda ts: ts[:, None, None] * beta, lambda ts: np.full(len(ts), vartheta), mid)
    raise ValueError(f"unknown path kind {path_kind!r}")


class _CoverAction:
    """Data of a cover element reused across many points."""

    def __init__(self, a: CoverElement, steps: int = DEFAULT_STEPS):
        self.a = a
        self.steps = steps
        X = a.matrix
        self.beta = base_point(X)
        self.Psi = decompose(X).Psi
        self.c = X[2:, :2]
        self.d = X[2:, 2:]

    def __call__(self, tau: float, y: np.ndarray) -> tuple[float, np.ndarray]:
        q = EinsteinPoint(float(tau), self.Psi @ y)
        new_tau = xi_lift(self.beta, self.a.tau, q, self.steps)
        new_y = _normalize(self.c @ rho1(tau) + self.d @ y, "sphere component")
        return new_tau, new_y


def act_cover(a: CoverElement, p: EinsteinPoint, steps: int = DEFAULT_STEPS) -> EinsteinPoint:
    """Lifted action of the covering group on R x S^n."""
    if a.n != p.n:
        raise ValueError(f"dimension mismatch: element n={a.n}, point n={p.n}")
    tau, y = _CoverAction(a, steps)(p.tau, p.y)
    return EinsteinPoint(tau, y)


# -- compact forms -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CompactFormPoint:
    """A point of ``R x S^n`` modulo a deck group, stored by a canonical representative.

    First kind k: ``tau in [0, 2 pi k)``. Second kind k (odd n):
    ``tau in [0, (2k+1) pi)``, reached by the deck generator
    ``(tau, y) -> (tau + (2k+1) pi, -y)``.
    """

    kind: QuotientKind
    k: int
    representative: EinsteinPoint


def _deck_shift(p: EinsteinPoint, kind: QuotientKind, shifts: int, period: float) -> EinsteinPoint:
    y = -p.y if kind is QuotientKind.SECOND and shifts % 2 else p.y
    return EinsteinPoint(p.tau - shifts * period, y)


def compact_reduce(p: EinsteinPoint, kind: QuotientKind | str, k: int) -> CompactFormPoint:
    kind = QuotientKind(kind)
    if kind is QuotientKind.FIRST and k < 1:
        raise ValueError(f"first-kind compact forms need k >= 1, got {k}")
    if kind is QuotientKind.SECOND:
        if k < 0:
            raise ValueError(f"second-kind compact forms need k >= 0, got {k}")
        if p.n % 2 == 0:
            raise ParityMismatch(f"second-kind compact forms need odd n, got n={p.n}")
    period = quotient_period(kind, k)
    rep = _deck_shift(p, kind, int(np.floor(p.tau / period)), period)
    if rep.tau >= period:
        rep = _deck_shift(rep, kind, 1, period)
    return CompactFormPoint(kind, k, rep)


def compact_distance(p: CompactFormPoint, q: CompactFormPoint) -> tuple[float, float]:
    if p.kind is not q.kind or p.k != q.k:
        raise KindMismatch("points of different compact forms")
    period = quotient_period(p.kind, p.k)
    shifts = int(np.round((q.representative.tau - p.representative.tau) / period))
    return point_distance(p.representative, _deck_shift(q.representative, p.kind, shifts, period))


def act_quotient(q: QuotientElement, p: CompactFormPoint, steps: int = DEFAULT_STEPS) -> CompactFormPoint:
    """Action of a quotient group on the matching compact form."""
    if q.kind is not p.kind or q.h != p.k:
        raise KindMismatch(f"group ({q.kind.value},{q.h}) does not act on form ({p.kind.value},{p.k})")
    return compact_reduce(act_cover(q.representative, p.representative, steps), p.kind, p.k)


def p_k_cover(k: int, x: complex, y) -> tuple[complex, np.ndarray]:
    """The k-fold covering ``(x, y) -> (x^k, y)`` of S^1 x S^n."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return complex(x) ** k, np.asarray(y, dtype=float)


def p_k_fiber(k: int, x: complex) -> np.ndarray:
    """The k circle points mapped to x by :func:`p_k_cover`."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return np.exp(1j * (np.angle(x) + 2 * np.pi * np.arange(k)) / k)


# -- null lines ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NullRay:
    """An isotropic vector of R^{2,n+1} whose R^2 part has unit norm."""

    vector: np.ndarray
    oriented: bool = True

    def isotropy(self) -> float:
        g = _gram_diag(2, self.vector.size - 2)
        return float(self.vector @ (g * self.vector))


def null_ray(p: EinsteinPoint, oriented: bool = True) -> NullRay:
    return NullRay(np.concatenate([rho1(p.tau), p.y]), oriented)


def null_equivariance_check(X, p: EinsteinPoint) -> float:
    """Distance between the rescaled image ray and the compact action."""
    X = as_matrix(X)
    v = X @ null_ray(p).vector
    v = v / np.linalg.norm(v[:2])
    x, y = act_compact(X, rho1(p.tau), p.y)
    return float(np.max(np.abs(v - np.concatenate([x, y]))))


# -- conformality --------------------------------------------------------------


def tangent_frame(y) -> np.ndarray:
    """Orthonormal, positively oriented basis of the tangent space of S^n at y, as columns.

    Uses the Householder reflection exchanging e_1 and y; the first vector
    is negated so that ``det(y, t_1, ..., t_n) = +1``.
    """
    y = np.asarray(y, dtype=float)
    k = y.size
    w = -y.copy()
    w[0] += 1.0
    if np.linalg.norm(w) < 1e-8:
        return np.eye(k)[:, 1:]
    H = np.eye(k) - 2.0 * np.outer(w, w) / (w @ w)
    T = H[:, 1:].copy()
    T[:, 0] = -T[:, 0]
    return T


@dataclass(frozen=True)
class ConformalReport:
    factor: float
    off_ratio: float
    orient: int
    time_orient: int


def _check_step(h: float) -> None:
    if not MIN_STEP <= h <= MAX_STEP:
        raise StepError(f"step {h!r} outside [{MIN_STEP:.0e}, {MAX_STEP:.0e}]")


def _sphere_step(y: np.ndarray, t: np.ndarray, s: float) -> np.ndarray:
    return np.cos(s) * y + np.sin(s) * t


def _pushforward(F, tau: float, y: np.ndarray, h: float, time_scale: float = 1.0, wrap: float | None = None):
    """Jacobian of ``F(tau, y) -> (tau', y')`` in orthonormal frames.

    The time coordinate is multiplied by ``time_scale`` to make the frame
    orthonormal for ``-time_scale^2 dtau^2 + g``. ``wrap`` reduces time
    differences modulo a period (compact forms).
    """
    frame_in = tangent_frame(y)
    tau0, y0 = F(tau, y)
    frame_out = tangent_frame(y0)

    def column(plus, minus):
        dt = plus[0] - minus[0]
        if wrap is not None:
            dt -= wrap * np.round(dt / wrap)
        dy = frame_out.T @ (plus[1] - minus[1])
        return np.concatenate([[time_scale * dt], dy]) / (2 * h)

    cols = [column(F(tau + h / time_scale, y), F(tau - h / time_scale, y))]
    for j in range(frame_in.shape[1]):
        t = frame_in[:, j]
        cols.append(column(F(tau, _sphere_step(y, t, h)), F(tau, _sphere_step(y, t, -h))))
    return np.stack(cols, axis=1)


def _report(J: np.ndarray) -> ConformalReport:
    eta = np.ones(J.shape[0])
    eta[0] = -1.0
    G = J.T @ (eta[:, None] * J)
    factor = float(np.trace(eta[:, None] * G) / J.shape[0])
    off = float(np.max(np.abs(G - factor * np.diag(eta))) / abs(factor))
    return ConformalReport(factor, off, int(np.sign(np.linalg.det(J))), int(np.sign(J[0, 0])))


def conformal_check(a: CoverElement, p: EinsteinPoint, h: float = 1e-5, steps: int = DEFAULT_STEPS) -> ConformalReport:
    """Finite-difference check that the lifted action of ``a`` is conformal at p.

    Central differences along the orthonormal frame ``(d_tau, t_1..t_n)``
    give the pushforward J; ``factor`` is the scale of the pullback metric,
    ``off_ratio`` its relative distance from a multiple of the metric,
    ``orient`` the sign of det J and ``time_orient`` the sign of the time
    component of the image of ``d_tau``.
    """
    _check_step(h)
    F = _CoverAction(a, steps)
    return _report(_pushforward(F, p.tau, p.y, h))


def compact_conformal_check(q: QuotientElement | np.ndarray, theta: float, y, h: float = 1e-5,
                            steps: int = DEFAULT_STEPS) -> ConformalReport:
    """Conformality on the first-kind compact form of index k for ``-k^2 dtheta^2 + g``.

    ``q`` is either a first-kind quotient element (index k) or a group
    matrix, acting on S^1 x S^n by :func:`act_compact` (k = 1). The circle
    coordinate is ``theta = tau / k``.
    """
    _check_step(h)
    y = np.asarray(y, dtype=float)
    if isinstance(q, QuotientElement):
        if q.kind is not QuotientKind.FIRST:
            raise KindMismatch("the compact-form metric check covers first-kind forms")
        k = q.h

        def F(th, yy):
            out = act_quotient(q, compact_reduce(EinsteinPoint(k * th, yy), q.kind, k), steps).representative
            return out.tau / k, out.y
    else:
        k = 1
        X = as_matrix(q)

        def F(th, yy):
            x, out = act_compact(X, rho1(th), yy)
            return float(np.arctan2(x[1], x[0])), out

    return _report(_pushforward(F, theta, y, h, time_scale=float(k), wrap=2 * np.pi))


def displacement(a: CoverElement, p: EinsteinPoint, steps: int = DEFAULT_STEPS) -> float:
    q = act_cover(a, p, steps)
    return abs(q.tau - p.tau) + float(np.linalg.norm(q.y - p.y))


def effectiveness_probe(a: CoverElement, points, steps: int = DEFAULT_STEPS) -> float:
    """Largest displacement of the sample points under ``a``."""
    F = _CoverAction(a, steps)
    best = 0.0
    for p in points:
        tau, y = F(p.tau, p.y)
        best = max(best, abs(tau - p.tau) + float(np.linalg.norm(y - p.y)))
    return best


# -- serialization -------------------------------------------------------------


def to_record(p: EinsteinPoint) -> dict:
    return {"tau": float(p.tau), "y": [float(v) for v in p.y]}


def from_record(record: dict) -> EinsteinPoint:
    try:
        return EinsteinPoint.of(float(record["tau"]), record["y"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed Einstein point record: {exc}") from exc
