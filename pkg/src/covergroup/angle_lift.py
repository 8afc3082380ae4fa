"""Continuous real lifts of SO(2)-valued paths, and the lift functions built on them.

Every lift in the package goes through :func:`unwrap_along`, which samples
the path adaptively so that no single step turns by pi/2 or more, then
accumulates the step angles. Each call produces a :class:`LiftReport`;
reports can be captured with :func:`record_lifts`::

    with record_lifts() as reports:
        zeta(X, Y)
    assert max(r.max_step for r in reports) < np.pi / 2
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NotRotation, SubdivisionExhausted
from .pseudo_orthogonal import as_matrix, rho
from .section import a_hat, base_point, decompose, fiber_part, nearest_so2_angle

__all__ = [
    "DEFAULT_STEPS",
    "STEP_THRESHOLD",
    "LiftReport",
    "ProductDecomposition",
    "record_lifts",
    "wrap_angle",
    "so2_angle",
    "unwrap_along",
    "eta",
    "r_map",
    "theta",
    "product_decompose",
    "zeta",
]

DEFAULT_STEPS = 16
STEP_THRESHOLD = np.pi / 2
MAX_EVALUATIONS = 2 ** 20

_recorders: contextvars.ContextVar[tuple] = contextvars.ContextVar("lift_recorders", default=())


@dataclass(frozen=True)
class LiftReport:
    value: float
    steps: int
    max_step: float
    residual: float


@contextlib.contextmanager
def record_lifts():
    """Collect every :class:`LiftReport` produced inside the block."""
    reports: list[LiftReport] = []
    token = _recorders.set(_recorders.get() + (reports,))
    try:
        yield reports
    finally:
        _recorders.reset(token)


def wrap_angle(x):
    """Reduce to [-pi, pi]."""
    return x - 2 * np.pi * np.round(np.asarray(x) / (2 * np.pi))


def so2_angle(M, tol: float = 1e-6) -> tuple[float, float]:
    """Angle of a near-rotation in (-pi, pi], and its distance from ``rho(angle)``."""
    M = np.asarray(M, dtype=float)
    if M.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {M.shape}")
    ang = float(nearest_so2_angle(M))
    residual = float(np.max(np.abs(M - rho(ang))))
    if not residual <= tol:
        raise NotRotation(f"distance {residual:.3e} from SO(2)")
    return ang, residual


def unwrap_along(
    path: Callable[[np.ndarray], np.ndarray],
    start: float = 0.0,
    steps: int = DEFAULT_STEPS,
    threshold: float = STEP_THRESHOLD,
    max_evaluations: int = MAX_EVALUATIONS,
) -> LiftReport:
    """Lift a continuous path ``[0, 1] -> SO(2)`` to the real line.

    ``path`` maps a 1-D array of parameters to an array of 2x2 matrices.
    The parameter grid starts with ``steps`` uniform intervals; any interval
    whose relative rotation is at least ``threshold`` is bisected until none
    remains. The grid is then halved once more as a consistency check, and
    refinement resumes wherever two half steps disagree with the full step by
    a revolution. The returned value starts at ``start`` and ends on the angle
    of ``path(1)``.
    """
    ts = np.linspace(0.0, 1.0, steps + 1)
    mats = np.asarray(path(ts), dtype=float)
    evaluations = len(ts)
    if np.max(np.abs(mats[0] - rho(start))) > 1e-6:
        raise ValueError("path(0) is not rho(start)")
    angles = nearest_so2_angle(mats)
    far = np.max(np.abs(mats - rho(angles)), axis=(-2, -1))
    if np.max(far) > 1e-6:
        raise NotRotation(f"path leaves SO(2) by {np.max(far):.3e}")
    end = mats[-1]
    checked = False
    while True:
        deltas = wrap_angle(np.diff(angles))
        bad = np.flatnonzero(np.abs(deltas) >= threshold)
        if bad.size == 0:
            if checked:
                break
            # One midpoint pass: an interval that turned by a full extra
            # revolution shows up as two half steps not adding up to its step.
            checked = True
            mids = 0.5 * (ts[:-1] + ts[1:])
            mid_angles = nearest_so2_angle(np.asarray(path(mids), dtype=float))
            evaluations += mids.size
            halves = wrap_angle(mid_angles - angles[:-1]) + wrap_angle(angles[1:] - mid_angles)
            bad = np.flatnonzero(np.abs(halves - deltas) > np.pi)
            ts = np.insert(ts, np.arange(1, ts.size), mids)
            angles = np.insert(angles, np.arange(1, angles.size), mid_angles)
            if bad.size:
                checked = False
            continue
        if evaluations + bad.size > max_evaluations:
            raise SubdivisionExhausted(f"{evaluations} evaluations, {bad.size} intervals still too coarse")
        mids = 0.5 * (ts[bad] + ts[bad + 1])
        new = np.asarray(path(mids), dtype=float)
        evaluations += bad.size
        ts = np.insert(ts, bad + 1, mids)
        angles = np.insert(angles, bad + 1, nearest_so2_angle(new))
    value = start + float(np.sum(deltas))
    value += float(wrap_angle(angles[-1] - value))
    report = LiftReport(
        value=value,
        steps=len(ts) - 1,
        max_step=float(np.max(np.abs(deltas))) if deltas.size else 0.0,
        residual=float(np.max(np.abs(end - rho(value)))),
    )
    for sink in _recorders.get():
        sink.append(report)
    return report


def _scaled(beta: np.ndarray, ts: np.ndarray) -> np.ndarray:
    return ts[:, None, None] * beta


def eta(beta, r, steps: int = DEFAULT_STEPS) -> float:
    """The lift of ``a(beta r^-1)^-1 r a(beta) r^-1`` normalized by eta(0, I) = 0.

    ``a`` is the timelike block of the section. The path contracts beta to
    the origin, where the map is constant.
    """
    beta = np.asarray(beta, dtype=float)
    r = np.asarray(r, dtype=float)

    def path(ts):
        betas = _scaled(beta, ts)
        a0 = a_hat(betas)
        a1 = a_hat(betas @ r.T)
        return np.linalg.solve(a1, r @ a0 @ r.T)

    return unwrap_along(path, 0.0, steps).value


def r_map(beta, beta2) -> np.ndarray:
    """SO(2) part of ``P(beta) P(beta2)`` (raw block, batched)."""
    from .section import section_matrix

    _, S, _ = fiber_part(section_matrix(beta) @ section_matrix(beta2))
    return S[..., :2, :2]


def theta(beta, beta2, steps: int = DEFAULT_STEPS, path_kind: str = "straight") -> float:
    """Real lift of the SO(2) part of ``P(beta) P(beta2)``, zero at the origin.

    ``path_kind="straight"`` contracts both arguments at once; ``"two_leg"``
    first moves ``beta2`` (with ``beta`` held at the origin, where the value
    stays zero) and then ``beta``. Both give the same value.
    """
    beta = np.asarray(beta, dtype=float)
    beta2 = np.asarray(beta2, dtype=float)
    if path_kind == "straight":
        return unwrap_along(lambda ts: r_map(_scaled(beta, ts), _scaled(beta2, ts)), 0.0, steps).value
    if path_kind == "two_leg":
        first = unwrap_along(lambda ts: r_map(_scaled(np.zeros_like(beta), ts), _scaled(beta2, ts)), 0.0, steps)
        return unwrap_along(lambda ts: r_map(_scaled(beta, ts), np.broadcast_to(beta2, (len(ts),) + beta2.shape)),
                            first.value, steps).value
    raise ValueError(f"unknown path kind {path_kind!r}")


@dataclass(frozen=True, eq=False)
class ProductDecomposition:
    """``P(beta) P(beta2) = P(m) S(rho(theta), R)``."""

    m: np.ndarray
    theta: float
    R: np.ndarray


def product_decompose(beta, beta2, steps: int = DEFAULT_STEPS) -> ProductDecomposition:
    from .section import section_matrix

    d = decompose(section_matrix(beta) @ section_matrix(beta2))
    return ProductDecomposition(d.beta, theta(beta, beta2, steps), d.Psi)


def zeta(X, X2, steps: int = DEFAULT_STEPS) -> float:
    """The cocycle twisting the product of the covering group.

    ``zeta(X, X') = theta(beta, Psi beta' psi^-1) + eta(beta', psi)`` with
    ``beta, psi, Psi`` from the factorization of X and ``beta'`` the base
    point of X'.
    """
    d = decompose(as_matrix(X))
    psi = rho(d.psi_angle)
    beta2 = base_point(as_matrix(X2))
    moved = d.Psi @ beta2 @ psi.T
    return theta(d.beta, moved, steps) + eta(beta2, psi, steps)
