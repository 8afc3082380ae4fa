"""Canonical covering group of O+(2, n+1) and its action on the Einstein universe R x S^n."""

from .angle_lift import LiftReport, eta, product_decompose, record_lifts, so2_angle, theta, unwrap_along, zeta
from .cover_group import (
    CenterElement,
    CoverElement,
    QuotientElement,
    QuotientKind,
    center,
    identity,
    lift,
    parametrize,
    quotient_inverse,
    quotient_mul,
    quotient_reduce,
    random_cover_element,
    sigma,
    star,
    star_inverse,
    unparametrize,
)
from .domain_iv import DomainPoint, grassmann_embed, grassmann_recover, hua_inverse, hua_map, moebius_action
from .einstein import (
    CompactFormPoint,
    EinsteinPoint,
    act_compact,
    act_cover,
    act_quotient,
    compact_reduce,
    conformal_check,
    xi_lift,
)
from .errors import *  # noqa: F401,F403
from .pseudo_orthogonal import GroupElement, certify, random_element, rho, rho1
from .section import base_point, decompose, section

__version__ = "0.1.0"
