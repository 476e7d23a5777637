"""Convex entropy generators and Bregman divergences.

An :class:`Entropy` is a convex function phi with its first derivative
(and optionally second).  The divergence

    d(p, x) = phi(p) - phi(x) - (p - x) phi'(x)

is the expected-score gap of a proper score, and the curvature phi'' is
exactly the mass (density) of the integral-form weighting measure, which
is what :func:`entropy_from_mass` and :func:`mass_from_entropy` convert
between.  The mass must be continuous and strictly positive on the audit
grid; generators without a supplied first derivative (sub-gradient
selections) are not represented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, InvalidEntropyError, InvalidMassError
from .numeric import (
    DEFAULT_TOL,
    Tolerances,
    differentiate,
    integrate,
    integrate_shaved,
    interior_grid,
    is_convex_on_grid,
    second_derivative,
)

__all__ = [
    "Entropy",
    "divergence",
    "entropy_from_mass",
    "mass_from_entropy",
    "check_integral_identity",
]

_CONVEXITY_GRID = 201
_DERIV_AUDIT_POINTS = 21
_DERIV_MATCH_REL = 1e-3


@dataclass(eq=False)
class Entropy:
    """Convex generator phi with first (and optional second) derivative.

    Construction audits convexity of phi on a 201-point grid and, when a
    second derivative is supplied, checks its sign and its agreement with
    divided differences of dphi.  The expression strings are provenance
    used when serializing; mass_anchor records the gauge point for
    generators built from a mass function.
    """

    phi: Callable[[float], float]
    dphi: Callable[[float], float]
    ddphi: Callable[[float], float] | None = None
    domain_lo: float = 0.0
    domain_hi: float = 1.0
    phi_expr: str | None = None
    dphi_expr: str | None = None
    ddphi_expr: str | None = None
    mass_anchor: float | None = None

    def __post_init__(self) -> None:
        self.domain_lo = float(self.domain_lo)
        self.domain_hi = float(self.domain_hi)
        if not self.domain_lo < self.domain_hi:
            raise InvalidEntropyError("domain_lo must be strictly below domain_hi")
        if not is_convex_on_grid(self.phi, self.domain_lo, self.domain_hi, _CONVEXITY_GRID):
            raise InvalidEntropyError("phi fails the grid convexity audit")
        if self.ddphi is not None:
            self._audit_second_derivative()

    def _audit_second_derivative(self) -> None:
        for t in interior_grid(self.domain_lo, self.domain_hi, _DERIV_AUDIT_POINTS):
            dd = float(self.ddphi(t))
            if not math.isfinite(dd):
                raise InvalidEntropyError(f"second derivative is not finite at t={t!r}")
            if dd < 0.0:
                raise InvalidEntropyError(f"second derivative is negative at t={t!r}")
            fd = differentiate(
                self.dphi, t, lo=self.domain_lo, hi=self.domain_hi, scale=self.width
            )
            rel = abs(fd - dd) / max(abs(dd), 1e-6)
            if rel > _DERIV_MATCH_REL:
                raise InvalidEntropyError(
                    f"dphi divided differences disagree with ddphi at t={t!r} "
                    f"(relative gap {rel:.3g})"
                )

    @property
    def width(self) -> float:
        return self.domain_hi - self.domain_lo

    def contains(self, t: float) -> bool:
        return self.domain_lo <= t <= self.domain_hi


def divergence(entropy: Entropy, p: float, x: float) -> float:
    """phi(p) - phi(x) - (p - x) phi'(x); zero when p equals x."""
    p = float(p)
    x = float(x)
    for point in (p, x):
        if not entropy.contains(point):
            raise DomainError(f"point {point!r} outside the entropy domain")
    if p == x:
        return 0.0
    return entropy.phi(p) - entropy.phi(x) - (p - x) * entropy.dphi(x)


def _signed_shaved(f, a: float, b: float, tol: Tolerances) -> float:
    if a == b:
        return 0.0
    if a <= b:
        return integrate_shaved(f, a, b, tol).value
    return -integrate_shaved(f, b, a, tol).value


def entropy_from_mass(
    m: Callable[[float], float],
    lo: float,
    hi: float,
    anchor: float | None = None,
    tol: Tolerances = DEFAULT_TOL,
    *,
    mass_expr: str | None = None,
) -> Entropy:
    """Generator with curvature m, gauged so phi(anchor) = dphi(anchor) = 0.

    dphi(x) integrates m from the anchor; phi(x) uses the collapsed double
    integral  int_anchor^x (x - t) m(t) dt.  The anchor defaults to the
    domain midpoint.  m must be positive on the audit grid.
    """
    lo = float(lo)
    hi = float(hi)
    if not lo < hi:
        raise InvalidMassError("lo must be strictly below hi")
    anchor = 0.5 * (lo + hi) if anchor is None else float(anchor)
    if not lo <= anchor <= hi:
        raise DomainError(f"anchor {anchor!r} outside [{lo!r}, {hi!r}]")
    for t in interior_grid(lo, hi, _CONVEXITY_GRID):
        try:
            v = float(m(t))
        except (ArithmeticError, ValueError) as exc:
            raise InvalidMassError(f"mass evaluation failed at t={t!r}") from exc
        if not math.isfinite(v) or v <= 0.0:
            raise InvalidMassError(f"mass must be positive and finite, got {v!r} at t={t!r}")

    def dphi(x: float) -> float:
        return _signed_shaved(m, anchor, float(x), tol)

    def phi(x: float) -> float:
        x = float(x)
        return _signed_shaved(lambda t: (x - t) * m(t), anchor, x, tol)

    return Entropy(
        phi,
        dphi,
        m,
        lo,
        hi,
        ddphi_expr=mass_expr,
        mass_anchor=anchor,
    )


def mass_from_entropy(entropy: Entropy, t: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Curvature of the generator at t: the stored second derivative when
    present, otherwise a second divided difference of phi."""
    t = float(t)
    if not entropy.domain_lo < t < entropy.domain_hi:
        raise DomainError(f"t={t!r} is not interior to the entropy domain")
    if entropy.ddphi is not None:
        return float(entropy.ddphi(t))
    return second_derivative(
        entropy.phi, t, tol, lo=entropy.domain_lo, hi=entropy.domain_hi, scale=entropy.width
    )


def check_integral_identity(
    entropy: Entropy, x: float, p: float, tol: Tolerances = DEFAULT_TOL
) -> float:
    """Residual of  int_x^p (p - t) phi''(t) dt  against the divergence.

    Identically zero for twice-differentiable generators; the returned
    number is the numerical residual.
    """
    if entropy.ddphi is None:
        raise InvalidEntropyError("integral identity check needs a second derivative")
    x = float(x)
    p = float(p)
    ddphi = entropy.ddphi
    lhs = integrate(lambda t: (p - t) * ddphi(t), x, p, tol)
    return abs(lhs - divergence(entropy, p, x))
