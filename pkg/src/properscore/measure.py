"""Weighting measures on a real interval.

A :class:`WeightMeasure` is a nonnegative density plus finitely many point
atoms.  Its moment integrals  int_x^y (v - t) dM(t)  are the engine behind
the integral (Schervish) form of a proper score.  Atoms follow a half-open
convention: an atom at the lower limit of the traversed interval counts,
one at the upper limit does not, which makes the additivity identity
moment(x,y) + moment(y,z) = moment(x,z) hold exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import DomainError, InvalidMeasureError
from .numeric import DEFAULT_TOL, Tolerances, grid, integrate_shaved

__all__ = [
    "WeightMeasure",
    "MomentIntegral",
    "from_constant_density",
    "from_density",
    "moment_integral",
    "is_strictly_positive",
]

_AUDIT_POINTS = 1000


@dataclass(frozen=True)
class MomentIntegral:
    """Value of a moment integral plus endpoint-truncation diagnostics."""

    value: float
    truncated: bool
    divergent: bool


@dataclass(eq=False)
class WeightMeasure:
    """Density-plus-atoms measure on [domain_lo, domain_hi].

    The density must be finite and nonnegative at interior points; this is
    audited on a 1000-point grid at construction.  Integrable blow-ups at
    the domain endpoints are allowed and handled by endpoint shaving in the
    moment integrals.  Instances are immutable after construction apart
    from an internal result cache.
    """

    domain_lo: float
    domain_hi: float
    density: Callable[[float], float]
    atoms: tuple[tuple[float, float], ...] = ()
    density_expr: str | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.domain_lo = float(self.domain_lo)
        self.domain_hi = float(self.domain_hi)
        if not self.domain_lo < self.domain_hi:
            raise InvalidMeasureError("domain_lo must be strictly below domain_hi")
        cleaned = []
        for loc, mass in self.atoms:
            loc = float(loc)
            mass = float(mass)
            if not self.domain_lo <= loc <= self.domain_hi:
                raise InvalidMeasureError(f"atom location {loc!r} outside the domain")
            if not mass > 0.0:
                raise InvalidMeasureError(f"atom mass at {loc!r} must be positive")
            cleaned.append((loc, mass))
        self.atoms = tuple(cleaned)
        w = self.domain_hi - self.domain_lo
        for i in range(_AUDIT_POINTS):
            t = self.domain_lo + w * (i + 0.5) / _AUDIT_POINTS
            try:
                v = float(self.density(t))
            except (ArithmeticError, ValueError) as exc:
                raise InvalidMeasureError(f"density evaluation failed at t={t!r}") from exc
            if not math.isfinite(v):
                raise InvalidMeasureError(f"density is not finite at t={t!r}")
            if v < 0.0:
                raise InvalidMeasureError(f"density is negative ({v!r}) at t={t!r}")

    @property
    def width(self) -> float:
        return self.domain_hi - self.domain_lo

    def contains(self, t: float) -> bool:
        return self.domain_lo <= t <= self.domain_hi

    def moment_detail(
        self, x: float, y: float, v: float, tol: Tolerances = DEFAULT_TOL
    ) -> MomentIntegral:
        """int_x^y (v - t) dM(t) with the reversed-limits sign convention,
        plus truncation diagnostics."""
        x = float(x)
        y = float(y)
        v = float(v)
        for bound in (x, y):
            if not self.contains(bound):
                raise DomainError(f"integration bound {bound!r} outside the measure domain")
        key = (x, y, v, tol.quad_rel, tol.quad_abs)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        lo, hi = (x, y) if x <= y else (y, x)
        sign = 1.0 if x <= y else -1.0
        if lo == hi:
            result = MomentIntegral(0.0, False, False)
        else:
            dens = self.density
            q = integrate_shaved(lambda t: (v - t) * dens(t), lo, hi, tol)
            atom_part = sum(m * (v - loc) for loc, m in self.atoms if lo <= loc < hi)
            result = MomentIntegral(
                sign * (q.value + atom_part), q.lo_shaved or q.hi_shaved, q.divergent
            )
        self._cache[key] = result
        return result

    def moment(self, x: float, y: float, v: float, tol: Tolerances = DEFAULT_TOL) -> float:
        return self.moment_detail(x, y, v, tol).value


def from_constant_density(c: float, lo: float, hi: float) -> WeightMeasure:
    """Measure with constant density c > 0 and no atoms."""
    c = float(c)
    if not c > 0.0:
        raise InvalidMeasureError(f"constant density must be positive, got {c!r}")
    return WeightMeasure(lo, hi, lambda t: c, (), density_expr=f"{c:.12g}")


def from_density(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    atoms: tuple[tuple[float, float], ...] = (),
    expr: str | None = None,
) -> WeightMeasure:
    """Measure from an arbitrary nonnegative density plus optional atoms."""
    return WeightMeasure(lo, hi, f, tuple(atoms), density_expr=expr)


def moment_integral(
    measure: WeightMeasure, x: float, y: float, v: float, tol: Tolerances = DEFAULT_TOL
) -> float:
    """int_x^y (v - t) dM(t); reversed limits negate."""
    return measure.moment_detail(x, y, v, tol).value


def is_strictly_positive(measure: WeightMeasure, n: int, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when each of n equal subintervals of the domain has positive
    measure (density integral plus atoms; the last subinterval is closed)."""
    if n < 10:
        raise ValueError("positivity audit needs at least 10 subintervals")
    edges = grid(measure.domain_lo, measure.domain_hi, n + 1)
    for i in range(n):
        a, b = edges[i], edges[i + 1]
        part = integrate_shaved(measure.density, a, b, tol).value
        last = i == n - 1
        part += sum(
            m
            for loc, m in measure.atoms
            if (a <= loc < b) or (last and loc == b)
        )
        if not part > 0.0:
            return False
    return True
