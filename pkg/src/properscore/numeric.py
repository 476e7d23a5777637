"""Scalar numerical primitives shared by every other module.

Adaptive Simpson quadrature with the reversed-limits sign convention,
finite-difference derivatives, a grid-plus-golden-section maximizer, and a
grid convexity test.  Everything here is a pure function of its arguments,
so concurrent callers never interfere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, EvaluationError

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "ShavedIntegral",
    "integrate",
    "integrate_shaved",
    "differentiate",
    "second_derivative",
    "argmax_1d",
    "is_convex_on_grid",
    "grid",
    "interior_grid",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_MAX_DEPTH = 60
_ENDPOINT_SHAVE = 1e-9
_DIVERGENCE_BAND = 1e-5


@dataclass(frozen=True)
class Tolerances:
    """Knobs for the quadrature, differencing and search routines.

    fd_step is relative to the caller-supplied length scale (1 by default),
    so it stays meaningful on wide domains.
    """

    quad_rel: float = 1e-10
    quad_abs: float = 1e-12
    fd_step: float = 1e-5
    argmax_tol: float = 1e-4

    def __post_init__(self) -> None:
        for name in ("quad_rel", "quad_abs", "fd_step", "argmax_tol"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if not self.fd_step < 1e-2:
            raise ValueError("fd_step must be smaller than 1e-2")


DEFAULT_TOL = Tolerances()


def grid(lo: float, hi: float, n: int) -> list[float]:
    """n evenly spaced points from lo to hi inclusive."""
    if n < 2:
        raise ValueError("need at least two grid points")
    step = (hi - lo) / (n - 1)
    pts = [lo + i * step for i in range(n)]
    pts[-1] = hi
    return pts


def interior_grid(lo: float, hi: float, n: int) -> list[float]:
    """n points strictly inside (lo, hi), at the i/(n+1) fractions."""
    w = hi - lo
    return [lo + w * i / (n + 1) for i in range(1, n + 1)]


def _checked(f: Callable[[float], float], t: float) -> float:
    try:
        y = float(f(t))
    except (ArithmeticError, ValueError) as exc:
        raise EvaluationError(f"integrand evaluation failed at t={t!r}: {exc}") from exc
    if not math.isfinite(y):
        raise EvaluationError(f"integrand returned non-finite value {y!r} at t={t!r}")
    return y


def _try_eval(f: Callable[[float], float], t: float) -> float | None:
    try:
        y = float(f(t))
    except (ArithmeticError, ValueError):
        return None
    return y if math.isfinite(y) else None


def _adaptive(f, a, fa, m, fm, b, fb, whole, eps, floor, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    if not (a < lm < m < rm < b):
        return whole
    flm = _checked(f, lm)
    frm = _checked(f, rm)
    left = ((m - a) / 6.0) * (fa + 4.0 * flm + fm)
    right = ((b - m) / 6.0) * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * eps:
        return left + right + delta / 15.0
    child = max(0.5 * eps, floor)
    return (
        _adaptive(f, a, fa, lm, flm, m, fm, left, child, floor, depth - 1)
        + _adaptive(f, m, fm, rm, frm, b, fb, right, child, floor, depth - 1)
    )


def _integrate_core(f, a, b, tol):
    fa = _checked(f, a)
    fb = _checked(f, b)
    m = 0.5 * (a + b)
    fm = _checked(f, m)
    whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb)
    eps = max(tol.quad_abs, tol.quad_rel * abs(whole))
    return _adaptive(f, a, fa, m, fm, b, fb, whole, eps, 0.25 * tol.quad_abs, _MAX_DEPTH)


def integrate(f: Callable[[float], float], a: float, b: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Adaptive Simpson integral of f from a to b.

    Reversed limits negate: integrate(f, a, b) == -integrate(f, b, a).
    Raises EvaluationError, naming the sample point, if f is non-finite
    anywhere in the interval.
    """
    a = float(a)
    b = float(b)
    if a == b:
        return 0.0
    if a > b:
        return -_integrate_core(f, b, a, tol)
    return _integrate_core(f, a, b, tol)


@dataclass(frozen=True)
class ShavedIntegral:
    """Quadrature result over a possibly endpoint-shaved interval."""

    value: float
    lo_shaved: bool
    hi_shaved: bool
    divergent: bool


def integrate_shaved(
    f: Callable[[float], float], a: float, b: float, tol: Tolerances = DEFAULT_TOL
) -> ShavedIntegral:
    """Integrate over [a, b] (a <= b), nudging an endpoint inward by 1e-9
    when f cannot be evaluated there.

    A probe band next to a nudged endpoint detects tails that keep growing;
    those collapse the value to +/-inf and set the divergent flag.
    """
    a = float(a)
    b = float(b)
    if b < a:
        raise ValueError("integrate_shaved expects a <= b")
    if a == b:
        return ShavedIntegral(0.0, False, False, False)
    lo, hi = a, b
    lo_shaved = _try_eval(f, lo) is None
    if lo_shaved:
        lo = a + _ENDPOINT_SHAVE
    hi_shaved = _try_eval(f, hi) is None
    if hi_shaved:
        hi = b - _ENDPOINT_SHAVE
    if not lo < hi:
        return ShavedIntegral(0.0, lo_shaved, hi_shaved, False)
    value = _integrate_core(f, lo, hi, tol)
    divergent = False
    if lo_shaved:
        band = _integrate_core(f, lo, min(lo + _ENDPOINT_SHAVE, hi), tol)
        if abs(band) > max(_DIVERGENCE_BAND, _DIVERGENCE_BAND * abs(value)):
            value = math.copysign(math.inf, band)
            divergent = True
    if hi_shaved and not divergent:
        band = _integrate_core(f, max(hi - _ENDPOINT_SHAVE, lo), hi, tol)
        if abs(band) > max(_DIVERGENCE_BAND, _DIVERGENCE_BAND * abs(value)):
            value = math.copysign(math.inf, band)
            divergent = True
    return ShavedIntegral(value, lo_shaved, hi_shaved, divergent)


def _bounded_eval(f: Callable[[float], float], u: float) -> float:
    try:
        y = float(f(u))
    except (ArithmeticError, ValueError) as exc:
        raise DomainError(f"cannot evaluate function at t={u!r}") from exc
    if not math.isfinite(y):
        raise DomainError(f"function is not finite at t={u!r}")
    return y


def differentiate(
    f: Callable[[float], float],
    t: float,
    tol: Tolerances = DEFAULT_TOL,
    *,
    lo: float | None = None,
    hi: float | None = None,
    scale: float = 1.0,
) -> float:
    """Finite-difference derivative of f at t.

    Central difference where the stencil fits inside [lo, hi]; second-order
    one-sided next to a bound.  The step is fd_step * scale.
    """
    t = float(t)
    if lo is not None and t < lo:
        raise DomainError(f"t={t!r} lies below the domain start {lo!r}")
    if hi is not None and t > hi:
        raise DomainError(f"t={t!r} lies above the domain end {hi!r}")
    h = tol.fd_step * scale
    left_ok = lo is None or t - h >= lo
    right_ok = hi is None or t + h <= hi
    if left_ok and right_ok:
        return (_bounded_eval(f, t + h) - _bounded_eval(f, t - h)) / (2.0 * h)
    if right_ok and (hi is None or t + 2.0 * h <= hi):
        return (
            -3.0 * _bounded_eval(f, t)
            + 4.0 * _bounded_eval(f, t + h)
            - _bounded_eval(f, t + 2.0 * h)
        ) / (2.0 * h)
    if left_ok and (lo is None or t - 2.0 * h >= lo):
        return (
            3.0 * _bounded_eval(f, t)
            - 4.0 * _bounded_eval(f, t - h)
            + _bounded_eval(f, t - 2.0 * h)
        ) / (2.0 * h)
    raise DomainError("domain too narrow for the finite-difference stencil")


def second_derivative(
    f: Callable[[float], float],
    t: float,
    tol: Tolerances = DEFAULT_TOL,
    *,
    lo: float | None = None,
    hi: float | None = None,
    scale: float = 1.0,
) -> float:
    """Second divided difference of f at t, window sqrt(fd_step) * scale.

    Next to a bound the window is re-centred just inside it.
    """
    t = float(t)
    h = math.sqrt(tol.fd_step) * scale
    c = t
    if lo is not None and hi is not None:
        if hi - lo <= 2.0 * h:
            raise DomainError("domain too narrow for a second-difference window")
        c = min(max(c, lo + h), hi - h)
    return (
        _bounded_eval(f, c - h) - 2.0 * _bounded_eval(f, c) + _bounded_eval(f, c + h)
    ) / (h * h)


def argmax_1d(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: Tolerances = DEFAULT_TOL,
    *,
    grid_points: int = 201,
) -> float:
    """Location of the maximum of f on [lo, hi].

    A coarse scan (at least 200 points) finds the best grid cell, then
    golden-section refinement narrows it well below argmax_tol.  Ties
    resolve to the smallest location.
    """
    lo = float(lo)
    hi = float(hi)
    if not lo < hi:
        raise DomainError("argmax_1d needs lo < hi")
    n = max(int(grid_points), 200)

    def ev(x: float) -> float:
        v = float(f(x))
        return -math.inf if math.isnan(v) else v

    xs = grid(lo, hi, n)
    best_i = 0
    best_v = ev(xs[0])
    for i in range(1, n):
        v = ev(xs[i])
        if v > best_v:
            best_i, best_v = i, v
    a = xs[best_i - 1] if best_i > 0 else lo
    b = xs[best_i + 1] if best_i < n - 1 else hi
    target = max(tol.argmax_tol * 1e-2, (hi - lo) * 1e-14)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc = ev(c)
    fd = ev(d)
    for _ in range(300):
        if b - a <= target:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = ev(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = ev(d)
    return 0.5 * (a + b)


def is_convex_on_grid(
    f: Callable[[float], float], lo: float, hi: float, n: int, tol: Tolerances = DEFAULT_TOL
) -> bool:
    """True when no interior second difference on an n-point grid dips
    below -quad_abs."""
    if n < 3:
        raise ValueError("need at least three grid points")
    ys = [float(f(x)) for x in grid(float(lo), float(hi), int(n))]
    return all(
        ys[i - 1] - 2.0 * ys[i] + ys[i + 1] >= -tol.quad_abs for i in range(1, len(ys) - 1)
    )
