"""Accuracy measures for a single credence.

A :class:`CredenceScore` is the pair (acc0, acc1) on [0, 1]: the accuracy
of holding credence x when the proposition is false or true.  Scores can
be built from a weighting measure (integral form) or from a convex entropy
(Bregman form), and the module provides the verification machinery those
forms promise: propriety via brute-force maximization, truth-directedness,
first-order stationarity, mass recovery by finite differences, and the
three-way equivalence of the integral-form identities.

Values of -inf are legal only at the endpoints x in {0, 1} and propagate
through expected scores when weighted positively.  Mass recovery and the
stationarity check assume two-sided differentiability and report rather
than fail on kinked scores.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

from .bregman import Entropy
from .errors import DomainError, InconsistentMassWarning
from .measure import WeightMeasure, from_constant_density, from_density
from .numeric import (
    DEFAULT_TOL,
    Tolerances,
    argmax_1d,
    differentiate,
    grid,
    interior_grid,
)

__all__ = [
    "CredenceScore",
    "MassEstimate",
    "ProprietyReport",
    "EquivalenceReport",
    "from_measure",
    "from_entropy",
    "expected_score",
    "entropy_of",
    "recover_mass",
    "check_propriety",
    "check_truth_directedness",
    "check_stationarity",
    "check_schervish_equivalences",
    "score_difference",
    "brier",
    "log_score",
]


def _require_unit(x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"credence {x!r} outside [0, 1]")
    return x


@dataclass(eq=False)
class CredenceScore:
    """Score pair on [0, 1] with self-accuracy anchors and provenance.

    anchor0 == acc0(0) and anchor1 == acc1(1).  source records the measure
    or entropy the score was built from, when known.
    """

    acc0: Callable[[float], float]
    acc1: Callable[[float], float]
    anchor0: float
    anchor1: float
    source: object | None = None

    def acc(self, v: int, x: float) -> float:
        if v == 1:
            return self.acc1(x)
        if v == 0:
            return self.acc0(x)
        raise DomainError(f"truth value must be 0 or 1, got {v!r}")


def from_measure(
    measure: WeightMeasure,
    anchor0: float = 0.0,
    anchor1: float = 0.0,
    tol: Tolerances = DEFAULT_TOL,
) -> CredenceScore:
    """Integral-form score: acc_v(x) = anchor_v - int_x^v (v - t) dM(t).

    The measure must live on [0, 1].  When the integral to an endpoint has
    an unbounded tail the score there is -inf.
    """
    if (measure.domain_lo, measure.domain_hi) != (0.0, 1.0):
        raise DomainError("credence scores need a weighting measure on [0, 1]")
    a0 = float(anchor0)
    a1 = float(anchor1)

    def acc1(x: float) -> float:
        return a1 - measure.moment_detail(_require_unit(x), 1.0, 1.0, tol).value

    def acc0(x: float) -> float:
        return a0 - measure.moment_detail(_require_unit(x), 0.0, 0.0, tol).value

    return CredenceScore(acc0, acc1, a0, a1, source=measure)


def from_entropy(entropy: Entropy) -> CredenceScore:
    """Bregman-form score: acc_v(x) = phi(x) + (v - x) phi'(x).

    Anchors are phi(0) and phi(1).  The entropy must live on [0, 1]; its
    convexity was audited at construction.
    """
    if (entropy.domain_lo, entropy.domain_hi) != (0.0, 1.0):
        raise DomainError("credence scores need an entropy on [0, 1]")

    def make(v: float) -> Callable[[float], float]:
        def acc(x: float) -> float:
            x = _require_unit(x)
            if x == v:
                return entropy.phi(x)
            return entropy.phi(x) + (v - x) * entropy.dphi(x)

        return acc

    return CredenceScore(
        make(0.0), make(1.0), entropy.phi(0.0), entropy.phi(1.0), source=entropy
    )


def expected_score(s: CredenceScore, p: float, x: float) -> float:
    """p acc1(x) + (1-p) acc0(x); zero-weight terms are never evaluated,
    so -inf only propagates when weighted positively."""
    p = _require_unit(p)
    x = _require_unit(x)
    total = 0.0
    if p > 0.0:
        total += p * s.acc1(x)
    if p < 1.0:
        total += (1.0 - p) * s.acc0(x)
    return total


def entropy_of(s: CredenceScore) -> Entropy:
    """The score's entropy phi(p) = p acc1(p) + (1-p) acc0(p), with
    phi'(p) = acc1(p) - acc0(p)."""
    return Entropy(
        lambda p: expected_score(s, p, p),
        lambda p: s.acc1(p) - s.acc0(p),
        None,
        0.0,
        1.0,
    )


@dataclass(frozen=True)
class MassEstimate:
    """Recovered mass value plus the cross-estimate diagnostics.

    value is acc0'(t)/(-t); companion is acc1'(t)/(1-t).  The two agree for
    smooth proper scores, and the relative gap between them is recorded.
    """

    value: float
    companion: float
    rel_discrepancy: float
    consistent: bool

    def __float__(self) -> float:
        return self.value


def recover_mass(s: CredenceScore, t: float, tol: Tolerances = DEFAULT_TOL) -> MassEstimate:
    """Estimate the weighting density at interior t by finite differences.

    Warns (InconsistentMassWarning) when the two routes disagree by more
    than 1e-3 relative, which signals an improper or non-smooth score.
    """
    t = float(t)
    if not 0.0 < t < 1.0:
        raise DomainError(f"mass recovery needs t strictly inside (0, 1), got {t!r}")
    d0 = differentiate(s.acc0, t, tol, lo=0.0, hi=1.0)
    d1 = differentiate(s.acc1, t, tol, lo=0.0, hi=1.0)
    m0 = d0 / (-t)
    m1 = d1 / (1.0 - t)
    disc = abs(m0 - m1) / max(abs(m0), abs(m1), 1e-300)
    consistent = disc <= 1e-3
    if not consistent:
        warnings.warn(
            f"mass estimates disagree at t={t:g} (relative gap {disc:.3g}); "
            "the score may be improper or non-smooth",
            InconsistentMassWarning,
            stacklevel=2,
        )
    return MassEstimate(m0, m1, disc, consistent)


@dataclass(frozen=True)
class ProprietyRow:
    p: float
    argmax: float
    deviation: float


@dataclass(frozen=True)
class ProprietyReport:
    """Outcome of the brute-force propriety check over a credence grid."""

    passed: bool
    worst_deviation: float
    threshold: float
    rows: tuple[ProprietyRow, ...]
    notes: tuple[str, ...] = ()


def check_propriety(s: CredenceScore, n_p: int, tol: Tolerances = DEFAULT_TOL) -> ProprietyReport:
    """Maximize the expected score for each p on an interior grid and report
    the worst |argmax - p|.  Failure is a report outcome, not an error."""
    if n_p < 3:
        raise ValueError("propriety check needs at least 3 grid credences")
    rows = []
    for p in interior_grid(0.0, 1.0, n_p):
        xstar = argmax_1d(lambda x: expected_score(s, p, x), 0.0, 1.0, tol)
        rows.append(ProprietyRow(p, xstar, abs(xstar - p)))
    worst = max(r.deviation for r in rows)
    notes = []
    if isinstance(s.source, WeightMeasure) and s.source.atoms:
        notes.append(
            "weighting measure carries point atoms; strictness can fail at atom locations"
        )
    return ProprietyReport(worst < tol.argmax_tol, worst, tol.argmax_tol, tuple(rows), tuple(notes))


def check_truth_directedness(s: CredenceScore, n: int) -> bool:
    """True when acc1 strictly increases and acc0 strictly decreases over an
    n-point grid on [0, 1]."""
    if n < 3:
        raise ValueError("truth-directedness check needs at least 3 grid points")
    xs = grid(0.0, 1.0, n)
    a1 = [s.acc1(x) for x in xs]
    a0 = [s.acc0(x) for x in xs]
    rising = all(a1[i] < a1[i + 1] for i in range(n - 1))
    falling = all(a0[i] > a0[i + 1] for i in range(n - 1))
    return rising and falling


def check_stationarity(s: CredenceScore, t: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Residual |t acc1'(t) + (1-t) acc0'(t)|; near zero for smooth proper
    scores."""
    t = float(t)
    if not 0.0 < t < 1.0:
        raise DomainError(f"stationarity check needs t strictly inside (0, 1), got {t!r}")
    d1 = differentiate(s.acc1, t, tol, lo=0.0, hi=1.0)
    d0 = differentiate(s.acc0, t, tol, lo=0.0, hi=1.0)
    return abs(t * d1 + (1.0 - t) * d0)


def score_difference(s: CredenceScore, v: int, x: float, y: float) -> float:
    """acc_v(y) - acc_v(x), for cross-checking against moment integrals."""
    x = _require_unit(x)
    y = _require_unit(y)
    return s.acc(v, y) - s.acc(v, x)


@dataclass(frozen=True)
class EquivalenceReport:
    """Worst residuals of the three equivalent integral-form identities."""

    worst_anchor_form: float
    worst_difference_form: float
    worst_expectation_form: float
    threshold: float

    @property
    def worst(self) -> float:
        return max(
            self.worst_anchor_form, self.worst_difference_form, self.worst_expectation_form
        )

    @property
    def passed(self) -> bool:
        return self.worst < self.threshold


def check_schervish_equivalences(
    s: CredenceScore,
    measure: WeightMeasure,
    n: int,
    tol: Tolerances = DEFAULT_TOL,
    threshold: float = 1e-8,
) -> EquivalenceReport:
    """Check the three ways of writing the integral form against each other
    on an n-point interior grid:

    1. acc_v(v) - acc_v(x)            == int_x^v (v - t) dM
    2. acc_v(y) - acc_v(x)            == int_x^y (v - t) dM
    3. Exp_p acc(p) - Exp_p acc(x)    == int_x^p (p - t) dM
    """
    pts = interior_grid(0.0, 1.0, n)
    anchors = {0: s.anchor0, 1: s.anchor1}
    w1 = 0.0
    w2 = 0.0
    w3 = 0.0
    for v in (0, 1):
        for x in pts:
            got = anchors[v] - s.acc(v, x)
            want = measure.moment(x, float(v), float(v), tol)
            w1 = max(w1, abs(got - want))
            for y in pts:
                got = s.acc(v, y) - s.acc(v, x)
                want = measure.moment(x, y, float(v), tol)
                w2 = max(w2, abs(got - want))
    for p in pts:
        for x in pts:
            got = expected_score(s, p, p) - expected_score(s, p, x)
            want = measure.moment(x, p, p, tol)
            w3 = max(w3, abs(got - want))
    return EquivalenceReport(w1, w2, w3, threshold)


def brier() -> CredenceScore:
    """Quadratic score: acc1(x) = -(1-x)^2, acc0(x) = -x^2."""
    measure = from_constant_density(2.0, 0.0, 1.0)

    def acc1(x: float) -> float:
        x = _require_unit(x)
        return -((1.0 - x) ** 2)

    def acc0(x: float) -> float:
        x = _require_unit(x)
        return -(x**2)

    return CredenceScore(acc0, acc1, 0.0, 0.0, source=measure)


def log_score() -> CredenceScore:
    """Logarithmic score: acc1(x) = ln x, acc0(x) = ln(1-x), -inf at the
    far endpoints."""
    measure = from_density(
        lambda t: 1.0 / (t * (1.0 - t)), 0.0, 1.0, expr="1/(t*(1-t))"
    )

    def acc1(x: float) -> float:
        x = _require_unit(x)
        return math.log(x) if x > 0.0 else -math.inf

    def acc0(x: float) -> float:
        x = _require_unit(x)
        return math.log(1.0 - x) if x < 1.0 else -math.inf

    return CredenceScore(acc0, acc1, 0.0, 0.0, source=measure)
