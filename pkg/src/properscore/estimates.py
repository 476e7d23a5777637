"""Accuracy of point estimates of a real random variable.

An :class:`EstimateScore` is a family x -> acc_k(x) on the convex hull of
the variable's values, one member per realized value k, generated by a
single weighting measure through the integral form

    acc_k(x) = acc_k(k) - int_x^k (k - t) dM(t).

The module provides the checks that make the representation testable at
desk scale: brute-force propriety over sampled finite-support
probabilities, value-directedness, mass recovery from any reference value
k together with its k-independence, the two-point probabilities whose
expectation hits a chosen target exactly, and the entropy (Bregman) form
on the hull.  Estimates outside the hull are a domain error; nothing
constrains the score there.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .bregman import Entropy, divergence, entropy_from_mass
from .errors import (
    DomainError,
    InvalidProbabilityError,
    LabelMismatchError,
    MissingAnchorError,
    NearSingularityError,
    UnsupportedFormError,
)
from .measure import WeightMeasure, is_strictly_positive
from .numeric import (
    DEFAULT_TOL,
    Tolerances,
    argmax_1d,
    differentiate,
    grid,
    interior_grid,
)

__all__ = [
    "RandomVariable",
    "FiniteProbability",
    "EstimateScore",
    "expectation",
    "score",
    "expected_estimate_score",
    "two_point_probability",
    "check_propriety_estimates",
    "recover_mass_estimates",
    "check_mass_k_independence",
    "check_value_directedness",
    "bregman_form_estimates",
    "expected_form_check",
    "EstimatesProprietyReport",
    "KIndependenceReport",
    "EstimateBregmanForm",
]

_WEIGHT_SUM_TOL = 1e-12


@dataclass(eq=False)
class RandomVariable:
    """Finite ordered list of (label, value) outcomes."""

    outcomes: tuple[tuple[str, float], ...]

    def __post_init__(self) -> None:
        cleaned = tuple((str(lbl), float(val)) for lbl, val in self.outcomes)
        labels = [lbl for lbl, _ in cleaned]
        if len(set(labels)) != len(labels):
            raise LabelMismatchError("outcome labels must be unique")
        if len({val for _, val in cleaned}) < 2:
            raise DomainError("a random variable needs at least two distinct values")
        self.outcomes = cleaned
        self._value_of = dict(cleaned)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lbl for lbl, _ in self.outcomes)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(val for _, val in self.outcomes)

    def value_of(self, label: str) -> float:
        try:
            return self._value_of[label]
        except KeyError:
            raise LabelMismatchError(f"unknown outcome label {label!r}") from None

    def label_with_value(self, value: float) -> str:
        for lbl, val in self.outcomes:
            if val == value:
                return lbl
        raise LabelMismatchError(f"no outcome takes the value {value!r}")

    @property
    def hull(self) -> tuple[float, float]:
        vals = self.values
        return min(vals), max(vals)


@dataclass(eq=False)
class FiniteProbability:
    """Finitely supported probability as a label -> weight mapping."""

    weights: dict[str, float]

    def __post_init__(self) -> None:
        cleaned = {str(lbl): float(w) for lbl, w in self.weights.items()}
        for lbl, w in cleaned.items():
            if w < 0.0:
                raise InvalidProbabilityError(f"weight for {lbl!r} is negative")
        total = sum(cleaned.values())
        if abs(total - 1.0) > _WEIGHT_SUM_TOL:
            raise InvalidProbabilityError(f"weights sum to {total!r}, not 1")
        self.weights = cleaned

    def support(self) -> tuple[str, ...]:
        return tuple(lbl for lbl, w in self.weights.items() if w > 0.0)

    def weight(self, label: str) -> float:
        return self.weights.get(label, 0.0)


def expectation(p: FiniteProbability, variable: RandomVariable) -> float:
    """Sum of p(outcome) * value(outcome) over the support."""
    return sum(p.weight(lbl) * variable.value_of(lbl) for lbl in p.support())


@dataclass(eq=False)
class EstimateScore:
    """Integral-form score family on [hull_lo, hull_hi].

    anchors fixes acc_k(k) for particular values of k; any other k falls
    back to default_anchor (pass None to require explicit anchors).  The
    weighting measure's domain must be exactly the hull.
    """

    measure: WeightMeasure
    hull_lo: float
    hull_hi: float
    anchors: dict[float, float] = field(default_factory=dict)
    default_anchor: float | None = 0.0

    def __post_init__(self) -> None:
        self.hull_lo = float(self.hull_lo)
        self.hull_hi = float(self.hull_hi)
        if not self.hull_lo < self.hull_hi:
            raise DomainError("hull_lo must be strictly below hull_hi")
        if (self.measure.domain_lo, self.measure.domain_hi) != (self.hull_lo, self.hull_hi):
            raise DomainError("the weighting measure must live exactly on the hull")
        self.anchors = {float(k): float(a) for k, a in self.anchors.items()}
        for k in self.anchors:
            if not self.hull_lo <= k <= self.hull_hi:
                raise DomainError(f"anchored value {k!r} outside the hull")
        self._bregman_form: EstimateBregmanForm | None = None

    @property
    def hull_width(self) -> float:
        return self.hull_hi - self.hull_lo

    def anchor(self, k: float) -> float:
        k = float(k)
        if k in self.anchors:
            return self.anchors[k]
        if self.default_anchor is not None:
            return self.default_anchor
        raise MissingAnchorError(f"no self-accuracy anchor declared for k={k!r}")

    def score(self, k: float, x: float, tol: Tolerances = DEFAULT_TOL) -> float:
        k = float(k)
        x = float(x)
        if not self.hull_lo <= x <= self.hull_hi:
            raise DomainError(f"estimate {x!r} outside the hull [{self.hull_lo}, {self.hull_hi}]")
        return self.anchor(k) - self.measure.moment_detail(x, k, k, tol).value


def score(s, k: float, x: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """acc_k(x) for any score family exposing .score(k, x)."""
    return s.score(k, x, tol)


def expected_estimate_score(
    s, p: FiniteProbability, variable: RandomVariable, x: float, tol: Tolerances = DEFAULT_TOL
) -> float:
    """Sum over the support of p(outcome) * acc_{V(outcome)}(x)."""
    total = 0.0
    for lbl in p.support():
        total += p.weight(lbl) * s.score(variable.value_of(lbl), x, tol)
    return total


def two_point_probability(
    variable: RandomVariable, k: float, r: float, t: float
) -> FiniteProbability:
    """Probability on the k- and r-valued outcomes whose expectation is t.

    Weight (t-k)/(r-k) goes to the r-valued outcome and (r-t)/(r-k) to the
    k-valued one, so the expectation equals t exactly.
    """
    k = float(k)
    r = float(r)
    t = float(t)
    if k == r:
        raise DomainError("two-point probabilities need two distinct values")
    if not min(k, r) <= t <= max(k, r):
        raise DomainError(f"target {t!r} outside the segment between {k!r} and {r!r}")
    label_k = variable.label_with_value(k)
    label_r = variable.label_with_value(r)
    return FiniteProbability({label_r: (t - k) / (r - k), label_k: (r - t) / (r - k)})


def _simplex_lattice(d: int, n_p: int) -> list[tuple[float, ...]]:
    if d == 1:
        return [(1.0,)]
    if d == 2:
        m = max(n_p - 1, 1)
        return [(1.0 - i / m, i / m) for i in range(m + 1)]
    if d == 3:
        m = 1
        while (m + 1) * (m + 2) // 2 < n_p:
            m += 1
        pts = []
        for i in range(m + 1):
            for j in range(m + 1 - i):
                pts.append((i / m, j / m, (m - i - j) / m))
        return pts
    return []


def _simplex_boundary(d: int) -> list[tuple[float, ...]]:
    pts = []
    for i in range(d):
        vertex = tuple(1.0 if j == i else 0.0 for j in range(d))
        pts.append(vertex)
    for i in range(d):
        for j in range(i + 1, d):
            pts.append(tuple(0.5 if a in (i, j) else 0.0 for a in range(d)))
    return pts


def _simplex_random(d: int, n: int, seed: int) -> list[tuple[float, ...]]:
    rng = random.Random(seed)
    pts = []
    for _ in range(n):
        raw = [-math.log(rng.random()) for _ in range(d)]
        total = sum(raw)
        pts.append(tuple(v / total for v in raw))
    return pts


@dataclass(frozen=True)
class EstimatesProprietyRow:
    weights: tuple[float, ...]
    expectation: float
    argmax: float
    deviation: float


@dataclass(frozen=True)
class EstimatesProprietyReport:
    """Outcome of the sampled propriety check for an estimate score."""

    passed: bool
    worst_deviation: float
    threshold: float
    crosscheck_worst: float
    rows: tuple[EstimatesProprietyRow, ...]
    strict_capable: bool
    notes: tuple[str, ...] = ()


def check_propriety_estimates(
    s,
    variable: RandomVariable,
    n_p: int,
    tol: Tolerances = DEFAULT_TOL,
    *,
    n_random: int = 200,
    seed: int = 0,
    probe_points: int = 3,
) -> EstimatesProprietyReport:
    """Verify that the expected score peaks at the expectation of the
    variable, over a simplex lattice (three or fewer outcomes) plus
    vertices, edge midpoints and seeded uniform draws.

    Also cross-checks the expected-score difference against the moment
    integral  int_x^e (e - t) dM  at a few probe estimates per sampled
    probability.  Failures are report outcomes, not errors.
    """
    if n_p < 3:
        raise ValueError("propriety check needs at least 3 sampled probabilities")
    labels = variable.labels
    d = len(labels)
    hull_lo = s.hull_lo
    hull_hi = s.hull_hi
    samples = _simplex_lattice(d, n_p) + _simplex_boundary(d) + _simplex_random(d, n_random, seed)
    measure = getattr(s, "measure", None)
    probes = interior_grid(hull_lo, hull_hi, probe_points)
    rows = []
    crosscheck_worst = 0.0
    for weights in samples:
        p = FiniteProbability(dict(zip(labels, weights)))
        e = expectation(p, variable)
        xstar = argmax_1d(
            lambda x: expected_estimate_score(s, p, variable, x, tol), hull_lo, hull_hi, tol
        )
        rows.append(EstimatesProprietyRow(weights, e, xstar, abs(xstar - e)))
        if measure is not None:
            at_e = expected_estimate_score(s, p, variable, e, tol)
            for x in probes:
                got = at_e - expected_estimate_score(s, p, variable, x, tol)
                want = measure.moment(x, e, e, tol)
                crosscheck_worst = max(crosscheck_worst, abs(got - want))
    worst = max(r.deviation for r in rows)
    notes = []
    strict_capable = True
    if measure is None:
        notes.append("no single weighting measure attached; cross-check skipped")
        strict_capable = False
    else:
        if measure.atoms:
            strict_capable = False
            notes.append(
                "weighting measure carries point atoms; strictness can fail at atom locations"
            )
        if not is_strictly_positive(measure, 16, tol):
            strict_capable = False
            notes.append("weighting measure is not strictly positive; the maximizer need not be unique")
    return EstimatesProprietyReport(
        worst < tol.argmax_tol,
        worst,
        tol.argmax_tol,
        crosscheck_worst,
        tuple(rows),
        strict_capable,
        tuple(notes),
    )


def recover_mass_estimates(s, k: float, t: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Weighting density at t recovered from the k-member of the family:
    acc_k'(t) / (k - t) by finite differences.

    The finite-difference step scales with the hull width; t closer to k
    than ten steps raises NearSingularityError (use another k).
    """
    k = float(k)
    t = float(t)
    width = s.hull_hi - s.hull_lo
    step = tol.fd_step * width
    if not s.hull_lo < t < s.hull_hi:
        raise DomainError(f"t={t!r} is not interior to the hull")
    if abs(k - t) < 10.0 * step:
        raise NearSingularityError(
            f"t={t!r} too close to the reference value k={k!r}; use a different k"
        )
    d = differentiate(
        lambda x: s.score(k, x, tol), t, tol, lo=s.hull_lo, hi=s.hull_hi, scale=width
    )
    return d / (k - t)


@dataclass(frozen=True)
class KIndependenceRow:
    t: float
    masses: tuple[tuple[float, float], ...]
    rel_deviation: float


@dataclass(frozen=True)
class KIndependenceReport:
    """Agreement of the recovered mass across reference values."""

    passed: bool
    worst_rel_deviation: float
    threshold: float
    rows: tuple[KIndependenceRow, ...]
    notes: tuple[str, ...] = ()


def check_mass_k_independence(
    s,
    ks: Sequence[float],
    ts: Sequence[float],
    tol: Tolerances = DEFAULT_TOL,
    threshold: float = 1e-3,
) -> KIndependenceReport:
    """Recover the mass at each t from every usable reference value in ks
    and report the worst pairwise relative spread."""
    ks = [float(k) for k in ks]
    if not ks:
        raise ValueError("need at least one reference value")
    notes = []
    if len(ks) < 2:
        notes.append("single reference value: the independence check is vacuous")
    width = s.hull_hi - s.hull_lo
    step = tol.fd_step * width
    rows = []
    worst = 0.0
    for t in ts:
        t = float(t)
        masses = []
        for k in ks:
            if abs(k - t) < 10.0 * step:
                continue
            masses.append((k, recover_mass_estimates(s, k, t, tol)))
        if len(masses) < 2:
            rows.append(KIndependenceRow(t, tuple(masses), 0.0))
            continue
        vals = [m for _, m in masses]
        spread = (max(vals) - min(vals)) / max(max(abs(v) for v in vals), 1e-300)
        worst = max(worst, spread)
        rows.append(KIndependenceRow(t, tuple(masses), spread))
    return KIndependenceReport(worst < threshold, worst, threshold, tuple(rows), tuple(notes))


def check_value_directedness(s, k: float, n: int, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when x -> acc_k(x) strictly rises on [hull_lo, k] and strictly
    falls on [k, hull_hi] over n-point grids."""
    if n < 3:
        raise ValueError("value-directedness check needs at least 3 grid points")
    k = float(k)
    if not s.hull_lo <= k <= s.hull_hi:
        raise DomainError(f"reference value {k!r} outside the hull")
    if k > s.hull_lo:
        ys = [s.score(k, x, tol) for x in grid(s.hull_lo, k, n)]
        if not all(ys[i] < ys[i + 1] for i in range(len(ys) - 1)):
            return False
    if k < s.hull_hi:
        ys = [s.score(k, x, tol) for x in grid(k, s.hull_hi, n)]
        if not all(ys[i] > ys[i + 1] for i in range(len(ys) - 1)):
            return False
    return True


@dataclass(frozen=True)
class EstimateBregmanForm:
    """Entropy form of an estimate score plus its verification residual."""

    entropy: Entropy
    max_residual: float
    k_grid: tuple[float, ...]
    x_grid: tuple[float, ...]


def bregman_form_estimates(
    s, tol: Tolerances = DEFAULT_TOL, *, n_k: int = 5, n_x: int = 9
) -> EstimateBregmanForm:
    """Entropy whose divergence reproduces the score's loss on the hull:
    acc_k(x) - acc_k(k) = -d(k, x), verified on an (n_k x n_x) grid.

    Needs an atom-free measure with a continuous density.
    """
    measure = getattr(s, "measure", None)
    if measure is None:
        raise UnsupportedFormError("score family has no single weighting measure")
    if measure.atoms:
        raise UnsupportedFormError("point atoms present; the entropy form needs a continuous density")
    cached = getattr(s, "_bregman_form", None)
    if cached is not None:
        return cached
    entropy = entropy_from_mass(
        measure.density,
        s.hull_lo,
        s.hull_hi,
        tol=tol,
        mass_expr=measure.density_expr,
    )
    k_grid = tuple(grid(s.hull_lo, s.hull_hi, n_k))
    x_grid = tuple(interior_grid(s.hull_lo, s.hull_hi, n_x))
    residual = 0.0
    for k in k_grid:
        for x in x_grid:
            loss = s.anchor(k) - s.score(k, x, tol)
            residual = max(residual, abs(loss - divergence(entropy, k, x)))
    form = EstimateBregmanForm(entropy, residual, k_grid, x_grid)
    try:
        s._bregman_form = form
    except AttributeError:
        pass
    return form


def expected_form_check(
    s,
    variable: RandomVariable,
    p: FiniteProbability,
    x: float,
    tol: Tolerances = DEFAULT_TOL,
) -> float:
    """Residual of  Exp_p acc(e) - Exp_p acc(x)  against the divergence
    d(e, x) of the entropy form, where e is the p-expectation of the
    variable."""
    form = bregman_form_estimates(s, tol)
    e = expectation(p, variable)
    lhs = expected_estimate_score(s, p, variable, e, tol) - expected_estimate_score(
        s, p, variable, x, tol
    )
    return abs(lhs - divergence(form.entropy, e, x))
