"""Hilbert-Samuel multiplicity e(R_D).

`mult_exact` runs the structural recursion and falls back to a certified
interval where no closed form is known; `mult_oracle` counts semigroup
points directly and is independent of every formula used here.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor, prod

from datum_core import (
    SpecialDatum,
    canonical_form,
    child_weight,
    children,
    connected_components,
    maximal_elements,
    monomial_ideal,
    reduce,
    top_member,
)
from invariants import alpha_product, closure_bound, m_of_D
from lct import lct_datum
from settings import DEFAULT_K_MAX, DEFAULT_POINT_CEILING

logger = logging.getLogger(__name__)

EXACT = "exact"
INTERVAL = "interval"


@dataclass(frozen=True)
class OracleBudget:
    k_max: int = DEFAULT_K_MAX
    point_ceiling: int = DEFAULT_POINT_CEILING

    def __post_init__(self):
        if self.k_max < 1:
            raise ValueError(f"k_max must be positive, got {self.k_max}")
        if self.point_ceiling < 1:
            raise ValueError(f"point_ceiling must be positive, got {self.point_ceiling}")


@dataclass(frozen=True)
class TraceStep:
    rule: str
    member: tuple[int, ...]
    tag: str

    @property
    def label(self) -> str:
        return "{" + ",".join(map(str, self.member)) + "}"


@dataclass(frozen=True)
class MultiplicityResult:
    status: str
    lower: Fraction
    upper: Fraction
    value: int | None = None
    trace: tuple[TraceStep, ...] = field(default_factory=tuple)

    @property
    def exact(self) -> bool:
        return self.status == EXACT

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "value": self.value,
            "lower": str(self.lower),
            "upper": str(self.upper),
            "trace": [{"rule": t.rule, "member": t.label, "tag": t.tag} for t in self.trace],
        }


def _exact(value: int, trace: list[TraceStep]) -> MultiplicityResult:
    v = Fraction(value)
    return MultiplicityResult(EXACT, v, v, value, tuple(trace))


def _interval(lower: Fraction, upper: Fraction, trace: list[TraceStep]) -> MultiplicityResult:
    lo, hi = ceil(lower), floor(upper)
    if lo == hi:
        return _exact(lo, trace)
    return MultiplicityResult(INTERVAL, Fraction(lo), Fraction(hi), None, tuple(trace))


def _lift(step: TraceStep, labels: tuple[int, ...]) -> TraceStep:
    return TraceStep(step.rule, tuple(labels[e - 1] for e in step.member), step.tag)


def mult_exact(d: SpecialDatum) -> MultiplicityResult:
    if d.n == 1:
        return _exact(1, [TraceStep("base", (1,), "e = 1 in dimension one")])

    roots = maximal_elements(d)
    if len(roots) > 1:
        parts = [mult_exact(c) for c in connected_components(d)]
        trace = [TraceStep("components", tuple(range(1, d.n + 1)), "e(D) = prod e(D_J), J maximal")]
        for J, part in zip(roots, parts):
            trace.extend(_lift(t, d.elements(J)) for t in part.trace)
        if all(p.exact for p in parts):
            return _exact(prod(p.value for p in parts), trace)
        return _interval(prod(p.lower for p in parts), prod(p.upper for p in parts), trace)

    J = top_member(d)
    top = d.elements(J)
    r = child_weight(d, J)
    red = reduce(d, J)
    L = lct_datum(red)
    if L / r >= 1:
        sub = mult_exact(red)
        trace = [TraceStep("cyclic_cover", top, "e(D) = r e(D\\J) when lct(D) = lct(D\\J)/r")]
        trace.extend(sub.trace)
        if sub.exact:
            return _exact(r * sub.value, trace)
        return _interval(r * sub.lower, r * sub.upper, trace)

    if all(len(d.elements(c)) == 1 for c in children(d, J)):
        return _exact(min(r, d.n), [TraceStep("hypersurface", top, "e = min{r, n}")])

    sub = mult_exact(red)
    trace = [TraceStep("bounds", top, "lct(D) = 1 > lct(D\\J)/r")]
    trace.extend(sub.trace)
    lct = lct_datum(d)
    lower = max(alpha_product(d), L * sub.lower, closure_bound(d))
    upper = min(r * sub.upper, Fraction(m_of_D(d)), Fraction(2 ** (d.n - ceil(lct))))
    return _interval(lower, upper, trace)


def mult_upper(d: SpecialDatum) -> Fraction:
    """Smallest of the applicable upper bounds for e."""
    if d.n == 1:
        return Fraction(1)
    bounds = [
        Fraction(m_of_D(d)),
        Fraction(2 ** (d.n - 1)),
        Fraction(2 ** (d.n - ceil(lct_datum(d)))),
    ]
    if len(maximal_elements(d)) > 1:
        bounds.append(prod((mult_upper(c) for c in connected_components(d)), start=Fraction(1)))
    else:
        J = top_member(d)
        bounds.append(child_weight(d, J) * mult_upper(reduce(d, J)))
    return min(bounds)


def mult_lower(d: SpecialDatum) -> Fraction:
    """Largest of the applicable lower bounds for e, not rounded."""
    if d.n == 1:
        return Fraction(1)
    bounds = [alpha_product(d), closure_bound(d)]
    if len(maximal_elements(d)) > 1:
        bounds.append(prod((mult_lower(c) for c in connected_components(d)), start=Fraction(1)))
    else:
        J = top_member(d)
        r = child_weight(d, J)
        red = reduce(d, J)
        L = lct_datum(red)
        bounds.append(r * mult_lower(red) if L / r >= 1 else L * mult_lower(red))
    return max(bounds)


# ---------------------------------------------------------------- oracle

@dataclass(frozen=True)
class HilbertSamuelTable:
    """Lengths l(R/m^k) for k = 1..k_max and their n-th differences."""

    n: int
    values: tuple[int, ...]
    differences: tuple[int, ...]
    stabilized: bool
    e: int | None
    points: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "values": list(self.values),
            "differences": list(self.differences),
            "stabilized": self.stabilized,
            "e": self.e,
            "points": self.points,
        }


def _nth_differences(values: list[int], n: int) -> list[int]:
    out = list(values)
    for _ in range(n):
        out = [b - a for a, b in zip(out, out[1:])]
    return out


def mult_oracle(d: SpecialDatum, budget: OracleBudget = OracleBudget()) -> HilbertSamuelTable:
    return _oracle(canonical_form(d)[0], budget)


@lru_cache(maxsize=4096)
def _oracle(d: SpecialDatum, budget: OracleBudget) -> HilbertSamuelTable:
    gens = monomial_ideal(d).generators
    # a point with longest representation length <= k_max - 1 has degree at most this
    bound = (budget.k_max - 1) * max(sum(g) for g in gens)
    zero = (0,) * d.n

    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(a + b for a, b in zip(p, g))
                if q in seen or sum(q) > bound:
                    continue
                seen.add(q)
                nxt.append(q)
            if len(seen) > budget.point_ceiling:
                logger.info("oracle gave up after %d points (ceiling %d)", len(seen), budget.point_ceiling)
                return HilbertSamuelTable(d.n, (), (), False, None, len(seen))
        frontier = nxt

    # longest representation length, filled in order of degree
    longest = {zero: 0}
    for s in sorted(seen, key=sum):
        if s == zero:
            continue
        best = -1
        for g in gens:
            prev = tuple(a - b for a, b in zip(s, g))
            if prev in longest and longest[prev] + 1 > best:
                best = longest[prev] + 1
        longest[s] = best

    counts = [0] * budget.k_max
    for length in longest.values():
        if length < budget.k_max:
            counts[length] += 1
    values, running = [], 0
    for c in counts:
        running += c
        values.append(running)

    diffs = _nth_differences(values, d.n)
    stabilized = len(diffs) >= 3 and diffs[-1] == diffs[-2] == diffs[-3]
    e = diffs[-1] if stabilized else None
    logger.debug("oracle n=%d points=%d differences=%s", d.n, len(seen), diffs)
    return HilbertSamuelTable(d.n, tuple(values), tuple(diffs), stabilized, e, len(seen))
