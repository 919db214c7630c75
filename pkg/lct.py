"""Log canonical thresholds of monomial ideals and of special data.

Two independent routes to the same number:

* `lct_lp` works for any monomial ideal a: lct(a) = 1/u* where
  u* = min{u : (u,...,u) in Newt(a)}, solved as an exact LP;
* `lct_datum` follows the structural recursion on special data
  (components add, a connected datum gives max{1, lct(D\\J)/r}).

Newt(a) is conv(generators) + nonnegative orthant throughout.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator, Sequence

import simplex
from datum_core import (
    MonomialIdeal,
    SpecialDatum,
    canonical_form,
    child_weight,
    connected_components,
    maximal_elements,
    monomial_ideal,
    reduce,
    top_member,
)
from settings import CLOSURE_POINT_CEILING

logger = logging.getLogger(__name__)


class DimensionMismatchError(ValueError):
    pass


class BudgetExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class LpCertificate:
    """Convex-combination weights lambda behind an LP answer."""

    value: Fraction
    coefficients: dict[int, Fraction]

    def point(self, a: MonomialIdeal) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * a.n
        for i, lam in self.coefficients.items():
            for r, v in enumerate(a.generators[i]):
                out[r] += lam * v
        return tuple(out)

    def dominated_by(self, a: MonomialIdeal, p: Sequence[Fraction]) -> bool:
        if any(lam < 0 for lam in self.coefficients.values()):
            return False
        if sum(self.coefficients.values()) != 1:
            return False
        return all(x <= Fraction(y) for x, y in zip(self.point(a), p))


def _check_point(a: MonomialIdeal, p: Sequence) -> tuple[Fraction, ...]:
    if len(p) != a.n:
        raise DimensionMismatchError(f"point has length {len(p)}, ideal lives in {a.n} variables")
    return tuple(Fraction(x) for x in p)


def _newton_rows(a: MonomialIdeal, extra: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Constraint rows  sum_i lam_i v_i + extra + s = rhs,  sum lam = 1.

    Column order: lam (one per generator), the extra columns, then n slacks.
    """
    k, n = len(a.generators), a.n
    extra_cols = len(extra[0]) if extra else 0
    A, b = [], []
    for r in range(n):
        row = [Fraction(g[r]) for g in a.generators]
        row += [Fraction(extra[r][c]) for c in range(extra_cols)] if extra else []
        row += [Fraction(int(s == r)) for s in range(n)]
        A.append(row)
        b.append(Fraction(rhs[r]))
    A.append([Fraction(1)] * k + [Fraction(0)] * (extra_cols + n))
    b.append(Fraction(1))
    return A, b


def _certificate(a: MonomialIdeal, x: Sequence[Fraction], value: Fraction) -> LpCertificate:
    coefficients = {i: x[i] for i in range(len(a.generators)) if x[i] != 0}
    return LpCertificate(value, coefficients)


def newton_certificate(a: MonomialIdeal, p: Sequence) -> LpCertificate | None:
    """Certificate that p lies in Newt(a), or None when it does not."""
    point = _check_point(a, p)
    if any(x < 0 for x in point):
        return None
    A, b = _newton_rows(a, [], point)
    x = simplex.feasible_point(A, b)
    if x is None:
        return None
    return _certificate(a, x, Fraction(0))


def newton_contains(a: MonomialIdeal, p: Sequence) -> bool:
    return newton_certificate(a, p) is not None


def lct_lp_certificate(a: MonomialIdeal) -> LpCertificate:
    """Minimize u with sum lam_i v_i <= u(1,...,1); the certificate value is 1/u*."""
    n, k = a.n, len(a.generators)
    A, b = _newton_rows(a, [[Fraction(-1)] for _ in range(n)], [0] * n)
    cost = [0] * k + [1] + [0] * n
    res = simplex.minimize(cost, A, b)
    if not res.optimal or res.value <= 0:
        raise ArithmeticError(f"diagonal LP did not produce a positive optimum ({res.status})")
    return _certificate(a, res.x, 1 / res.value)


def lct_lp(a: MonomialIdeal) -> Fraction:
    return lct_lp_certificate(a).value


def multiplier_membership(a: MonomialIdeal, t, m: Sequence[int]) -> bool:
    """x^m in J(a^t): m + (1,...,1) in the interior of t.Newt(a).

    Decided by maximizing eps with (m + 1)/t - eps(1,...,1) in Newt(a);
    Newt(a) is closed upward, so the point is interior iff eps* > 0.
    """
    t = Fraction(t)
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if len(m) != a.n:
        raise DimensionMismatchError(f"exponent has length {len(m)}, ideal lives in {a.n} variables")
    if any(int(x) != x or x < 0 for x in m):
        raise ValueError(f"exponent {tuple(m)} is not a nonnegative integer vector")
    target = [(Fraction(x) + 1) / t for x in m]
    n, k = a.n, len(a.generators)
    A, b = _newton_rows(a, [[Fraction(1)] for _ in range(n)], target)
    res = simplex.maximize([0] * k + [1] + [0] * n, A, b)
    if not res.optimal:
        return False
    return res.value > 0


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All nonnegative integer vectors of the given length summing to total."""
    for bars in combinations(range(total + parts - 1), parts - 1):
        prev, out = -1, []
        for bar in bars:
            out.append(bar - prev - 1)
            prev = bar
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def closure_is_power(a: MonomialIdeal, q: int, ceiling: int = CLOSURE_POINT_CEILING) -> bool:
    """Whether the integral closure of a equals (x_1,...,x_n)^q."""
    if q < 1:
        raise ValueError(f"q must be a positive integer, got {q}")
    count = comb(q + a.n - 1, a.n - 1)
    if count > ceiling:
        raise BudgetExceededError(f"{count} lattice points of degree {q} exceed the ceiling {ceiling}")
    if any(sum(g) < q for g in a.generators):
        return False
    for point in _compositions(q, a.n):
        if any(all(x >= y for x, y in zip(point, g)) for g in a.generators):
            continue
        if not newton_contains(a, point):
            logger.debug("lattice point %s of degree %d lies outside Newt", point, q)
            return False
    return True


def lct_datum(d: SpecialDatum) -> Fraction:
    return _lct_canonical(canonical_form(d)[0])


@lru_cache(maxsize=None)
def _lct_canonical(d: SpecialDatum) -> Fraction:
    if d.n == 1:
        return Fraction(1)
    if len(maximal_elements(d)) > 1:
        return sum((lct_datum(c) for c in connected_components(d)), Fraction(0))
    J = top_member(d)
    return max(Fraction(1), lct_datum(reduce(d, J)) / child_weight(d, J))


def find_closure_power(d: SpecialDatum, ceiling: int = CLOSURE_POINT_CEILING) -> int | None:
    singleton_weights = {s.weight for s in d.sets if len(s.elements) == 1}
    if len(singleton_weights) != 1:
        return None
    q = singleton_weights.pop()
    if not closure_is_power(monomial_ideal(d), q, ceiling):
        return None
    if q * lct_datum(d) != d.n:
        raise AssertionError(f"closure power {q} disagrees with lct {lct_datum(d)} in dimension {d.n}")
    return q


def reduction_ideals(d: SpecialDatum) -> tuple[MonomialIdeal, MonomialIdeal]:
    """The ideals a_{D\\J} (weights of D) and b_{D\\J} (weights of D\\J).

    For a connected datum with top member J of size >= 2, Newt(a) = r.Newt(b)
    with r the child weight, so lct(b) = r.lct(a).
    """
    J = top_member(d)
    gens = [g for i, g in enumerate(monomial_ideal(d).generators) if i != J]
    return MonomialIdeal(d.n, tuple(gens)), monomial_ideal(reduce(d, J))
