"""Exact two-phase simplex over Fractions.

Dense tableau, Bland's rule for both the entering and the leaving variable,
so the method terminates without any tolerance. Problems are in equality
form:

    minimize c.x  subject to  A x = b,  x >= 0
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] = ()

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, i: int, j: int):
        row = self.rows[i]
        piv = row[j]
        self.rows[i] = row = [v / piv for v in row]
        self.rhs[i] /= piv
        for k, other in enumerate(self.rows):
            if k != i and other[j] != 0:
                f = other[j]
                self.rows[k] = [a - f * b for a, b in zip(other, row)]
                self.rhs[k] -= f * self.rhs[i]
        self.basis[i] = j

    def reduced_costs(self, cost: Sequence[Fraction], columns: range) -> dict[int, Fraction]:
        out = {}
        for j in columns:
            r = cost[j] - sum(cost[b] * self.rows[i][j] for i, b in enumerate(self.basis))
            out[j] = r
        return out

    def run(self, cost: Sequence[Fraction], columns: range) -> str:
        while True:
            reduced = self.reduced_costs(cost, columns)
            entering = next((j for j in columns if reduced[j] < 0 and j not in self.basis), None)
            if entering is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    key = (self.rhs[i] / row[entering], self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], entering)


def minimize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LpResult:
    """Solve min c.x, A x = b, x >= 0 exactly."""
    m, nv = len(A), len(c)
    cost = [Fraction(v) for v in c]
    rows, rhs = [], []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        if len(row) != nv:
            raise ValueError(f"row {i} has {len(row)} entries, expected {nv}")
        bi = Fraction(b[i])
        if bi < 0:
            row, bi = [-v for v in row], -bi
        rows.append(row + [Fraction(int(k == i)) for k in range(m)])
        rhs.append(bi)

    # phase one: artificial columns nv..nv+m-1 start in the basis
    tab = _Tableau(rows, rhs, list(range(nv, nv + m)))
    phase_one = [Fraction(0)] * nv + [Fraction(1)] * m
    tab.run(phase_one, range(nv + m))
    infeasibility = sum(tab.rhs[i] for i, bv in enumerate(tab.basis) if bv >= nv)
    if infeasibility > 0:
        logger.debug("phase one ended with infeasibility %s", infeasibility)
        return LpResult(INFEASIBLE)

    # drive zero-level artificials out; drop rows that are redundant
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= nv:
            j = next((j for j in range(nv) if tab.rows[i][j] != 0), None)
            if j is None:
                del tab.rows[i], tab.rhs[i], tab.basis[i]
                continue
            tab.pivot(i, j)
        i += 1

    status = tab.run(cost + [Fraction(0)] * m, range(nv))
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED)
    x = [Fraction(0)] * nv
    for i, bv in enumerate(tab.basis):
        x[bv] = tab.rhs[i]
    value = sum((ci * xi for ci, xi in zip(cost, x)), Fraction(0))
    return LpResult(OPTIMAL, value, tuple(x))


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LpResult:
    res = minimize([-Fraction(v) for v in c], A, b)
    if res.optimal:
        return LpResult(OPTIMAL, -res.value, res.x)
    return res


def feasible_point(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    nv = len(A[0]) if A else 0
    res = minimize([0] * nv, A, b)
    return res.x if res.optimal else None
