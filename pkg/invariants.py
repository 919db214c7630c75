"""Discrete invariants of a special datum.

Group elements are kept additively: the diagonal matrix
(zeta_w, zeta_w^{-1}; i, j) is the vector (1/w)(e_i - e_j) in (Q/Z)^n.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, lcm, prod

from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from datum_core import (
    DatumOperationError,
    NodeRef,
    SpecialDatum,
    canonical_form,
    child_weight,
    children,
    connected_components,
    maximal_elements,
    monomial_ideal,
    reduce,
    restrict,
    top_member,
)
from lct import lct_datum, lct_lp

logger = logging.getLogger(__name__)

GroupGeneratorVector = tuple[Fraction, ...]


def embedding_dimension(d: SpecialDatum) -> int:
    return len(d.sets)


def emb_components_sum(d: SpecialDatum) -> int:
    return sum(embedding_dimension(c) for c in connected_components(d))


def delta(d: SpecialDatum, J: NodeRef) -> int:
    return len(children(d, J))


def m_of_D(d: SpecialDatum) -> int:
    return prod(delta(d, J) for J, s in enumerate(d.sets) if len(s.elements) >= 2)


def delta_sum_identity(d: SpecialDatum) -> tuple[int, int]:
    """(sum of delta(J) - 1 over internal J, n - number of maximal members)."""
    lhs = sum(delta(d, J) - 1 for J, s in enumerate(d.sets) if len(s.elements) >= 2)
    return lhs, d.n - len(maximal_elements(d))


def emb_lct_bound(d: SpecialDatum) -> int:
    """Upper bound for emb read off the lct of the pieces one level down.

    Connected with |J| >= 2: 2n - sum ceil(lct(D_{J_i})) + 1 over the children.
    Disconnected: 2n - sum ceil(lct(c)) over the components.
    """
    if d.n == 1:
        return 1
    roots = maximal_elements(d)
    if len(roots) > 1:
        return 2 * d.n - sum(ceil(lct_datum(c)) for c in connected_components(d))
    kids = children(d, roots[0])
    return 2 * d.n - sum(ceil(lct_datum(restrict(d, c))) for c in kids) + 1


# ---------------------------------------------------------------- group order

def group_order(d: SpecialDatum) -> int:
    return _group_order_canonical(canonical_form(d)[0])


@lru_cache(maxsize=None)
def _group_order_canonical(d: SpecialDatum) -> int:
    if d.n == 1:
        return 1
    if len(maximal_elements(d)) > 1:
        return prod(group_order(c) for c in connected_components(d))
    J = top_member(d)
    return child_weight(d, J) ** (d.n - 1) * group_order(reduce(d, J))


def group_generators(d: SpecialDatum) -> list[GroupGeneratorVector]:
    """(1/w)(e_i - e_j) for i, j in distinct children of a common member, w the child weight."""
    out: list[GroupGeneratorVector] = []
    for J in range(len(d.sets)):
        kids = children(d, J)
        for J1 in kids:
            w = d.weight(J1)
            for J2 in kids:
                if J1 == J2:
                    continue
                for i in d.elements(J1):
                    for j in d.elements(J2):
                        v = [Fraction(0)] * d.n
                        v[i - 1] = Fraction(1, w)
                        v[j - 1] = Fraction(-1, w)
                        out.append(tuple(v))
    return out


def group_order_oracle(d: SpecialDatum) -> int:
    """Index [L : Z^n] for L = Z^n + sum Z.g over the group generators.

    Scales L by the common denominator M so the columns are integral, and
    reads the covolume of M.L off the diagonal of its Hermite normal form.
    """
    gens = group_generators(d)
    if not gens:
        return 1
    M = lcm(*(x.denominator for g in gens for x in g))
    columns = [[M * int(r == c) for r in range(d.n)] for c in range(d.n)]
    columns += [[int(M * x) for x in g] for g in gens]
    A = Matrix(d.n, len(columns), lambda r, c: columns[c][r])
    H = hermite_normal_form(A)
    # rank is n, so the pivot columns are the last n
    H = H[:, H.cols - d.n :]
    covolume = abs(prod(int(H[i, i]) for i in range(d.n)))
    index, rem = divmod(M ** d.n, covolume)
    if rem:
        raise ArithmeticError(f"lattice covolume {covolume} does not divide {M}^{d.n}")
    logger.debug("lattice oracle: M=%d, covolume=%d, index=%d", M, covolume, index)
    return index


# ---------------------------------------------------------------- alpha / beta

def _connected_top(c: SpecialDatum) -> NodeRef:
    roots = maximal_elements(c)
    if len(roots) != 1:
        raise DatumOperationError("alpha and beta are defined on connected data only")
    return roots[0]


def alpha(c: SpecialDatum) -> Fraction:
    J = _connected_top(c)
    if c.n == 1:
        return Fraction(1)
    return min(lct_datum(reduce(c, J)), Fraction(child_weight(c, J)))


def beta(c: SpecialDatum) -> Fraction:
    J = _connected_top(c)
    if c.n == 1:
        return Fraction(1)
    return Fraction(child_weight(c, J))


def alpha_product(d: SpecialDatum) -> Fraction:
    return prod((alpha(restrict(d, J)) for J in range(len(d.sets))), start=Fraction(1))


def closure_bound(d: SpecialDatum) -> Fraction:
    """(1/|G_D|) (n / lct)^n, the volume lower bound for e."""
    return (d.n / lct_datum(d)) ** d.n / group_order(d)


# ---------------------------------------------------------------- summary

@dataclass(frozen=True)
class InvariantSummary:
    n: int
    emb: int
    delta: dict[str, int]
    m_of_D: int
    alpha: dict[str, Fraction]
    beta: dict[str, Fraction]
    group_order: int
    group_order_oracle: int
    lct: Fraction
    lct_lp: Fraction
    ceil_lct: int
    alpha_product: Fraction
    closure_bound: Fraction


def summarize(d: SpecialDatum) -> InvariantSummary:
    deltas, alphas, betas = {}, {}, {}
    for J, s in enumerate(d.sets):
        if len(s.elements) >= 2:
            deltas[s.label] = delta(d, J)
        sub = restrict(d, J)
        alphas[s.label] = alpha(sub)
        betas[s.label] = beta(sub)
    lct = lct_datum(d)
    return InvariantSummary(
        n=d.n,
        emb=embedding_dimension(d),
        delta=deltas,
        m_of_D=m_of_D(d),
        alpha=alphas,
        beta=betas,
        group_order=group_order(d),
        group_order_oracle=group_order_oracle(d),
        lct=lct,
        lct_lp=lct_lp(monomial_ideal(d)),
        ceil_lct=ceil(lct),
        alpha_product=alpha_product(d),
        closure_bound=closure_bound(d),
    )


def summary_to_dict(s: InvariantSummary) -> dict:
    return {
        "n": s.n,
        "emb": s.emb,
        "delta": dict(s.delta),
        "m_of_D": s.m_of_D,
        "alpha": {k: str(v) for k, v in s.alpha.items()},
        "beta": {k: str(v) for k, v in s.beta.items()},
        "group_order": s.group_order,
        "group_order_oracle": s.group_order_oracle,
        "lct": str(s.lct),
        "lct_lp": str(s.lct_lp),
        "ceil_lct": s.ceil_lct,
        "alpha_product": str(s.alpha_product),
        "closure_bound": str(s.closure_bound),
    }
