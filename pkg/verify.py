"""Exhaustive checking of the multiplicity and threshold theorems.

Data are enumerated one per isomorphism class as rooted forests in
signature form (size, ratio, children), the same key `datum_core.signature`
produces, so every class is generated exactly once and already in
canonical labeling.
"""
from __future__ import annotations

import json
import logging
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import ceil, lcm, prod
from typing import Callable, Iterator

from datum_core import (
    DatumSet,
    SpecialDatum,
    canonical_form,
    child_weight,
    children,
    connected_components,
    cover_relation,
    maximal_elements,
    reduce,
    restrict,
    scale,
    signature,
    to_json,
    to_payload,
    top_member,
    validate,
)
from invariants import (
    InvariantSummary,
    emb_components_sum,
    emb_lct_bound,
    embedding_dimension,
    delta_sum_identity,
    group_order,
    group_order_oracle,
    summarize,
    summary_to_dict,
)
from lct import BudgetExceededError, find_closure_power, lct_datum, lct_lp, reduction_ideals
from multiplicity import (
    HilbertSamuelTable,
    MultiplicityResult,
    OracleBudget,
    mult_exact,
    mult_lower,
    mult_oracle,
    mult_upper,
)
from settings import (
    CEILING_LEMMA_A_MAX,
    CEILING_LEMMA_B_MAX,
    CEILING_LEMMA_B_STEP_DENOMINATOR,
    CONCAVITY_GRID_LENGTHS,
    CONCAVITY_GRID_VALUES,
    DEFAULT_MAX_RATIO,
    DEFAULT_N_MAX,
    SCALING_FACTORS,
)

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
SKIP = "skip"

LEAF = (1, 0, ())
LABELED_N_MAX = 3


@dataclass(frozen=True)
class EnumerationBudget:
    n_max: int = DEFAULT_N_MAX
    max_ratio: int = DEFAULT_MAX_RATIO
    oracle: OracleBudget = OracleBudget()

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError(f"n_max must be at least 1, got {self.n_max}")
        if self.max_ratio < 2:
            raise ValueError(f"max_ratio must be at least 2, got {self.max_ratio}")

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "max_ratio": self.max_ratio,
            "k_max": self.oracle.k_max,
            "point_ceiling": self.oracle.point_ceiling,
        }


# ---------------------------------------------------------------- enumeration

def _partitions(total: int, largest: int) -> Iterator[tuple[int, ...]]:
    """Integer partitions of total into parts <= largest, non-increasing."""
    if total == 0:
        yield ()
        return
    for part in range(min(total, largest), 0, -1):
        for rest in _partitions(total - part, part):
            yield (part,) + rest


@lru_cache(maxsize=None)
def _forests(size: int, max_ratio: int, min_parts: int) -> tuple[tuple, ...]:
    out = set()
    for parts in _partitions(size, size):
        if len(parts) < min_parts:
            continue
        groups = Counter(parts)
        choices = [
            list(combinations_with_replacement(_trees(s, max_ratio), k))
            for s, k in sorted(groups.items())
        ]
        for combo in product(*choices):
            out.add(tuple(sorted(t for group in combo for t in group)))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _trees(size: int, max_ratio: int) -> tuple[tuple, ...]:
    if size == 1:
        return (LEAF,)
    out = []
    for kids in _forests(size, max_ratio, 2):
        for ratio in range(2, max_ratio + 1):
            out.append((size, ratio, kids))
    return tuple(sorted(out))


def _build(forest: tuple, n: int) -> SpecialDatum:
    entries: list[DatumSet] = []
    counter = 0

    def visit(node: tuple, weight: int) -> tuple[int, ...]:
        nonlocal counter
        _, ratio, kids = node
        if not kids:
            counter += 1
            entries.append(DatumSet((counter,), weight))
            return (counter,)
        elements: tuple[int, ...] = ()
        for kid in kids:
            elements += visit(kid, weight * ratio)
        entries.append(DatumSet(elements, weight))
        return elements

    for root in forest:
        visit(root, 1)
    return SpecialDatum(n, tuple(entries))


def enumerate_dimension(n: int, max_ratio: int) -> list[SpecialDatum]:
    """One canonical representative per isomorphism class in dimension n."""
    classes: dict[SpecialDatum, tuple] = {}
    for forest in _forests(n, max_ratio, 1):
        d, _ = canonical_form(_build(forest, n))
        classes.setdefault(d, forest)
    return sorted(classes, key=signature)


def enumerate_data(budget: EnumerationBudget) -> Iterator[SpecialDatum]:
    for n in range(1, budget.n_max + 1):
        yield from enumerate_dimension(n, budget.max_ratio)


def _set_partitions(items: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [(first,)] + part
        for i in range(len(part)):
            yield part[:i] + [(first,) + part[i]] + part[i + 1:]


def _labeled_trees(block: tuple[int, ...], weight: int, max_ratio: int) -> Iterator[list[DatumSet]]:
    if len(block) == 1:
        yield [DatumSet(block, weight)]
        return
    for split in _set_partitions(block):
        if len(split) < 2:
            continue
        for ratio in range(2, max_ratio + 1):
            for kids in product(*(_labeled_trees(b, weight * ratio, max_ratio) for b in split)):
                yield [DatumSet(block, weight)] + [s for kid in kids for s in kid]


def labeled_data(n: int, max_ratio: int) -> Iterator[SpecialDatum]:
    """Every labeled datum on {1..n}; brute force, meant for small n."""
    for roots in _set_partitions(tuple(range(1, n + 1))):
        for trees in product(*(_labeled_trees(b, 1, max_ratio) for b in roots)):
            yield SpecialDatum(n, tuple(s for t in trees for s in t))


def labeled_count(n: int, max_ratio: int) -> int:
    return sum(1 for _ in labeled_data(n, max_ratio))


def collapse_labeled(data) -> dict[SpecialDatum, int]:
    """Group labeled data by canonical form; values are orbit sizes."""
    return dict(Counter(canonical_form(d)[0] for d in data))


# ---------------------------------------------------------------- records

@dataclass(frozen=True)
class CheckOutcome:
    check: str
    status: str
    witness: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"check": self.check, "status": self.status, "witness": dict(self.witness)}


@dataclass(frozen=True)
class DatumRecord:
    datum: SpecialDatum
    summary: InvariantSummary
    multiplicity: MultiplicityResult
    lower: Fraction
    upper: Fraction
    oracle: HilbertSamuelTable
    checks: tuple[CheckOutcome, ...]
    observational: bool

    @property
    def key(self) -> tuple:
        return (self.datum.n, signature(self.datum))

    @property
    def failed(self) -> bool:
        return any(c.status == FAIL for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "datum": to_payload(self.datum),
            "summary": summary_to_dict(self.summary),
            "multiplicity": self.multiplicity.to_dict(),
            "bounds": {"lower": str(self.lower), "upper": str(self.upper)},
            "oracle": self.oracle.to_dict(),
            "checks": [c.to_dict() for c in self.checks],
            "observational": self.observational,
        }


@dataclass(frozen=True)
class LemmaResult:
    name: str
    points: int
    equalities: int
    failures: tuple[dict, ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "points": self.points,
            "equalities": self.equalities,
            "failures": list(self.failures),
        }


@dataclass(frozen=True)
class VerificationReport:
    budget: EnumerationBudget
    records: tuple[DatumRecord, ...]
    completeness: dict[int, dict]
    lemmas: tuple[LemmaResult, ...]

    def tallies(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for r in self.records:
            for c in r.checks:
                out.setdefault(c.check, {PASS: 0, FAIL: 0, SKIP: 0})[c.status] += 1
        return out

    @property
    def failed_records(self) -> int:
        return sum(1 for r in self.records if r.failed)

    @property
    def ok(self) -> bool:
        return (
            self.failed_records == 0
            and all(lemma.ok for lemma in self.lemmas)
            and all(entry["matches"] for entry in self.completeness.values())
        )

    def summary(self) -> dict:
        tallies = self.tallies()
        per_dimension = Counter(r.datum.n for r in self.records)
        return {
            "budget": self.budget.to_dict(),
            "data": len(self.records),
            "per_dimension": {str(n): per_dimension[n] for n in sorted(per_dimension)},
            "tallies": tallies,
            "failed_records": self.failed_records,
            "skips": sum(t[SKIP] for t in tallies.values()),
            "oracle_unstabilized": sum(1 for r in self.records if not r.oracle.stabilized),
            "interval_results": sum(1 for r in self.records if not r.multiplicity.exact),
            "observational_alpha_product_without_alpha_eq_beta": sum(
                1 for r in self.records if r.observational
            ),
            "completeness": {str(n): v for n, v in sorted(self.completeness.items())},
            "lemmas": [lemma.to_dict() for lemma in self.lemmas],
            "ok": self.ok,
        }


# ---------------------------------------------------------------- checks

def _all(results) -> bool | None:
    """False if anything failed, None if anything was skipped, else True."""
    results = list(results)
    if any(r is False for r in results):
        return False
    if any(r is None for r in results):
        return None
    return True


def _both(static_ok: bool, oracle_ok: bool | None) -> bool | None:
    return False if not static_ok else oracle_ok


class _DatumChecks:
    """Checks C1..C15 on one canonical datum."""

    def __init__(self, d: SpecialDatum, oracle_budget: OracleBudget):
        self.d = d
        self.oracle_budget = oracle_budget
        self.summary = summarize(d)
        self.result = mult_exact(d)
        self.lower = mult_lower(d)
        self.upper = mult_upper(d)
        self.table = mult_oracle(d, oracle_budget)
        self.e = self.table.e if self.table.stabilized else None

    def e_of(self, d: SpecialDatum) -> int | None:
        table = mult_oracle(d, self.oracle_budget)
        return table.e if table.stabilized else None

    def _connected_parts(self) -> list[SpecialDatum]:
        return [c for c in connected_components(self.d) if c.n >= 2]

    def lct_recursion_matches_lp(self) -> tuple[bool | None, dict]:
        s = self.summary
        ok = s.lct == s.lct_lp
        witness = {"lct_recursion": str(s.lct), "lct_lp": str(s.lct_lp)}
        for i, c in enumerate(self._connected_parts()):
            a, b = reduction_ideals(c)
            r = child_weight(c, top_member(c))
            la, lb = lct_lp(a), lct_lp(b)
            if lb != r * la:
                ok = False
                witness[f"component{i}_reduced_ideals"] = f"{lb} != {r} * {la}"
        return ok, witness

    def group_recursion_matches_lattice(self) -> tuple[bool | None, dict]:
        s = self.summary
        return s.group_order == s.group_order_oracle, {
            "recursion": str(s.group_order),
            "lattice": str(s.group_order_oracle),
        }

    def group_scaling_law(self) -> tuple[bool | None, dict]:
        ok, witness = True, {}
        for i, c in enumerate(connected_components(self.d)):
            base = group_order_oracle(c)
            for a in SCALING_FACTORS:
                scaled = scale(c, a)
                expected = a ** (c.n - 1) * base
                got = (group_order_oracle(scaled), group_order(scaled))
                if got != (expected, expected):
                    ok = False
                    witness[f"component{i}_a{a}"] = f"{got} != {expected}"
        return ok, witness

    def emb_bounds(self) -> tuple[bool | None, dict]:
        d, s = self.d, self.summary
        bound = emb_lct_bound(d)
        lhs, rhs = delta_sum_identity(d)
        # the cyclic cover exponents r chi_J = sum w(J_i) chi_{J_i} on every component
        covers = [cover_relation(c) for c in self._connected_parts()]
        ok = (
            s.emb <= bound <= 2 * d.n - s.ceil_lct
            and s.emb == emb_components_sum(d)
            and lhs == rhs
            and (len(maximal_elements(d)) > 1 or lhs == d.n - 1)
            and all(left == right for _, left, right in covers)
        )
        return ok, {
            "cover_degrees": str([r for r, _, _ in covers]),
            "emb": str(s.emb),
            "emb_lct_bound": str(bound),
            "2n-ceil(lct)": str(2 * d.n - s.ceil_lct),
            "delta_sum": f"{lhs} vs {rhs}",
        }

    def watanabe_bound(self) -> tuple[bool | None, dict]:
        d, s, e = self.d, self.summary, self.e
        roots = len(maximal_elements(d))
        static_ok = s.m_of_D <= 2 ** (d.n - roots) <= 2 ** (d.n - 1)
        oracle_ok = None
        if e is not None:
            oracle_ok = e <= s.m_of_D and (e == 2 ** (d.n - 1)) == (s.emb == 2 * d.n - 1)
        return _both(static_ok, oracle_ok), {"e": str(e), "m_of_D": str(s.m_of_D), "emb": str(s.emb)}

    def main_bound(self) -> tuple[bool | None, dict]:
        d, s, e = self.d, self.summary, self.e
        cap = 2 ** (d.n - s.ceil_lct)
        ok = None
        if e is not None:
            ok = e <= cap and (e == cap) == (s.emb == 2 * d.n - s.ceil_lct)
        return ok, {"e": str(e), "2^(n-ceil(lct))": str(cap), "emb": str(s.emb)}

    def lower_bound_chain(self) -> tuple[bool | None, dict]:
        s, e = self.summary, self.e
        static_ok = s.alpha_product >= s.closure_bound
        oracle_ok = None if e is None else e >= s.alpha_product
        return _both(static_ok, oracle_ok), {
            "e": str(e),
            "alpha_product": str(s.alpha_product),
            "closure_bound": str(s.closure_bound),
        }

    def closure_criterion(self) -> tuple[bool | None, dict]:
        d, s = self.d, self.summary
        try:
            q = find_closure_power(d)
        except BudgetExceededError as e:
            return None, {"reason": str(e)}
        except AssertionError as e:
            return False, {"reason": str(e)}
        ok = (s.alpha_product == s.closure_bound) == (q is not None)
        if q is not None:
            ok = ok and q * s.lct == d.n and all(x.weight == q for x in d.sets if len(x.elements) == 1)
        return ok, {
            "q": str(q),
            "alpha_product": str(s.alpha_product),
            "closure_bound": str(s.closure_bound),
        }

    def alpha_beta_equality(self) -> tuple[bool | None, dict]:
        s, e = self.summary, self.e
        if not self._alpha_eq_beta():
            return True, {}
        ok = None if e is None else e == s.alpha_product
        return ok, {"e": str(e), "alpha_product": str(s.alpha_product)}

    def _alpha_eq_beta(self) -> bool:
        return all(self.summary.alpha[k] == self.summary.beta[k] for k in self.summary.alpha)

    def cyclic_cover_bound(self) -> tuple[bool | None, dict]:
        results, witness = [], {}
        for i, c in enumerate(self._connected_parts()):
            J = top_member(c)
            r = child_weight(c, J)
            red = reduce(c, J)
            e_c, e_red = self.e_of(c), self.e_of(red)
            if e_c is None or e_red is None:
                results.append(None)
                continue
            ok = e_c <= r * e_red
            if lct_datum(c) == lct_datum(red) / r:
                ok = ok and e_c == r * e_red
            results.append(ok)
            witness[f"component{i}"] = f"e={e_c}, r={r}, e(reduce)={e_red}"
        return _all(results), witness

    def strict_branch_bound(self) -> tuple[bool | None, dict]:
        results, witness = [], {}
        for i, c in enumerate(self._connected_parts()):
            J = top_member(c)
            r = child_weight(c, J)
            red = reduce(c, J)
            L = lct_datum(red)
            if not (lct_datum(c) == 1 and L / r < 1):
                continue
            e_c, e_red = self.e_of(c), self.e_of(red)
            if e_c is None or e_red is None:
                results.append(None)
                continue
            results.append(e_c >= L * e_red)
            witness[f"component{i}"] = f"e={e_c}, lct(reduce)={L}, e(reduce)={e_red}"
        return _all(results), witness

    def component_products(self) -> tuple[bool | None, dict]:
        d, s = self.d, self.summary
        comps = connected_components(d)
        static_ok = (
            s.lct == sum((lct_datum(c) for c in comps), Fraction(0))
            and s.emb == sum(embedding_dimension(c) for c in comps)
            and s.group_order == prod(group_order(c) for c in comps)
        )
        oracle_ok: bool | None = True
        parts: list[int | None] = []
        if len(comps) > 1:
            parts = [self.e_of(c) for c in comps]
            if self.e is None or any(p is None for p in parts):
                oracle_ok = None
            else:
                oracle_ok = self.e == prod(parts)
        return _both(static_ok, oracle_ok), {"e": str(self.e), "component_e": str(parts)}

    def hypersurface(self) -> tuple[bool | None, dict]:
        d, s, e = self.d, self.summary, self.e
        if s.emb != d.n + 1:
            return True, {}
        static_ok = self.result.exact and self.result.value == s.alpha_product
        oracle_ok = None if e is None else e == s.alpha_product
        return _both(static_ok, oracle_ok), {
            "e": str(e),
            "alpha_product": str(s.alpha_product),
            "mult_exact": str(self.result.value),
        }

    def lct_structure(self) -> tuple[bool | None, dict]:
        d, s = self.d, self.summary
        ok = s.lct >= len(maximal_elements(d))
        witness = {"lct": str(s.lct), "maximal": str(len(maximal_elements(d)))}
        for i, c in enumerate(self._connected_parts()):
            J = top_member(c)
            r = child_weight(c, J)
            L = lct_datum(reduce(c, J))
            lct_c = lct_datum(c)
            kids = sum(ceil(lct_datum(restrict(c, k))) for k in children(c, J))
            if lct_c == L / r and kids - 1 == ceil(lct_c):
                if not (r == 2 and ceil(L) - ceil(lct_c) == 1):
                    ok = False
                    witness[f"component{i}"] = f"r={r}, lct(reduce)={L}, lct={lct_c}"
        return ok, witness

    def oracle_soundness(self) -> tuple[bool | None, dict]:
        e, res = self.e, self.result
        witness = {
            "e": str(e),
            "status": res.status,
            "value": str(res.value),
            "interval": f"[{res.lower}, {res.upper}]",
            "bounds": f"[{self.lower}, {self.upper}]",
        }
        static_ok = res.lower <= res.upper and self.lower <= self.upper
        if e is None:
            return _both(static_ok, None), witness
        ok = res.lower <= e <= res.upper and self.lower <= e <= self.upper
        if res.exact:
            ok = ok and e == res.value
        return _both(static_ok, ok), witness

    def run(self) -> list[CheckOutcome]:
        out = []
        for check, fn in CHECKS:
            ok, witness = fn(self)
            status = SKIP if ok is None else PASS if ok else FAIL
            if status == FAIL:
                witness = dict(witness, datum=to_json(self.d))
                logger.warning("%s failed on %s: %s", check, to_json(self.d), witness)
            out.append(CheckOutcome(check, status, witness))
        return out

    def observational(self) -> bool:
        return self.e is not None and self.e == self.summary.alpha_product and not self._alpha_eq_beta()


CHECKS: tuple[tuple[str, Callable[[_DatumChecks], tuple[bool | None, dict]]], ...] = (
    ("C1", _DatumChecks.lct_recursion_matches_lp),
    ("C2", _DatumChecks.group_recursion_matches_lattice),
    ("C3", _DatumChecks.group_scaling_law),
    ("C4", _DatumChecks.emb_bounds),
    ("C5", _DatumChecks.watanabe_bound),
    ("C6", _DatumChecks.main_bound),
    ("C7", _DatumChecks.lower_bound_chain),
    ("C8", _DatumChecks.closure_criterion),
    ("C9", _DatumChecks.alpha_beta_equality),
    ("C10", _DatumChecks.cyclic_cover_bound),
    ("C11", _DatumChecks.strict_branch_bound),
    ("C12", _DatumChecks.component_products),
    ("C13", _DatumChecks.hypersurface),
    ("C14", _DatumChecks.lct_structure),
    ("C15", _DatumChecks.oracle_soundness),
)


def check_datum(d: SpecialDatum, oracle_budget: OracleBudget = OracleBudget()) -> DatumRecord:
    d = canonical_form(d)[0]
    report = validate(d)
    if not report.valid:
        raise ValueError(f"enumerated datum {to_json(d)} is invalid: {report.kinds()}")
    checks = _DatumChecks(d, oracle_budget)
    outcomes = checks.run()
    return DatumRecord(
        datum=d,
        summary=checks.summary,
        multiplicity=checks.result,
        lower=checks.lower,
        upper=checks.upper,
        oracle=checks.table,
        checks=tuple(outcomes),
        observational=checks.observational(),
    )


# ---------------------------------------------------------------- lemma grids

def ceiling_lemma_grid(
    a_max: int = CEILING_LEMMA_A_MAX,
    b_max: int = CEILING_LEMMA_B_MAX,
    step_denominator: int = CEILING_LEMMA_B_STEP_DENOMINATOR,
) -> LemmaResult:
    """a <= 2^(ceil(b) - ceil(b/a)) for integers 2 <= a <= b, equality iff a = 2 and the exponent is 1."""
    points, equalities, failures = 0, 0, []
    for a in range(2, a_max + 1):
        b = Fraction(a)
        while b <= b_max:
            exponent = ceil(b) - ceil(b / a)
            rhs = 2 ** exponent
            equal = a == rhs
            points += 1
            equalities += equal
            if a > rhs or equal != (a == 2 and exponent == 1):
                failures.append({"a": str(a), "b": str(b), "rhs": str(rhs)})
            b += Fraction(1, step_denominator)
    return LemmaResult("ceiling", points, equalities, tuple(failures))


def _concavity_holds(x: tuple[Fraction, ...], c: tuple[Fraction, ...]) -> tuple[bool, bool]:
    """Compare prod (x_i/c_i)^x_i with (sum x / sum c)^(sum x) exactly.

    Both sides are raised to the common denominator D of the x_i so every
    exponent is an integer. Returns (inequality holds, sides equal).
    """
    D = lcm(*(xi.denominator for xi in x))
    lhs = prod(((xi / ci) ** int(xi * D) for xi, ci in zip(x, c)), start=Fraction(1))
    total = sum(x, Fraction(0))
    rhs = (total / sum(c, Fraction(0))) ** int(total * D)
    return lhs >= rhs, lhs == rhs


def concavity_lemma_grid(values=CONCAVITY_GRID_VALUES, lengths=CONCAVITY_GRID_LENGTHS) -> LemmaResult:
    """prod (x_i/c_i)^x_i >= (sum x / sum c)^(sum x), equality iff x_i/c_i is constant."""
    grid = [Fraction(v) for v in values]
    points, equalities, failures = 0, 0, []
    for length in lengths:
        for x in product(grid, repeat=length):
            for c in product(grid, repeat=length):
                holds, equal = _concavity_holds(x, c)
                proportional = len({xi / ci for xi, ci in zip(x, c)}) == 1
                points += 1
                equalities += equal
                if not holds or equal != proportional:
                    failures.append({"x": [str(v) for v in x], "c": [str(v) for v in c]})
    return LemmaResult("concavity", points, equalities, tuple(failures))


# ---------------------------------------------------------------- suite

def completeness(budget: EnumerationBudget) -> dict[int, dict]:
    """Labeled brute force against the class enumeration for small n."""
    out = {}
    for n in range(1, min(budget.n_max, LABELED_N_MAX) + 1):
        labeled = list(labeled_data(n, budget.max_ratio))
        collapsed = collapse_labeled(labeled)
        classes = enumerate_dimension(n, budget.max_ratio)
        out[n] = {
            "labeled": len(labeled),
            "classes": len(classes),
            "matches": set(collapsed) == set(classes),
        }
    return out


def _check_payload(args: tuple[SpecialDatum, OracleBudget]) -> DatumRecord:
    return check_datum(*args)


def run_suite(budget: EnumerationBudget, jobs: int = 1) -> VerificationReport:
    data = list(enumerate_data(budget))
    logger.info("checking %d data (n <= %d, ratio <= %d)", len(data), budget.n_max, budget.max_ratio)
    work = [(d, budget.oracle) for d in data]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_check_payload, work, chunksize=4))
    else:
        records = [_check_payload(w) for w in work]
    records.sort(key=lambda r: r.key)
    for n, count in sorted(Counter(r.datum.n for r in records).items()):
        failed = sum(1 for r in records if r.datum.n == n and r.failed)
        logger.info("dimension %d: %d data, %d with failures", n, count, failed)

    report = VerificationReport(
        budget=budget,
        records=tuple(records),
        completeness=completeness(budget),
        lemmas=(ceiling_lemma_grid(), concavity_lemma_grid()),
    )
    logger.info("%d failed records, ok=%s", report.failed_records, report.ok)
    return report


def jsonl_path(path: str) -> str:
    return os.path.splitext(path)[0] + ".jsonl"


def write_report(report: VerificationReport, path: str) -> str:
    """Write the summary to path and one record per line next to it. Returns the JSONL path."""
    records_path = jsonl_path(path)
    if records_path == path:
        raise ValueError(f"report path {path} has no room for a separate .jsonl records file")
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(report.summary(), f, indent=2, sort_keys=True)
        f.write("\n")
    with open(records_path, "w", encoding="utf-8") as f:
        for r in report.records:
            f.write(json.dumps(r.to_dict(), sort_keys=True) + "\n")
    return records_path
