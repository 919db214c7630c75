"""Special data: the weighted laminar families that classify abelian quotient
complete intersection singularities.

A special datum of dimension n is a family D of nonempty subsets of {1..n}
with a weight w(J) for every member, subject to five axioms:

1. every singleton {i} is a member;
2. any two members are nested or disjoint;
3. inclusion-maximal members have weight 1;
4. J strictly inside J' forces w(J) > w(J') and w(J') | w(J);
5. two children of the same member carry the same weight.

Values here are immutable. Structural operations (children, restriction,
reduction, scaling) assume a valid datum; run `validate` or `ensure_valid`
on anything read from outside first.
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)

NodeRef = int  # index into SpecialDatum.sets

# missing singletons beyond this many are reported as one violation
MISSING_SINGLETON_LISTING = 8


class DatumError(ValueError):
    pass


class MalformedDatumError(DatumError):
    """Input that cannot even be read as a datum candidate."""


class InvalidDatumError(DatumError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("; ".join(v.message for v in report.violations))


class DatumOperationError(DatumError):
    """A structural operation was called outside its precondition."""


def _set_key(elements: Sequence[int]) -> tuple:
    return (min(elements) if elements else 0, len(elements), tuple(elements))


@dataclass(frozen=True)
class DatumSet:
    elements: tuple[int, ...]
    weight: int

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(self.elements)))

    @property
    def label(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"


@dataclass(frozen=True)
class SpecialDatum:
    """A datum candidate; valid once `validate` reports nothing.

    `sets` is kept sorted by (smallest element, size) so equal families
    compare equal regardless of input order.
    """

    n: int
    sets: tuple[DatumSet, ...]

    def __post_init__(self):
        ordered = tuple(sorted(self.sets, key=lambda s: _set_key(s.elements)))
        object.__setattr__(self, "sets", ordered)

    @classmethod
    def of(cls, n: int, entries: Iterable[tuple[Iterable[int], int]]) -> SpecialDatum:
        return cls(n, tuple(DatumSet(tuple(e), w) for e, w in entries))

    def __len__(self) -> int:
        return len(self.sets)

    def weight(self, J: NodeRef) -> int:
        return self.sets[J].weight

    def elements(self, J: NodeRef) -> tuple[int, ...]:
        return self.sets[J].elements

    def index_of(self, elements: Iterable[int]) -> NodeRef:
        key = tuple(sorted(elements))
        for i, s in enumerate(self.sets):
            if s.elements == key:
                return i
        raise DatumOperationError(f"{set(key)} is not a member of the datum")

    # The parent/children index is derived once and never mutated.
    @cached_property
    def _parents(self) -> tuple[NodeRef | None, ...]:
        parents: list[NodeRef | None] = []
        members = [frozenset(s.elements) for s in self.sets]
        for i, m in enumerate(members):
            best = None
            for j, other in enumerate(members):
                if j != i and m < other and (best is None or len(other) < len(members[best])):
                    best = j
            parents.append(best)
        return tuple(parents)

    @cached_property
    def _children(self) -> tuple[tuple[NodeRef, ...], ...]:
        kids: list[list[NodeRef]] = [[] for _ in self.sets]
        for i, p in enumerate(self._parents):
            if p is not None:
                kids[p].append(i)
        return tuple(
            tuple(sorted(k, key=lambda c: self.sets[c].elements[0])) for k in kids
        )


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal given by exponent vectors of its generators."""

    n: int
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a monomial ideal needs at least one variable")
        seen: dict[tuple[int, ...], None] = {}
        for g in self.generators:
            g = tuple(int(x) for x in g)
            if len(g) != self.n:
                raise ValueError(f"generator {g} does not have length {self.n}")
            if any(x < 0 for x in g):
                raise ValueError(f"generator {g} has a negative exponent")
            if not any(g):
                raise ValueError("the unit monomial is not allowed as a generator")
            seen.setdefault(g, None)
        if not seen:
            raise ValueError("a monomial ideal needs at least one generator")
        object.__setattr__(self, "generators", tuple(seen))

    @classmethod
    def of(cls, generators: Iterable[Sequence[int]]) -> MonomialIdeal:
        gens = [tuple(g) for g in generators]
        if not gens:
            raise ValueError("a monomial ideal needs at least one generator")
        return cls(len(gens[0]), tuple(gens))


# ---------------------------------------------------------------- validation

@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    sets: tuple[tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def valid(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


def validate(raw: SpecialDatum) -> ValidationReport:
    """Report every axiom or well-formedness violation of a candidate."""
    out: list[Violation] = []

    def bad(kind: str, message: str, *sets: Sequence[int]):
        out.append(Violation(kind, message, tuple(tuple(s) for s in sets)))

    if not isinstance(raw.n, int) or raw.n < 1:
        bad("bad_dimension", f"dimension must be a positive integer, got {raw.n!r}")
        return ValidationReport(tuple(out))
    if not raw.sets:
        bad("no_sets", "a datum needs at least one set")
        return ValidationReport(tuple(out))

    n = raw.n
    wellformed: list[DatumSet] = []
    for s in raw.sets:
        ok = True
        if not s.elements:
            bad("empty_set", "empty member set", s.elements)
            ok = False
        out_of_range = [e for e in s.elements if not 1 <= e <= n]
        if out_of_range:
            bad("element_out_of_range", f"{s.label} has elements outside [1,{n}]: {out_of_range}", s.elements)
            ok = False
        if len(set(s.elements)) != len(s.elements):
            bad("duplicate_element", f"{s.label} repeats an element", s.elements)
            ok = False
        if s.weight < 1:
            bad("nonpositive_weight", f"{s.label} has weight {s.weight}", s.elements)
            ok = False
        if ok:
            wellformed.append(s)

    by_elements: dict[tuple[int, ...], DatumSet] = {}
    members: list[DatumSet] = []
    for s in wellformed:
        if s.elements in by_elements:
            bad("duplicate_set", f"{s.label} appears more than once", s.elements)
            continue
        by_elements[s.elements] = s
        members.append(s)

    # axiom (1); scans at most len(present) + MISSING_SINGLETON_LISTING labels
    present = {s.elements[0] for s in members if len(s.elements) == 1}
    missing_count = n - len(present)
    if 0 < missing_count <= MISSING_SINGLETON_LISTING:
        for i in range(1, n + 1):
            if i not in present:
                bad("missing_singleton", f"axiom (1): singleton {{{i}}} is missing", (i,))
    elif missing_count:
        first: list[int] = []
        i = 0
        while len(first) < MISSING_SINGLETON_LISTING:
            i += 1
            if i not in present:
                first.append(i)
        shown = ", ".join(f"{{{i}}}" for i in first)
        bad("missing_singleton", f"axiom (1): {missing_count} singletons are missing, starting with {shown}",
            *((i,) for i in first))

    # axiom (2)
    frozen = [frozenset(s.elements) for s in members]
    laminar = True
    for a in range(len(members)):
        for b in range(a + 1, len(members)):
            x, y = frozen[a], frozen[b]
            if x & y and not (x <= y or y <= x):
                laminar = False
                bad("not_laminar", f"axiom (2): {members[a].label} and {members[b].label} overlap",
                    members[a].elements, members[b].elements)

    # axiom (3)
    for a, s in enumerate(members):
        if not any(frozen[a] < frozen[b] for b in range(len(members))) and s.weight != 1:
            bad("maximal_weight", f"axiom (3): maximal member {s.label} has weight {s.weight}", s.elements)

    # axiom (4)
    for a, s in enumerate(members):
        for b, t in enumerate(members):
            if frozen[a] < frozen[b]:
                if s.weight <= t.weight:
                    bad("weight_order", f"axiom (4): {s.label} inside {t.label} needs a larger weight "
                        f"({s.weight} <= {t.weight})", s.elements, t.elements)
                elif s.weight % t.weight:
                    bad("weight_divisibility", f"axiom (4): weight {t.weight} of {t.label} does not divide "
                        f"weight {s.weight} of {s.label}", s.elements, t.elements)

    # axiom (5) and the derived partition property need a laminar family
    if laminar:
        candidate = SpecialDatum(n, tuple(members))
        for J, s in enumerate(candidate.sets):
            kids = candidate._children[J]
            weights = {candidate.sets[c].weight for c in kids}
            if len(weights) > 1:
                bad("sibling_weights", f"axiom (5): children of {s.label} have weights {sorted(weights)}",
                    *(candidate.sets[c].elements for c in kids))
            if len(s.elements) >= 2:
                covered = sorted(e for c in kids for e in candidate.sets[c].elements)
                if covered != list(s.elements) or len(kids) < 2:
                    bad("child_partition", f"children of {s.label} do not split it into two or more blocks",
                        s.elements)

    if out:
        logger.debug("datum rejected with %d violation(s)", len(out))
    return ValidationReport(tuple(out))


def ensure_valid(raw: SpecialDatum) -> SpecialDatum:
    report = validate(raw)
    if not report.valid:
        raise InvalidDatumError(report)
    return raw


# ---------------------------------------------------------------- structure

def children(d: SpecialDatum, J: NodeRef) -> list[NodeRef]:
    return list(d._children[J])


def parent(d: SpecialDatum, J: NodeRef) -> NodeRef | None:
    return d._parents[J]


def maximal_elements(d: SpecialDatum) -> list[NodeRef]:
    roots = [i for i, p in enumerate(d._parents) if p is None]
    return sorted(roots, key=lambda i: d.sets[i].elements[0])


def is_connected(d: SpecialDatum) -> bool:
    return len(maximal_elements(d)) == 1


def child_weight(d: SpecialDatum, J: NodeRef) -> int:
    """Common weight of the children of J (axiom 5)."""
    kids = d._children[J]
    if not kids:
        raise DatumOperationError(f"{d.sets[J].label} has no children")
    return d.sets[kids[0]].weight


def depth(d: SpecialDatum, J: NodeRef) -> int:
    k = 0
    p = d._parents[J]
    while p is not None:
        k += 1
        p = d._parents[p]
    return k


def restrict(d: SpecialDatum, J: NodeRef) -> SpecialDatum:
    """The datum D_J on the elements of J, relabeled to 1..|J|."""
    top = d.sets[J]
    relabel = {e: k for k, e in enumerate(top.elements, start=1)}
    inside = frozenset(top.elements)
    entries = []
    for s in d.sets:
        if inside.issuperset(s.elements):
            entries.append(DatumSet(tuple(relabel[e] for e in s.elements), s.weight // top.weight))
    return SpecialDatum(len(top.elements), tuple(entries))


def connected_components(d: SpecialDatum) -> list[SpecialDatum]:
    return [restrict(d, J) for J in maximal_elements(d)]


def reduce(d: SpecialDatum, J: NodeRef) -> SpecialDatum:
    """The datum D \\ J: drop the maximal member J and renormalize inside its children."""
    if d._parents[J] is not None:
        raise DatumOperationError(f"{d.sets[J].label} is not a maximal member")
    if len(d.sets[J].elements) < 2:
        raise DatumOperationError(f"{d.sets[J].label} is a singleton")
    owner: dict[int, int] = {}
    for c in d._children[J]:
        for e in d.sets[c].elements:
            owner[e] = d.sets[c].weight
    entries = []
    for i, s in enumerate(d.sets):
        if i == J:
            continue
        divisor = owner.get(s.elements[0], 1)
        entries.append(DatumSet(s.elements, s.weight // divisor))
    return SpecialDatum(d.n, tuple(entries))


def scale(d: SpecialDatum, a: int) -> SpecialDatum:
    """The datum D^a: every non-maximal weight multiplied by a."""
    if a < 1:
        raise DatumOperationError(f"scaling factor must be positive, got {a}")
    roots = maximal_elements(d)
    if len(roots) != 1:
        raise DatumOperationError("scaling needs a connected datum")
    entries = [
        DatumSet(s.elements, s.weight if i == roots[0] else a * s.weight)
        for i, s in enumerate(d.sets)
    ]
    return SpecialDatum(d.n, tuple(entries))


def top_member(d: SpecialDatum) -> NodeRef:
    roots = maximal_elements(d)
    if len(roots) != 1:
        raise DatumOperationError("datum is not connected")
    return roots[0]


def monomial_ideal(d: SpecialDatum) -> MonomialIdeal:
    """The ideal a_D generated by x_J^{w(J)}."""
    gens = []
    for s in d.sets:
        v = [0] * d.n
        for e in s.elements:
            v[e - 1] = s.weight
        gens.append(tuple(v))
    return MonomialIdeal(d.n, tuple(gens))


def cover_relation(d: SpecialDatum) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    """Exponents of Y^r = x_{J_1}^{w}...x_{J_m}^{w} for the top member J.

    Returns (r, r * chi_J, sum of w(J_i) * chi_{J_i}); the two vectors agree on
    every valid connected datum, which is what makes R_D a degree-r cyclic
    cover of R_{D\\J}.
    """
    J = top_member(d)
    if len(d.sets[J].elements) < 2:
        raise DatumOperationError("the top member is a singleton")
    r = child_weight(d, J)
    lhs = [0] * d.n
    for e in d.sets[J].elements:
        lhs[e - 1] = r
    rhs = [0] * d.n
    for c in d._children[J]:
        for e in d.sets[c].elements:
            rhs[e - 1] += d.sets[c].weight
    return r, tuple(lhs), tuple(rhs)


# ---------------------------------------------------------------- isomorphism

def _signature(d: SpecialDatum, J: NodeRef) -> tuple:
    kids = d._children[J]
    if not kids:
        return (1, 0, ())
    ratio = d.sets[kids[0]].weight // d.sets[J].weight
    return (len(d.sets[J].elements), ratio, tuple(sorted(_signature(d, c) for c in kids)))


def signature(d: SpecialDatum) -> tuple:
    """Permutation-invariant structural key of a valid datum."""
    return tuple(sorted(_signature(d, J) for J in maximal_elements(d)))


def relabel(d: SpecialDatum, perm: Sequence[int]) -> SpecialDatum:
    """Apply i -> perm[i-1] to the ground set."""
    return SpecialDatum(d.n, tuple(DatumSet(tuple(perm[e - 1] for e in s.elements), s.weight) for s in d.sets))


def canonical_form(d: SpecialDatum) -> tuple[SpecialDatum, tuple[int, ...]]:
    """Relabel the ground set so isomorphic data become identical.

    Roots and children are visited in signature order and leaves receive
    labels 1..n in that order. The returned permutation maps old label i to
    perm[i-1].
    """
    perm = [0] * d.n
    counter = 0

    def visit(J: NodeRef):
        nonlocal counter
        kids = d._children[J]
        if not kids:
            counter += 1
            perm[d.sets[J].elements[0] - 1] = counter
            return
        for c in sorted(kids, key=lambda c: _signature(d, c)):
            visit(c)

    for root in sorted(maximal_elements(d), key=lambda J: _signature(d, J)):
        visit(root)
    return relabel(d, perm), tuple(perm)


def is_isomorphic(d1: SpecialDatum, d2: SpecialDatum) -> bool:
    if d1.n != d2.n or len(d1) != len(d2):
        return False
    return canonical_form(d1)[0] == canonical_form(d2)[0]


# ---------------------------------------------------------------- serialization

def to_payload(d: SpecialDatum) -> dict:
    return {
        "n": d.n,
        "sets": [{"elements": list(s.elements), "weight": s.weight} for s in d.sets],
    }


def to_json(d: SpecialDatum) -> str:
    return json.dumps(to_payload(d))


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def from_payload(payload) -> SpecialDatum:
    if not isinstance(payload, dict):
        raise MalformedDatumError("datum must be a JSON object")
    if "n" not in payload or "sets" not in payload:
        raise MalformedDatumError('datum needs the fields "n" and "sets"')
    n = payload["n"]
    if not _is_int(n):
        raise MalformedDatumError(f'"n" must be an integer, got {n!r}')
    raw_sets = payload["sets"]
    if not isinstance(raw_sets, list):
        raise MalformedDatumError('"sets" must be a list')
    entries = []
    for k, item in enumerate(raw_sets):
        if not isinstance(item, dict) or "elements" not in item or "weight" not in item:
            raise MalformedDatumError(f'set #{k} needs "elements" and "weight"')
        elements, weight = item["elements"], item["weight"]
        if not isinstance(elements, list) or not all(_is_int(e) for e in elements):
            raise MalformedDatumError(f"set #{k}: elements must be a list of integers")
        if not _is_int(weight):
            raise MalformedDatumError(f"set #{k}: weight must be an integer")
        entries.append(DatumSet(tuple(elements), weight))
    return SpecialDatum(n, tuple(entries))


def from_json(text: str) -> SpecialDatum:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedDatumError(f"malformed JSON: {e}") from e
    return from_payload(payload)


def load(path: str) -> SpecialDatum:
    """Read a datum candidate from a JSON file. Raises FileNotFoundError as is."""
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with open(path, encoding="utf-8") as f:
        text = f.read()
    return from_json(text)


def dump(d: SpecialDatum, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(to_json(d) + "\n")


def to_dot(d: SpecialDatum) -> str:
    lines = ["digraph special_datum {", "  rankdir=TB;", "  node [shape=circle];"]
    for i, s in enumerate(d.sets):
        lines.append(f'  J{i} [label="{s.weight}", tooltip="{s.label}"];')
    for i in range(len(d.sets)):
        for c in d._children[i]:
            lines.append(f"  J{i} -> J{c};")
    levels: dict[int, list[int]] = {}
    for i in range(len(d.sets)):
        levels.setdefault(depth(d, i), []).append(i)
    for level in sorted(levels):
        nodes = "; ".join(f"J{i}" for i in levels[level])
        lines.append(f"  {{ rank=same; {nodes}; }}")
    lines.append("}")
    return "\n".join(lines) + "\n"
