import json
from itertools import permutations

import pytest

from conftest import hypersurface, pair
from datum_core import (
    DatumOperationError,
    DatumSet,
    InvalidDatumError,
    MalformedDatumError,
    MonomialIdeal,
    SpecialDatum,
    canonical_form,
    child_weight,
    children,
    connected_components,
    cover_relation,
    depth,
    dump,
    ensure_valid,
    from_json,
    is_connected,
    is_isomorphic,
    load,
    maximal_elements,
    monomial_ideal,
    parent,
    reduce,
    relabel,
    restrict,
    scale,
    signature,
    to_dot,
    to_json,
    validate,
)
from verify import enumerate_dimension


def test_worked_examples_are_valid(two_components, nested, strict_branch, point):
    for d in (hypersurface(2), hypersurface(5), two_components, nested, strict_branch, point):
        assert validate(d).valid


def test_input_order_does_not_matter():
    a = SpecialDatum.of(2, [((1,), 2), ((1, 2), 1), ((2,), 2)])
    assert a == pair(2)


@pytest.mark.parametrize(
    "entries, kind",
    [
        ([((1, 2), 1), ((1,), 2)], "missing_singleton"),
        ([((1, 2), 2), ((1,), 4), ((2,), 4)], "maximal_weight"),
        ([((1, 2), 1), ((1,), 1), ((2,), 1)], "weight_order"),
        ([((1, 2), 1), ((1,), 2), ((2,), 3)], "sibling_weights"),
        ([((1, 2, 3), 1), ((1,), 4), ((2,), 4), ((3,), 6)], "sibling_weights"),
        ([((1, 2), 2), ((2, 3), 2), ((1,), 1), ((2,), 1), ((3,), 1)], "not_laminar"),
        ([((1, 2), 1), ((1,), 2), ((2,), 2), ((1,), 2)], "duplicate_set"),
        ([((1, 4), 1), ((1,), 2), ((2,), 2)], "element_out_of_range"),
        ([((1,), 0), ((2,), 1)], "nonpositive_weight"),
    ],
)
def test_axiom_violations_are_reported(entries, kind):
    n = 3 if any(3 in e for e, _ in entries) else 2
    report = validate(SpecialDatum.of(n, entries))
    assert not report.valid
    assert kind in report.kinds()


def test_divisibility_violation():
    d = SpecialDatum.of(3, [((1, 2, 3), 1), ((1, 2), 2), ((3,), 2), ((1,), 3), ((2,), 3)])
    assert "weight_divisibility" in validate(d).kinds()


def test_child_partition_violation():
    # {1,2} has the single child {1}
    d = SpecialDatum.of(2, [((1, 2), 1), ((1,), 2)])
    assert {"missing_singleton", "child_partition"} <= validate(d).kinds()


def test_validation_collects_every_violation():
    d = SpecialDatum.of(2, [((1, 2), 3), ((1,), 2)])
    kinds = validate(d).kinds()
    assert {"missing_singleton", "maximal_weight", "weight_order"} <= kinds


def test_ensure_valid_raises_with_report():
    with pytest.raises(InvalidDatumError) as info:
        ensure_valid(SpecialDatum.of(1, [((1,), 2)]))
    assert info.value.report.kinds() == {"maximal_weight"}


def test_structure_queries(nested):
    top = nested.index_of((1, 2, 3, 4))
    left = nested.index_of((1, 2))
    assert maximal_elements(nested) == [top]
    assert is_connected(nested)
    assert [nested.elements(c) for c in children(nested, top)] == [(1, 2), (3, 4)]
    assert parent(nested, left) == top
    assert child_weight(nested, top) == 2
    assert depth(nested, nested.index_of((3,))) == 2


def test_components(two_components):
    assert not is_connected(two_components)
    comps = connected_components(two_components)
    assert comps == [pair(2), pair(2)]


def test_restrict_relabels_and_divides(nested):
    sub = restrict(nested, nested.index_of((3, 4)))
    assert sub == pair(2)


def test_reduce_renormalizes(nested):
    red = reduce(nested, nested.index_of((1, 2, 3, 4)))
    expected = SpecialDatum.of(4, [((1, 2), 1), ((1,), 2), ((2,), 2), ((3, 4), 1), ((3,), 2), ((4,), 2)])
    assert red == expected
    assert validate(red).valid


def test_reduce_preconditions(nested, point):
    with pytest.raises(DatumOperationError):
        reduce(nested, nested.index_of((1, 2)))
    with pytest.raises(DatumOperationError):
        reduce(point, 0)


def test_scale(nested, two_components):
    scaled = scale(hypersurface(2), 3)
    assert scaled == hypersurface(6)
    assert validate(scale(nested, 2)).valid
    with pytest.raises(DatumOperationError):
        scale(two_components, 2)
    with pytest.raises(DatumOperationError):
        scale(nested, 0)


def test_monomial_ideal_generators():
    a = monomial_ideal(hypersurface(2))
    assert set(a.generators) == {(1, 1, 1), (2, 0, 0), (0, 2, 0), (0, 0, 2)}


def test_monomial_ideal_rejects_bad_generators():
    with pytest.raises(ValueError):
        MonomialIdeal.of([(1, 0), (1,)])
    with pytest.raises(ValueError):
        MonomialIdeal.of([(0, 0)])
    with pytest.raises(ValueError):
        MonomialIdeal.of([(-1, 2)])
    assert MonomialIdeal.of([(1, 0), (1, 0)]).generators == ((1, 0),)


def test_cover_relation(nested, strict_branch):
    for d in (hypersurface(4), nested, strict_branch):
        r, lhs, rhs = cover_relation(d)
        assert lhs == rhs
        assert r == child_weight(d, maximal_elements(d)[0])


def test_canonical_form_identifies_relabelings(strict_branch):
    perm = (3, 1, 2)
    moved = relabel(strict_branch, perm)
    assert moved != strict_branch
    assert is_isomorphic(moved, strict_branch)
    assert canonical_form(moved)[0] == canonical_form(strict_branch)[0]
    assert signature(moved) == signature(strict_branch)


def test_canonical_form_separates_weights():
    assert not is_isomorphic(hypersurface(2), hypersurface(3))


def test_json_round_trip(tmp_path, nested):
    path = tmp_path / "nested.json"
    dump(nested, str(path))
    assert load(str(path)) == nested
    assert from_json(to_json(nested)) == nested


@pytest.mark.parametrize(
    "text",
    [
        "{not json",
        "[1, 2]",
        '{"n": 2}',
        '{"n": "2", "sets": []}',
        '{"n": 2, "sets": [{"elements": [1]}]}',
        '{"n": 2, "sets": [{"elements": "12", "weight": 1}]}',
        '{"n": 2, "sets": [{"elements": [1], "weight": 1.5}]}',
    ],
)
def test_malformed_input(text):
    with pytest.raises(MalformedDatumError):
        from_json(text)


def test_load_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load(str(tmp_path / "absent.json"))


def test_fixture_files_match(data_dir, two_components, nested):
    assert load(str(data_dir / "hypersurface_a2.json")) == hypersurface(2)
    assert load(str(data_dir / "two_components.json")) == two_components
    assert load(str(data_dir / "nested.json")) == nested


def test_dot_output(nested):
    dot = to_dot(nested)
    assert dot.startswith("digraph special_datum {")
    assert dot.count("->") == 6
    assert 'tooltip="{1,2,3,4}"' in dot
    assert dot.count("rank=same") == 3


def test_payload_is_plain_json(nested):
    payload = json.loads(to_json(nested))
    assert payload["n"] == 4
    assert {"elements": [1, 2, 3, 4], "weight": 1} in payload["sets"]


def test_missing_singletons_in_huge_dimension():
    d = SpecialDatum.of(50_000_000, [((1,), 1)])
    report = validate(d)
    missing = [v for v in report.violations if v.kind == "missing_singleton"]
    assert len(missing) == 1
    assert "49999999 singletons are missing" in missing[0].message
    assert missing[0].sets[:2] == ((2,), (3,))


def test_few_missing_singletons_are_listed_one_by_one():
    d = SpecialDatum.of(4, [((1, 2, 3, 4), 1), ((1,), 2)])
    missing = [v for v in validate(d).violations if v.kind == "missing_singleton"]
    assert [v.sets for v in missing] == [((2,),), ((3,),), ((4,),)]


def _mutations(d):
    """Every datum candidate that differs from d in one weight or one set."""
    sets = list(d.sets)
    for k, s in enumerate(sets):
        rest = sets[:k] + sets[k + 1:]
        for w in {s.weight - 1, s.weight + 1, 2 * s.weight, 0}:
            yield SpecialDatum(d.n, tuple(rest) + (DatumSet(s.elements, w),))
        yield SpecialDatum(d.n, tuple(rest))
        for e in range(1, d.n + 2):
            if e in s.elements:
                yield SpecialDatum(d.n, tuple(rest) + (DatumSet(tuple(x for x in s.elements if x != e), s.weight),))
            else:
                yield SpecialDatum(d.n, tuple(rest) + (DatumSet(s.elements + (e,), s.weight),))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_single_mutations_never_crash(n):
    for d in enumerate_dimension(n, 3):
        for m in _mutations(d):
            report = validate(m)
            if report.valid:
                # still a datum, so the structural queries must work on it
                assert signature(canonical_form(m)[0]) == signature(m)
                assert len(connected_components(m)) == len(maximal_elements(m))
            else:
                assert report.kinds()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_canonical_form_under_every_permutation(n):
    for d in enumerate_dimension(n, 3):
        base, perm = canonical_form(d)
        assert canonical_form(base)[0] == base
        assert relabel(d, perm) == base
        for p in permutations(range(1, n + 1)):
            moved = relabel(d, p)
            assert canonical_form(moved)[0] == base
            assert is_isomorphic(moved, d)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_operations_preserve_validity(n):
    for d in enumerate_dimension(n, 3):
        for J in range(len(d)):
            assert validate(restrict(d, J)).valid
        for J in maximal_elements(d):
            if len(d.elements(J)) >= 2:
                assert validate(reduce(d, J)).valid
        if is_connected(d):
            for a in (1, 2, 3):
                assert validate(scale(d, a)).valid


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_components_are_restrictions_to_maximal_members(n):
    for d in enumerate_dimension(n, 3):
        comps = connected_components(d)
        assert comps == [restrict(d, J) for J in maximal_elements(d)]
        assert sum(c.n for c in comps) == d.n
        assert all(is_connected(c) for c in comps)
