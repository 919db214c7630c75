from fractions import Fraction

import pytest

from conftest import hypersurface, pair
from datum_core import MonomialIdeal, SpecialDatum, maximal_elements, monomial_ideal, scale, top_member, child_weight
from lct import (
    BudgetExceededError,
    DimensionMismatchError,
    closure_is_power,
    find_closure_power,
    lct_datum,
    lct_lp,
    lct_lp_certificate,
    multiplier_membership,
    newton_certificate,
    newton_contains,
    reduction_ideals,
)
from verify import enumerate_dimension

SQUARES = MonomialIdeal.of([(2, 0), (0, 2)])


def test_newton_contains_midpoint():
    cert = newton_certificate(SQUARES, (1, 1))
    assert cert is not None
    assert cert.coefficients == {0: Fraction(1, 2), 1: Fraction(1, 2)}
    assert cert.dominated_by(SQUARES, (1, 1))


def test_newton_excludes_below_facet():
    assert not newton_contains(SQUARES, (Fraction(1, 2), Fraction(1, 2)))


def test_generators_and_points_above_are_inside():
    a = monomial_ideal(hypersurface(3))
    for g in a.generators:
        assert newton_contains(a, g)
    assert newton_contains(a, (5, 0, 7))


def test_newton_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        newton_contains(SQUARES, (1, 1, 1))


@pytest.mark.parametrize(
    "gens, expected",
    [
        ([(1, 1, 1)], Fraction(1)),
        ([(1, 0), (0, 1)], Fraction(2)),
        ([(2, 0), (0, 3)], Fraction(5, 6)),
        ([(1, 1, 1), (2, 0, 0), (0, 2, 0), (0, 0, 2)], Fraction(3, 2)),
    ],
)
def test_lct_lp(gens, expected):
    assert lct_lp(MonomialIdeal.of(gens)) == expected


def test_lct_certificate_reaches_the_diagonal():
    a = MonomialIdeal.of([(2, 0), (0, 3)])
    cert = lct_lp_certificate(a)
    u = 1 / cert.value
    assert cert.dominated_by(a, (u, u))


@pytest.mark.parametrize(
    "t, m, expected",
    [
        (1, (1, 0), True),
        (1, (0, 0), False),
        (Fraction(1, 2), (0, 0), True),
    ],
)
def test_multiplier_membership(t, m, expected):
    assert multiplier_membership(SQUARES, t, m) is expected


def test_multiplier_membership_rejects_bad_input():
    with pytest.raises(ValueError):
        multiplier_membership(SQUARES, 0, (0, 0))
    with pytest.raises(DimensionMismatchError):
        multiplier_membership(SQUARES, 1, (0,))


@pytest.mark.parametrize("gens", [[(2, 0), (0, 3)], [(1, 1, 1), (4, 0, 0), (0, 4, 0), (0, 0, 4)], [(3, 1), (0, 2)]])
def test_membership_flips_at_the_threshold(gens):
    a = MonomialIdeal.of(gens)
    c = lct_lp(a)
    zero = (0,) * a.n
    assert not multiplier_membership(a, c, zero)
    for k in range(2, 11):
        assert multiplier_membership(a, c * (1 - Fraction(1, k)), zero)
        assert not multiplier_membership(a, c * (1 + Fraction(1, k)), zero)


def test_membership_is_monotone_in_t():
    a = MonomialIdeal.of([(2, 0), (0, 3)])
    m = (1, 0)
    ts = [Fraction(k, 4) for k in range(1, 12)]
    flags = [multiplier_membership(a, t, m) for t in ts]
    # once membership fails it never comes back
    assert flags == sorted(flags, reverse=True)


@pytest.mark.parametrize(
    "gens, q, expected",
    [
        ([(1, 1, 1), (2, 0, 0), (0, 2, 0), (0, 0, 2)], 2, True),
        ([(1, 1, 1), (4, 0, 0), (0, 4, 0), (0, 0, 4)], 4, False),
        ([(1, 0), (0, 1)], 1, True),
        ([(3, 0), (0, 3), (1, 1)], 2, False),
    ],
)
def test_closure_is_power(gens, q, expected):
    assert closure_is_power(MonomialIdeal.of(gens), q) is expected


def test_closure_budget():
    with pytest.raises(BudgetExceededError):
        closure_is_power(MonomialIdeal.of([(1, 0, 0), (0, 1, 0), (0, 0, 1)]), 10, ceiling=5)


@pytest.mark.parametrize("a, expected", [(2, Fraction(3, 2)), (3, Fraction(1)), (4, Fraction(1)), (5, Fraction(1))])
def test_lct_of_hypersurfaces(a, expected):
    assert lct_datum(hypersurface(a)) == expected
    assert lct_lp(monomial_ideal(hypersurface(a))) == expected


def test_lct_examples(point, two_components, nested, strict_branch):
    assert lct_datum(point) == 1
    assert lct_datum(two_components) == 2
    assert lct_datum(nested) == 1
    assert lct_datum(strict_branch) == 1
    assert lct_datum(pair(2)) == 1


def test_find_closure_power(point, two_components, nested):
    assert find_closure_power(hypersurface(2)) == 2
    assert find_closure_power(hypersurface(3)) == 3
    assert find_closure_power(hypersurface(4)) is None
    assert find_closure_power(point) == 1
    assert find_closure_power(two_components) == 2
    assert find_closure_power(nested) == 4


@pytest.mark.parametrize("n", [1, 2, 3])
def test_recursion_matches_lp_on_all_small_data(n):
    for d in enumerate_dimension(n, 3):
        assert lct_datum(d) == lct_lp(monomial_ideal(d))
        assert lct_datum(d) >= len(maximal_elements(d))


def test_lct_is_label_independent(strict_branch):
    moved = SpecialDatum.of(3, [((1, 2, 3), 1), ((2, 3), 3), ((1,), 3), ((2,), 6), ((3,), 6)])
    assert lct_datum(moved) == lct_datum(strict_branch)


@pytest.mark.parametrize("a", [1, 2, 3])
def test_reduced_ideals_scale_by_child_weight(nested, strict_branch, a):
    for d in (scale(nested, a), scale(strict_branch, a), scale(hypersurface(2), a)):
        r = child_weight(d, top_member(d))
        big, small = reduction_ideals(d)
        assert lct_lp(small) == r * lct_lp(big)
