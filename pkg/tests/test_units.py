from fractions import Fraction

import pytest

from covercert.modgroup import ResidueMatrix
from covercert.quatalg import QuaternionAlgebra, split_2adic
from covercert.units import (SATURATED, STANDARD, enumerate_units,
                             enumerate_units_saturated, find_example_algebra,
                             in_saturated_order, reduce_units,
                             surjects_at_level, torsion_check)

from oracles import brute_norm_one_box

D17 = QuaternionAlgebra(17, 7)


def test_slice_contains_center():
    for ab in ((17, 7), (-1, -1), (2, 3)):
        D = QuaternionAlgebra(*ab)
        s = enumerate_units(D, 1)
        assert D.one() in s.elements
        assert -D.one() in s.elements


def test_lipschitz_units():
    s = enumerate_units(QuaternionAlgebra(-1, -1), 1)
    assert len(s) == 8
    coords = {tuple(int(c) for c in q.coords()) for q in s.elements}
    assert (0, 1, 0, 0) in coords and (0, 0, 0, -1) in coords


def test_enumeration_complete_for_box():
    for ab, B in (((-1, -1), 3), ((17, 7), 6), ((2, 3), 4)):
        D = QuaternionAlgebra(*ab)
        got = [tuple(int(c) for c in q.coords())
               for q in enumerate_units(D, B).elements]
        assert got == brute_norm_one_box(*ab, B)


def test_slice_17_7():
    s = enumerate_units(D17, 20)
    assert len(s) == 174
    for q in s.elements:
        assert q.nrd() == 1
        if q not in (D17.one(), -D17.one()):
            assert abs(q.trd()) > 2


def test_saturated_slice():
    s = enumerate_units_saturated(D17, 20)
    assert len(s) == 510
    std = set(enumerate_units(D17, 20).elements)
    assert std <= set(s.elements)
    q = D17.element(Fraction(7, 2), Fraction(1, 2), 1, 0)
    assert q.nrd() == 1
    assert q in s.elements
    for u in s.elements:
        assert in_saturated_order(u)
        assert u.nrd() == 1


def test_saturated_order_closed_under_product():
    s = enumerate_units_saturated(D17, 4)
    els = s.elements
    for q in els[::7]:
        for r in els[::11]:
            assert in_saturated_order(q * r)


def test_saturated_requires_1_mod_4():
    with pytest.raises(ValueError):
        enumerate_units_saturated(QuaternionAlgebra(3, 7), 2)


def test_reduce_units_basics():
    split = split_2adic(D17, 8)
    s = enumerate_units(D17, 8)
    mats = reduce_units(s, split, 2)
    lookup = dict(zip(s.elements, mats))
    assert lookup[D17.one()] == ResidueMatrix.identity(4)
    assert lookup[-D17.one()] == ResidueMatrix(3, 0, 0, 3, 4)
    # homomorphism whenever the product stays in the slice
    els = s.elements
    for q in els[::5]:
        for r in els[::7]:
            if q * r in lookup:
                assert lookup[q * r] == lookup[q] * lookup[r]


def test_reduce_units_needs_precision():
    split = split_2adic(D17, 2)
    s = enumerate_units(D17, 2)
    with pytest.raises(ValueError):
        reduce_units(s, split, 6)


def test_standard_order_mod2_obstruction():
    ok, table = surjects_at_level(D17, 20, 1, order_kind=STANDARD)
    assert not ok
    assert table.order == 2


def test_saturated_surjects_levels_1_2():
    for k in (1, 2):
        ok, table = surjects_at_level(D17, 20, k)
        assert ok
        assert table.order == 6 * 8 ** (k - 1)


def test_surjectivity_monotone_in_height():
    ok_small, _ = surjects_at_level(D17, 8, 1)
    ok_big, _ = surjects_at_level(D17, 12, 1)
    if ok_small:
        assert ok_big


def test_torsion_check_negative_control():
    report = torsion_check(QuaternionAlgebra(-1, -1), 1)
    assert not report["slice_torsion_free"]
    assert (0, 1, 0, 0) in report["finite_order_in_slice"]
    assert report["embeds_sqrt_minus_1"] is True


def test_torsion_check_17_7():
    report = torsion_check(D17, 20)
    assert report["slice_torsion_free"]
    assert report["embeds_sqrt_minus_1"] is False
    assert report["embeds_sqrt_minus_3"] is False
    assert report["algebra_torsion_free"]


def test_torsion_check_rejects_split():
    with pytest.raises(ValueError):
        torsion_check(QuaternionAlgebra(1, 5), 2)


def test_find_example_algebra():
    D = find_example_algebra(17, 100)
    assert (D.a, D.b) == (17, 7)
    for bad in (4, 3, 6):
        with pytest.raises(ValueError):
            find_example_algebra(bad, 100)
    with pytest.raises(ValueError):
        find_example_algebra(33, 3)
