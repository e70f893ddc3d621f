import random
from fractions import Fraction

import pytest

from covercert.mat2 import mat_det
from covercert.quatalg import (INF, QuaternionAlgebra, hilbert_symbol,
                               is_division, quadratic_embeds, ramified_places,
                               split_2adic, split_real)
from covercert.util import odd_prime_factors

from oracles import conic_solvable_mod, conic_square_class, hilbert_oracle


def rand_quat(D, rng, span=9):
    return D.element(*(Fraction(rng.randrange(-span, span + 1),
                                rng.choice([1, 1, 2, 3])) for _ in range(4)))


# --- element arithmetic ------------------------------------------------------

def test_mult_associative_and_unital():
    rng = random.Random(2)
    D = QuaternionAlgebra(17, 7)
    one = D.one()
    for _ in range(40):
        q, r, s = (rand_quat(D, rng) for _ in range(3))
        assert (q * r) * s == q * (r * s)
        assert q * one == q and one * q == q


def test_nrd_multiplicative_and_trace_symmetric():
    rng = random.Random(3)
    for ab in ((17, 7), (-1, -1), (2, -5)):
        D = QuaternionAlgebra(*ab)
        for _ in range(30):
            q, r = rand_quat(D, rng), rand_quat(D, rng)
            assert (q * r).nrd() == q.nrd() * r.nrd()
            assert (q * r).trd() == (r * q).trd()
            assert (q * r).conjugate() == r.conjugate() * q.conjugate()


def test_inverse():
    D = QuaternionAlgebra(17, 7)
    q = D.element(5, 1, 1, 0)
    assert q.nrd() == 1
    assert q * q.inverse() == D.one()
    with pytest.raises(ZeroDivisionError):
        QuaternionAlgebra(1, 1).element(1, 1, 0, 0).inverse()


# --- Hilbert symbol ----------------------------------------------------------

def test_hilbert_fixed_values():
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(-1, -1, INF) == -1
    for b in (2, -3, Fraction(7, 5)):
        for p in (2, 3, 7):
            assert hilbert_symbol(1, b, p) == 1
    with pytest.raises(ValueError):
        hilbert_symbol(0, 3, 2)
    with pytest.raises(ValueError):
        hilbert_symbol(3, 5, 6)


def test_hilbert_symmetry_and_bilinearity():
    rng = random.Random(9)
    vals = [Fraction(n, d) for n in range(-9, 10) if n for d in (1, 2, 3)]
    for p in (2, 3, 5, INF):
        for _ in range(60):
            a, b1, b2 = (rng.choice(vals) for _ in range(3))
            assert hilbert_symbol(a, b1, p) == hilbert_symbol(b1, a, p)
            assert (hilbert_symbol(a, b1 * b2, p)
                    == hilbert_symbol(a, b1, p) * hilbert_symbol(a, b2, p))


def test_hilbert_vs_conic_oracle_small_grid():
    vals = sorted({Fraction(s * n, d) for n in range(1, 7)
                   for d in range(1, 7) for s in (1, -1)})
    for p in (2, 3, 5):
        for a in vals:
            for b in vals:
                assert hilbert_symbol(a, b, p) == hilbert_oracle(a, b, p), (a, b, p)


def test_conic_oracle_level_escalation():
    # the reduced level used for odd p must agree with the literal mod-p^8
    # search; spot-check where the full computation is affordable
    rng = random.Random(4)
    for _ in range(25):
        a = Fraction(rng.randrange(-20, 21) or 1, rng.randrange(1, 21))
        b = Fraction(rng.randrange(-20, 21) or 1, rng.randrange(1, 21))
        A, B = conic_square_class(a, 3), conic_square_class(b, 3)
        assert conic_solvable_mod(A, B, 3, 3) == conic_solvable_mod(A, B, 3, 8)


def test_product_formula_sampled():
    rng = random.Random(6)
    for _ in range(60):
        a = Fraction(rng.randrange(-30, 31) or 5, rng.randrange(1, 12))
        b = Fraction(rng.randrange(-30, 31) or 3, rng.randrange(1, 12))
        places = {2}
        for r in (a, b):
            places.update(odd_prime_factors(r.numerator * r.denominator))
        prod = hilbert_symbol(a, b, INF)
        for p in places:
            prod *= hilbert_symbol(a, b, p)
        assert prod == 1, (a, b)


# --- ramification ------------------------------------------------------------

def test_ramified_places_known_algebras():
    assert ramified_places(QuaternionAlgebra(-1, -1)) == [2, INF]
    assert ramified_places(QuaternionAlgebra(1, 5)) == []
    assert ramified_places(QuaternionAlgebra(17, 7)) == [7, 17]
    # cross-check the (17,7) set against the exhaustive conic oracle
    for p in (2, 7, 17):
        want = -1 if p in (7, 17) else 1
        assert hilbert_oracle(17, 7, p) == want


def test_is_division():
    assert is_division(QuaternionAlgebra(-1, -1))
    assert is_division(QuaternionAlgebra(17, 7))
    assert not is_division(QuaternionAlgebra(1, 5))


def test_quadratic_embeds():
    H = QuaternionAlgebra(-1, -1)
    assert quadratic_embeds(H, -1) is True
    D = QuaternionAlgebra(17, 7)
    assert quadratic_embeds(D, -1) is False
    assert quadratic_embeds(D, -3) is False
    split = QuaternionAlgebra(1, 5)
    for e in (-1, -3, 2, Fraction(3, 5)):
        assert quadratic_embeds(split, e) is True
    with pytest.raises(ValueError):
        quadratic_embeds(D, 4)
    with pytest.raises(ValueError):
        quadratic_embeds(D, Fraction(9, 25))


# --- splittings --------------------------------------------------------------

def test_split_2adic_relations_and_det():
    D = QuaternionAlgebra(17, 7)
    rng = random.Random(8)
    sm = split_2adic(D, 6)
    samples = [D.one(), -D.one(), D.element(5, 1, 1, 0),
               D.element(Fraction(7, 2), Fraction(1, 2), 1, 0)]
    samples += [rand_quat(D, rng, span=5) for _ in range(10)]
    report = sm.verify(samples)
    assert report["kind"] == "2-adic"
    # i is diagonal with the canonical 2-adic root of 17 on the diagonal
    s = sm.image_i()[0][0]
    assert (s.unit ** 2 - 17) % 2 ** 6 == 0


def test_split_2adic_exact_square():
    D = QuaternionAlgebra(1, 5)
    sm = split_2adic(D, 4)
    I = sm.image_i()
    assert I[0][0].residue(4) == 1
    assert I[1][1].residue(4) == 2 ** 4 - 1


def test_split_2adic_rejects():
    with pytest.raises(ValueError):
        split_2adic(QuaternionAlgebra(3, 7), 4)
    with pytest.raises(ValueError):
        split_2adic(QuaternionAlgebra(-1, -1), 4)


def test_split_real():
    D = QuaternionAlgebra(17, 7)
    rng = random.Random(5)
    sm = split_real(D)
    samples = [D.one(), D.element(5, 1, 1, 0)]
    samples += [rand_quat(D, rng, span=4) for _ in range(8)]
    sm.verify(samples)
    q = D.element(5, 1, 1, 0)
    assert mat_det(sm.apply(q)).contains(1)
    with pytest.raises(ValueError):
        split_real(QuaternionAlgebra(-2, 3))
