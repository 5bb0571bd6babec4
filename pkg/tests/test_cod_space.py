import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from codingmaps.acceptance import random_class, random_deck
from codingmaps.complex_geom import GaussRational as G
from codingmaps.cod_space import (DeckAction, RadialClass, canonical_form, cod_equal, deck_act,
                                  is_degenerate, power_monoid_act)
from codingmaps.errors import DegenerateClass, FamilyMismatch, InvalidClassEntry
from codingmaps.lifted_ifs import closed_form_measure, lift_radial_class

FAMILIES = ("power:2", "power:3", "cheb:2", "lattes")


def _tag(fam):
    return "cheb" if fam == "cheb:2" else fam


def P2(a, b):
    return RadialClass.power(2, (a, b))


def test_deck_act_examples():
    assert deck_act(DeckAction("power", 1, 1), P2(0, 3)) == P2(1, 4)
    assert deck_act(DeckAction("power", 1, 0), P2(5, -2)) == P2(5, -2)
    c = RadialClass.cheb(((1, 0), (-1, 2)))
    assert deck_act(DeckAction("cheb", -1, 1), c) == RadialClass.cheb(((1, 1), (-1, 1)))


def test_deck_act_is_conjugation():
    rng = random.Random(11)
    for fam in FAMILIES:
        kind = fam.partition(":")[0]
        for _ in range(10):
            c, t = random_class(_tag(fam), rng), random_deck(kind, rng)
            tinv = t.inverse()
            conj = [(lambda z, m=m: t(m(tinv(z)))) for m in lift_radial_class(c).maps]
            lifted = lift_radial_class(deck_act(t, c)).maps
            for z in (G(0), G(1), G(Fraction(1, 3), 2)):
                assert [g(z) for g in conj] == [m(z) for m in lifted]


def test_cod_equal_examples():
    assert cod_equal(P2(0, 3), P2(1, 4))
    assert not cod_equal(P2(0, 3), P2(0, 4))
    for fam in FAMILIES:
        c = random_class(_tag(fam), random.Random(fam))
        assert cod_equal(c, c)


def test_canonical_examples():
    assert canonical_form(RadialClass.power(3, (2, 5, 8))) == RadialClass.power(3, (0, 3, 6))
    assert canonical_form(P2(7, 7)) == P2(0, 0)
    c = canonical_form(RadialClass.cheb(((-1, 3), (1, 1))))
    assert c == RadialClass.cheb(((-1, 0), (1, 0)))
    assert canonical_form(c) == c


def test_monoid_examples():
    assert power_monoid_act(0, 2, P2(0, 1)) == P2(0, 2)
    assert power_monoid_act(0, 1, P2(3, 4)) == P2(3, 4)
    assert power_monoid_act(1, 3, P2(0, 2)) == P2(1, 7)


@settings(max_examples=30)
@given(st.integers(0, 1), st.integers(1, 5), st.integers(-6, 6), st.integers(-6, 6))
def test_multiplicity_scales(m, k, a, b):
    c = P2(a, b)
    assert closed_form_measure(power_monoid_act(m, k, c)) == k * closed_form_measure(c)


@pytest.mark.parametrize("fam", FAMILIES)
def test_action_laws_and_orbits(fam):
    rng = random.Random(fam + "laws")
    kind = fam.partition(":")[0]
    for _ in range(40):
        c = random_class(_tag(fam), rng)
        t, s = random_deck(kind, rng), random_deck(kind, rng)
        assert deck_act(t.compose(s), c) == deck_act(t, deck_act(s, c))
        img = deck_act(t, c)
        if not is_degenerate(c):
            assert cod_equal(c, img) and cod_equal(img, c)
            assert canonical_form(img) == canonical_form(c)
        assert canonical_form(canonical_form(c)) == canonical_form(c)


@pytest.mark.parametrize("fam", FAMILIES)
def test_equivalence_relation_on_samples(fam):
    rng = random.Random(fam + "eq")
    kind = fam.partition(":")[0]
    base = [random_class(_tag(fam), rng, span=2) for _ in range(5)]
    pool = base + [deck_act(random_deck(kind, rng, 2), c) for c in base]
    for a in pool:
        assert cod_equal(a, a)
        for b in pool:
            assert cod_equal(a, b) == cod_equal(b, a)
            if cod_equal(a, b):
                assert all(cod_equal(a, c) for c in pool if cod_equal(b, c))


def _limit(ifs, prefix, period):
    """Cover point of the eventually periodic word prefix.period^inf."""
    maps = [(complex(m.a), complex(m.b)) for m in ifs.maps]
    A, B = 1 + 0j, 0j
    for s in reversed(period):
        a, b = maps[int(s) - 1]
        A, B = A * a, A * b + B
    z = B / (1 - A)
    for s in reversed(prefix):
        a, b = maps[int(s) - 1]
        z = a * z + b
    return z


@pytest.mark.parametrize("fam", FAMILIES)
def test_semantic_equality_witness(fam):
    rng = random.Random(fam + "witness")
    kind = fam.partition(":")[0]
    d = 3 if fam == "power:3" else 2
    pairs = 0
    while pairs < 5:
        c = random_class(_tag(fam), rng)
        if is_degenerate(c):
            continue
        t = random_deck(kind, rng)
        c2 = deck_act(t, c)
        assert cod_equal(c, c2)
        f1, f2 = lift_radial_class(c), lift_radial_class(c2)
        for _ in range(5):
            pre = "".join(str(rng.randint(1, d)) for _ in range(rng.randint(0, 3)))
            per = "".join(str(rng.randint(1, d)) for _ in range(rng.randint(1, 3)))
            p1, p2 = _limit(f1, pre, per), _limit(f2, pre, per)
            # same point downstairs: the cover points differ by the deck element
            assert abs(p2 - complex(t(p1))) <= 1e-8
        pairs += 1


def test_degenerate_and_errors():
    deg = RadialClass.cheb(((1, 1), (-1, 3)))
    assert is_degenerate(deg)
    assert cod_equal(deg, RadialClass.cheb(((1, 0), (-1, 0))))
    with pytest.raises(DegenerateClass):
        cod_equal(deg, deg, strict=True)
    with pytest.raises(FamilyMismatch):
        cod_equal(P2(0, 1), RadialClass.cheb(((1, 0), (1, 1))))
    with pytest.raises(InvalidClassEntry):
        RadialClass.parse("power:2", "0,1/3")
    with pytest.raises(InvalidClassEntry):
        RadialClass.parse("lattes", "1/2,1/4")
    with pytest.raises(InvalidClassEntry):
        RadialClass.parse("cheb:2", "1/2,0")
