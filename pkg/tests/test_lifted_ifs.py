from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from codingmaps.cod_space import DeckAction, RadialClass
from codingmaps.complex_geom import GaussRational as G
from codingmaps.errors import ZeroMeasureTile
from codingmaps.lifted_ifs import (AffineMap, attractor_raster, closed_form_measure,
                                   growth_rate_exact, hutchinson_image, lift_radial_class,
                                   map_image_count, measure_estimate, multiplicity_estimate,
                                   tiling_check)


def power2(text):
    return RadialClass.parse("power:2", text)


def test_lift_examples():
    ifs = lift_radial_class(power2("0,3/2"))
    assert [(m.a, m.b) for m in ifs.maps] == [(G(Fraction(1, 2)), G(0)), (G(Fraction(1, 2)), G(Fraction(3, 2)))]
    ifs = lift_radial_class(RadialClass.parse("cheb:2", "1/4,-1/4+1"))
    assert [(m.a, m.b) for m in ifs.maps] == [(G(Fraction(1, 2)), G(0)), (G(Fraction(-1, 2)), G(1))]
    ifs = lift_radial_class(RadialClass.parse("lattes", "i/2,1/2+1+i"))
    assert [(m.a, m.b) for m in ifs.maps] == [(G(1, 1) / 2, G(0)), (G(1, -1) / 2, G(1, 1))]


def test_interval_raster():
    r = attractor_raster(lift_radial_class(power2("0,3/2")), 256)
    assert r.converged
    ix, _ = r.set_pixels()
    assert set(range(0, 3 * 256)) <= set(ix.tolist())
    assert ix.min() >= -1 and ix.max() <= 3 * 256
    assert abs(measure_estimate(r).value - 3.0) <= 1 / 256 + 1e-12


def test_degenerate_raster_has_zero_measure():
    r = attractor_raster(lift_radial_class(power2("0,0")), 256)
    assert measure_estimate(r).value <= 2 / 256


def test_closed_forms():
    assert closed_form_measure(RadialClass.parse("power:3", "0,1/3,5/3")) == 1
    assert closed_form_measure(RadialClass.parse("cheb:2", "1/4,-1/4+1")) == 1
    assert closed_form_measure(RadialClass.parse("lattes", "-i/2+1+i,-1/2+2")) == 1


def test_tiling_examples():
    ifs = lift_radial_class(power2("0,3/2"))
    rep = tiling_check(ifs, (0j, 12 + 0j), 256)
    assert rep.coverage >= 0.999 and rep.overlap <= 0.005
    ns = [t.n for t in rep.translations]
    assert all(b - a == 3 for a, b in zip(ns, ns[1:]))
    with pytest.raises(ZeroMeasureTile):
        tiling_check(lift_radial_class(RadialClass.parse("power:3", "0,1/3,1")), (0j, 3 + 0j), 81)


def test_multiplicity_examples():
    assert multiplicity_estimate(lift_radial_class(power2("0,3/2")), 512).n == 3
    assert multiplicity_estimate(lift_radial_class(RadialClass.parse("cheb:2", "1/4,-1/4+1")), 512).n == 1


def test_levy_measure():
    ifs = lift_radial_class(RadialClass.parse("lattes", "i/2,1/2+1+i"))
    r = attractor_raster(ifs, 1024)
    assert abs(measure_estimate(r).value - 1.0) <= 0.05


def test_triangle_measure():
    ifs = lift_radial_class(RadialClass.parse("lattes", "-i/2+1+i,-1/2+2"))
    r = attractor_raster(ifs, 512)
    assert abs(measure_estimate(r).value - 1.0) <= 0.02


def _brute_count(digits, k):
    vals = {Fraction(0)}
    for _ in range(k):
        vals = {v / 2 + Fraction(n, 2) for v in vals for n in digits}
    return len(vals)


def test_growth_examples():
    counts, verdict = growth_rate_exact(lift_radial_class(power2("0,1/2")), 12)
    assert counts == [2 ** k for k in range(1, 13)] and verdict == "surjective-evidence"
    counts, verdict = growth_rate_exact(lift_radial_class(power2("0,0")), 8)
    assert counts == [1] * 8 and verdict.startswith("degenerate")
    even = lift_radial_class(power2("0,1"))
    counts, _ = growth_rate_exact(even, 10)
    assert counts == [_brute_count((0, 2), k) for k in range(1, 11)] == [2 ** k for k in range(1, 11)]
    assert multiplicity_estimate(even, 512).n == 2


@settings(max_examples=15, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_growth_monotone_and_bounded(a, b, c):
    ifs = lift_radial_class(RadialClass.power(3, (a, b, c)))
    counts, _ = growth_rate_exact(ifs, 6)
    assert all(x <= y for x, y in zip(counts, counts[1:]))
    assert all(n <= 3 ** k for k, n in enumerate(counts, start=1))


@pytest.mark.parametrize("family,text", [("power:2", "0,3/2"), ("cheb:2", "1/4,-1/4+1"),
                                         ("lattes", "-i/2+1+i,-1/2+2")])
def test_hutchinson_and_additivity(family, text):
    ifs = lift_radial_class(RadialClass.parse(family, text))
    r = attractor_raster(ifs, 256)
    img = hutchinson_image(r, ifs)
    diff = np.argwhere(img != r.bitmap)
    # every disagreement sits within one pixel of the boundary
    for y, x in diff:
        nb = r.bitmap[max(0, y - 1):y + 2, max(0, x - 1):x + 2]
        assert nb.any() and not nb.all()
    total = r.count()
    for m in ifs.maps:
        assert abs(ifs.degree * map_image_count(r, m) - total) <= 0.02 * total


@settings(max_examples=40)
@given(st.sampled_from(list(map(G, (1, -1))) + [G(0, 1), G(0, -1)]), st.integers(-5, 5),
       st.integers(-5, 5), st.fractions(-4, 4, max_denominator=8), st.fractions(-4, 4, max_denominator=8))
def test_deck_exactness(a, br, bi, x, y):
    t = DeckAction("lattes", a, G(br, bi))
    z = G(x, y)
    assert t.inverse()(t(z)) == z
    assert t.compose(t.inverse()) == DeckAction.identity("lattes")


def test_affine_map_requires_contraction():
    with pytest.raises(ValueError):
        AffineMap(G(1), G(0))
