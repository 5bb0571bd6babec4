import cmath
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from codingmaps.complex_geom import Curve, circle_loop, curve_concat, curve_reverse, polyline, segment
from codingmaps.errors import (CriticalValueProximity, PoleAtInput, UnsupportedFamily,
                               WindowEscape)
from codingmaps.rational_maps import (INF, chebyshev, evaluate, from_token, lattes, lift_curve,
                                      power, preimages, quadcantor)

CATALOG = [power(2), power(3), chebyshev(2), chebyshev(3), lattes(), quadcantor()]


def test_evaluate_examples():
    assert evaluate(power(2), 1j) == -1
    assert evaluate(quadcantor(), 0) == -3
    assert evaluate(lattes(), -1) == 1
    assert evaluate(lattes(), 0) is INF
    with pytest.raises(PoleAtInput):
        evaluate(lattes(), 0, finite=True)


def test_preimage_examples():
    r = sorted(preimages(quadcantor(), 0), key=lambda z: z.real)
    assert r[0] == pytest.approx(-math.sqrt(3)) and r[1] == pytest.approx(math.sqrt(3))
    cubes = preimages(power(3), 1)
    for k in range(3):
        assert min(abs(z - cmath.exp(2j * math.pi * k / 3)) for z in cubes) < 1e-12
    # degree 2: two simple roots of z^2 - 6z + 1
    lat = sorted(preimages(lattes(), -1), key=lambda z: z.real)
    assert lat[0] == pytest.approx(3 - 2 * math.sqrt(2)) and lat[1] == pytest.approx(3 + 2 * math.sqrt(2))


@settings(max_examples=60)
@given(st.sampled_from(range(len(CATALOG))), st.floats(-2, 2), st.floats(-2, 2))
def test_preimages_contain_the_point(k, x, y):
    m, z = CATALOG[k], complex(x, y)
    if m.family == "lattes" and abs(z) < 1e-3:
        return
    w = evaluate(m, z)
    assert min(abs(r - z) for r in preimages(m, w)) <= 1e-9 * max(1, abs(z))


def test_orbit_certificates():
    q = quadcantor()
    cert = q.certificates[0]
    # 0 -> -3 -> 6 -> 33 escapes the window
    assert cert.attracted_to is INF and cert.period is None
    assert power(2).certificates[0].period == 1
    lat = lattes().certificates
    assert all(c.period is not None for c in lat)
    assert "postcritical" in q.report()


def test_tokens():
    assert from_token("power:3").degree == 3
    assert from_token("cheb:2").family == "cheb"
    with pytest.raises(UnsupportedFamily):
        from_token("mandelbrot")


def test_lift_segment_quadcantor():
    lift = lift_curve(quadcantor(), segment(0, 1), math.sqrt(3))
    assert lift.end == pytest.approx(2)


def test_lift_monodromy_round_critical_value():
    q = quadcantor()
    loop = circle_loop(-3, 0.5, 0.0, 64)
    x0 = math.sqrt(0.5)
    lift = lift_curve(q, loop, x0)
    assert lift.end == pytest.approx(-x0, abs=1e-9)
    fine = lift_curve(q, loop.subdivide(10), x0, max_step=0.005)
    assert abs(fine.end - lift.end) < 1e-9


def test_lift_power_arc():
    arc = Curve(tuple(cmath.exp(1j * math.pi * k / 64) for k in range(65)))
    assert lift_curve(power(2), arc, 1).end == pytest.approx(1j)


def test_lift_errors():
    with pytest.raises(CriticalValueProximity):
        lift_curve(quadcantor(), segment(0, -3 + 1e-6j), math.sqrt(3))
    with pytest.raises(WindowEscape):
        lift_curve(power(2), segment(1, 20000), 1)
    with pytest.raises(ValueError):
        lift_curve(power(2), segment(1, 2), 5)


@pytest.mark.parametrize("m", CATALOG, ids=lambda m: m.token)
def test_projection_and_composition(m):
    rng = random.Random(7)
    for _ in range(5):
        z0 = complex(rng.uniform(-1, 1), rng.uniform(0.4, 1.2))
        c = polyline([z0, z0 + 0.3, z0 + 0.3 + 0.2j])
        x0 = preimages(m, c.start)[0]
        lift = lift_curve(m, c, x0)
        for v in lift.vertices:
            fv = evaluate(m, v)
            assert min(abs(fv - (a + t / 50 * (b - a))) for a, b in c.segments() for t in range(51)) < 0.01
        two = lift_curve(m, segment(c.vertices[1], c.vertices[2]),
                         lift_curve(m, segment(c.vertices[0], c.vertices[1]), x0).end)
        assert abs(two.end - lift.end) <= 1e-9
        back = lift_curve(m, curve_concat(c, curve_reverse(c)), x0)
        assert abs(back.end - x0) <= 1e-9
