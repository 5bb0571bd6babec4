import math

import pytest
from hypothesis import given, settings, strategies as st

from codingmaps.complex_geom import (Curve, CutConfig, GaussRational, circle_loop, close_up,
                                     crossing_word, curve_concat, curve_reverse, format_word,
                                     free_reduce, invert_word, parse_word, polyline, segment)
from codingmaps.errors import DegenerateCrossing, EndpointMismatch, PunctureProximity

CUTS = CutConfig((-3 + 0j, 6 + 0j))
fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(GaussRational, fracs, fracs)


@given(gauss, gauss, gauss)
def test_gauss_field_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b != 0:
        assert (a / b) * b == a
    assert (a * b).norm() == a.norm() * b.norm()


@given(gauss)
def test_gauss_text_round_trip(a):
    assert GaussRational.parse(str(a)) == a


@pytest.mark.parametrize("text,re,im", [
    ("1/2+1+i", 1.5, 1), ("-i/2", 0, -0.5), ("3i/2", 0, 1.5), ("½", 0.5, 0), ("−1/4+2", 1.75, 0),
])
def test_gauss_parse(text, re, im):
    z = GaussRational.parse(text)
    assert complex(z) == complex(re, im)


def test_gauss_parse_rejects_i_in_denominator():
    with pytest.raises(ValueError):
        GaussRational.parse("1/i")


def test_concat_and_reverse():
    c = curve_concat(segment(0, 1), segment(1, 1 + 1j))
    assert c.vertices == (0, 1, 1 + 1j)
    assert curve_reverse(polyline([0, 1, 2])).vertices == (2, 1, 0)
    with pytest.raises(EndpointMismatch):
        curve_concat(segment(0, 1), segment(2, 3))


def test_curve_text_round_trip():
    c = polyline([0, 1 + 0.1j, -2.5 + 1e-17j])
    assert Curve.from_text(c.to_text()) == c


def test_puncture_proximity():
    with pytest.raises(PunctureProximity):
        segment(-4, -2).check_punctures([-3 + 0j])


def test_small_circle_is_generator():
    loop = circle_loop(-3, 0.1, 0.0, 16)
    assert format_word(crossing_word(loop, CUTS)) == "B1⁺"
    assert format_word(crossing_word(curve_reverse(loop), CUTS)) == "B1⁻"


def test_rectangle_without_puncture_is_trivial():
    rect = polyline([1, 2, 2 + 1j, 1 + 1j, 1], closed=True)
    assert crossing_word(rect, CUTS) == ()


def test_figure_path_reads_both_generators():
    def spoke_loop(c):
        circ = circle_loop(c, 0.4, math.pi if c.real > 0 else 0.0, 16)
        return curve_concat(curve_concat(segment(0, circ.start), circ), segment(circ.start, 0))
    path = curve_concat(spoke_loop(-3 + 0j), spoke_loop(6 + 0j))
    assert format_word(crossing_word(path, CUTS)) == "B1⁺ B2⁺"
    # brute-force winding numbers agree with the crossing counts
    for p, want in ((-3, 1), (6, 1)):
        total = 0.0
        for a, b in path.segments():
            total += math.atan2(((b - p) / (a - p)).imag, ((b - p) / (a - p)).real)
        assert round(total / (2 * math.pi)) == want


def test_loop_times_inverse_reduces_to_empty():
    l = polyline([0, -2.5 + 1j, -3.5 - 0.5j, -2 - 1j, 0.5 - 0.2j])
    loop = close_up(curve_concat(l, curve_reverse(l)))
    assert crossing_word(loop, CUTS) == ()


def test_segment_on_ray_is_degenerate():
    bad = polyline([0, -3 - 1j, -3 - 2j, 0])
    with pytest.raises(DegenerateCrossing):
        crossing_word(bad, CUTS)


@settings(max_examples=40)
@given(st.integers(2, 6), st.floats(0.05, 0.9), st.floats(0, 2 * math.pi))
def test_crossing_word_invariant_under_subdivision(k, r, t0):
    loop = circle_loop(6 + 0j, r, t0, 12)
    assert crossing_word(loop.subdivide(k), CUTS) == crossing_word(loop, CUTS)


def test_word_helpers():
    w = parse_word("B1⁺ B2⁻ B2⁺ B1⁻")
    assert free_reduce(w) == ()
    assert invert_word(parse_word("B1⁺ B2⁻")) == parse_word("B2⁺ B1⁻")


def test_cut_config_validation():
    CutConfig((-3 + 0j, 6 + 0j)).validate(0j)
    with pytest.raises(ValueError):
        CutConfig((-3 + 0j, -3 - 1j)).validate()
