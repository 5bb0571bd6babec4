"""End-to-end acceptance checks, one function per numbered criterion.

Each criterion returns a CriterionResult holding named sub-checks with the
measured numbers, so a failing run shows exactly which tolerance was missed.
Tolerances are fixed here and never relaxed at run time.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.ndimage import distance_transform_edt

from . import cod_space as cs
from . import coding_tree as ct
from . import eq_graph as eg
from . import lifted_ifs as li
from . import rational_maps as rm
from .complex_geom import (Curve, GaussRational, circle_loop, curve_concat, curve_reverse,
                           polyline, segment_distance)
from .errors import DomainError

SEED = 0xC0D1A6


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, name: str, passed, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} criterion {self.number}: {self.title}"

    def report(self) -> list[str]:
        out = [self.line()]
        for c in self.checks:
            out.append(f"    [{'ok' if c.passed else 'XX'}] {c.name}: {c.detail}")
        return out


def _guard(res: CriterionResult, name: str, fn: Callable[[], None]) -> None:
    """Run one sub-check; a domain error counts as a failed sub-check."""
    try:
        fn()
    except DomainError as exc:
        res.add(name, False, f"{exc.name}: {exc}")


# oracles

def chebyshev_hull_oracle(maps: list[tuple[Fraction, Fraction]]) -> tuple[Fraction, Fraction]:
    """Exact hull [m, M] of the attractor of x -> a_i x + b_i on the line.

    [m, M] is the unique solution of M = max_i max(a_i M + b_i, a_i m + b_i)
    and m = min_i min(a_i m + b_i, a_i M + b_i). A float value iteration picks
    the active branches, the linear system for them is solved exactly, and the
    exact solution is verified against both equations.
    """
    lo, hi = -1e3, 1e3
    for _ in range(200):
        imgs = [a * x + b for a, b in maps for x in (lo, hi)]
        lo, hi = min(imgs), max(imgs)
    fa = [(float(a), float(b)) for a, b in maps]

    def branch(target):
        best = None
        for k, (a, b) in enumerate(fa):
            for end, x in (("lo", lo), ("hi", hi)):
                v = a * x + b
                if best is None or abs(v - target) < best[0]:
                    best = (abs(v - target), k, end)
        return best[1], best[2]

    (ki, ei), (kj, ej) = branch(hi), branch(lo)
    # unknowns m, M: M = a_i * (M or m) + b_i ; m = a_j * (m or M) + b_j
    ai, bi = maps[ki]
    aj, bj = maps[kj]
    row1 = (-ai if ei == "lo" else Fraction(0), Fraction(1) - (ai if ei == "hi" else 0), bi)
    row2 = (Fraction(1) - (aj if ej == "lo" else 0), -aj if ej == "hi" else Fraction(0), bj)
    det = row1[0] * row2[1] - row1[1] * row2[0]
    m = (row1[2] * row2[1] - row1[1] * row2[2]) / det
    M = (row1[0] * row2[2] - row1[2] * row2[0]) / det
    imgs = [a * x + b for a, b in maps for x in (m, M)]
    if max(imgs) != M or min(imgs) != m:
        raise AssertionError("hull oracle failed its exact verification")
    return m, M


def deck_search_oracle(c1: cs.RadialClass, c2: cs.RadialClass, bound: int) -> bool:
    """Brute-force search for a deck element with translation part in a box."""
    fam = c1.family
    rng = range(-bound, bound + 1)
    if fam == "power":
        cands = (cs.DeckAction("power", 1, n) for n in rng)
    elif fam == "cheb":
        cands = (cs.DeckAction("cheb", a, n) for a in (1, -1) for n in rng)
    else:
        # prefilter on the first entry in exact small-integer complex arithmetic
        (al, B), (al2, B2) = c1.entries[0], c2.entries[0]
        if al != al2:
            return False
        mult = complex(cs.lattes_multiplier(al))
        cands = (cs.DeckAction("lattes", a, GaussRational(x, y))
                 for a in cs.UNITS for x in rng for y in rng
                 if complex(a) * complex(B) + mult * complex(x, y) == complex(B2))
    for t in cands:
        if cs.deck_act(t, c1) == c2:
            return True
    return False


def _edt_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Hausdorff distance in pixels between two masks on the same frame."""
    da = distance_transform_edt(~a)
    db = distance_transform_edt(~b)
    return float(max(da[b].max(initial=0), db[a].max(initial=0)))


def _collar_ok(bitmap: np.ndarray, image: np.ndarray) -> tuple[bool, int]:
    """All pixels where image and bitmap differ lie within 1 px of the boundary."""
    diff = bitmap ^ image
    pad = np.pad(bitmap, 1)
    ny, nx = bitmap.shape
    shifts = [pad[1 + dy:1 + dy + ny, 1 + dx:1 + dx + nx]
              for dy in (-1, 0, 1) for dx in (-1, 0, 1)]
    if bitmap.shape[0] == 1:
        shifts = [pad[1:2, 1 + dx:1 + dx + nx] for dx in (-1, 0, 1)]
    allset = np.logical_and.reduce(shifts)
    noneset = ~np.logical_or.reduce(shifts)
    interior = allset | noneset
    bad = int((diff & interior).sum())
    return bad == 0, int(diff.sum())


def _power_raster_pixels(r: li.TileRaster) -> set[int]:
    ix, _ = r.set_pixels()
    return set(int(v) for v in ix)


# criteria

def criterion_1() -> CriterionResult:
    res = CriterionResult(1, "Power(2) interval tiles [0, n]")
    R = 512
    for n in (1, 2, 3):
        c = cs.RadialClass.power(2, (0, n))
        ifs = li.lift_radial_class(c)

        def body(n=n, c=c, ifs=ifs):
            r = li.attractor_raster(ifs, R)
            got = _power_raster_pixels(r)
            want = set(range(0, n * R))
            sym = len(got ^ want)
            res.add(f"(0,{n}) raster is [0,{n}]", sym <= 2, f"symmetric difference {sym} px (≤ 2)")
            m = li.measure_estimate(r).value
            res.add(f"(0,{n}) measure", abs(m - n) <= 0.01 * n, f"{m:.6f} vs {n} ± 1%")
            mu = li.multiplicity_estimate(ifs, R)
            res.add(f"(0,{n}) multiplicity", mu.n == n and mu.gap <= 0.05,
                    f"n = {mu.n}, gap {mu.gap:.4f} (≤ 0.05)")
            tr = li.tiling_check(ifs, (0, 4 * n), R, raster=r)
            res.add(f"(0,{n}) tiling on [0,{4 * n}]", tr.coverage >= 0.999 and tr.overlap <= 0.005,
                    f"coverage {tr.coverage:.5f} (≥ 0.999), overlap {tr.overlap:.5f} (≤ 0.005)")
        _guard(res, f"(0,{n})", body)
    return res


def criterion_2() -> CriterionResult:
    res = CriterionResult(2, "Kenyon criterion for Power(3)")

    def body():
        c = cs.RadialClass.power(3, (0, 1, 2))
        ifs = li.lift_radial_class(c)
        R = 512
        r = li.attractor_raster(ifs, R)
        exact = _power_raster_pixels(r) == set(range(R))
        m = li.measure_estimate(r).value
        cf = li.closed_form_measure(c)
        res.add("(0,1,2) raster is [0,1] exactly", exact, f"{r.count()} px")
        res.add("(0,1,2) measure 1", cf == 1 and m == 1.0, f"closed form {cf}, estimate {m}")

        c = cs.RadialClass.power(3, (0, 1, 5))
        ifs = li.lift_radial_class(c)
        cf = li.closed_form_measure(c)
        m = li.measure_estimate(li.attractor_raster(ifs, R)).value
        res.add("(0,1,5) closed form 1, estimate ± 3%", cf == 1 and abs(m - 1) <= 0.03,
                f"closed form {cf}, estimate {m:.5f}")

        c = cs.RadialClass.power(3, (0, 1, 3))
        ifs = li.lift_radial_class(c)
        cf = li.closed_form_measure(c)
        m512 = li.measure_estimate(li.attractor_raster(ifs, 512)).value
        m2048 = li.measure_estimate(li.attractor_raster(ifs, 2048)).value
        res.add("(0,1,3) closed form 0, vanishing trend", cf == 0 and m2048 <= 0.5 * m512,
                f"closed form {cf}, estimate {m512:.5f} @512, {m2048:.5f} @2048")
    _guard(res, "kenyon", body)
    return res


CHEB_CLASSES = [
    ((1, 0), (1, 1)), ((1, -1), (1, 1)), ((1, 2), (1, 0)),
    ((-1, 0), (-1, 1)), ((-1, 0), (-1, 3)), ((-1, 1), (-1, -2)),
    ((1, 0), (-1, 1)), ((1, 1), (-1, 0)), ((-1, 2), (1, 0)), ((1, 2), (-1, -1)),
]


def criterion_3() -> CriterionResult:
    res = CriterionResult(3, "Chebyshev intervals")
    R = 512
    for pairs in CHEB_CLASSES:
        c = cs.RadialClass.cheb(pairs)
        ifs = li.lift_radial_class(c)

        def body(c=c, ifs=ifs):
            lo, hi = li.chebyshev_interval(c)
            maps = [(Fraction(m.a.re), Fraction(m.b.re)) for m in ifs.maps]
            olo, ohi = chebyshev_hull_oracle(maps)
            r = li.attractor_raster(ifs, R)
            ix = sorted(_power_raster_pixels(r))
            rlo, rhi = Fraction(ix[0], R), Fraction(ix[-1] + 1, R)
            px = max(abs(rlo - lo), abs(rhi - hi)) * R
            cf = li.closed_form_measure(c)
            ok = (lo, hi) == (olo, ohi) and cf == ohi - olo and px <= 1
            res.add(f"class {c}", ok,
                    f"closed form [{lo}, {hi}], oracle [{olo}, {ohi}], raster ends off by {float(px):.2f} px,"
                    f" measure {cf}")
        _guard(res, f"class {c}", body)

    def canon():
        c = cs.RadialClass.parse("cheb:2", "1/4,-1/4+1")
        mu = li.multiplicity_estimate(li.lift_radial_class(c), R)
        res.add("canonical class multiplicity", mu.n == 1, f"n = {mu.n}, gap {mu.gap:.4f}")
    _guard(res, "canonical class", canon)
    cases = {("+", "+") if a[0] == b[0] == 1 else ("-", "-") if a[0] == b[0] == -1 else ("mixed",)
             for a, b in CHEB_CLASSES}
    res.add("all three sign cases covered", len(cases) == 3, f"{sorted(cases)}")
    return res


LATTES_EXEMPLARS = {
    "equal alpha (twindragon)": "1/2,1/2+1+i",
    "{1,i} (Lévy)": "i/2,1/2+1+i",
    "{-1,-i}": "-1/2,-i/2+1+i",
    "mixed": "1/2,-1/2+1+i",
}


def criterion_4() -> CriterionResult:
    res = CriterionResult(4, "Lattès table, triangle and Lévy tiles")
    R = 1024
    cache: dict[str, float] = {}

    def triangle():
        c = cs.RadialClass.parse("lattes", "-i/2+1+i,-1/2+2")
        r = li.attractor_raster(li.lift_radial_class(c), R)
        ny, nx = r.bitmap.shape
        xs = (np.arange(nx) + r.x0 + 0.5) / R
        ys = (np.arange(ny) + r.y0 + 0.5) / R
        X, Y = np.meshgrid(xs, ys)
        tri = (Y >= 0) & (Y <= X) & (Y <= 2 - X)
        h = _edt_hausdorff(r.bitmap, tri)
        m = li.measure_estimate(r).value
        res.add("triangle shape", h <= 2, f"Hausdorff {h:.2f} px (≤ 2)")
        res.add("triangle area", abs(m - 1) <= 0.02, f"{m:.5f} vs 1 ± 2%")
    _guard(res, "triangle", triangle)

    def levy():
        c = cs.RadialClass.parse("lattes", LATTES_EXEMPLARS["{1,i} (Lévy)"])
        ifs = li.lift_radial_class(c)
        cf = li.closed_form_measure(c)
        m = li.measure_estimate(li.attractor_raster(ifs, R)).value
        cache["{1,i} (Lévy)"] = m
        res.add("Lévy closed form", cf == 1, f"{cf}")
        res.add("Lévy measure at 1024 px", abs(m - 1) <= 0.05, f"{m:.5f} vs 1 ± 5%")
        tr = li.tiling_check(ifs, (0j, 4 + 4j), 512)
        res.add("Lévy tiling on [0,4]^2 at 512 px", tr.coverage >= 0.99 and tr.overlap <= 0.02,
                f"coverage {tr.coverage:.4f} (≥ 0.99), overlap {tr.overlap:.4f} (≤ 0.02)")
    _guard(res, "Lévy", levy)

    for case, text in LATTES_EXEMPLARS.items():
        def body(case=case, text=text):
            c = cs.RadialClass.parse("lattes", text)
            cf = li.closed_form_measure(c)
            m = cache.get(case)
            if m is None:
                m = li.measure_estimate(li.attractor_raster(li.lift_radial_class(c), R)).value
            res.add(f"table case {case}", abs(m - float(cf)) <= 0.05 * float(cf),
                    f"class {text}: closed form {cf}, raster {m:.4f} (± 5%)")
        _guard(res, f"table case {case}", body)
    return res


REFERENCE_GRAPHS = {
    "r1": ({"e"}, {("e", "e", 1, 1), ("e", "e", 2, 2)}),
    "r2": ({"e", "B1"}, {("e", "e", 1, 1), ("e", "e", 2, 2), ("B1", "B1", 1, 2), ("B1", "B1", 2, 1)}),
    "r3": ({"e", "B2", "B1B2", "B2B1", "B2B1B2"},
           {("e", "e", 1, 1), ("e", "e", 2, 2), ("e", "B2", 1, 1), ("B2", "B2B1", 1, 2),
            ("B2", "B1B2", 2, 1), ("B2B1", "B2B1", 2, 1), ("B1B2", "B1B2", 1, 2),
            ("B2B1", "B2B1B2", 2, 1), ("B1B2", "B2B1B2", 1, 2), ("B2B1B2", "B2", 2, 2)}),
}


def criterion_5() -> CriterionResult:
    res = CriterionResult(5, "Finite graphs for r1, r2, r3")
    G = eg.dihedral_group()
    for name, (V, E) in REFERENCE_GRAPHS.items():
        def body(name=name, V=V, E=E):
            g = eg.quadcantor_graph(name, G)
            gv = {G.label(v) for v in g.vertices}
            ge = set(g.labelled_edges())
            res.add(f"{name} graph", gv == V and ge == E,
                    f"{len(gv)} vertices, {len(ge)} edges; missing {sorted(E - ge)}, extra {sorted(ge - E)}")
        _guard(res, name, body)
    return res


def criterion_6() -> CriterionResult:
    res = CriterionResult(6, "Multiplicities from the graphs")
    G = eg.dihedral_group()
    want = {"r1": (1, 1), "r2": (2, 2), "r3": (1, 3)}
    for name, (a, mx) in want.items():
        def body(name=name, a=a, mx=mx):
            rep = eg.multiplicity_classify(eg.quadcantor_graph(name, G), 10_000, 60, SEED)
            ok = rep.almost_sure == a and (rep.max_observed == mx if name != "r3" else rep.max_observed <= mx)
            if name == "r3":
                ok = ok and "12121" in rep.certificates
            res.add(f"{name}", ok, f"almost sure {rep.almost_sure} ({rep.frequency:.2%}), max "
                                   f"{rep.max_observed}, certificates {', '.join(rep.certificates) or 'none'}")
        _guard(res, name, body)
    return res


def criterion_7() -> CriterionResult:
    res = CriterionResult(7, "Graph verdicts agree with coding-map distances")
    G = eg.dihedral_group()
    rng = random.Random(SEED)
    for name in ("r1", "r2", "r3"):
        def body(name=name):
            r = eg.named_radial(name)
            tree = ct.extend_tree(r, 8)
            g = eg.build_eq_graph(r, r, G, name)
            pairs = [eg.random_related_pair(g, rng) for _ in range(25)]
            pairs += [(eg.random_sequence(rng), eg.random_sequence(rng)) for _ in range(25)]
            bad = gap = 0
            eq_max, ne_min, n_eq = 0.0, math.inf, 0
            for w, wp in pairs:
                verdict = eg.relation_decide(g, w, wp)
                dist = abs(ct.pi_eval(tree, w, 1e-9).point - ct.pi_eval(tree, wp, 1e-9).point)
                if 1e-7 < dist < 1e-4:
                    gap += 1
                if verdict:
                    n_eq += 1
                    eq_max = max(eq_max, dist)
                    bad += dist > 1e-7
                else:
                    ne_min = min(ne_min, dist)
                    bad += dist < 1e-4
            res.add(name, bad == 0 and gap == 0,
                    f"50 pairs ({n_eq} related): {bad} disagreements, {gap} in the gap,"
                    f" max related distance {eq_max:.1e}, min unrelated distance {ne_min:.1e}")
        _guard(res, name, body)
    return res


def criterion_8() -> CriterionResult:
    res = CriterionResult(8, "Growth-rate surjectivity probe")

    def body():
        half = li.lift_radial_class(cs.RadialClass.parse("power:2", "0,1/2"))
        counts, _ = li.growth_rate_exact(half, 16)
        res.add("(0,1/2) gives 2^k to k = 16", counts == [2 ** k for k in range(1, 17)], f"{counts[-3:]}")
        zero = li.lift_radial_class(cs.RadialClass.parse("power:2", "0,0"))
        counts, _ = li.growth_rate_exact(zero, 16)
        res.add("(0,0) gives 1", counts == [1] * 16, f"{sorted(set(counts))}")
        one = li.lift_radial_class(cs.RadialClass.parse("power:2", "0,1"))
        counts, _ = li.growth_rate_exact(one, 16)
        mu = li.multiplicity_estimate(one, 512)
        res.add("(0,1) gives 2^k with multiplicity 2",
                counts == [2 ** k for k in range(1, 17)] and mu.n == 2,
                f"last count {counts[-1]}, multiplicity {mu.n}")
    _guard(res, "growth", body)
    return res


def random_class(family: str, rng: random.Random, span: int = 4) -> cs.RadialClass:
    """Random non-degenerate class with small entries."""
    while True:
        if family.startswith("power"):
            d = int(family.partition(":")[2] or 2)
            c = cs.RadialClass.power(d, [rng.randint(-span, span) for _ in range(d)])
        elif family == "cheb":
            c = cs.RadialClass.cheb([(rng.choice((1, -1)), rng.randint(-span, span)) for _ in range(2)])
        else:
            c = cs.RadialClass.lattes([(rng.choice(cs.UNITS), _even(rng, span)) for _ in range(2)])
        if not cs.is_degenerate(c):
            return c


def _even(rng: random.Random, span: int) -> GaussRational:
    """Random element of (1+i)Z[i]."""
    return GaussRational(1, 1) * GaussRational(rng.randint(-span, span), rng.randint(-span, span))


def random_deck(family: str, rng: random.Random, span: int = 3) -> cs.DeckAction:
    if family.startswith("power"):
        return cs.DeckAction("power", 1, rng.randint(-span, span))
    if family == "cheb":
        return cs.DeckAction("cheb", rng.choice((1, -1)), rng.randint(-span, span))
    return cs.DeckAction("lattes", rng.choice(cs.UNITS),
                         GaussRational(rng.randint(-span, span), rng.randint(-span, span)))


def _search_bound(c1: cs.RadialClass, c2: cs.RadialClass) -> int:
    """Translation size any deck solution must respect, from the first entries."""
    if c1.family == "power":
        return abs(c2.entries[0] - c1.entries[0])
    if c1.family == "cheb":
        return abs(c2.entries[0][1]) + abs(c1.entries[0][1])
    (a1, B1), (a2, B2) = c1.entries[0], c2.entries[0]
    # |c(alpha)| >= sqrt 2, so |b| <= (|B1| + |B2|)/sqrt 2
    return int(math.ceil((math.sqrt(B1.norm()) + math.sqrt(B2.norm())) / math.sqrt(2))) + 1


def criterion_9() -> CriterionResult:
    res = CriterionResult(9, "Deck-action arithmetic")
    rng = random.Random(SEED)
    families = ("power:2", "power:3", "cheb", "lattes")
    for fam in families:
        def body(fam=fam):
            law = orbit = 0
            for _ in range(100):
                c = random_class(fam, rng)
                t, s = random_deck(fam, rng), random_deck(fam, rng)
                law += cs.deck_act(t.compose(s), c) != cs.deck_act(t, cs.deck_act(s, c))
                law += cs.deck_act(t.inverse(), cs.deck_act(t, c)) != c
                k = cs.canonical_form(c)
                orbit += cs.canonical_form(cs.deck_act(t, c)) != k or cs.canonical_form(k) != k
            res.add(f"{fam} action laws", law == 0, f"{law} violations in 100 samples")
            res.add(f"{fam} canonical forms", orbit == 0, f"{orbit} violations in 100 orbits")
            wrong = n_eq = 0
            for k in range(200):
                c1 = random_class(fam, rng)
                c2 = cs.deck_act(random_deck(fam, rng), c1) if k % 2 == 0 else random_class(fam, rng)
                truth = deck_search_oracle(c1, c2, _search_bound(c1, c2))
                n_eq += truth
                wrong += cs.cod_equal(c1, c2) != truth
            res.add(f"{fam} cod_equal vs deck search", wrong == 0,
                    f"{wrong} mismatches in 200 pairs ({n_eq} equal)")
        _guard(res, fam, body)

    def scaling():
        bad = 0
        for _ in range(100):
            c = random_class("power:2", rng, 20)
            m, k = rng.randint(0, 1), rng.randint(1, 9)
            bad += li.closed_form_measure(cs.power_monoid_act(m, k, c)) != k * li.closed_form_measure(c)
        res.add("Power(2) multiplicity scaling", bad == 0, f"{bad} violations in 100 samples")
    _guard(res, "scaling", scaling)
    return res


def catalog_radials() -> dict[str, ct.Radial]:
    return {
        "power:2": ct.power_radial(rm.power(2)),
        "power:3": ct.power_radial(rm.power(3)),
        "cheb:2": ct.chebyshev_radial(rm.chebyshev(2)),
        "lattes": ct.lattes_radial(rm.lattes()),
        "quadcantor": eg.named_radial("r1"),
    }


# word lengths per map for the concatenation identity; the Lattès tree leaves
# the radius-100 window below depth 4, Chebyshev lifts meet the critical value
CONCAT_DEPTH = {"power:2": 8, "power:3": 6, "cheb:2": 5, "lattes": 3, "quadcantor": 8}


def lift_power(m: rm.MapModel, curve: Curve, word: str, tree: ct.CodingTree) -> Curve:
    """F_{x_u}(curve): lift along f^|u| so that the result starts at x_u."""
    for k in range(len(word) - 1, -1, -1):
        curve = rm.lift_curve(m, curve, tree.x(word[k:]), chord_tol=None)
    return curve


def _probe_curve(m: rm.MapModel, rng: random.Random) -> Curve:
    """Short random polyline kept away from critical values and punctures."""
    bad = [p for p in m.postcritical if p is not rm.INF] + list(m.critical_values)
    while True:
        z0 = complex(rng.uniform(-1.5, 1.5), rng.uniform(0.3, 1.5))
        pts = [z0] + [z0 + complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)) for _ in range(3)]
        c = polyline(pts)
        if all(min(abs(p - q) for q in c.subdivide(20).vertices) > 0.05 for p in bad):
            return c


def criterion_10() -> CriterionResult:
    res = CriterionResult(10, "Lift machinery invariants")
    rng = random.Random(SEED)
    radials = catalog_radials()
    for name, r in radials.items():
        m = r.map

        def body(name=name, r=r, m=m):
            proj = 0.0
            mono = 0.0
            for _ in range(5):
                c = _probe_curve(m, rng)
                x0 = rm.preimages(m, c.start)[rng.randrange(m.degree)]
                lift = rm.lift_curve(m, c, x0)
                for v in lift.vertices:
                    fv = rm.evaluate(m, v)
                    proj = max(proj, min(segment_distance(fv, a, b) for a, b in c.segments()))
                loop = curve_concat(c, curve_reverse(c))
                back = rm.lift_curve(m, loop, x0)
                mono = max(mono, abs(back.end - back.start))
                # a small circle enclosing no critical value is nullhomotopic
                circ = circle_loop(c.start + 0.1, 0.1, math.pi, 32)
                if min(abs(circ.start + 0.1 - v) for v in m.critical_values) > 0.3:
                    back = rm.lift_curve(m, circ, x0)
                    mono = max(mono, abs(back.end - back.start))
            res.add(f"{name} projection identity", proj <= 1e-8, f"max |f(lift) - l| = {proj:.1e}")
            res.add(f"{name} nullhomotopic loops close", mono <= 1e-9, f"max gap {mono:.1e}")

            tree = ct.extend_tree(r, CONCAT_DEPTH[name])
            worst = 0.0
            depth = CONCAT_DEPTH[name]
            for _ in range(20):
                lu = rng.randint(1, min(4, depth - 1))
                lw = rng.randint(1, min(4, depth - lu))
                u = "".join(str(rng.randint(1, m.degree)) for _ in range(lu))
                w = "".join(str(rng.randint(1, m.degree)) for _ in range(lw))
                # the subdivided curve takes different continuation steps than the tree
                path = lift_power(m, tree.curve(w).subdivide(3), u, tree)
                worst = max(worst, abs(path.end - tree.x(u + w)))
            res.add(f"{name} concatenation identity", worst <= 1e-9,
                    f"max |end - x_uw| = {worst:.1e} (words to length {min(4, depth - 1)})")
        _guard(res, name, body)

    for fam, text in (("power:2", "0,1"), ("power:3", "0,1/3,2/3"), ("cheb:2", "1/4,-1/4+1"),
                      ("lattes", "-i/2+1+i,-1/2+2"), ("lattes", "1/2,1/2+1+i")):
        def hut(fam=fam, text=text):
            ifs = li.lift_radial_class(cs.RadialClass.parse(fam, text))
            r = li.attractor_raster(ifs, 256)
            ok, ndiff = _collar_ok(r.bitmap, li.hutchinson_image(r, ifs))
            res.add(f"{fam} ({text}) Hutchinson self-similarity", ok,
                    f"{ndiff} differing px, all in the 1-px collar" if ok else f"{ndiff} differing px")
        _guard(res, f"Hutchinson {fam}", hut)
    return res


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}


def run_criterion(n: int) -> CriterionResult:
    t = time.perf_counter()
    res = CRITERIA[n]()
    res.seconds = time.perf_counter() - t
    return res
