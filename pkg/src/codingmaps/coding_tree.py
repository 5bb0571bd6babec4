"""Radials, geometric coding trees and evaluation of the coding map.

For a radial with legs l_1..l_d the tree stores, for every word v and
symbol j, the curve E(v, j) running from x_v to x_{vj}: E(empty, j) = l_j and
E(iv, j) is the lift of E(v, j) through f starting at x_{iv}. Concatenating
E along a word gives l_w, and the coding map sends an infinite word to the
limit of x_w along its prefixes.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

from .complex_geom import Curve, EPS_PUNCT, curve_concat, segment
from .errors import AccuracyUnreachable, DomainError
from .rational_maps import INF, MapModel, evaluate, lift_curve, preimages

MAX_DEPTH = 64
STORE_DEPTH = 12
CLUSTER_TOL = 1e-7


@dataclass(frozen=True)
class Radial:
    map: MapModel
    basepoint: complex
    legs: tuple[Curve, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.legs) != self.map.degree:
            raise ValueError(f"need {self.map.degree} legs, got {len(self.legs)}")
        for k, leg in enumerate(self.legs, start=1):
            if abs(leg.start - self.basepoint) > 1e-12:
                raise ValueError(f"leg {k} does not start at the basepoint")
            fz = evaluate(self.map, leg.end)
            if fz is INF or abs(fz - self.basepoint) > 1e-9:
                raise ValueError(f"leg {k} does not end on a preimage of the basepoint")
            finite = [p for p in self.map.postcritical if p is not INF]
            leg.check_punctures(finite, EPS_PUNCT)

    @property
    def endpoints(self) -> tuple[complex, ...]:
        return tuple(leg.end for leg in self.legs)

    def is_proper(self) -> bool:
        ends = self.endpoints
        return all(abs(a - b) > 1e-9 for k, a in enumerate(ends) for b in ends[k + 1:])


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class SymbolSequence:
    """Eventually periodic word u v v v ...; v empty means a finite word."""

    prefix: str
    period: str = ""

    @classmethod
    def parse(cls, text: str) -> SymbolSequence:
        """'121' is finite, '12^' is (12)^inf, '1.2^' is 1 then 2^inf."""
        s = text.strip().replace(" ", "")
        if not s.endswith("^"):
            if "." in s:
                raise WordError(f"'.' needs a periodic tail in {text!r}")
            return cls(s, "")
        body = s[:-1]
        pre, _, per = body.rpartition(".") if "." in body else ("", "", body)
        if not per:
            raise WordError(f"empty periodic tail in {text!r}")
        return cls(pre, per)

    def take(self, n: int) -> str:
        if len(self.prefix) >= n or not self.period:
            return self.prefix[:n]
        rest = n - len(self.prefix)
        reps = -(-rest // len(self.period))
        return self.prefix + (self.period * reps)[:rest]

    def __str__(self):
        if not self.period:
            return self.prefix
        return (self.prefix + "." if self.prefix else "") + self.period + "^"

    def check(self, d: int) -> None:
        allowed = set("123456789"[:d])
        bad = set(self.prefix + self.period) - allowed
        if bad:
            raise WordError(f"symbols {sorted(bad)} outside 1..{d}")


@dataclass
class CodingTree:
    radial: Radial
    depth: int
    points: dict[str, complex] = field(default_factory=dict)
    edges: dict[tuple[str, int], Curve] = field(default_factory=dict)
    contraction: float = 0.0

    def x(self, w: str) -> complex:
        if w not in self.points:
            self._grow(w)
        return self.points[w]

    def curve(self, w: str) -> Curve:
        """l_w as the concatenation of E(w_1..w_{k-1}, w_k) pieces."""
        c = self.radial.legs[int(w[0]) - 1]
        for k in range(1, len(w)):
            c = curve_concat(c, self.edge(w[:k], int(w[k])))
        return c

    def edge(self, v: str, j: int) -> Curve:
        key = (v, j)
        if key not in self.edges:
            if not v:
                self.edges[key] = self.radial.legs[j - 1]
            else:
                start = self.x(v)
                try:
                    self.edges[key] = _lift(self.radial.map, self.edge(v[1:], j), start)
                except DomainError as exc:
                    raise type(exc)(f"word {v}{j}: {exc}") from exc
                self.points.setdefault(v + str(j), self.edges[key].end)
        return self.edges[key]

    def _grow(self, w: str) -> None:
        if len(w) == 1:
            self.points[w] = self.radial.legs[int(w) - 1].end
        else:
            self.points[w] = self.edge(w[:-1], int(w[-1])).end

    def words(self, k: int) -> list[str]:
        d = self.radial.map.degree
        out = [""]
        for _ in range(k):
            out = [w + str(s) for w in out for s in range(1, d + 1)]
        return out

    def forget_deep(self, keep: int = STORE_DEPTH) -> None:
        """Drop memoised curves deeper than keep to bound memory."""
        for key in [k for k in self.edges if len(k[0]) >= keep]:
            del self.edges[key]


def _lift(m: MapModel, c: Curve, x0: complex) -> Curve:
    return lift_curve(m, c, x0, chord_tol=None)


def extend_tree(radial: Radial, k: int) -> CodingTree:
    if k < 1:
        raise ValueError("depth must be at least 1")
    tree = CodingTree(radial, k)
    for level in range(1, k + 1):
        for w in tree.words(level):
            tree.x(w)
    tree.contraction = estimate_contraction(tree)
    return tree


def level_spread(tree: CodingTree, m: int) -> float:
    """max over w in W_m of diam{x_wu : u in W_1}."""
    d = tree.radial.map.degree
    best = 0.0
    for w in tree.words(m):
        pts = [tree.x(w + str(s)) for s in range(1, d + 1)]
        best = max(best, max(abs(a - b) for a in pts for b in pts))
    return best


def estimate_contraction(tree: CodingTree) -> float:
    """Smallest one-level shrink ratio of the spreads, discounted by 10%.

    Only the deeper half of the levels is sampled: the first lifts of long
    legs are not yet in the contracting regime.
    """
    lo = max(1, tree.depth // 2)
    spreads = [level_spread(tree, m) for m in range(lo - 1, tree.depth)]
    ratios = [a / b for a, b in zip(spreads, spreads[1:]) if b > 0 and a > 0]
    if not ratios:
        return 0.0
    return 0.9 * min(ratios)


def tail_constant(tree: CodingTree, c: float) -> float:
    """M with spread_m <= M c^-m on every computed level, at least the leg diameters."""
    M = max(_diameter(leg) for leg in tree.radial.legs)
    for m in range(tree.depth):
        M = max(M, level_spread(tree, m) * c ** m)
    return M


@dataclass(frozen=True)
class PiValue:
    point: complex
    bound: float
    depth: int


def pi_eval(tree_or_radial, omega, eps: float = 1e-9, max_depth: int = MAX_DEPTH,
            contraction: float | None = None) -> PiValue:
    """x_omega to within eps, with the geometric tail bound M c^-k/(1 - 1/c)."""
    tree = tree_or_radial if isinstance(tree_or_radial, CodingTree) else None
    if tree is None:
        tree = extend_tree(tree_or_radial, 8)
    if isinstance(omega, str):
        omega = SymbolSequence.parse(omega)
    omega.check(tree.radial.map.degree)
    c = contraction or tree.contraction
    if c <= 1:
        raise AccuracyUnreachable(f"contraction estimate {c:.3f} is not above 1")
    M = tail_constant(tree, c) / (1 - 1 / c)
    k = max(1, math.ceil(math.log(M / eps) / math.log(c))) if M > eps else 1
    if not omega.period:
        k = len(omega.prefix)
        return PiValue(tree.x(omega.prefix), M * c ** (-k), k)
    if k > max_depth:
        raise AccuracyUnreachable(f"accuracy {eps:g} needs depth {k} > {max_depth}")
    word = omega.take(k)
    return PiValue(tree.x(word), M * c ** (-k), k)


def _diameter(c: Curve) -> float:
    vs = c.vertices
    return max(abs(a - b) for a in vs for b in vs) if len(vs) > 1 else 0.0


def image_probe(tree_or_radial, k: int, tol: float = CLUSTER_TOL) -> list[int]:
    """Number of distinct x_w per level 1..k after clustering at tol."""
    tree = (tree_or_radial if isinstance(tree_or_radial, CodingTree)
            else extend_tree(tree_or_radial, k))
    counts = []
    for level in range(1, k + 1):
        reps: list[complex] = []
        for w in tree.words(level):
            z = tree.x(w)
            if not any(abs(z - r) <= tol for r in reps):
                reps.append(z)
        counts.append(len(reps))
    return counts


# catalog radials

def arc(center: complex, radius: float, t0: float, t1: float, n: int = 64) -> Curve:
    return Curve(tuple(center + radius * cmath.exp(1j * (t0 + (t1 - t0) * k / n))
                       for k in range(n + 1)))


def power_radial(m: MapModel, ns: Sequence[int] | None = None) -> Radial:
    """Legs from 1 clockwise along the unit circle to exp(-2 pi i n/d).

    With cover map exp(-2 pi i z) the lifted endpoints are n/d, so the radial
    has class (n_1, ..., n_d); the default is the canonical (0, 1, ..., d-1).
    """
    d = m.degree
    ns = list(range(d)) if ns is None else list(ns)
    legs = []
    for n in ns:
        if n == 0:
            legs.append(Curve((1 + 0j,)))
        else:
            legs.append(arc(0, 1.0, 0.0, -2 * math.pi * n / d, max(8, 32 * abs(n))))
    roots = preimages(m, 1 + 0j)
    # snap arc ends onto the exact roots to kill rounding
    legs = [leg if len(leg.vertices) == 1 else
            Curve(leg.vertices[:-1] + (min(roots, key=lambda r: abs(r - leg.end)),))
            for leg in legs]
    return Radial(m, 1 + 0j, tuple(legs), f"power:{d}")


def chebyshev_radial(m: MapModel) -> Radial:
    roots = sorted(preimages(m, 0j), key=lambda r: -r.real)
    legs = [segment(0j, complex(r.real, 0.0)) for r in roots]
    return Radial(m, 0j, tuple(legs), m.token)


def lattes_radial(m: MapModel) -> Radial:
    roots = sorted(preimages(m, -1 + 0j), key=lambda r: -r.real)
    legs = [Curve((-1 + 0j, 2j, complex(roots[0].real, 0.0))),
            Curve((-1 + 0j, 1j, complex(roots[1].real, 0.0)))]
    return Radial(m, -1 + 0j, tuple(legs), "lattes")
