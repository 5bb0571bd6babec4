"""Finite graphs recognising when two codings land on the same Julia point.

Everything here is specialised to f(z) = z^2 - 3 with the two punctures -3
and 6. Homotopy classes of based loops are reduced in the finite quotient
<B1, B2 | B1^2, B2^2, (B1 B2)^4>, the dihedral group of order 8.

For radials r, r' an edge g -> h labelled (i, j) exists when the loop
l_i . F_{x_i}(h) . (l'_j)^-1 closes and has class g. An infinite path with
labels (w_k, w'_k) exists iff pi_r(w) = pi_r'(w').
"""
from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .coding_tree import Radial, SymbolSequence
from .complex_geom import (Curve, CutConfig, Word, crossing_word, curve_concat,
                           curve_reverse, free_reduce, segment)
from .errors import EmptyGraph, Inconclusive, NonClosedLift
from .rational_maps import MapModel, lift_curve, quadcantor

DEFAULT_SEED = 0xC0D1A6
LOOP_RADIUS = 0.4
CLOSE_TOL = 1e-6


# quotient group

@dataclass
class QuotientGroup:
    """Finite group given by a presentation, with a full multiplication table.

    Elements are numbered in shortlex order of their shortest words over
    the generators and their inverses; element 0 is the identity.
    """

    generators: tuple[str, ...]
    relations: tuple[Word, ...]
    words: list[Word] = field(default_factory=list)
    table: list[list[int]] = field(default_factory=list)
    inverses: list[int] = field(default_factory=list)
    _gen_perm: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_presentation(cls, generators: Sequence[str], relations: Iterable[Word]) -> QuotientGroup:
        from sympy.combinatorics.fp_groups import FpGroup
        from sympy.combinatorics.free_groups import free_group

        gens = tuple(generators)
        rels = tuple(tuple(r) for r in relations)
        F, *syms = free_group(" ".join(gens))
        sym = dict(zip(gens, syms))

        def to_free(word):
            out = F.identity
            for name, e in word:
                out = out * sym[name] ** e
            return out

        G = FpGroup(F, [to_free(r) for r in rels])
        ct = G.coset_enumeration([])
        ct.compress()
        ct.standardize()
        # columns of the coset table are g1, g1^-1, g2, g2^-1, ...
        letters = [(g, e) for g in gens for e in (1, -1)]
        col = {(str(a.array_form[0][0]), int(a.array_form[0][1])): k for k, a in enumerate(ct.A)}
        n = len(ct.table)
        act = {x: [ct.table[c][col[x]] for c in range(n)] for x in letters}

        # shortlex BFS from the trivial coset
        words: dict[int, Word] = {0: ()}
        frontier = [0]
        while frontier:
            nxt = []
            for c in frontier:
                for x in letters:
                    d = act[x][c]
                    if d not in words:
                        words[d] = words[c] + (x,)
                        nxt.append(d)
            frontier = nxt
        order = sorted(words, key=lambda c: (len(words[c]), [letters.index(x) for x in words[c]]))
        renum = {c: k for k, c in enumerate(order)}
        perm = {x: [renum[act[x][c]] for c in order] for x in letters}

        grp = cls(gens, rels)
        grp.words = [words[c] for c in order]
        grp._gen_perm = perm
        # right multiplication a*b: act on a by the letters of b
        grp.table = [[grp._apply(a, grp.words[b]) for b in range(n)] for a in range(n)]
        grp.inverses = [row.index(0) for row in grp.table]
        return grp

    def _apply(self, a: int, word: Word) -> int:
        for x in word:
            a = self._gen_perm[x][a]
        return a

    @property
    def order(self) -> int:
        return len(self.words)

    def element(self, word: Word) -> int:
        return self._apply(0, tuple(word))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def label(self, a: int) -> str:
        w = self.words[a]
        if not w:
            return "e"
        return "".join(n if e == 1 else f"{n}^-1" for n, e in w)

    def parse(self, text: str) -> int:
        """'e', 'B1B2', 'B2^-1B1' to an element index."""
        s = text.strip().replace(" ", "").replace("⁻¹", "^-1")
        if s in ("", "e", "1"):
            return 0
        word = []
        names = sorted(self.generators, key=len, reverse=True)
        k = 0
        while k < len(s):
            for g in names:
                if s.startswith(g, k):
                    k += len(g)
                    e = 1
                    if s.startswith("^-1", k):
                        e, k = -1, k + 3
                    word.append((g, e))
                    break
            else:
                raise ValueError(f"cannot parse group word {text!r}")
        return self.element(tuple(word))

    def check_axioms(self) -> None:
        n = self.order
        rng = range(n)
        for a in rng:
            if self.table[0][a] != a or self.table[a][0] != a:
                raise AssertionError("identity law fails")
            if self.table[a][self.inverses[a]] != 0 or self.table[self.inverses[a]][a] != 0:
                raise AssertionError("inverse law fails")
        for a in rng:
            for b in rng:
                ab = self.table[a][b]
                for c in rng:
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise AssertionError("associativity fails")
        for r in self.relations:
            if self.element(r) != 0:
                raise AssertionError(f"relation {r} is not trivial")


@dataclass(frozen=True)
class GroupElem:
    group: QuotientGroup = field(compare=False, hash=False)
    index: int

    def __mul__(self, other: GroupElem) -> GroupElem:
        return GroupElem(self.group, self.group.mul(self.index, other.index))

    def inverse(self) -> GroupElem:
        return GroupElem(self.group, self.group.inv(self.index))

    def __str__(self):
        return self.group.label(self.index)


def dihedral_group() -> QuotientGroup:
    a, b = ("B1", 1), ("B2", 1)
    return QuotientGroup.from_presentation(("B1", "B2"), [(a, a), (b, b), (a, b) * 4])


# loops and radials for z^2 - 3

CUTS = CutConfig((-3 + 0j, 6 + 0j))
CENTRES = {"B1": -3 + 0j, "B2": 6 + 0j}


def generator_loop(name: str, radius: float = LOOP_RADIUS) -> Curve:
    """Straight spoke from 0, ccw octagon round the puncture, spoke back."""
    c = CENTRES[name]
    base = -1.0 if c.real > 0 else 1.0  # side of the circle facing 0
    start = c + base * radius
    t0 = 0.0 if base > 0 else math.pi
    octagon = [c + radius * complex(math.cos(t0 + k * math.pi / 4), math.sin(t0 + k * math.pi / 4))
               for k in range(9)]
    octagon[0] = octagon[-1] = start
    return Curve((0j,) + tuple(octagon) + (0j,))


def word_loop(word: Word) -> Curve:
    c = Curve((0j,))
    for name, e in word:
        g = generator_loop(name)
        c = curve_concat(c, g if e == 1 else curve_reverse(g))
    return c


def quadcantor_radial(prefixes: tuple[Word, Word], name: str = "", m: MapModel | None = None) -> Radial:
    """Leg i is the loop of prefixes[i] followed by the segment to +-sqrt(3)."""
    m = m or quadcantor()
    ends = (math.sqrt(3), -math.sqrt(3))
    legs = tuple(curve_concat(word_loop(p), segment(0j, complex(e))) for p, e in zip(prefixes, ends))
    return Radial(m, 0j, legs, name)


B1, B2 = ("B1", 1), ("B2", 1)
B1i, B2i = ("B1", -1), ("B2", -1)

# r3 prefixes were selected by calibrate_r3 and are frozen here
RADIAL_PREFIXES: dict[str, tuple[Word, Word]] = {
    "r1": ((), ()),
    "r2": ((), (B1,)),
    "r3": ((), (B2,)),
}


def named_radial(name: str) -> Radial:
    if name not in RADIAL_PREFIXES:
        raise ValueError(f"unknown radial {name!r}; choose from {sorted(RADIAL_PREFIXES)}")
    return quadcantor_radial(RADIAL_PREFIXES[name], name)


# lifting and classification

def classify_lift(r: Radial, rp: Radial, loop: Curve | Word, i: int, j: int,
                  group: QuotientGroup) -> int:
    """Class of l_i . F_{x_i}(loop) . (l'_j)^-1 in the quotient group."""
    if not isinstance(loop, Curve):
        loop = word_loop(tuple(loop))
    li, lj = r.legs[i - 1], rp.legs[j - 1]
    lifted = lift_curve(r.map, loop, li.end, chord_tol=None)
    if abs(lifted.end - lj.end) > CLOSE_TOL:
        raise NonClosedLift(f"lift from x_{i} ends at {lifted.end:.6g}, not at x'_{j}")
    # snap the rounding gap so concatenation is exact
    lifted = Curve(lifted.vertices[:-1] + (lj.end,)) if len(lifted.vertices) > 1 else Curve((lj.end,))
    path = curve_concat(curve_concat(li, lifted), curve_reverse(lj))
    return group.element(crossing_word(path, CUTS))


def lift_table(r: Radial, rp: Radial, group: QuotientGroup,
               sources: Iterable[int] | None = None) -> dict[tuple[int, int, int], int]:
    """(h, i, j) -> class g for every closing lift of the loop h."""
    d = r.map.degree
    out = {}
    for h in (range(group.order) if sources is None else sources):
        loop = word_loop(group.words[h])
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                try:
                    out[(h, i, j)] = classify_lift(r, rp, loop, i, j, group)
                except NonClosedLift:
                    pass
    return out


Edge = tuple[int, int, int, int]  # (source, target, i, j)


@dataclass
class EqGraph:
    group: QuotientGroup
    vertices: list[int]
    edges: list[Edge]
    degree: int = 2
    name: str = ""

    def __post_init__(self):
        self._succ: dict[tuple[int, int, int], int] = {}
        pos = {v: k for k, v in enumerate(self.vertices)}
        self._pos = pos
        for s, t, i, j in self.edges:
            key = (pos[s], i, j)
            self._succ[key] = self._succ.get(key, 0) | (1 << pos[t])

    @property
    def full_mask(self) -> int:
        return (1 << len(self.vertices)) - 1

    def step(self, mask: int, a: int, b: int) -> int:
        """Vertices reached from the set `mask` along edges labelled (a, b)."""
        out = 0
        k = 0
        while mask:
            if mask & 1:
                out |= self._succ.get((k, a, b), 0)
            mask >>= 1
            k += 1
        return out

    def back(self, mask: int, a: int, b: int) -> int:
        """Vertices with an (a, b) edge into the set `mask`."""
        out = 0
        for k in range(len(self.vertices)):
            if self._succ.get((k, a, b), 0) & mask:
                out |= 1 << k
        return out

    def labelled_edges(self) -> list[tuple[str, str, int, int]]:
        g = self.group
        return sorted((g.label(s), g.label(t), i, j) for s, t, i, j in self.edges)

    def to_dot(self) -> str:
        g = self.group
        verts = sorted(self.vertices)
        lines = [f"digraph {self.name or 'eqgraph'} {{"]
        for v in verts:
            lines.append(f'  v{v} [label="{g.label(v)}"];')
        for s, t, i, j in sorted(self.edges):
            lines.append(f'  v{s} -> v{t} [label="{i}|{j}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def prune(vertices: Iterable[int], edges: Iterable[Edge]) -> tuple[list[int], list[Edge]]:
    V = set(vertices)
    E = [e for e in edges if e[0] in V and e[1] in V]
    while True:
        alive = {e[0] for e in E}
        if alive == V:
            return sorted(V), sorted(E)
        V &= alive
        E = [e for e in E if e[0] in V and e[1] in V]


def build_eq_graph(r: Radial, rp: Radial, group: QuotientGroup | None = None,
                   name: str = "") -> EqGraph:
    group = group or dihedral_group()
    table = lift_table(r, rp, group)
    edges = [(g, h, i, j) for (h, i, j), g in table.items()]
    V, E = prune(range(group.order), edges)
    if not V:
        raise EmptyGraph("pruning removed every vertex; the two codings never meet")
    return EqGraph(group, V, E, r.map.degree, name)


def quadcantor_graph(name: str, group: QuotientGroup | None = None) -> EqGraph:
    r = named_radial(name)
    return build_eq_graph(r, r, group, name)


# reference tables for the three radials, as "h <- (ij) g" rows

REFERENCE_ROWS: dict[str, dict[tuple[str, int, int], str]] = {
    "r1": {("e", 1, 1): "e", ("e", 2, 2): "e", ("B1", 1, 2): "e", ("B1", 2, 1): "e"},
    "r2": {("e", 1, 1): "e", ("e", 2, 2): "e", ("B1", 1, 2): "B1^-1", ("B1", 2, 1): "B1"},
    "r3": {("e", 1, 1): "e", ("e", 2, 2): "e",
           ("B1", 1, 2): "B2", ("B1", 2, 1): "B2^-1",
           ("B2", 1, 1): "e", ("B2", 2, 2): "B2^-1B1B2",
           ("B1B2", 1, 2): "B1B2", ("B1B2", 2, 1): "B2^-1",
           ("B2B1", 1, 2): "B2", ("B2B1", 2, 1): "B2^-1B1",
           ("B2B1B2", 1, 2): "B1B2", ("B2B1B2", 2, 1): "B2^-1B1"},
}


def matches_reference(r: Radial, name: str, group: QuotientGroup) -> bool:
    rows = REFERENCE_ROWS[name]
    sources = sorted({group.parse(h) for h, _, _ in rows})
    table = lift_table(r, r, group, sources)
    want = {(group.parse(h), i, j): group.parse(g) for (h, i, j), g in rows.items()}
    got = {k: v for k, v in table.items() if k[0] in sources}
    return got == want


def calibrate_r3(group: QuotientGroup | None = None, max_len: int = 2) -> list[tuple[Word, Word]]:
    """Leg prefix pairs whose lift table matches the r3 reference rows."""
    group = group or dihedral_group()
    letters = [B1, B1i, B2, B2i]
    words = [()]
    for n in range(1, max_len + 1):
        for w in itertools.product(letters, repeat=n):
            if free_reduce(w) == tuple(w):
                words.append(tuple(w))
    hits = []
    for p1 in words:
        for p2 in words:
            try:
                r = quadcantor_radial((p1, p2))
                if matches_reference(r, "r3", group):
                    hits.append((p1, p2))
            except ValueError:
                continue
    return hits


# deciding the relation

def _aligned(w: SymbolSequence, wp: SymbolSequence) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    L = max(len(w.prefix), len(wp.prefix))
    P = math.lcm(len(w.period), len(wp.period))
    seq = list(zip(w.take(L + P), wp.take(L + P)))
    pairs = [(int(a), int(b)) for a, b in seq]
    return pairs[:L], pairs[L:]


def relation_decide(graph: EqGraph, omega, omega_p) -> bool | None:
    """Whether some infinite path carries the labels (w_k, w'_k).

    Exact for eventually periodic words. Finite words give None when a path
    of that length exists (undecided beyond the given depth) and False when
    none does.
    """
    w = SymbolSequence.parse(omega) if isinstance(omega, str) else omega
    wp = SymbolSequence.parse(omega_p) if isinstance(omega_p, str) else omega_p
    w.check(graph.degree)
    wp.check(graph.degree)
    if not w.period or not wp.period:
        n = min(len(s.prefix) for s in (w, wp) if not s.period)
        mask = graph.full_mask
        for a, b in zip(w.take(n), wp.take(n)):
            mask = graph.step(mask, int(a), int(b))
            if not mask:
                return False
        return None
    pre, per = _aligned(w, wp)
    P = len(per)
    # greatest fixed point of S_t = back(S_{t+1}) around the periodic cycle
    S = [graph.full_mask] * P
    changed = True
    while changed:
        changed = False
        for t in reversed(range(P)):
            a, b = per[t]
            new = graph.back(S[(t + 1) % P], a, b) & S[t]
            if new != S[t]:
                S[t], changed = new, True
    mask = S[0]
    for a, b in reversed(pre):
        mask = graph.back(mask, a, b)
    return mask != 0


# multiplicity

@dataclass(frozen=True)
class MultiplicityReport:
    almost_sure: int
    max_observed: int
    frequency: float
    samples: int
    depth: int
    seed: int
    histogram: dict[int, int]
    certificates: tuple[str, ...] = ()

    def lines(self) -> list[str]:
        out = [f"almost_sure = {self.almost_sure}", f"max_observed = {self.max_observed}",
               f"modal_frequency = {self.frequency:.4f}", f"samples = {self.samples}",
               f"depth = {self.depth}", f"seed = {self.seed:#x}",
               "histogram = " + ", ".join(f"{k}:{v}" for k, v in sorted(self.histogram.items()))]
        out.append("singleton_certificates = " + (", ".join(self.certificates) or "none"))
        return out


def companions(graph: EqGraph, omega: Sequence[int], keep: int | None = None) -> set[tuple[int, ...]]:
    """Prefixes w'[:keep] of words w' that follow w for len(w) steps."""
    d = graph.degree
    keep = len(omega) // 2 if keep is None else keep
    frontier: dict[tuple[int, ...], int] = {(): graph.full_mask}
    for a in omega:
        nxt: dict[tuple[int, ...], int] = {}
        for word, mask in frontier.items():
            for b in range(1, d + 1):
                m = graph.step(mask, a, b)
                if m:
                    nxt[word + (b,)] = m
        frontier = nxt
    return {w[:keep] for w in frontier}


def offdiagonal_region(graph: EqGraph) -> int:
    """Vertices a path can occupy after it has used an off-diagonal label."""
    pos = graph._pos
    mask = 0
    for s, t, i, j in graph.edges:
        if i != j:
            mask |= 1 << pos[t]
    while True:
        grown = mask
        for s, t, i, j in graph.edges:
            if mask >> pos[s] & 1:
                grown |= 1 << pos[t]
        if grown == mask:
            return mask
        mask = grown


def kills_offdiagonal(graph: EqGraph, word: str) -> bool:
    mask = offdiagonal_region(graph)
    d = graph.degree
    for a in word:
        mask = 0 if not mask else _step_any(graph, mask, int(a), d)
    return mask == 0


def _step_any(graph: EqGraph, mask: int, a: int, d: int) -> int:
    out = 0
    for b in range(1, d + 1):
        out |= graph.step(mask, a, b)
    return out


def singleton_certificates(graph: EqGraph, max_len: int = 6) -> tuple[str, ...]:
    """Minimal words u that empty the off-diagonal region, up to max_len.

    If u occurs infinitely often in w, every path that ever leaves the
    diagonal dies, so the class of w is {w}. A word is minimal when no
    proper factor of it already empties the region.
    """
    if not offdiagonal_region(graph):
        return ()
    d = graph.degree
    found: list[str] = []
    for n in range(1, max_len + 1):
        for letters in itertools.product("123456789"[:d], repeat=n):
            u = "".join(letters)
            if any(k in u for k in found):
                continue
            if kills_offdiagonal(graph, u):
                found.append(u)
    return tuple(found)


def multiplicity_classify(graph: EqGraph, samples: int = 10_000, depth: int = 60,
                          seed: int = DEFAULT_SEED, min_frequency: float = 0.95) -> MultiplicityReport:
    rng = random.Random(seed)
    d = graph.degree
    counts: Counter[int] = Counter()
    for _ in range(samples):
        omega = [rng.randint(1, d) for _ in range(depth)]
        counts[len(companions(graph, omega))] += 1
    mode, freq = counts.most_common(1)[0]
    report = MultiplicityReport(mode, max(counts), freq / samples, samples, depth, seed,
                                dict(counts), singleton_certificates(graph))
    if report.frequency < min_frequency:
        raise Inconclusive(f"modal class size {mode} seen in only {report.frequency:.1%} of samples")
    return report


def random_related_pair(graph: EqGraph, rng: random.Random, max_steps: int = 8
                        ) -> tuple[SymbolSequence, SymbolSequence]:
    """Labels read along a random lasso-shaped walk: a related pair by construction.

    The walk runs a random number of steps; the period closes at a random
    earlier visit of the final vertex.
    """
    while True:
        n = rng.randint(1, max_steps)
        v = rng.choice(graph.vertices)
        visits, labels = [v], []
        for _ in range(n):
            s, t, i, j = rng.choice([e for e in graph.edges if e[0] == v])
            labels.append((i, j))
            visits.append(t)
            v = t
        earlier = [k for k in range(n) if visits[k] == v]
        if not earlier:
            continue
        p = rng.choice(earlier)
        pre, per = labels[:p], labels[p:]
        return (SymbolSequence("".join(str(a) for a, _ in pre), "".join(str(a) for a, _ in per)),
                SymbolSequence("".join(str(b) for _, b in pre), "".join(str(b) for _, b in per)))


def random_sequence(rng: random.Random, d: int = 2, max_pre: int = 3, max_per: int = 3) -> SymbolSequence:
    digits = "123456789"[:d]
    pre = "".join(rng.choice(digits) for _ in range(rng.randint(0, max_pre)))
    per = "".join(rng.choice(digits) for _ in range(rng.randint(1, max_per)))
    return SymbolSequence(pre, per)
