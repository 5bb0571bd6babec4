"""Radial classes, deck actions and equality of coding maps.

A radial class is the tuple of lifted leg endpoints on the Euclidean cover.
Each entry pins down one affine contraction of the lifted IFS:

  power:d   entry n/d       ->  z/d + n/d       (stored as the integer n)
  cheb:2    entry eps/4 + n ->  eps*z/2 + n     (stored as (eps, n))
  lattes    entry alpha/2+B ->  (1-i)*alpha*z/2 + B, B in (1+i)Z[i]

Deck transformations conjugate the contractions, which gives an exact
affine action on classes. Two classes define the same coding map exactly
when a deck element carries one to the other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .complex_geom import GaussRational
from .errors import DegenerateClass, FamilyMismatch, InvalidClassEntry, UnsupportedFamily

G = GaussRational
UNITS = (G(1), G(0, 1), G(-1), G(0, -1))
ONE_MINUS_I = G(1, -1)


def _split_top(text: str) -> list[str]:
    return [t.strip() for t in text.replace(";", ",").split(",") if t.strip()]


def _is_even_gaussian(z: GaussRational) -> bool:
    """z in (1+i)Z[i]."""
    return z.is_gaussian_integer() and (z.re + z.im) % 2 == 0


def lattes_multiplier(alpha: GaussRational) -> GaussRational:
    """c(alpha) = 2 - (1-i)alpha, the translation factor of the deck action."""
    return G(2) - ONE_MINUS_I * alpha


@dataclass(frozen=True)
class RadialClass:
    family: str
    degree: int
    entries: tuple

    @classmethod
    def power(cls, d: int, ns) -> RadialClass:
        ns = tuple(int(n) for n in ns)
        if len(ns) != d:
            raise InvalidClassEntry(f"power:{d} needs {d} entries, got {len(ns)}")
        return cls("power", d, ns)

    @classmethod
    def cheb(cls, pairs) -> RadialClass:
        out = []
        for k, (eps, n) in enumerate(pairs):
            if eps not in (1, -1) or int(n) != n:
                raise InvalidClassEntry(f"entry {k + 1}: ({eps}, {n}) is not in {{±1}}×Z")
            out.append((int(eps), int(n)))
        if len(out) != 2:
            raise InvalidClassEntry("cheb:2 needs 2 entries")
        return cls("cheb", 2, tuple(out))

    @classmethod
    def lattes(cls, pairs) -> RadialClass:
        out = []
        for k, (alpha, B) in enumerate(pairs):
            alpha, B = G.coerce(alpha), G.coerce(B)
            if alpha not in UNITS:
                raise InvalidClassEntry(f"entry {k + 1}: alpha = {alpha} is not a unit")
            if not _is_even_gaussian(B):
                raise InvalidClassEntry(f"entry {k + 1}: B = {B} is not in (1+i)Z[i]")
            out.append((alpha, B))
        if len(out) != 2:
            raise InvalidClassEntry("lattes needs 2 entries")
        return cls("lattes", 2, tuple(out))

    @classmethod
    def parse(cls, family: str, text: str) -> RadialClass:
        """Parse cover coordinates of the lifted endpoints, comma separated."""
        family = family.strip().lower()
        name, _, arg = family.partition(":")
        terms = _split_top(text)
        vals = []
        for k, t in enumerate(terms):
            try:
                vals.append(G.parse(t))
            except ValueError as exc:
                raise InvalidClassEntry(f"entry {k + 1}: cannot parse {t!r}") from exc
        if name == "power":
            d = int(arg or 2)
            ns = []
            for k, v in enumerate(vals):
                n = v * d
                if v.im != 0 or not n.is_gaussian_integer():
                    raise InvalidClassEntry(f"entry {k + 1}: {v} is not in (1/{d})Z")
                ns.append(int(n.re))
            return cls.power(d, ns)
        if name in ("cheb", "chebyshev"):
            if arg not in ("", "2"):
                raise UnsupportedFamily("radial classes are tabulated for cheb:2 only")
            pairs = []
            for k, v in enumerate(vals):
                if v.im != 0:
                    raise InvalidClassEntry(f"entry {k + 1}: {v} is not real")
                for eps in (1, -1):
                    n = v.re - Fraction(eps, 4)
                    if n.denominator == 1:
                        pairs.append((eps, int(n)))
                        break
                else:
                    raise InvalidClassEntry(f"entry {k + 1}: {v} is not in ±1/4+Z")
            return cls.cheb(pairs)
        if name == "lattes":
            pairs = []
            for k, v in enumerate(vals):
                for alpha in UNITS:
                    B = v - alpha / 2
                    if _is_even_gaussian(B):
                        pairs.append((alpha, B))
                        break
                else:
                    raise InvalidClassEntry(f"entry {k + 1}: {v} is not in alpha/2+(1+i)Z[i]")
            return cls.lattes(pairs)
        raise UnsupportedFamily(f"no radial classes for family {family!r}")

    @property
    def token(self) -> str:
        return self.family if self.family == "lattes" else f"{self.family}:{self.degree}"

    def cover_points(self) -> tuple[GaussRational, ...]:
        if self.family == "power":
            return tuple(G(Fraction(n, self.degree)) for n in self.entries)
        if self.family == "cheb":
            return tuple(G(Fraction(e, 4) + n) for e, n in self.entries)
        return tuple(alpha / 2 + B for alpha, B in self.entries)

    def __str__(self):
        return ",".join(str(p) for p in self.cover_points())


@dataclass(frozen=True)
class DeckAction:
    """Deck transformation: power z+n, cheb a*z+2n, lattes a*z+2b."""

    family: str
    a: object = 1
    n: object = 0

    def __post_init__(self):
        if self.family == "lattes":
            object.__setattr__(self, "a", G.coerce(self.a))
            object.__setattr__(self, "n", G.coerce(self.n))
            if self.a not in UNITS or not self.n.is_gaussian_integer():
                raise ValueError("lattes deck elements need a unit a and b in Z[i]")
        elif self.family == "cheb":
            if self.a not in (1, -1):
                raise ValueError("cheb deck elements need a = ±1")
        elif self.family == "power":
            if self.a != 1:
                raise ValueError("power deck elements are translations")
        else:
            raise UnsupportedFamily(self.family)

    def __call__(self, z):
        shift = self.n if self.family == "power" else 2 * self.n
        return self.a * z + shift

    def compose(self, other: DeckAction) -> DeckAction:
        """self after other."""
        _check(self.family, other.family)
        if self.family == "power":
            return DeckAction("power", 1, self.n + other.n)
        return DeckAction(self.family, self.a * other.a, self.a * other.n + self.n)

    def inverse(self) -> DeckAction:
        if self.family == "power":
            return DeckAction("power", 1, -self.n)
        ainv = 1 / self.a if self.family == "lattes" else self.a
        return DeckAction(self.family, ainv, -(ainv * self.n))

    @classmethod
    def identity(cls, family: str) -> DeckAction:
        return cls(family, 1, 0)


def _check(f1: str, f2: str) -> None:
    if f1 != f2:
        raise FamilyMismatch(f"{f1} vs {f2}")


def deck_act(t: DeckAction, c: RadialClass) -> RadialClass:
    _check(t.family, c.family)
    if c.family == "power":
        return RadialClass("power", c.degree, tuple(n + (c.degree - 1) * t.n for n in c.entries))
    if c.family == "cheb":
        return RadialClass("cheb", 2, tuple((e, t.a * n + (2 - e) * t.n) for e, n in c.entries))
    return RadialClass("lattes", 2, tuple((al, t.a * B + lattes_multiplier(al) * t.n)
                                          for al, B in c.entries))


def is_degenerate(c: RadialClass) -> bool:
    """Classes whose coding map is constant at a postcritical fixed point.

    cheb:2 -- all entries in {(+1, n), (-1, 3n)} for one n (constant at 2).
    lattes -- all maps share a fixed point in 2Z[i] (constant at infinity).
    """
    if c.family == "cheb":
        ns = {n if e == 1 else Fraction(n, 3) for e, n in c.entries}
        return len(ns) == 1 and next(iter(ns)).denominator == 1
    if c.family == "lattes":
        fps = {B / (G(1) - ONE_MINUS_I * al / 2) for al, B in c.entries}
        if len(fps) != 1:
            return False
        p = next(iter(fps))
        return p.is_gaussian_integer() and p.re % 2 == 0 and p.im % 2 == 0
    return False


def _candidate_as(c: RadialClass) -> Iterator:
    if c.family == "power":
        return iter((1,))
    if c.family == "cheb":
        return iter((1, -1))
    return iter(UNITS)


def solve_deck(c1: RadialClass, c2: RadialClass) -> DeckAction | None:
    """The deck element carrying c1 to c2, or None."""
    _check(c1.family, c2.family)
    if c1.degree != c2.degree or len(c1.entries) != len(c2.entries):
        return None
    for a in _candidate_as(c1):
        if c1.family == "power":
            diff = c2.entries[0] - c1.entries[0]
            if diff % (c1.degree - 1):
                continue
            t = DeckAction("power", 1, diff // (c1.degree - 1))
        elif c1.family == "cheb":
            (e1, n1), (e2, n2) = c1.entries[0], c2.entries[0]
            if e1 != e2 or (n2 - a * n1) % (2 - e1):
                continue
            t = DeckAction("cheb", a, (n2 - a * n1) // (2 - e1))
        else:
            (al1, B1), (al2, B2) = c1.entries[0], c2.entries[0]
            if al1 != al2:
                continue
            b = (B2 - a * B1) / lattes_multiplier(al1)
            if not b.is_gaussian_integer():
                continue
            t = DeckAction("lattes", a, b)
        if deck_act(t, c1) == c2:
            return t
    return None


def cod_equal(c1: RadialClass, c2: RadialClass, strict: bool = False) -> bool:
    """Whether the two classes define the same coding map.

    Degenerate classes all code to the same constant map, so they are equal to
    each other and to nothing else. With strict=True they raise instead.
    """
    _check(c1.family, c2.family)
    d1, d2 = is_degenerate(c1), is_degenerate(c2)
    if d1 or d2:
        if strict:
            raise DegenerateClass(f"{c1 if d1 else c2} has a constant coding map")
        return d1 and d2
    return solve_deck(c1, c2) is not None


def _arg_key(z: GaussRational) -> float:
    if z == 0:
        return 0.0
    return math.atan2(float(z.im), float(z.re)) % (2 * math.pi)


def canonical_form(c: RadialClass, strict: bool = False) -> RadialClass:
    """Deterministic representative of the deck orbit of c.

    power  -- first entry reduced into [0, d-2].
    cheb   -- first entry (+1, 0), or (-1, r) with r = 0 when 3 | n1, else 1;
              the sign a is then chosen to make the second entry nonnegative
              (a = +1 on ties).
    lattes -- minimise (|B1|^2, arg B1, |B2|^2, arg B2) over the orbit.
    """
    if strict and is_degenerate(c):
        raise DegenerateClass(f"{c} has a constant coding map")
    if c.family == "power":
        return deck_act(DeckAction("power", 1, -(c.entries[0] // (c.degree - 1))), c)
    if c.family == "cheb":
        (e1, n1), (e2, n2) = c.entries
        if e1 == 1:
            options = [DeckAction("cheb", a, -a * n1) for a in (1, -1)]
        elif n1 % 3 == 0:
            options = [DeckAction("cheb", a, -a * n1 // 3) for a in (1, -1)]
        else:
            a = 1 if n1 % 3 == 1 else -1
            options = [DeckAction("cheb", a, (1 - a * n1) // 3)]
        images = [deck_act(t, c) for t in options]
        for img in images:
            if img.entries[1][1] >= 0:
                return img
        return images[0]
    best, best_key = None, None
    al1, B1 = c.entries[0]
    c1 = lattes_multiplier(al1)
    for a in UNITS:
        centre = -(a * B1) / c1
        br, bi = round(centre.re), round(centre.im)
        for dr in range(-2, 3):
            for di in range(-2, 3):
                img = deck_act(DeckAction("lattes", a, G(br + dr, bi + di)), c)
                key = tuple(k for _, B in img.entries for k in (B.norm(), _arg_key(B)))
                if best_key is None or key < best_key:
                    best, best_key = img, key
    return best


def power_monoid_act(m: int, k: int, c: RadialClass) -> RadialClass:
    """(m, k) . [n_i] = [k n_i + m] on power classes."""
    if c.family != "power":
        raise FamilyMismatch("the monoid action is defined on power classes")
    if k < 1 or not 0 <= m <= c.degree - 1:
        raise ValueError("need k >= 1 and 0 <= m <= d-1")
    return RadialClass("power", c.degree, tuple(k * n + m for n in c.entries))
