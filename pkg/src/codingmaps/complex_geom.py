"""Exact Gaussian rationals, polyline curves and cut-crossing words.

Homotopy classes of loops in a finitely punctured plane are read off by
attaching a ray to every puncture and recording the signed order in which a
loop crosses those rays. The resulting word is an element of the free group
on the puncture generators.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateCrossing, EndpointMismatch, PunctureProximity

EPS_PUNCT = 1e-9
EPS_JOIN = 1e-12
EPS_CLOSE = 1e-9

Word = tuple[tuple[str, int], ...]

_SUPERSCRIPT = {1: "⁺", -1: "⁻"}


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


@dataclass(frozen=True)
class GaussRational:
    """Exact complex number re + i*im with rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))

    @classmethod
    def coerce(cls, x) -> GaussRational:
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(_frac(x), Fraction(0))

    @classmethod
    def parse(cls, text: str) -> GaussRational:
        """Parse sums of rational and imaginary terms: '1/2+1+i', '-i/2', '3i/2', '½'."""
        s = (text.replace(" ", "").replace("−", "-").replace("½", "1/2")
             .replace("¼", "1/4").replace("j", "i"))
        if not s:
            raise ValueError("empty Gaussian rational")
        total = cls(Fraction(0))
        for sign, term in re.findall(r"([+-]?)([^+-]+)", s):
            if not term:
                raise ValueError(f"cannot parse {text!r}")
            num, _, den = term.partition("/")
            if "i" in den or num.count("i") > 1:
                raise ValueError(f"cannot parse {text!r}")
            imag = "i" in num
            num, den = num.replace("i", "") or "1", den or "1"
            try:
                v = Fraction(num) / Fraction(den)
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"cannot parse {text!r}") from exc
            v = -v if sign == "-" else v
            total = total + (cls(0, v) if imag else cls(v))
        if "".join(sign + term for sign, term in re.findall(r"([+-]?)([^+-]+)", s)) != s:
            raise ValueError(f"cannot parse {text!r}")
        return total

    def __add__(self, other):
        o = GaussRational.coerce(other)
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other):
        o = GaussRational.coerce(other)
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussRational.coerce(other)
        return GaussRational(self.re * o.re - self.im * o.im,
                             self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussRational.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        q = self * o.conjugate()
        return GaussRational(q.re / n, q.im / n)

    def __rtruediv__(self, other):
        return GaussRational.coerce(other) / self

    def __eq__(self, other):
        try:
            o = GaussRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self) -> GaussRational:
        return GaussRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_gaussian_integer(self) -> bool:
        return self.re.denominator == 1 and self.im.denominator == 1

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussRational({self})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        p, q = self.im.numerator, self.im.denominator
        coef = {1: "", -1: "-"}.get(p, str(p))
        imag = f"{coef}i" + (f"/{q}" if q != 1 else "")
        if self.re == 0:
            return imag
        return f"{self.re}{'' if imag.startswith('-') else '+'}{imag}"


@dataclass(frozen=True)
class Curve:
    """Polyline in the plane. A single vertex denotes a constant path."""

    vertices: tuple[complex, ...]
    closed: bool = False

    def __post_init__(self):
        vs = tuple(complex(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vs)
        if not vs:
            raise ValueError("a curve needs at least one vertex")
        for a, b in zip(vs, vs[1:]):
            if a == b:
                raise ValueError("consecutive vertices must be distinct")
        if self.closed and vs[0] != vs[-1]:
            raise ValueError("closed curve must end where it starts")

    @property
    def start(self) -> complex:
        return self.vertices[0]

    @property
    def end(self) -> complex:
        return self.vertices[-1]

    def segments(self):
        return zip(self.vertices, self.vertices[1:])

    def length(self) -> float:
        return sum(abs(b - a) for a, b in self.segments())

    def check_punctures(self, punctures: Iterable[complex], eps: float = EPS_PUNCT) -> None:
        """Raise PunctureProximity if any vertex or segment comes within eps of a puncture."""
        for p in punctures:
            if len(self.vertices) == 1 and abs(self.start - p) <= eps:
                raise PunctureProximity(f"curve passes within {eps} of puncture {p}")
            for a, b in self.segments():
                if segment_distance(p, a, b) <= eps:
                    raise PunctureProximity(f"curve passes within {eps} of puncture {p}")

    def subdivide(self, k: int) -> Curve:
        """Split every segment into k equal pieces."""
        if k < 1:
            raise ValueError("k must be positive")
        out = [self.start]
        for a, b in self.segments():
            out.extend(a + (b - a) * (j / k) for j in range(1, k))
            out.append(b)
        return Curve(tuple(out), self.closed)

    def to_text(self) -> str:
        lines = [f"closed {int(self.closed)}"]
        lines += [f"{v.real!r} {v.imag!r}" for v in self.vertices]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Curve:
        rows = [r.strip() for r in text.strip().splitlines() if r.strip()]
        head = rows[0].split()
        if len(head) != 2 or head[0] != "closed" or head[1] not in ("0", "1"):
            raise ValueError("curve text must start with 'closed 0|1'")
        verts = []
        for r in rows[1:]:
            re_, im_ = r.split()
            verts.append(complex(float(re_), float(im_)))
        return cls(tuple(verts), head[1] == "1")


def segment_distance(p: complex, a: complex, b: complex) -> float:
    d = b - a
    L2 = d.real * d.real + d.imag * d.imag
    if L2 == 0:
        return abs(p - a)
    t = ((p - a) * d.conjugate()).real / L2
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * d))


def polyline(points: Sequence[complex], closed: bool = False) -> Curve:
    return Curve(tuple(points), closed)


def segment(a: complex, b: complex) -> Curve:
    return Curve((a, b))


def circle_loop(center: complex, radius: float, base_angle: float = 0.0, n: int = 64) -> Curve:
    """Counterclockwise n-gon around center, starting and ending at angle base_angle."""
    pts = [center + radius * complex(math.cos(base_angle + 2 * math.pi * k / n),
                                     math.sin(base_angle + 2 * math.pi * k / n))
           for k in range(n)]
    pts.append(pts[0])
    return Curve(tuple(pts), True)


def curve_concat(a: Curve, b: Curve) -> Curve:
    if abs(a.end - b.start) > EPS_JOIN:
        raise EndpointMismatch(f"end {a.end} does not meet start {b.start}")
    verts = list(a.vertices) + list(b.vertices[1:])
    closed = len(verts) > 1 and verts[0] == verts[-1]
    return Curve(tuple(verts), closed)


def curve_reverse(a: Curve) -> Curve:
    return Curve(tuple(reversed(a.vertices)), a.closed)


def close_up(c: Curve) -> Curve:
    """Snap a nearly closed curve shut; raise if its ends are apart."""
    if c.closed:
        return c
    if abs(c.end - c.start) > EPS_CLOSE:
        raise EndpointMismatch(f"loop endpoints differ by {abs(c.end - c.start):.3g}")
    verts = list(c.vertices)
    if len(verts) == 1:
        return c
    verts[-1] = verts[0]
    if len(verts) > 2 and verts[-2] == verts[0]:
        verts.pop()
    return Curve(tuple(verts), len(verts) > 1)


@dataclass(frozen=True)
class CutConfig:
    """Rays from each puncture; crossing a ray reads off its generator."""

    punctures: tuple[complex, ...]
    directions: tuple[complex, ...] = field(default=())
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        ps = tuple(complex(p) for p in self.punctures)
        object.__setattr__(self, "punctures", ps)
        dirs = self.directions or tuple(-1j for _ in ps)
        dirs = tuple(complex(d) / abs(complex(d)) for d in dirs)
        object.__setattr__(self, "directions", dirs)
        names = self.names or tuple(f"B{k + 1}" for k in range(len(ps)))
        object.__setattr__(self, "names", tuple(names))
        if not (len(ps) == len(dirs) == len(names)):
            raise ValueError("punctures, directions and names must align")

    def validate(self, basepoint: complex | None = None, window: float = 100.0) -> None:
        """Check that rays stay apart inside the window and miss the basepoint."""
        rays = list(zip(self.punctures, self.directions))
        for k, (p, d) in enumerate(rays):
            for q, e in rays[k + 1:]:
                if _rays_meet(p, d, q, e, window):
                    raise ValueError(f"rays from {p} and {q} intersect")
            if basepoint is not None:
                w = (basepoint - p) * d.conjugate()
                if abs(w.imag) <= EPS_PUNCT and w.real >= -EPS_PUNCT:
                    raise ValueError(f"ray from {p} passes through the basepoint")


def _cross(a: complex, b: complex) -> float:
    return (a.conjugate() * b).imag


def _rays_meet(p, d, q, e, window) -> bool:
    den = _cross(d, e)
    if abs(den) < 1e-15:
        return abs(_cross(d, q - p)) <= EPS_PUNCT
    s = _cross(q - p, e) / den
    t = _cross(q - p, d) / den
    return s >= 0 and t >= 0 and abs(p + s * d) <= window


def crossing_word(loop: Curve, cuts: CutConfig) -> Word:
    """Signed sequence of cut crossings of a closed loop.

    A crossing scores +1 when the puncture lies on the left of the direction
    of travel, so a small counterclockwise circle gives the bare generator.
    Rays use a half-open convention: a vertex lying exactly on a ray belongs
    to the side below it, so subdividing a segment never changes the word.
    """
    loop = close_up(loop)
    loop.check_punctures(cuts.punctures)
    out: list[tuple[float, str, int]] = []
    word: list[tuple[str, int]] = []
    for a, b in loop.segments():
        out.clear()
        for p, d, name in zip(cuts.punctures, cuts.directions, cuts.names):
            wa = (a - p) * d.conjugate()
            wb = (b - p) * d.conjugate()
            if wa.imag == 0 and wb.imag == 0 and max(wa.real, wb.real) > 0:
                raise DegenerateCrossing(f"segment {a}->{b} lies on the ray of {name}")
            up = wa.imag <= 0 < wb.imag
            down = wb.imag <= 0 < wa.imag
            if not (up or down):
                continue
            t = wa.imag / (wa.imag - wb.imag)
            x = wa.real + t * (wb.real - wa.real)
            if abs(x) <= EPS_PUNCT:
                raise DegenerateCrossing(f"segment {a}->{b} touches the ray endpoint {p}")
            if x > 0:
                out.append((t, name, 1 if up else -1))
        out.sort()
        word.extend((n, s) for _, n, s in out)
    return free_reduce(word)


def free_reduce(word: Iterable[tuple[str, int]]) -> Word:
    stack: list[tuple[str, int]] = []
    for g, s in word:
        if stack and stack[-1][0] == g and stack[-1][1] == -s:
            stack.pop()
        else:
            stack.append((g, s))
    return tuple(stack)


def invert_word(word: Word) -> Word:
    return tuple((g, -s) for g, s in reversed(word))


def format_word(word: Word) -> str:
    return " ".join(f"{g}{_SUPERSCRIPT[s]}" for g, s in word)


def parse_word(text: str) -> Word:
    """Inverse of format_word; also accepts ASCII 'B1+ B2-' and 'B1^-1'."""
    out = []
    for tok in text.replace("^-1", "-").split():
        if tok[-1] in ("⁺", "+"):
            out.append((tok[:-1], 1))
        elif tok[-1] in ("⁻", "-"):
            out.append((tok[:-1], -1))
        else:
            out.append((tok, 1))
    return tuple(out)
