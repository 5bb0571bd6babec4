"""Catalog of supported rational maps and lifting of curves under them.

Four families are supported: the power maps z^d, the Chebyshev maps
2*T_d(z/2), the flexible Lattes map -(z-1)^2/(4z) and the quadratic
z^2 - 3 whose Julia set is a Cantor set.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .complex_geom import Curve, segment_distance
from .errors import (BranchAmbiguity, CriticalValueProximity, NumericalFailure,
                     PoleAtInput, UnsupportedFamily, WindowEscape)

EPS_CV = 1e-4
WINDOW_RADIUS = 100.0
ORBIT_TOL = 1e-10
MAX_ORBIT = 64


class _Infinity:
    """The point at infinity, kept symbolic."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "∞"


INF = _Infinity()


@dataclass(frozen=True)
class OrbitCertificate:
    point: complex
    preperiod: int | None = None
    period: int | None = None
    attracted_to: object = None
    steps: int = 0

    def describe(self) -> str:
        if self.period is not None:
            return f"critical {_fmt(self.point)}: preperiod {self.preperiod}, period {self.period}"
        return f"critical {_fmt(self.point)}: attracted to {self.attracted_to} after {self.steps} steps"


def _fmt(z) -> str:
    if z is INF:
        return "∞"
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}i"


@dataclass(frozen=True)
class MapModel:
    family: str
    degree: int
    critical: tuple = ()
    postcritical: tuple = ()
    attracting: tuple = ()
    punctures: tuple[complex, ...] = ()
    critical_values: tuple[complex, ...] = ()
    certificates: tuple[OrbitCertificate, ...] = field(default=(), compare=False)

    @property
    def token(self) -> str:
        if self.family in ("power", "cheb"):
            return f"{self.family}:{self.degree}"
        return self.family

    def __call__(self, z):
        return evaluate(self, z)

    def report(self) -> str:
        lines = [f"map = {self.token}", f"degree = {self.degree}",
                 "critical = " + ", ".join(_fmt(c) for c in self.critical),
                 "postcritical = " + ", ".join(_fmt(c) for c in self.postcritical),
                 "attracting = " + (", ".join(_fmt(c) for c in self.attracting) or "none")]
        lines += [c.describe() for c in self.certificates]
        return "\n".join(lines)


def _dickson(d: int, z: complex) -> complex:
    # 2*T_d(z/2) via D_{n+1} = z D_n - D_{n-1}
    a, b = 2 + 0j, complex(z)
    if d == 0:
        return a
    for _ in range(d - 1):
        a, b = b, z * b - a
    return b


def evaluate(m: MapModel, z, finite: bool = False):
    """f(z); infinity is the symbolic INF, or PoleAtInput when finite=True."""
    if z is INF:
        out = INF
    elif m.family == "power":
        out = complex(z) ** m.degree
    elif m.family == "cheb":
        out = _dickson(m.degree, complex(z))
    elif m.family == "quadcantor":
        out = complex(z) ** 2 - 3
    elif m.family == "lattes":
        z = complex(z)
        out = INF if z == 0 else -(z - 1) ** 2 / (4 * z)
    else:
        raise UnsupportedFamily(m.family)
    if out is INF and finite:
        raise PoleAtInput(f"{m.token} sends {_fmt(z)} to infinity")
    return out


def preimages(m: MapModel, w: complex) -> list[complex]:
    """The d solutions of f(z) = w, repeated by multiplicity."""
    if w is INF:
        raise ValueError("preimages of infinity are not tracked")
    w = complex(w)
    d = m.degree
    if m.family == "power":
        if w == 0:
            roots = [0j] * d
        else:
            r, th = abs(w) ** (1.0 / d), cmath.phase(w)
            roots = [cmath.rect(r, (th + 2 * math.pi * k) / d) for k in range(d)]
    elif m.family == "cheb":
        t = cmath.acos(w / 2)
        roots = [2 * cmath.cos((t + 2 * math.pi * k) / d) for k in range(d)]
    elif m.family == "quadcantor":
        s = cmath.sqrt(w + 3)
        roots = [s, -s]
    elif m.family == "lattes":
        # z^2 + (4w - 2) z + 1 = 0
        p = 4 * w - 2
        s = cmath.sqrt(p * p - 4)
        r1 = (-p + s) / 2 if abs(-p + s) >= abs(-p - s) else (-p - s) / 2
        roots = [r1, 1 / r1]
    else:
        raise UnsupportedFamily(m.family)
    scale = 1e-10 * (1 + abs(w))
    for z in roots:
        fz = evaluate(m, z)
        if fz is INF or not abs(fz - w) <= scale:
            raise NumericalFailure(f"root {z} of f(z) = {w} has residual beyond tolerance")
    return roots


def _certify(m: MapModel, c: complex) -> OrbitCertificate:
    orbit = [c]
    z = c
    for n in range(1, MAX_ORBIT + 1):
        z = evaluate(m, z)
        if z is not INF and abs(z) > WINDOW_RADIUS and m.family in ("cheb", "quadcantor"):
            return OrbitCertificate(c, attracted_to=INF, steps=n)
        for k, prev in enumerate(orbit):
            if (z is INF and prev is INF) or (z is not INF and prev is not INF
                                             and abs(z - prev) <= ORBIT_TOL):
                return OrbitCertificate(c, preperiod=k, period=n - k)
        orbit.append(z)
    raise NumericalFailure(f"no certificate for critical point {c}")


def _build(family, d, crit, post, attr, punct, cvals) -> MapModel:
    m = MapModel(family, d, tuple(crit), tuple(post), tuple(attr), tuple(punct), tuple(cvals))
    certs = tuple(_certify(m, c) for c in crit if c is not INF)
    return MapModel(family, d, m.critical, m.postcritical, m.attracting,
                    m.punctures, m.critical_values, certs)


def power(d: int) -> MapModel:
    if d < 2:
        raise UnsupportedFamily("degree must be at least 2")
    return _build("power", d, [0j, INF], [0j, INF], [0j, INF], [0j], [0j])


def chebyshev(d: int) -> MapModel:
    if d < 2:
        raise UnsupportedFamily("degree must be at least 2")
    crit = [complex(round(2 * math.cos(math.pi * k / d), 15)) for k in range(1, d)]
    cvals = sorted({complex(round(_dickson(d, c).real)) for c in crit}, key=lambda z: z.real)
    return _build("cheb", d, crit, [-2 + 0j, 2 + 0j, INF], [INF], [-2 + 0j, 2 + 0j], cvals)


def lattes() -> MapModel:
    return _build("lattes", 2, [-1 + 0j, 1 + 0j], [1 + 0j, 0j, INF], [], [1 + 0j, 0j],
                  [1 + 0j, 0j])


def quadcantor() -> MapModel:
    post = [-3 + 0j]
    while abs(post[-1] ** 2 - 3) <= WINDOW_RADIUS:
        post.append(post[-1] ** 2 - 3)
    return _build("quadcantor", 2, [0j], post + [INF], [INF], [-3 + 0j, 6 + 0j], [-3 + 0j])


def from_token(token: str) -> MapModel:
    """Parse CLI tokens power:d, cheb:d, lattes, quadcantor."""
    name, _, arg = token.strip().lower().partition(":")
    if name == "power":
        return power(int(arg or 2))
    if name in ("cheb", "chebyshev"):
        return chebyshev(int(arg or 2))
    if name == "lattes" and not arg:
        return lattes()
    if name == "quadcantor" and not arg:
        return quadcantor()
    raise UnsupportedFamily(f"unknown map token {token!r}")


def lift_curve(m: MapModel, l: Curve, x0: complex, *, chord_tol: float | None = 1e-8,
               max_step: float = 0.05, min_step: float = 1e-12) -> Curve:
    """Lift l through f starting at x0 by nearest-root continuation.

    A step is accepted only when the nearest root is at least three times
    closer to the tracked point than any other root. With chord_tol set, the
    step is also shrunk until the chord midpoint projects to within chord_tol
    of the curve.
    """
    fx0 = evaluate(m, x0)
    if fx0 is INF or abs(fx0 - l.start) > 1e-9:
        raise ValueError("x0 is not a preimage of the curve start")
    for cv in m.critical_values:
        if len(l.vertices) == 1 and abs(l.start - cv) < EPS_CV:
            raise CriticalValueProximity(f"curve within {EPS_CV} of critical value {_fmt(cv)}")
        for a, b in l.segments():
            if segment_distance(cv, a, b) < EPS_CV:
                raise CriticalValueProximity(
                    f"curve within {EPS_CV} of critical value {_fmt(cv)}")
    pts = [complex(x0)]
    z = complex(x0)
    for a, b in l.segments():
        L = abs(b - a)
        t = 0.0
        h = min(1.0, max_step / L) if L > 0 else 1.0
        while t < 1.0:
            h = min(h, 1.0 - t)
            while True:
                if h < min_step:
                    raise BranchAmbiguity(f"continuation stalled near {_fmt(a + t * (b - a))}")
                w = a + (t + h) * (b - a)
                roots = sorted(preimages(m, w), key=lambda r: abs(r - z))
                if abs(roots[1] - z) >= 3 * abs(roots[0] - z):
                    znew = roots[0]
                    if chord_tol is None or _chord_ok(m, a, b, t, h, z, znew, chord_tol):
                        break
                h /= 2
            if abs(znew) > WINDOW_RADIUS:
                raise WindowEscape(f"lift left the window of radius {WINDOW_RADIUS}")
            t = 1.0 if t + h >= 1.0 - 1e-15 else t + h
            if znew != z:
                pts.append(znew)
            z = znew
            h *= 2
    if len(pts) > 1 and l.closed and pts[0] == pts[-1]:
        return Curve(tuple(pts), True)
    return Curve(tuple(pts), False)


def _chord_ok(m, a, b, t, h, z0, z1, tol) -> bool:
    mid = (z0 + z1) / 2
    fm = evaluate(m, mid)
    if fm is INF:
        return False
    w = a + (t + h / 2) * (b - a)
    roots = preimages(m, w)
    true_mid = min(roots, key=lambda r: abs(r - mid))
    return abs(true_mid - mid) <= tol
