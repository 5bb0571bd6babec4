"""Lifted iterated function systems on the Euclidean covers.

The raster of a tile K is the greatest fixed point of a discrete Hutchinson
operator on pixel centres: a pixel survives when, for some map g_i, the
preimage of its centre under g_i falls in a surviving pixel. Every inverse
map has the form z -> A z - C with Gaussian integers A and C, so with centres
written as odd numerators over 2R the pixel map is exact integer arithmetic.
Preimages that fall on a pixel edge are snapped down (floor).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.spatial import ConvexHull

from .cod_space import DeckAction, RadialClass, lattes_multiplier, UNITS
from .complex_geom import GaussRational
from .errors import (Inconclusive, InvalidClassEntry, NoConvergence, UnsupportedFamily,
                     ZeroMeasureTile)

G = GaussRational
ITERATION_CAP = 256
MULTIPLICITY_GAP = 0.2
# one deck fundamental domain of the cover Julia set has measure 1 in every family
NORMALIZATION = {"power": Fraction(1), "cheb": Fraction(1), "lattes": Fraction(1)}


@dataclass(frozen=True)
class AffineMap:
    a: GaussRational
    b: GaussRational

    def __post_init__(self):
        object.__setattr__(self, "a", G.coerce(self.a))
        object.__setattr__(self, "b", G.coerce(self.b))
        if not self.a.norm() < 1:
            raise ValueError(f"{self.a} is not a contraction factor")

    def __call__(self, z):
        if isinstance(z, GaussRational):
            return self.a * z + self.b
        return complex(self.a) * z + complex(self.b)

    def fixed_point(self) -> GaussRational:
        return self.b / (G(1) - self.a)

    def integral_inverse(self) -> tuple[GaussRational, GaussRational]:
        """(A, C) with g^{-1}(z) = A z - C, both Gaussian integers."""
        A = G(1) / self.a
        C = self.b * A
        if not (A.is_gaussian_integer() and C.is_gaussian_integer()):
            raise ValueError("inverse map is not integral")
        return A, C


@dataclass(frozen=True)
class LiftedIFS:
    family: str
    maps: tuple[AffineMap, ...]
    cls: RadialClass | None = None

    @property
    def ambient(self) -> str:
        return "plane" if self.family == "lattes" else "line"

    @property
    def degree(self) -> int:
        return len(self.maps)

    def deck_units(self) -> tuple:
        return {"power": (G(1),), "cheb": (G(1), G(-1)), "lattes": UNITS}[self.family]


def lift_radial_class(c: RadialClass) -> LiftedIFS:
    """The d exact affine contractions attached to a radial class."""
    if c.family == "power":
        d = c.degree
        maps = tuple(AffineMap(G(Fraction(1, d)), G(Fraction(n, d))) for n in c.entries)
    elif c.family == "cheb":
        maps = tuple(AffineMap(G(Fraction(e, 2)), G(n)) for e, n in c.entries)
    elif c.family == "lattes":
        maps = tuple(AffineMap(G(1, -1) * al / 2, B) for al, B in c.entries)
    else:
        raise UnsupportedFamily(c.family)
    ifs = LiftedIFS(c.family, maps, c)
    if ifs.ambient == "line" and any(m.a.im or m.b.im for m in maps):
        raise InvalidClassEntry("line families need real coefficients")
    return ifs


def hull_polygon(ifs: LiftedIFS, rounds: int = 60) -> np.ndarray:
    """Vertices of a convex polygon (or interval ends) containing K.

    Starts from an invariant disc and repeatedly replaces the polygon by the
    hull of its images; each stage still contains K.
    """
    maps = [(complex(m.a), complex(m.b)) for m in ifs.maps]
    fps = [b / (1 - a) for a, b in maps]
    c = sum(fps) / len(fps)
    r = max(abs(a * c + b - c) / (1 - abs(a)) for a, b in maps) + 1e-12
    if ifs.ambient == "line":
        lo, hi = c.real - r, c.real + r
        for _ in range(rounds):
            ends = [a.real * x + b.real for a, b in maps for x in (lo, hi)]
            lo, hi = min(ends), max(ends)
        return np.array([lo, hi], dtype=complex)
    P = c + r * np.exp(2j * np.pi * np.arange(32) / 32) / math.cos(math.pi / 32)
    for _ in range(rounds):
        Q = np.concatenate([a * P + b for a, b in maps])
        if np.ptp(Q.real) < 1e-12 or np.ptp(Q.imag) < 1e-12:
            P = Q
            continue
        P = Q[ConvexHull(np.c_[Q.real, Q.imag]).vertices]
    return P


@dataclass
class TileRaster:
    """Pixel set of a tile; pixel (ix, iy) is the square [ix, ix+1]x[iy, iy+1]/res."""

    x0: int
    y0: int
    resolution: int
    bitmap: np.ndarray  # rows indexed by iy - y0, columns by ix - x0
    iterations: int
    converged: bool
    ambient: str
    label: str = ""

    @property
    def box(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        R = self.resolution
        ny, nx = self.bitmap.shape
        return (Fraction(self.x0, R), Fraction(self.y0, R),
                Fraction(self.x0 + nx, R), Fraction(self.y0 + ny, R))

    def pixel_measure(self) -> float:
        return 1.0 / self.resolution ** (2 if self.ambient == "plane" else 1)

    def count(self) -> int:
        return int(self.bitmap.sum())

    def set_pixels(self) -> tuple[np.ndarray, np.ndarray]:
        iy, ix = np.nonzero(self.bitmap)
        return ix + self.x0, iy + self.y0

    def to_pgm(self) -> bytes:
        ny, nx = self.bitmap.shape
        img = np.where(self.bitmap[::-1], 255, 0).astype(np.uint8)
        head = (f"P5\n# {self.label} res={self.resolution} iterations={self.iterations}"
                f" box={','.join(str(v) for v in self.box)}\n{nx} {ny}\n255\n")
        return head.encode() + img.tobytes()


def _box(ifs: LiftedIFS, R: int) -> tuple[int, int, int, int]:
    P = hull_polygon(ifs)
    pad = 2
    x0 = math.floor(P.real.min() * R) - pad
    x1 = math.ceil(P.real.max() * R) + pad
    if ifs.ambient == "line":
        return x0, 0, x1 - x0, 1
    y0 = math.floor(P.imag.min() * R) - pad
    y1 = math.ceil(P.imag.max() * R) + pad
    return x0, y0, x1 - x0, y1 - y0


def _pullback_index(ifs: LiftedIFS, R: int, x0: int, y0: int, nx: int, ny: int):
    """For each map, flat index of the pixel holding the preimage of every centre."""
    X = (2 * np.arange(x0, x0 + nx, dtype=np.int64) + 1)[None, :]
    Y = (2 * np.arange(y0, y0 + ny, dtype=np.int64) + 1)[:, None]
    if ifs.ambient == "line":
        Y = np.zeros((1, 1), dtype=np.int64)
    out = []
    for m in ifs.maps:
        A, C = m.integral_inverse()
        ar, ai, cr, ci = int(A.re), int(A.im), int(C.re), int(C.im)
        wx = ar * X - ai * Y - 2 * R * cr
        px = np.floor_divide(wx, 2) - x0
        if ifs.ambient == "line":
            py = np.zeros_like(px)
        else:
            wy = ai * X + ar * Y - 2 * R * ci
            py = np.floor_divide(wy, 2) - y0
        ok = (px >= 0) & (px < nx) & (py >= 0) & (py < ny)
        flat = np.where(ok, py * nx + px, 0)
        out.append((np.broadcast_to(flat, (ny, nx)).ravel().astype(np.int64),
                    np.broadcast_to(ok, (ny, nx)).ravel()))
    return out


def attractor_raster(ifs: LiftedIFS, resolution: int, cap: int = ITERATION_CAP) -> TileRaster:
    if resolution < 16:
        raise ValueError("resolution must be at least 16 px/unit")
    R = int(resolution)
    x0, y0, nx, ny = _box(ifs, R)
    index = _pullback_index(ifs, R, x0, y0, nx, ny)
    S = np.ones(nx * ny, dtype=bool)
    label = f"{ifs.cls.token} class={ifs.cls}" if ifs.cls else ifs.family
    for it in range(1, cap + 1):
        N = np.zeros_like(S)
        for flat, ok in index:
            N |= S[flat] & ok
        if np.array_equal(N, S):
            return TileRaster(x0, y0, R, S.reshape(ny, nx), it, True, ifs.ambient, label)
        S = N
    raise NoConvergence(f"pixel set still changing after {cap} iterations")


@dataclass(frozen=True)
class MeasureEstimate:
    value: float
    fine: float | None = None

    def __float__(self):
        return self.value


def measure_estimate(raster: TileRaster, ifs: LiftedIFS | None = None) -> MeasureEstimate:
    """Pixel count times pixel measure; with ifs, also the value at twice the resolution."""
    if not raster.converged:
        raise NoConvergence("raster did not converge")
    value = raster.count() * raster.pixel_measure()
    fine = None
    if ifs is not None:
        fine = measure_estimate(attractor_raster(ifs, 2 * raster.resolution)).value
    return MeasureEstimate(value, fine)


def closed_form_measure(c: RadialClass) -> Fraction:
    """Exact measure of K from the tabulated formulas."""
    if c.family == "power" and c.degree == 2:
        return Fraction(abs(c.entries[1] - c.entries[0]))
    if c.family == "power" and c.degree == 3:
        base = c.entries[0]
        digits = [n - base for n in c.entries]
        k = math.gcd(*digits)
        if k == 0:
            return Fraction(0)
        return Fraction(k) if sum(n // k for n in digits) % 3 == 0 else Fraction(0)
    if c.family == "cheb":
        lo, hi = chebyshev_interval(c)
        return hi - lo
    if c.family == "lattes":
        (a1, B1), (a2, B2) = c.entries
        c1, c2 = lattes_multiplier(a1), lattes_multiplier(a2)
        if a1 == a2:
            return 2 * (B2 - B1).norm()
        pair = {a1, a2}
        A1, A2 = {G(1), G(0, 1)}, {G(-1), G(0, -1)}
        if pair == A1:
            factor = 1
        elif pair == A2:
            factor = 25
        else:
            factor = 10
        return factor * (B2 / c2 - B1 / c1).norm()
    raise UnsupportedFamily(f"no closed form for {c.token}")


def chebyshev_interval(c: RadialClass) -> tuple[Fraction, Fraction]:
    """[m1, m2] for a cheb:2 class, by the three sign cases."""
    (e1, n1), (e2, n2) = c.entries
    if e1 == e2 == 1:
        ends = (Fraction(2 * n1), Fraction(2 * n2))
    elif e1 == e2 == -1:
        ends = (Fraction(4 * n1 - 2 * n2, 3), Fraction(4 * n2 - 2 * n1, 3))
    else:
        p, m = (n1, n2) if e1 == 1 else (n2, n1)
        ends = (Fraction(2 * p), Fraction(m - p))
    return min(ends), max(ends)


def deck_elements(ifs: LiftedIFS, lo: complex, hi: complex) -> list[DeckAction]:
    """Deck elements whose translation part lies in the box [lo, hi], lexicographic."""
    out = []
    if ifs.family == "power":
        for n in range(math.floor(lo.real) - 1, math.ceil(hi.real) + 2):
            out.append(DeckAction("power", 1, n))
    elif ifs.family == "cheb":
        for n in range(math.floor(lo.real / 2) - 1, math.ceil(hi.real / 2) + 2):
            for a in (1, -1):
                out.append(DeckAction("cheb", a, n))
    else:
        for br in range(math.floor(lo.real / 2) - 1, math.ceil(hi.real / 2) + 2):
            for bi in range(math.floor(lo.imag / 2) - 1, math.ceil(hi.imag / 2) + 2):
                for a in UNITS:
                    out.append(DeckAction("lattes", a, G(br, bi)))
    return out


def _deck_pixels(t: DeckAction, ix: np.ndarray, iy: np.ndarray, R: int):
    """Image pixels of pixel centres under a deck element (exact, centres go to centres)."""
    a = G.coerce(t.a)
    shift = G.coerce(t.n if t.family == "power" else 2 * t.n)
    ar, ai = int(a.re), int(a.im)
    X, Y = 2 * ix + 1, 2 * iy + 1
    wx = ar * X - ai * Y + 2 * R * int(shift.re)
    wy = ai * X + ar * Y + 2 * R * int(shift.im)
    return (wx - 1) // 2, (wy - 1) // 2


@dataclass
class TilingReport:
    coverage: float
    overlap: float
    translations: list = field(default_factory=list)


def tiling_check(ifs: LiftedIFS, window: tuple[complex, complex], resolution: int,
                 accept_overlap: float = 0.05, raster: TileRaster | None = None) -> TilingReport:
    """Greedy deck translates of K over a window; coverage and overlap fractions.

    Candidates are visited in lexicographic order of their lattice
    coordinates. A translate is kept when it meets the window and at most
    accept_overlap of its pixels are already covered.
    """
    if ifs.cls is not None and ifs.cls.family in ("power", "cheb", "lattes"):
        try:
            if closed_form_measure(ifs.cls) == 0:
                raise ZeroMeasureTile(f"K has measure zero for class {ifs.cls}")
        except UnsupportedFamily:
            pass
    R = int(resolution)
    raster = raster or attractor_raster(ifs, R)
    if raster.count() == 0:
        raise ZeroMeasureTile("the tile raster is empty")
    ix, iy = raster.set_pixels()
    lo, hi = complex(window[0]), complex(window[1])
    diam = float(np.abs(hull_polygon(ifs)[:, None] - hull_polygon(ifs)[None, :]).max())
    margin = math.ceil((diam + 1) * R)
    wx0, wx1 = math.floor(lo.real * R), math.ceil(hi.real * R)
    if ifs.ambient == "line":
        wy0, wy1 = 0, 1
        cy0, cy1 = 0, 1
    else:
        wy0, wy1 = math.floor(lo.imag * R), math.ceil(hi.imag * R)
        cy0, cy1 = wy0 - margin, wy1 + margin
    cx0, cx1 = wx0 - margin, wx1 + margin
    counts = np.zeros((cy1 - cy0, cx1 - cx0), dtype=np.int16)
    span = complex(margin / R, margin / R if ifs.ambient == "plane" else 0)
    chosen = []
    for t in deck_elements(ifs, lo - span, hi + span):
        px, py = _deck_pixels(t, ix, iy, R)
        if ifs.ambient == "line":
            py = np.zeros_like(px)
        inwin = (px >= wx0) & (px < wx1) & (py >= wy0) & (py < wy1)
        if not inwin.any():
            continue
        inside = (px >= cx0) & (px < cx1) & (py >= cy0) & (py < cy1)
        px, py = px[inside], py[inside]
        already = np.count_nonzero(counts[py - cy0, px - cx0])
        if already > accept_overlap * len(ix):
            continue
        np.add.at(counts, (py - cy0, px - cx0), 1)
        chosen.append(t)
    win = counts[wy0 - cy0:wy1 - cy0, wx0 - cx0:wx1 - cx0]
    total = win.size
    return TilingReport(float(np.count_nonzero(win)) / total,
                        float(np.count_nonzero(win >= 2)) / total, chosen)


@dataclass(frozen=True)
class Multiplicity:
    n: int
    gap: float
    measure: float


def multiplicity_estimate(ifs: LiftedIFS, resolution: int,
                          threshold: float = MULTIPLICITY_GAP) -> Multiplicity:
    """Nearest integer to the normalized raster measure."""
    raster = attractor_raster(ifs, resolution)
    value = measure_estimate(raster).value / float(NORMALIZATION[ifs.family])
    n = round(value)
    gap = abs(value - n)
    if gap > threshold:
        raise Inconclusive(f"measure {value:.4f} is {gap:.3f} from an integer")
    return Multiplicity(n, gap, value)


def growth_rate_exact(ifs: LiftedIFS, kmax: int) -> tuple[list[int], str]:
    """Exact counts of distinct g_w(0) over words of each length 1..kmax.

    Points at level k are kept as Gaussian integer numerators over N^k, where
    N = |A|^2 is the common norm of the inverse multipliers.
    """
    inv = [m.integral_inverse() for m in ifs.maps]
    norms = {A.norm() for A, _ in inv}
    if len(norms) != 1:
        raise ValueError("maps must share the contraction norm")
    N = int(norms.pop())
    # g(z) = (z + C) conj(A) / N ; with z = Z / N^k
    data = [(int(A.re), -int(A.im), int(C.re), int(C.im)) for A, C in inv]
    level = {(0, 0)}
    scale = 1
    counts = []
    for _ in range(kmax):
        nxt = set()
        for zr, zi in level:
            for ar, ai, cr, ci in data:
                ur, ui = zr + cr * scale, zi + ci * scale
                nxt.add((ur * ar - ui * ai, ur * ai + ui * ar))
        level = nxt
        scale *= N
        counts.append(len(level))
    d = ifs.degree
    for k, n in enumerate(counts, start=1):
        if n != d ** k:
            return counts, f"degenerate at {k}"
    return counts, "surjective-evidence"


def hutchinson_image(raster: TileRaster, ifs: LiftedIFS) -> np.ndarray:
    """Bitmap (same frame) of the union of the forward images g_i(raster)."""
    ix, iy = raster.set_pixels()
    R = raster.resolution
    z = ((ix + 0.5) + 1j * ((iy + 0.5) if raster.ambient == "plane" else 0)) / R
    out = np.zeros_like(raster.bitmap)
    ny, nx = out.shape
    for m in ifs.maps:
        w = complex(m.a) * z + complex(m.b)
        px = np.floor(w.real * R).astype(np.int64) - raster.x0
        py = (np.floor(w.imag * R).astype(np.int64) - raster.y0
              if raster.ambient == "plane" else np.zeros_like(px))
        ok = (px >= 0) & (px < nx) & (py >= 0) & (py < ny)
        out[py[ok], px[ok]] = True
    return out


def map_image_count(raster: TileRaster, m: AffineMap) -> int:
    """Number of pixels hit by g(raster) for a single map."""
    ix, iy = raster.set_pixels()
    R = raster.resolution
    z = ((ix + 0.5) + 1j * ((iy + 0.5) if raster.ambient == "plane" else 0)) / R
    w = complex(m.a) * z + complex(m.b)
    px = np.floor(w.real * R).astype(np.int64)
    py = np.floor(w.imag * R).astype(np.int64) if raster.ambient == "plane" else 0 * px
    return len(set(zip(px.tolist(), py.tolist())))
