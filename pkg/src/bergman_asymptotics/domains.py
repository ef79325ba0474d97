"""Domain presets, boundary arcs and area moments <z^m, z^n> = int_G z^m conj(z)^n dA."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import mpmath

from .precision import (
    DEFAULT_CONTEXT,
    PrecisionContext,
    gauss_legendre_rule,
    to_mpc,
    to_mpf,
)

Number = Union[int, str, float]


class InvalidDomainError(ValueError):
    pass


def _positive(name, value):
    if float(value) <= 0:
        raise InvalidDomainError(f"{name} must be positive, got {value!r}")


@dataclass(frozen=True)
class Disk:
    r: Number = 1

    def __post_init__(self):
        _positive("r", self.r)

    kind = "disk"

    def descriptor(self) -> dict:
        return {"type": "disk", "r": str(self.r)}


@dataclass(frozen=True)
class Ellipse:
    """Interior of x^2/a^2 + y^2/b^2 = 1 with a >= b > 0."""

    a: Number = 1
    b: Number = "0.5"

    def __post_init__(self):
        _positive("b", self.b)
        if float(self.a) < float(self.b):
            raise InvalidDomainError("ellipse needs a >= b")

    kind = "ellipse"

    def descriptor(self) -> dict:
        return {"type": "ellipse", "a": str(self.a), "b": str(self.b)}


@dataclass(frozen=True)
class SemiDisk:
    """The upper half-disk {|z| < r, Im z > 0}."""

    r: Number = 1

    def __post_init__(self):
        _positive("r", self.r)

    kind = "semidisk"

    def descriptor(self) -> dict:
        return {"type": "semidisk", "r": str(self.r)}


@dataclass(frozen=True)
class Polygon:
    """Simple, positively oriented polygon; vertices are (x, y) pairs."""

    vertices: tuple = field(default_factory=tuple)

    def __post_init__(self):
        verts = tuple((x, y) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        _validate_polygon(verts)

    kind = "polygon"

    def descriptor(self) -> dict:
        return {"type": "polygon",
                "vertices": [[str(x), str(y)] for x, y in self.vertices]}

    def scaled(self, t) -> "Polygon":
        return Polygon(tuple((x * t, y * t) for x, y in self.vertices))


Domain = Union[Disk, Ellipse, SemiDisk, Polygon]

def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    def on_segment(a, b, c):
        return (min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
                and min(a[1], b[1]) <= c[1] <= max(a[1], b[1]))

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and d1 != 0 and d2 != 0 \
            and ((d3 > 0) != (d4 > 0)) and d3 != 0 and d4 != 0:
        return True
    return ((d1 == 0 and on_segment(q1, q2, p1)) or (d2 == 0 and on_segment(q1, q2, p2))
            or (d3 == 0 and on_segment(p1, p2, q1)) or (d4 == 0 and on_segment(p1, p2, q2)))


def _validate_polygon(verts):
    n = len(verts)
    if n < 3:
        raise InvalidDomainError("polygon needs at least 3 vertices")
    pts = [(float(x), float(y)) for x, y in verts]
    area2 = sum(pts[i][0] * pts[(i + 1) % n][1] - pts[(i + 1) % n][0] * pts[i][1]
                for i in range(n))
    if not area2 > 0:
        raise InvalidDomainError("polygon must be positively oriented with positive area")
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _segments_cross(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]):
                raise InvalidDomainError("polygon edges intersect")
    for i in range(n):
        a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
        turn = math.atan2(
            (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]),
            (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]))
        # interior angle is pi - turn; a cusp means interior angle 0 or 2pi
        if abs(turn) > math.pi - 1e-12:
            raise InvalidDomainError(f"cusp at vertex {i}")


UNIT_SQUARE = Polygon(((0, 0), (1, 0), (1, 1), (0, 1)))

PRESETS = {
    "disk": Disk(1),
    "ellipse": Ellipse(1, "0.5"),
    "semidisk": SemiDisk(1),
    "square": UNIT_SQUARE,
}


def domain_from_descriptor(doc: dict) -> Domain:
    """Build a domain from {"type": ..., "r" | "a","b" | "vertices": ...}."""
    try:
        kind = doc["type"]
        if kind == "disk":
            return Disk(str(doc["r"]))
        if kind == "semidisk":
            return SemiDisk(str(doc["r"]))
        if kind == "ellipse":
            return Ellipse(str(doc["a"]), str(doc["b"]))
        if kind == "polygon":
            return Polygon(tuple((str(x), str(y)) for x, y in doc["vertices"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidDomainError(f"malformed domain descriptor: {exc}") from exc
    raise InvalidDomainError(f"unknown domain type {doc.get('type')!r}")


def domain_fingerprint(domain: Domain) -> str:
    blob = json.dumps(domain.descriptor(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


# ---------------------------------------------------------------------------
# Boundary arcs

@dataclass(frozen=True)
class Segment:
    z0: object
    z1: object

    def point(self, t, mp):
        """t in [0, 1]."""
        return self.z0 + t * (self.z1 - self.z0)

    def distance(self, z, mp):
        d = self.z1 - self.z0
        t = mp.re((z - self.z0) * d.conjugate()) / abs(d) ** 2
        t = min(max(t, mp.mpf(0)), mp.mpf(1))
        return abs(z - self.point(t, mp))


@dataclass(frozen=True)
class CircularArc:
    """Counterclockwise arc center + radius*exp(i*theta), start <= theta <= end."""

    center: object
    radius: object
    start: object
    end: object

    def distance(self, z, mp):
        w = z - self.center
        if w == 0:
            return mp.mpf(self.radius)
        theta = mp.arg(w)
        two_pi = 2 * mp.pi
        # shift theta into [start, start + 2pi)
        while theta < self.start:
            theta += two_pi
        while theta >= self.start + two_pi:
            theta -= two_pi
        if theta <= self.end:
            return abs(abs(w) - self.radius)
        ends = (self.center + self.radius * mp.expj(self.start),
                self.center + self.radius * mp.expj(self.end))
        return min(abs(z - e) for e in ends)


@dataclass(frozen=True)
class EllipticArc:
    """Full ellipse a*cos(t) + i*b*sin(t), counterclockwise."""

    a: object
    b: object

    def distance(self, z, mp):
        # Newton on the foot-point parameter, seeded from a coarse scan
        a, b = self.a, self.b
        x, y = mp.re(z), mp.im(z)

        def f(t):
            return (a * mp.cos(t) - x) ** 2 + (b * mp.sin(t) - y) ** 2

        ts = [2 * mp.pi * k / 256 for k in range(256)]
        t = min(ts, key=f)
        for _ in range(100):
            c, s = mp.cos(t), mp.sin(t)
            g = (b * b - a * a) * s * c + a * x * s - b * y * c
            dg = (b * b - a * a) * (c * c - s * s) + a * x * c + b * y * s
            if dg == 0:
                break
            step = g / dg
            t -= step
            if abs(step) < mp.eps * 16:
                break
        return mp.sqrt(f(t))


def boundary_arcs(domain: Domain, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list:
    """Positively oriented decomposition of the boundary into analytic arcs."""
    mp = ctx.mp
    if isinstance(domain, Disk):
        return [CircularArc(mp.mpc(0), to_mpf(domain.r, mp), mp.mpf(0), 2 * mp.pi)]
    if isinstance(domain, SemiDisk):
        r = to_mpf(domain.r, mp)
        return [Segment(mp.mpc(-r), mp.mpc(r)),
                CircularArc(mp.mpc(0), r, mp.mpf(0), mp.pi)]
    if isinstance(domain, Ellipse):
        return [EllipticArc(to_mpf(domain.a, mp), to_mpf(domain.b, mp))]
    if isinstance(domain, Polygon):
        pts = _polygon_points(domain, mp)
        return [Segment(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]
    raise InvalidDomainError(f"unsupported domain {domain!r}")


def _polygon_points(domain: Polygon, mp):
    return [to_mpc((x, y), mp) for x, y in domain.vertices]


def distance_to_boundary(z, domain: Domain, ctx: PrecisionContext = DEFAULT_CONTEXT):
    mp = ctx.mp
    z = to_mpc(z, mp)
    return min(arc.distance(z, mp) for arc in boundary_arcs(domain, ctx))


def contains(domain: Domain, z, ctx: PrecisionContext = DEFAULT_CONTEXT, tol=0) -> bool:
    """True if z lies in closure(G) or within ``tol`` of it."""
    return violation(domain, z, ctx) <= tol


def violation(domain: Domain, z, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Distance from z to closure(G); zero for points of the closed domain."""
    mp = ctx.mp
    z = to_mpc(z, mp)
    zero = mp.mpf(0)
    if isinstance(domain, Disk):
        return max(zero, abs(z) - to_mpf(domain.r, mp))
    if isinstance(domain, SemiDisk):
        if abs(z) <= to_mpf(domain.r, mp) and mp.im(z) >= 0:
            return zero
        return distance_to_boundary(z, domain, ctx)
    if isinstance(domain, Ellipse):
        a, b = to_mpf(domain.a, mp), to_mpf(domain.b, mp)
        if (mp.re(z) / a) ** 2 + (mp.im(z) / b) ** 2 <= 1:
            return zero
        return distance_to_boundary(z, domain, ctx)
    if isinstance(domain, Polygon):
        if _winding_inside(_polygon_points(domain, mp), z, mp):
            return zero
        return distance_to_boundary(z, domain, ctx)
    raise InvalidDomainError(f"unsupported domain {domain!r}")


def _winding_inside(pts, z, mp) -> bool:
    x, y = mp.re(z), mp.im(z)
    inside = False
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        ay, by = mp.im(a), mp.im(b)
        if (ay > y) != (by > y):
            xc = mp.re(a) + (y - ay) * (mp.re(b) - mp.re(a)) / (by - ay)
            if x < xc:
                inside = not inside
    return inside


def convex_hull(domain: Domain) -> Domain:
    """Disk, Ellipse and SemiDisk are convex; a polygon yields its hull polygon."""
    if not isinstance(domain, Polygon):
        return domain
    hull = _monotone_chain(list(domain.vertices))
    return Polygon(tuple(hull))


def _monotone_chain(verts):
    pts = sorted(set(verts), key=lambda v: (float(v[0]), float(v[1])))

    def cross(o, a, b):
        return ((float(a[0]) - float(o[0])) * (float(b[1]) - float(o[1]))
                - (float(a[1]) - float(o[1])) * (float(b[0]) - float(o[0])))

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def area(domain: Domain, ctx: PrecisionContext = DEFAULT_CONTEXT):
    return moment(0, 0, domain, ctx).real


def diameter(domain: Domain) -> float:
    if isinstance(domain, (Disk, SemiDisk)):
        return 2 * float(domain.r)
    if isinstance(domain, Ellipse):
        return 2 * float(domain.a)
    pts = [complex(float(x), float(y)) for x, y in domain.vertices]
    return max(abs(p - q) for p in pts for q in pts)


# ---------------------------------------------------------------------------
# Moments

def moment(m: int, n: int, domain: Domain, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """<z^m, z^n> over the domain, i.e. the area integral of z^m conj(z)^n."""
    if m < 0 or n < 0:
        raise ValueError("moment indices must be nonnegative")
    mp = ctx.mp
    if isinstance(domain, Disk):
        if m != n:
            return mp.mpc(0)
        r = to_mpf(domain.r, mp)
        return mp.mpc(mp.pi * r ** (2 * n + 2) / (n + 1))
    if isinstance(domain, SemiDisk):
        return _semidisk_moment(m, n, to_mpf(domain.r, mp), mp)
    if isinstance(domain, Ellipse):
        return _ellipse_moments(domain, [m], [n], m + n + 8, ctx)[0][0]
    if isinstance(domain, Polygon):
        k = -(-(m + n + 2) // 2) + 1
        return _polygon_moments(domain, [m], [n], k, ctx)[0][0]
    raise InvalidDomainError(f"unsupported domain {domain!r}")


def _semidisk_moment(m, n, r, mp):
    k = m - n
    scale = r ** (m + n + 2)
    if k == 0:
        return mp.mpc(mp.pi * scale / (m + n + 2))
    if k % 2:
        return mp.mpc(0, 2 * scale / (k * (m + n + 2)))
    return mp.mpc(0)


def _ellipse_moments(domain, ms, ns, nodes, ctx):
    # Green: int_G z^m conj(z)^n dA = 1/(2i(n+1)) oint z^m conj(z)^(n+1) dz;
    # the integrand is a trigonometric polynomial, so the trapezoid rule is exact.
    mp = ctx.mp
    a, b = to_mpf(domain.a, mp), to_mpf(domain.b, mp)
    zs, dzs = [], []
    for j in range(nodes):
        t = 2 * mp.pi * j / nodes
        c, s = mp.cos(t), mp.sin(t)
        zs.append(mp.mpc(a * c, b * s))
        dzs.append(mp.mpc(-a * s, b * c))
    return _green_sum(zs, [dz * 2 * mp.pi / nodes for dz in dzs], ms, ns, mp)


def _polygon_moments(domain, ms, ns, k, ctx):
    mp = ctx.mp
    rule = gauss_legendre_rule(k, ctx)
    pts = _polygon_points(domain, mp)
    zs, wdz = [], []
    for i in range(len(pts)):
        z0, z1 = pts[i], pts[(i + 1) % len(pts)]
        half = (z1 - z0) / 2
        mid = (z0 + z1) / 2
        for x, w in zip(rule.nodes, rule.weights):
            zs.append(mid + x * half)
            wdz.append(w * half)
    return _green_sum(zs, wdz, ms, ns, mp)


def _green_sum(zs, wdz, ms, ns, mp):
    """Rows m in ms, columns n in ns of (1/(2i(n+1))) sum_j z_j^m conj(z_j)^(n+1) w_j."""
    mmax, nmax = max(ms), max(ns)
    zpow = []
    for z in zs:
        row = [mp.mpc(1)]
        for _ in range(mmax):
            row.append(row[-1] * z)
        zpow.append(row)
    cpow = []
    for z, w in zip(zs, wdz):
        zc = z.conjugate()
        row = [zc * w]
        for _ in range(nmax):
            row.append(row[-1] * zc)
        cpow.append(row)
    out = []
    for m in ms:
        out.append([mp.fdot((zp[m], cp[n]) for zp, cp in zip(zpow, cpow))
                    / mp.mpc(0, 2 * (n + 1)) for n in ns])
    return out


def contour_moment(m: int, n: int, domain: Domain, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Green-identity moment via boundary quadrature on ``boundary_arcs``.

    Independent of the closed forms; used to cross-check them. Segments use
    exact Gauss-Legendre, circular arcs Gauss-Legendre in the angle with enough
    nodes to resolve the oscillation at working precision.
    """
    mp = ctx.mp
    total = mp.mpc(0)
    for arc in boundary_arcs(domain, ctx):
        if isinstance(arc, Segment):
            rule = gauss_legendre_rule(-(-(m + n + 2) // 2) + 1, ctx)
            half = (arc.z1 - arc.z0) / 2
            mid = (arc.z0 + arc.z1) / 2
            for x, w in zip(rule.nodes, rule.weights):
                z = mid + x * half
                total += w * half * z ** m * z.conjugate() ** (n + 1)
        elif isinstance(arc, CircularArc):
            span = arc.end - arc.start
            freq = m + n + 2
            k = int(float(span) * freq / 2) + ctx.bits // 3 + 8
            rule = gauss_legendre_rule(k, ctx)
            half = span / 2
            mid = (arc.start + arc.end) / 2
            for x, w in zip(rule.nodes, rule.weights):
                e = mp.expj(mid + x * half)
                z = arc.center + arc.radius * e
                dz = mp.mpc(0, 1) * arc.radius * e * half
                total += w * dz * z ** m * z.conjugate() ** (n + 1)
        else:
            # the full ellipse is a single closed arc: the trapezoid rule is exact
            return _ellipse_moments(domain, [m], [n], 2 * (m + n) + 16, ctx)[0][0]
    return total / mp.mpc(0, 2 * (n + 1))


@dataclass(frozen=True)
class MomentMatrix:
    order: int
    entries: tuple
    domain: Domain
    bits: int

    def __getitem__(self, idx):
        return self.entries[idx]

    def __len__(self):
        return len(self.entries)

    def rows(self) -> list:
        return [list(r) for r in self.entries]

    @property
    def fingerprint(self) -> str:
        digits = max(20, int(self.bits * 0.30103) + 2)
        h = hashlib.sha256()
        for row in self.entries:
            for v in row:
                h.update(f"{_nstr(v.real, digits)},{_nstr(v.imag, digits)};".encode())
        return h.hexdigest()[:32]


def _nstr(x, digits):
    return mpmath.nstr(x, digits, min_fixed=1, max_fixed=0)


def gram_matrix(N: int, domain: Domain, ctx: PrecisionContext = DEFAULT_CONTEXT) -> MomentMatrix:
    """(N+1)x(N+1) Hermitian matrix of <z^m, z^n>, upper triangle mirrored."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    mp = ctx.mp
    idx = list(range(N + 1))
    if isinstance(domain, Ellipse):
        full = _ellipse_moments(domain, idx, idx, 2 * N + 8, ctx)
    elif isinstance(domain, Polygon):
        full = _polygon_moments(domain, idx, idx, N + 2, ctx)
    else:
        full = [[moment(m, n, domain, ctx) if n <= m else None for n in idx] for m in idx]
    rows = [[None] * (N + 1) for _ in idx]
    for m in idx:
        for n in range(m + 1):
            v = mp.mpc(full[m][n])
            if m == n:
                v = mp.mpc(v.real)
            rows[m][n] = v
            rows[n][m] = v.conjugate()
    return MomentMatrix(N, tuple(tuple(r) for r in rows), domain, ctx.bits)
