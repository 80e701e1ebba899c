"""Floating-point primitives for inversive plane geometry.

Points, directed angles, generalized circles, inversion, spiral similarity
and triangle-level conjugations.  A generalized circle stores the equation

    a*(x^2 + y^2) + b*x + c*y + d = 0

normalized so that max(|a|,|b|,|c|,|d|) = 1; ``a == 0`` encodes a line.  The
unified representation keeps circles and lines closed under inversion, which
the quadrilateral constructions use constantly.

All tolerances are relative: an operation taking ``tol`` compares against
``tol * D`` where ``D`` is the diameter of its input point set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    CoincidentPoints,
    CollinearInput,
    ConcentricCircles,
    DegenerateRay,
    IdenticalCurves,
    IsTranslation,
    NonpositiveRatio,
    NotALine,
)

DEFAULT_TOL = 1e-9

_MACHINE_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> "Point":
        return Point(self.x * k, self.y * k)

    __rmul__ = __mul__

    def dot(self, other: "Point") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Point") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def to_complex(self) -> complex:
        return complex(self.x, self.y)

    @staticmethod
    def from_complex(z: complex) -> "Point":
        return Point(z.real, z.imag)


@dataclass(frozen=True)
class AtInfinity:
    """A point at infinity with a unit direction vector."""

    dx: float
    dy: float

    @staticmethod
    def along(dx: float, dy: float) -> "AtInfinity":
        n = math.hypot(dx, dy)
        if n == 0.0:
            return AtInfinity(1.0, 0.0)
        # canonical sign so (d) and (-d) compare equal
        if dx < 0 or (dx == 0 and dy < 0):
            dx, dy = -dx, -dy
        return AtInfinity(dx / n, dy / n)


class UndefinedPoint:
    """Poisoning value: operations consuming it return it unchanged."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDEFINED"


UNDEFINED = UndefinedPoint()

# A MaybePoint is a Point, an AtInfinity, or UNDEFINED.
MaybePoint = Point | AtInfinity | UndefinedPoint


def is_finite(p: MaybePoint) -> bool:
    return isinstance(p, Point)


def diameter(points) -> float:
    """Diameter of a point set; the scale for all relative tolerances."""
    pts = [p for p in points if isinstance(p, Point)]
    if len(pts) < 2:
        return 1.0
    best = 0.0
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            best = max(best, p.dist(q))
    return best if best > 0.0 else 1.0


@dataclass(frozen=True)
class DirectedAngle:
    """An angle between lines, reduced modulo pi to [0, pi)."""

    value: float

    @staticmethod
    def of(raw: float) -> "DirectedAngle":
        v = math.fmod(raw, math.pi)
        if v < 0.0:
            v += math.pi
        if v >= math.pi:
            v -= math.pi
        return DirectedAngle(v)

    def __add__(self, other: "DirectedAngle") -> "DirectedAngle":
        return DirectedAngle.of(self.value + other.value)

    def __sub__(self, other: "DirectedAngle") -> "DirectedAngle":
        return DirectedAngle.of(self.value - other.value)

    def distance_to(self, other: "DirectedAngle") -> float:
        """Circular distance on the mod-pi circle."""
        d = abs(self.value - other.value)
        return min(d, math.pi - d)


@dataclass(frozen=True)
class GenCircle:
    """Generalized circle a(x^2+y^2) + bx + cy + d = 0 (a = 0 means line)."""

    a: float
    b: float
    c: float
    d: float

    @staticmethod
    def from_coeffs(a: float, b: float, c: float, d: float) -> "GenCircle":
        m = max(abs(a), abs(b), abs(c), abs(d))
        if m == 0.0:
            raise ValueError("all coefficients zero")
        coeffs = [a / m, b / m, c / m, d / m]
        # canonical sign: make the largest-magnitude coefficient positive
        idx = max(range(4), key=lambda i: abs(coeffs[i]))
        if coeffs[idx] < 0:
            coeffs = [-v for v in coeffs]
        return GenCircle(*coeffs)

    @staticmethod
    def circle(center: Point, radius: float) -> "GenCircle":
        if radius <= 0.0 or not math.isfinite(radius):
            raise ValueError(f"invalid radius {radius}")
        return GenCircle.from_coeffs(
            1.0, -2.0 * center.x, -2.0 * center.y,
            center.x * center.x + center.y * center.y - radius * radius,
        )

    @staticmethod
    def line_through(p: Point, q: Point) -> "GenCircle":
        if p.dist(q) == 0.0:
            raise CoincidentPoints("line through coincident points")
        # normal (b, c) perpendicular to q - p
        b = p.y - q.y
        c = q.x - p.x
        d = -(b * p.x + c * p.y)
        return GenCircle.from_coeffs(0.0, b, c, d)

    @staticmethod
    def line_point_direction(p: Point, direction: Point) -> "GenCircle":
        return GenCircle.line_through(p, p + direction)

    @property
    def is_line(self) -> bool:
        return self.a == 0.0

    def center(self) -> Point:
        if self.is_line:
            raise NotALine("a line has no center")
        return Point(-self.b / (2.0 * self.a), -self.c / (2.0 * self.a))

    def radius(self) -> float:
        if self.is_line:
            raise NotALine("a line has no radius")
        disc = self.b * self.b + self.c * self.c - 4.0 * self.a * self.d
        if disc <= 0.0:
            raise ValueError("degenerate circle (empty or a point)")
        return math.sqrt(disc) / (2.0 * abs(self.a))

    def direction(self) -> Point:
        """Unit direction vector of a line."""
        if not self.is_line:
            raise NotALine("direction is defined for lines only")
        n = math.hypot(self.b, self.c)
        return Point(-self.c / n, self.b / n)

    def evaluate(self, p: Point) -> float:
        return (self.a * (p.x * p.x + p.y * p.y)
                + self.b * p.x + self.c * p.y + self.d)

    def distance_to(self, p: Point) -> float:
        """Geometric distance from a point to the curve."""
        if self.is_line:
            return abs(self.b * p.x + self.c * p.y + self.d) / math.hypot(self.b, self.c)
        return abs(p.dist(self.center()) - self.radius())

    def point_at(self, t: float) -> Point:
        """Sample point: angle parameter on a circle, arclength on a line."""
        if self.is_line:
            n = math.hypot(self.b, self.c)
            base = Point(-self.b * self.d / (n * n), -self.c * self.d / (n * n))
            return base + self.direction() * t
        o = self.center()
        r = self.radius()
        return Point(o.x + r * math.cos(t), o.y + r * math.sin(t))


def circles_equal(g1: GenCircle, g2: GenCircle, tol: float = DEFAULT_TOL) -> bool:
    u = GenCircle.from_coeffs(g1.a, g1.b, g1.c, g1.d)
    v = GenCircle.from_coeffs(g2.a, g2.b, g2.c, g2.d)
    res = max(abs(u.a - v.a), abs(u.b - v.b), abs(u.c - v.c), abs(u.d - v.d))
    return res <= max(tol, 64 * _MACHINE_EPS)


@dataclass(frozen=True)
class SpiralSimilarity:
    """Direct similarity: rotation by ``angle`` and scaling by ``ratio`` about ``center``."""

    center: Point
    ratio: float
    angle: float

    def apply(self, p: MaybePoint) -> MaybePoint:
        if isinstance(p, UndefinedPoint):
            return UNDEFINED
        if isinstance(p, AtInfinity):
            z = complex(p.dx, p.dy) * complex(math.cos(self.angle), math.sin(self.angle))
            return AtInfinity.along(z.real, z.imag)
        z = (p - self.center).to_complex()
        z *= self.ratio * complex(math.cos(self.angle), math.sin(self.angle))
        return self.center + Point.from_complex(z)


@dataclass(frozen=True)
class Triangle:
    p1: Point
    p2: Point
    p3: Point

    def __post_init__(self):
        scale = diameter([self.p1, self.p2, self.p3])
        area2 = abs((self.p2 - self.p1).cross(self.p3 - self.p1))
        # reject when the least vertex-to-opposite-line distance is below tol*D
        longest = max(self.p1.dist(self.p2), self.p2.dist(self.p3), self.p3.dist(self.p1))
        if longest == 0.0 or area2 / longest < DEFAULT_TOL * scale:
            raise CollinearInput("triangle vertices are collinear within tolerance")

    def vertices(self):
        return (self.p1, self.p2, self.p3)

    def centroid(self) -> Point:
        return Point((self.p1.x + self.p2.x + self.p3.x) / 3.0,
                     (self.p1.y + self.p2.y + self.p3.y) / 3.0)


# ---------------------------------------------------------------------------
# basic constructions


def circumcircle(p: Point, q: Point, r: Point, tol: float = DEFAULT_TOL) -> GenCircle:
    """Circle through three points.

    Raises CollinearInput when the triangle height falls below tol * diameter.
    """
    scale = diameter([p, q, r])
    area2 = (q - p).cross(r - p)
    longest = max(p.dist(q), q.dist(r), r.dist(p))
    if longest == 0.0 or abs(area2) / longest < tol * scale:
        raise CollinearInput("cannot circumscribe collinear points")
    # perpendicular bisector equations: 2(q-p).X = |q|^2-|p|^2 etc.
    ax, ay = q.x - p.x, q.y - p.y
    bx, by = r.x - p.x, r.y - p.y
    ka = 0.5 * (q.dot(q) - p.dot(p))
    kb = 0.5 * (r.dot(r) - p.dot(p))
    det = ax * by - ay * bx
    cx = (ka * by - ay * kb) / det
    cy = (ax * kb - ka * bx) / det
    center = Point(cx, cy)
    radius = (center.dist(p) + center.dist(q) + center.dist(r)) / 3.0
    return GenCircle.circle(center, radius)


def perpendicular_bisector(p: Point, q: Point) -> GenCircle:
    if p.dist(q) == 0.0:
        raise CoincidentPoints("perpendicular bisector of coincident points")
    b = 2.0 * (q.x - p.x)
    c = 2.0 * (q.y - p.y)
    d = p.dot(p) - q.dot(q)
    return GenCircle.from_coeffs(0.0, b, c, d)


def _line_line(g1: GenCircle, g2: GenCircle, tol: float) -> list[Point]:
    det = g1.b * g2.c - g1.c * g2.b
    n1 = math.hypot(g1.b, g1.c)
    n2 = math.hypot(g2.b, g2.c)
    if abs(det) <= tol * n1 * n2:
        return []
    x = (-g1.d * g2.c + g1.c * g2.d) / det
    y = (-g1.b * g2.d + g1.d * g2.b) / det
    return [Point(x, y)]


def _circle_line(circ: GenCircle, line: GenCircle, tol: float) -> list[Point]:
    o = circ.center()
    r = circ.radius()
    n = math.hypot(line.b, line.c)
    # signed distance from center to line
    t = (line.b * o.x + line.c * o.y + line.d) / n
    foot = Point(o.x - line.b / n * t, o.y - line.c / n * t)
    h2 = r * r - t * t
    clip = max((tol * r) ** 2, 64.0 * _MACHINE_EPS * r * r)
    if h2 <= 0.0:
        if h2 > -clip:
            return [foot]
        return []
    h = math.sqrt(h2)
    u = Point(-line.c / n, line.b / n)
    return [foot + u * h, foot + u * (-h)]


def intersect(g1: GenCircle, g2: GenCircle, tol: float = DEFAULT_TOL) -> list[Point]:
    """Intersection points of two generalized circles, 0 to 2 of them.

    Two-point results are ordered lexicographically by (x, y) for
    reproducibility; tangency yields a single point.
    """
    if circles_equal(g1, g2, tol):
        raise IdenticalCurves("curves coincide within tolerance")
    if g1.is_line and g2.is_line:
        pts = _line_line(g1, g2, tol)
    elif g1.is_line:
        pts = _circle_line(g2, g1, tol)
    elif g2.is_line:
        pts = _circle_line(g1, g2, tol)
    else:
        # radical line of the two circles, then circle-line intersection
        rb = g1.b / g1.a - g2.b / g2.a
        rc = g1.c / g1.a - g2.c / g2.a
        rd = g1.d / g1.a - g2.d / g2.a
        if max(abs(rb), abs(rc)) == 0.0:
            return []  # concentric, unequal radii
        radical = GenCircle.from_coeffs(0.0, rb, rc, rd)
        pts = _circle_line(g1, radical, tol)
    return sorted(pts, key=lambda p: (p.x, p.y))


def invert_point(mirror: GenCircle, p: MaybePoint, tol: float = DEFAULT_TOL) -> MaybePoint:
    """Inversive image of a point.

    A line mirror acts as a reflection (the natural degenerate case).  The
    center of a circle mirror maps to infinity and vice versa; UNDEFINED
    poisons through.
    """
    if isinstance(p, UndefinedPoint):
        return UNDEFINED
    if mirror.is_line:
        if isinstance(p, AtInfinity):
            n = math.hypot(mirror.b, mirror.c)
            nb, nc = mirror.b / n, mirror.c / n
            dot = p.dx * nb + p.dy * nc
            return AtInfinity.along(p.dx - 2.0 * dot * nb, p.dy - 2.0 * dot * nc)
        n = math.hypot(mirror.b, mirror.c)
        t = (mirror.b * p.x + mirror.c * p.y + mirror.d) / n
        return Point(p.x - 2.0 * t * mirror.b / n, p.y - 2.0 * t * mirror.c / n)
    o = mirror.center()
    r = mirror.radius()
    if isinstance(p, AtInfinity):
        return o
    v = p - o
    rho2 = v.dot(v)
    if rho2 < (tol * r) ** 2:
        return AtInfinity.along(1.0, 0.0)
    k = r * r / rho2
    return o + v * k


def invert_circle(mirror: GenCircle, g: GenCircle, tol: float = DEFAULT_TOL) -> GenCircle:
    """Inversive image of a generalized circle."""
    if mirror.is_line:
        if g.is_line:
            p0 = invert_point(mirror, g.point_at(0.0))
            p1 = invert_point(mirror, g.point_at(1.0))
            return GenCircle.line_through(p0, p1)
        return GenCircle.circle(invert_point(mirror, g.center()), g.radius())
    o = mirror.center()
    k = mirror.radius() ** 2
    # translate so the mirror center is the origin
    a = g.a
    b = g.b + 2.0 * g.a * o.x
    c = g.c + 2.0 * g.a * o.y
    d = g.evaluate(o)
    # inversion about the origin with power k
    a2, b2, c2, d2 = d, b * k, c * k, a * k * k
    # translate back
    b3 = b2 - 2.0 * a2 * o.x
    c3 = c2 - 2.0 * a2 * o.y
    d3 = a2 * o.dot(o) - b2 * o.x - c2 * o.y + d2
    out = GenCircle.from_coeffs(a2, b3, c3, d3)
    # snap to an exact line when the curve passed through the mirror center
    if out.a != 0.0 and abs(out.a) < tol * max(abs(out.b), abs(out.c)):
        out = GenCircle.from_coeffs(0.0, out.b, out.c, out.d)
    return out


def apollonius_circle(p1: Point, p2: Point, ratio: float,
                      tol: float = DEFAULT_TOL) -> GenCircle:
    """Locus of X with |X p1| / |X p2| = ratio; a line when ratio = 1."""
    if not (ratio > 0.0) or not math.isfinite(ratio):
        raise NonpositiveRatio(f"ratio must be positive, got {ratio}")
    if p1.dist(p2) == 0.0:
        raise CoincidentPoints("Apollonius circle of coincident points")
    k2 = ratio * ratio
    a = 1.0 - k2
    if abs(a) < tol * max(1.0, k2):
        return perpendicular_bisector(p1, p2)
    b = -2.0 * (p1.x - k2 * p2.x)
    c = -2.0 * (p1.y - k2 * p2.y)
    d = p1.dot(p1) - k2 * p2.dot(p2)
    return GenCircle.from_coeffs(a, b, c, d)


def circle_of_similitude(o1: GenCircle, o2: GenCircle,
                         tol: float = DEFAULT_TOL) -> GenCircle:
    """Apollonius circle of the centers with the ratio of the radii."""
    c1, c2 = o1.center(), o2.center()
    scale = max(o1.radius(), o2.radius(), c1.dist(c2))
    if c1.dist(c2) < tol * scale:
        raise ConcentricCircles("circle of similitude of concentric circles")
    return apollonius_circle(c1, c2, o1.radius() / o2.radius(), tol)


def radical_axis(o1: GenCircle, o2: GenCircle, tol: float = DEFAULT_TOL) -> GenCircle:
    """Line of points with equal power with respect to both circles."""
    if o1.is_line or o2.is_line:
        raise NotALine("radical axis needs two true circles")
    c1, c2 = o1.center(), o2.center()
    scale = max(o1.radius(), o2.radius(), c1.dist(c2))
    if c1.dist(c2) < tol * scale:
        raise ConcentricCircles("radical axis of concentric circles")
    b = o1.b / o1.a - o2.b / o2.a
    c = o1.c / o1.a - o2.c / o2.a
    d = o1.d / o1.a - o2.d / o2.a
    return GenCircle.from_coeffs(0.0, b, c, d)


def mid_circles(o1: GenCircle, o2: GenCircle, tol: float = DEFAULT_TOL) -> list[GenCircle]:
    """Circles (or symmetry line) whose inversion swaps o1 and o2."""
    if circles_equal(o1, o2, tol):
        raise IdenticalCurves("mid-circles of identical circles")
    c1, c2 = o1.center(), o2.center()
    r1, r2 = o1.radius(), o2.radius()
    scale = max(r1, r2, c1.dist(c2))
    if c1.dist(c2) < tol * scale:
        raise ConcentricCircles("mid-circles of concentric circles")
    out: list[GenCircle] = []
    for t in (r2 / r1, -r2 / r1):
        if abs(1.0 - t) < tol:
            # congruent circles: the "external" mid-circle is the symmetry line
            out.append(perpendicular_bisector(c1, c2))
            continue
        e = (c2 - c1 * t) * (1.0 / (1.0 - t))
        power = t * (e.dist(c1) ** 2 - r1 * r1)
        # tangent pairs give power ~ eps * scale^2; keep the floor above it
        if power > max(tol * tol, 1e-13) * scale * scale:
            out.append(GenCircle.circle(e, math.sqrt(power)))
    return out


def power_of_point(p: Point, o: GenCircle) -> float:
    if o.is_line:
        raise NotALine("power of a point needs a true circle")
    r = o.radius()
    return p.dist(o.center()) ** 2 - r * r


def spiral_from_two_pairs(a: Point, a2: Point, b: Point, b2: Point,
                          tol: float = DEFAULT_TOL) -> SpiralSimilarity:
    """The direct similarity z -> alpha*z + beta with a -> a2 and b -> b2.

    Raises IsTranslation when alpha = 1 (no finite fixed point).
    """
    scale = diameter([a, a2, b, b2])
    if a.dist(b) < tol * scale or a2.dist(b2) < tol * scale:
        raise CoincidentPoints("source or image points coincide")
    za, za2, zb, zb2 = (p.to_complex() for p in (a, a2, b, b2))
    alpha = (za2 - zb2) / (za - zb)
    if abs(alpha - 1.0) * a.dist(b) < tol * scale:
        raise IsTranslation("the two displacement vectors are equal")
    beta = za2 - alpha * za
    center = beta / (1.0 - alpha)
    angle = math.atan2(alpha.imag, alpha.real)
    if angle < 0.0 and math.pi + angle < 1e-9:
        angle = math.pi  # keep rotation angles in (-pi, pi]
    return SpiralSimilarity(Point.from_complex(center), abs(alpha), angle)


def directed_angle(a: Point, vertex: Point, b: Point) -> DirectedAngle:
    """Angle from line (vertex, a) to line (vertex, b), modulo pi."""
    u = a - vertex
    v = b - vertex
    if u.norm() == 0.0 or v.norm() == 0.0:
        raise DegenerateRay("ray endpoint coincides with the vertex")
    return DirectedAngle.of(math.atan2(v.y, v.x) - math.atan2(u.y, u.x))


def foot_of_perpendicular(line: GenCircle, p: Point) -> Point:
    if not line.is_line:
        raise NotALine("foot of perpendicular needs a line")
    n2 = line.b * line.b + line.c * line.c
    t = (line.b * p.x + line.c * p.y + line.d) / n2
    return Point(p.x - line.b * t, p.y - line.c * t)


def orthocenter(p: Point, q: Point, r: Point) -> Point:
    """Orthocenter via H = P + Q + R - 2*O."""
    o = circumcircle(p, q, r).center()
    return Point(p.x + q.x + r.x - 2.0 * o.x, p.y + q.y + r.y - 2.0 * o.y)


def reflect_point_in_line(line: GenCircle, p: Point) -> Point:
    f = foot_of_perpendicular(line, p)
    return Point(2.0 * f.x - p.x, 2.0 * f.y - p.y)


# ---------------------------------------------------------------------------
# triangle conjugations


def _signed_area(p: Point, q: Point, r: Point) -> float:
    return 0.5 * (q - p).cross(r - p)


def isogonal_conjugate_triangle(t: Triangle, p: MaybePoint,
                                tol: float = DEFAULT_TOL) -> MaybePoint:
    """Isogonal conjugate of p with respect to triangle t.

    Classical degeneracies are mapped to MaybePoint tags: a point on the
    circumcircle goes to infinity, a point on a side line collapses to the
    opposite vertex (the limit of the construction), a vertex is UNDEFINED.
    """
    if isinstance(p, UndefinedPoint):
        return UNDEFINED
    if isinstance(p, AtInfinity):
        # conjugate of a point at infinity lies on the circumcircle; not
        # needed by the constructions here, so treat it as undefined
        return UNDEFINED
    va, vb, vc = t.vertices()
    scale = diameter([va, vb, vc, p])
    x = _signed_area(p, vb, vc)
    y = _signed_area(va, p, vc)
    z = _signed_area(va, vb, p)
    thresh = tol * scale * scale
    on_side = [abs(v) < thresh for v in (x, y, z)]
    if sum(on_side) >= 2:
        return UNDEFINED
    if on_side[0]:
        return va
    if on_side[1]:
        return vb
    if on_side[2]:
        return vc
    a2 = vb.dist(vc) ** 2
    b2 = va.dist(vc) ** 2
    c2 = va.dist(vb) ** 2
    u = a2 * y * z
    v = b2 * x * z
    w = c2 * x * y
    s = u + v + w
    num = va * u + vb * v + vc * w
    if abs(s) < tol * (abs(u) + abs(v) + abs(w)):
        return AtInfinity.along(num.x, num.y)
    return num * (1.0 / s)


def isodynamic_points(t: Triangle, tol: float = DEFAULT_TOL):
    """Both isodynamic points; the one inside the circumcircle comes first.

    For an equilateral triangle the second point is at infinity.
    """
    va, vb, vc = t.vertices()
    la = vb.dist(vc)   # opposite va
    lb = va.dist(vc)   # opposite vb
    lc = va.dist(vb)   # opposite vc
    scale = max(la, lb, lc)
    if max(abs(la - lb), abs(lb - lc), abs(la - lc)) < tol * scale:
        return (t.centroid(), AtInfinity.along(1.0, 0.0))
    circ = circumcircle(va, vb, vc)
    # |X va| / |X vb| = lb / la on the first Apollonius circle, etc.
    g1 = apollonius_circle(va, vb, lb / la, tol)
    g2 = apollonius_circle(vb, vc, lc / lb, tol)
    pts = intersect(g1, g2, tol)
    if len(pts) < 2:
        # nearly equilateral: the two points collapse toward the center
        return (t.centroid(), AtInfinity.along(1.0, 0.0))
    o, r = circ.center(), circ.radius()
    pts = sorted(pts, key=lambda q: q.dist(o))
    first, second = pts[0], pts[1]
    if first.dist(o) > r:
        first, second = second, first
    return (first, second)
