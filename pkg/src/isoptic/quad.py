"""Quadrilateral constructions: triad circles, the generation maps, the
similarity ratio, the isoptic point W by several routes, the Simson point,
pedal and Varignon parallelograms, isogonal conjugation with respect to a
quadrilateral, and the reconstruction procedures.

Vertex conventions: a quadrilateral is the ordered tuple (A, B, C, D).  The
triad circles are o1 = (D A B), o2 = (A B C), o3 = (B C D), o4 = (C D A); the
center of o_i is the i-th vertex of the next generation, so A2 = center(o1)
and so on cyclically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    CollinearInput,
    CyclicDegeneration,
    DegenerateConjugate,
    IllConditionedAngles,
    NoIntersection,
    NonCollinearFeet,
    NonConvergent,
    OrthocentricDegeneration,
    ParallelConsecutiveLines,
    PointAtInfinity,
    Underdetermined,
)
from .kernel import (
    DEFAULT_TOL,
    AtInfinity,
    DirectedAngle,
    GenCircle,
    MaybePoint,
    Point,
    SpiralSimilarity,
    Triangle,
    UNDEFINED,
    UndefinedPoint,
    circle_of_similitude,
    circumcircle,
    diameter,
    directed_angle,
    foot_of_perpendicular,
    intersect,
    invert_point,
    is_finite,
    isogonal_conjugate_triangle,
    orthocenter,
    spiral_from_two_pairs,
)


@dataclass(frozen=True)
class Quadrilateral:
    """Four ordered, pairwise distinct vertices with no collinear triple."""

    a: Point
    b: Point
    c: Point
    d: Point

    def __post_init__(self):
        vs = self.vertices()
        scale = diameter(vs)
        for i in range(4):
            for j in range(i + 1, 4):
                if vs[i].dist(vs[j]) < DEFAULT_TOL * scale:
                    raise CollinearInput("coincident vertices")
        for i in range(4):
            trip = [vs[j] for j in range(4) if j != i]
            area2 = abs((trip[1] - trip[0]).cross(trip[2] - trip[0]))
            longest = max(trip[0].dist(trip[1]), trip[1].dist(trip[2]),
                          trip[0].dist(trip[2]))
            if area2 / longest < DEFAULT_TOL * scale:
                raise CollinearInput("three vertices are collinear within tolerance")

    def vertices(self) -> tuple[Point, Point, Point, Point]:
        return (self.a, self.b, self.c, self.d)

    def scale(self) -> float:
        return diameter(self.vertices())

    def centroid(self) -> Point:
        vs = self.vertices()
        return Point(sum(v.x for v in vs) / 4.0, sum(v.y for v in vs) / 4.0)

    def area(self) -> float:
        vs = self.vertices()
        s = 0.0
        for i in range(4):
            p, q = vs[i], vs[(i + 1) % 4]
            s += p.cross(q)
        return abs(s) / 2.0

    def reordered(self, order: str) -> "Quadrilateral":
        """Same vertex set in a different cyclic order, e.g. 'acbd'."""
        m = {"a": self.a, "b": self.b, "c": self.c, "d": self.d}
        return Quadrilateral(*(m[ch] for ch in order))


@dataclass(frozen=True)
class TriadSystem:
    o1: GenCircle
    o2: GenCircle
    o3: GenCircle
    o4: GenCircle

    @property
    def circles(self) -> tuple[GenCircle, ...]:
        return (self.o1, self.o2, self.o3, self.o4)

    @property
    def centers(self) -> tuple[Point, ...]:
        return tuple(o.center() for o in self.circles)

    @property
    def radii(self) -> tuple[float, ...]:
        return tuple(o.radius() for o in self.circles)


@dataclass(frozen=True)
class ShapeClass:
    convex: bool
    cyclic: bool
    orthocentric: bool
    trapezoid: bool
    parallelogram: bool

    @property
    def concave(self) -> bool:
        return not self.convex


@dataclass(frozen=True)
class AngleDecomposition:
    """Interior angles and the eight side-diagonal directed angles.

    At each vertex the first sub-angle runs from the outgoing side to the
    diagonal and the second from the diagonal to the incoming side, so that
    first + second = interior angle modulo pi.
    """

    alpha: float
    beta: float
    gamma: float
    delta: float
    alpha1: DirectedAngle
    alpha2: DirectedAngle
    beta1: DirectedAngle
    beta2: DirectedAngle
    gamma1: DirectedAngle
    gamma2: DirectedAngle
    delta1: DirectedAngle
    delta2: DirectedAngle


@dataclass
class AnalysisReport:
    """Everything derived from one quadrilateral, with invariant residuals."""

    quad: Quadrilateral
    triads: TriadSystem
    r: float
    w: MaybePoint
    s: MaybePoint
    shape: ShapeClass
    pedal_w: list[Point] | None
    pedal_s: list[Point] | None
    varignon: list[Point]
    isoptic_quantity: float | None
    residuals: dict[str, float] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# angles and shape


def interior_angles(q: Quadrilateral) -> tuple[float, float, float, float]:
    """Interior angles in (0, 2*pi); a reflex vertex of a concave
    quadrilateral gets its actual reflex angle."""
    vs = q.vertices()
    signed = 0.0
    for i in range(4):
        signed += vs[i].cross(vs[(i + 1) % 4])
    orient = 1.0 if signed > 0.0 else -1.0
    out = []
    for i in range(4):
        v = vs[i]
        nxt = vs[(i + 1) % 4] - v
        prv = vs[(i - 1) % 4] - v
        ang = math.atan2(orient * nxt.cross(prv), nxt.dot(prv))
        if ang < 0.0:
            ang += 2.0 * math.pi
        out.append(ang)
    return tuple(out)


def noncyclicity_measure(q: Quadrilateral) -> float:
    """|alpha + gamma - pi|; zero exactly for cyclic quadrilaterals."""
    a, _, g, _ = interior_angles(q)
    return abs(a + g - math.pi)


def _cyclic_distance(q: Quadrilateral) -> float:
    """Scale-free distance of vertex D from the circumcircle of A, B, C."""
    circ = circumcircle(q.a, q.b, q.c)
    return circ.distance_to(q.d) / q.scale()


def is_cyclic(q: Quadrilateral, tol: float = DEFAULT_TOL) -> bool:
    return _cyclic_distance(q) < tol


def classify(q: Quadrilateral, tol: float = DEFAULT_TOL) -> ShapeClass:
    vs = q.vertices()
    scale = q.scale()
    crosses = []
    for i in range(4):
        e1 = vs[(i + 1) % 4] - vs[i]
        e2 = vs[(i + 2) % 4] - vs[(i + 1) % 4]
        crosses.append(e1.cross(e2))
    convex = all(c > 0 for c in crosses) or all(c < 0 for c in crosses)

    cyclic = is_cyclic(q, tol)

    ortho = True
    for i in range(4):
        rest = [vs[j] for j in range(4) if j != i]
        try:
            h = orthocenter(*rest)
        except CollinearInput:
            ortho = False
            break
        if vs[i].dist(h) > tol * scale:
            ortho = False
            break

    def parallel(u: Point, v: Point) -> bool:
        return abs(u.cross(v)) / (u.norm() * v.norm()) < 1e3 * tol

    ab_cd = parallel(vs[1] - vs[0], vs[2] - vs[3])
    bc_da = parallel(vs[2] - vs[1], vs[3] - vs[0])
    trapezoid = ab_cd or bc_da
    parallelogram = ab_cd and bc_da
    return ShapeClass(convex=convex, cyclic=cyclic, orthocentric=ortho,
                      trapezoid=trapezoid, parallelogram=parallelogram)


def similarity_ratio(q: Quadrilateral, tol: float = DEFAULT_TOL) -> float:
    """r = (cot a + cot g)(cot b + cot d) / 4 over the interior angles.

    Negative for convex noncyclic, zero for cyclic, >= 1 for concave.
    """
    angles = interior_angles(q)
    angle_tol = math.sqrt(tol)
    for ang in angles:
        if min(abs(ang), abs(ang - math.pi), abs(ang - 2.0 * math.pi)) < angle_tol:
            raise IllConditionedAngles(f"interior angle {ang} too close to a multiple of pi")
    a, b, g, d = angles
    cot = lambda t: math.cos(t) / math.sin(t)
    return 0.25 * (cot(a) + cot(g)) * (cot(b) + cot(d))


def angle_decomposition(q: Quadrilateral) -> AngleDecomposition:
    a, b, g, d = interior_angles(q)
    A, B, C, D = q.vertices()
    return AngleDecomposition(
        alpha=a, beta=b, gamma=g, delta=d,
        alpha1=directed_angle(B, A, C), alpha2=directed_angle(C, A, D),
        beta1=directed_angle(C, B, D), beta2=directed_angle(D, B, A),
        gamma1=directed_angle(D, C, A), gamma2=directed_angle(A, C, B),
        delta1=directed_angle(A, D, B), delta2=directed_angle(B, D, C),
    )


def cotangent_identity_residuals(q: Quadrilateral) -> tuple[float, float]:
    """Residuals of the two side-diagonal cotangent identities against 4r."""
    dec = angle_decomposition(q)
    cot = lambda t: math.cos(t) / math.sin(t)
    lhs = 4.0 * similarity_ratio(q)
    # pairing fixed by requiring equality with 4*r of the reordered
    # quadrilaterals ACBD / ACDB, whose ratio coincides with the original
    r1 = (cot(dec.alpha1.value) - cot(dec.delta2.value)) * \
         (cot(dec.beta2.value) - cot(dec.gamma1.value))
    r2 = (cot(dec.alpha2.value) - cot(dec.beta1.value)) * \
         (cot(dec.delta1.value) - cot(dec.gamma2.value))
    scale = max(1.0, abs(lhs))
    return (abs(lhs - r1) / scale, abs(lhs - r2) / scale)


# ---------------------------------------------------------------------------
# triad circles and the generation maps


def triad_circles(q: Quadrilateral, tol: float = DEFAULT_TOL) -> TriadSystem:
    A, B, C, D = q.vertices()
    try:
        return TriadSystem(
            o1=circumcircle(D, A, B, tol),
            o2=circumcircle(A, B, C, tol),
            o3=circumcircle(B, C, D, tol),
            o4=circumcircle(C, D, A, tol),
        )
    except CollinearInput as exc:
        raise CollinearInput(f"collinear triad: {exc}") from exc


def next_generation(q: Quadrilateral, tol: float = DEFAULT_TOL) -> Quadrilateral:
    """Quadrilateral of the triad-circle centers.

    Raises CyclicDegeneration (carrying the circumcenter) when the input is
    cyclic, since all four centers then coincide.
    """
    if is_cyclic(q, tol):
        raise CyclicDegeneration("cyclic quadrilateral degenerates to a point",
                                 point=circumcircle(q.a, q.b, q.c).center())
    return Quadrilateral(*triad_circles(q, tol).centers)


def prev_generation(q: Quadrilateral, tol: float = DEFAULT_TOL) -> Quadrilateral:
    """Reverse of the perpendicular-bisector step by isogonal conjugation.

    Treating q as a second-generation quadrilateral (A2, B2, C2, D2), each
    first-generation vertex is the conjugate of the opposite vertex in the
    triangle of the remaining three.
    """
    A2, B2, C2, D2 = q.vertices()
    recipe = [
        (Triangle(D2, A2, B2), C2),
        (Triangle(A2, B2, C2), D2),
        (Triangle(B2, C2, D2), A2),
        (Triangle(C2, D2, A2), B2),
    ]
    out = []
    for tri, p in recipe:
        img = isogonal_conjugate_triangle(tri, p, tol)
        if not is_finite(img):
            raise OrthocentricDegeneration("isogonal conjugate escapes to infinity")
        out.append(img)
    return Quadrilateral(*out)


def generation_spiral(q: Quadrilateral, tol: float = DEFAULT_TOL) -> SpiralSimilarity:
    """Direct similarity taking the quadrilateral to its second successor."""
    q3 = next_generation(next_generation(q, tol), tol)
    return spiral_from_two_pairs(q.a, q3.a, q.b, q3.b, tol)


# ---------------------------------------------------------------------------
# the isoptic point W


def _cs_pair_intersection(g1: GenCircle, g2: GenCircle, exclude: Point,
                          scale: float, tol: float) -> MaybePoint:
    """Second intersection of two circles both passing through `exclude`."""
    pts = intersect(g1, g2, tol)
    pts = [p for p in pts if p.dist(exclude) > tol * scale]
    if not pts:
        return UNDEFINED
    return max(pts, key=lambda p: p.dist(exclude))


def _orthocentric_direction(triads: TriadSystem, tol: float) -> AtInfinity:
    # all triad circles of an orthocentric system are congruent, so the CS
    # curves are parallel lines; W is their common point at infinity
    cs = circle_of_similitude(triads.o1, triads.o2, tol)
    d = cs.direction()
    return AtInfinity.along(d.x, d.y)


def isoptic_point(q: Quadrilateral, tol: float = DEFAULT_TOL) -> MaybePoint:
    """The point lying on all six circles of similitude of the triad circles.

    Cyclic inputs give the circumcenter, orthocentric inputs the point at
    infinity in the common direction of the (then parallel) CS lines.
    Near-cyclic inputs switch to the better conditioned inversive formula.
    """
    shape = classify(q, tol)
    if shape.cyclic:
        return circumcircle(q.a, q.b, q.c).center()
    triads = triad_circles(q, tol)
    if shape.orthocentric:
        return _orthocentric_direction(triads, tol)
    if _cyclic_distance(q) < 1e3 * tol:
        return isoptic_point_via_inversion(q, tol)
    cs12 = circle_of_similitude(triads.o1, triads.o2, tol)
    cs14 = circle_of_similitude(triads.o1, triads.o4, tol)
    return _cs_pair_intersection(cs12, cs14, q.a, q.scale(), tol)


def _aitken(seq: list[float], scale: float) -> float:
    x0, x1, x2 = seq[-3], seq[-2], seq[-1]
    den = x2 - 2.0 * x1 + x0
    if abs(den) < 1e-14 * scale:
        return x2
    return x2 - (x2 - x1) ** 2 / den


def isoptic_point_via_limit(q: Quadrilateral, max_gen: int = 60,
                            tol: float = DEFAULT_TOL) -> MaybePoint:
    """Limit of the forward (|r| < 1) or reverse (|r| > 1) iteration.

    The same-parity centroid subsequence converges geometrically with a real
    ratio, so Aitken extrapolation of the last three iterates squeezes out
    the remaining error when the plain iteration is still shrinking.
    """
    r = similarity_ratio(q, tol)
    if abs(abs(r) - 1.0) < 1e-6:
        raise NonConvergent(f"|r| = {abs(r)} is on the periodic locus")
    scale = q.scale()
    step = next_generation if abs(r) < 1.0 else prev_generation
    current = q
    cents = [current.centroid().x + 1j * current.centroid().y]
    for _ in range(max_gen):
        try:
            current = step(current, tol)
        except (CyclicDegeneration, OrthocentricDegeneration) as exc:
            if isinstance(exc, CyclicDegeneration) and exc.point is not None:
                return exc.point
            raise NonConvergent("iteration hit a degeneration") from exc
        c = current.centroid()
        cents.append(c.x + 1j * c.y)
        if current.scale() < tol * scale:
            return current.centroid()
        if len(cents) >= 5:
            # extrapolate the odd and even subsequences and cross-check
            odd = [cents[i] for i in range(len(cents) % 2, len(cents), 2)]
            if len(odd) >= 3:
                wx = _aitken([z.real for z in odd[-3:]], scale)
                wy = _aitken([z.imag for z in odd[-3:]], scale)
                prev = [cents[i] for i in range((len(cents) - 1) % 2, len(cents), 2)]
                if len(prev) >= 3:
                    ux = _aitken([z.real for z in prev[-3:]], scale)
                    uy = _aitken([z.imag for z in prev[-3:]], scale)
                    if math.hypot(wx - ux, wy - uy) < 0.5 * tol * scale:
                        return Point(0.5 * (wx + ux), 0.5 * (wy + uy))
    # fall back to the best extrapolate available
    odd = [cents[i] for i in range(len(cents) % 2, len(cents), 2)]
    if len(odd) >= 3:
        return Point(_aitken([z.real for z in odd[-3:]], scale),
                     _aitken([z.imag for z in odd[-3:]], scale))
    raise NonConvergent("iteration budget exhausted")


def isoptic_point_via_inversion(q: Quadrilateral, tol: float = DEFAULT_TOL) -> MaybePoint:
    """W as the inversion of each vertex in the matching second-generation
    triad circle; the four images are averaged."""
    q2 = next_generation(q, tol)   # raises CyclicDegeneration when cyclic
    triads2 = triad_circles(q2, tol)
    images = []
    for mirror, vertex in zip(triads2.circles, q.vertices()):
        img = invert_point(mirror, vertex, tol)
        if not is_finite(img):
            return img
        images.append(img)
    return Point(sum(p.x for p in images) / 4.0, sum(p.y for p in images) / 4.0)


def isoptic_point_via_inv_iso(q: Quadrilateral, tol: float = DEFAULT_TOL) -> MaybePoint:
    """W as inversion-of-conjugate: each vertex is conjugated in the triangle
    of the remaining three, then inverted in that triangle's circumcircle."""
    A, B, C, D = q.vertices()
    triads = triad_circles(q, tol)
    recipe = [
        (triads.o3, Triangle(B, C, D), A),
        (triads.o4, Triangle(C, D, A), B),
        (triads.o1, Triangle(D, A, B), C),
        (triads.o2, Triangle(A, B, C), D),
    ]
    images = []
    for mirror, tri, vertex in recipe:
        conj = isogonal_conjugate_triangle(tri, vertex, tol)
        if isinstance(conj, UndefinedPoint):
            raise DegenerateConjugate("vertex conjugate undefined")
        img = invert_point(mirror, conj, tol)
        if not is_finite(img):
            return img
        images.append(img)
    return Point(sum(p.x for p in images) / 4.0, sum(p.y for p in images) / 4.0)


def isoptic_quantity(q: Quadrilateral, w: Point, tol: float = DEFAULT_TOL) -> list[float]:
    """d_i / R_i for the four triad circles; all equal exactly at W."""
    triads = triad_circles(q, tol)
    return [w.dist(o.center()) / o.radius() for o in triads.circles]


def isodynamic_ratios(q: Quadrilateral, w: Point, tol: float = DEFAULT_TOL) -> float:
    """Relative spread of |w - vertex_k| * R_sigma(k); ~0 exactly at W.

    sigma pairs each vertex with the radius of the triad circle through the
    other three: (A, R3), (B, R4), (C, R1), (D, R2).
    """
    triads = triad_circles(q, tol)
    r1, r2, r3, r4 = triads.radii
    prods = [w.dist(q.a) * r3, w.dist(q.b) * r4, w.dist(q.c) * r1, w.dist(q.d) * r2]
    mean = sum(prods) / 4.0
    if mean == 0.0:
        return 0.0
    return max(abs(p - mean) for p in prods) / mean


def angle_sums_at_point(q: Quadrilateral, w: Point) -> float:
    """Max residual of angle(X w Y) = angle(X u Y) + angle(X v Y) over the
    four sides, in directed angles; ~0 exactly at W."""
    A, B, C, D = q.vertices()
    sides = [(A, B, C, D), (B, C, A, D), (C, D, A, B), (D, A, B, C)]
    worst = 0.0
    for x, y, u, v in sides:
        lhs = directed_angle(x, w, y)
        rhs = directed_angle(x, u, y) + directed_angle(x, v, y)
        worst = max(worst, lhs.distance_to(rhs))
    return worst


# ---------------------------------------------------------------------------
# pedals, Simson point, Varignon


def side_lines(q: Quadrilateral) -> list[GenCircle]:
    A, B, C, D = q.vertices()
    return [GenCircle.line_through(A, B), GenCircle.line_through(B, C),
            GenCircle.line_through(C, D), GenCircle.line_through(D, A)]


def pedal_quadrilateral(q: Quadrilateral, p: Point) -> list[Point]:
    """Feet of the perpendiculars from p onto the side lines AB, BC, CD, DA."""
    return [foot_of_perpendicular(line, p) for line in side_lines(q)]


def varignon(q: Quadrilateral) -> list[Point]:
    vs = q.vertices()
    return [0.5 * (vs[i] + vs[(i + 1) % 4]) for i in range(4)]


def simson_point(q: Quadrilateral, tol: float = DEFAULT_TOL) -> MaybePoint:
    """The unique point whose four pedal feet are collinear.

    Noncyclic: second intersection of CS(o1, o3) and CS(o2, o4).  Cyclic with
    circumcenter O: second intersection of circles (B O D) and (A O C).
    Parallelogram: the point at infinity along side AD.
    """
    shape = classify(q, tol)
    if shape.parallelogram:
        v = q.d - q.a
        return AtInfinity.along(v.x, v.y)
    scale = q.scale()
    if shape.cyclic:
        o = circumcircle(q.a, q.b, q.c).center()
        g1 = circumcircle(q.b, o, q.d, tol)
        g2 = circumcircle(q.a, o, q.c, tol)
        return _cs_pair_intersection(g1, g2, o, scale, tol)
    triads = triad_circles(q, tol)
    cs13 = circle_of_similitude(triads.o1, triads.o3, tol)
    cs24 = circle_of_similitude(triads.o2, triads.o4, tol)
    pts = intersect(cs13, cs24, tol)
    w = isoptic_point(q, tol)
    if is_finite(w):
        pts = [p for p in pts if p.dist(w) > tol * scale]
    if not pts:
        return UNDEFINED
    if len(pts) == 1:
        return pts[0]
    # farther from W per the disambiguation rule
    return max(pts, key=lambda p: p.dist(w) if is_finite(w) else 0.0)


def best_fit_line(points: list[Point]) -> GenCircle:
    """Total-least-squares line through a point cloud."""
    n = len(points)
    mx = sum(p.x for p in points) / n
    my = sum(p.y for p in points) / n
    sxx = sum((p.x - mx) ** 2 for p in points)
    syy = sum((p.y - my) ** 2 for p in points)
    sxy = sum((p.x - mx) * (p.y - my) for p in points)
    # principal direction of the 2x2 scatter matrix
    theta = 0.5 * math.atan2(2.0 * sxy, sxx - syy)
    direction = Point(math.cos(theta), math.sin(theta))
    return GenCircle.line_point_direction(Point(mx, my), direction)


def collinearity_residual(points: list[Point]) -> float:
    line = best_fit_line(points)
    return max(line.distance_to(p) for p in points)


def simson_line(q: Quadrilateral, tol: float = DEFAULT_TOL) -> GenCircle:
    s = simson_point(q, tol)
    if not is_finite(s):
        raise PointAtInfinity("the Simson point is not finite")
    return best_fit_line(pedal_quadrilateral(q, s))


def parallelogram_residual(pts: list[Point], scale: float) -> float:
    """Scale-free deviation of the opposite-side vector sums from zero."""
    e1 = (pts[1] - pts[0]) + (pts[3] - pts[2])
    e2 = (pts[2] - pts[1]) + (pts[0] - pts[3])
    return max(e1.norm(), e2.norm()) / scale


# ---------------------------------------------------------------------------
# isogonal conjugation with respect to the quadrilateral


def _bisector_direction(v: Point, prev: Point, nxt: Point) -> Point:
    u1 = (nxt - v) * (1.0 / (nxt - v).norm())
    u2 = (prev - v) * (1.0 / (prev - v).norm())
    s = u1 + u2
    if s.norm() < 1e-12:
        # straight angle: the bisector is perpendicular to the sides; line
        # reflection is insensitive to the 90-degree choice anyway
        s = Point(-u1.y, u1.x)
    return s


def _reflect_direction(d: Point, axis: Point) -> Point:
    ax = axis * (1.0 / axis.norm())
    dot = d.dot(ax)
    return Point(2.0 * dot * ax.x - d.x, 2.0 * dot * ax.y - d.y)


def isogonal_conjugate_quad(q: Quadrilateral, p: Point,
                            tol: float = DEFAULT_TOL) -> list[MaybePoint]:
    """The four adjacent intersections of the reflections of the lines
    vertex-to-p in the angle bisectors at the vertices.

    Parallel adjacent reflected lines put that vertex of the conjugate at
    infinity (along their common direction).
    """
    vs = q.vertices()
    scale = diameter(list(vs) + [p])
    lines = []
    for i in range(4):
        v = vs[i]
        if v.dist(p) < tol * scale:
            raise DegenerateConjugate("p coincides with a vertex")
        axis = _bisector_direction(v, vs[(i - 1) % 4], vs[(i + 1) % 4])
        d = _reflect_direction(p - v, axis)
        lines.append((v, d))
    out: list[MaybePoint] = []
    # P_A = l_A ^ l_B, P_B = l_B ^ l_C, P_C = l_C ^ l_D, P_D = l_D ^ l_A
    for i in range(4):
        (v1, d1) = lines[i]
        (v2, d2) = lines[(i + 1) % 4]
        det = d1.cross(d2)
        if abs(det) < tol * d1.norm() * d2.norm():
            out.append(AtInfinity.along(d1.x, d1.y))
            continue
        t = (v2 - v1).cross(d2) / det
        out.append(v1 + d1 * t)
    return out


# ---------------------------------------------------------------------------
# reconstructions


def _perpendicular_line_at(foot: Point, through: Point) -> GenCircle:
    """Line through `foot` perpendicular to the segment through->foot."""
    d = foot - through
    return GenCircle.line_point_direction(foot, Point(-d.y, d.x))


def _intersect_lines_strict(l1: GenCircle, l2: GenCircle, tol: float) -> Point:
    pts = _line_line_points(l1, l2, tol)
    if not pts:
        raise ParallelConsecutiveLines("consecutive reconstruction lines are parallel")
    return pts[0]


def _line_line_points(l1: GenCircle, l2: GenCircle, tol: float) -> list[Point]:
    det = l1.b * l2.c - l1.c * l2.b
    n1 = math.hypot(l1.b, l1.c)
    n2 = math.hypot(l2.b, l2.c)
    if abs(det) <= tol * n1 * n2:
        return []
    x = (-l1.d * l2.c + l1.c * l2.d) / det
    y = (-l1.b * l2.d + l1.d * l2.b) / det
    return [Point(x, y)]


def reconstruct_from_pedal_w(w: Point, feet: list[Point],
                             tol: float = DEFAULT_TOL) -> Quadrilateral:
    """Rebuild the quadrilateral from W and its four pedal feet.

    Each side line passes through a foot perpendicular to the segment from
    w; vertices are the consecutive-line intersections.
    """
    scale = diameter(feet + [w])
    for f in feet:
        if f.dist(w) < tol * scale:
            raise DegenerateConjugate("a pedal foot coincides with w")
    la, lb, lc, ld = (_perpendicular_line_at(f, w) for f in feet)
    a = _intersect_lines_strict(ld, la, tol)
    b = _intersect_lines_strict(la, lb, tol)
    c = _intersect_lines_strict(lb, lc, tol)
    d = _intersect_lines_strict(lc, ld, tol)
    return Quadrilateral(a, b, c, d)


def reconstruct_from_simson(s: Point, feet: list[Point],
                            tol: float = DEFAULT_TOL) -> Quadrilateral:
    """Rebuild the quadrilateral from the Simson point and its collinear feet."""
    scale = diameter(feet + [s])
    if collinearity_residual(feet) > 1e3 * tol * scale:
        raise NonCollinearFeet("Simson feet must be collinear")
    return reconstruct_from_pedal_w(s, feet, tol)


def reconstruct_fourth_vertex(a: Point, b: Point, c: Point, w: Point,
                              tol: float = DEFAULT_TOL) -> Point:
    """Recover the fourth vertex from three vertices and the isoptic point.

    Builds the circles of similitude (a w b) and (b w c), transfers the
    circumcenter of (a b c) across them by inversion to get the missing triad
    centers, and intersects the resulting triad circles.
    """
    o2 = circumcircle(a, b, c, tol)
    scale = diameter([a, b, c, w])
    if w.dist(o2.center()) < 1e3 * tol * scale:
        raise Underdetermined("w at the circumcenter: any concyclic point works")
    if o2.distance_to(w) < 1e3 * tol * scale:
        raise Underdetermined("w on the circumcircle of the three vertices")
    cs21 = circumcircle(a, w, b, tol)
    cs23 = circumcircle(b, w, c, tol)
    b2 = o2.center()
    a2 = invert_point(cs21, b2, tol)
    c2 = invert_point(cs23, b2, tol)
    if not (is_finite(a2) and is_finite(c2)):
        raise Underdetermined("triad centers escape to infinity")
    o1 = GenCircle.circle(a2, 0.5 * (a2.dist(a) + a2.dist(b)))
    o3 = GenCircle.circle(c2, 0.5 * (c2.dist(b) + c2.dist(c)))
    pts = intersect(o1, o3, tol)
    pts = [p for p in pts if p.dist(b) > tol * scale]
    if not pts:
        raise NoIntersection("the transferred triad circles do not intersect")
    return max(pts, key=lambda p: p.dist(b))


def quad_distance(q1: Quadrilateral, q2: Quadrilateral) -> float:
    """Scale-free distance between quadrilaterals, up to cyclic relabeling.

    Needed for the periodicity checks: a period-two parallelogram returns to
    itself with vertices exchanged by the half-turn about W.
    """
    v1 = q1.vertices()
    v2 = q2.vertices()
    scale = max(q1.scale(), q2.scale())
    best = math.inf
    for shift in range(4):
        worst = max(v1[i].dist(v2[(i + shift) % 4]) for i in range(4))
        best = min(best, worst)
    return best / scale


def periodicity_residual(q: Quadrilateral, period: int = 2,
                         tol: float = DEFAULT_TOL) -> float:
    """How far Q^(1+period) is from Q^(1)."""
    current = q
    for _ in range(period):
        current = next_generation(current, tol)
    return quad_distance(q, current)


# ---------------------------------------------------------------------------
# cross checks used by the verify harness


def cross_generation_cs_residual(q: Quadrilateral, w: Point, generations: int = 3,
                                 tol: float = DEFAULT_TOL) -> float:
    """Max scale-free distance of w to CS(o_i^(k), o_j^(l)) across generations."""
    gens = [q]
    for _ in range(generations - 1):
        gens.append(next_generation(gens[-1], tol))
    circles = []
    for g in gens:
        circles.extend(triad_circles(g, tol).circles)
    scale = q.scale()
    worst = 0.0
    for i in range(len(circles)):
        for j in range(i + 1, len(circles)):
            c1, c2 = circles[i], circles[j]
            if c1.center().dist(c2.center()) < 1e3 * tol * scale:
                continue  # same circle up to noise: CS undefined
            cs = circle_of_similitude(c1, c2, tol)
            worst = max(worst, cs.distance_to(w) / scale)
    return worst


def _normalized_coeff_distance(g1: GenCircle, g2: GenCircle) -> float:
    u = GenCircle.from_coeffs(g1.a, g1.b, g1.c, g1.d)
    v = GenCircle.from_coeffs(g2.a, g2.b, g2.c, g2.d)
    d1 = max(abs(u.a - v.a), abs(u.b - v.b), abs(u.c - v.c), abs(u.d - v.d))
    d2 = max(abs(u.a + v.a), abs(u.b + v.b), abs(u.c + v.c), abs(u.d + v.d))
    return min(d1, d2)


def quadrangle_duality_residual(q: Quadrilateral, w: Point, mirror_radius: float,
                                tol: float = DEFAULT_TOL) -> float:
    """Inversion centered at W takes the six vertex-pair lines onto the six
    circles of similitude of the image quadrilateral's triad circles."""
    from .kernel import invert_circle
    mirror = GenCircle.circle(w, mirror_radius)
    A, B, C, D = q.vertices()
    images = [invert_point(mirror, v, tol) for v in q.vertices()]
    if not all(is_finite(p) for p in images):
        raise DegenerateConjugate("a vertex maps to infinity under the duality mirror")
    q_img = Quadrilateral(*images)
    triads_img = triad_circles(q_img, tol)
    o = triads_img.circles
    # pair (i, j) shares the two listed vertices; the line through them is
    # the corresponding line of the complete quadrilateral
    pairs = [((0, 1), (A, B)), ((0, 2), (B, D)), ((0, 3), (D, A)),
             ((1, 2), (B, C)), ((1, 3), (A, C)), ((2, 3), (C, D))]
    worst = 0.0
    for (i, j), (p1, p2) in pairs:
        line = GenCircle.line_through(p1, p2)
        line_img = invert_circle(mirror, line, tol)
        cs = circle_of_similitude(o[i], o[j], tol)
        worst = max(worst, _normalized_coeff_distance(line_img, cs))
    return worst


def four_circumcenters_residual(t: Triangle, p: Point,
                                tol: float = DEFAULT_TOL) -> float:
    """Residual of the four-circumcenters inversion identity and its
    isogonal-conjugate companion."""
    A, B, C = t.vertices()
    scale = diameter([A, B, C, p])
    o = circumcircle(A, B, C, tol).center()
    x = circumcircle(A, p, B, tol).center()
    y = circumcircle(B, p, C, tol).center()
    z = circumcircle(C, p, A, tol).center()
    imgs = [
        invert_point(circumcircle(z, o, x, tol), A, tol),
        invert_point(circumcircle(x, o, y, tol), B, tol),
        invert_point(circumcircle(y, o, z, tol), C, tol),
        invert_point(circumcircle(x, y, z, tol), p, tol),
    ]
    if not all(is_finite(q_) for q_ in imgs):
        raise DegenerateConjugate("an inversion image is not finite")
    worst = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            worst = max(worst, imgs[i].dist(imgs[j]) / scale)
    iso_checks = [
        (Triangle(z, o, x), A, y),
        (Triangle(x, o, y), B, z),
        (Triangle(y, o, z), C, x),
    ]
    for tri, src, expected in iso_checks:
        conj = isogonal_conjugate_triangle(tri, src, tol)
        if not is_finite(conj):
            raise DegenerateConjugate("conjugate in the circumcenter triangle is not finite")
        worst = max(worst, conj.dist(expected) / scale)
    return worst


def feet_circles_residual(q: Quadrilateral, w: Point,
                          tol: float = DEFAULT_TOL) -> float:
    """Max scale-free distance of w from the eight vertex/foot/center circles.

    F_x is the intersection of the perpendicular bisector of side x with the
    opposite side line.
    """
    from .kernel import perpendicular_bisector
    A, B, C, D = q.vertices()
    a2, b2, c2, d2 = triad_circles(q, tol).centers
    lines = side_lines(q)  # AB, BC, CD, DA
    feet = {}
    for name, side, opposite in (("a", (A, B), lines[2]), ("b", (B, C), lines[3]),
                                 ("c", (C, D), lines[0]), ("d", (D, A), lines[1])):
        pb = perpendicular_bisector(*side)
        pts = _line_line_points(pb, opposite, tol)
        if not pts:
            return math.nan  # trapezoid: a foot escapes to infinity
        feet[name] = pts[0]
    triples = [(A, feet["b"], b2), (A, feet["c"], d2), (B, feet["c"], c2),
               (B, feet["d"], a2), (C, feet["d"], d2), (C, feet["a"], b2),
               (D, feet["a"], a2), (D, feet["b"], c2)]
    scale = q.scale()
    worst = 0.0
    for p1, p2, p3 in triples:
        circ = circumcircle(p1, p2, p3, tol)
        worst = max(worst, circ.distance_to(w) / scale)
    return worst


def spiral_transport_residual(q: Quadrilateral, w: Point,
                              tol: float = DEFAULT_TOL) -> float:
    """Residual of the spiral similarity at W taking o1 -> o4 mapping B to C
    (and the o1 -> o2, o4 -> o2 analogues)."""
    triads = triad_circles(q, tol)
    scale = q.scale()
    cases = [
        (triads.o1, triads.o4, q.b, q.c),
        (triads.o1, triads.o2, q.d, q.c),
        (triads.o4, triads.o2, q.d, q.b),
    ]
    worst = 0.0
    for src, dst, point, expected in cases:
        u = src.center() - w
        v = dst.center() - w
        angle = math.atan2(u.cross(v), u.dot(v))
        h = SpiralSimilarity(w, dst.radius() / src.radius(), angle)
        img = h.apply(point)
        worst = max(worst, img.dist(expected) / scale)
    return worst


# ---------------------------------------------------------------------------
# the aggregate report


def analyze(q: Quadrilateral, tol: float = DEFAULT_TOL) -> AnalysisReport:
    shape = classify(q, tol)
    triads = triad_circles(q, tol)
    try:
        r = similarity_ratio(q, tol)
    except IllConditionedAngles:
        r = math.nan
    w = isoptic_point(q, tol)
    s = simson_point(q, tol)
    scale = q.scale()
    residuals: dict[str, float] = {}
    pedal_w = pedal_s = None
    quantity = None
    if is_finite(w):
        pedal_w = pedal_quadrilateral(q, w)
        qty = isoptic_quantity(q, w, tol)
        quantity = sum(qty) / 4.0
        if quantity > 0:
            residuals["isoptic_spread"] = (max(qty) - min(qty)) / quantity
        residuals["isodynamic"] = isodynamic_ratios(q, w, tol)
        residuals["pedal_w_parallelogram"] = parallelogram_residual(pedal_w, scale)
        residuals["angle_sums"] = angle_sums_at_point(q, w)
        if not shape.cyclic:
            worst = 0.0
            circles = triads.circles
            for i in range(4):
                for j in range(i + 1, 4):
                    cs = circle_of_similitude(circles[i], circles[j], tol)
                    worst = max(worst, cs.distance_to(w) / scale)
            residuals["six_cs"] = worst
    if is_finite(s):
        pedal_s = pedal_quadrilateral(q, s)
        residuals["pedal_s_collinear"] = collinearity_residual(pedal_s) / scale
    if not shape.cyclic and not math.isnan(r):
        try:
            q2 = next_generation(q, tol)
            residuals["area_ratio"] = abs(abs(r) - q2.area() / q.area())
        except CyclicDegeneration:
            pass
    return AnalysisReport(quad=q, triads=triads, r=r, w=w, s=s, shape=shape,
                          pedal_w=pedal_w, pedal_s=pedal_s, varignon=varignon(q),
                          isoptic_quantity=quantity, residuals=residuals)
