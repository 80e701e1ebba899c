"""Deterministic SVG rendering of a quadrilateral and its derived objects.

Output is byte-stable: fixed palette, fixed element order, coordinates
formatted with repr-style shortest round-trip floats.
"""

from __future__ import annotations

import math

from .errors import GeometryError
from .kernel import AtInfinity, GenCircle, Point, is_finite
from .quad import (
    Quadrilateral,
    isoptic_point,
    next_generation,
    pedal_quadrilateral,
    simson_line,
    simson_point,
    triad_circles,
    varignon,
)

LAYERS = ("quad", "triads", "cs", "w", "s", "pedal-w", "pedal-s",
          "varignon", "simson", "generations")

_PALETTE = {
    "quad": "#1f3a5f",
    "triads": "#888888",
    "cs": "#2a9d8f",
    "w": "#d62828",
    "s": "#7b2cbf",
    "pedal-w": "#e07a1f",
    "pedal-s": "#b56576",
    "varignon": "#4c956c",
    "simson": "#577590",
    "generations": "#b0a29a",
}


def _fmt(x: float) -> str:
    if x == 0.0:
        x = 0.0  # avoid "-0.0"
    return format(x, ".6f")


class _Canvas:
    def __init__(self):
        self.elements: list[str] = []
        self.points: list[Point] = []

    def track(self, *pts: Point):
        self.points.extend(p for p in pts if isinstance(p, Point))

    def polygon(self, pts, color, width=1.0, dash=None, close=True):
        self.track(*pts)
        d = " ".join(f"{_fmt(p.x)},{_fmt(p.y)}" for p in pts)
        tag = "polygon" if close else "polyline"
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self.elements.append(
            f'<{tag} points="{d}" fill="none" stroke="{color}" '
            f'stroke-width="{_fmt(width)}"{dash_attr}/>')

    def circle(self, center: Point, radius: float, color, width=1.0, dash=None):
        self.track(center)
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self.elements.append(
            f'<circle cx="{_fmt(center.x)}" cy="{_fmt(center.y)}" '
            f'r="{_fmt(radius)}" fill="none" stroke="{color}" '
            f'stroke-width="{_fmt(width)}"{dash_attr}/>')

    def dot(self, p: Point, color, radius=3.0):
        self.track(p)
        self.elements.append(
            f'<circle cx="{_fmt(p.x)}" cy="{_fmt(p.y)}" r="{_fmt(radius)}" '
            f'fill="{color}" stroke="none" vector-effect="non-scaling-stroke" '
            f'class="marker"/>')

    def segment(self, a: Point, b: Point, color, width=1.0, dash=None):
        self.track(a, b)
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self.elements.append(
            f'<line x1="{_fmt(a.x)}" y1="{_fmt(a.y)}" x2="{_fmt(b.x)}" '
            f'y2="{_fmt(b.y)}" stroke="{color}" '
            f'stroke-width="{_fmt(width)}"{dash_attr}/>')


def _clip_curve(canvas: _Canvas, curve: GenCircle, color, span: float,
                anchor: Point, width=1.0, dash=None):
    """Draw a generalized circle; lines become segments of length 2*span."""
    if curve.is_line:
        from .kernel import foot_of_perpendicular
        d = curve.direction()
        f = foot_of_perpendicular(curve, anchor)
        canvas.segment(f - d * span, f + d * span, color, width, dash)
    else:
        canvas.circle(curve.center(), curve.radius(), color, width, dash)


def render_svg(q: Quadrilateral, layers=("quad", "triads", "w"),
               size: int = 640, tol: float = 1e-9) -> str:
    """Return a complete SVG document showing the requested layers.

    Unknown layer names raise ValueError.  Layers whose construction hits a
    degeneracy are silently skipped (e.g. "w" for a quadrilateral whose
    isoptic point is at infinity).
    """
    for name in layers:
        if name not in LAYERS:
            raise ValueError(f"unknown layer {name!r}")
    cv = _Canvas()
    scale = q.scale()
    base_w = scale / 320.0  # stroke width in model units
    centroid = q.centroid()

    # draw order is fixed by LAYERS, not by the caller's list order
    active = [n for n in LAYERS if n in layers]

    for name in active:
        color = _PALETTE[name]
        try:
            if name == "quad":
                cv.polygon(q.vertices(), color, 2.0 * base_w)
                for v in q.vertices():
                    cv.dot(v, color, 4.0 * base_w)
            elif name == "triads":
                for c in triad_circles(q, tol).circles:
                    _clip_curve(cv, c, color, 2 * scale, centroid, base_w, None)
            elif name == "cs":
                from .kernel import circle_of_similitude
                circles = triad_circles(q, tol).circles
                for i in range(4):
                    j = (i + 1) % 4
                    cs = circle_of_similitude(circles[i], circles[j], tol)
                    _clip_curve(cv, cs, color, 2 * scale, centroid,
                                base_w, "4 3")
            elif name == "w":
                w = isoptic_point(q, tol)
                if is_finite(w):
                    cv.dot(w, color, 5.0 * base_w)
            elif name == "s":
                s = simson_point(q, tol)
                if is_finite(s):
                    cv.dot(s, color, 5.0 * base_w)
            elif name == "pedal-w":
                w = isoptic_point(q, tol)
                if is_finite(w):
                    cv.polygon(pedal_quadrilateral(q, w), color, base_w, "6 3")
            elif name == "pedal-s":
                s = simson_point(q, tol)
                if is_finite(s):
                    cv.polygon(pedal_quadrilateral(q, s), color, base_w, "6 3")
            elif name == "varignon":
                cv.polygon(varignon(q), color, base_w, "2 2")
            elif name == "simson":
                s = simson_point(q, tol)
                if is_finite(s):
                    line = simson_line(q, tol)
                    _clip_curve(cv, line, color, 2 * scale, s, base_w, None)
            elif name == "generations":
                cur = q
                for _ in range(3):
                    cur = next_generation(cur, tol)
                    cv.polygon(cur.vertices(), color, base_w)
        except GeometryError:
            continue

    xs = [p.x for p in cv.points]
    ys = [p.y for p in cv.points]
    # circles can stick out beyond their tracked centers; include radii
    minx, maxx = min(xs), max(xs)
    miny, maxy = min(ys), max(ys)
    span = max(maxx - minx, maxy - miny, scale)
    pad = 0.05 * span
    if "triads" in layers or "cs" in layers:
        pad += 2.0 * scale  # room for big triad circles around their centers
    vb = (minx - pad, miny - pad, (maxx - minx) + 2 * pad, (maxy - miny) + 2 * pad)

    header = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
        f'height="{size}" viewBox="{_fmt(vb[0])} {_fmt(vb[1])} '
        f'{_fmt(vb[2])} {_fmt(vb[3])}">\n'
        # flip y so the figure appears in the usual orientation
        f'<g transform="translate(0 {_fmt(2 * vb[1] + vb[3])}) scale(1 -1)">\n'
    )
    body = "\n".join(cv.elements)
    return header + body + "\n</g>\n</svg>\n"
