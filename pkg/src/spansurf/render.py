"""SVG rendering of diagrams with optional curve overlays.

Layout is deliberately simple: crossings sit on a circle, edges are cubic
Bezier curves leaving each crossing at the angle of their rotation position,
and each crossing ball is drawn as a small disk with the understrand broken.
Curve overlays draw twist points and straight chords for interior arcs,
dashed for the upper sphere and dotted for the lower.  Rendering is a total
function of a validated diagram; it never fails.
"""

from __future__ import annotations

import math

from .config import Configuration
from .curves import BPoint, SaddlePass, UPPER
from .diagram import Diagram

_SIZE = 640.0
_RADIUS = 220.0
_BALL = 26.0


def _crossing_xy(d: Diagram, c: int) -> tuple[float, float]:
    ang = 2 * math.pi * c / d.n - math.pi / 2
    return (
        _SIZE / 2 + _RADIUS * math.cos(ang),
        _SIZE / 2 + _RADIUS * math.sin(ang),
    )


def _dart_angle(d: Diagram, dart) -> float:
    c, pos = dart
    base = 2 * math.pi * c / d.n - math.pi / 2
    # Spread the four positions counterclockwise around the crossing,
    # starting opposite the circle center so edges mostly fan outward.
    return base + math.pi + (pos - 1.5) * (math.pi / 3.2)


def _dart_point(d: Diagram, dart, dist: float) -> tuple[float, float]:
    x, y = _crossing_xy(d, dart[0])
    a = _dart_angle(d, dart)
    return (x + dist * math.cos(a), y + dist * math.sin(a))


def _edge_path(d: Diagram, label: int) -> str:
    e = d.edges[label]
    x1, y1 = _crossing_xy(d, e.under_dart[0])
    x4, y4 = _crossing_xy(d, e.over_dart[0])
    cx1, cy1 = _dart_point(d, e.under_dart, 3.2 * _BALL)
    cx2, cy2 = _dart_point(d, e.over_dart, 3.2 * _BALL)
    return (
        f"M {x1:.1f} {y1:.1f} C {cx1:.1f} {cy1:.1f} "
        f"{cx2:.1f} {cy2:.1f} {x4:.1f} {y4:.1f}"
    )


def _edge_point(d: Diagram, label: int, t: float) -> tuple[float, float]:
    e = d.edges[label]
    p0 = _crossing_xy(d, e.under_dart[0])
    p1 = _dart_point(d, e.under_dart, 3.2 * _BALL)
    p2 = _dart_point(d, e.over_dart, 3.2 * _BALL)
    p3 = _crossing_xy(d, e.over_dart[0])
    u = 1 - t
    x = (u ** 3 * p0[0] + 3 * u * u * t * p1[0]
         + 3 * u * t * t * p2[0] + t ** 3 * p3[0])
    y = (u ** 3 * p0[1] + 3 * u * u * t * p1[1]
         + 3 * u * t * t * p2[1] + t ** 3 * p3[1])
    return x, y


def render_svg(d: Diagram, cfg: Configuration | None = None) -> str:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE:.0f}" '
        f'height="{_SIZE:.0f}" viewBox="0 0 {_SIZE:.0f} {_SIZE:.0f}">',
        f'<rect width="{_SIZE:.0f}" height="{_SIZE:.0f}" fill="white"/>',
    ]
    for label in d.edge_labels:
        parts.append(
            f'<path class="edge" id="edge-{label}" d="{_edge_path(d, label)}" '
            'fill="none" stroke="black" stroke-width="2.5"/>'
        )
    for c in d.crossings:
        x, y = _crossing_xy(d, c.id)
        parts.append(
            f'<g class="crossing" id="crossing-{c.id}">'
            f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{_BALL:.0f}" fill="white" '
            'stroke="#bbbbbb" stroke-width="1"/>'
        )
        # Redraw the overstrand stubs through the ball (positions 1 and 3).
        for pos in c.over_pair:
            px, py = _dart_point(d, (c.id, pos), _BALL)
            parts.append(
                f'<line x1="{x:.1f}" y1="{y:.1f}" x2="{px:.1f}" y2="{py:.1f}" '
                'stroke="black" stroke-width="2.5"/>'
            )
        parts.append(
            f'<text x="{x:.1f}" y="{y - _BALL - 4:.1f}" font-size="11" '
            f'text-anchor="middle" fill="#888888">c{c.id}</text></g>'
        )
    if cfg is not None:
        parts.extend(_overlay(d, cfg))
    parts.append("</svg>")
    return "\n".join(parts)


def _twist_xy(d: Diagram, cfg: Configuration, edge: int, index: int):
    count = len(cfg.edge_orders_dict.get(edge, ""))
    return _edge_point(d, edge, (index + 1) / (count + 1))


def _overlay(d: Diagram, cfg: Configuration) -> list[str]:
    parts = ['<g class="overlay">']
    for e, sides in cfg.edge_orders:
        for i, _side in enumerate(sides):
            x, y = _twist_xy(d, cfg, e, i)
            parts.append(
                f'<circle class="twist" cx="{x:.1f}" cy="{y:.1f}" r="3.5" '
                'fill="#d04040"/>'
            )
    for curve in cfg.curves:
        dash = "8,5" if curve.sphere == UPPER else "2,4"
        color = "#2060c0" if curve.sphere == UPPER else "#208040"
        n = len(curve.stations)
        for i in range(n):
            a, b, kind = curve.gap(i)
            if kind != "i":
                continue
            pa = _station_xy(d, cfg, a)
            pb = _station_xy(d, cfg, b)
            parts.append(
                f'<line class="arc" x1="{pa[0]:.1f}" y1="{pa[1]:.1f}" '
                f'x2="{pb[0]:.1f}" y2="{pb[1]:.1f}" stroke="{color}" '
                f'stroke-width="1.6" stroke-dasharray="{dash}" fill="none"/>'
            )
        for st in curve.stations:
            if isinstance(st, SaddlePass):
                x, y = _crossing_xy(d, st.crossing)
                parts.append(
                    f'<circle class="pass" cx="{x:.1f}" cy="{y:.1f}" '
                    f'r="{_BALL / 2 + 3 * st.side:.1f}" fill="none" '
                    f'stroke="{color}" stroke-width="1.4" '
                    f'stroke-dasharray="{dash}"/>'
                )
    parts.append("</g>")
    return parts


def _station_xy(d: Diagram, cfg: Configuration, st):
    if isinstance(st, BPoint):
        return _twist_xy(d, cfg, st.edge, st.index)
    return _crossing_xy(d, st.crossing)
