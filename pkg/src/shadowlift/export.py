"""Static pictures of a single frame: Graphviz DOT and a schematic SVG.

Neither output attempts a planar drawing.  Crossings sit on a circle and each
curve edge is drawn from its tail crossing to its head crossing; the point is
incidence fidelity, which the ``data-*`` attributes of the SVG make
machine-checkable.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .diagram import ShadowDiagram


def curve_edges(d: ShadowDiagram) -> list[tuple[int, int, int]]:
    """(edge index, tail crossing, head crossing) along the curve."""
    n = len(d.code)
    return [(e, d.code[e][0], d.code[(e + 1) % n][0]) for e in range(n)]


def to_dot(d: ShadowDiagram, name: str = "frame", signs: dict | None = None) -> str:
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    if d.is_crossingless:
        lines.append('  circle [shape=doublecircle, label=""];')
    for c in d.crossings:
        label = str(c) if not signs or c not in signs else f"{c}{'+' if signs[c] > 0 else '-'}"
        lines.append(f'  c{c} [label="{label}"];')
    for e, tail, head in curve_edges(d):
        lines.append(f'  c{tail} -> c{head} [label="e{e}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_svg(d: ShadowDiagram, size: int = 400, signs: dict | None = None) -> str:
    cx = cy = size / 2
    radius = size * 0.35
    ids = d.crossings
    pos = {}
    for k, c in enumerate(ids):
        angle = 2 * math.pi * k / max(1, len(ids)) - math.pi / 2
        pos[c] = (cx + radius * math.cos(angle), cy + radius * math.sin(angle))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" '
        'markerWidth="6" markerHeight="6" orient="auto-start-reverse">'
        '<path d="M0,0 L10,5 L0,10 z"/></marker></defs>',
    ]
    if d.is_crossingless:
        parts.append(f'<circle class="curve" cx="{cx}" cy="{cy}" r="{radius}" '
                     'fill="none" stroke="black"/>')
    for e, tail, head in curve_edges(d):
        (x1, y1), (x2, y2) = pos[tail], pos[head]
        attrs = f'class="edge" data-edge="{e}" data-tail="{tail}" data-head="{head}"'
        if tail == head:
            # a monogon: small loop pointing away from the centre
            dx, dy = x1 - cx, y1 - cy
            norm = math.hypot(dx, dy) or 1.0
            ux, uy = dx / norm, dy / norm
            px, py = -uy, ux
            a = (x1 + 40 * ux + 20 * px, y1 + 40 * uy + 20 * py)
            b = (x1 + 40 * ux - 20 * px, y1 + 40 * uy - 20 * py)
            path = f"M{x1:.1f},{y1:.1f} C{a[0]:.1f},{a[1]:.1f} {b[0]:.1f},{b[1]:.1f} {x1:.1f},{y1:.1f}"
        else:
            # bend parallel edges apart by their index
            mx, my = (x1 + x2) / 2, (y1 + y2) / 2
            bend = 15 + 12 * (e % 4)
            length = math.hypot(x2 - x1, y2 - y1) or 1.0
            qx = mx - bend * (y2 - y1) / length
            qy = my + bend * (x2 - x1) / length
            path = f"M{x1:.1f},{y1:.1f} Q{qx:.1f},{qy:.1f} {x2:.1f},{y2:.1f}"
        parts.append(f'<path {attrs} d="{path}" fill="none" stroke="black" '
                     'marker-end="url(#arrow)"/>')
    for c in ids:
        x, y = pos[c]
        label = str(c)
        if signs and c in signs:
            label += "+" if signs[c] > 0 else "-"
        parts.append(f'<g class="crossing" data-id="{c}"><circle cx="{x:.1f}" cy="{y:.1f}" '
                     'r="12" fill="white" stroke="black"/>'
                     f'<text x="{x:.1f}" y="{y + 4:.1f}" font-size="11" '
                     f'text-anchor="middle">{escape(label)}</text></g>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
