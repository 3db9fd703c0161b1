"""DOT and SVG pictures of Enriques diagrams.

The SVG layout follows the usual drawing conventions: the edge to a free
vertex is a smooth curve leaving its start vertex along the tangent of the
incoming edge, and a maximal run of vertices proximate to the same vertex
``p`` lies on a straight segment orthogonal to the edge joining ``p`` to the
first vertex of the run.  Multiplicities are printed in bold next to the
vertices.
"""
from __future__ import annotations

import math
from typing import Union
from xml.sax.saxutils import escape

from .diagram import EnriquesDiagram
from .weights import WeightedDiagram

__all__ = ["render", "to_dot", "to_svg", "layout"]

EDGE = 60.0
RADIUS = 4.0
# turning angles (degrees) for the free children of a vertex, by count
_FANS = {1: [-25.0], 2: [-40.0, 30.0], 3: [-55.0, -10.0, 35.0]}


def _split(obj):
    if isinstance(obj, WeightedDiagram):
        return obj.diagram, obj.mult
    return obj, None


def to_dot(obj: Union[EnriquesDiagram, WeightedDiagram]) -> str:
    d, mult = _split(obj)
    out = ["digraph enriques {", "  node [shape=circle, width=0.15, fixedsize=true, label=\"\"];"]
    for v in d.order:
        label = v if mult is None else f"{v}\\n{mult[v]}"
        out.append(f'  "{v}" [xlabel="{label}"];')
    for v in d.order:
        p = d.parent[v]
        if p is None:
            continue
        t = d.second_target(v)
        if t is None:
            out.append(f'  "{p}" -> "{v}" [kind=free, style=solid];')
        else:
            out.append(f'  "{p}" -> "{v}" [kind=satellite, style=bold, label="prox {t}"];')
            out.append(f'  "{v}" -> "{t}" [kind=proximity, style=dashed, constraint=false];')
    out.append("}")
    return "\n".join(out) + "\n"


def _rot(angle, deg):
    return angle + math.radians(deg)


def _unit(angle):
    return math.cos(angle), math.sin(angle)


def layout(obj) -> dict:
    """Positions, tangents and edge geometry.

    Returns ``{"pos": {v: (x, y)}, "edges": [(p, v, kind, control_point_or_None)]}``
    in a y-up coordinate system with the root at the origin.
    """
    d, _ = _split(obj)
    pos = {d.root: (0.0, 0.0)}
    tangent = {d.root: math.pi / 2}
    edges = []
    for p in d.order:
        free_kids = [c for c in d.children(p) if d.second_target(c) is None]
        fan = _FANS.get(len(free_kids)) or [
            -60.0 + 120.0 * i / (len(free_kids) - 1) for i in range(len(free_kids))
        ]
        for c, turn in zip(free_kids, fan):
            start = pos[p]
            tx, ty = _unit(tangent[p])
            ctrl = (start[0] + tx * EDGE / 2, start[1] + ty * EDGE / 2)
            ex, ey = _unit(_rot(tangent[p], turn))
            end = (start[0] + ex * EDGE, start[1] + ey * EDGE)
            pos[c] = end
            tangent[c] = math.atan2(end[1] - ctrl[1], end[0] - ctrl[0])
            edges.append((p, c, "free", ctrl))
        for c in d.children(p):
            t = d.second_target(c)
            if t is None:
                continue
            # first vertex of the run proximate to t: the child of t above c
            chain = [c] + d.ancestors(c)
            first = chain[chain.index(t) - 1]
            direction = _rot(tangent[first], 90.0)
            ux, uy = _unit(direction)
            pos[c] = (pos[p][0] + ux * EDGE, pos[p][1] + uy * EDGE)
            tangent[c] = direction
            edges.append((p, c, "satellite", None))
    return {"pos": pos, "edges": edges, "tangent": tangent}


def to_svg(obj: Union[EnriquesDiagram, WeightedDiagram]) -> str:
    d, mult = _split(obj)
    geo = layout(d)
    pos = geo["pos"]
    xs = [x for x, _ in pos.values()]
    ys = [y for _, y in pos.values()]
    pad = 30.0
    minx, maxx, miny, maxy = min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad

    def sx(x):
        return round(x - minx, 2)

    def sy(y):
        return round(maxy - y, 2)

    width, height = round(maxx - minx, 2), round(maxy - miny, 2)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    for p, c, kind, ctrl in geo["edges"]:
        (x0, y0), (x1, y1) = pos[p], pos[c]
        if kind == "free":
            out.append(
                f'<path class="free" d="M {sx(x0)} {sy(y0)} Q {sx(ctrl[0])} {sy(ctrl[1])} {sx(x1)} {sy(y1)}" '
                'fill="none" stroke="black"/>'
            )
        else:
            out.append(
                f'<line class="satellite" x1="{sx(x0)}" y1="{sy(y0)}" x2="{sx(x1)}" y2="{sy(y1)}" stroke="black"/>'
            )
    for v in d.order:
        x, y = pos[v]
        out.append(f'<circle class="vertex" id="{escape(v)}" cx="{sx(x)}" cy="{sy(y)}" r="{RADIUS}" fill="black"/>')
        if mult is not None:
            out.append(
                f'<text x="{sx(x) + 7}" y="{sy(y) - 7}" font-weight="bold" font-size="12">{mult[v]}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(obj, format: str = "svg") -> str:
    if format == "dot":
        return to_dot(obj)
    if format == "svg":
        return to_svg(obj)
    raise ValueError(f"unknown format {format!r}")
