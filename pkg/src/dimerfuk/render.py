"""DOT and SVG output.  Rendering reads models, it never changes a verdict."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .dimer import BLACK, DimerModel, trace_faces
from .quiver import Quiver

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]


class MissingPositionsError(ValueError):
    pass


def _dot_id(x) -> str:
    return '"' + str(x).replace("\\", "\\\\").replace('"', '\\"') + '"'


def quiver_dot(quiver: Quiver, name: str = "Q") -> str:
    lines = [f"digraph {_dot_id(name)} {{"]
    for v in quiver.vertices:
        lines.append(f"  {_dot_id(v)};")
    for a, (s, t) in quiver.arrows.items():
        lines.append(f"  {_dot_id(s)} -> {_dot_id(t)} [label={_dot_id(a)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _svg(width: int, height: int, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _f(x: float) -> str:
    return f"{x:.2f}"


def model_svg(model: DimerModel, size: int = 400) -> str:
    """The fundamental domain with every edge drawn from both of its ends."""
    missing = [n for n in model.nodes if n not in model.positions]
    if missing:
        raise MissingPositionsError(f"no 'pos' line for nodes {missing}")
    m = 20
    s = size

    def pt(x, y):
        # y grows upward on the torus
        return m + float(x) * s, m + (1 - float(y)) * s

    body = [
        f'<defs><clipPath id="domain"><rect x="{m}" y="{m}" width="{s}" height="{s}"/></clipPath></defs>',
        f'<rect x="{m}" y="{m}" width="{s}" height="{s}" fill="none" stroke="#888" stroke-dasharray="4 3"/>',
        '<g clip-path="url(#domain)" stroke="#333" stroke-width="2">',
    ]
    for e in model.edges.values():
        bx, by = model.positions[e.black]
        wx, wy = model.positions[e.white]
        ox, oy = e.offset
        for (x0, y0), (x1, y1) in (((bx, by), (wx + ox, wy + oy)), ((bx - ox, by - oy), (wx, wy))):
            (px0, py0), (px1, py1) = pt(x0, y0), pt(x1, y1)
            body.append(
                f'<line x1="{_f(px0)}" y1="{_f(py0)}" x2="{_f(px1)}" y2="{_f(py1)}">'
                f"<title>{escape(e.id)}</title></line>"
            )
    body.append("</g>")
    for n in model.nodes:
        x, y = pt(*model.positions[n])
        fill = "#000" if model.colors[n] == BLACK else "#fff"
        body.append(
            f'<circle cx="{_f(x)}" cy="{_f(y)}" r="7" fill="{fill}" stroke="#000" stroke-width="2">'
            f"<title>{escape(n)}</title></circle>"
        )
    return _svg(s + 2 * m, s + 2 * m, body)


def surface_svg(model: DimerModel) -> str:
    """Each node as a disk with edge stubs in twisted cyclic order.

    The vanishing circle of a face crosses the disk of every node it
    passes, as a chord between the two edges it uses there.
    """
    twisted = model.twisted()
    nodes = model.nodes
    cols = max(1, math.ceil(math.sqrt(len(nodes))))
    r, gap = 60, 60
    cell = 2 * r + gap
    rows = math.ceil(len(nodes) / cols)
    anchor = {}
    centers = {}
    for i, n in enumerate(nodes):
        cx = gap / 2 + r + (i % cols) * cell
        cy = gap / 2 + r + (i // cols) * cell
        centers[n] = (cx, cy)
        rot = twisted.rotations[n]
        for j, e in enumerate(rot):
            ang = -2 * math.pi * j / len(rot)  # counterclockwise on screen
            anchor[(n, e)] = (cx + r * math.cos(ang), cy + r * math.sin(ang))
    body = []
    for n in nodes:
        cx, cy = centers[n]
        body.append(
            f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{r}" fill="#f4f4f4" stroke="#000">'
            f"<title>{escape(n)} ({model.colors[n]})</title></circle>"
        )
        for e in twisted.rotations[n]:
            x, y = anchor[(n, e)]
            body.append(f'<text x="{_f(x)}" y="{_f(y)}" font-size="11">{escape(e)}</text>')
    for f in trace_faces(model):
        color = PALETTE[f.id % len(PALETTE)]
        darts = f.boundary
        for d, nxt in zip(darts, darts[1:] + darts[:1]):
            n = model.head(d)
            (x0, y0), (x1, y1) = anchor[(n, d.edge)], anchor[(n, nxt.edge)]
            body.append(
                f'<line x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x1)}" y2="{_f(y1)}" '
                f'stroke="{color}" stroke-width="2"><title>{escape(f"C_{f.id}")}</title></line>'
            )
    return _svg(int(cols * cell), int(rows * cell), body)

