"""Deterministic SVG drawings of hexagon patches."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .engine import load_system
from .lattice import to_float
from .twoadic import arrow_head_ccw

PARITY_COLOURS = {0: "#ffffff", 1: "#9a9a9a"}
_PALETTE = ["#f2c14e", "#5fad56", "#4d9de0", "#e15554", "#7768ae", "#3bb273", "#e1bc29",
            "#f78154", "#b4436c", "#5c8001"]


class StyleError(KeyError):
    pass


@dataclass
class RenderSpec:
    colours: dict = field(default_factory=dict)  # label string or parity int -> colour
    arrows: bool = False
    flags: bool = False
    diagonals: bool = False
    scale: float = 12.0
    margin: float = 1.5
    viewport: tuple | None = None  # (xmin, ymin, xmax, ymax) in hexagon units
    stroke: str = "#333333"


def default_spec(system: str, **kw) -> RenderSpec:
    s = load_system(system)
    cols = {}
    for lab in s.labels:
        base = s.bases.index(lab.base) if lab.base in s.bases else 0
        if s.kind == "halfhex":
            base = lab.orientation
        cols[str(lab)] = _PALETTE[base % len(_PALETTE)] if lab.chirality else _shade(_PALETTE[base % len(_PALETTE)])
    return RenderSpec(colours=cols, **kw)


def _shade(c: str) -> str:
    r, g, b = (int(c[i:i + 2], 16) for i in (1, 3, 5))
    return "#%02x%02x%02x" % (r * 3 // 5, g * 3 // 5, b * 3 // 5)


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _corner(c, j):
    a = math.radians(60 * j)
    return c[0] + math.cos(a), c[1] + math.sin(a)


def render_svg(cells: dict, spec: RenderSpec, system: str | None = None) -> str:
    """cells: point -> label string (decorated systems) or parity int."""
    s = load_system(system) if system else None
    for lab in set(cells.values()):
        if lab not in spec.colours:
            raise StyleError(f"no style for label {lab!r}")
    pts = {q: to_float(q) for q in cells}
    if spec.viewport:
        x0, y0, x1, y1 = spec.viewport
    elif pts:
        xs = [p[0] for p in pts.values()]
        ys = [p[1] for p in pts.values()]
        x0, x1 = min(xs) - spec.margin, max(xs) + spec.margin
        y0, y1 = min(ys) - spec.margin, max(ys) + spec.margin
    else:
        x0 = y0 = -spec.margin
        x1 = y1 = spec.margin
    k = spec.scale
    w, h = (x1 - x0) * k, (y1 - y0) * k

    def tx(p):
        return _fmt((p[0] - x0) * k), _fmt((y1 - p[1]) * k)

    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(w)}" '
           f'height="{_fmt(h)}" viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
           f'<rect width="{_fmt(w)}" height="{_fmt(h)}" fill="#fafafa"/>',
           '<g stroke="%s" stroke-width="%s">' % (spec.stroke, _fmt(max(0.5, k / 20)))]
    for q in sorted(cells):
        c = pts[q]
        poly = " ".join("%s,%s" % tx(_corner(c, j)) for j in range(6))
        out.append(f'<polygon points="{poly}" fill="{escape(str(spec.colours[cells[q]]))}"/>')
    out.append("</g>")
    if s is not None and (spec.arrows or spec.flags or spec.diagonals):
        out.append('<g fill="#1f4e9c" stroke="none">')
        for q in sorted(cells):
            lab = s.labels[s.label_index(cells[q])]
            c = pts[q]
            if spec.arrows and s.kind != "halfhex":
                for e in range(6):
                    out.append(_arrow(c, e, arrow_head_ccw(lab.orientation, e), tx, k))
            if spec.flags and s.kind == "decorated":
                from .rules import decoration, llama_flag
                table = decoration(s.name)["flags"]
                for v in range(6):
                    f = llama_flag((lab.orientation, lab.chirality), v, table)
                    out.append(_flag(c, v, f, tx, k))
        out.append("</g>")
        if spec.diagonals:
            out.append('<g stroke="#c0392b" stroke-width="%s">' % _fmt(max(0.5, k / 15)))
            for q in sorted(cells):
                lab = s.labels[s.label_index(cells[q])]
                ell = lab.orientation % 3
                a, b = tx(_corner(pts[q], ell)), tx(_corner(pts[q], ell + 3))
                out.append(f'<line x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}"/>')
            out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _arrow(c, e, ccw: bool, tx, k) -> str:
    p0, p1 = _corner(c, e), _corner(c, e + 1)
    if not ccw:
        p0, p1 = p1, p0
    m = ((p0[0] + p1[0]) / 2, (p0[1] + p1[1]) / 2)
    d = (p1[0] - p0[0], p1[1] - p0[1])
    n = (-d[1], d[0])
    tip = (m[0] + 0.18 * d[0], m[1] + 0.18 * d[1])
    l = (m[0] - 0.1 * d[0] + 0.08 * n[0], m[1] - 0.1 * d[1] + 0.08 * n[1])
    r = (m[0] - 0.1 * d[0] - 0.08 * n[0], m[1] - 0.1 * d[1] - 0.08 * n[1])
    return '<polygon points="%s"/>' % " ".join("%s,%s" % tx(p) for p in (tip, l, r))


def _flag(c, v, f: int, tx, k) -> str:
    p = _corner(c, v)
    q = _corner(c, v + (1 if f else -1))
    x = (0.8 * p[0] + 0.2 * q[0] + 0.1 * (c[0] - p[0]), 0.8 * p[1] + 0.2 * q[1] + 0.1 * (c[1] - p[1]))
    x0, y0 = tx(x)
    return f'<circle cx="{x0}" cy="{y0}" r="{_fmt(max(0.6, 0.07 * k))}"/>'


def render_patch(patch, spec: RenderSpec | None = None, parity: bool = False) -> str:
    from .systems import parity as parity_of
    s = load_system(patch.system)
    if parity:
        cells = parity_of(patch)
        spec = spec or RenderSpec(colours=dict(PARITY_COLOURS))
        return render_svg(cells, spec)
    spec = spec or default_spec(s.name)
    return render_svg({q: s.label_str(l) for q, l in patch.cells.items()}, spec, s.name)


def render_parity(par: dict, spec: RenderSpec | None = None) -> str:
    return render_svg(par, spec or RenderSpec(colours=dict(PARITY_COLOURS)))
