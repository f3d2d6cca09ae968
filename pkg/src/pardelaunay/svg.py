"""Static SVG rendering of a graph in original coordinates."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .construction import DelaunayGraph
from .geometry import from_square_space

WIDTH = 800
PAD = 40
LEGEND_H = 70


def _witness_corners(graph: DelaunayGraph, w) -> np.ndarray:
    u0, v0 = w.corner
    t = w.side
    sq = np.array([[u0, v0], [u0 + t, v0], [u0 + t, v0 + t], [u0, v0 + t]])
    return from_square_space(graph.shape, sq)


def render_svg(graph: DelaunayGraph, pair: tuple | None = None, witnesses: bool = False,
               ratio: float | None = None, bound: float | None = None) -> str:
    """SVG 1.1 document with points, edges, optional segment ab and witnesses."""
    pts = graph.points
    shapes = [pts]
    if witnesses:
        shapes += [_witness_corners(graph, w) for _, _, w in graph.edges]
    allp = np.concatenate(shapes)
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    span = float(np.max(hi - lo)) or 1.0
    scale = (WIDTH - 2 * PAD) / span
    height = int(math.ceil((hi[1] - lo[1]) * scale)) + 2 * PAD + LEGEND_H

    def xy(p):
        return (PAD + (p[0] - lo[0]) * scale, PAD + (hi[1] - p[1]) * scale)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" '
        f'viewBox="0 0 {WIDTH} {height}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{height}" fill="white"/>',
    ]
    if witnesses:
        out.append('<g id="witnesses" fill="none" stroke="#9ecae1" stroke-width="0.8">')
        for _, _, w in graph.edges:
            c = " ".join("%.3f,%.3f" % xy(p) for p in _witness_corners(graph, w))
            out.append(f'<polygon points="{c}"/>')
        out.append("</g>")
    out.append('<g id="edges" stroke="#333333" stroke-width="1">')
    for i, j, _ in graph.edges:
        (x1, y1), (x2, y2) = xy(pts[i]), xy(pts[j])
        out.append(f'<line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}"/>')
    out.append("</g>")
    if pair is not None:
        (x1, y1), (x2, y2) = xy(pts[pair[0]]), xy(pts[pair[1]])
        out.append(f'<line id="segment-ab" x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" '
                   'stroke="#d62728" stroke-width="1.5" stroke-dasharray="6,4"/>')
    out.append('<g id="points" fill="#1f77b4">')
    for p in pts:
        x, y = xy(p)
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="2.5"/>')
    out.append("</g>")
    legend = [f"A = {graph.shape.aspect:.6g}, theta0 = {graph.shape.angle:.6g} rad"]
    if ratio is not None:
        legend.append(f"measured ratio = {ratio:.10g}")
    if bound is not None:
        legend.append(f"bound = {bound:.10g}")
    y0 = height - LEGEND_H + 18
    out.append('<g id="legend" font-family="monospace" font-size="13" fill="black">')
    for n, text in enumerate(legend):
        out.append(f'<text x="{PAD}" y="{y0 + 18 * n}">{escape(text)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
