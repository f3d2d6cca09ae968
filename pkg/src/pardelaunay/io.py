"""Point and graph file formats.

Points are CSV (``x,y`` per line, optional header) or JSON (a list of
pairs, or an object with a ``points`` list).  Graphs are JSON objects::

    {"shape": {"A": .., "theta0": ..}, "points": [[x, y], ..],
     "edges": [[i, j], ..], "triangles": [[i, j, k], ..],
     "witnesses": [{"corner": [u, v], "side": t}, ..],
     "triangle_witnesses": [{..}, ..]}

``witnesses`` runs parallel to ``edges`` and ``triangle_witnesses`` to
``triangles``; the latter is optional on input.  Witness squares are stored
in square-space coordinates.  Reals are written
with 17 significant digits; non-finite reals become ``null``.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .construction import DelaunayGraph, WitnessSquare
from .geometry import Point, ShapeSpec


class InputFormatError(ValueError):
    pass


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if s in ("-0", "0"):
        return "0.0" if s == "0" else "-0.0"
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _encode(obj, out: list) -> None:
    if obj is None or obj is True or obj is False:
        out.append(json.dumps(obj))
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for n, (k, v) in enumerate(obj.items()):
            if n:
                out.append(", ")
            out.append(json.dumps(str(k)) + ": ")
            _encode(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for n, v in enumerate(obj):
            if n:
                out.append(", ")
            _encode(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON text with reals at 17 significant digits."""
    out: list = []
    _encode(obj, out)
    return "".join(out)


def _check_points(arr) -> np.ndarray:
    try:
        pts = np.asarray(arr, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputFormatError(f"points are not numeric: {exc}") from None
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InputFormatError("points must be a list of (x, y) pairs")
    if len(pts) == 0:
        raise InputFormatError("no points given")
    if not np.isfinite(pts).all():
        raise InputFormatError("point coordinates must be finite")
    return pts


def parse_points(text: str, fmt: str | None = None) -> np.ndarray:
    """Read points from CSV or JSON text; ``fmt=None`` sniffs the format."""
    stripped = text.lstrip()
    if fmt is None:
        fmt = "json" if stripped[:1] in ("[", "{") else "csv"
    if fmt == "json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputFormatError(f"invalid JSON: {exc}") from None
        if isinstance(data, dict):
            if "points" not in data:
                raise InputFormatError("JSON object has no 'points' field")
            data = data["points"]
        return _check_points(data)
    if fmt != "csv":
        raise InputFormatError(f"unknown format {fmt!r}")
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if rows:
        try:
            float(rows[0][0])
        except ValueError:
            rows = rows[1:]
    if any(len(r) != 2 for r in rows):
        raise InputFormatError("every CSV row must have exactly two columns")
    try:
        vals = [[float(x), float(y)] for x, y in rows]
    except ValueError as exc:
        raise InputFormatError(f"bad CSV value: {exc}") from None
    return _check_points(vals)


def format_points(points, fmt: str = "csv") -> str:
    pts = np.asarray(points, dtype=float)
    if fmt == "json":
        return dumps({"points": pts.tolist()}) + "\n"
    return "x,y\n" + "".join(f"{_fmt(x)},{_fmt(y)}\n" for x, y in pts)


def _witness(w: WitnessSquare) -> dict:
    return {"corner": [w.corner.x, w.corner.y], "side": w.side}


def graph_to_dict(graph: DelaunayGraph) -> dict:
    return {
        "shape": {"A": graph.shape.aspect, "theta0": graph.shape.angle},
        "points": graph.points.tolist(),
        "edges": [[i, j] for i, j, _ in graph.edges],
        "triangles": [[i, j, k] for i, j, k, _ in graph.triangles],
        "witnesses": [_witness(w) for _, _, w in graph.edges],
        "triangle_witnesses": [_witness(w) for *_, w in graph.triangles],
    }


def _read_witness(d) -> WitnessSquare:
    return WitnessSquare(Point(float(d["corner"][0]), float(d["corner"][1])), float(d["side"]))


def graph_from_dict(d: dict) -> DelaunayGraph:
    try:
        shape = ShapeSpec(float(d["shape"]["A"]), float(d["shape"]["theta0"]))
        pts = _check_points(d["points"])
        ws = [_read_witness(w) for w in d["witnesses"]]
        if len(ws) != len(d["edges"]):
            raise InputFormatError("'witnesses' must have one entry per edge")
        edges = [(int(i), int(j), w) for (i, j), w in zip(d["edges"], ws)]
        tw = d.get("triangle_witnesses")
        if tw is None:
            tris = []
        else:
            if len(tw) != len(d["triangles"]):
                raise InputFormatError("'triangle_witnesses' must have one entry per triangle")
            tris = [(int(i), int(j), int(k), _read_witness(w)) for (i, j, k), w in zip(d["triangles"], tw)]
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        if isinstance(exc, InputFormatError):
            raise
        raise InputFormatError(f"malformed graph JSON: {exc!r}") from None
    n = len(pts)
    for i, j, _ in edges:
        if not (0 <= i < j < n):
            raise InputFormatError(f"edge ({i}, {j}) is out of range or not ascending")
    return DelaunayGraph(pts, edges, tris, shape)


def parse_graph(text: str) -> DelaunayGraph:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(d, dict) or "edges" not in d:
        raise InputFormatError("not a graph JSON object")
    return graph_from_dict(d)


def looks_like_graph(text: str) -> bool:
    s = text.lstrip()
    if not s.startswith("{"):
        return False
    try:
        d = json.loads(s)
    except json.JSONDecodeError:
        return False
    return isinstance(d, dict) and "edges" in d
