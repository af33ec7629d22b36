"""Readers and writers for the text, CSV and JSON formats used by the CLI."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable

import numpy as np

from .complex import FiniteMetricSpace, SimplicialComplex, VertexFunction, build_complex
from .covers import (
    Cover,
    CoverElement,
    CoverTower,
    ExplicitSet,
    Goodness,
    Interval,
    MetricBall,
    RealSegment,
    build_ball_tower,
    build_dyadic_tower,
    build_net_tower,
)
from .persistence import PersistenceDiagram


class ParseError(ValueError):
    def __init__(self, path, line: int, message: str) -> None:
        super().__init__(f"{path}:{line}: {message}")
        self.path, self.line = path, line


def _lines(path) -> Iterable[tuple[int, list[str]]]:
    with open(path) as fh:
        for no, raw in enumerate(fh, 1):
            text = raw.split("#", 1)[0].strip()
            if text:
                yield no, text.split()


def _point_id(token: str):
    try:
        return int(token)
    except ValueError:
        return token


def _number(token: str) -> float:
    low = token.lower()
    if low in ("inf", "+inf", "infinity"):
        return math.inf
    return float(token)


def read_complex(path, max_dim: int | None = None) -> SimplicialComplex:
    tops = []
    for no, tokens in _lines(path):
        try:
            tops.append([int(t) for t in tokens])
        except ValueError:
            raise ParseError(path, no, f"expected integer vertex ids, got {' '.join(tokens)!r}") from None
    if not tops:
        raise ParseError(path, 0, "no simplices")
    return build_complex(tops, max_dim)


def write_complex(K: SimplicialComplex, path) -> None:
    Path(path).write_text("".join(" ".join(map(str, s)) + "\n" for s in K.maximal_simplices()))


def read_metric(path) -> FiniteMetricSpace:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise ParseError(path, 1, "empty metric file")
    ids = tuple(_point_id(c.strip()) for c in rows[0])
    matrix = []
    for no, row in enumerate(rows[1:], 2):
        if len(row) != len(ids):
            raise ParseError(path, no, f"expected {len(ids)} entries, got {len(row)}")
        try:
            matrix.append([_number(c.strip()) for c in row])
        except ValueError:
            raise ParseError(path, no, "non-numeric distance") from None
    if len(matrix) != len(ids):
        raise ParseError(path, len(rows), f"expected {len(ids)} matrix rows, got {len(matrix)}")
    return FiniteMetricSpace(ids, np.array(matrix))


def read_function(path, codomain: FiniteMetricSpace | None = None) -> VertexFunction:
    values = {}
    for no, tokens in _lines(path):
        if len(tokens) != 2:
            raise ParseError(path, no, "expected `vertex_id value`")
        try:
            v = int(tokens[0])
        except ValueError:
            raise ParseError(path, no, f"bad vertex id {tokens[0]!r}") from None
        if v in values:
            raise ParseError(path, no, f"vertex {v} listed twice")
        if codomain is None:
            try:
                values[v] = float(tokens[1])
            except ValueError:
                raise ParseError(path, no, f"bad value {tokens[1]!r}") from None
        else:
            pid = _point_id(tokens[1])
            if pid not in codomain.ids:
                raise ParseError(path, no, f"point {pid!r} is not in the codomain metric")
            values[v] = pid
    return VertexFunction(values, codomain)


def write_function(f: dict, path) -> None:
    Path(path).write_text("".join(f"{v} {f[v]!r}\n" for v in sorted(f)))


# ------------------------------------------------------------- towers


def _element_from_json(obj: dict) -> CoverElement:
    eid = int(obj["id"])
    if "interval" in obj:
        lo, hi = obj["interval"]
        lo_open, hi_open = obj.get("open", [False, False])
        return CoverElement(eid, Interval(float(lo), float(hi), bool(lo_open), bool(hi_open)))
    if "center" in obj:
        return CoverElement(eid, MetricBall(obj["center"], float(obj["radius"])))
    if "points" in obj:
        return CoverElement(eid, ExplicitSet(frozenset(obj["points"])))
    raise ValueError(f"cover element {eid} needs `interval`, `center`/`radius` or `points`")


def tower_from_spec(spec: dict, metric: FiniteMetricSpace | None = None, values=None) -> CoverTower:
    """Build a tower from a `{type, params, scales}` spec.

    Ball towers over a real segment default their sample to a 2nu-spaced
    grid over the function `values` when no points are given.
    """
    kind = spec.get("type")
    params = dict(spec.get("params", {}))
    scales = spec.get("scales")
    if kind == "balls":
        nu = float(params["nu"])
        if metric is not None:
            return build_ball_tower(params.get("points", list(metric.ids)), nu, scales, codomain=metric)
        codomain = RealSegment(*params["codomain"]) if "codomain" in params else None
        points = params.get("points")
        if points is None:
            if values is None:
                raise ValueError("ball tower over reals needs `points` or a function")
            from .instances import segment_for

            codomain, points = segment_for(list(values), nu)
        return build_ball_tower(points, nu, scales, codomain=codomain)
    if kind == "nets":
        if metric is None:
            raise ValueError("net towers need a codomain metric")
        return build_net_tower(metric, float(params.get("rho", 11.0)), params.get("points"), params.get("nu"), params.get("levels"))
    if kind == "dyadic":
        return build_dyadic_tower(float(params["M"]), float(params["s"]), scales, params.get("nu"))
    if kind == "explicit":
        if metric is not None:
            codomain = metric
        else:
            codomain = RealSegment(*params["codomain"])
        covers = [Cover([_element_from_json(e) for e in cov], codomain) for cov in params["covers"]]
        maps = [{int(k): int(v) for k, v in m.items()} for m in params.get("maps", [])]
        good = params.get("goodness")
        return CoverTower(scales, covers, maps, Goodness(*good) if good else None)
    raise ValueError(f"unknown tower type {kind!r}")


def read_tower_spec(path, metric: FiniteMetricSpace | None = None, values=None) -> CoverTower:
    with open(path) as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(path, exc.lineno, exc.msg) from None
    return tower_from_spec(spec, metric, values)


# ------------------------------------------------------------- diagrams


def format_number(x: float) -> str:
    return "inf" if math.isinf(x) else repr(float(x))


def diagram_text(D: PersistenceDiagram) -> str:
    return "".join(f"{k} {format_number(b)} {format_number(d)}\n" for k, b, d in D.points)


def write_diagram(D: PersistenceDiagram, path) -> None:
    Path(path).write_text(diagram_text(D))


def read_diagram(path) -> PersistenceDiagram:
    pts = []
    for no, tokens in _lines(path):
        if len(tokens) != 3:
            raise ParseError(path, no, "expected `k birth death`")
        try:
            pts.append((int(tokens[0]), _number(tokens[1]), _number(tokens[2])))
        except ValueError:
            raise ParseError(path, no, "bad number") from None
    try:
        return PersistenceDiagram(tuple(pts))
    except ValueError as exc:
        raise ParseError(path, 0, str(exc)) from None


# ------------------------------------------------------------- mapper / towers


def mapper_dot(K: SimplicialComplex, pc=None, name: str = "mapper") -> str:
    """Graph view of the nerve's 1-skeleton; labels are `parent/component`."""
    out = [f"graph {name} {{"]
    for v in sorted(K.vertices):
        label = str(v)
        if pc is not None:
            e = pc.elements[v]
            label = f"{e.parent}/{e.key[1][1]}"
        out.append(f'  {v} [label="{label}"];')
    for u, v in K.simplices_of_dim(1):
        out.append(f"  {u} -- {v};")
    out.append("}")
    return "\n".join(out) + "\n"


def mapper_json(K: SimplicialComplex, pc=None) -> dict:
    out = {"simplices": [list(s) for s in K.sorted_simplices()]}
    if pc is not None:
        out["elements"] = [
            {"id": e.id, "parent": e.parent, "vertices": sorted(e.vertices)} for e in pc.elements
        ]
    return out


def tower_json(T) -> list:
    out = []
    for i, (scale, K) in enumerate(zip(T.scales, T.complexes)):
        entry = {"scale": scale, "complex": [list(s) for s in K.sorted_simplices()]}
        entry["vertex_map_to_next"] = (
            {str(k): v for k, v in sorted(T.maps[i].vertex_map.items())} if i < len(T.maps) else None
        )
        out.append(entry)
    return out


def pseudometric_csv(d) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(d.vertices)
    for row in d.matrix:
        w.writerow([format_number(x) for x in row])
    return buf.getvalue()


def filtration_text(entries) -> str:
    return "".join(
        f"{format_number(v)} {len(s) - 1} {' '.join(map(str, s))}\n"
        for v, s in sorted(entries, key=lambda e: (e[0], len(e[1]), e[1]))
    )


def to_jsonable(x):
    """Plain JSON data; infinities become the strings "inf" / "-inf"."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [to_jsonable(v) for v in items]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        x = x.item()
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def dump_json(obj, path) -> None:
    Path(path).write_text(json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n")
