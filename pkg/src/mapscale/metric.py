"""Pullback pseudometric on vertices, its balls and the induced Čech filtration."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .complex import SimplicialComplex, as_function
from .covers import CoverTower
from .mapper import multiscale_mapper, pullback
from .persistence import PersistenceDiagram, bottleneck, filtration_diagram, log_diagram, tower_diagram


@dataclass
class PullbackPseudometric:
    vertices: tuple
    matrix: np.ndarray = field(repr=False)
    scales: tuple
    element_sets: tuple = field(repr=False, default=())  # per scale, pullback element vertex sets
    provenance: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._index = {v: i for i, v in enumerate(self.vertices)}

    def d(self, x, y) -> float:
        return float(self.matrix[self._index[x], self._index[y]])

    def index(self, x) -> int:
        return self._index[x]

    @property
    def s(self) -> float:
        return self.scales[0]


def pullback_pseudometric(
    tower: CoverTower, f, K: SimplicialComplex, mode: str = "combinatorial", provenance: dict | None = None
) -> PullbackPseudometric:
    """d(x, x') = first grid scale at which some pullback element holds both vertices."""
    f = as_function(f)
    verts = tuple(sorted(K.vertices))
    idx = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    D = np.full((n, n), math.inf)
    np.fill_diagonal(D, 0.0)
    element_sets = []
    for eps, cover in zip(tower.scales, tower.covers):
        pc = pullback(K, f, cover, mode)
        sets = [e.vertices for e in pc.elements if e.vertices]
        element_sets.append(tuple(sets))
        for vs in sets:
            ii = [idx[v] for v in vs]
            block = D[np.ix_(ii, ii)]
            D[np.ix_(ii, ii)] = np.minimum(block, eps)
    np.fill_diagonal(D, 0.0)
    return PullbackPseudometric(verts, D, tuple(tower.scales), tuple(element_sets), dict(provenance or {}, mode=mode))


def ball(d: PullbackPseudometric, x, eps: float) -> frozenset:
    """{x' : d(x, x') <= eps}; at grid scales also checks the union-of-elements identity."""
    if eps < 0:
        raise ValueError("radius must be nonnegative")
    row = d.matrix[d.index(x)]
    out = frozenset(v for v, dist in zip(d.vertices, row) if dist <= eps)
    for i, scale in enumerate(d.scales):
        if scale == eps and d.element_sets:
            union = {x}
            for vs in d.element_sets[i]:
                if x in vs:
                    union |= vs
            if frozenset(union) != out:
                raise RuntimeError(f"ball around {x} at scale {eps} differs from the union of elements")
    return out


@dataclass
class CechFiltration:
    scales: tuple
    entries: list  # (value, simplex), value snapped to the grid
    rips: bool = False

    def complex_at(self, i: int) -> SimplicialComplex:
        eps = self.scales[i]
        return SimplicialComplex([s for v, s in self.entries if v <= eps])

    def value(self, simplex) -> float:
        for v, s in self.entries:
            if s == tuple(sorted(simplex)):
                return v
        return math.inf


def cech_value(d: PullbackPseudometric, simplex) -> float:
    """inf over vertex witnesses w of max over x in simplex of d(w, x)."""
    cols = [d.index(x) for x in simplex]
    return float(d.matrix[:, cols].max(axis=1).min())


def rips_value(d: PullbackPseudometric, simplex) -> float:
    ii = [d.index(x) for x in simplex]
    return float(d.matrix[np.ix_(ii, ii)].max())


def cech_filtration(d: PullbackPseudometric, max_dim: int = 2, rips: bool = False) -> CechFiltration:
    """Simplices up to `max_dim` with their entry scale (first grid scale >= value)."""
    value_fn = rips_value if rips else cech_value
    scales = np.asarray(d.scales)
    entries = []
    verts = list(d.vertices)
    frontier = [(v,) for v in verts]
    for dim in range(max_dim + 1):
        nxt = []
        for s in frontier:
            val = value_fn(d, s)
            if math.isinf(val):
                continue
            pos = int(np.searchsorted(scales, val - 1e-12 * max(1.0, abs(val)), side="left"))
            if pos >= len(scales):
                continue
            entries.append((float(scales[pos]), s))
            nxt.append(s)
        if dim == max_dim:
            break
        # candidate cofaces: extend finite simplices by larger vertices, faces must be present
        present = {s for _, s in entries}
        frontier = []
        for s in nxt:
            for v in verts:
                if v > s[-1]:
                    t = s + (v,)
                    if all(t[:i] + t[i + 1:] in present for i in range(len(t))):
                        frontier.append(t)
    entries.sort(key=lambda e: (e[0], len(e[1]), e[1]))
    return CechFiltration(tuple(d.scales), entries, rips)


@dataclass
class TriangleReport:
    passed: bool
    checked: int
    violations: list

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checked": self.checked, "violations": self.violations}


def relaxed_triangle_check(d: PullbackPseudometric, c: float, s: float, limit: int = 20) -> TriangleReport:
    """Exhaustive test of d(x,x') <= c (d(x,x'') + d(x'',x') + 2s) over all triples."""
    M = d.matrix
    n = len(d.vertices)
    lhs = M[:, None, :]  # x, x''(dummy), x'
    rhs = c * (M[:, :, None] + M[None, :, :] + 2 * s)  # [x, x'', x']
    bad = np.argwhere(lhs > rhs * (1 + 1e-12))
    violations = [
        {"x": d.vertices[i], "via": d.vertices[k], "y": d.vertices[j], "d": M[i, j], "bound": rhs[i, k, j]}
        for i, k, j in bad[:limit]
    ]
    return TriangleReport(len(bad) == 0, n ** 3, violations)


def mm_diagram_log(tower: CoverTower, f, K: SimplicialComplex, k: int, mode: str) -> PersistenceDiagram:
    T = multiscale_mapper(tower, f, K, mode, max_dim=k + 1)
    return log_diagram(tower_diagram(T, k))


def cech_diagram_log(d: PullbackPseudometric, k: int, rips: bool = False) -> PersistenceDiagram:
    C = cech_filtration(d, max_dim=k + 1, rips=rips)
    return log_diagram(filtration_diagram(C.entries, dims=(k,)))


def mm_vs_cech(
    tower: CoverTower,
    f,
    K: SimplicialComplex,
    k: int,
    mode: str = "combinatorial",
    c: float | None = None,
) -> tuple[float, float]:
    """(bottleneck between log-scale MM and Čech diagrams in degree k, bound log(c(s+2)))."""
    if tower.goodness is None:
        raise ValueError("tower carries no (c, s) certificate")
    s = tower.goodness.s
    c = tower.goodness.c if c is None else c
    if s < 1:
        raise ValueError("the MM/Čech comparison needs s >= 1")
    mm = mm_diagram_log(tower, f, K, k, mode)
    d = pullback_pseudometric(tower, f, K, mode)
    cech = cech_diagram_log(d, k)
    return bottleneck(mm, cech, k), math.log(c * (s + 2))
