"""Pullback covers, nerves, mapper and multiscale mapper.

Three pullback modes are offered:

* ``exact-full``: components of the PL preimage inside |K| for every simplex of K;
* ``exact-pl``: the same computation restricted to the 1-skeleton of K;
* ``combinatorial``: graph components of the vertex preimage f_V^{-1}(U).

Exact modes need a real-valued f and interval cover elements. All exact
comparisons are made on the input floats (or Fractions derived from them),
never with a tolerance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .complex import (
    Graph,
    SimplicialComplex,
    SimplicialMap,
    UnionFind,
    VertexFunction,
    as_function,
    connected_components,
    one_skeleton,
)
from .covers import Cover, CoverTower, Interval, RealSegment

MODES = ("exact-pl", "exact-full", "combinatorial")


@dataclass(frozen=True)
class PartialEdge:
    """Portion of edge (u, v), u < v, parametrized by t in [0, 1] from u to v."""

    edge: tuple
    lo: Fraction
    hi: Fraction
    lo_open: bool = False
    hi_open: bool = False

    def overlaps(self, other: "PartialEdge") -> bool:
        a = Interval(self.lo, self.hi, self.lo_open, self.hi_open)
        b = Interval(other.lo, other.hi, other.lo_open, other.hi_open)
        return a.intersect(b) is not None


@dataclass(frozen=True)
class PullbackElement:
    id: int
    parent: int
    key: tuple
    vertices: frozenset
    simplices: frozenset = frozenset()
    full_edges: frozenset = frozenset()
    partial_edges: tuple = ()

    @property
    def edges(self) -> frozenset:
        return self.full_edges | frozenset(p.edge for p in self.partial_edges)


@dataclass
class PullbackCover:
    elements: list
    mode: str
    complex: SimplicialComplex
    cover: Cover
    # (parent id, simplex or vertex) -> element id
    lookup: dict = field(repr=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, element_id: int) -> PullbackElement:
        return self.elements[element_id]

    def by_parent(self, parent: int) -> list[PullbackElement]:
        return [e for e in self.elements if e.parent == parent]


def _check_real(f: VertexFunction, cover: Cover) -> None:
    if not isinstance(cover.codomain, RealSegment):
        raise ValueError("exact pullbacks need a real segment codomain")
    for e in cover:
        if not isinstance(e.extent, Interval):
            raise ValueError(f"exact pullbacks need interval elements; element {e.id} is not one")
    if f.codomain is not None:
        raise ValueError("exact pullbacks need a real-valued function")


def _image_range(simplex: tuple, f: VertexFunction) -> Interval:
    vals = [float(f[v]) for v in simplex]
    return Interval(min(vals), max(vals))


def _partial_edge(edge: tuple, f: VertexFunction, U: Interval) -> PartialEdge:
    u, v = edge
    fu, fv = Fraction(float(f[u])), Fraction(float(f[v]))
    if fu == fv:
        return PartialEdge(edge, Fraction(0), Fraction(1))
    t_lo, t_hi = (Fraction(U.lo) - fu) / (fv - fu), (Fraction(U.hi) - fu) / (fv - fu)
    lo_open, hi_open = U.lo_open, U.hi_open
    if fv < fu:
        t_lo, t_hi, lo_open, hi_open = t_hi, t_lo, hi_open, lo_open
    if t_lo <= 0:
        t_lo, lo_open = Fraction(0), False
    if t_hi >= 1:
        t_hi, hi_open = Fraction(1), False
    return PartialEdge(edge, t_lo, t_hi, lo_open, hi_open)


def _finalize(raw: list[tuple], cover: Cover, K: SimplicialComplex, mode: str, lookup_items) -> PullbackCover:
    raw.sort(key=lambda r: r[0])
    elements, lookup = [], {}
    for new_id, (key, payload) in enumerate(raw):
        elements.append(PullbackElement(new_id, key[0], key, **payload))
    index = {e.key: e.id for e in elements}
    for parent, item, key in lookup_items:
        lookup[(parent, item)] = index[key]
    return PullbackCover(elements, mode, K, cover, lookup)


def pullback_exact(K: SimplicialComplex, f, cover: Cover, mode: str = "exact-full") -> PullbackCover:
    """Connected components of the PL preimage of every interval, inside |K|.

    The preimage inside a closed simplex is convex, so a component is a union
    of active simplices (image range meets U) glued along active facets.
    """
    f = as_function(f)
    f.check_total(K.vertices)
    _check_real(f, cover)
    raw, lookup_items = [], []
    for ce in cover:
        U = ce.extent
        active = [s for s in K.sorted_simplices() if _image_range(s, f).intersect(U) is not None]
        active_set = set(active)
        uf = UnionFind(active)
        for s in active:
            if len(s) > 1:
                for i in range(len(s)):
                    face = s[:i] + s[i + 1:]
                    if face in active_set:
                        uf.union(s, face)
        for block in uf.blocks():
            verts = frozenset(s[0] for s in block if len(s) == 1)
            full, partial = [], []
            for s in block:
                if len(s) == 2:
                    if _image_range(s, f).issubset(U):
                        full.append(s)
                    else:
                        partial.append(_partial_edge(s, f, U))
            key = (ce.id, (0, min(verts)) if verts else (1, min(block)))
            payload = dict(
                vertices=verts,
                simplices=frozenset(block),
                full_edges=frozenset(full),
                partial_edges=tuple(sorted(partial, key=lambda p: p.edge)),
            )
            raw.append((key, payload))
            lookup_items.extend((ce.id, s, key) for s in block)
    return _finalize(raw, cover, K, mode, lookup_items)


def pullback_exact_pl(K1: Graph, f, cover: Cover) -> PullbackCover:
    """Exact PL pullback computed on the 1-skeleton only."""
    return pullback_exact(K1.as_complex(), f, cover, mode="exact-pl")


def pullback_combinatorial(G: Graph, f, cover: Cover) -> PullbackCover:
    """G-induced pullback: graph components of each vertex preimage."""
    f = as_function(f)
    f.check_total(G.vertices)
    raw, lookup_items = [], []
    for ce in cover:
        pre = [v for v in sorted(G.vertices) if cover.contains_value(ce.id, f[v])]
        for block in connected_components(pre, G):
            key = (ce.id, (0, block[0]))
            raw.append((key, dict(vertices=frozenset(block), simplices=frozenset((v,) for v in block))))
            lookup_items.extend((ce.id, (v,), key) for v in block)
    return _finalize(raw, cover, G.as_complex(), "combinatorial", lookup_items)


def pullback(K: SimplicialComplex, f, cover: Cover, mode: str) -> PullbackCover:
    if mode == "exact-full":
        return pullback_exact(K, f, cover)
    if mode == "exact-pl":
        return pullback_exact_pl(one_skeleton(K), f, cover)
    if mode == "combinatorial":
        return pullback_combinatorial(one_skeleton(K), f, cover)
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def pullback_cover_map(pc: PullbackCover, pc_next: PullbackCover, xi: dict) -> dict:
    """Element map induced by the codomain cover map `xi`.

    Each element goes to the element of `pc_next` with parent xi(parent)
    that contains it; uniqueness is checked over all of its simplices.
    """
    out = {}
    for e in pc.elements:
        target_parent = xi[e.parent]
        hits = set()
        for s in e.simplices:
            t = pc_next.lookup.get((target_parent, s))
            if t is None:
                raise ValueError(
                    f"element {e.id} (parent {e.parent}) has simplex {s} outside every "
                    f"element over parent {target_parent}"
                )
            hits.add(t)
        if len(hits) != 1:
            raise ValueError(f"element {e.id} meets several target components {sorted(hits)}")
        out[e.id] = hits.pop()
    return out


def _element_interval(pc: PullbackCover, e: PullbackElement, simplex: tuple, f: VertexFunction) -> Interval | None:
    return pc.cover[e.parent].extent.intersect(_image_range(simplex, f))


def _common_point_groups(intervals: dict) -> list[frozenset]:
    """Maximal groups of ids whose intervals share a point (1D, exact)."""
    # endpoints are input floats, so float comparisons are exact; a float
    # midpoint of two distinct floats lies strictly between them
    ends = sorted({iv.lo for iv in intervals.values()} | {iv.hi for iv in intervals.values()})
    probes = list(ends) + [(a + b) / 2 for a, b in zip(ends, ends[1:])]
    items = [(i, iv.lo, iv.hi, iv.lo_open, iv.hi_open) for i, iv in intervals.items()]
    groups = set()
    for y in probes:
        g = frozenset(
            i for i, lo, hi, lo_open, hi_open in items
            if (lo < y or (lo == y and not lo_open)) and (y < hi or (y == hi and not hi_open))
        )
        if g:
            groups.add(g)
    return [g for g in groups if not any(g < h for h in groups)]


def nerve_of_sets(groups: Sequence, max_dim: int | None = 2) -> SimplicialComplex:
    """Complex with every subset (up to max_dim; all of them for None) of every given vertex group."""
    simplices = set()
    for g in groups:
        g = sorted(g)
        top = len(g) if max_dim is None else min(len(g), max_dim + 1)
        for size in range(1, top + 1):
            simplices.update(itertools.combinations(g, size))
    return SimplicialComplex(simplices)


def nerve(pc: PullbackCover, max_dim: int | None = 2, f=None) -> SimplicialComplex:
    """Nerve of a pullback cover, capped at `max_dim` (uncapped for None).

    Combinatorial elements meet iff they share a vertex. Exact elements meet
    iff, inside some maximal simplex they all contain, their parent intervals
    and the simplex image share a value. Exact mode needs `f`.
    """
    groups = []
    if pc.mode == "combinatorial":
        by_vertex: dict = {}
        for e in pc.elements:
            for v in e.vertices:
                by_vertex.setdefault(v, []).append(e.id)
        groups = list(by_vertex.values())
    else:
        if f is None:
            raise ValueError("exact nerves need the function")
        f = as_function(f)
        for sigma in pc.complex.maximal_simplices():
            intervals = {}
            for parent in pc.cover.ids:
                eid = pc.lookup.get((parent, sigma))
                if eid is not None:
                    iv = _element_interval(pc, pc.elements[eid], sigma, f)
                    if iv is not None:
                        intervals[eid] = iv
            if intervals:
                groups.extend(_common_point_groups(intervals))
    groups.extend([e.id] for e in pc.elements)
    return nerve_of_sets(groups, max_dim)


def mapper(cover: Cover, f, K: SimplicialComplex, mode: str = "exact-pl", max_dim: int | None = 2) -> SimplicialComplex:
    return nerve(pullback(K, f, cover, mode), max_dim, f)


@dataclass
class ComplexTower:
    scales: tuple
    complexes: tuple
    maps: tuple
    pullbacks: tuple = ()

    def __post_init__(self) -> None:
        if len(self.complexes) != len(self.scales) or len(self.maps) != len(self.scales) - 1:
            raise ValueError("need one complex per scale and one map per consecutive pair")
        for i, m in enumerate(self.maps):
            if m.source != self.complexes[i] or m.target != self.complexes[i + 1]:
                raise ValueError(f"map {i} does not connect complexes {i} and {i + 1}")

    def __len__(self) -> int:
        return len(self.scales)

    def with_scales(self, scales) -> "ComplexTower":
        return ComplexTower(tuple(scales), self.complexes, self.maps, self.pullbacks)


def multiscale_mapper(
    tower: CoverTower,
    f,
    K: SimplicialComplex,
    mode: str = "exact-pl",
    max_dim: int | None = 2,
) -> ComplexTower:
    """Tower of nerves of pullbacks, with nerve maps induced by the cover maps."""
    f = as_function(f)
    pcs = [pullback(K, f, cover, mode) for cover in tower.covers]
    complexes = [nerve(pc, max_dim, f) for pc in pcs]
    maps = []
    for i in range(len(pcs) - 1):
        vm = pullback_cover_map(pcs[i], pcs[i + 1], tower.maps[i])
        maps.append(SimplicialMap(complexes[i], complexes[i + 1], vm))
    return ComplexTower(tuple(tower.scales), tuple(complexes), tuple(maps), tuple(pcs))


@dataclass(frozen=True)
class MinDiameterCheck:
    ok: bool
    kappa: float
    worst_simplex: tuple | None
    worst_diameter: float


def check_min_diameter(K: SimplicialComplex, f, tower: CoverTower) -> MinDiameterCheck:
    """Every simplex image has diameter at most the smallest element diameter.

    Simplex image diameters are pairwise vertex distances, so checking edges
    is enough for both real and metric codomains.
    """
    f = as_function(f)
    f.check_total(K.vertices)
    kappa = tower.min_element_diameter()
    worst, worst_d = None, 0.0
    for u, v in K.simplices_of_dim(1):
        d = f.distance(f[u], f[v])
        if d > worst_d:
            worst, worst_d = (u, v), d
    return MinDiameterCheck(worst_d <= kappa, kappa, worst, worst_d)


def skeleton_correspondence(pc_full: PullbackCover, pc_skel: PullbackCover) -> dict:
    """Match exact full-complex elements to 1-skeleton elements by their vertex/edge trace."""
    trace = {}
    for e in pc_skel.elements:
        trace[(e.parent, e.vertices, e.edges)] = e.id
    out = {}
    for e in pc_full.elements:
        key = (e.parent, e.vertices, e.edges)
        if key not in trace:
            raise ValueError(f"element {e.id} (parent {e.parent}) has no 1-skeleton counterpart")
        out[e.id] = trace[key]
    if len(set(out.values())) != len(pc_skel.elements) or len(out) != len(pc_skel.elements):
        raise ValueError("element correspondence is not a bijection")
    return out


def check_tower_isomorphism(T1: ComplexTower, T2: ComplexTower, bijections: Sequence[dict]) -> bool:
    """Per-scale vertex bijections are simplicial isomorphisms commuting with the maps."""
    if len(T1) != len(T2) or len(bijections) != len(T1):
        return False
    for K1, K2, b in zip(T1.complexes, T2.complexes, bijections):
        if set(b) != set(K1.vertices) or set(b.values()) != set(K2.vertices):
            return False
        image = {tuple(sorted(b[v] for v in s)) for s in K1.simplices}
        if image != set(K2.simplices):
            return False
    for i, (m1, m2) in enumerate(zip(T1.maps, T2.maps)):
        b, b_next = bijections[i], bijections[i + 1]
        for v in m1.source.vertices:
            if b_next[m1.vertex_map[v]] != m2.vertex_map[b[v]]:
                return False
    return True


def skeleton_isomorphic(T_full: ComplexTower, T_skel: ComplexTower) -> bool:
    try:
        bij = [skeleton_correspondence(a, b) for a, b in zip(T_full.pullbacks, T_skel.pullbacks)]
    except ValueError:
        return False
    return check_tower_isomorphism(T_full, T_skel, bij)
