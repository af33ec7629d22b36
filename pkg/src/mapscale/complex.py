"""Finite abstract simplicial complexes, graphs and simplicial maps.

Simplices are stored as sorted tuples of integer vertex ids, which gives
deterministic hashing and iteration order everywhere downstream.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

import numpy as np

Simplex = tuple


def as_simplex(vertices: Iterable[int]) -> Simplex:
    return tuple(sorted(set(vertices)))


def faces(simplex: Simplex, max_dim: int | None = None) -> Iterator[Simplex]:
    """All nonempty faces of `simplex` (including itself), up to `max_dim`."""
    top = len(simplex) if max_dim is None else min(len(simplex), max_dim + 1)
    for size in range(1, top + 1):
        yield from itertools.combinations(simplex, size)


class UnionFind:
    """Union-find whose representative is always the minimum element of a block."""

    def __init__(self, items: Iterable[Hashable] = ()) -> None:
        self.parent: dict = {}
        for item in items:
            self.add(item)

    def add(self, item: Hashable) -> None:
        if item not in self.parent:
            self.parent[item] = item

    def find(self, item: Hashable) -> Hashable:
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a: Hashable, b: Hashable) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra

    def blocks(self) -> list[list]:
        groups: dict = {}
        for item in self.parent:
            groups.setdefault(self.find(item), []).append(item)
        return [sorted(g) for _, g in sorted(groups.items())]


class SimplicialComplex:
    """Immutable finite abstract simplicial complex.

    Construct with :func:`build_complex` from maximal simplices; the plain
    constructor expects an already face-closed collection and validates it.
    """

    __slots__ = ("vertices", "simplices", "_by_dim", "_hash")

    def __init__(self, simplices: Iterable[Iterable[int]], vertices: Iterable[int] | None = None) -> None:
        simps = set()
        for s in simplices:
            s = as_simplex(s)
            if not s:
                raise ValueError("empty simplex")
            simps.add(s)
        verts = {s[0] for s in simps if len(s) == 1}
        if vertices is not None:
            extra = set(vertices) - verts
            simps.update((v,) for v in extra)
            verts |= extra
        for s in simps:
            if len(s) > 1:
                for i in range(len(s)):
                    face = s[:i] + s[i + 1:]
                    if face not in simps:
                        raise ValueError(f"not closed under faces: {face} missing from {s}")
        self.vertices = frozenset(verts)
        self.simplices = frozenset(simps)
        by_dim: dict[int, list] = {}
        for s in simps:
            by_dim.setdefault(len(s) - 1, []).append(s)
        self._by_dim = {k: sorted(v) for k, v in sorted(by_dim.items())}
        self._hash = None

    @property
    def dimension(self) -> int:
        return max(self._by_dim) if self._by_dim else -1

    def simplices_of_dim(self, k: int) -> list[Simplex]:
        return self._by_dim.get(k, [])

    def sorted_simplices(self) -> list[Simplex]:
        """Simplices ordered by (dimension, lexicographic)."""
        return [s for k in sorted(self._by_dim) for s in self._by_dim[k]]

    def maximal_simplices(self) -> list[Simplex]:
        covered = set()
        for s in self.simplices:
            if len(s) > 1:
                for i in range(len(s)):
                    covered.add(s[:i] + s[i + 1:])
        return sorted(s for s in self.simplices if s not in covered)

    def skeleton(self, k: int) -> "SimplicialComplex":
        return SimplicialComplex([s for s in self.simplices if len(s) <= k + 1])

    def __contains__(self, simplex: Iterable[int]) -> bool:
        return as_simplex(simplex) in self.simplices

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self.sorted_simplices())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SimplicialComplex) and self.simplices == other.simplices

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.simplices)
        return self._hash

    def __repr__(self) -> str:
        counts = ", ".join(f"{len(v)}" for v in self._by_dim.values())
        return f"SimplicialComplex(dim={self.dimension}, counts=[{counts}])"


@dataclass(frozen=True)
class Graph:
    vertices: frozenset
    edges: frozenset

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if u not in self.vertices or v not in self.vertices:
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside the vertex set")

    @classmethod
    def from_edges(cls, vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(frozenset(vertices), frozenset(as_simplex(e) for e in edges))

    def as_complex(self) -> SimplicialComplex:
        return SimplicialComplex([(v,) for v in self.vertices] + list(self.edges))

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


def build_complex(maximal_simplices: Iterable[Iterable[int]], max_dim: int | None = None) -> SimplicialComplex:
    """Downward closure of the given simplices, optionally capped at `max_dim`."""
    closed = set()
    for s in maximal_simplices:
        s = as_simplex(s)
        if not s:
            raise ValueError("empty simplex in input")
        if s in closed:
            continue
        closed.update(faces(s, max_dim))
    return SimplicialComplex(closed)


def one_skeleton(K: SimplicialComplex) -> Graph:
    return Graph(K.vertices, frozenset(K.simplices_of_dim(1)))


def connected_components(O: Iterable[int], G: Graph) -> list[list[int]]:
    """Partition of `O` into blocks connected inside the subgraph of `G` spanned by `O`.

    Blocks are sorted lists, ordered by their minimum vertex.
    """
    O = set(O)
    missing = O - G.vertices
    if missing:
        raise ValueError(f"vertices not in graph: {sorted(missing)}")
    uf = UnionFind(sorted(O))
    for u, v in G.edges:
        if u in O and v in O:
            uf.union(u, v)
    return uf.blocks()


@dataclass(frozen=True)
class SimplicialMap:
    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: Mapping[int, int]
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.check:
            return
        missing = self.source.vertices - set(self.vertex_map)
        if missing:
            raise ValueError(f"vertex map not total; missing {sorted(missing)}")
        for s in self.source.simplices:
            img = self.image(s)
            if img not in self.target.simplices:
                raise ValueError(f"not simplicial: {s} maps to {img}")

    def image(self, simplex: Iterable[int]) -> Simplex:
        return as_simplex(self.vertex_map[v] for v in simplex)

    def compose(self, first: "SimplicialMap") -> "SimplicialMap":
        """self ∘ first."""
        if first.target != self.source:
            raise ValueError("maps are not composable")
        vm = {v: self.vertex_map[first.vertex_map[v]] for v in first.source.vertices}
        return SimplicialMap(first.source, self.target, vm, check=False)

    @classmethod
    def identity(cls, K: SimplicialComplex) -> "SimplicialMap":
        return cls(K, K, {v: v for v in K.vertices}, check=False)


def are_contiguous(h1: SimplicialMap, h2: SimplicialMap) -> bool:
    if h1.source != h2.source or h1.target != h2.target:
        raise ValueError("contiguity needs maps with the same source and target")
    target = h1.target.simplices
    for s in h1.source.maximal_simplices():
        if as_simplex(list(h1.image(s)) + list(h2.image(s))) not in target:
            return False
    return True


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Points `ids[i]` with symmetric distance matrix `matrix`."""

    ids: tuple
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float)
        n = len(self.ids)
        if m.shape != (n, n):
            raise ValueError(f"distance matrix shape {m.shape} does not match {n} ids")
        if len(set(self.ids)) != n:
            raise ValueError("duplicate point ids")
        if not np.array_equal(m, m.T):
            raise ValueError("distance matrix is not symmetric")
        if np.any(np.diag(m) != 0):
            raise ValueError("distance matrix has a nonzero diagonal")
        if np.any(m < 0):
            raise ValueError("negative distance")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.ids)})
        # m[i, j] > m[i, k] + m[k, j]; skipped for large spaces (cubic memory)
        if 0 < n <= 300 and np.any(m[:, None, :] > m[:, :, None] + m[None, :, :] + 1e-9):
            warnings.warn("distance matrix violates the triangle inequality", stacklevel=3)

    @classmethod
    def from_points(cls, coords: Sequence[Sequence[float]], ids: Sequence | None = None) -> "FiniteMetricSpace":
        x = np.asarray(coords, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        d = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(-1))
        d = (d + d.T) / 2
        np.fill_diagonal(d, 0.0)
        return cls(tuple(range(len(x))) if ids is None else tuple(ids), d)

    def index(self, p) -> int:
        return self._index[p]

    def d(self, p, q) -> float:
        return float(self.matrix[self._index[p], self._index[q]])

    def diameter(self, points: Iterable | None = None) -> float:
        if points is None:
            return float(self.matrix.max()) if len(self.ids) else 0.0
        idx = [self._index[p] for p in points]
        if len(idx) < 2:
            return 0.0
        return float(self.matrix[np.ix_(idx, idx)].max())

    def ball(self, center, radius: float) -> frozenset:
        row = self.matrix[self._index[center]]
        return frozenset(p for p, dist in zip(self.ids, row) if dist <= radius)

    def __len__(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class VertexFunction:
    """Function on vertex ids: real values, or point ids of `codomain`."""

    values: Mapping[int, object]
    codomain: FiniteMetricSpace | None = None

    @property
    def domain(self) -> frozenset:
        return frozenset(self.values)

    def __getitem__(self, v: int):
        return self.values[v]

    def distance(self, a, b) -> float:
        if self.codomain is None:
            return abs(float(a) - float(b))
        return self.codomain.d(a, b)

    def check_total(self, vertices: Iterable[int]) -> None:
        missing = set(vertices) - set(self.values)
        if missing:
            raise ValueError(f"function undefined on vertices {sorted(missing)}")


def as_function(f) -> VertexFunction:
    return f if isinstance(f, VertexFunction) else VertexFunction(dict(f))


def sup_distance(f, g) -> float:
    f, g = as_function(f), as_function(g)
    return max((f.distance(f[v], g[v]) for v in f.values), default=0.0)
