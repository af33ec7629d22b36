"""Random and hand-built instances for the experiment harness."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .complex import SimplicialComplex, VertexFunction, build_complex, one_skeleton
from .covers import RealSegment, build_ball_tower


def random_complex(
    rng: np.random.Generator,
    n_vertices: int = 12,
    edge_prob: float = 0.3,
    triangle_prob: float = 0.5,
    max_dim: int = 2,
    max_simplices: int = 200,
) -> SimplicialComplex:
    """Erdos-Renyi graph plus random higher simplices on its cliques."""
    verts = list(range(n_vertices))
    edges = [e for e in itertools.combinations(verts, 2) if rng.random() < edge_prob]
    adj = {v: set() for v in verts}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    tops = [(v,) for v in verts] + edges
    count = n_vertices + len(edges)
    for size in range(3, max_dim + 2):
        cliques = [
            c for c in itertools.combinations(verts, size)
            if all(b in adj[a] for a, b in itertools.combinations(c, 2))
        ]
        for c in cliques:
            if count >= max_simplices:
                break
            if rng.random() < triangle_prob:
                new = sum(1 for k in range(3, size + 1) for _ in itertools.combinations(c, k))
                if count + new > max_simplices:
                    continue
                tops.append(c)
                count += new
    K = build_complex(tops)
    if len(K) > max_simplices:
        K = build_complex([s for s in K.maximal_simplices() if len(s) <= 2])
    return K


def random_ring_complex(
    rng: np.random.Generator,
    n_vertices: int = 30,
    reach: int = 3,
    edge_prob: float = 0.6,
    triangle_prob: float = 0.5,
    max_simplices: int = 200,
) -> SimplicialComplex:
    """Cycle backbone with random short chords and triangles between nearby vertices.

    The backbone keeps the complex connected with a long graph diameter, so
    height functions sweep a wide range and the nerves carry loops.
    """
    n = n_vertices
    edges = {as_pair(i, (i + 1) % n) for i in range(n)}
    for i in range(n):
        for step in range(2, reach + 1):
            if rng.random() < edge_prob:
                edges.add(as_pair(i, (i + step) % n))
    tops = sorted(edges)
    count = n + len(edges)
    for i in range(n):
        window = sorted({(i + j) % n for j in range(reach + 1)})
        for tri in itertools.combinations(window, 3):
            if count >= max_simplices:
                break
            if all(as_pair(a, b) in edges for a, b in itertools.combinations(tri, 2)) and rng.random() < triangle_prob:
                if tri not in tops:
                    tops.append(tri)
                    count += 1
    return build_complex(tops)


def as_pair(a: int, b: int) -> tuple:
    return (a, b) if a < b else (b, a)


def bfs_levels(K: SimplicialComplex) -> dict[int, int]:
    """Graph distance to the smallest vertex of each connected component."""
    adj = one_skeleton(K).adjacency()
    level: dict[int, int] = {}
    for root in sorted(K.vertices):
        if root in level:
            continue
        level[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in sorted(adj[u]):
                if w not in level:
                    level[w] = level[u] + 1
                    queue.append(w)
    return level


def random_pl_function(rng: np.random.Generator, K: SimplicialComplex, kappa: float, offset: float = 0.0) -> dict:
    """Random values whose edge differences stay strictly below `kappa`.

    Mixing a BFS level (changes by at most one along an edge) with a uniform
    term keeps every edge difference under 0.999 * kappa.
    """
    level = bfs_levels(K)
    noise = rng.random(len(level))
    return {v: offset + kappa * 0.999 * (0.8 * level[v] + 0.2 * noise[i]) for i, v in enumerate(sorted(level))}


def perturb(rng: np.random.Generator, f: dict, delta: float) -> dict:
    """g with sup |f - g| equal to delta: random offsets scaled so the largest is exactly delta."""
    keys = sorted(f)
    if delta == 0:
        return dict(f)
    offsets = rng.uniform(-1.0, 1.0, len(keys))
    top = int(np.argmax(np.abs(offsets)))
    offsets = offsets / abs(offsets[top]) * delta
    offsets[top] = math.copysign(delta, offsets[top])
    return {v: f[v] + float(o) for v, o in zip(keys, offsets)}


def segment_for(values, nu: float, pad: float = 0.0) -> tuple[RealSegment, list[float]]:
    """Segment holding all values and a grid P of spacing 2nu that nu-samples it."""
    lo = math.floor(min(values) - pad)
    hi = max(values) + pad
    m = max(1, math.ceil((hi - lo) / (2 * nu)))
    P = [lo + 2 * nu * j for j in range(m + 1)]
    return RealSegment(lo, P[-1]), P


@dataclass
class Instance:
    K: SimplicialComplex
    f: dict
    g: dict
    delta: float
    tower: object
    nu: float


def random_instance(
    rng: np.random.Generator,
    nu: float = 0.5,
    delta: float = 0.0,
    n_vertices: int = 12,
    edge_prob: float = 0.3,
    triangle_prob: float = 0.5,
    max_simplices: int = 200,
    min_diameter: bool = True,
    kind: str = "ring",
    reach: int = 2,
) -> Instance:
    """Random 2-complex (ring or Erdos-Renyi family), PL function, delta-perturbation and a certified ball tower.

    With `min_diameter`, edge differences of f stay below nu, which is the
    smallest element diameter of the ball tower built here.
    """
    if kind == "ring":
        K = random_ring_complex(rng, n_vertices, reach, edge_prob, triangle_prob, max_simplices)
    elif kind == "er":
        K = random_complex(rng, n_vertices, edge_prob, triangle_prob, max_simplices=max_simplices)
    else:
        raise ValueError(f"unknown complex family {kind!r}")
    spread = nu if min_diameter else 2 * nu
    f = random_pl_function(rng, K, spread)
    g = perturb(rng, f, delta)
    Z, P = segment_for(list(f.values()) + list(g.values()), nu)
    tower = build_ball_tower(P, nu, codomain=Z)
    return Instance(K, f, g, delta, tower, nu)


@dataclass
class InstabilityInstance:
    K: SimplicialComplex
    f: dict
    g: dict
    s: float
    delta: float
    M: float


def _is_power_of_two(x: float) -> bool:
    m, _ = math.frexp(x)
    return x > 0 and m == 0.5


def instability_instance(s: float, delta: float, M: float) -> InstabilityInstance:
    """Loop graph with two peaks; f climbs to 2*delta twice, g = f - delta.

    Both s and delta must be powers of two so that 2*delta is a dyadic
    scale and every step of size s lands on the dyadic lattice.
    """
    if not 0 < s < delta < M / 2:
        raise ValueError("need 0 < s < delta < M/2")
    if not (_is_power_of_two(s) and _is_power_of_two(delta)):
        raise ValueError("s and delta must be powers of two")
    steps = int(round(2 * delta / s))
    up = [s * i for i in range(steps + 1)]
    lap = up + up[-2:0:-1]
    values = lap + lap
    n = len(values)
    K = build_complex([(i, (i + 1) % n) for i in range(n)])
    f = {i: float(v) for i, v in enumerate(values)}
    g = {i: v - delta for i, v in f.items()}
    return InstabilityInstance(K, f, g, s, delta, M)


def as_vertex_function(f: dict) -> VertexFunction:
    return VertexFunction(dict(f))
