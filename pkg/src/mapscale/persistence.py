"""Homology over Z/p, persistence of simplicial-map towers, bottleneck distance.

Tower diagrams are computed by replacing every map with its simplicial
mapping cylinder and reducing the resulting inclusion filtration (the
telescope). :func:`rank_decomposition` is an independent route through
homology bases and induced matrices, used as a cross-check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .complex import SimplicialComplex, SimplicialMap, as_simplex

SMALL_PRIMES = (2, 3, 5, 7, 11, 13)


def _check_prime(p: int) -> None:
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")


# ------------------------------------------------------------ linear algebra


def rref_mod_p(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over Z/p and the pivot columns."""
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    pivots, r = [], 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if not len(nz):
            continue
        k = r + nz[0]
        A[[r, k]] = A[[k, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        others = np.nonzero(A[:, c])[0]
        for i in others:
            if i != r:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank_mod_p(M: np.ndarray, p: int) -> int:
    if M.size == 0:
        return 0
    return len(rref_mod_p(M, p)[1])


def nullspace_mod_p(M: np.ndarray, p: int) -> np.ndarray:
    """Columns form a basis of the kernel of M over Z/p."""
    rows, cols = M.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = rref_mod_p(M, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-R[i, fc]) % p
    return basis


def solve_mod_p(A: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """One solution x of A x = b over Z/p; raises if none exists."""
    aug = np.concatenate([np.asarray(A, dtype=np.int64), np.asarray(b, dtype=np.int64).reshape(-1, 1)], axis=1)
    R, pivots = rref_mod_p(aug, p)
    n = A.shape[1]
    if n in pivots:
        raise ValueError("system has no solution")
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, n]
    return x


# ------------------------------------------------------------- homology


def boundary_matrix(K: SimplicialComplex, k: int, p: int = 2) -> np.ndarray:
    """Matrix of the boundary map C_k -> C_{k-1}; rows and columns in sorted simplex order."""
    cols = K.simplices_of_dim(k)
    rows = K.simplices_of_dim(k - 1) if k > 0 else []
    index = {s: i for i, s in enumerate(rows)}
    D = np.zeros((len(rows), len(cols)), dtype=np.int64)
    if k == 0:
        return D
    for j, s in enumerate(cols):
        for i in range(len(s)):
            D[index[s[:i] + s[i + 1:]], j] = (-1) ** i % p
    return D


@dataclass
class HomologyBasis:
    """Cycle representatives of H_k(K; Z/p) as columns over the k-simplices."""

    complex: SimplicialComplex
    k: int
    p: int
    simplices: list
    boundaries: np.ndarray  # basis of B_k, columns
    cycles: np.ndarray  # representatives of H_k, columns

    @property
    def rank(self) -> int:
        return self.cycles.shape[1]

    def coordinates(self, chain: np.ndarray) -> np.ndarray:
        """Coordinates of a k-cycle's class in the representative basis."""
        if self.rank == 0:
            return np.zeros(0, dtype=np.int64)
        A = np.concatenate([self.boundaries, self.cycles], axis=1)
        x = solve_mod_p(A, chain, self.p)
        return x[self.boundaries.shape[1]:]


def homology_basis(K: SimplicialComplex, k: int, p: int = 2) -> HomologyBasis:
    _check_prime(p)
    simplices = K.simplices_of_dim(k)
    n = len(simplices)
    Z = nullspace_mod_p(boundary_matrix(K, k, p), p) if n else np.zeros((0, 0), dtype=np.int64)
    B_all = boundary_matrix(K, k + 1, p)
    if B_all.size:
        _, piv = rref_mod_p(B_all, p)
        B = B_all[:, piv]
    else:
        B = np.zeros((n, 0), dtype=np.int64)
    # extend a basis of B by cycles of Z; the added columns represent H_k
    reps = []
    current = B
    for j in range(Z.shape[1]):
        trial = np.concatenate([current, Z[:, j:j + 1]], axis=1)
        if rank_mod_p(trial, p) > current.shape[1]:
            current = trial
            reps.append(Z[:, j])
    cycles = np.stack(reps, axis=1) if reps else np.zeros((n, 0), dtype=np.int64)
    return HomologyBasis(K, k, p, simplices, B, cycles)


def _push_chain(phi: SimplicialMap, chain: np.ndarray, src: list, tgt_index: dict, p: int) -> np.ndarray:
    out = np.zeros(len(tgt_index), dtype=np.int64)
    for coeff, s in zip(chain, src):
        if coeff % p == 0:
            continue
        img = [phi.vertex_map[v] for v in s]
        if len(set(img)) < len(img):
            continue
        # sign of the permutation sorting the image
        inversions = sum(1 for a, b in itertools.combinations(img, 2) if a > b)
        sign = -1 if inversions % 2 else 1
        out[tgt_index[tuple(sorted(img))]] += sign * coeff
    return out % p


def induced_map(
    phi: SimplicialMap,
    k: int,
    p: int = 2,
    source_basis: HomologyBasis | None = None,
    target_basis: HomologyBasis | None = None,
) -> np.ndarray:
    """Matrix of H_k(phi) with columns indexed by the source representatives."""
    if not isinstance(phi, SimplicialMap):
        raise TypeError("expected a SimplicialMap")
    SimplicialMap(phi.source, phi.target, phi.vertex_map)  # re-validate
    src = source_basis or homology_basis(phi.source, k, p)
    tgt = target_basis or homology_basis(phi.target, k, p)
    tgt_index = {s: i for i, s in enumerate(tgt.simplices)}
    M = np.zeros((tgt.rank, src.rank), dtype=np.int64)
    for j in range(src.rank):
        M[:, j] = tgt.coordinates(_push_chain(phi, src.cycles[:, j], src.simplices, tgt_index, p))
    return M


# ------------------------------------------------------------ diagrams


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of (dimension, birth, death) points; death may be +inf."""

    points: tuple

    def __post_init__(self) -> None:
        pts = tuple(sorted((int(k), float(b), float(d)) for k, b, d in self.points))
        for k, b, d in pts:
            if not b < d:
                raise ValueError(f"point ({b}, {d}) in dimension {k} has birth >= death")
        object.__setattr__(self, "points", pts)

    def dim(self, k: int) -> list[tuple[float, float]]:
        return [(b, d) for kk, b, d in self.points if kk == k]

    def map_values(self, fn) -> "PersistenceDiagram":
        return PersistenceDiagram(
            tuple((k, fn(b), d if math.isinf(d) else fn(d)) for k, b, d in self.points)
        )

    def __len__(self) -> int:
        return len(self.points)


def log_diagram(D: PersistenceDiagram) -> PersistenceDiagram:
    return D.map_values(math.log)


def _reduce(columns: list[set], p: int, coeffs: list[dict] | None = None) -> dict[int, int]:
    """Standard column reduction; returns {death column: birth row}."""
    pairs: dict[int, int] = {}
    low_owner: dict[int, int] = {}
    if p == 2:
        bits = [sum(1 << r for r in col) for col in columns]
        for j in range(len(bits)):
            col = bits[j]
            while col:
                low = col.bit_length() - 1
                owner = low_owner.get(low)
                if owner is None:
                    low_owner[low] = j
                    pairs[j] = low
                    break
                col ^= bits[owner]
            bits[j] = col
        return pairs
    cols = [dict(c) for c in coeffs]
    for j in range(len(cols)):
        col = cols[j]
        while col:
            low = max(col)
            owner = low_owner.get(low)
            if owner is None:
                low_owner[low] = j
                pairs[j] = low
                break
            other = cols[owner]
            factor = col[low] * pow(other[low], -1, p) % p
            for r, v in other.items():
                nv = (col.get(r, 0) - factor * v) % p
                if nv:
                    col[r] = nv
                else:
                    col.pop(r, None)
        cols[j] = col
    return pairs


def filtration_pairs(simplices: Sequence[tuple], p: int = 2) -> tuple[dict, set]:
    """Persistence pairs of a filtration given in insertion order.

    Returns ({death index: birth index}, unpaired indices). Vertices may be
    any sortable labels; the order must list faces before cofaces.
    """
    _check_prime(p)
    index = {s: i for i, s in enumerate(simplices)}
    columns, coeffs = [], []
    for s in simplices:
        col, co = set(), {}
        if len(s) > 1:
            for i in range(len(s)):
                r = index[s[:i] + s[i + 1:]]
                col.add(r)
                co[r] = (-1) ** i % p
        columns.append(col)
        coeffs.append(co)
    pairs = _reduce(columns, p, coeffs)
    paired = set(pairs) | set(pairs.values())
    return pairs, set(range(len(simplices))) - paired


def filtration_diagram(entries: Sequence[tuple], dims: Iterable[int] = (0, 1), p: int = 2) -> PersistenceDiagram:
    """Diagram of an inclusion filtration given as (value, simplex) entries."""
    order = sorted(((float(v), len(s), as_simplex(s)) for v, s in entries))
    simplices = [s for _, _, s in order]
    values = [v for v, _, _ in order]
    pairs, unpaired = filtration_pairs(simplices, p)
    dims = set(dims)
    pts = []
    for death, birth in pairs.items():
        k = len(simplices[birth]) - 1
        if k in dims and values[birth] < values[death]:
            pts.append((k, values[birth], values[death]))
    for i in unpaired:
        k = len(simplices[i]) - 1
        if k in dims:
            pts.append((k, values[i], math.inf))
    return PersistenceDiagram(tuple(pts))


def cylinder_simplices(phi: SimplicialMap, max_dim: int) -> set:
    """Simplicial mapping cylinder of phi up to dimension `max_dim`.

    Source vertices are tagged 0 and target vertices 1; every ordered source
    simplex (v0 < ... < vm) contributes the faces of
    {v0..vj} + phi({vj..vm}) for each j, and the target is included whole.
    """
    out = set()
    for s in phi.target.simplices:
        if len(s) <= max_dim + 1:
            out.add(tuple((1, v) for v in s))
    for s in phi.source.simplices:
        if len(s) > max_dim + 2:
            continue
        for j in range(len(s)):
            top = [(0, v) for v in s[: j + 1]] + sorted({(1, phi.vertex_map[v]) for v in s[j:]})
            for size in range(1, min(len(top), max_dim + 1) + 1):
                out.update(itertools.combinations(top, size))
    return out


def telescope_filtration(tower, max_dim: int) -> list[tuple[int, tuple]]:
    """(stage, simplex) entries of the mapping telescope, faces first."""
    entries = {}
    for s in tower.complexes[0].simplices:
        if len(s) <= max_dim + 1:
            entries[tuple((0, v) for v in s)] = 0
    for i, phi in enumerate(tower.maps):
        for s in cylinder_simplices(phi, max_dim):
            lifted = tuple((i + tag, v) for tag, v in s)
            if lifted not in entries:
                entries[lifted] = i + 1
    return sorted(((stage, s) for s, stage in entries.items()), key=lambda e: (e[0], len(e[1]), e[1]))


def tower_diagram(tower, k: int | Iterable[int] = (0, 1), p: int = 2) -> PersistenceDiagram:
    """Bars [scale_b, scale_d) of the homology module of a complex tower."""
    dims = {k} if isinstance(k, int) else set(k)
    for m in tower.maps:
        SimplicialMap(m.source, m.target, m.vertex_map)
    entries = telescope_filtration(tower, max(dims) + 1)
    simplices = [s for _, s in entries]
    stages = [st for st, _ in entries]
    pairs, unpaired = filtration_pairs(simplices, p)
    scales = tower.scales
    pts = []
    for death, birth in pairs.items():
        dim = len(simplices[birth]) - 1
        if dim in dims and stages[birth] < stages[death]:
            pts.append((dim, scales[stages[birth]], scales[stages[death]]))
    for i in unpaired:
        dim = len(simplices[i]) - 1
        if dim in dims:
            pts.append((dim, scales[stages[i]], math.inf))
    return PersistenceDiagram(tuple(pts))


def rank_decomposition(tower, k: int | Iterable[int] = (0, 1), p: int = 2) -> PersistenceDiagram:
    """Interval decomposition from ranks of composed induced matrices.

    The number of bars alive exactly on stages b..d is
    r(b,d) - r(b-1,d) - r(b,d+1) + r(b-1,d+1), where r(i,j) is the rank of
    the composite V_i -> V_j.
    """
    dims = {k} if isinstance(k, int) else set(k)
    n = len(tower.complexes)
    pts = []
    for dim in sorted(dims):
        bases = [homology_basis(K, dim, p) for K in tower.complexes]
        mats = [induced_map(m, dim, p, bases[i], bases[i + 1]) for i, m in enumerate(tower.maps)]
        r = {}
        for i in range(n):
            M = np.eye(bases[i].rank, dtype=np.int64)
            r[(i, i)] = bases[i].rank
            for j in range(i + 1, n):
                M = mats[j - 1] @ M % p
                r[(i, j)] = rank_mod_p(M, p)

        def rk(i: int, j: int) -> int:
            return r[(i, j)] if 0 <= i <= j < n else 0

        for b in range(n):
            for d in range(b, n):
                count = rk(b, d) - rk(b - 1, d) - rk(b, d + 1) + rk(b - 1, d + 1)
                death = tower.scales[d + 1] if d + 1 < n else math.inf
                pts.extend([(dim, tower.scales[b], death)] * count)
    return PersistenceDiagram(tuple(pts))


def betti_numbers(K: SimplicialComplex, k: int, p: int = 2) -> int:
    return homology_basis(K, k, p).rank


# ------------------------------------------------------------ bottleneck


def _linf(a: tuple, b: tuple) -> float:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def _half_persistence(a: tuple) -> float:
    return (a[1] - a[0]) / 2


def _perfect_matching_within(A: list, B: list, eps: float) -> bool:
    n, m = len(A), len(B)
    size = n + m
    rows, cols = [], []
    # left: A then diagonal copies of B; right: B then diagonal copies of A
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            if _linf(a, b) <= eps:
                rows.append(i)
                cols.append(j)
        if _half_persistence(a) <= eps:
            rows.append(i)
            cols.append(m + i)
    for j, b in enumerate(B):
        if _half_persistence(b) <= eps:
            rows.append(n + j)
            cols.append(j)
        for i in range(n):
            rows.append(n + j)
            cols.append(m + i)
    graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool(np.all(match >= 0))


def bottleneck_points(A: Sequence[tuple], B: Sequence[tuple]) -> float:
    """Bottleneck distance between two finite lists of (birth, death) points."""
    inf_a = sorted(b for b, d in A if math.isinf(d))
    inf_b = sorted(b for b, d in B if math.isinf(d))
    if len(inf_a) != len(inf_b):
        return math.inf
    inf_cost = max((abs(x - y) for x, y in zip(inf_a, inf_b)), default=0.0)
    fa = [tuple(map(float, x)) for x in A if not math.isinf(x[1])]
    fb = [tuple(map(float, x)) for x in B if not math.isinf(x[1])]
    if not fa and not fb:
        return inf_cost
    candidates = {_half_persistence(x) for x in fa + fb}
    candidates.update(_linf(a, b) for a in fa for b in fb)
    cands = sorted(candidates)
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect_matching_within(fa, fb, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return max(inf_cost, cands[lo])


def bottleneck(D1: PersistenceDiagram, D2: PersistenceDiagram, k: int) -> float:
    return bottleneck_points(D1.dim(k), D2.dim(k))
