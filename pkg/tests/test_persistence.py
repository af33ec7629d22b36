import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mapscale.complex import SimplicialComplex, SimplicialMap, are_contiguous, build_complex
from mapscale.harness import demo_instability
from mapscale.mapper import ComplexTower
from mapscale.persistence import (
    PersistenceDiagram,
    betti_numbers,
    bottleneck,
    bottleneck_points,
    filtration_diagram,
    homology_basis,
    induced_map,
    nullspace_mod_p,
    rank_decomposition,
    rank_mod_p,
    rref_mod_p,
    solve_mod_p,
    tower_diagram,
)


def random_tower(rng: np.random.Generator, stages: int = 4, n: int = 6) -> ComplexTower:
    """Random complexes joined by random vertex maps; each target contains the images."""
    tops = [tuple(sorted(rng.choice(n, size=rng.integers(1, 4), replace=False))) for _ in range(rng.integers(2, 8))]
    complexes = [build_complex(tops + [(v,) for v in range(n)])]
    maps = []
    for _ in range(stages - 1):
        K = complexes[-1]
        vm = {v: int(rng.integers(0, n)) for v in K.vertices}
        image = [tuple(sorted({vm[v] for v in s})) for s in K.maximal_simplices()]
        extra = [tuple(sorted(rng.choice(n, size=rng.integers(2, 4), replace=False))) for _ in range(rng.integers(0, 3))]
        L = build_complex(image + extra + [(v,) for v in range(n)])
        complexes.append(L)
        maps.append(SimplicialMap(K, L, vm))
    return ComplexTower(tuple(float(i + 1) for i in range(stages)), tuple(complexes), tuple(maps))


# ------------------------------------------------------------ linear algebra


def test_rref_and_rank():
    M = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert rank_mod_p(M, 2) == 2
    assert rank_mod_p(M, 3) == 3
    R, piv = rref_mod_p(M, 2)
    assert piv == [0, 1]


def test_nullspace_and_solve():
    rng = np.random.default_rng(0)
    for p in (2, 3, 5):
        A = rng.integers(0, p, (4, 6))
        N = nullspace_mod_p(A, p)
        assert not np.any(A @ N % p)
        assert N.shape[1] == 6 - rank_mod_p(A, p)
        x0 = rng.integers(0, p, 6)
        b = A @ x0 % p
        x = solve_mod_p(A, b, p)
        assert np.array_equal(A @ x % p, b)


def test_non_prime_rejected():
    with pytest.raises(ValueError, match="prime"):
        homology_basis(build_complex([(0, 1)]), 0, 4)


# ------------------------------------------------------------ homology


@pytest.mark.parametrize(
    "tops, b0, b1",
    [
        ([(0, 1), (1, 2), (0, 2)], 1, 1),
        ([(0, 1, 2)], 1, 0),
        ([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], 2, 2),
        ([(0,)], 1, 0),
    ],
)
@pytest.mark.parametrize("p", [2, 3])
def test_betti_numbers(tops, b0, b1, p):
    K = build_complex(tops)
    assert betti_numbers(K, 0, p) == b0 and betti_numbers(K, 1, p) == b1


def test_hollow_tetrahedron_h2():
    K = build_complex(list(itertools.combinations(range(4), 3)))
    assert [betti_numbers(K, k) for k in range(3)] == [1, 0, 1]


def test_induced_map_identity_and_collapse():
    K = build_complex([(0, 1), (1, 2), (0, 2)])
    for p in (2, 3):
        M = induced_map(SimplicialMap.identity(K), 1, p)
        assert np.array_equal(M, np.eye(1, dtype=np.int64))
    L = build_complex([(0, 1)])
    M = induced_map(SimplicialMap(K, L, {0: 0, 1: 1, 2: 1}), 1)
    assert M.shape == (0, 1)
    M0 = induced_map(SimplicialMap(K, L, {0: 0, 1: 1, 2: 1}), 0)
    assert np.array_equal(M0, np.eye(1, dtype=np.int64))


def test_induced_map_orientation_mod_3():
    # rotating a triangle boundary keeps its class; a reflection negates it
    K = build_complex([(0, 1), (1, 2), (0, 2)])
    rot = induced_map(SimplicialMap(K, K, {0: 1, 1: 2, 2: 0}), 1, 3)
    ref = induced_map(SimplicialMap(K, K, {0: 1, 1: 0, 2: 2}), 1, 3)
    assert rot.tolist() == [[1]] and ref.tolist() == [[2]]


def test_induced_map_rejects_non_simplicial():
    K = build_complex([(0, 1)])
    L = SimplicialComplex([(0,), (1,)])
    bad = SimplicialMap(K, L, {0: 0, 1: 1}, check=False)
    with pytest.raises(ValueError):
        induced_map(bad, 0)


# ------------------------------------------------------------ filtrations and towers


def test_filtration_triangle():
    entries = [(0, (0,)), (0, (1,)), (0, (2,)), (1, (0, 1)), (1, (1, 2)), (2, (0, 2)), (3, (0, 1, 2))]
    D = filtration_diagram(entries, (0, 1))
    assert D.dim(0) == [(0.0, 1.0), (0.0, 1.0), (0.0, math.inf)]
    assert D.dim(1) == [(2.0, 3.0)]


def test_constant_tower():
    K = build_complex([(0, 1), (1, 2), (0, 2)])
    T = ComplexTower((1.0, 2.0, 3.0), (K, K, K), (SimplicialMap.identity(K),) * 2)
    D = tower_diagram(T, (0, 1))
    assert D.points == ((0, 1.0, math.inf), (1, 1.0, math.inf))
    assert rank_decomposition(T, (0, 1)) == D


def test_bar_killed_by_map():
    K = build_complex([(0, 1), (1, 2), (0, 2)])
    L = build_complex([(0, 1, 2)])
    T = ComplexTower((1.0, 2.0), (K, L), (SimplicialMap(K, L, {0: 0, 1: 1, 2: 2}),))
    assert tower_diagram(T, 1).points == ((1, 1.0, 2.0),)


def test_demo_diagrams():
    rec = demo_instability(1, 2, 16).trials[0]
    assert rec.extra["D1_f"] == [[1.0, 4.0]]
    assert rec.extra["D1_g"] == [[1.0, math.inf]]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 100_000), st.sampled_from([2, 3]))
def test_prop_telescope_matches_rank_oracle(seed, p):
    T = random_tower(np.random.default_rng(seed))
    assert tower_diagram(T, (0, 1), p) == rank_decomposition(T, (0, 1), p)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_prop_bars_alive_match_betti(seed):
    T = random_tower(np.random.default_rng(seed))
    D = tower_diagram(T, (0, 1))
    for i, (scale, K) in enumerate(zip(T.scales, T.complexes)):
        for k in (0, 1):
            alive = sum(1 for b, d in D.dim(k) if b <= scale < d)
            assert alive == betti_numbers(K, k)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_prop_contiguous_maps_same_induced_map(seed):
    rng = np.random.default_rng(seed)
    K = build_complex([(0, 1, 2), (2, 3), (3, 4), (4, 0)])
    L = build_complex([(0, 1, 2), (1, 2, 3), (3, 4), (4, 0)])
    # moving one vertex inside the star of its image gives a contiguous map
    base = {0: 0, 1: 1, 2: 2, 3: 3, 4: 4}
    v = int(rng.integers(0, 5))
    other = dict(base)
    other[v] = int(rng.integers(0, 5))
    try:
        h1, h2 = SimplicialMap(K, L, base), SimplicialMap(K, L, other)
    except ValueError:
        return
    if are_contiguous(h1, h2):
        for k in (0, 1):
            assert np.array_equal(induced_map(h1, k), induced_map(h2, k))


# ------------------------------------------------------------ bottleneck


def _brute_bottleneck(A, B):
    """Minimum over all bijections of A + diag(B) with B + diag(A)."""
    inf_a = sorted(b for b, d in A if math.isinf(d))
    inf_b = sorted(b for b, d in B if math.isinf(d))
    if len(inf_a) != len(inf_b):
        return math.inf
    base = max((abs(x - y) for x, y in zip(inf_a, inf_b)), default=0.0)
    fa = [x for x in A if not math.isinf(x[1])]
    fb = [x for x in B if not math.isinf(x[1])]
    left = [("p", a) for a in fa] + [("d", b) for b in fb]
    right = [("p", b) for b in fb] + [("d", a) for a in fa]
    best = math.inf
    for perm in itertools.permutations(range(len(right))):
        cost = 0.0
        for (lt, x), j in zip(left, perm):
            rt, y = right[j]
            if lt == "p" and rt == "p":
                c = max(abs(x[0] - y[0]), abs(x[1] - y[1]))
            elif lt == "p":
                c = (x[1] - x[0]) / 2 if y == x else math.inf
            elif rt == "p":
                c = (y[1] - y[0]) / 2 if x == y else math.inf
            else:
                c = 0.0
            cost = max(cost, c)
        best = min(best, cost)
    return max(base, best)


points = st.lists(
    st.tuples(st.integers(0, 10), st.integers(1, 10)).map(lambda t: (float(t[0]), float(t[0] + t[1]))),
    max_size=3,
)


@settings(max_examples=80, deadline=None)
@given(points, points)
def test_prop_bottleneck_brute_force(A, B):
    assert bottleneck_points(A, B) == pytest.approx(_brute_bottleneck(A, B))


@settings(max_examples=60, deadline=None)
@given(points, points, points)
def test_prop_bottleneck_metric(A, B, C):
    assert bottleneck_points(A, A) == 0
    assert bottleneck_points(A, B) == bottleneck_points(B, A)
    assert bottleneck_points(A, C) <= bottleneck_points(A, B) + bottleneck_points(B, C) + 1e-12


def test_bottleneck_small_cases():
    assert bottleneck_points([(1.0, 3.0)], []) == 1.0
    assert bottleneck_points([(1.0, math.inf)], [(1.0, 5.0)]) == math.inf
    assert bottleneck_points([(1.0, math.inf)], [(2.5, math.inf)]) == 1.5
    D1 = PersistenceDiagram(((0, 0.0, 1.0), (1, 1.0, 4.0)))
    D2 = PersistenceDiagram(((1, 1.0, math.inf),))
    assert bottleneck(D1, D2, 1) == math.inf
    assert bottleneck(D1, D2, 0) == 0.5


def test_diagram_rejects_empty_bar():
    with pytest.raises(ValueError, match="birth >= death"):
        PersistenceDiagram(((0, 1.0, 1.0),))
