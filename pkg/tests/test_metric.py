import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mapscale.complex import build_complex
from mapscale.covers import Cover, CoverElement, CoverTower, Interval, RealSegment, build_ball_tower
from mapscale.instances import random_instance
from mapscale.mapper import pullback
from mapscale.metric import (
    PullbackPseudometric,
    ball,
    cech_filtration,
    cech_value,
    mm_vs_cech,
    pullback_pseudometric,
    relaxed_triangle_check,
    rips_value,
)


def _oracle_pseudometric(tower, f, K, mode="combinatorial"):
    """Scan scales upward and stop at the first element holding both vertices."""
    verts = sorted(K.vertices)
    pcs = [pullback(K, f, cover, mode) for cover in tower.covers]
    out = {}
    for x, y in itertools.product(verts, verts):
        if x == y:
            out[(x, y)] = 0.0
            continue
        out[(x, y)] = math.inf
        for eps, pc in zip(tower.scales, pcs):
            if any(x in e.vertices and y in e.vertices for e in pc.elements):
                out[(x, y)] = eps
                break
    return out


def _path_instance():
    K = build_complex([(0, 1), (1, 2)])
    f = {0: 0.0, 1: 1.0, 2: 2.0}
    tower = build_ball_tower([0, 1, 2], 0.5, scales=[1, 2, 4])
    return K, f, tower


def test_path_example():
    K, f, tower = _path_instance()
    d = pullback_pseudometric(tower, f, K)
    # radius-1/2 balls at scale 1 hold one vertex each; the ball around 1 at scale 2 holds all three
    assert d.d(0, 1) == 2 and d.d(0, 2) == 2 and d.d(1, 1) == 0
    assert d.s == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_prop_pseudometric_matches_scan(seed):
    inst = random_instance(np.random.default_rng(seed), n_vertices=14)
    d = pullback_pseudometric(inst.tower, inst.f, inst.K)
    oracle = _oracle_pseudometric(inst.tower, inst.f, inst.K)
    for (x, y), v in oracle.items():
        assert d.d(x, y) == v
    M = d.matrix
    assert np.array_equal(M, M.T)
    off = M[~np.eye(len(M), dtype=bool)]
    assert np.all(off >= d.s)


def test_ball_small_radius_is_singleton():
    K, f, tower = _path_instance()
    d = pullback_pseudometric(tower, f, K)
    assert ball(d, 1, 0.5) == {1}
    assert ball(d, 1, 1) == {1}
    assert ball(d, 1, 2) == {0, 1, 2}
    assert ball(d, 0, 2) == {0, 1, 2}
    with pytest.raises(ValueError):
        ball(d, 0, -1)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_prop_ball_union_identity(seed):
    inst = random_instance(np.random.default_rng(seed), n_vertices=14)
    d = pullback_pseudometric(inst.tower, inst.f, inst.K)
    for x in d.vertices:
        for eps in d.scales:
            ball(d, x, eps)  # raises on mismatch


def _brute_cech(d, max_dim):
    verts = list(d.vertices)
    out = {}
    for size in range(1, max_dim + 2):
        for s in itertools.combinations(verts, size):
            val = min(max(d.d(w, x) for x in s) for w in verts)
            grid = [e for e in d.scales if e >= val - 1e-12]
            if grid:
                out[s] = grid[0]
    return out


def test_cech_matches_brute_force():
    inst = random_instance(np.random.default_rng(3), n_vertices=12)
    d = pullback_pseudometric(inst.tower, inst.f, inst.K)
    C = cech_filtration(d, max_dim=2)
    assert {s: v for v, s in C.entries} == _brute_cech(d, 2)
    for x in d.vertices:
        assert C.value((x,)) == d.s


def test_cech_monotone_and_nested():
    inst = random_instance(np.random.default_rng(4), n_vertices=12)
    d = pullback_pseudometric(inst.tower, inst.f, inst.K)
    C = cech_filtration(d, max_dim=2)
    vals = {s: v for v, s in C.entries}
    for s, v in vals.items():
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            if face:
                assert vals[face] <= v
    for i in range(len(C.scales) - 1):
        assert C.complex_at(i).simplices <= C.complex_at(i + 1).simplices


def test_rips_dominates_cech():
    inst = random_instance(np.random.default_rng(5), n_vertices=12)
    d = pullback_pseudometric(inst.tower, inst.f, inst.K)
    for s in itertools.combinations(d.vertices[:6], 3):
        assert cech_value(d, s) <= rips_value(d, s)
    R = cech_filtration(d, max_dim=2, rips=True)
    assert R.rips
    vals = {s: v for v, s in R.entries}
    for s, v in vals.items():
        if len(s) == 3:
            assert v == max(vals[e] for e in itertools.combinations(s, 2))


def test_relaxed_triangle_certified_tower():
    for seed in range(5):
        inst = random_instance(np.random.default_rng(seed), n_vertices=20)
        d = pullback_pseudometric(inst.tower, inst.f, inst.K)
        g = inst.tower.goodness
        rep = relaxed_triangle_check(d, g.c, g.s)
        assert rep.passed and rep.checked == len(d.vertices) ** 3


def test_relaxed_triangle_catches_violation():
    M = np.array([[0, 1, 10], [1, 0, 1], [10, 1, 0]], dtype=float)
    d = PullbackPseudometric((0, 1, 2), M, (1.0, 2.0, 10.0))
    rep = relaxed_triangle_check(d, 1, 0)
    assert not rep.passed
    assert {(v["x"], v["via"], v["y"]) for v in rep.violations} == {(0, 1, 2), (2, 1, 0)}
    assert relaxed_triangle_check(d, 3, 1).passed


def test_mm_vs_cech_trivial_path():
    K = build_complex([(0, 1), (1, 2)])
    f = {0: 0.0, 1: 1.0, 2: 2.0}
    tower = build_ball_tower([0, 1, 2], 0.5)
    dist, bound = mm_vs_cech(tower, f, K, 0)
    assert bound == pytest.approx(math.log(3 * 3))
    assert dist <= bound


def test_mm_vs_cech_circle():
    n = 12
    K = build_complex([(i, (i + 1) % n) for i in range(n)])
    f = {i: float(min(i, n - i)) * 0.5 for i in range(n)}
    tower = build_ball_tower([0, 1, 2, 3], 0.5, scales=[1, 2, 4, 8])
    for k in (0, 1):
        dist, bound = mm_vs_cech(tower, f, K, k)
        assert dist <= bound
    d_big, b_big = mm_vs_cech(tower, f, K, 1, c=10)
    assert b_big == pytest.approx(math.log(10 * 3)) and d_big <= b_big


def test_mm_vs_cech_needs_certificate_and_s():
    K = build_complex([(0, 1)])
    f = {0: 0.0, 1: 1.0}
    Z = RealSegment(0, 1)
    bare = CoverTower([1.0], [Cover([CoverElement(0, Interval(0, 1))], Z)], [])
    with pytest.raises(ValueError, match="certificate"):
        mm_vs_cech(bare, f, K, 0)
    small = build_ball_tower([0, 0.5, 1], 0.25)
    with pytest.raises(ValueError, match="s >= 1"):
        mm_vs_cech(small, f, K, 0)
