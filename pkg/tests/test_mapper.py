import itertools
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mapscale.complex import Graph, SimplicialMap, build_complex, connected_components, one_skeleton
from mapscale.covers import Cover, CoverElement, CoverTower, Interval, RealSegment, build_ball_tower
from mapscale.instances import random_instance
from mapscale.io import read_complex, read_function, read_tower_spec
from mapscale.mapper import (
    ComplexTower,
    check_min_diameter,
    mapper,
    multiscale_mapper,
    nerve,
    nerve_of_sets,
    pullback,
    pullback_cover_map,
    pullback_exact,
    skeleton_correspondence,
    skeleton_isomorphic,
)
from mapscale.persistence import betti_numbers

FIX = Path(__file__).parent / "fixtures"


def _cover(Z, *intervals):
    return Cover([CoverElement(i, iv) for i, iv in enumerate(intervals)], Z)


def _sampled_components(K, f, U: Interval) -> int:
    """Independent count of preimage components on the 1-skeleton.

    Each edge is cut at the parameters where f crosses the interval ends;
    between consecutive cuts membership is constant, so testing the cut points
    and the midpoints between them decides connectivity exactly.
    """
    nodes = []
    links = []
    vertex_node = {}
    for v in sorted(K.vertices):
        if U.contains_value(f[v]):
            vertex_node[v] = len(nodes)
            nodes.append(("v", v))
    for u, v in K.simplices_of_dim(1):
        fu, fv = Fraction(f[u]), Fraction(f[v])
        cuts = {Fraction(0), Fraction(1)}
        if fu != fv:
            for y in (U.lo, U.hi):
                t = (Fraction(y) - fu) / (fv - fu)
                if 0 < t < 1:
                    cuts.add(t)
        cuts = sorted(cuts)
        pts = []
        for a, b in zip(cuts, cuts[1:]):
            pts += [a, (a + b) / 2]
        pts.append(cuts[-1])
        ids = []
        for t in pts:
            inside = U.contains_value(fu + t * (fv - fu))
            if not inside:
                ids.append(None)
            elif t == 0:
                ids.append(vertex_node[u])
            elif t == 1:
                ids.append(vertex_node[v])
            else:
                ids.append(len(nodes))
                nodes.append(("e", (u, v), t))
        for a, b in zip(ids, ids[1:]):
            if a is not None and b is not None:
                links.append((a, b))
    if not nodes:
        return 0
    G = Graph.from_edges(range(len(nodes)), [(a, b) for a, b in links if a != b])
    return len(connected_components(range(len(nodes)), G))


# ------------------------------------------------------------ pullbacks


def test_partial_edge_parameters():
    K = build_complex([(0, 1)])
    Z = RealSegment(0, 1)
    cover = _cover(Z, Interval(0, 0.6), Interval(0.5, 1, True, False))
    pc = pullback_exact(K, {0: 0.0, 1: 1.0}, cover)
    upper = pc.by_parent(1)
    assert len(upper) == 1
    (pe,) = upper[0].partial_edges
    assert pe.edge == (0, 1)
    assert (pe.lo, pe.hi, pe.lo_open, pe.hi_open) == (Fraction(1, 2), Fraction(1), True, False)
    assert upper[0].vertices == {1}


def test_branch_fixture_splits_middle_interval():
    K = read_complex(FIX / "branch_complex.txt")
    f = read_function(FIX / "branch_function.txt")
    tower = read_tower_spec(FIX / "branch_tower.json", values=list(f.values.values()))
    for mode in ("exact-pl", "exact-full", "combinatorial"):
        pc = pullback(K, f, tower.covers[0], mode)
        middle = pc.by_parent(1)
        assert sorted(sorted(e.vertices) for e in middle) == [[1, 2], [4, 5]], mode


def test_disjoint_edges_two_elements():
    K = build_complex([(0, 1), (2, 3)])
    cover = _cover(RealSegment(0, 1), Interval(0, 1))
    pc = pullback_exact(K, {0: 0, 1: 1, 2: 0, 3: 1}, cover)
    assert len(pc) == 2
    N = nerve(pc, 2, {0: 0, 1: 1, 2: 0, 3: 1})
    assert len(N.vertices) == 2 and not N.simplices_of_dim(1)


def test_edge_piece_without_vertices():
    # the preimage of a narrow interval is a sub-segment of an edge
    K = build_complex([(0, 1)])
    cover = _cover(RealSegment(0, 10), Interval(0, 4.5), Interval(4, 6), Interval(5.5, 10))
    pc = pullback_exact(K, {0: 0, 1: 10}, cover)
    mid = pc.by_parent(1)
    assert len(mid) == 1 and not mid[0].vertices
    assert mid[0].key == (1, (1, (0, 1)))
    N = nerve(pc, 2, {0: 0, 1: 10})
    assert sorted(N.simplices_of_dim(1)) == [(0, 1), (1, 2)]


def test_circle_nerve_has_a_loop():
    n = 8
    K = build_complex([(i, (i + 1) % n) for i in range(n)])
    f = {i: float(min(i, n - i)) for i in range(n)}
    cover = _cover(RealSegment(0, 4), Interval(0, 1.5), Interval(1, 3), Interval(2.5, 4))
    N = mapper(cover, f, K, "exact-pl")
    assert (betti_numbers(N, 0), betti_numbers(N, 1)) == (1, 1)
    assert len(N.vertices) == 4


def test_pullback_cover_map_identity_and_composition():
    inst = random_instance(np.random.default_rng(5), n_vertices=20)
    tower = inst.tower
    pcs = [pullback(inst.K, inst.f, c, "exact-pl") for c in tower.covers]
    ident = {e: e for e in tower.covers[0].ids}
    assert pullback_cover_map(pcs[0], pcs[0], ident) == {e.id: e.id for e in pcs[0].elements}
    if len(pcs) >= 3:
        a = pullback_cover_map(pcs[0], pcs[1], tower.maps[0])
        b = pullback_cover_map(pcs[1], pcs[2], tower.maps[1])
        direct = pullback_cover_map(pcs[0], pcs[2], tower.map_between(0, 2))
        assert {k: b[v] for k, v in a.items()} == direct


def test_combinatorial_elements_sit_inside_exact_ones():
    inst = random_instance(np.random.default_rng(6), n_vertices=20)
    cover = inst.tower.covers[0]
    comb = pullback(inst.K, inst.f, cover, "combinatorial")
    exact = pullback(inst.K, inst.f, cover, "exact-pl")
    for e in comb.elements:
        targets = {exact.lookup[(e.parent, (v,))] for v in e.vertices}
        assert len(targets) == 1


def test_unknown_mode():
    with pytest.raises(ValueError, match="mode"):
        pullback(build_complex([(0,)]), {0: 0}, _cover(RealSegment(0, 1), Interval(0, 1)), "fast")


def test_exact_needs_real_function():
    from mapscale.complex import FiniteMetricSpace, VertexFunction

    X = FiniteMetricSpace.from_points([[0.0], [1.0]])
    tower = build_ball_tower([0, 1], 0.5, codomain=X)
    f = VertexFunction({0: 0, 1: 1}, X)
    with pytest.raises(ValueError, match="real"):
        pullback_exact(build_complex([(0, 1)]), f, tower.covers[0])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_prop_component_count_matches_sampling(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, n_vertices=14)
    K1 = one_skeleton(inst.K).as_complex()
    for cover in inst.tower.covers[:2]:
        pc = pullback(inst.K, inst.f, cover, "exact-pl")
        for ce in cover:
            assert len(pc.by_parent(ce.id)) == _sampled_components(K1, inst.f, ce.extent)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_prop_pullback_elements_partition_preimages(seed):
    inst = random_instance(np.random.default_rng(seed), n_vertices=14)
    cover = inst.tower.covers[0]
    for mode in ("exact-pl", "combinatorial"):
        pc = pullback(inst.K, inst.f, cover, mode)
        for ce in cover:
            pre = {v for v in inst.K.vertices if cover.contains_value(ce.id, inst.f[v])}
            got = [e.vertices for e in pc.by_parent(ce.id)]
            flat = [v for g in got for v in g]
            assert sorted(flat) == sorted(pre) and len(flat) == len(set(flat))


# ------------------------------------------------------------ nerves


def test_nerve_of_sets_caps_dimension():
    N = nerve_of_sets([{0, 1, 2, 3}], max_dim=2)
    assert N.dimension == 2 and (0, 1, 2, 3) not in N.simplices


def test_nerve_brute_force_on_combinatorial():
    inst = random_instance(np.random.default_rng(8), n_vertices=20)
    pc = pullback(inst.K, inst.f, inst.tower.covers[1], "combinatorial")
    N = nerve(pc, 2)
    expected = set()
    for size in (1, 2, 3):
        for combo in itertools.combinations(range(len(pc)), size):
            if frozenset.intersection(*(pc[i].vertices for i in combo)):
                expected.add(combo)
    assert set(N.simplices) == expected


def test_exact_nerve_needs_function():
    K = build_complex([(0, 1)])
    pc = pullback_exact(K, {0: 0, 1: 1}, _cover(RealSegment(0, 1), Interval(0, 1)))
    with pytest.raises(ValueError, match="function"):
        nerve(pc, 2)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_prop_skeleton_and_full_complex_agree(seed):
    inst = random_instance(np.random.default_rng(seed), n_vertices=12, triangle_prob=0.9)
    T_full = multiscale_mapper(inst.tower, inst.f, inst.K, "exact-full")
    T_skel = multiscale_mapper(inst.tower, inst.f, inst.K, "exact-pl")
    assert skeleton_isomorphic(T_full, T_skel)
    for a, b in zip(T_full.complexes, T_skel.complexes):
        assert len(a) == len(b)


def test_skeleton_correspondence_rejects_mismatch():
    K = build_complex([(0, 1)])
    f = {0: 0, 1: 1}
    a = pullback_exact(K, f, _cover(RealSegment(0, 1), Interval(0, 1)))
    b = pullback_exact(K, f, _cover(RealSegment(0, 1), Interval(0, 0.6), Interval(0.4, 1)))
    with pytest.raises(ValueError):
        skeleton_correspondence(a, b)


# ------------------------------------------------------------ towers


def test_multiscale_maps_are_simplicial_and_deterministic():
    inst = random_instance(np.random.default_rng(9), n_vertices=20)
    T1 = multiscale_mapper(inst.tower, inst.f, inst.K)
    T2 = multiscale_mapper(inst.tower, inst.f, inst.K)
    assert [K.simplices for K in T1.complexes] == [K.simplices for K in T2.complexes]
    assert [m.vertex_map for m in T1.maps] == [m.vertex_map for m in T2.maps]
    for m in T1.maps:
        SimplicialMap(m.source, m.target, m.vertex_map)


def test_constant_tower_identity_maps():
    K = read_complex(FIX / "branch_complex.txt")
    f = read_function(FIX / "branch_function.txt")
    cover = read_tower_spec(FIX / "branch_tower.json").covers[0]
    tower = CoverTower([1, 2, 3], [cover] * 3, [{i: i for i in cover.ids}] * 2)
    T = multiscale_mapper(tower, f, K)
    for m in T.maps:
        assert m.vertex_map == {v: v for v in m.source.vertices}


def test_complex_tower_validates_maps():
    A = build_complex([(0, 1)])
    B = build_complex([(0,)])
    m = SimplicialMap(A, B, {0: 0, 1: 0})
    with pytest.raises(ValueError):
        ComplexTower((1, 2), (A, B), ())
    with pytest.raises(ValueError):
        ComplexTower((1, 2), (B, A), (m,))


def test_min_diameter_check():
    K = build_complex([(0, 1), (1, 2)])
    tower = build_ball_tower([0, 1, 2, 3], 0.5)
    ok = check_min_diameter(K, {0: 0, 1: 0.5, 2: 1.0}, tower)
    assert ok.ok and ok.kappa == 0.5  # end balls are clipped to half width
    bad = check_min_diameter(K, {0: 0, 1: 2.5, 2: 3.0}, tower)
    assert not bad.ok and bad.worst_simplex == (0, 1) and bad.worst_diameter == 2.5


def test_uncapped_nerve():
    assert nerve_of_sets([{0, 1, 2, 3}], max_dim=None).dimension == 3
