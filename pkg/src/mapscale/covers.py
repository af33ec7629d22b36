"""Covers of a codomain and towers of covers.

A codomain is either a closed real segment or a :class:`FiniteMetricSpace`.
Cover elements are intervals (real segment), or metric balls / explicit point
sets (finite metric space). Towers live on a finite, strictly increasing scale
grid; between grid points a tower is extended as a right-continuous step
function, so every interleaving constant below is measured on the grid.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .complex import FiniteMetricSpace


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    @property
    def empty(self) -> bool:
        return self.lo > self.hi or (self.lo == self.hi and (self.lo_open or self.hi_open))

    @property
    def diameter(self) -> float:
        return 0.0 if self.empty else self.hi - self.lo

    def contains_value(self, x: float) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and self.lo_open:
            return False
        if x == self.hi and self.hi_open:
            return False
        return True

    def intersect(self, other: "Interval") -> "Interval | None":
        if self.lo > other.lo:
            lo, lo_open = self.lo, self.lo_open
        elif other.lo > self.lo:
            lo, lo_open = other.lo, other.lo_open
        else:
            lo, lo_open = self.lo, self.lo_open or other.lo_open
        if self.hi < other.hi:
            hi, hi_open = self.hi, self.hi_open
        elif other.hi < self.hi:
            hi, hi_open = other.hi, other.hi_open
        else:
            hi, hi_open = self.hi, self.hi_open or other.hi_open
        out = Interval(lo, hi, lo_open, hi_open)
        return None if out.empty else out

    def issubset(self, other: "Interval") -> bool:
        if self.empty:
            return True
        lo_ok = other.lo < self.lo or (other.lo == self.lo and (self.lo_open or not other.lo_open))
        hi_ok = self.hi < other.hi or (other.hi == self.hi and (self.hi_open or not other.hi_open))
        return lo_ok and hi_ok

    def __str__(self) -> str:
        return f"{'(' if self.lo_open else '['}{self.lo:g}, {self.hi:g}{')' if self.hi_open else ']'}"


@dataclass(frozen=True)
class MetricBall:
    center: object
    radius: float


@dataclass(frozen=True)
class ExplicitSet:
    points: frozenset


Extent = Union[Interval, MetricBall, ExplicitSet]


@dataclass(frozen=True)
class CoverElement:
    id: int
    extent: Extent


@dataclass(frozen=True)
class RealSegment:
    lo: float
    hi: float

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    @property
    def diameter(self) -> float:
        return self.hi - self.lo


Codomain = Union[RealSegment, FiniteMetricSpace]


def codomain_diameter(Z: Codomain) -> float:
    return Z.diameter if isinstance(Z, RealSegment) else Z.diameter()


def same_codomain(a: Codomain, b: Codomain) -> bool:
    if isinstance(a, RealSegment) and isinstance(b, RealSegment):
        return a == b
    if isinstance(a, FiniteMetricSpace) and isinstance(b, FiniteMetricSpace):
        return a is b or (a.ids == b.ids and np.array_equal(a.matrix, b.matrix))
    return False


class Cover:
    """Finite cover of a codomain; checks that the union covers it."""

    def __init__(self, elements: Sequence[CoverElement], codomain: Codomain, check: bool = True) -> None:
        self.elements = tuple(elements)
        self.codomain = codomain
        self._by_id = {e.id: e for e in self.elements}
        if len(self._by_id) != len(self.elements):
            raise ValueError("duplicate cover element ids")
        self._members: dict[int, frozenset] = {}
        real = isinstance(codomain, RealSegment)
        for e in self.elements:
            if real != isinstance(e.extent, Interval):
                raise ValueError(f"element {e.id}: extent {type(e.extent).__name__} does not fit the codomain")
            if isinstance(e.extent, Interval) and not e.extent.lo < e.extent.hi:
                raise ValueError(f"element {e.id}: interval needs lo < hi")
            if isinstance(e.extent, MetricBall) and e.extent.radius < 0:
                raise ValueError(f"element {e.id}: negative radius")
        if check:
            gap = self.uncovered_point()
            if gap is not None:
                raise ValueError(f"cover misses codomain point {gap}")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, element_id: int) -> CoverElement:
        return self._by_id[element_id]

    @property
    def ids(self) -> list[int]:
        return [e.id for e in self.elements]

    def members(self, element_id: int) -> frozenset:
        """Codomain points of a finite metric codomain inside the element."""
        if element_id not in self._members:
            ext = self._by_id[element_id].extent
            if isinstance(ext, MetricBall):
                pts = self.codomain.ball(ext.center, ext.radius)
            elif isinstance(ext, ExplicitSet):
                pts = frozenset(ext.points) & frozenset(self.codomain.ids)
            else:
                raise TypeError("members() is defined for finite metric codomains only")
            self._members[element_id] = pts
        return self._members[element_id]

    def clipped(self, element_id: int) -> Interval | None:
        return self._by_id[element_id].extent.intersect(self.codomain.interval)

    def contains_value(self, element_id: int, value) -> bool:
        ext = self._by_id[element_id].extent
        if isinstance(ext, Interval):
            return ext.contains_value(float(value))
        return value in self.members(element_id)

    def diameter(self, element_id: int) -> float:
        if isinstance(self.codomain, RealSegment):
            clip = self.clipped(element_id)
            return 0.0 if clip is None else clip.diameter
        return self.codomain.diameter(self.members(element_id))

    def element_contains(self, element_id: int, probe) -> bool:
        """Whether the element contains `probe` (an Interval, or a set of point ids)."""
        if isinstance(self.codomain, RealSegment):
            clip = probe.intersect(self.codomain.interval)
            return clip is None or clip.issubset(self._by_id[element_id].extent)
        return frozenset(probe) <= self.members(element_id)

    def extent_subset(self, element_id: int, other: "Cover", other_id: int) -> bool:
        """Element of self ⊆ element of other, both read inside the codomain."""
        if isinstance(self.codomain, RealSegment):
            clip = self.clipped(element_id)
            return clip is None or clip.issubset(other[other_id].extent)
        return self.members(element_id) <= other.members(other_id)

    def uncovered_point(self):
        Z = self.codomain
        if isinstance(Z, FiniteMetricSpace):
            covered = set()
            for e in self.elements:
                covered |= self.members(e.id)
            for p in Z.ids:
                if p not in covered:
                    return p
            return None
        pieces = sorted(
            (c for c in (self.clipped(e.id) for e in self.elements) if c is not None),
            key=lambda iv: (iv.lo, iv.lo_open),
        )
        # sweep: `reach` is the sup covered so far, `reach_open` whether it is excluded
        reach, reach_open = Z.lo, True
        for iv in pieces:
            if iv.lo > reach or (iv.lo == reach and reach_open and iv.lo_open):
                return reach if reach_open else (reach + iv.lo) / 2
            if iv.hi > reach or (iv.hi == reach and not iv.hi_open):
                reach, reach_open = iv.hi, iv.hi_open
        if reach < Z.hi or (reach == Z.hi and reach_open):
            return reach
        return None


@dataclass(frozen=True)
class Goodness:
    c: float
    s: float


class CoverTower:
    """Covers on a strictly increasing scale grid with consecutive cover maps.

    ``maps[i]`` sends element ids of ``covers[i]`` to ids of ``covers[i + 1]``.
    Maps between any two grid scales are composites, so the tower laws hold by
    construction; containment is verified at build time.
    """

    def __init__(
        self,
        scales: Sequence[float],
        covers: Sequence[Cover],
        maps: Sequence[dict],
        goodness: Goodness | None = None,
        kind: str = "explicit",
        check: bool = True,
    ) -> None:
        scales = [float(x) for x in scales]
        if not scales:
            raise ValueError("a tower needs at least one scale")
        if any(b <= a for a, b in zip(scales, scales[1:])):
            raise ValueError("scales must be strictly increasing")
        if len(covers) != len(scales) or len(maps) != len(scales) - 1:
            raise ValueError("need one cover per scale and one map per consecutive pair")
        self.scales = tuple(scales)
        self.covers = tuple(covers)
        self.maps = tuple(dict(m) for m in maps)
        self.goodness = goodness
        self.kind = kind
        Z = covers[0].codomain
        if any(not same_codomain(Z, c.codomain) for c in covers):
            raise ValueError("all covers in a tower must share the codomain")
        if check:
            self.check_maps()

    @property
    def codomain(self) -> Codomain:
        return self.covers[0].codomain

    @property
    def res(self) -> float:
        return self.scales[0]

    def __len__(self) -> int:
        return len(self.scales)

    def check_maps(self) -> None:
        for i, m in enumerate(self.maps):
            src, dst = self.covers[i], self.covers[i + 1]
            if set(m) != set(src.ids):
                raise ValueError(f"map {i}->{i + 1} is not total on the cover at scale {self.scales[i]}")
            for a, b in m.items():
                if b not in dst._by_id:
                    raise ValueError(f"map {i}->{i + 1} sends {a} to unknown element {b}")
                if not src.extent_subset(a, dst, b):
                    raise ValueError(
                        f"containment fails: element {a} at scale {self.scales[i]} "
                        f"is not inside element {b} at scale {self.scales[i + 1]}"
                    )

    def map_between(self, i: int, j: int) -> dict:
        """Cover map from grid index i to grid index j >= i."""
        if j < i:
            raise ValueError("maps only go up the tower")
        m = {e: e for e in self.covers[i].ids}
        for t in range(i, j):
            m = {a: self.maps[t][b] for a, b in m.items()}
        return m

    def index_at(self, eps: float) -> int:
        """Grid index of the step-extended cover at `eps` (largest grid scale <= eps)."""
        i = bisect.bisect_right(self.scales, eps) - 1
        if i < 0:
            raise ValueError(f"scale {eps} is below the resolution {self.res}")
        return i

    def index_at_least(self, eps: float) -> int:
        """Smallest grid index with scale >= eps, or the top index if none."""
        i = bisect.bisect_left(self.scales, eps)
        return min(i, len(self.scales) - 1)

    def min_element_diameter(self) -> float:
        return min(c.diameter(e.id) for c in self.covers for e in c)

    def with_scales(self, scales: Sequence[float], goodness: Goodness | None = None) -> "CoverTower":
        return CoverTower(scales, self.covers, self.maps, goodness, self.kind, check=False)


# ---------------------------------------------------------------- builders


def _geometric_scales(start: float, stop: float, ratio: float = 2.0) -> list[float]:
    scales = [start]
    while scales[-1] < stop:
        scales.append(scales[-1] * ratio)
    return scales


def build_ball_tower(
    points: Sequence,
    nu: float,
    scales: Sequence[float] | None = None,
    codomain: Codomain | None = None,
    ratio: float = 2.0,
) -> CoverTower:
    """Tower of all balls B(u, eps/2), u in `points`, certified (3, 2nu)-good.

    `points` are reals (codomain: a segment, by default [min, max]) or point
    ids of a finite metric `codomain`. The default grid is geometric from 2nu
    until a single ball swallows the codomain.
    """
    if nu <= 0:
        raise ValueError("nu must be positive")
    if not len(points):
        raise ValueError("need at least one sample point")
    if isinstance(codomain, FiniteMetricSpace):
        P = list(points)
        for z in codomain.ids:
            if min(codomain.d(z, p) for p in P) > nu:
                raise ValueError(f"points are not a {nu}-sample: codomain point {z} is too far")
    else:
        P = sorted(float(p) for p in points)
        if codomain is None:
            codomain = RealSegment(P[0], P[-1])
        if P[0] < codomain.lo or P[-1] > codomain.hi:
            raise ValueError("sample points must lie in the codomain")
        if P[0] - codomain.lo > nu:
            raise ValueError(f"points are not a {nu}-sample: codomain point {codomain.lo} is too far")
        if codomain.hi - P[-1] > nu:
            raise ValueError(f"points are not a {nu}-sample: codomain point {codomain.hi} is too far")
        for a, b in zip(P, P[1:]):
            if b - a > 2 * nu:
                raise ValueError(f"points are not a {nu}-sample: codomain point {(a + b) / 2} is too far")
    s = 2 * nu
    if scales is None:
        scales = _geometric_scales(s, 2 * max(codomain_diameter(codomain), s), ratio)
    scales = sorted(float(x) for x in scales)
    if scales[0] < s:
        raise ValueError(f"ball tower scales start at 2nu = {s}")

    def element(idx: int, u, eps: float) -> CoverElement:
        if isinstance(codomain, FiniteMetricSpace):
            return CoverElement(idx, MetricBall(u, eps / 2))
        return CoverElement(idx, Interval(u - eps / 2, u + eps / 2))

    covers = [Cover([element(i, u, eps) for i, u in enumerate(P)], codomain) for eps in scales]
    maps = [{i: i for i in range(len(P))} for _ in scales[1:]]
    tower = CoverTower(scales, covers, maps, Goodness(3.0, scales[0]), kind="balls")
    tower.centers = tuple(P)
    return tower


def build_nets(
    space: FiniteMetricSpace,
    rho: float,
    levels: Iterable[int],
    points: Sequence | None = None,
) -> dict[int, tuple]:
    """Nested nets N(l) of `points`, built coarse-to-fine by farthest-point insertion.

    Each finer net is seeded with the coarser one, and a point is added only
    while its distance to the net exceeds rho**l. This yields covering radius
    <= rho**l, separation > rho**l and nesting.
    """
    if rho < 11:
        raise ValueError("nets need rho >= 11")
    P = sorted(space.ids if points is None else points)
    if not P:
        raise ValueError("empty point set")
    idx = [space.index(p) for p in P]
    D = space.matrix[np.ix_(idx, idx)]
    nets: dict[int, tuple] = {}
    chosen: list[int] = []
    for level in sorted(set(levels), reverse=True):
        radius = float(rho) ** level
        if chosen:
            dist = D[chosen].min(axis=0)
        else:
            chosen = [0]
            dist = D[0].copy()
        while True:
            far = int(np.argmax(dist))  # first maximum = smallest id
            if dist[far] <= radius:
                break
            chosen.append(far)
            dist = np.minimum(dist, D[far])
        nets[level] = tuple(sorted(P[i] for i in chosen))
    return dict(sorted(nets.items()))


def build_net_tower(
    space: FiniteMetricSpace,
    rho: float = 11.0,
    points: Sequence | None = None,
    nu: float | None = None,
    levels: Sequence[int] | None = None,
) -> CoverTower:
    """Space-efficient tower: balls of radius eps_i/2 around N(i), eps_i = 4(rho+1)^i.

    The map at step i sends the ball of u to the ball of u's nearest neighbour
    in N(i+1) (ties to the smallest id). Certified (c, s)-good with
    c = s = 4(rho+1).
    """
    P = sorted(space.ids if points is None else points)
    if nu is None:
        nu = max(min(space.d(z, p) for p in P) for z in space.ids)
    for z in space.ids:
        if min(space.d(z, p) for p in P) > nu:
            raise ValueError(f"points are not a {nu}-sample: codomain point {z} is too far")
    if nu > 1:
        raise ValueError(f"sampling parameter {nu} > 1; rescale the metric first")
    if levels is None:
        top = 1
        while len(build_nets(space, rho, [top], P)[top]) > 1:
            top += 1
        levels = list(range(1, max(top, 2) + 1))
    levels = sorted(levels)
    if levels[0] < 1:
        raise ValueError("net tower levels are positive integers")
    nets = build_nets(space, rho, levels, P)
    scales = [4 * (rho + 1) ** i for i in levels]
    covers, ids = [], []
    for i, eps in zip(levels, scales):
        ids.append({u: k for k, u in enumerate(nets[i])})
        covers.append(Cover([CoverElement(k, MetricBall(u, eps / 2)) for k, u in enumerate(nets[i])], space))
    maps = []
    for t in range(len(levels) - 1):
        coarse = nets[levels[t + 1]]
        m = {}
        for u, k in ids[t].items():
            v = min(coarse, key=lambda w: (space.d(u, w), w))
            m[k] = ids[t + 1][v]
        maps.append(m)
    c = 4 * (rho + 1)
    tower = CoverTower(scales, covers, maps, Goodness(c, c), kind="nets")
    tower.nets = nets
    return tower


def dyadic_width(eps: float) -> float:
    return 2.0 ** math.floor(math.log2(eps))


def build_dyadic_tower(
    M: float,
    s: float,
    scales: Sequence[float] | None = None,
    nu: float | None = None,
) -> CoverTower:
    """Dyadic intervals [k w, (k+1) w], w = 2^floor(log2 eps), overlapping [-M, M].

    Intervals touching the segment in a single endpoint are left out.

    With `nu`, every interval is thickened to the open (k w - nu, (k+1) w + nu).
    This tower is deliberately not (c, s)-good for any c, so it carries no
    certificate.
    """
    if M <= 0 or s <= 0:
        raise ValueError("need M > 0 and s > 0")
    Z = RealSegment(-float(M), float(M))
    if scales is None:
        scales = _geometric_scales(float(s), 2 * M)
        while dyadic_width(scales[-1]) < 2 * M:
            scales.append(scales[-1] * 2)
    scales = sorted(float(x) for x in scales)
    if scales[0] < s:
        raise ValueError("scales must start at s or above")
    ks_per_scale, covers = [], []
    for eps in scales:
        w = dyadic_width(eps)
        ks = [k for k in range(math.floor(-M / w) - 1, math.floor(M / w) + 2) if k * w < M and (k + 1) * w > -M]
        if nu:
            elems = [CoverElement(i, Interval(k * w - nu, (k + 1) * w + nu, True, True)) for i, k in enumerate(ks)]
        else:
            elems = [CoverElement(i, Interval(k * w, (k + 1) * w)) for i, k in enumerate(ks)]
        ks_per_scale.append(ks)
        covers.append(Cover(elems, Z))
    maps = []
    for t in range(len(scales) - 1):
        ratio = round(dyadic_width(scales[t + 1]) / dyadic_width(scales[t]))
        pos = {k: i for i, k in enumerate(ks_per_scale[t + 1])}
        maps.append({i: pos[k // ratio] for i, k in enumerate(ks_per_scale[t])})
    tower = CoverTower(scales, covers, maps, None, kind="dyadic")
    tower.dyadic_ks = tuple(tuple(k) for k in ks_per_scale)
    return tower


# ------------------------------------------------------------ goodness


@dataclass
class GoodnessReport:
    c: float
    s: float
    passed: bool
    conditions: dict
    failures: list = field(default_factory=list)
    vacuous: bool = False
    probes_checked: int = 0
    note: str = (
        "condition 3 is certified over a finite probe family only; "
        "an adversarial tower may pass here and still fail on an unprobed set"
    )

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "s": self.s,
            "passed": self.passed,
            "conditions": self.conditions,
            "vacuous": self.vacuous,
            "probes_checked": self.probes_checked,
            "failures": self.failures,
            "note": self.note,
        }


def probe_diameter(Z: Codomain, probe) -> float:
    if isinstance(Z, RealSegment):
        clip = probe.intersect(Z.interval)
        return 0.0 if clip is None else clip.diameter
    return Z.diameter(probe)


def default_probes(*towers: CoverTower) -> list:
    probes, seen = [], set()
    for tower in towers:
        for cover in tower.covers:
            for e in cover:
                if isinstance(cover.codomain, RealSegment):
                    p = cover.clipped(e.id)
                    if p is None:
                        continue
                else:
                    p = cover.members(e.id)
                if p not in seen:
                    seen.add(p)
                    probes.append(p)
    return probes


def containing_element(tower: CoverTower, index: int, probe) -> int | None:
    cover = tower.covers[index]
    for e in cover:
        if cover.element_contains(e.id, probe):
            return e.id
    return None


def _probe_repr(probe):
    return str(probe) if isinstance(probe, Interval) else sorted(probe)


def verify_goodness(tower: CoverTower, c: float, s: float, probes: Sequence | None = None) -> GoodnessReport:
    """Check the three (c, s)-goodness conditions over a probe family.

    Condition 3 is tested at the smallest grid scale >= c * diam(O) (the top
    scale when c * diam(O) exceeds the grid). If s exceeds diam(Z) no set can
    trigger condition 3 and the report is flagged vacuous.
    """
    if probes is None:
        probes = default_probes(tower)
    elif not len(probes):
        raise ValueError("empty probe family")
    Z = tower.codomain
    failures = []
    res_ok = math.isclose(tower.res, s, rel_tol=1e-12)
    if not res_ok:
        failures.append({"condition": 1, "resolution": tower.res, "s": s})
    vacuous = s > codomain_diameter(Z)
    diam_ok = True
    for eps, cover in zip(tower.scales, tower.covers):
        for e in cover:
            d = cover.diameter(e.id)
            if d > eps * (1 + 1e-12):
                diam_ok = False
                failures.append({"condition": 2, "scale": eps, "element": e.id, "diameter": d})
    swallow_ok = True
    for probe in probes:
        d = probe_diameter(Z, probe)
        if d < s:
            continue
        idx = tower.index_at_least(c * d)
        if containing_element(tower, idx, probe) is None:
            swallow_ok = False
            failures.append(
                {"condition": 3, "probe": _probe_repr(probe), "diameter": d, "scale": tower.scales[idx]}
            )
    conditions = {"resolution": res_ok, "diameters": diam_ok, "swallowing": swallow_ok}
    return GoodnessReport(c, s, all(conditions.values()), conditions, failures, vacuous, len(probes))


# ------------------------------------------------------- reindex / truncate


def reindex_log(tower: CoverTower) -> CoverTower:
    if any(x <= 0 for x in tower.scales):
        raise ValueError("log reindexing needs positive scales")
    out = tower.with_scales([math.log(x) for x in tower.scales])
    out.kind = tower.kind
    return out


def truncate(tower: CoverTower, eps0: float) -> CoverTower:
    if eps0 < tower.res:
        raise ValueError(f"truncation point {eps0} is below the resolution {tower.res}")
    if eps0 > tower.scales[-1]:
        raise ValueError(f"truncation point {eps0} is beyond the top scale {tower.scales[-1]}")
    start = bisect.bisect_left(tower.scales, eps0)
    out = CoverTower(
        tower.scales[start:],
        tower.covers[start:],
        tower.maps[start:],
        tower.goodness,
        tower.kind,
        check=False,
    )
    return out


# ------------------------------------------------------------ interleaving


def _first_containing_index(U: CoverTower, i: int, element_id: int, V: CoverTower) -> int | None:
    src = U.covers[i]
    for j, cover in enumerate(V.covers):
        if any(src.extent_subset(element_id, cover, e.id) for e in cover):
            return j
    return None


def _one_sided_shift(U: CoverTower, V: CoverTower) -> float:
    eta = 0.0
    for i, eps in enumerate(U.scales):
        for e in U.covers[i]:
            j = _first_containing_index(U, i, e.id, V)
            if j is None:
                return math.inf
            eta = max(eta, V.scales[j] - eps)
    return eta


def min_interleaving(U: CoverTower, V: CoverTower) -> float:
    """Smallest eta such that the step-extended towers are eta-interleaved.

    Containment is monotone along a tower, so each element only needs the
    first grid scale of the other tower holding a superset.
    """
    if not same_codomain(U.codomain, V.codomain):
        raise ValueError("towers cover different codomains")
    if not math.isclose(U.res, V.res):
        raise ValueError("towers must share the resolution; truncate first")
    return max(_one_sided_shift(U, V), _one_sided_shift(V, U))


def interleaving_maps(U: CoverTower, V: CoverTower, eta: float) -> list[dict]:
    """Cover maps U_eps -> V_{eps+eta} at each U grid scale, choosing the smallest id."""
    out = []
    for i, eps in enumerate(U.scales):
        j = V.index_at(eps + eta * (1 + 1e-12))
        src, dst = U.covers[i], V.covers[j]
        m = {}
        for e in src:
            hits = [t.id for t in dst if src.extent_subset(e.id, dst, t.id)]
            if not hits:
                raise ValueError(f"towers are not {eta}-interleaved at scale {eps}")
            m[e.id] = hits[0]
        out.append(m)
    return out


def minimum_set_cover_size(space: FiniteMetricSpace, eps: float) -> int:
    """Brute-force s*(eps): fewest subsets of diameter <= eps covering the space."""
    n = len(space)
    pts = list(space.ids)
    D = space.matrix
    admissible = []
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        if len(idx) < 2 or D[np.ix_(idx, idx)].max() <= eps:
            admissible.append(mask)
    maximal = [m for m in admissible if not any(m != o and m & o == m for o in admissible)]
    full = (1 << n) - 1
    for k in range(1, n + 1):
        for combo in itertools.combinations(maximal, k):
            acc = 0
            for m in combo:
                acc |= m
            if acc == full:
                return k
    return n if pts else 0
