"""Experiment suite: instability demo, stability certification and the skeleton benchmark.

Every bound uses the natural logarithm, matching :func:`reindex_log`.
Diagrams live on finite grids, so each trial may exceed its bound by one
grid step (log of the grid ratio on log scales) before it counts as a
violation; raw violations are reported separately.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .complex import sup_distance
from .covers import build_ball_tower, build_dyadic_tower, min_interleaving
from .io import to_jsonable
from .instances import instability_instance, random_complex, random_instance, random_pl_function, segment_for
from .mapper import check_min_diameter, multiscale_mapper, pullback, skeleton_isomorphic
from .metric import mm_vs_cech
from .persistence import PersistenceDiagram, bottleneck, log_diagram, tower_diagram

THEOREMS = (
    "cover-perturb",
    "function-perturb",
    "general",
    "combinatorial-approx",
    "mm-vs-cech",
    "skeleton-exact",
)


@dataclass
class TrialRecord:
    params: dict
    measured: dict
    bound: float
    slack: float
    raw_pass: bool
    passed: bool
    extra: dict = field(default_factory=dict)


@dataclass
class ExperimentReport:
    name: str
    trials: list
    notes: list = field(default_factory=list)

    @property
    def pass_rate(self) -> float:
        return sum(t.passed for t in self.trials) / len(self.trials) if self.trials else 0.0

    @property
    def passed(self) -> bool:
        return bool(self.trials) and all(t.passed for t in self.trials)

    @property
    def raw_violations(self) -> int:
        return sum(not t.raw_pass for t in self.trials)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "pass_rate": self.pass_rate,
            "raw_violations": self.raw_violations,
            "notes": self.notes,
            "trials": [to_jsonable(asdict(t)) for t in self.trials],
        }

    def summary(self) -> str:
        margins = [max(t.measured.values(), default=0.0) - t.bound for t in self.trials if math.isfinite(t.bound)]
        worst = max(margins, default=0.0)
        return (
            f"{self.name}: {sum(t.passed for t in self.trials)}/{len(self.trials)} trials pass, "
            f"raw violations {self.raw_violations}, worst margin {worst:+.4g}"
        )


def _diagram_points(D: PersistenceDiagram, k: int) -> list:
    return [[b, d] for b, d in D.dim(k)]


# ---------------------------------------------------------------- demo


def demo_instability(s: float = 1.0, delta: float = 2.0, M: float = 16.0) -> ExperimentReport:
    """Two delta-close functions on a loop whose combinatorial MM diagrams differ by infinity."""
    inst = instability_instance(s, delta, M)
    tower = build_dyadic_tower(M, s)
    cond = check_min_diameter(inst.K, inst.f, tower)
    D_f = tower_diagram(multiscale_mapper(tower, inst.f, inst.K, "combinatorial"), 1)
    D_g = tower_diagram(multiscale_mapper(tower, inst.g, inst.K, "combinatorial"), 1)
    sup = sup_distance(inst.f, inst.g)
    dist = bottleneck(D_f, D_g, 1)
    checks = {
        "f_diagram": D_f.dim(1) == [(s, 2 * delta)],
        "g_diagram": D_g.dim(1) == [(s, math.inf)],
        "sup_distance": sup == delta,
        "bottleneck_infinite": math.isinf(dist),
        "min_diameter": cond.ok,
    }
    ok = all(checks.values())
    rec = TrialRecord(
        params={"s": s, "delta": delta, "M": M, "vertices": len(inst.K.vertices)},
        measured={"bottleneck_d1": dist},
        bound=math.inf,
        slack=0.0,
        raw_pass=ok,
        passed=ok,
        extra={
            "D1_f": _diagram_points(D_f, 1),
            "D1_g": _diagram_points(D_g, 1),
            "sup_distance": sup,
            "checks": checks,
        },
    )
    return ExperimentReport("demo-instability", [rec])


# ---------------------------------------------------------------- trials


def _grid_slack(tower, log_scale: bool) -> float:
    sc = tower.scales
    if len(sc) < 2:
        return 0.0
    if log_scale:
        return max(math.log(b / a) for a, b in zip(sc, sc[1:]))
    return max(b - a for a, b in zip(sc, sc[1:]))


def _companion_tower(rng: np.random.Generator, tower, nu: float, extra: int = 3):
    """Ball tower on the same codomain whose centres add a few random points."""
    Z = tower.codomain
    pts = list(tower.centers) + [float(x) for x in rng.uniform(Z.lo, Z.hi, extra)]
    return build_ball_tower(sorted(set(pts)), nu, scales=tower.scales, codomain=Z)


def _diagrams(tower, f, K, mode, dims, log_scale=True):
    D = tower_diagram(multiscale_mapper(tower, f, K, mode, max_dim=max(dims) + 1), dims)
    return log_diagram(D) if log_scale else D


def _record(params, measured, bound, slack, extra=None) -> TrialRecord:
    worst = max(measured.values(), default=0.0)
    tol = 1e-9
    return TrialRecord(params, measured, bound, slack, worst <= bound + tol, worst <= bound + slack + tol, extra or {})


def _run_trial(theorem: str, seed: int, trial: int, cfg: dict) -> TrialRecord:
    rng = np.random.default_rng([seed, trial])
    dims = tuple(cfg.get("dims", (0, 1)))
    nu = float(cfg.get("nu", 0.5))
    size = dict(
        n_vertices=int(cfg.get("n_vertices", 48)),
        reach=int(cfg.get("reach", 2)),
        edge_prob=float(cfg.get("edge_prob", 0.5)),
        kind=str(cfg.get("kind", "ring")),
        triangle_prob=float(cfg.get("triangle_prob", 0.5)),
        max_simplices=int(cfg.get("max_simplices", 200)),
    )
    s = 2 * nu
    deltas = cfg.get("deltas") or [s / 2, s, 2 * s]
    delta = float(deltas[trial % len(deltas)])
    params = {"trial": trial, "seed": seed, "nu": nu, "s": s}

    if theorem == "skeleton-exact":
        inst = random_instance(rng, nu, 0.0, min_diameter=True, **size)
        assert check_min_diameter(inst.K, inst.f, inst.tower).ok
        T_full = multiscale_mapper(inst.tower, inst.f, inst.K, "exact-full", max(dims) + 1)
        T_skel = multiscale_mapper(inst.tower, inst.f, inst.K, "exact-pl", max(dims) + 1)
        iso = skeleton_isomorphic(T_full, T_skel)
        D1, D2 = tower_diagram(T_full, dims), tower_diagram(T_skel, dims)
        measured = {f"d{k}": bottleneck(D1, D2, k) for k in dims}
        rec = _record(dict(params, simplices=len(inst.K)), measured, 0.0, 0.0, {"isomorphic": iso})
        rec.raw_pass = rec.raw_pass and iso
        rec.passed = rec.passed and iso
        return rec

    if theorem in ("function-perturb", "general", "cover-perturb"):
        perturb = theorem != "cover-perturb"
        inst = random_instance(rng, nu, delta if perturb else 0.0, min_diameter=False, **size)
        U = inst.tower
        c, s = U.goodness.c, U.goodness.s
        if theorem == "function-perturb":
            V, eta = U, 0.0
        else:
            V = _companion_tower(rng, U, nu)
            eta = min_interleaving(U, V)
        g = inst.g if perturb else inst.f
        log_scale = theorem != "cover-perturb"
        DU = _diagrams(U, inst.f, inst.K, "exact-full", dims, log_scale)
        DV = _diagrams(V, g, inst.K, "exact-full", dims, log_scale)
        measured = {f"d{k}": bottleneck(DU, DV, k) for k in dims}
        if theorem == "cover-perturb":
            bound = eta
        else:
            bound = math.log(2 * c * max(s, delta) + c + eta) + max(0.0, math.log(1 / s))
        p = dict(params, c=c, delta=delta if perturb else 0.0, eta=eta, sup=sup_distance(inst.f, g))
        return _record(p, measured, bound, _grid_slack(U, log_scale))

    if theorem == "combinatorial-approx":
        inst = random_instance(rng, nu, 0.0, min_diameter=True, **size)
        U = inst.tower
        c, s = U.goodness.c, U.goodness.s
        D1 = _diagrams(U, inst.f, inst.K, "exact-pl", dims)
        D2 = _diagrams(U, inst.f, inst.K, "combinatorial", dims)
        measured = {f"d{k}": bottleneck(D1, D2, k) for k in dims}
        bound = 3 * math.log(3 * c) + 3 * max(0.0, math.log(1 / s))
        return _record(dict(params, c=c), measured, bound, _grid_slack(U, True))

    if theorem == "mm-vs-cech":
        if s < 1:
            raise ValueError("mm-vs-cech needs s = 2nu >= 1")
        inst = random_instance(rng, nu, 0.0, min_diameter=False, **size)
        measured, bound = {}, 0.0
        for k in dims:
            measured[f"d{k}"], bound = mm_vs_cech(inst.tower, inst.f, inst.K, k)
        return _record(dict(params, c=inst.tower.goodness.c), measured, bound, _grid_slack(inst.tower, True))

    raise ValueError(f"unknown theorem {theorem!r}; expected one of {THEOREMS}")


def verify_stability(
    theorem: str, trials: int = 20, seed: int = 0, workers: int = 1, **cfg
) -> ExperimentReport:
    """Run seeded random trials for one theorem and compare measured distances to its bound."""
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; expected one of {THEOREMS}")
    if trials < 1:
        raise ValueError("need at least one trial")
    if float(cfg.get("nu", 0.5)) <= 0:
        raise ValueError("nu must be positive")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_trial, theorem, seed, t, cfg) for t in range(trials)]
            records = [fut.result() for fut in futures]
    else:
        records = [_run_trial(theorem, seed, t, cfg) for t in range(trials)]
    notes = ["natural log throughout", "slack = one grid step of the certified tower"]
    return ExperimentReport(theorem, records, notes)


# ---------------------------------------------------------------- benchmark


def bench_skeleton(
    seed: int = 0,
    n_vertices: int = 14,
    edge_prob: float = 0.6,
    fill_prob: float = 0.9,
    max_dim: int = 3,
    nu: float = 0.5,
    max_simplices: int = 2000,
) -> dict:
    """Time full-complex against 1-skeleton exact pullbacks on the same instance."""
    rng = np.random.default_rng(seed)
    K = random_complex(rng, n_vertices, edge_prob, fill_prob, max_dim=max_dim, max_simplices=max_simplices)
    f = random_pl_function(rng, K, nu)
    Z, P = segment_for(list(f.values()), nu)
    tower = build_ball_tower(P, nu, codomain=Z)

    def timed(mode: str) -> float:
        t0 = time.perf_counter()
        for cover in tower.covers:
            pullback(K, f, cover, mode)
        return time.perf_counter() - t0

    t_full, t_skel = timed("exact-full"), timed("exact-pl")
    D_full = tower_diagram(multiscale_mapper(tower, f, K, "exact-full"), (0, 1))
    D_skel = tower_diagram(multiscale_mapper(tower, f, K, "exact-pl"), (0, 1))
    return {
        "seed": seed,
        "simplices": len(K),
        "skeleton_size": len(K.vertices) + len(K.simplices_of_dim(1)),
        "higher_simplices": len(K) - len(K.vertices) - len(K.simplices_of_dim(1)),
        "scales": len(tower),
        "time_full_s": t_full,
        "time_skeleton_s": t_skel,
        "speedup": t_full / t_skel if t_skel > 0 else math.inf,
        "identical_diagrams": D_full == D_skel,
        "D_full": [list(p) for p in D_full.points],
    }
