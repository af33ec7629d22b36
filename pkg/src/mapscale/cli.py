"""Command line entry point: ``mapscale <subcommand> --config run.json [overrides]``."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

from . import harness
from .complex import one_skeleton
from .io import (
    ParseError,
    diagram_text,
    dump_json,
    filtration_text,
    format_number,
    mapper_dot,
    mapper_json,
    pseudometric_csv,
    read_complex,
    read_diagram,
    read_function,
    read_metric,
    read_tower_spec,
    tower_json,
    write_diagram,
)
from .mapper import MODES, multiscale_mapper, nerve, pullback
from .metric import cech_filtration, pullback_pseudometric
from .persistence import bottleneck, filtration_diagram, tower_diagram

SUBCOMMANDS = ("mapper", "multiscale", "diagram", "bottleneck", "cech", "demo-instability", "verify", "bench")


@dataclass
class RunConfig:
    complex: str | None = None
    function: str | None = None
    metric: str | None = None
    tower: str | None = None
    mode: str = "exact-pl"
    dims: list = field(default_factory=lambda: [0, 1])
    prime: int = 2
    output_dir: str = "out"
    seed: int = 0
    trials: int = 20
    workers: int = 1
    scale_index: int = 0
    theorem: str = "function-perturb"
    diagram_a: str | None = None
    diagram_b: str | None = None
    rips: bool = False
    s: float = 1.0
    delta: float = 2.0
    M: float = 16.0
    nu: float = 0.5

    def validate(self) -> None:
        for name in ("complex", "function", "metric", "tower", "diagram_a", "diagram_b"):
            path = getattr(self, name)
            if path is not None and not Path(path).exists():
                raise ValueError(f"{name} file {path!r} does not exist")
        if any(int(k) < 0 for k in self.dims):
            raise ValueError("homology dimensions must be >= 0")
        p = int(self.prime)
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"field size {p} is not prime")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise ValueError(f"missing required input(s): {', '.join(missing)}")


def load_config(args: argparse.Namespace) -> RunConfig:
    data = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        base = Path(args.config).parent
        for key in ("complex", "function", "metric", "tower", "diagram_a", "diagram_b"):
            if data.get(key) is not None and not Path(data[key]).is_absolute():
                data[key] = str(base / data[key])
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            data[f.name] = value
    if os.environ.get("MAPSCALE_SEED"):
        data["seed"] = int(os.environ["MAPSCALE_SEED"])
    cfg = RunConfig(**data)
    cfg.validate()
    return cfg


def _inputs(cfg: RunConfig):
    cfg.require("complex", "function", "tower")
    K = read_complex(cfg.complex)
    metric = read_metric(cfg.metric) if cfg.metric else None
    f = read_function(cfg.function, metric)
    if set(f.values) != set(K.vertices):
        extra = sorted(set(f.values) ^ set(K.vertices))
        raise ValueError(f"vertex ids differ between complex and function files: {extra[:10]}")
    values = None if metric else [float(x) for x in f.values.values()]
    tower = read_tower_spec(cfg.tower, metric, values)
    return K, f, tower


def _mode(cfg: RunConfig, f) -> str:
    if f.codomain is not None and cfg.mode != "combinatorial":
        return "combinatorial"
    return cfg.mode


def cmd_mapper(cfg: RunConfig, out: Path) -> str:
    K, f, tower = _inputs(cfg)
    cover = tower.covers[cfg.scale_index]
    pc = pullback(K, f, cover, _mode(cfg, f))
    N = nerve(pc, max(cfg.dims) + 1, f)
    (out / "mapper.dot").write_text(mapper_dot(N, pc))
    dump_json(mapper_json(N, pc), out / "mapper.json")
    return f"mapper: {len(N.vertices)} nodes, {len(N.simplices_of_dim(1))} edges"


def _tower(cfg: RunConfig):
    K, f, tower = _inputs(cfg)
    return multiscale_mapper(tower, f, K, _mode(cfg, f), max(cfg.dims) + 1), tower


def cmd_multiscale(cfg: RunConfig, out: Path) -> str:
    T, tower = _tower(cfg)
    dump_json(tower_json(T), out / "tower.json")
    return f"multiscale: {len(T)} scales, sizes {[len(K) for K in T.complexes]}"


def cmd_diagram(cfg: RunConfig, out: Path) -> str:
    T, _ = _tower(cfg)
    D = tower_diagram(T, cfg.dims, cfg.prime)
    write_diagram(D, out / "diagram.txt")
    return diagram_text(D).rstrip("\n") or "(empty diagram)"


def cmd_bottleneck(cfg: RunConfig, out: Path) -> str:
    cfg.require("diagram_a", "diagram_b")
    A, B = read_diagram(cfg.diagram_a), read_diagram(cfg.diagram_b)
    result = {k: bottleneck(A, B, k) for k in cfg.dims}
    dump_json({str(k): v for k, v in result.items()}, out / "bottleneck.json")
    return "\n".join(f"{k} {format_number(v)}" for k, v in result.items())


def cmd_cech(cfg: RunConfig, out: Path) -> str:
    K, f, tower = _inputs(cfg)
    d = pullback_pseudometric(tower, f, K, _mode(cfg, f) if cfg.metric else "combinatorial")
    C = cech_filtration(d, max(cfg.dims) + 1, rips=cfg.rips)
    (out / "pseudometric.csv").write_text(pseudometric_csv(d))
    (out / "filtration.txt").write_text(filtration_text(C.entries))
    D = filtration_diagram(C.entries, cfg.dims, cfg.prime)
    write_diagram(D, out / "cech_diagram.txt")
    return diagram_text(D).rstrip("\n") or "(empty diagram)"


def _report(report, out: Path) -> str:
    dump_json(report.to_dict(), out / "report.json")
    if not report.passed:
        raise AssertionError(report.summary())
    return report.summary()


def cmd_demo(cfg: RunConfig, out: Path) -> str:
    report = harness.demo_instability(cfg.s, cfg.delta, cfg.M)
    rec = report.trials[0]
    lines = [
        f"D1(f) = {rec.extra['D1_f']}",
        f"D1(g) = {rec.extra['D1_g']}",
        f"bottleneck = {format_number(rec.measured['bottleneck_d1'])}",
    ]
    return _report(report, out) + "\n" + "\n".join(lines)


def cmd_verify(cfg: RunConfig, out: Path) -> str:
    report = harness.verify_stability(
        cfg.theorem, cfg.trials, cfg.seed, cfg.workers, dims=tuple(cfg.dims), nu=cfg.nu
    )
    return _report(report, out)


def cmd_bench(cfg: RunConfig, out: Path) -> str:
    res = harness.bench_skeleton(seed=cfg.seed)
    dump_json(res, out / "bench.json")
    return (
        f"bench: {res['simplices']} simplices ({res['skeleton_size']} in the 1-skeleton), "
        f"speedup {res['speedup']:.2f}x, identical diagrams {res['identical_diagrams']}"
    )


COMMANDS = {
    "mapper": cmd_mapper,
    "multiscale": cmd_multiscale,
    "diagram": cmd_diagram,
    "bottleneck": cmd_bottleneck,
    "cech": cmd_cech,
    "demo-instability": cmd_demo,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mapscale", description="Mapper and multiscale mapper toolkit.")
    ap.add_argument("command", choices=SUBCOMMANDS)
    ap.add_argument("--config", help="JSON run configuration")
    ap.add_argument("--complex")
    ap.add_argument("--function")
    ap.add_argument("--metric")
    ap.add_argument("--tower")
    ap.add_argument("--mode", choices=MODES)
    ap.add_argument("--dims", type=int, nargs="+")
    ap.add_argument("--prime", type=int)
    ap.add_argument("--out", dest="output_dir")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--trials", type=int)
    ap.add_argument("--workers", type=int)
    ap.add_argument("--scale-index", dest="scale_index", type=int)
    ap.add_argument("--theorem", choices=harness.THEOREMS)
    ap.add_argument("--diagram-a", dest="diagram_a")
    ap.add_argument("--diagram-b", dest="diagram_b")
    ap.add_argument("--rips", action="store_true", default=None)
    ap.add_argument("--s", type=float)
    ap.add_argument("--delta", type=float)
    ap.add_argument("--M", type=float)
    ap.add_argument("--nu", type=float)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        print(COMMANDS[args.command](cfg, out))
    except (ParseError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"mapscale {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"mapscale {args.command}: check failed: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
