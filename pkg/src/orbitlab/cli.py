"""Config-driven experiment runner.

Subcommands:

* ``run``          execute the configured claims, write one CSV per claim,
                   a JSON summary, and optional SVG charts
* ``report``       aggregate summaries from a results directory
* ``list-claims``  print the claim registry

Exit codes: 0 all checks passed, 1 a check failed, 2 configuration error,
3 numerical-range failure.  Output is deterministic for a fixed seed: runs
reduce their results in fixed input order and format floats at full
precision, so reruns produce byte-identical CSVs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import su2, verify
from .cluster import ClusterPoint, build_seed
from .errors import (
    ConfigError,
    EmptyRegion,
    OrbitLabError,
    RangeExceeded,
)
from .iwasawa import CartanPoint
from .svgplot import line_chart
from .tropical import sample_leaf
from .verify import CLAIMS, CheckReport, SGrid

OUT_ENV = "ORBITLAB_OUT"

_ALLOWED_KEYS = {
    "group",
    "word",
    "claims",
    "xi",
    "delta",
    "eps",
    "upsilon",
    "s_grid",
    "seed",
    "samples",
    "out",
    "svg",
    "tolerances",
}

_DEFAULT_SAMPLES = {
    "cone_points": 20,
    "haar": 200,
    "monte_carlo": 1_000_000,
    "liouville": 100_000,
    "oracle": 100,
}


@dataclass
class ExperimentConfig:
    group: str = "su2"
    word: tuple[int, ...] | None = None
    claims: tuple[str, ...] = tuple(CLAIMS)
    xi: tuple[float, ...] = (1.0, -1.0)
    delta: float = 0.2
    eps: float = 0.1
    upsilon: float | None = None
    s_grid: tuple[float, ...] = SGrid().values
    seed: int = 20240
    samples: dict = field(default_factory=lambda: dict(_DEFAULT_SAMPLES))
    out: str | None = None
    svg: bool = False
    tolerances: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        unknown = set(raw) - _ALLOWED_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls()
        cfg.group = raw.get("group", cfg.group)
        if cfg.group not in ("su2", "su3"):
            raise ConfigError("group must be 'su2' or 'su3'")
        if "word" in raw and raw["word"] is not None:
            cfg.word = tuple(int(i) for i in raw["word"])
        if "claims" in raw:
            claims = tuple(raw["claims"])
            bad = [c for c in claims if c not in CLAIMS]
            if bad:
                raise ConfigError(f"unknown claims: {bad}")
            cfg.claims = claims
        if "xi" in raw:
            xi = raw["xi"]
            if isinstance(xi, (int, float)):
                xi = [float(xi), -float(xi)]
            cfg.xi = tuple(float(v) for v in xi)
        cfg.delta = float(raw.get("delta", cfg.delta))
        cfg.eps = float(raw.get("eps", cfg.eps))
        if "upsilon" in raw and raw["upsilon"] is not None:
            cfg.upsilon = float(raw["upsilon"])
        if "s_grid" in raw:
            cfg.s_grid = tuple(float(v) for v in raw["s_grid"])
        cfg.seed = int(raw.get("seed", cfg.seed))
        if "samples" in raw:
            bad = set(raw["samples"]) - set(_DEFAULT_SAMPLES)
            if bad:
                raise ConfigError(f"unknown sample keys: {sorted(bad)}")
            cfg.samples.update({k: int(v) for k, v in raw["samples"].items()})
        cfg.out = raw.get("out", cfg.out)
        cfg.svg = bool(raw.get("svg", cfg.svg))
        if "tolerances" in raw:
            if not isinstance(raw["tolerances"], dict):
                raise ConfigError("tolerances must be an object")
            cfg.tolerances = dict(raw["tolerances"])
        return cfg

    @property
    def n(self) -> int:
        return 2 if self.group == "su2" else 3

    def default_word(self) -> tuple[int, ...]:
        if self.word is not None:
            return self.word
        return (1,) if self.n == 2 else (1, 2, 1)

    def chamber(self) -> CartanPoint:
        if len(self.xi) != self.n:
            raise ConfigError(
                f"xi needs {self.n} entries for group {self.group}"
            )
        return CartanPoint(self.xi)

    def grid(self) -> SGrid:
        try:
            return SGrid(self.s_grid)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def rng(self, claim: str) -> np.random.Generator:
        idx = sorted(CLAIMS).index(claim)
        return np.random.default_rng([self.seed, idx])


# ---------------------------------------------------------------------------
# Claim runners
# ---------------------------------------------------------------------------

def _cone_points(cfg: ExperimentConfig) -> list[ClusterPoint]:
    seed = build_seed(cfg.default_word(), cfg.n)
    return sample_leaf(
        cfg.chamber(), cfg.delta, cfg.samples["cone_points"], cfg.seed, seed
    )


def _run_claim(cfg: ExperimentConfig, claim: str) -> list[CheckReport]:
    seed = build_seed(cfg.default_word(), cfg.n)
    grid = cfg.grid()
    rng = cfg.rng(claim)
    if claim == "volume-constancy":
        return [verify.check_volume_constancy()]
    if claim == "concentration":
        return [
            verify.check_concentration(
                eps=cfg.eps,
                xi=abs(cfg.xi[0]),
                mc_samples=cfg.samples["monte_carlo"],
                rng=rng,
            )
        ]
    if claim == "dh-uniform":
        return [
            verify.check_dh_uniform(
                xi=abs(cfg.xi[0]),
                samples=cfg.samples["liouville"],
                rng=rng,
            )
        ]
    if claim == "moment-envelope":
        return [
            verify.check_moment_envelope(
                cfg.chamber(),
                grid,
                samples=cfg.samples["haar"],
                rng=rng,
            )
        ]
    if claim == "oracle-consistency":
        return [
            verify.check_oracle_consistency(
                seed, rng, count=cfg.samples["oracle"]
            )
        ]
    if claim == "leaf-density":
        if cfg.n != 2:
            rep = CheckReport(claim, {"group": cfg.group})
            rep.status = "not-applicable"
            rep.notes.append("closed-form leaf transport exists at rank one only")
            return [rep]
        return [
            verify.check_leaf_density(
                xi=abs(cfg.xi[0]),
                delta=cfg.delta,
                n_points=cfg.samples["cone_points"],
                rng_seed=cfg.seed,
            )
        ]
    per_point = {
        "casimir-limit": verify.check_casimir_limit,
        "subleading-decay": verify.check_subleading_decay,
        "jacobian-structure": verify.check_jacobian_structure,
        "orbit-alignment": verify.check_orbit_alignment,
    }
    if claim in per_point:
        reports = []
        for idx, p in enumerate(_cone_points(cfg)):
            reports.append(per_point[claim](p, seed, grid, input_id=f"p{idx}"))
        return reports
    if claim == "leaf-graph":
        reports = []
        for idx, p in enumerate(_cone_points(cfg)):
            reports.append(
                verify.check_leaf_graph(
                    p,
                    seed,
                    grid,
                    delta=cfg.delta,
                    eps=cfg.eps,
                    trust_radius=cfg.upsilon,
                    input_id=f"p{idx}",
                )
            )
        return reports
    raise ConfigError(f"no runner for claim {claim}")


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def _write_outputs(cfg: ExperimentConfig, results: dict, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = {"claims": {}, "all_pass": True}
    for claim in cfg.claims:
        reports = results[claim]
        lines = ["claim,input,s,value,slope,pass"]
        for rep in reports:
            for row in rep.csv_rows():
                lines.append(
                    ",".join(
                        [row[0], row[1], _fmt(row[2]), _fmt(row[3]), _fmt(row[4]), row[5]]
                    )
                )
        (out_dir / f"claim-{claim}.csv").write_text("\n".join(lines) + "\n")
        statuses = [rep.status for rep in reports]
        notes = [n for rep in reports for n in rep.notes]
        claim_status = (
            "fail"
            if "fail" in statuses
            else ("not-applicable" if set(statuses) == {"not-applicable"} else "pass")
        )
        if claim_status == "fail":
            summary["all_pass"] = False
        summary["claims"][claim] = {
            "status": claim_status,
            "reports": len(reports),
            "notes": notes,
        }
        if cfg.svg:
            series: dict[str, list[tuple[float, float]]] = {}
            for rep in reports:
                for row in rep.rows:
                    series.setdefault(row["input"], []).append(
                        (row["s"], row["value"])
                    )
            (out_dir / f"claim-{claim}.svg").write_text(
                line_chart(series, claim)
            )
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def _cmd_run(args) -> int:
    raw = {}
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
    try:
        cfg = ExperimentConfig.from_dict(raw)
        if args.claim:
            if args.claim not in CLAIMS:
                raise ConfigError(f"unknown claim {args.claim}")
            cfg.claims = (args.claim,)
        if args.xi:
            vals = [float(v) for v in args.xi.split(",")]
            if len(vals) == 1:
                vals = [vals[0], -vals[0]]
            cfg.group = "su2" if len(vals) == 2 else "su3"
            cfg.xi = tuple(vals)
        if args.delta is not None:
            cfg.delta = args.delta
        if args.eps is not None:
            cfg.eps = args.eps
        if args.s is not None:
            cfg.s_grid = (args.s,)
        if args.s_grid:
            cfg.s_grid = tuple(float(v) for v in args.s_grid.split(","))
        if args.seed is not None:
            cfg.seed = args.seed
        if args.out:
            cfg.out = args.out
        cfg.chamber()
        if len(cfg.s_grid) > 1:
            cfg.grid()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    # single-point convenience: print the scalar and skip the series machinery
    if cfg.claims == ("concentration",) and len(cfg.s_grid) == 1:
        frac = su2.concentration_fraction(cfg.eps, cfg.s_grid[0], abs(cfg.xi[0]))
        print(f"{frac:.6f}")
        return 0

    results = {}
    try:
        for claim in cfg.claims:
            results[claim] = _run_claim(cfg, claim)
    except EmptyRegion as exc:
        print(f"config error: EmptyRegion: {exc}", file=sys.stderr)
        return 2
    except RangeExceeded as exc:
        print(f"numerical range failure: {exc}", file=sys.stderr)
        return 3
    except OrbitLabError as exc:
        print(f"check aborted: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3

    out_dir = Path(cfg.out or os.environ.get(OUT_ENV, "results"))
    _write_outputs(cfg, results, out_dir)
    failed = [
        claim
        for claim, reports in results.items()
        if any(rep.status == "fail" for rep in reports)
    ]
    for claim in cfg.claims:
        statuses = {rep.status for rep in results[claim]}
        badge = "FAIL" if "fail" in statuses else (
            "n/a" if statuses == {"not-applicable"} else "PASS"
        )
        print(f"{badge:4s} {claim}")
    print(f"results written to {out_dir}")
    return 1 if failed else 0


def _cmd_report(args) -> int:
    root = Path(args.results)
    summaries = sorted(root.glob("**/summary.json"))
    if not summaries:
        print("no results", file=sys.stderr)
        return 2
    worst = 0
    print(f"{'claim':24s} {'status':8s} source")
    for path in summaries:
        data = json.loads(path.read_text())
        for claim, info in sorted(data["claims"].items()):
            print(f"{claim:24s} {info['status']:8s} {path.parent.name}")
            if info["status"] == "fail":
                worst = 1
    return worst


def _cmd_list_claims(_args) -> int:
    width = max(len(name) for name in CLAIMS)
    for name, desc in CLAIMS.items():
        print(f"{name:{width}s}  {desc}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitlab",
        description="numerical checks for scaled orbit geometry on flag manifolds",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run configured claims")
    run.add_argument("--config", help="path to a JSON experiment config")
    run.add_argument("--claim", help="run a single claim")
    run.add_argument("--xi", help="chamber point, e.g. '1' or '2,0,-2'")
    run.add_argument("--delta", type=float, help="cone window depth")
    run.add_argument("--eps", type=float, help="volume fraction parameter")
    run.add_argument("--s", type=float, help="single scale value")
    run.add_argument("--s-grid", help="comma-separated scale grid")
    run.add_argument("--seed", type=int, help="deterministic RNG seed")
    run.add_argument("--out", help="output directory")
    run.set_defaults(func=_cmd_run)
    rep = sub.add_parser("report", help="summarize results directories")
    rep.add_argument("results", help="directory containing summary.json files")
    rep.set_defaults(func=_cmd_report)
    lst = sub.add_parser("list-claims", help="print the claim registry")
    lst.set_defaults(func=_cmd_list_claims)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
