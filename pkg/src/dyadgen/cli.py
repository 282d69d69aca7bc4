"""Command-line surface: enumerate, sample, analyze, verify.

Exit codes: 0 success, 1 usage error, 2 parameter/input validation error,
3 verification failure.  Every sampling run writes a manifest holding the
exact configuration (params, seed, sizes, version) next to its outputs;
all emitted files except the manifest's wall_time entry are deterministic
functions of (config, seed).
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__, acceptance, analytics, arrows
from .events import sample_dorpa_events, sample_dorpa_sequential
from .network import (
    NetworkFormatError,
    read_network,
    sample_sequential,
    write_manifest,
    write_network,
)
from .parallel import sample_parallel
from .params import ModelParams, ParameterError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_VERIFY = 3


class _UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """One sampling run, validated before any sampling happens."""

    model: str
    params: ModelParams
    n: int
    seed: int
    workers: int
    block_size: int
    events: bool
    out: Path
    checkpoints: tuple

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        params = ModelParams(
            alpha=args.alpha, beta=args.beta,
            theta_in=args.theta_in, theta_out=args.theta_out,
        )
        if args.n < 2:
            raise ParameterError(f"n must be >= 2, got {args.n}")
        if args.events and args.model != "dorpa":
            raise ParameterError("--events applies to --model dorpa only")
        if args.model == "dorpa":
            if args.workers is not None and args.workers > 1:
                raise ParameterError("--workers applies to --model dapa only")
            workers = 1
        else:
            workers = (
                args.workers
                if args.workers is not None
                else int(os.environ.get("DYADGEN_WORKERS", "1"))
            )
        if workers < 1:
            raise ParameterError(f"workers must be >= 1, got {workers}")
        return cls(
            model=args.model, params=params, n=args.n, seed=args.seed,
            workers=workers,
            block_size=args.block_size or max(1, args.n // workers),
            events=args.events, out=Path(args.out),
            checkpoints=tuple(int(tok) for tok in args.checkpoints.split(",") if tok),
        )


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; remap to 1
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="dyadgen", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"dyadgen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    enum_p = sub.add_parser("enumerate", help="list meta-DAG classes, export poset/table")
    enum_p.add_argument("--closed", action="store_true",
                        help="print the 21 closure classes instead of the 96 subsets")
    enum_p.add_argument("--hasse", metavar="OUT.dot", help="write the poset as DOT")
    enum_p.add_argument("--table", metavar="OUT.csv", help="write the composition table as CSV")
    enum_p.add_argument("--metadag-dot", metavar="OUT.dot",
                        help="write the materialized meta-DAG for --arrows/--nodes")
    enum_p.add_argument("--arrows", default="Hub,Path",
                        help="comma-separated arrow names for --metadag-dot")
    enum_p.add_argument("--nodes", type=int, default=5,
                        help="node count for --metadag-dot")

    sample_p = sub.add_parser("sample", help="sample a growing network to a file")
    sample_p.add_argument("--model", choices=("dapa", "dorpa"), default="dapa")
    sample_p.add_argument("--n", type=int, required=True)
    sample_p.add_argument("--seed", type=int, default=0)
    sample_p.add_argument("--alpha", type=float, default=1.0)
    sample_p.add_argument("--beta", type=float, default=1.0)
    sample_p.add_argument("--theta-in", type=float, default=0.0)
    sample_p.add_argument("--theta-out", type=float, default=0.0)
    sample_p.add_argument("--workers", type=int, default=None,
                          help="block-parallel workers (dapa only; default $DYADGEN_WORKERS or 1)")
    sample_p.add_argument("--block-size", type=int, default=0,
                          help="node-block width for --workers > 1 (default n/workers)")
    sample_p.add_argument("--events", action="store_true",
                          help="dorpa only: use the event-driven sampler")
    sample_p.add_argument("--out", default="network.txt")
    sample_p.add_argument("--checkpoints", default="",
                          help="comma-separated n values; writes avg_degree.csv next to --out")

    an_p = sub.add_parser("analyze", help="degree statistics and regime report for a network file")
    an_p.add_argument("network", help="edge-list file produced by `dyadgen sample`")
    an_p.add_argument("--outdir", default=".")

    ver_p = sub.add_parser("verify", help="run the acceptance criteria")
    ver_p.add_argument("--level", choices=("fast", "full"), default="fast")
    ver_p.add_argument("--only", default="",
                       help="comma-separated criterion numbers to run")
    return parser


def _cmd_enumerate(args) -> int:
    table = arrows.derive_composition_table()
    if args.closed:
        classes = arrows.enumerate_closed_classes(table)
        for cls in classes:
            print(arrows.class_label(cls, table))
    else:
        for cls in arrows.enumerate_deletion_invariant():
            names = "/".join(str(a) for a in cls.sorted_arrows())
            print(names or "∅")
    if args.hasse:
        classes = arrows.enumerate_closed_classes(table)
        poset = arrows.build_hasse(classes)
        Path(args.hasse).write_text(arrows.hasse_dot(poset, table), encoding="utf-8")
    if args.table:
        Path(args.table).write_text(arrows.composition_table_csv(table), encoding="utf-8")
    if args.metadag_dot:
        try:
            kinds = frozenset(arrows.Arrow(name.strip()) for name in args.arrows.split(",") if name.strip())
        except ValueError as exc:
            raise ParameterError(f"unknown arrow name: {exc}")
        Path(args.metadag_dot).write_text(
            arrows.meta_dag_dot(kinds, args.nodes), encoding="utf-8"
        )
    return EXIT_OK


def _cmd_sample(args) -> int:
    config = RunConfig.from_args(args)
    params = config.params
    t0 = time.perf_counter()
    rounds = ""
    if config.model == "dorpa":
        sampler = sample_dorpa_events if config.events else sample_dorpa_sequential
        net = sampler(params, config.n, config.seed)
    elif config.workers > 1:
        net, sched = sample_parallel(params, config.n, config.seed,
                                     workers=config.workers,
                                     block_size=config.block_size)
        rounds = str(sched.rounds)
    else:
        net = sample_sequential(params, config.n, config.seed)
    wall = time.perf_counter() - t0
    out = config.out
    write_network(net, out)
    if config.checkpoints:
        curve = analytics.avg_degree_curve(
            params, list(config.checkpoints), config.seed, model=config.model
        )
        (out.parent / "avg_degree.csv").write_text(
            analytics.avg_degree_csv(curve), encoding="utf-8"
        )
    write_manifest(out.with_suffix(out.suffix + ".manifest"), {
        "version": __version__,
        "model": config.model + ("-events" if config.events else ""),
        "n": config.n,
        "seed": config.seed,
        "alpha": repr(params.alpha),
        "beta": repr(params.beta),
        "theta_in": repr(params.theta_in),
        "theta_out": repr(params.theta_out),
        "workers": config.workers,
        "block_size": config.block_size,
        "rounds": rounds,
        "edges": net.num_edges,
        "wall_time": f"{wall:.3f}",
    })
    print(f"wrote {out} ({net.num_edges} edges)")
    return EXIT_OK


def _cmd_analyze(args) -> int:
    net = read_network(args.network)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    stats = analytics.DegreeStats.from_network(net)
    (outdir / "degree_hist.csv").write_text(analytics.degree_hist_csv(stats), encoding="utf-8")
    (outdir / "ccdf.csv").write_text(analytics.ccdf_csv(stats), encoding="utf-8")
    report = analytics.build_regime_report(net)
    (outdir / "regime_report.csv").write_text(analytics.regime_report_csv(report), encoding="utf-8")
    write_manifest(outdir / "analyze.manifest", {
        "version": __version__,
        "input": Path(args.network).name,
        "model": net.model,
        "n": net.n,
        "seed": net.seed,
        "alpha": repr(net.params.alpha),
        "beta": repr(net.params.beta),
        "theta_in": repr(net.params.theta_in),
        "theta_out": repr(net.params.theta_out),
    })
    print(f"n={net.n} edges={net.num_edges} avg_degree={net.avg_degree:.6g} "
          f"regime={report.regime}")
    for row in report.rows:
        print("  " + " | ".join(str(c) for c in row))
    return EXIT_OK


def _cmd_verify(args) -> int:
    only = None
    if args.only:
        only = [int(tok) for tok in args.only.split(",") if tok]
    results = acceptance.run_criteria(level=args.level, only=only, report=print)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "enumerate":
            return _cmd_enumerate(args)
        if args.command == "sample":
            return _cmd_sample(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "verify":
            return _cmd_verify(args)
    except (ParameterError, NetworkFormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    raise AssertionError("unreachable")  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
