"""Experiment runner CLI: gossip runs, speedup tables, and rate reports.

All real numbers are written with 17 significant digits so CSV output
round-trips exactly and identical configurations with identical seeds
produce byte-identical files.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Sequence

import numpy as np

from .analysis import (
    CappedRunError,
    SpeedupRow,
    averaging_time_bound,
    convergence_rate,
    expected_projection,
    speedup_curve,
)
from .engine import DEFAULT_MAX_ITERS, run
from .graphs import Graph, build_graph, incidence
from .sampling import SamplerSpec, make_rng

RUN_HEADER = "trial,k,relative_error,dual_objective,edges_selected"
SPEEDUP_HEADER = "tau,mean_iters,std_iters,baseline_ell_over_tau,theoretical_inv_gap"


class UsageError(Exception):
    """Invalid configuration; message names the offending field."""


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_c_init(text: str, n: int) -> np.ndarray:
    if text == "indices":
        return np.arange(n, dtype=np.float64)
    kind, sep, arg = text.partition(":")
    if kind == "const" and sep:
        try:
            return np.full(n, float(arg))
        except ValueError:
            raise UsageError(f"c-init: non-numeric constant {arg!r}")
    if kind == "file" and sep:
        values = []
        try:
            with open(arg, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.split("#", 1)[0].strip()
                    if line:
                        values.append(float(line))
        except OSError as exc:
            raise UsageError(f"c-init: cannot read {arg!r}: {exc}")
        except ValueError:
            raise UsageError(f"c-init: non-numeric value in {arg!r}")
        if len(values) != n:
            raise UsageError(f"c-init: {arg!r} has {len(values)} values, graph has {n} nodes")
        return np.asarray(values, dtype=np.float64)
    raise UsageError(f"c-init: expected 'indices', 'const:V', or 'file:PATH', got {text!r}")


def _parse_taus(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise UsageError(f"taus: expected comma-separated integers, got {text!r}")


def _read_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line_no, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise UsageError(f"config: line {line_no}: expected KEY=VALUE, got {line!r}")
                out[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"config: cannot read {path!r}: {exc}")
    return out


_CONFIG_KEYS = ("graph", "sampler", "engine", "c_init", "eps", "trials", "seed",
                "taus", "out", "jobs")


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    """Apply config-file values for every flag the command line left unset."""
    if not args.config:
        return args
    file_values = _read_config_file(args.config)
    unknown = set(file_values) - set(_CONFIG_KEYS)
    if unknown:
        raise UsageError(f"config: unknown key {sorted(unknown)[0]!r}")
    casts = {"eps": float, "trials": int, "seed": int, "jobs": int}
    for key, value in file_values.items():
        if getattr(args, key, None) is None:
            try:
                setattr(args, key, casts.get(key, str)(value))
            except ValueError:
                raise UsageError(f"config: {key}: cannot parse {value!r}")
    return args


def _resolve_common(args: argparse.Namespace) -> tuple[Graph, SamplerSpec, int, int, int]:
    if args.graph is None:
        raise UsageError("graph: required (e.g. --graph ring:30)")
    if args.sampler is None:
        raise UsageError("sampler: required (e.g. --sampler pairwise)")
    try:
        g = build_graph(args.graph)
    except (ValueError, OSError) as exc:
        raise UsageError(f"graph: {exc}")
    try:
        spec = SamplerSpec.parse(args.sampler)
        spec.resolve_tau(g.m)
    except ValueError as exc:
        raise UsageError(f"sampler: {exc}")
    seed = args.seed if args.seed is not None else 0
    trials = args.trials if args.trials is not None else 20
    if trials < 1:
        raise UsageError(f"trials: must be >= 1, got {trials}")
    cap = DEFAULT_MAX_ITERS
    env_cap = os.environ.get("GOSSIP_MAX_ITERS")
    if env_cap is not None:
        try:
            cap = int(env_cap)
        except ValueError:
            raise UsageError(f"GOSSIP_MAX_ITERS: not an integer: {env_cap!r}")
        if cap < 1:
            raise UsageError(f"GOSSIP_MAX_ITERS: must be >= 1, got {cap}")
    return g, spec, seed, trials, cap


def _emit(lines: list[str], out_path: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary(message: str, to_stdout: bool) -> None:
    stream = sys.stdout if to_stdout else sys.stderr
    stream.write(message + "\n")


def cmd_run(args: argparse.Namespace) -> int:
    g, spec, seed, trials, cap = _resolve_common(args)
    engine = args.engine if args.engine is not None else "primal"
    if engine not in ("primal", "dual"):
        raise UsageError(f"engine: expected 'primal' or 'dual', got {engine!r}")
    eps = args.eps if args.eps is not None else 0.01
    if eps <= 0:
        raise UsageError(f"eps: must be positive, got {eps}")
    c = _parse_c_init(args.c_init if args.c_init is not None else "indices", g.n)

    lines = [RUN_HEADER]
    iteration_counts = []
    any_capped = False
    all_trivial = True
    for trial in range(trials):
        trace = run(engine, g, spec, c, eps, cap=cap, rng=make_rng(seed, trial),
                    records=True)
        all_trivial = all_trivial and trace.trivial
        any_capped = any_capped or trace.capped
        iteration_counts.append(trace.iterations)
        for k, rec in enumerate(trace.records, start=1):
            obj = "" if rec.dual_objective is None else _fmt(rec.dual_objective)
            edges = ";".join(str(e) for e in rec.sample.edges)
            lines.append(f"{trial},{k},{_fmt(rec.post_rel_error)},{obj},{edges}")
    _emit(lines, args.out)
    counts = np.array(iteration_counts, dtype=np.float64)
    if all_trivial:
        _summary("trivial input: initial values already constant, 0 iterations",
                 to_stdout=args.out is not None)
    else:
        note = " (iteration cap hit)" if any_capped else ""
        _summary(
            f"iterations over {trials} trials: mean={_fmt(float(np.mean(counts)))} "
            f"min={int(np.min(counts))} max={int(np.max(counts))}{note}",
            to_stdout=args.out is not None,
        )
    return 1 if any_capped else 0


def _speedup_lines(rows: Sequence[SpeedupRow]) -> list[str]:
    lines = [SPEEDUP_HEADER]
    for row in rows:
        theo = "" if row.theoretical is None else _fmt(row.theoretical)
        lines.append(
            f"{row.tau},{_fmt(row.mean_iters)},{_fmt(row.std_iters)},"
            f"{_fmt(row.baseline)},{theo}"
        )
    return lines


def cmd_speedup(args: argparse.Namespace) -> int:
    g, _, seed, trials, cap = _resolve_common(args)
    eps = args.eps if args.eps is not None else 0.01
    if eps <= 0:
        raise UsageError(f"eps: must be positive, got {eps}")
    if args.taus is None:
        raise UsageError("taus: required for speedup (e.g. --taus 1,2,4,8)")
    taus = _parse_taus(args.taus) if isinstance(args.taus, str) else args.taus
    c = _parse_c_init(args.c_init if args.c_init is not None else "indices", g.n)
    jobs = args.jobs if args.jobs is not None else 1
    try:
        rows = speedup_curve(g, c, eps, taus, trials=trials, seed=seed, cap=cap,
                             n_jobs=jobs)
    except CappedRunError as exc:
        _emit(_speedup_lines(exc.rows), args.out)
        _summary(f"error: {exc}", to_stdout=False)
        return 1
    except ValueError as exc:
        raise UsageError(f"taus: {exc}")
    _emit(_speedup_lines(rows), args.out)
    ell = rows[0].mean_iters
    _summary(f"ell (mean iterations at tau=1) = {_fmt(ell)} over {trials} trials",
             to_stdout=args.out is not None)
    return 0


def cmd_rate(args: argparse.Namespace) -> int:
    g, spec, seed, _, _ = _resolve_common(args)
    jobs = args.jobs if args.jobs is not None else 1
    sys_ = incidence(g)
    proj = expected_projection(g, sys_, spec, rng=make_rng(seed, g.m), n_jobs=jobs)
    report = convergence_rate(sys_, proj)
    bound = averaging_time_bound(report.rho, 0.01)
    print(f"graph={args.graph} sampler={spec.label()} tau={report.tau}")
    print(f"rho={_fmt(report.rho)}")
    print(f"lambda_min_plus={_fmt(report.lambda_min_plus)}")
    print(f"iter_complexity={_fmt(report.iter_complexity)}")
    print(f"k_bound(eps=0.01)={bound.iterations}")
    print(f"h_method={report.method} (subsets={proj.samples})")
    if report.one_step:
        print("one_step=true (the method converges in a single iteration)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gossip",
        description="Randomized gossip experiments for average consensus",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--graph", help="ring:N | grid:RxC | path:N | complete:N | file:PATH")
        p.add_argument("--sampler", help="tau:K | pairwise | all")
        p.add_argument("--c-init", dest="c_init", help="indices | const:V | file:PATH")
        p.add_argument("--eps", type=float, help="relative-error tolerance (default 0.01)")
        p.add_argument("--trials", type=int, help="number of seeded trials (default 20)")
        p.add_argument("--seed", type=int, help="base seed (default 0)")
        p.add_argument("--jobs", type=int, help="worker processes for trials (default 1)")
        p.add_argument("--out", help="CSV output path (default stdout)")
        p.add_argument("--config", help="key=value config file; flags override it")

    p_run = sub.add_parser("run", help="run gossip trials, one CSV row per step")
    add_common(p_run)
    p_run.add_argument("--engine", help="primal | dual (default primal)")
    p_run.set_defaults(func=cmd_run)

    p_speedup = sub.add_parser("speedup", help="mean iterations per block size tau")
    add_common(p_speedup)
    p_speedup.add_argument("--taus", help="comma-separated block sizes, must include 1")
    p_speedup.set_defaults(func=cmd_speedup)

    p_rate = sub.add_parser("rate", help="exact or Monte Carlo convergence rate")
    add_common(p_rate)
    p_rate.set_defaults(func=cmd_rate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge_config(args)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
