"""Command line entry point.

Exit status: 0 on success, 2 for invalid input (including a solution that
fails verification), 3 when an internal invariant fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import estimators as est
from .balanced import ContractError
from .bounds import conflict_lower_bound, homogeneous_lower_bound, migration_lower_bounds
from .instance import (
    CHANNEL,
    MIGRATION,
    InstanceError,
    format_assignment,
    format_schedule,
    looks_like_schedule,
    parse_assignment,
    parse_instance,
    parse_schedule,
)
from .metrics import conflict_report, validate_assignment, validate_schedule
from .migration_even import explain_even
from .oracles import OracleLimits, TooLarge, min_conflicts_exact, min_rounds_exact

CHANNEL_ALGOS = ("greedy", "greedy-derand", "greedy-random", "balanced", "clustered")
MIGRATION_ALGOS = ("even", "general")
BENCH_COLUMNS = (
    "instance", "digest", "algorithm", "objective", "lower_bound", "gap",
    "oracle", "ratio", "flips", "witnesses", "fallbacks", "elapsed_s",
)


@dataclass
class RunReport:
    digest: str
    algorithm: str
    params: dict
    objective: int
    lower_bound: int
    elapsed: float
    events: dict = field(default_factory=dict)

    @property
    def gap(self) -> int:
        return self.objective - self.lower_bound

    def summary(self) -> str:
        params = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        events = ",".join(f"{k}:{v}" for k, v in sorted(self.events.items()))
        return (
            f"digest={self.digest} algo={self.algorithm} params={params or '-'} "
            f"objective={self.objective} lb={self.lower_bound} gap={self.gap} "
            f"time={self.elapsed:.3f}s events={events or '-'}"
        )


def _strict(args) -> bool:
    return bool(getattr(args, "strict", False)) or os.environ.get("CHROMAFLUX_STRICT", "") == "1"


def _read_text(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write_text(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def make_estimator(algo: str, k=None, seed: int = 0, order: str = "input", strict: bool = False):
    if algo == "greedy":
        return est.GreedyChannelAssigner(k=k, edge_order=order, seed=seed)
    if algo == "greedy-derand":
        return est.GreedyChannelAssigner(k=k, variant="derandomized", edge_order=order, seed=seed)
    if algo == "greedy-random":
        return est.GreedyChannelAssigner(k=k, variant="randomized", edge_order=order, seed=seed)
    if algo == "balanced":
        return est.BalancedChannelAssigner(k=k)
    if algo == "clustered":
        return est.ClusteredChannelAssigner(k=k)
    if algo == "even":
        return est.EvenMigrationScheduler()
    if algo == "general":
        return est.GeneralMigrationScheduler(strict=strict)
    raise InstanceError(f"unknown algorithm {algo!r}")


def run_estimator(inst, algo: str, **kw):
    model = make_estimator(algo, **kw)
    t0 = time.perf_counter()
    model.fit(inst)
    elapsed = time.perf_counter() - t0
    if model.gap_ < 0:
        raise ContractError(f"objective {model.objective_} below lower bound {model.lower_bound_}")
    params = {k: v for k, v in kw.items() if v is not None}
    report = RunReport(inst.digest(), algo, params, int(model.objective_), int(model.lower_bound_),
                       elapsed, dict(model.events_))
    return model, report


def cmd_assign(args) -> int:
    inst = parse_instance(_read_text(args.instance))
    if inst.kind != CHANNEL:
        raise InstanceError("assign needs a channel instance")
    kw = {"k": args.k}
    if args.algo.startswith("greedy"):
        kw.update(seed=args.seed, order=args.order)
    model, report = run_estimator(inst, args.algo, **kw)
    # re-verify before anything is written
    if validate_assignment(inst, model.assignment_):
        raise ContractError("solver produced an infeasible assignment")
    _write_text(args.output, format_assignment(model.assignment_))
    if args.check_balanced:
        if args.algo != "balanced":
            raise InstanceError("--check-balanced applies to --algo balanced")
        sys.stderr.write("".join(line + "\n" for line in model.audit_))
    print(report.summary(), file=sys.stderr)
    return 0


def cmd_migrate(args) -> int:
    inst = parse_instance(_read_text(args.instance))
    if inst.kind != MIGRATION:
        raise InstanceError("migrate needs a migration instance")
    kw = {"strict": _strict(args)} if args.algo == "general" else {}
    model, report = run_estimator(inst, args.algo, **kw)
    if validate_schedule(inst, model.rounds_):
        raise ContractError("solver produced an invalid schedule")
    _write_text(args.output, format_schedule(model.rounds_))
    if args.trace:
        if args.algo != "general":
            raise InstanceError("--trace applies to --algo general")
        _write_text(args.trace, "".join(line + "\n" for line in model.trace_.lines))
    if args.explain:
        if args.algo != "even":
            raise InstanceError("--explain applies to --algo even")
        sys.stderr.write("".join(line + "\n" for line in explain_even(model.plan_)))
    print(report.summary(), file=sys.stderr)
    return 0


def cmd_bounds(args) -> int:
    inst = parse_instance(_read_text(args.instance))
    out = []
    if inst.kind == MIGRATION:
        b = migration_lower_bounds(inst)
        out.append(f"lb1 {b.lb1}")
        out.append(f"lb2 {b.lb2} ratio={b.lb2_ratio} exact={'yes' if b.lb2_exact else 'no'}")
    else:
        out.append(f"conflicts {conflict_lower_bound(inst)}")
        k = inst.uniform_capacity
        if k is not None:
            basic, local = homogeneous_lower_bound(inst, k)
            out.append(f"homogeneous k={k} sum_d2_over_k={basic} balanced_local={local}")
    _write_text(args.output, "".join(line + "\n" for line in out))
    return 0


def cmd_verify(args) -> int:
    inst = parse_instance(_read_text(args.instance))
    text = _read_text(args.solution)
    if looks_like_schedule(text):
        violations = validate_schedule(inst, parse_schedule(text))
        summary = f"rounds {len(parse_schedule(text))}"
    else:
        assignment = parse_assignment(text)
        violations = validate_assignment(inst, assignment) if inst.kind == CHANNEL else [
            "an assignment needs a channel instance"]
        summary = "" if violations else f"conflicts {conflict_report(inst, assignment).total}"
    if violations:
        for v in violations:
            print(f"violation: {v}")
        return 2
    print(f"ok {summary}")
    return 0


def cmd_oracle(args) -> int:
    inst = parse_instance(_read_text(args.instance))
    limits = OracleLimits(max_edges=args.max_edges)
    if args.what == "conflicts":
        value, sol = min_conflicts_exact(inst, args.k, limits)
        body = format_assignment(sol)
    else:
        value, rounds = min_rounds_exact(inst, limits)
        body = format_schedule(rounds)
    print(f"optimum {value}")
    if args.output:
        _write_text(args.output, body)
    return 0


def _applicable(inst) -> list[str]:
    caps = set(inst.capacities)
    if inst.kind == MIGRATION:
        return ["even", "general"] if all(c % 2 == 0 for c in caps) else ["general"]
    algos = []
    if len(caps) <= 1:
        algos += ["greedy", "greedy-derand", "balanced"]
    if len(caps - {1}) <= 1:
        algos.append("clustered")
    return algos


def _bench_file(job):
    path, seed, strict, with_oracle, max_edges = job
    rows = []
    inst = parse_instance(Path(path).read_text(encoding="utf-8"))
    opt = None
    if with_oracle:
        try:
            limits = OracleLimits(max_edges=max_edges)
            opt = (min_rounds_exact(inst, limits)[0] if inst.kind == MIGRATION
                   else min_conflicts_exact(inst, None, limits)[0])
        except TooLarge:
            opt = None
    for algo in _applicable(inst):
        if inst.kind == MIGRATION:
            kw = {"strict": strict} if algo == "general" else {}
        else:
            kw = {"seed": seed} if algo.startswith("greedy") else {}
        _, rep = run_estimator(inst, algo, **kw)
        ratio = "" if not opt else f"{rep.objective / opt:.4f}"
        rows.append({
            "instance": Path(path).name, "digest": rep.digest, "algorithm": algo,
            "objective": rep.objective, "lower_bound": rep.lower_bound, "gap": rep.gap,
            "oracle": "" if opt is None else opt, "ratio": ratio,
            "flips": rep.events.get("flips", 0), "witnesses": rep.events.get("witness", 0),
            "fallbacks": rep.events.get("fallback", 0), "elapsed_s": f"{rep.elapsed:.4f}",
        })
    return rows


def cmd_bench(args) -> int:
    files = sorted(str(p) for p in Path(args.corpus).iterdir() if p.is_file() and p.suffix == ".txt")
    jobs = [(f, args.seed, _strict(args), args.oracle, args.max_edges) for f in files]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_bench_file, jobs))
    else:
        results = [_bench_file(j) for j in jobs]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rows in results:
        writer.writerows(rows)
    _write_text(args.output, buf.getvalue())
    n = sum(len(r) for r in results)
    print(f"bench files={len(files)} rows={n}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chromaflux", description="Channel assignment and migration scheduling by soft edge coloring.")
    p.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    p.add_argument("--strict", action="store_true", help="treat fallbacks as internal errors")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("assign", help="assign channels to links")
    a.add_argument("instance", nargs="?", help="instance file (default stdin)")
    a.add_argument("--algo", choices=CHANNEL_ALGOS, default="balanced")
    a.add_argument("-k", type=int, help="channels per node (default: the common C_v)")
    a.add_argument("--order", choices=("input", "random"), default="input",
                   help="greedy edge order")
    a.add_argument("--check-balanced", action="store_true",
                   help="print the per-node balance audit to stderr")
    a.add_argument("-o", "--output", help="assignment file (default stdout)")
    a.set_defaults(func=cmd_assign)

    m = sub.add_parser("migrate", help="schedule data transfers into rounds")
    m.add_argument("instance", nargs="?")
    m.add_argument("--algo", choices=MIGRATION_ALGOS, default="general")
    m.add_argument("--strict", action="store_true", default=argparse.SUPPRESS)
    m.add_argument("--trace", help="write one line per orbit step, witness and palette change")
    m.add_argument("--explain", action="store_true",
                   help="print padding, Euler trail and matchings to stderr")
    m.add_argument("-o", "--output")
    m.set_defaults(func=cmd_migrate)

    b = sub.add_parser("bounds", help="print lower bounds")
    b.add_argument("instance", nargs="?")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("verify", help="check a solution file against an instance")
    v.add_argument("solution")
    v.add_argument("instance")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="exact optimum of a tiny instance")
    o.add_argument("what", choices=("conflicts", "rounds"))
    o.add_argument("instance", nargs="?")
    o.add_argument("--max-edges", type=int, default=OracleLimits.max_edges)
    o.add_argument("-k", type=int, help="palette size for conflicts (default C_G)")
    o.add_argument("-o", "--output", help="write the optimal solution here")
    o.set_defaults(func=cmd_oracle)

    r = sub.add_parser("bench", help="run every applicable algorithm on a corpus directory")
    r.add_argument("corpus", help="directory of *.txt instance files")
    r.add_argument("--oracle", action="store_true", help="add exact optima where small enough")
    r.add_argument("--max-edges", type=int, default=OracleLimits.max_edges)
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("-o", "--output", help="CSV file (default stdout)")
    r.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, TooLarge, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
