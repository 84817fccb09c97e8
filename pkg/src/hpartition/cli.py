"""Command-line interface: solve instances, generate corpora, emit logic
programs, benchmark solver strategies, run proportion experiments.

Exit codes: solve returns 0 for yes, 1 for no, 2 on any error; generate
returns 1 when no instance with the requested parameters exists; bench
returns 3 when two enabled solvers disagree on any instance (a
correctness bug trumps every benchmark).
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import shlex
import subprocess
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import analysis, asp, generate
from .graphs import (
    Graph,
    ModelGraph,
    ParseError,
    Strategy,
    parse_graph,
    parse_model,
    serialize_graph,
    verify_partition,
)
from .oracle import oracle_solve
from .solver import certificate, solve

CSV_COLUMNS = ["model", "instance", "n", "m", "solver", "decision", "micros", "seed"]
DEFAULT_SEED = 0


def _default_seed() -> int:
    env = os.environ.get("HPART_SEED")
    return int(env) if env else DEFAULT_SEED


def _load_model(path: str) -> ModelGraph:
    return parse_model(Path(path).read_text(), name=Path(path).stem)


def _load_graph(path: str) -> Graph:
    return parse_graph(Path(path).read_text())


def _strategy_arg(value: str) -> Strategy:
    return Strategy(value)


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def cmd_solve(args: argparse.Namespace) -> int:
    h = _load_model(args.model)
    g = _load_graph(args.graph)
    strategy = args.strategy if args.strategy else analysis.classify(h)
    decision = solve(h, g, strategy=strategy)
    print(f"{'yes' if decision.yes else 'no'} (strategy {decision.strategy.value})")
    if args.witness and decision.yes:
        witness = certificate(h, g, strategy=strategy)
        if witness is None or not verify_partition(h, g, witness):
            print("error: witness extraction failed validation", file=sys.stderr)
            return 2
        for label in "abcd":
            ids = " ".join(str(v) for v in sorted(witness.classes[label]))
            print(f"{label}: {ids}")
    return 0 if decision.yes else 1


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------

def cmd_generate(args: argparse.Namespace) -> int:
    h = _load_model(args.model)
    seed = args.seed
    comments = [f"model {h.name}", f"kind {args.kind}", f"seed {seed}"]
    if args.kind == "yes":
        if args.m is None:
            print("error: --m is required for kind 'yes'", file=sys.stderr)
            return 2
        try:
            g, partition = generate.gen_yes(h, args.n, args.m, seed)
        except generate.NoSuchInstanceError as exc:
            print(str(exc), file=sys.stderr)
            return 1
        comments.append(f"n {args.n} m {args.m}")
        for label in "abcd":
            ids = " ".join(str(v) for v in sorted(partition.classes[label]))
            comments.append(f"label {label}: {ids}")
    elif args.kind == "no-trivial":
        g = generate.gen_no_trivial(h, args.n)
        comments.append(f"n {args.n}")
    else:  # no-random
        try:
            g = generate.gen_no_random(
                h, args.n, seed,
                max_tries=args.max_tries,
                require_base=args.require_base,
            )
        except generate.GivenUpError as exc:
            print(str(exc), file=sys.stderr)
            return 1
        comments.append(f"n {args.n} max-tries {args.max_tries}")
    Path(args.out).write_text(serialize_graph(g, comments=comments))
    print(f"wrote {args.out} (n={g.n}, m={g.m})")
    return 0


# ---------------------------------------------------------------------------
# emit
# ---------------------------------------------------------------------------

def cmd_emit(args: argparse.Namespace) -> int:
    h = _load_model(args.model)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.dialect == "guess-check":
        program = asp.emit_guess_check()
    else:
        strategy = args.strategy if args.strategy else analysis.classify(h)
        program = asp.emit_datalog(h, strategy)
    program_path = out_dir / f"{h.name}.lp"
    program_path.write_text(program.program)
    written = [str(program_path)]
    if args.graph:
        g = _load_graph(args.graph)
        facts_path = out_dir / f"{h.name}-facts.lp"
        facts_path.write_text(asp.emit_instance_facts(h, g))
        written.append(str(facts_path))
    print("wrote " + " ".join(written))
    return 0


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def _graph_seed_comment(text: str) -> str:
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("#") and "seed" in line:
            parts = line.split()
            for i, tok in enumerate(parts):
                if tok == "seed" and i + 1 < len(parts):
                    return parts[i + 1]
    return ""


def _decide(task: tuple[str, ModelGraph, str, Graph, str]) -> tuple[str, str, str]:
    model_name, h, instance, g, solver = task
    if solver == "poly":
        yes = solve(h, g).yes
    else:
        yes = oracle_solve(h, g, vertex_cap=max(g.n, 20)) is not None
    return model_name, instance, "yes" if yes else "no"


def _external_decide(h: ModelGraph, g: Graph, command: str) -> str:
    """Run the configured external ASP command on the emitted Datalog
    program plus facts; yes iff stdout mentions yes_instance. Zero-arity
    atoms lose their empty parentheses so strict ASP-Core-2 grounders
    accept the files."""
    strategy = analysis.classify(h)
    if strategy is Strategy.ORACLE_ONLY:
        strategy = Strategy.GENERIC
    program = asp.emit_datalog(h, strategy).program.replace("()", "")
    facts = asp.emit_instance_facts(h, g)
    with tempfile.TemporaryDirectory() as tmp:
        ppath = Path(tmp) / "program.lp"
        fpath = Path(tmp) / "facts.lp"
        ppath.write_text(program)
        fpath.write_text(facts)
        cmd = [
            part.format(program=ppath, facts=fpath)
            for part in shlex.split(command)
        ]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        return "yes" if "yes_instance" in proc.stdout else "no"


def cmd_bench(args: argparse.Namespace) -> int:
    solvers = [s.strip() for s in args.solvers.split(",") if s.strip()]
    for s in solvers:
        if s not in ("poly", "oracle", "external"):
            print(f"error: unknown solver {s!r}", file=sys.stderr)
            return 2
    if "external" in solvers and not args.external_cmd:
        print("error: solver 'external' needs --external-cmd", file=sys.stderr)
        return 2
    models = [_load_model(path) for path in args.model]
    corpus = sorted(Path(args.corpus).glob("*.graph"))
    if not corpus:
        print(f"error: no *.graph files in {args.corpus}", file=sys.stderr)
        return 2
    instances = []
    for path in corpus:
        text = path.read_text()
        instances.append((path.stem, parse_graph(text), _graph_seed_comment(text)))

    # correctness pass: every enabled solver must agree per (model, instance)
    tasks = [
        (h.name, h, name, g, solver)
        for h in models
        for name, g, _ in instances
        for solver in solvers
        if solver != "external"
    ]
    if args.parallel:
        with ProcessPoolExecutor() as pool:
            decided = list(pool.map(_decide, tasks))
    else:
        decided = [_decide(t) for t in tasks]
    decisions: dict[tuple[str, str], dict[str, str]] = {}
    for (model_name, _h, name, _g, solver), (_, _, decision) in zip(tasks, decided):
        decisions.setdefault((model_name, name), {})[solver] = decision
    if "external" in solvers:
        for h in models:
            for name, g, _ in instances:
                decisions.setdefault((h.name, name), {})["external"] = \
                    _external_decide(h, g, args.external_cmd)
    disagreements = [
        (key, by_solver)
        for key, by_solver in sorted(decisions.items())
        if len(set(by_solver.values())) > 1
    ]
    if disagreements:
        print("solver disagreement detected:", file=sys.stderr)
        for (model_name, name), by_solver in disagreements:
            detail = ", ".join(f"{s}={d}" for s, d in sorted(by_solver.items()))
            print(f"  {model_name} / {name}: {detail}", file=sys.stderr)
        return 3

    # timing pass, always sequential; one warm-up repetition discarded
    rows = []
    for h in models:
        for name, g, inst_seed in instances:
            for solver in solvers:
                runner = {
                    "poly": lambda: solve(h, g),
                    "oracle": lambda: oracle_solve(h, g, vertex_cap=max(g.n, 20)),
                    "external": lambda: _external_decide(h, g, args.external_cmd),
                }[solver]
                runner()  # warm-up, discarded
                for _ in range(args.reps):
                    t0 = time.perf_counter_ns()
                    runner()
                    micros = (time.perf_counter_ns() - t0) // 1000
                    rows.append([
                        h.name, name, g.n, g.m, solver,
                        decisions[(h.name, name)][solver], micros, inst_seed,
                    ])
    _write_csv(args.csv, rows)
    print(f"wrote {args.csv} ({len(rows)} rows)")
    return 0


# ---------------------------------------------------------------------------
# proportions
# ---------------------------------------------------------------------------

def cmd_proportions(args: argparse.Namespace) -> int:
    h = _load_model(args.model)
    rows = []
    yes_count = 0
    for sample in generate.iter_proportion_samples(h, args.n, args.samples, args.seed):
        decision = "yes" if sample.decision.yes else "no"
        yes_count += sample.decision.yes
        # micros pinned to 0: proportion CSVs must be byte-identical across
        # runs with the same seed
        rows.append([
            h.name, f"sample-{sample.index:04d}", args.n, sample.graph.m,
            "poly", decision, 0, args.seed,
        ])
    no_count = args.samples - yes_count
    rows.append([
        h.name, "summary", args.n, args.samples, "poly",
        f"yes={yes_count};no={no_count}", 0, args.seed,
    ])
    _write_csv(args.csv, rows)
    print(f"wrote {args.csv}: {yes_count} yes / {no_count} no")
    return 0


def _write_csv(path: str, rows: list[list]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(rows)
    Path(path).write_text(buf.getvalue())


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hpart",
        description="Decide, generate, emit and benchmark H-partition instances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide one instance")
    p.add_argument("model", help="model file")
    p.add_argument("graph", help="graph file")
    p.add_argument("--strategy", type=_strategy_arg, default=None,
                   choices=list(Strategy), metavar="NAME",
                   help="override the classified strategy "
                        "(generic, twin-labels, pair-lock, isolated-shortcut, oracle-only)")
    p.add_argument("--witness", action="store_true",
                   help="print a validated witness partition on yes")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", help="write instance files")
    p.add_argument("kind", choices=["yes", "no-trivial", "no-random"])
    p.add_argument("--model", required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-m", type=int, default=None, help="edge count (kind 'yes')")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-tries", type=int, default=100)
    p.add_argument("--require-base", action="store_true",
                   help="no-random: insist on an H-isomorphic quadruplet")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("emit", help="write logic program and fact files")
    p.add_argument("--model", required=True)
    p.add_argument("--dialect", choices=["guess-check", "datalog"], default="datalog")
    p.add_argument("--strategy", type=_strategy_arg, default=None,
                   choices=list(Strategy), metavar="NAME")
    p.add_argument("--graph", default=None, help="also write instance facts")
    p.add_argument("-o", "--out-dir", default=".")
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("bench", help="time solvers over a corpus, write CSV")
    p.add_argument("--model", action="append", required=True,
                   help="model file (repeatable)")
    p.add_argument("--corpus", required=True, help="directory of *.graph files")
    p.add_argument("--solvers", default="poly,oracle",
                   help="comma list from poly,oracle,external")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--external-cmd", default=None,
                   help="command template with {program} and {facts}")
    p.add_argument("--parallel", action="store_true",
                   help="parallelize the correctness pass (never timed runs)")
    p.add_argument("--csv", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("proportions", help="yes/no proportions over random graphs")
    p.add_argument("--model", required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=cmd_proportions)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "seed") and args.seed is None:
        args.seed = _default_seed()
    try:
        return args.func(args)
    except (ParseError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
