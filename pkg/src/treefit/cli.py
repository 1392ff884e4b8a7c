"""Batch front-end.

Subcommands: solve, verify, generate, oracle, bench.  Exit codes for solve
and oracle: 0 = contains, 1 = not contained, 2 = not found (probabilistic),
anything above 2 is a usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from pathlib import Path

from . import hardness
from .embedding import read_certificate, write_certificate
from .errors import BudgetExceededError, ParseError, TreefitError
from .generate import random_graph_min_degree, random_tree
from .graph import read_graph, write_graph
from .outcome import Contains, NotContained, NotFound
from .pipeline import SolveConfig, brute_force_contains, solve, verify_certificate
from .seeds import rng_from
from .trees import read_tree, write_tree

EXIT_CONTAINS = 0
EXIT_NOT_CONTAINED = 1
EXIT_NOT_FOUND = 2
EXIT_USAGE = 3


def _seed_from(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("TREEFIT_SEED")
    return int(env) if env else 0


def _config_from(args) -> SolveConfig:
    return SolveConfig(
        seed=_seed_from(args),
        failure_exponent=args.failure_exponent,
        node_budget=args.budget_nodes,
        strict=(args.mode == "strict"),
    )


def _outcome_exit(outcome, cert_out, g, t) -> int:
    if isinstance(outcome, Contains):
        print(f"CONTAINS branch={outcome.branch}")
        if cert_out:
            write_certificate(cert_out, outcome.embedding)
        return EXIT_CONTAINS
    if isinstance(outcome, NotContained):
        print(f"NOT_CONTAINED reason={outcome.reason}")
        return EXIT_NOT_CONTAINED
    assert isinstance(outcome, NotFound)
    seed = outcome.seed if outcome.seed is not None else 0
    print(f"NOT_FOUND rounds={outcome.rounds} seed={seed}")
    return EXIT_NOT_FOUND


def cmd_solve(args) -> int:
    g = read_graph(args.graph)
    t = read_tree(args.tree)
    outcome = solve(g, t, _config_from(args))
    return _outcome_exit(outcome, args.cert_out, g, t)


def cmd_oracle(args) -> int:
    g = read_graph(args.graph)
    t = read_tree(args.tree)
    try:
        outcome = brute_force_contains(g, t, node_cap=args.budget_nodes)
    except BudgetExceededError as exc:
        print(f"NOT_FOUND rounds={exc.nodes} seed=0")
        return EXIT_NOT_FOUND
    return _outcome_exit(outcome, args.cert_out, g, t)


def cmd_verify(args) -> int:
    g = read_graph(args.graph)
    t = read_tree(args.tree)
    cert = read_certificate(args.certificate)
    if verify_certificate(g, t, cert):
        print("VALID")
        return 0
    print("INVALID")
    return 1


def cmd_generate(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.kind == "random":
        rng = rng_from(_seed_from(args))
        g = random_graph_min_degree(args.n, args.min_degree, rng)
        t = random_tree(args.tree_size, rng)
        write_graph(out_dir / "instance.graph", g)
        write_tree(out_dir / "instance.tree", t)
        print(
            f"wrote instance.graph (n={g.n}, m={g.edge_count}, "
            f"min_degree={g.min_degree()}) and instance.tree (n={t.n})"
        )
        return 0
    # hardness: numbers file holds the target on line 1, sizes after
    text = Path(args.numbers).read_text(encoding="ascii").split()
    target, sizes = int(text[0]), tuple(int(x) for x in text[1:])
    inst = hardness.ThreePartitionInstance(sizes, target)
    out = hardness.generate_hardness_instance(inst, args.epsilon)
    write_graph(out_dir / "instance.graph", out.graph)
    write_tree(out_dir / "instance.tree", out.tree)
    (out_dir / "landmarks.jsonl").write_text(
        "\n".join(out.landmark_lines()) + "\n", encoding="ascii"
    )
    print(
        f"wrote hardness instance: |V(G)|={out.graph.n}, |V(T)|={out.tree.n}, "
        f"min_degree={out.delta}"
    )
    return 0


def cmd_bench(args) -> int:
    instance_dir = Path(args.dir)
    rows = []
    for graph_path in sorted(instance_dir.glob("*.graph")):
        tree_path = graph_path.with_suffix(".tree")
        if not tree_path.exists():
            continue
        name = graph_path.stem
        row = {"instance": name, "outcome": "", "branch": "", "ms": "", "rounds": "", "error": ""}
        try:
            g = read_graph(graph_path)
            t = read_tree(tree_path)
            start = time.perf_counter()
            outcome = solve(g, t, _config_from(args))
            row["ms"] = f"{(time.perf_counter() - start) * 1000.0:.3f}"
            if isinstance(outcome, Contains):
                row["outcome"] = "contains"
                row["branch"] = outcome.branch
            elif isinstance(outcome, NotContained):
                row["outcome"] = "not_contained"
                row["branch"] = outcome.reason
            else:
                row["outcome"] = "not_found"
                row["rounds"] = str(outcome.rounds)
        except TreefitError as exc:
            row["error"] = str(exc)
        rows.append(row)
    writer = csv.DictWriter(
        sys.stdout,
        fieldnames=["instance", "outcome", "branch", "ms", "rounds", "error"],
        lineterminator="\n",
    )
    writer.writeheader()
    writer.writerows(rows)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treefit",
        description="Tree containment solver for hosts with slack above the minimum degree",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help="64-bit master seed (or TREEFIT_SEED)")
        p.add_argument("--failure-exponent", type=int, default=20)
        p.add_argument("--mode", choices=["strict", "budgeted"], default="budgeted")
        p.add_argument("--budget-nodes", type=int, default=2_000_000)

    p_solve = sub.add_parser("solve", help="decide containment and emit a certificate")
    p_solve.add_argument("--graph", required=True)
    p_solve.add_argument("--tree", required=True)
    p_solve.add_argument("--cert-out", default=None)
    common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_oracle = sub.add_parser("oracle", help="exact brute-force decision")
    p_oracle.add_argument("--graph", required=True)
    p_oracle.add_argument("--tree", required=True)
    p_oracle.add_argument("--cert-out", default=None)
    common(p_oracle)
    p_oracle.set_defaults(func=cmd_oracle)

    p_verify = sub.add_parser("verify", help="check a certificate file")
    p_verify.add_argument("--graph", required=True)
    p_verify.add_argument("--tree", required=True)
    p_verify.add_argument("--certificate", required=True)
    p_verify.set_defaults(func=cmd_verify)

    p_gen = sub.add_parser("generate", help="write instance files")
    gen_sub = p_gen.add_subparsers(dest="kind", required=True)
    p_rand = gen_sub.add_parser("random")
    p_rand.add_argument("--n", type=int, required=True)
    p_rand.add_argument("--min-degree", type=int, required=True)
    p_rand.add_argument("--tree-size", type=int, required=True)
    p_rand.add_argument("--seed", type=int, default=None)
    p_rand.add_argument("--out-dir", required=True)
    p_rand.set_defaults(func=cmd_generate, kind="random")
    p_hard = gen_sub.add_parser("hardness")
    p_hard.add_argument("--numbers", required=True, help="file: target then the 3n sizes")
    p_hard.add_argument("--epsilon", type=float, required=True)
    p_hard.add_argument("--seed", type=int, default=None)
    p_hard.add_argument("--out-dir", required=True)
    p_hard.set_defaults(func=cmd_generate, kind="hardness")

    p_bench = sub.add_parser("bench", help="run solve over *.graph/*.tree pairs, emit CSV")
    p_bench.add_argument("--dir", required=True)
    common(p_bench)
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TreefitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
