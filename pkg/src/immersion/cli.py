"""Command-line front end.

Exit codes: 0 success, 1 invalid certificate or no immersion, 2 precondition
or input error, 3 retries exhausted, 4 digest mismatch, 5 budget exceeded.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from fractions import Fraction

from . import __version__
from .certificates import (
    ImmersionCertificate,
    LineMinorCertificate,
    load_certificate,
    save_certificate,
    verify_immersion,
    verify_line_minor,
)
from .coloring import complete_graph
from .constructions import (
    class2_complement_family,
    complement_of_cycles,
    complement_of_perfect_matching,
    corollary_line_minor_result,
    line_graph_clique_minor,
    line_minor_upper_bound,
    random_gnp,
    random_min_degree,
    seymour_graph,
    very_dense_immersion,
)
from .dense import find_dense_immersion
from .engine import main_engine
from .errors import (
    BudgetExceeded,
    CertificateFormatError,
    DegenerateInput,
    DigestMismatch,
    GraphFormatError,
    ImmersionError,
    InvalidInput,
    PreconditionViolated,
    RetriesExhausted,
)
from .graph import as_simple, read_graph, write_graph
from .oracle import Budget, brute_force_immersion, brute_force_one_immersion

EXIT_OK = 0
EXIT_NONE = 1
EXIT_PRECONDITION = 2
EXIT_RETRIES = 3
EXIT_DIGEST = 4
EXIT_BUDGET = 5

log = logging.getLogger("immersion")


class BadParams(PreconditionViolated):
    pass


def _require(args, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise BadParams(f"{args.family} needs {', '.join(missing)}")


def cmd_gen(args) -> int:
    fam = args.family
    if fam == "seymour":
        g = seymour_graph()
    elif fam == "class2":
        _require(args, "D", "t")
        g = class2_complement_family([complete_graph(args.D + 1)] * args.t, unchecked=args.unchecked)
    elif fam == "random-gnp":
        _require(args, "n", "p")
        g = random_gnp(args.n, args.p, args.seed)
    elif fam == "random-mindeg":
        _require(args, "n", "p", "delta")
        g = random_min_degree(args.n, args.p, args.delta, args.seed)
    elif fam == "complement-cycles":
        _require(args, "t")
        g = complement_of_cycles(args.t, args.length)
    elif fam == "complement-matching":
        _require(args, "n")
        g = complement_of_perfect_matching(args.n)
    elif fam == "complete":
        _require(args, "n")
        g = complete_graph(args.n)
    else:  # argparse restricts the choices
        raise BadParams(f"unknown family {fam}")
    write_graph(g, args.out, comment=f"immersion gen {fam}")
    print(f"wrote {fam}: n={g.order} m={g.num_edges}")
    return EXIT_OK


def _describe(cert: ImmersionCertificate, rep) -> str:
    return f"K_{cert.t} immersion: valid={rep.valid} strong={rep.strong} k={rep.k_uniform}"


def cmd_find(args) -> int:
    g = as_simple(read_graph(args.graph))
    if args.method == "dense":
        c = Fraction(args.c) if args.c is not None else None
        cert = find_dense_immersion(
            g, seed=args.seed, c=c, derandomize=args.derandomize, max_attempts=args.max_attempts
        ).certificate
    elif args.method == "sparse":
        t = args.t
        if t is None:
            verts = g.vertices()
            degs = g.degrees()
            t = min((degs[v] for v in verts), default=0) // 200
        res = main_engine(g, t)
        log.info("engine outcome %s after %d iterations", res.outcome, len(res.iterations))
        cert = res.certificate
    else:
        cert = very_dense_immersion(g)
    rep = verify_immersion(g, cert)
    print(_describe(cert, rep))
    if not rep.valid:
        for f in rep.failures[:10]:
            print(f"  {f.kind}: {f.message}")
        return EXIT_NONE
    save_certificate(cert, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = read_graph(args.graph)
    cert = load_certificate(args.cert)
    if isinstance(cert, LineMinorCertificate):
        rep = verify_line_minor(g, cert)
        bound = line_minor_upper_bound(g)
        print(f"line-graph clique minor of order {rep.order}: valid={rep.valid}")
        ok = rep.valid and bound.admits(rep.order)
    else:
        rep = verify_immersion(g, cert)
        print(_describe(cert, rep))
        ok = rep.valid
        if args.expect_strong and not rep.strong:
            print("  expected a strong immersion")
            ok = False
        if args.expect_k is not None and rep.k_uniform != args.expect_k:
            print(f"  expected k={args.expect_k}, got {rep.k_uniform}")
            ok = False
        if args.expect_order is not None and cert.t < args.expect_order:
            print(f"  expected order at least {args.expect_order}")
            ok = False
    for f in rep.failures[:10]:
        print(f"  {f.kind}: {f.message}")
    return EXIT_OK if ok else EXIT_NONE


def cmd_oracle(args) -> int:
    g = read_graph(args.graph)
    budget = Budget(args.max_vertices, args.max_edges, args.budget)
    if args.one:
        cert = brute_force_one_immersion(g, args.t, require_strong=args.strong, budget=budget)
    else:
        cert = brute_force_immersion(g, args.t, require_strong=args.strong, budget=budget)
    if cert is None:
        print(f"NONE: no {'strong ' if args.strong else ''}K_{args.t} immersion")
        return EXIT_NONE
    print(f"FOUND: K_{args.t} immersion on branch vertices {cert.branch.tolist()}")
    if args.out:
        save_certificate(cert, args.out)
    return EXIT_OK


def cmd_line_minor(args) -> int:
    if args.p is not None:
        g, cert = line_graph_clique_minor(args.p)
        if args.graph_out:
            write_graph(g, args.graph_out, comment=f"complete graph for p={args.p}")
        method = "projective-plane"
    else:
        g = as_simple(read_graph(args.graph))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateInput)
            res = corollary_line_minor_result(g)
        cert, method = res.certificate, res.method
        if res.degenerate:
            print("degenerate input: immersed clique too small, using a star")
    rep = verify_line_minor(g, cert)
    bound = line_minor_upper_bound(g)
    print(
        f"line-graph clique minor of order {cert.order} ({method}): valid={rep.valid} "
        f"within bound={bound.admits(cert.order)}"
    )
    if not rep.valid:
        return EXIT_NONE
    save_certificate(cert, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="immersion", description="Clique immersions with checkable certificates.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a generated graph")
    g.add_argument(
        "family",
        choices=[
            "seymour", "class2", "random-gnp", "random-mindeg",
            "complement-cycles", "complement-matching", "complete",
        ],
    )
    g.add_argument("-o", "--out", required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=float)
    g.add_argument("--delta", type=int)
    g.add_argument("--D", type=int, help="class2: component degree (components are K_{D+1})")
    g.add_argument("--t", type=int, help="class2 / complement-cycles: number of components")
    g.add_argument("--length", type=int, default=5, help="complement-cycles: cycle length")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--unchecked", action="store_true", help="class2: skip the odd-order check")
    g.set_defaults(func=cmd_gen)

    f = sub.add_parser("find", help="find a clique immersion and write its certificate")
    f.add_argument("method", choices=["dense", "sparse", "very-dense"])
    f.add_argument("graph")
    f.add_argument("-o", "--out", required=True)
    f.add_argument("--t", type=int, help="sparse: clique order (default: min degree // 200)")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--c", help="dense: density constant as a fraction, at most m/2n^2")
    f.add_argument("--derandomize", action="store_true", help="dense: try every pair instead of sampling")
    f.add_argument("--max-attempts", type=int)
    f.set_defaults(func=cmd_find)

    v = sub.add_parser("verify", help="check a certificate against a graph")
    v.add_argument("graph")
    v.add_argument("cert")
    v.add_argument("--expect-strong", action="store_true")
    v.add_argument("--expect-k", type=int)
    v.add_argument("--expect-order", type=int)
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="exhaustive search on a tiny graph")
    o.add_argument("graph")
    o.add_argument("--t", type=int, required=True)
    o.add_argument("--strong", action="store_true")
    o.add_argument("--one", action="store_true", help="1-immersions (paths of length 2)")
    o.add_argument("--budget", type=int, help="maximum search nodes")
    o.add_argument("--max-vertices", type=int, default=14)
    o.add_argument("--max-edges", type=int, default=60)
    o.add_argument("-o", "--out")
    o.set_defaults(func=cmd_oracle)

    lm = sub.add_parser("line-minor", help="clique minor in a line graph")
    src = lm.add_mutually_exclusive_group(required=True)
    src.add_argument("--p", type=int, help="odd prime: construction in K_{p^2+p+1}")
    src.add_argument("--graph", help="graph file: via a clique immersion")
    lm.add_argument("-o", "--out", required=True)
    lm.add_argument("--graph-out", help="with --p, also write the complete graph")
    lm.set_defaults(func=cmd_line_minor)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except DigestMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIGEST
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except RetriesExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RETRIES
    except (PreconditionViolated, GraphFormatError, CertificateFormatError, InvalidInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ImmersionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NONE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
