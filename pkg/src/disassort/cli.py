"""Command-line front end.

Exit codes: 0 success, 2 configuration or input error, 3 simple graph not obtained.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import distributions as dist
from .degseq import DegreeSequence, assumption_gap, read_degree_file, sample_iid, write_degree_file
from .dga import (
    SimplicityError,
    build,
    is_simple,
    objective,
    read_edge_list,
    s_metric,
    write_edge_list,
)
from .experiment import (
    ConfigError,
    ExperimentConfig,
    parse_dist,
    run_curve,
    run_experiment,
    write_curve,
    write_experiment,
)
from .oracle import MAX_ORACLE_STUBS, min_pairing_bruteforce
from .rankcorr import (
    DEFAULT_TAIL_TOL,
    empirical_joint,
    limit_joint,
    predicted_joint,
    rho_min_with_bound,
    size_biased_F,
    spearman_full,
    spearman_tilde,
    write_joint_csv,
)

EXIT_CONFIG = 2
EXIT_SIMPLE = 3


def _count(text: str) -> int:
    """Integer that may be written as ``1e5``."""
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


def _emit(**values) -> None:
    for key, v in values.items():
        print(f"{key}={v:.17g}" if isinstance(v, float) else f"{key}={v}")


def _degrees(args) -> DegreeSequence:
    if args.degrees:
        return read_degree_file(args.degrees)
    if not args.dist or args.n is None:
        raise ConfigError("give --degrees FILE or both --dist and --n")
    return sample_iid(parse_dist(args.dist).pmf, args.n, args.seed)


def _config(args, spec) -> ExperimentConfig:
    return ExperimentConfig(
        dist=spec,
        ns=tuple(args.n),
        replicates=args.replicates,
        seed=args.seed,
        tail_tol=args.tail_tol,
        require_simple=args.simple,
        max_retries=args.max_retries,
        threads=args.threads,
        timing=args.timing,
    )


# ---------------------------------------------------------------------------
# subcommands


def cmd_experiment(args) -> int:
    spec = parse_dist(args.dist)
    records = run_experiment(_config(args, spec))
    summary, xn = write_experiment(args.out, records)
    print(f"wrote {args.out}, {summary}, {xn}")
    return 0


def cmd_curve(args) -> int:
    specs = [parse_dist(d) for d in args.dist]
    points = run_curve(specs, _config(args, specs[0]))
    write_curve(args.out, points)
    print(f"wrote {args.out}")
    return 0


def cmd_gen_degrees(args) -> int:
    ds = sample_iid(parse_dist(args.dist).pmf, args.n, args.seed)
    write_degree_file(args.out, ds)
    _emit(n=ds.n, L=ds.L, max_degree=ds.max_degree)
    return 0


def cmd_build(args) -> int:
    ds = _degrees(args)
    g = build(ds, args.seed, require_simple=args.simple, max_retries=args.max_retries)
    rep = is_simple(g)
    if args.out:
        write_edge_list(args.out, g)
    _emit(
        n=g.n, m=g.m, z_n=g.z_n, star_edges=int(g.star_edges().shape[0]),
        simple=int(rep.overall_simple), star_simple=int(rep.star_simple),
        self_loops=rep.self_loop_count, parallel_edges=rep.parallel_edge_count,
        s_metric=s_metric(g),
    )
    return 0


def cmd_rho(args) -> int:
    g = read_edge_list(args.edges)
    _emit(rho_full=spearman_full(g, args.seed), rho_tilde=spearman_tilde(g))
    return 0


def cmd_joint(args) -> int:
    if args.kind == "empirical":
        if not args.edges:
            raise ConfigError("joint empirical needs --edges")
        h = empirical_joint(read_edge_list(args.edges))
    elif args.kind == "predicted":
        h = predicted_joint(_degrees(args))
    else:
        if not args.dist:
            raise ConfigError("joint limit needs --dist")
        h = limit_joint(dist.size_biased(parse_dist(args.dist).pmf), args.tail_tol)
    write_joint_csv(args.out, h)
    _emit(entries=len(h), total_mass=h.total_mass())
    return 0


def cmd_rho_min(args) -> int:
    f_star = dist.size_biased(parse_dist(args.dist).pmf)
    value, bound = rho_min_with_bound(f_star, args.tail_tol)
    _emit(rho_min=value, error_bound=bound, f_star_1=float(f_star.prob(1)),
          cubic_bound=dist.cubic_bound(float(f_star.prob(1))))
    return 0


def cmd_delta_transform(args) -> int:
    f = parse_dist(args.dist).pmf
    fd = dist.delta_transform(f, args.delta)
    dist.write_pmf_file(args.out, fd, args.kmax)
    _emit(k_delta=fd.m - 1, delta=float(fd.prob(1)))
    return 0


def cmd_rho_transform(args) -> int:
    f = parse_dist(args.dist).pmf
    rt = dist.rho_transform(f, args.rho)
    if args.out:
        dist.write_pmf_file(args.out, rt.pmf, args.kmax)
    a = float(rt.size_biased.prob(1))
    _emit(delta=rt.delta, k_delta=rt.k_delta, mu_rho=rt.mu_rho, tail_ratio=rt.mu_rho / f.mean,
          f_rho_star_1=a, cubic_bound=dist.cubic_bound(a))
    return 0


def cmd_assumption_gap(args) -> int:
    ds = _degrees(args)
    f = parse_dist(args.dist).pmf
    kr, l1 = assumption_gap(ds, f, dist.size_biased(f))
    _emit(kr=kr, l1=l1)
    return 0


def cmd_oracle(args) -> int:
    ds = DegreeSequence(args.seq)
    if ds.L > MAX_ORACLE_STUBS:
        raise ConfigError(f"oracle limited to {MAX_ORACLE_STUBS} stubs")
    g = build(ds, args.seed)
    w = size_biased_F(ds)
    best = min_pairing_bruteforce(ds, w)
    s_best = min_pairing_bruteforce(ds, np.arange(ds.max_degree + 1))
    # objectives are 2 * sum / L; undo the normalization to recover the s-metric
    _emit(dga_objective=objective(g, w), oracle_objective=best.objective,
          dga_s_metric=s_metric(g), oracle_s_metric=round(s_best.objective * ds.L / 2))
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=_count, action="append", required=True, help="graph size (repeatable)")
    p.add_argument("--replicates", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--simple", action="store_true", help="require simple graphs")
    p.add_argument("--max-retries", type=int, default=100)
    p.add_argument("--tail-tol", type=float, default=DEFAULT_TAIL_TOL)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="record wall time in the ms column")


def _add_degree_source(p: argparse.ArgumentParser, dist_required: bool = False) -> None:
    p.add_argument("--degrees", help="degree file, one integer per line")
    p.add_argument("--dist", required=dist_required, help="pareto:gamma=G | poisson:lambda=L | degenerate:k=K | file:PATH")
    p.add_argument("--n", type=_count)
    p.add_argument("--seed", type=int, default=0)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="disassort", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("experiment", help="replicate experiment at one or more n")
    p.add_argument("--dist", required=True)
    _add_run_flags(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("curve", help="mean rho_full and rho_min over a parameter grid")
    p.add_argument("--dist", action="append", required=True, help="repeat for each grid point")
    _add_run_flags(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("gen-degrees", help="sample an i.i.d. degree sequence")
    p.add_argument("--dist", required=True)
    p.add_argument("--n", type=_count, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_degrees)

    p = sub.add_parser("build", help="build the disassortative graph")
    _add_degree_source(p)
    p.add_argument("--simple", action="store_true")
    p.add_argument("--max-retries", type=int, default=100)
    p.add_argument("--out", help="edge-list output")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("rho", help="both Spearman estimators of an edge list")
    p.add_argument("--edges", required=True)
    p.add_argument("--seed", type=int, default=0, help="seed for the rank tie-breakers")
    p.set_defaults(func=cmd_rho)

    p = sub.add_parser("joint", help="write a joint degree law as CSV")
    p.add_argument("kind", choices=["empirical", "predicted", "limit"])
    p.add_argument("--edges")
    _add_degree_source(p)
    p.add_argument("--tail-tol", type=float, default=DEFAULT_TAIL_TOL)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_joint)

    p = sub.add_parser("rho-min", help="limiting minimum rho for a degree law")
    p.add_argument("--dist", required=True)
    p.add_argument("--tail-tol", type=float, default=DEFAULT_TAIL_TOL)
    p.set_defaults(func=cmd_rho_min)

    p = sub.add_parser("delta-transform", help="set f(1) = delta and keep the tail")
    p.add_argument("--dist", required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--kmax", type=_count, default=1000, help="largest k written")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_delta_transform)

    p = sub.add_parser("rho-transform", help="reshape a law so its cubic bound exceeds rho")
    p.add_argument("--dist", required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--kmax", type=_count, default=1000, help="largest k written")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rho_transform)

    p = sub.add_parser("assumption-gap", help="distances between empirical and limiting laws")
    _add_degree_source(p, dist_required=True)
    p.set_defaults(func=cmd_assumption_gap)

    p = sub.add_parser("oracle", help=argparse.SUPPRESS)
    p.add_argument("seq", type=int, nargs="+")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)
    # hide from the command list
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "oracle"]
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except SimplicityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIMPLE
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
