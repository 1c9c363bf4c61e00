"""Seeded replicate experiments: sample degrees, build, measure both rho estimators.

Per-replicate seeds are a pure function of ``(base seed, n index, replicate)``
through the 64-bit SplitMix64 finalizer (see :func:`derive_seed`), so output
never depends on thread scheduling.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import distributions as dist
from .degseq import sample_iid
from .dga import build, is_simple
from .rankcorr import DEFAULT_TAIL_TOL, rho_min, spearman_full, spearman_tilde

MASK64 = (1 << 64) - 1
GOLDEN64 = 0x9E3779B97F4A7C15

EXPERIMENT_HEADER = ["n", "param", "replicate", "seed", "rho_full", "rho_tilde", "z_n", "simple", "ms"]
SUMMARY_HEADER = ["n", "param", "R", "mean_rho_full", "std_rho_full", "mean_rho_tilde", "std_rho_tilde", "max_dev"]
XN_HEADER = ["n", "param", "rank", "abs_dev", "prob"]
CURVE_HEADER = ["param", "n", "R", "mean_rho_full", "std_rho_full", "rho_min"]


class ConfigError(ValueError):
    """Invalid experiment configuration or distribution spec."""


def splitmix64(x: int) -> int:
    """One SplitMix64 step: add the golden-ratio increment, then finalize."""
    z = (x + GOLDEN64) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(base: int, n_index: int, replicate: int) -> int:
    """``splitmix64(splitmix64(splitmix64(base) ^ n_index) ^ replicate)``."""
    z = splitmix64(base & MASK64)
    z = splitmix64(z ^ (n_index & MASK64))
    return splitmix64(z ^ (replicate & MASK64))


def _streams(seed: int):
    # independent streams for degrees, residual matching, rank tie-breakers
    return np.random.SeedSequence(seed).spawn(3)


# ---------------------------------------------------------------------------
# distribution specs


@dataclass(frozen=True)
class DistSpec:
    """Parsed ``family:key=value`` token."""

    text: str
    pmf: dist.Pmf = field(repr=False)
    param: str


def parse_dist(text: str) -> DistSpec:
    """Parse ``pareto:gamma=G``, ``poisson:lambda=L``, ``degenerate:k=K`` or ``file:<path>``."""
    family, _, rest = text.partition(":")
    family = family.strip().lower()
    try:
        if family == "file":
            if not rest:
                raise ConfigError("file: spec needs a path")
            return DistSpec(text, dist.read_pmf_file(rest), Path(rest).name)
        kv = {}
        for tok in filter(None, rest.split(",")):
            key, eq, val = tok.partition("=")
            if not eq:
                raise ConfigError(f"malformed parameter {tok!r} in {text!r}")
            kv[key.strip().lower()] = val.strip()
        if family == "pareto":
            g = float(kv.pop("gamma"))
            pmf, param = dist.pareto_floor(g), repr(g)
        elif family == "poisson":
            lam = float(kv.pop("lambda"))
            pmf, param = dist.poisson(lam), repr(lam)
        elif family == "degenerate":
            k = int(kv.pop("k"))
            pmf, param = dist.degenerate(k), str(k)
        else:
            raise ConfigError(f"unknown distribution family {family!r}")
        if kv:
            raise ConfigError(f"unexpected parameters {sorted(kv)} in {text!r}")
    except KeyError as exc:
        raise ConfigError(f"missing parameter {exc.args[0]!r} in {text!r}") from None
    except (OSError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{text!r}: {exc}") from None
    return DistSpec(text, pmf, param)


# ---------------------------------------------------------------------------
# experiments


@dataclass(frozen=True)
class ExperimentConfig:
    dist: DistSpec
    ns: tuple[int, ...]
    replicates: int = 10
    seed: int = 0
    tail_tol: float = DEFAULT_TAIL_TOL
    require_simple: bool = False
    max_retries: int = 100
    threads: int = 1
    timing: bool = False

    def __post_init__(self):
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        if not self.ns or any(n < 2 for n in self.ns):
            raise ConfigError("every n must be >= 2")
        if not 0.0 < self.tail_tol < 1.0:
            raise ConfigError("tail_tol must lie in (0, 1)")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")


@dataclass(frozen=True)
class ExperimentRecord:
    n: int
    param: str
    replicate: int
    seed: int
    rho_full: float
    rho_tilde: float
    z_n: int
    simple: bool
    ms: float

    def row(self) -> list[str]:
        return [
            str(self.n),
            self.param,
            str(self.replicate),
            str(self.seed),
            f"{self.rho_full:.17g}",
            f"{self.rho_tilde:.17g}",
            str(self.z_n),
            str(int(self.simple)),
            f"{self.ms:.3f}",
        ]


def run_replicate(pmf: dist.Pmf, n: int, param: str, replicate: int, seed: int, cfg: ExperimentConfig):
    start = time.perf_counter()
    s_deg, s_build, s_rank = _streams(seed)
    ds = sample_iid(pmf, n, s_deg)
    g = build(ds, s_build, require_simple=cfg.require_simple, max_retries=cfg.max_retries)
    rf = spearman_full(g, s_rank)
    rt = spearman_tilde(g)
    simple = is_simple(g).overall_simple
    ms = (time.perf_counter() - start) * 1e3 if cfg.timing else 0.0
    return ExperimentRecord(n, param, replicate, seed, rf, rt, int(g.z_n), simple, ms)


def run_experiment(cfg: ExperimentConfig, spec: DistSpec | None = None) -> list[ExperimentRecord]:
    """All replicates for every configured n, sorted by ``(n, replicate)``."""
    spec = spec or cfg.dist
    jobs = [
        (n, r, derive_seed(cfg.seed, i, r))
        for i, n in enumerate(cfg.ns)
        for r in range(cfg.replicates)
    ]

    def work(job):
        n, r, s = job
        return run_replicate(spec.pmf, n, spec.param, r, s, cfg)

    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            records = list(pool.map(work, jobs))
    else:
        records = [work(j) for j in jobs]
    return sorted(records, key=lambda rec: (rec.n, rec.param, rec.replicate))


def _std(x) -> float:
    return float(np.std(x, ddof=1)) if len(x) > 1 else 0.0


def summarize(records: list[ExperimentRecord]):
    """Per ``(n, param)``: summary row fields and sorted ``|rho_full - mean|`` values."""
    groups: dict[tuple[int, str], list[ExperimentRecord]] = {}
    for rec in records:
        groups.setdefault((rec.n, rec.param), []).append(rec)
    out = []
    for (n, param), recs in groups.items():
        full = np.array([r.rho_full for r in recs])
        tilde = np.array([r.rho_tilde for r in recs])
        mean_full = math.fsum(full) / full.size
        dev = np.sort(np.abs(full - mean_full))
        out.append(
            {
                "n": n,
                "param": param,
                "R": full.size,
                "mean_rho_full": mean_full,
                "std_rho_full": _std(full),
                "mean_rho_tilde": math.fsum(tilde) / tilde.size,
                "std_rho_tilde": _std(tilde),
                "max_dev": float(dev[-1]),
                "devs": dev,
            }
        )
    return out


def _fmt(v) -> str:
    return f"{v:.17g}" if isinstance(v, float) else str(v)


def write_experiment(path, records: list[ExperimentRecord]) -> tuple[Path, Path]:
    """Write records to ``path`` plus ``<path>.summary.csv`` and ``<path>.xn.csv``."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(EXPERIMENT_HEADER)
        w.writerows(rec.row() for rec in records)
    summary_path = path.with_name(path.name + ".summary.csv")
    xn_path = path.with_name(path.name + ".xn.csv")
    summ = summarize(records)
    with open(summary_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for s in summ:
            w.writerow([_fmt(s[c]) for c in SUMMARY_HEADER])
    with open(xn_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(XN_HEADER)
        for s in summ:
            R = s["R"]
            for i, d in enumerate(s["devs"].tolist(), start=1):
                w.writerow([s["n"], s["param"], i, _fmt(d), _fmt(i / R)])
    return summary_path, xn_path


def read_experiment(path) -> list[ExperimentRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != EXPERIMENT_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [
            ExperimentRecord(
                n=int(r["n"]),
                param=r["param"],
                replicate=int(r["replicate"]),
                seed=int(r["seed"]),
                rho_full=float(r["rho_full"]),
                rho_tilde=float(r["rho_tilde"]),
                z_n=int(r["z_n"]),
                simple=bool(int(r["simple"])),
                ms=float(r["ms"]),
            )
            for r in reader
        ]


def read_csv_rows(path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# parameter curves


@dataclass(frozen=True)
class CurvePoint:
    param: str
    n: int
    R: int
    mean_rho_full: float
    std_rho_full: float
    rho_min: float


def run_curve(specs: list[DistSpec], cfg: ExperimentConfig) -> list[CurvePoint]:
    """Mean ``rho_full`` at the largest n for each spec, next to ``rho_min`` of its size-biased law."""
    if not specs:
        raise ConfigError("curve needs at least one distribution")
    n = max(cfg.ns)
    idx = cfg.ns.index(n)
    points = []
    for spec in specs:
        sub = ExperimentConfig(
            spec, (n,), cfg.replicates, cfg.seed, cfg.tail_tol,
            cfg.require_simple, cfg.max_retries, cfg.threads, cfg.timing,
        )
        # keep the seed stream of the largest n's position in the configured list
        jobs_seed = [derive_seed(cfg.seed, idx, r) for r in range(cfg.replicates)]

        def work(r, spec=spec, sub=sub):
            return run_replicate(spec.pmf, n, spec.param, r, jobs_seed[r], sub)

        if cfg.threads > 1:
            with ThreadPoolExecutor(cfg.threads) as pool:
                recs = list(pool.map(work, range(cfg.replicates)))
        else:
            recs = [work(r) for r in range(cfg.replicates)]
        full = np.array([r.rho_full for r in recs])
        points.append(
            CurvePoint(
                spec.param, n, cfg.replicates, math.fsum(full) / full.size, _std(full),
                rho_min(dist.size_biased(spec.pmf), cfg.tail_tol),
            )
        )
    return points


def write_curve(path, points: list[CurvePoint]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CURVE_HEADER)
        for p in points:
            w.writerow([p.param, p.n, p.R, _fmt(p.mean_rho_full), _fmt(p.std_rho_full), _fmt(p.rho_min)])


def read_curve(path) -> list[CurvePoint]:
    return [
        CurvePoint(r["param"], int(r["n"]), int(r["R"]), float(r["mean_rho_full"]),
                   float(r["std_rho_full"]), float(r["rho_min"]))
        for r in read_csv_rows(path)
    ]
