"""Degree sequences: IID generation, empirical laws, the split degree z_n."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .distributions import Pmf, TablePmf


@dataclass(frozen=True)
class DegreeSequence:
    """Degrees ``D_1..D_n`` of an undirected multigraph (stored 0-based).

    The total ``L_n`` must be even.  Degree-zero nodes are allowed.
    """

    degrees: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = np.array(self.degrees, dtype=np.int64)
        if d.ndim != 1 or d.size == 0:
            raise ValueError("a degree sequence needs at least one node")
        if np.any(d < 0):
            raise ValueError("degrees must be non-negative")
        if int(d.sum()) % 2:
            raise ValueError("sum of degrees must be even")
        d.setflags(write=False)
        object.__setattr__(self, "degrees", d)

    @property
    def n(self) -> int:
        return int(self.degrees.size)

    @cached_property
    def L(self) -> int:
        return int(self.degrees.sum())

    @cached_property
    def counts(self) -> np.ndarray:
        """``N_k`` for ``k = 0..max degree``."""
        c = np.bincount(self.degrees)
        c.setflags(write=False)
        return c

    @cached_property
    def stub_counts(self) -> np.ndarray:
        """``k N_k`` for ``k = 0..max degree``."""
        s = np.arange(self.counts.size, dtype=np.int64) * self.counts
        s.setflags(write=False)
        return s

    @property
    def max_degree(self) -> int:
        return int(self.counts.size - 1)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"DegreeSequence(n={self.n}, L={self.L}, max={self.max_degree})"


def sample_iid(pmf: Pmf, n: int, seed) -> DegreeSequence:
    """Draw ``n`` i.i.d. degrees and add one to the last if the total is odd."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    d = pmf.sample(rng, n).astype(np.int64)
    if int(d.sum()) % 2:
        d[-1] += 1
    return DegreeSequence(d)


def empirical(ds: DegreeSequence) -> tuple[TablePmf, TablePmf]:
    """Return ``(f_n, f_n*)`` with ``f_n(k) = N_k / n`` and ``f_n*(k) = k N_k / L_n``."""
    if ds.L == 0:
        raise ValueError("size-biased law is undefined for an all-zero sequence")
    return TablePmf.from_counts(ds.counts, ds.n), TablePmf.from_counts(ds.stub_counts, ds.L)


def compute_zn(ds: DegreeSequence) -> int:
    """Smallest z with ``2 * sum_{t<=z} t N_t >= L_n``, in integer arithmetic."""
    if ds.L == 0:
        raise ValueError("z_n is undefined when all degrees are zero")
    csum = np.cumsum(ds.stub_counts)
    return int(np.searchsorted(2 * csum, ds.L, side="left"))


def assumption_gap(ds: DegreeSequence, f: Pmf, f_star: Pmf) -> tuple[float, float]:
    """Distances between the empirical laws of ``ds`` and the limits ``f``, ``f_star``.

    Returns
    -------
    kr : float
        ``sum_k |F_n(k) - F(k)|``; beyond the largest degree ``F_n = 1`` and the
        remainder ``sum_{k > M} (1 - F(k))`` is evaluated as ``mu - sum_{k<=M} sf(k)``.
    l1 : float
        ``sum_k |f_n*(k) - f*(k)|``; beyond the largest degree only ``sf*(M)`` remains.
    """
    fn, fn_star = empirical(ds)
    M = ds.max_degree
    ks = np.arange(M + 1)
    sf = f.sf(ks)
    head = math.fsum(np.abs(fn.cdf(ks) - f.cdf(ks)))
    mu = f.mean
    if not math.isfinite(mu):
        raise ValueError("Kantorovich-Rubinstein distance diverges: f has infinite mean")
    tail = max(mu - math.fsum(sf), 0.0)
    kr = head + tail
    l1 = math.fsum(np.abs(fn_star.prob(ks) - f_star.prob(ks))) + f_star.sf(M)
    return kr, float(l1)


# ---------------------------------------------------------------------------
# degree files: one integer per line


def read_degree_file(path) -> DegreeSequence:
    vals = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            vals.append(int(line))
    return DegreeSequence(np.array(vals, dtype=np.int64))


def write_degree_file(path, ds: DegreeSequence) -> None:
    Path(path).write_text("".join(f"{d}\n" for d in ds.degrees.tolist()))
