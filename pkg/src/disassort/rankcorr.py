"""Spearman's rho on graphs and the joint degree law of disassortative graphs.

Two graph estimators are provided: :func:`spearman_full`, built from
uniformly tie-broken ranks of the degrees at both ends of every directed edge,
and :func:`spearman_tilde`, its deterministic large-graph equivalent based on
``F(k) + F(k-1)``.  The joint degree law of the greedy construction is the
overlap pattern of the stub-mass partition of ``[0, 1]`` with its own mirror
image; :func:`predicted_joint` evaluates it exactly for a finite degree
sequence and :func:`limit_joint` for a limiting size-biased law.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .degseq import DegreeSequence, empirical
from .distributions import Pmf, TablePmf
from .dga import Graph, objective

DEFAULT_TAIL_TOL = 1e-9
# largest degree limit_joint enumerates before giving up on tail_tol
MAX_LIMIT_DEGREE = 10_000_000


@dataclass(frozen=True)
class JointPmf:
    """Sparse joint law over degree pairs, entries sorted by ``(k, l)``.

    ``counts``/``total`` are set when the masses are exact ratios of directed
    edge counts.
    """

    k: np.ndarray = field(repr=False)
    l: np.ndarray = field(repr=False)
    p: np.ndarray = field(repr=False)
    counts: np.ndarray | None = field(default=None, repr=False)
    total: int | None = None

    def __post_init__(self):
        k = np.asarray(self.k, dtype=np.int64)
        l = np.asarray(self.l, dtype=np.int64)
        p = np.asarray(self.p, dtype=float)
        order = np.lexsort((l, k))
        fields = {"k": k[order], "l": l[order], "p": p[order]}
        if self.counts is not None:
            fields["counts"] = np.asarray(self.counts, dtype=np.int64)[order]
        for name, arr in fields.items():
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_counts(cls, k, l, counts, total: int) -> "JointPmf":
        counts = np.asarray(counts, dtype=np.int64)
        return cls(k, l, counts / total, counts=counts, total=int(total))

    def __len__(self):
        return int(self.k.size)

    def mass(self, k: int, l: int) -> float:
        hit = np.flatnonzero((self.k == k) & (self.l == l))
        return float(self.p[hit[0]]) if hit.size else 0.0

    def as_dict(self) -> dict[tuple[int, int], float]:
        return {(a, b): c for a, b, c in zip(self.k.tolist(), self.l.tolist(), self.p.tolist())}

    def count_dict(self) -> dict[tuple[int, int], int]:
        if self.counts is None:
            raise ValueError("this joint law carries no integer counts")
        return dict(zip(zip(self.k.tolist(), self.l.tolist()), self.counts.tolist()))

    def total_mass(self) -> float:
        return math.fsum(self.p)

    def marginal(self, axis: int = 0) -> np.ndarray:
        """Dense marginal masses indexed by degree (``axis=0``: first coordinate)."""
        idx = self.k if axis == 0 else self.l
        if idx.size == 0:
            return np.zeros(1)
        return np.bincount(idx, weights=self.p)

    def asymmetry(self) -> float:
        """``max |h(k, l) - h(l, k)|``."""
        d = self.as_dict()
        return max((abs(v - d.get((b, a), 0.0)) for (a, b), v in d.items()), default=0.0)


@dataclass(frozen=True)
class RankedEdgeView:
    """Directed edges with their degrees, tie-breakers and descending ranks."""

    source_degree: np.ndarray
    target_degree: np.ndarray
    U: np.ndarray
    W: np.ndarray
    R_source: np.ndarray
    R_target: np.ndarray


def _directed_degrees(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    d = g.degrees.degrees
    a = d[g.edges[:, 0]]
    b = d[g.edges[:, 1]]
    return np.concatenate((a, b)), np.concatenate((b, a))


def mathcal_F(cdf, k):
    """``F(k) + F(k - 1)``; ``cdf`` is a :class:`Pmf` or a vectorized callable."""
    fn = cdf.cdf if isinstance(cdf, Pmf) else cdf
    k = np.asarray(k)
    out = fn(k) + fn(k - 1)
    return float(out) if np.ndim(out) == 0 else out


def _descending_ranks(deg: np.ndarray, tie: np.ndarray) -> np.ndarray:
    # R(e) = #{e' : D' + U' >= D + U}; the r-th smallest key has rank L + 1 - r
    L = deg.size
    # sort by tie-breaker, then stably by degree: same order as lexsort((tie, deg)), faster
    order = np.argsort(tie)
    order = order[np.argsort(deg[order], kind="stable")]
    ranks = np.empty(L, dtype=np.int64)
    ranks[order] = np.arange(L, 0, -1, dtype=np.int64)
    return ranks


def ranked_edges(g: Graph, seed) -> RankedEdgeView:
    rng = np.random.default_rng(seed)
    src, tgt = _directed_degrees(g)
    U = rng.random(src.size)
    W = rng.random(src.size)
    return RankedEdgeView(src, tgt, U, W, _descending_ranks(src, U), _descending_ranks(tgt, W))


def _exact_dot(a: np.ndarray, b: np.ndarray) -> int:
    # chunked so that every int64 partial sum stays below 2**62
    bound = max(int(np.abs(a).max(initial=1)) * int(np.abs(b).max(initial=1)), 1)
    chunk = max(1, (1 << 62) // bound)
    return sum(int(np.dot(a[i : i + chunk], b[i : i + chunk])) for i in range(0, a.size, chunk))


def spearman_full(g: Graph, seed) -> float:
    """Spearman's rho from uniformly tie-broken ranks of both edge ends.

    ``(12 sum R_* R^* - 3 L (L+1)^2) / (L^3 - L)``, evaluated exactly in integers.
    """
    L = g.degrees.L
    if L < 2:
        raise ValueError("spearman_full needs at least two directed edges")
    view = ranked_edges(g, seed)
    a = 2 * view.R_source - (L + 1)
    b = 2 * view.R_target - (L + 1)
    # 12 sum (R - m)(R' - m) with m = (L + 1) / 2 equals 3 sum a b
    return 3 * _exact_dot(a, b) / (L**3 - L)


def size_biased_F(ds: DegreeSequence) -> np.ndarray:
    """``F_n*(k) + F_n*(k-1)`` for ``k = 0..max degree``."""
    _, fn_star = empirical(ds)
    return mathcal_F(fn_star, np.arange(ds.max_degree + 1))


def spearman_tilde(g: Graph) -> float:
    """``(3 / L_n) sum_{i->j} F_n*(D_i) F_n*(D_j) - 3`` with the graph's own ``F_n*``."""
    return 3.0 * objective(g, size_biased_F(g.degrees)) - 3.0


def empirical_joint(g: Graph) -> JointPmf:
    """Directed-edge degree pair frequencies ``h_n``."""
    L = g.degrees.L
    if L < 1:
        raise ValueError("empirical_joint needs at least one edge")
    src, tgt = _directed_degrees(g)
    base = g.degrees.max_degree + 1
    codes, counts = np.unique(src * base + tgt, return_counts=True)
    return JointPmf.from_counts(codes // base, codes % base, counts, L)


def _sweep(top: np.ndarray, bottom: np.ndarray, lo, hi):
    """Overlaps of top intervals ``[top[l-1], top[l]]`` with bottom ``[bottom[k], bottom[k-1]]``.

    ``top`` is nondecreasing, ``bottom`` nonincreasing, both indexed from 0 with
    the conventions ``top[-1] = lo`` and ``bottom[-1] = hi``.  Returns
    ``(k, l, length)`` for every positive-length overlap inside ``[lo, hi]``.
    """
    pts = np.concatenate((top, bottom, [lo, hi]))
    pts = np.unique(pts[(pts >= lo) & (pts <= hi)])
    start, stop = pts[:-1], pts[1:]
    length = stop - start
    keep = length > 0
    start, length = start[keep], length[keep]
    l = np.searchsorted(top, start, side="right")
    k = np.searchsorted(-bottom, -start, side="left")
    return k, l, length


def predicted_joint(ds: DegreeSequence) -> JointPmf:
    """Joint degree law of the greedy construction, in integer stub arithmetic.

    The number of directed edges from degree ``k`` to degree ``l`` is the overlap
    of ``[sum_{t>k} t N_t, sum_{t>=k} t N_t]`` with ``[sum_{t<l} t N_t, sum_{t<=l} t N_t]``.
    """
    L = ds.L
    if L < 2:
        raise ValueError("predicted_joint needs L_n >= 2")
    csum = np.cumsum(ds.stub_counts)
    k, l, length = _sweep(csum, L - csum, 0, L)
    return JointPmf.from_counts(k, l, length.astype(np.int64), L)


def _limit_degree(f_star: Pmf, tail_tol: float) -> int:
    if f_star.support_max is not None:
        return f_star.support_max
    try:
        return f_star.first_sf_at_most(tail_tol / 2.0, cap=MAX_LIMIT_DEGREE)
    except ValueError as exc:
        raise ValueError(
            f"tail_tol={tail_tol} needs degrees beyond {MAX_LIMIT_DEGREE}; "
            "the size-biased tail is too heavy"
        ) from exc


def _limit_sweep(f_star: Pmf, K: int):
    F = f_star.cdf(np.arange(K + 1))
    x0 = 1.0 - F[K]
    return _sweep(F, 1.0 - F, x0, 1.0 - x0)


def limit_joint(f_star: Pmf, tail_tol: float = DEFAULT_TAIL_TOL) -> JointPmf:
    """Limiting joint law ``h(k, l) = psi(k, l) E(k, l)`` for the size-biased law ``f_star``.

    Overlaps of zero length (boundary equalities) get no mass.  Degrees are
    enumerated up to the first ``K`` whose two omitted tails together carry at
    most ``tail_tol``.
    """
    if not 0.0 < tail_tol < 1.0:
        raise ValueError("tail_tol must lie in (0, 1)")
    if f_star.prob(0) != 0.0:
        raise ValueError("a size-biased law has no mass at 0")
    K = _limit_degree(f_star, tail_tol)
    k, l, length = _limit_sweep(f_star, K)
    return JointPmf(k, l, length)


def rho_of_joint(h: JointPmf, marginal_cdf) -> float:
    """``3 E[F(X) F(Y)] - 3`` for ``(X, Y) ~ h`` with ``F`` the marginal cdf."""
    fk = mathcal_F(marginal_cdf, h.k)
    fl = mathcal_F(marginal_cdf, h.l)
    return 3.0 * math.fsum(fk * fl * h.p) - 3.0


def rho_min(f_star: Pmf, tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """Smallest attainable limiting Spearman's rho for size-biased law ``f_star``."""
    return rho_min_with_bound(f_star, tail_tol)[0]


def rho_min_with_bound(f_star: Pmf, tail_tol: float = DEFAULT_TAIL_TOL) -> tuple[float, float]:
    """``rho_min`` and a bound on its truncation error.

    For unbounded support the sum is split at the first ``K`` beyond which every
    degree only meets the smallest degree ``a`` of the support.  That remainder
    telescopes to ``2 F(a) (1 - F*(K)^2)`` and is added in closed form, so the
    result is exact up to rounding.  If no such ``K`` is found below
    ``MAX_LIMIT_DEGREE`` the truncated :func:`limit_joint` value is returned with
    error bound ``12 * tail_tol``.
    """
    if f_star.support_max is not None:
        return rho_of_joint(limit_joint(f_star, tail_tol), f_star), 0.0
    a = f_star.first_cdf_above(0.0)
    fa = f_star.cdf(a)
    try:
        K = max(f_star.first_sf_at_most(fa, cap=MAX_LIMIT_DEGREE), a)
    except ValueError:
        return rho_of_joint(limit_joint(f_star, tail_tol), f_star), 12.0 * tail_tol
    k, l, length = _limit_sweep(f_star, K)
    F = f_star.cdf(np.arange(K + 1))
    calF = F + np.concatenate(([0.0], F[:-1]))
    body = math.fsum(calF[k] * calF[l] * length)
    sfK = f_star.sf(K)
    spokes = 2.0 * float(calF[a]) * sfK * (1.0 + float(F[K]))
    return float(3.0 * (body + spokes) - 3.0), 0.0


def joint_l1(a: JointPmf, b: JointPmf) -> float:
    """``sum_{k,l} |a(k,l) - b(k,l)|`` over the union of supports."""
    if len(a) > len(b):
        a, b = b, a
    base = int(max(a.l.max(initial=0), b.l.max(initial=0))) + 1
    # entries are sorted by (k, l), hence by code
    ca = a.k * base + a.l
    cb = b.k * base + b.l
    pos = np.minimum(np.searchsorted(cb, ca), max(cb.size - 1, 0))
    hit = (cb[pos] == ca) if cb.size else np.zeros(ca.size, dtype=bool)
    bp = b.p[pos[hit]]
    # start from sum |b|, then swap |b| for |a - b| on shared keys
    parts = [np.abs(b.p), np.abs(a.p[hit] - bp), -np.abs(bp), np.abs(a.p[~hit])]
    return math.fsum(np.concatenate(parts))


def marginal_pmf(h: JointPmf) -> TablePmf:
    return TablePmf(h.marginal(0))


# ---------------------------------------------------------------------------
# joint CSV: header "k,l,p", rows sorted by (k, l)


def write_joint_csv(path, h: JointPmf) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "l", "p"])
        for a, b, c in zip(h.k.tolist(), h.l.tolist(), h.p.tolist()):
            w.writerow([a, b, f"{c:.17g}"])


def read_joint_csv(path) -> JointPmf:
    with open(Path(path), newline="") as fh:
        rows = list(csv.DictReader(fh))
    return JointPmf(
        [int(r["k"]) for r in rows], [int(r["l"]) for r in rows], [float(r["p"]) for r in rows]
    )
