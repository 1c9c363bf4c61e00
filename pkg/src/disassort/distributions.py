"""Degree distributions on the non-negative integers.

Every distribution is a :class:`Pmf` exposing vectorized ``prob``, ``cdf`` and
``sf`` (survival, ``1 - cdf``).  Closed-form families evaluate their tails
analytically, so no truncation happens until something is summed or sampled.

Pmfs are immutable once built; derived distributions (size-biased,
delta-transformed, ...) are new objects that may reference their parent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .zeta import hurwitz_zeta, riemann_zeta

TABLE_SUM_TOL = 1e-9

# largest integer a Pareto draw is clipped to; keeps int64 arithmetic safe
_INT_CAP = 2**62


class Pmf:
    """Probability mass function on ``{0, 1, 2, ...}``.

    Subclasses implement ``_prob``, ``_sf`` and ``_isf`` on int64 arrays of
    non-negative arguments; the public methods take care of scalars and of
    negative arguments (``cdf(-1) == 0``).
    """

    #: largest k with positive mass, ``None`` when the support is unbounded
    support_max: int | None = None

    def prob(self, k):
        return self._eval(k, self._prob, 0.0)

    def cdf(self, k):
        return self._eval(k, self._cdf, 0.0)

    def sf(self, k):
        """Survival function ``P(X > k)``."""
        return self._eval(k, self._sf, 1.0)

    def _eval(self, k, fn, below):
        arr = np.asarray(k)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr).astype(np.int64)
        out = np.full(arr.shape, below, dtype=float)
        ok = arr >= 0
        if ok.any():
            out[ok] = fn(arr[ok])
        return float(out[0]) if scalar else out

    def _cdf(self, k):
        return 1.0 - self._sf(k)

    @property
    def mean(self) -> float:
        raise NotImplementedError

    def tail_mean(self, m: int) -> float:
        """``sum_{k > m} k f(k)``."""
        raise NotImplementedError(f"{type(self).__name__} has no tail_mean")

    def _size_biased(self) -> "Pmf":
        raise NotImplementedError(f"size-biasing {type(self).__name__} is not supported")

    def _isf(self, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError(f"{type(self).__name__} cannot be sampled")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Inverse-cdf sampling: returns ``min{k : F(k) >= 1 - V}``, V ~ U(0, 1]."""
        v = 1.0 - rng.random(size)
        return self._isf(v)

    def table(self, kmax: int) -> np.ndarray:
        """Dense array of ``prob(k)`` for ``k = 0..kmax``."""
        return self.prob(np.arange(kmax + 1))

    def first_cdf_above(self, level: float) -> int:
        """Smallest k with ``cdf(k) > level``."""
        if not level < 1.0:
            raise ValueError("level must be < 1")
        hi = 1
        while not self.cdf(hi) > level:
            hi *= 2
            if hi > _INT_CAP:
                raise ValueError(f"cdf never exceeds {level}")
        lo = -1  # cdf(lo) <= level
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.cdf(mid) > level:
                hi = mid
            else:
                lo = mid
        return hi

    def first_sf_at_most(self, level: float, cap: int = _INT_CAP) -> int:
        """Smallest k with ``sf(k) <= level``; raises if beyond ``cap``."""
        if self.support_max is not None:
            cap = min(cap, self.support_max)
        hi = 1
        while not self.sf(hi) <= level:
            if hi >= cap:
                raise ValueError(f"survival function does not reach {level} before k={cap}")
            hi = min(2 * hi, cap)
        lo = -1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.sf(mid) <= level:
                hi = mid
            else:
                lo = mid
        return hi


class TablePmf(Pmf):
    """Finite-support pmf backed by a dense probability array over ``0..K``."""

    def __init__(self, probs, cdf=None, sf=None):
        p = np.array(probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probability table must be a non-empty 1-d array")
        if np.any(p < 0):
            raise ValueError("negative probability in table")
        self._p = p
        self._cdf_arr = np.cumsum(p) if cdf is None else np.asarray(cdf, dtype=float)
        if sf is None:
            # suffix sums keep tail probabilities accurate
            rev = np.cumsum(p[::-1])[::-1]
            sf = np.append(rev[1:], 0.0)
        self._sf_arr = np.asarray(sf, dtype=float)
        for a in (self._p, self._cdf_arr, self._sf_arr):
            a.setflags(write=False)
        nz = np.flatnonzero(p)
        self.support_max = int(nz[-1]) if nz.size else 0

    @classmethod
    def from_counts(cls, counts, total: int | None = None) -> "TablePmf":
        """Exact-ratio pmf ``counts[k] / total`` with cdf from integer prefix sums."""
        c = np.asarray(counts, dtype=np.int64)
        total = int(c.sum()) if total is None else int(total)
        if total <= 0:
            raise ValueError("counts must have a positive total")
        csum = np.cumsum(c)
        return cls(c / total, cdf=csum / total, sf=(total - csum) / total)

    @property
    def probs(self) -> np.ndarray:
        return self._p

    def _prob(self, k):
        out = np.zeros(k.shape)
        inside = k < self._p.size
        out[inside] = self._p[k[inside]]
        return out

    def _cdf(self, k):
        return self._cdf_arr[np.minimum(k, self._p.size - 1)]

    def _sf(self, k):
        return self._sf_arr[np.minimum(k, self._p.size - 1)]

    @cached_property
    def mean(self) -> float:
        return math.fsum(np.arange(self._p.size) * self._p)

    def tail_mean(self, m: int) -> float:
        if m + 1 >= self._p.size:
            return 0.0
        ks = np.arange(m + 1, self._p.size)
        return math.fsum(ks * self._p[m + 1 :])

    def _size_biased(self):
        mu = self.mean
        return TablePmf(np.arange(self._p.size) * self._p / mu)

    def _isf(self, v):
        return np.searchsorted(-self._sf_arr, -v, side="left").astype(np.int64)

    def __repr__(self):
        return f"TablePmf(support_max={self.support_max}, mean={self.mean:.6g})"


class ParetoFloorPmf(Pmf):
    """Law of ``floor(X)`` for a Pareto(scale 1, shape gamma) variable X.

    ``f(k) = k^-gamma - (k+1)^-gamma`` for ``k >= 1`` and ``1 - F(k) = (k+1)^-gamma``.
    """

    def __init__(self, gamma: float):
        if not gamma > 1.0:
            raise ValueError(f"pareto_floor needs gamma > 1, got {gamma}")
        self.gamma = float(gamma)

    def _prob(self, k):
        out = np.zeros(k.shape)
        pos = k >= 1
        kk = k[pos].astype(float)
        # k^-g (1 - (1 + 1/k)^-g) without cancellation for large k
        out[pos] = kk ** (-self.gamma) * -np.expm1(-self.gamma * np.log1p(1.0 / kk))
        return out

    def _sf(self, k):
        return (k.astype(float) + 1.0) ** (-self.gamma)

    def _cdf(self, k):
        return -np.expm1(-self.gamma * np.log1p(k.astype(float)))

    @cached_property
    def mean(self) -> float:
        return riemann_zeta(self.gamma)

    def tail_mean(self, m: int) -> float:
        return float(hurwitz_zeta(self.gamma, m + 2.0) + (m + 1.0) ** (1.0 - self.gamma))

    def _size_biased(self):
        return ParetoSizeBiasedPmf(self.gamma)

    def _isf(self, v):
        x = np.floor(v ** (-1.0 / self.gamma))
        return np.minimum(x, _INT_CAP).astype(np.int64)

    def __repr__(self):
        return f"ParetoFloorPmf(gamma={self.gamma})"


class ParetoSizeBiasedPmf(Pmf):
    """Size-biased law of :class:`ParetoFloorPmf`, ``k f(k) / zeta(gamma)``.

    The survival function is ``(zeta(gamma, k+2) + (k+1)^(1-gamma)) / zeta(gamma)``.
    """

    def __init__(self, gamma: float):
        self.gamma = float(gamma)
        self._base = ParetoFloorPmf(gamma)
        self._zeta = riemann_zeta(self.gamma)

    def _prob(self, k):
        return k * self._base._prob(k) / self._zeta

    def _sf(self, k):
        kf = k.astype(float)
        out = (hurwitz_zeta(self.gamma, kf + 2.0) + (kf + 1.0) ** (1.0 - self.gamma)) / self._zeta
        # no mass at 0
        out[k == 0] = 1.0
        return np.minimum(out, 1.0)

    @cached_property
    def mean(self) -> float:
        if self.gamma <= 2.0:
            return math.inf
        return (2.0 * riemann_zeta(self.gamma - 1.0) - self._zeta) / self._zeta

    def __repr__(self):
        return f"ParetoSizeBiasedPmf(gamma={self.gamma})"


class PoissonPmf(TablePmf):
    """Poisson(lambda), tabulated by forward recursion until the terms underflow."""

    def __init__(self, lam: float):
        if not lam > 0:
            raise ValueError(f"poisson needs lambda > 0, got {lam}")
        if lam > 700:
            raise ValueError("poisson lambda > 700 underflows exp(-lambda)")
        self.lam = float(lam)
        terms = [math.exp(-self.lam)]
        k = 0
        while True:
            k += 1
            nxt = terms[-1] * self.lam / k
            if k > self.lam and nxt < 1e-300:
                break
            terms.append(nxt)
        super().__init__(terms)
        self.support_max = None

    @property
    def mean(self) -> float:
        return self.lam

    def _size_biased(self):
        # k f(k) / lambda = f(k - 1)
        return TablePmf(np.append(0.0, self._p))

    def __repr__(self):
        return f"PoissonPmf(lam={self.lam})"


class HeadTailPmf(Pmf):
    """Explicit head on ``0..m`` glued to ``scale * base`` on ``k > m``.

    The head must carry mass ``1 - scale * base.sf(m)``.  With ``scale == 1``
    tail probabilities are returned from ``base`` untouched (bitwise equal).
    """

    def __init__(self, head, base: Pmf, scale: float = 1.0):
        h = np.array(head, dtype=float)
        if np.any(h < 0):
            raise ValueError("negative probability in head")
        h.setflags(write=False)
        self._head = h
        self.m = h.size - 1
        self.base = base
        self.scale = float(scale)
        self._tail_mass = self.scale * base.sf(self.m)
        self._head_cdf = np.cumsum(h)
        self._head_sf = np.append(np.cumsum(h[::-1])[::-1][1:], 0.0) + self._tail_mass
        self.support_max = None if base.support_max is None else max(self.m, base.support_max)

    @property
    def head(self) -> np.ndarray:
        return self._head

    def _prob(self, k):
        out = np.empty(k.shape)
        inh = k <= self.m
        out[inh] = self._head[k[inh]]
        if (~inh).any():
            tail = self.base._prob(k[~inh])
            out[~inh] = tail if self.scale == 1.0 else self.scale * tail
        return out

    def _sf(self, k):
        out = np.empty(k.shape)
        inh = k < self.m
        out[inh] = self._head_sf[k[inh]]
        if (~inh).any():
            tail = self.base._sf(k[~inh])
            out[~inh] = tail if self.scale == 1.0 else self.scale * tail
        return out

    def _cdf(self, k):
        out = np.empty(k.shape)
        inh = k <= self.m
        out[inh] = self._head_cdf[k[inh]]
        out[~inh] = 1.0 - self._sf(k[~inh])
        return out

    def tail_mean(self, m: int) -> float:
        if m >= self.m:
            return self.scale * self.base.tail_mean(m)
        ks = np.arange(m + 1, self.m + 1)
        return math.fsum(ks * self._head[m + 1 :]) + self.scale * self.base.tail_mean(self.m)

    @cached_property
    def mean(self) -> float:
        return self.tail_mean(0)

    def _size_biased(self):
        mu = self.mean
        head = np.arange(self.m + 1) * self._head / mu
        return HeadTailPmf(head, size_biased(self.base), self.scale * self.base.mean / mu)

    def _isf(self, v):
        out = np.empty(v.shape, dtype=np.int64)
        in_tail = v < self._tail_mass
        if in_tail.any():
            out[in_tail] = np.maximum(self.base._isf(v[in_tail] / self.scale), self.m + 1)
        hv = v[~in_tail]
        out[~in_tail] = np.searchsorted(-self._head_sf, -hv, side="left")
        return out

    def __repr__(self):
        return f"HeadTailPmf(m={self.m}, base={self.base!r}, scale={self.scale:.6g})"


# ---------------------------------------------------------------------------
# constructors and transforms


def pmf_from_table(entries) -> TablePmf:
    """Build a pmf from ``(k, p)`` pairs; renormalizes a sum within 1e-9 of one."""
    entries = list(entries)
    if not entries:
        raise ValueError("empty pmf table")
    ks = [int(k) for k, _ in entries]
    ps = [float(p) for _, p in entries]
    if min(ks) < 0:
        raise ValueError("pmf support must be non-negative")
    if len(set(ks)) != len(ks):
        raise ValueError("duplicate k in pmf table")
    if any(p < 0 or not math.isfinite(p) for p in ps):
        raise ValueError("negative or non-finite probability in pmf table")
    total = math.fsum(ps)
    if abs(total - 1.0) > TABLE_SUM_TOL:
        raise ValueError(f"pmf table sums to {total!r}, not 1")
    dense = np.zeros(max(ks) + 1)
    dense[ks] = ps
    return TablePmf(dense / total)


def degenerate(k: int) -> TablePmf:
    return pmf_from_table([(k, 1.0)])


def pareto_floor(gamma: float) -> ParetoFloorPmf:
    return ParetoFloorPmf(gamma)


def poisson(lam: float) -> PoissonPmf:
    return PoissonPmf(lam)


def mean(pmf: Pmf) -> float:
    return pmf.mean


def size_biased(pmf: Pmf) -> Pmf:
    """``f*(k) = k f(k) / mu``: the degree seen at the end of a random edge."""
    mu = pmf.mean
    if not (0 < mu < math.inf):
        raise ValueError(f"size-biasing needs a finite positive mean, got {mu}")
    return pmf._size_biased()


def cubic_bound(a: float) -> float:
    """Lower bound ``9a^2 - 6a^3 - 3`` on the minimal Spearman's rho when ``f*(1) = a >= 1/2``."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"cubic_bound needs 0 <= a <= 1, got {a}")
    return 9.0 * a * a - 6.0 * a**3 - 3.0


def _k_delta(f: Pmf, delta: float) -> int:
    return f.first_cdf_above(delta)


def delta_transform(f: Pmf, delta: float) -> HeadTailPmf:
    """Move mass so that ``f_delta(1) = delta`` while keeping ``f`` beyond a finite prefix.

    With ``K`` the smallest integer such that ``F(K) > delta`` and
    ``x = F(K) - delta``: if ``K == 1`` the excess goes to ``k = 2``, otherwise
    it is spread evenly over ``2..K``.  Every ``k > K + 1`` keeps ``f(k)``.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if f.prob(0) != 0.0:
        raise ValueError("delta_transform needs a pmf without mass at 0")
    K = _k_delta(f, delta)
    x = f.cdf(K) - delta
    head = np.zeros(K + 2)
    head[1] = delta
    if K == 1:
        head[2] = f.prob(2) + x
    else:
        head[2 : K + 1] = x / (K - 1)
        head[K + 1] = f.prob(K + 1)
    return HeadTailPmf(head, f, 1.0)


@dataclass(frozen=True)
class RhoTransform:
    """Result of :func:`rho_transform`."""

    pmf: HeadTailPmf
    size_biased: HeadTailPmf
    delta: float
    k_delta: int
    mu_rho: float
    target: float


def rho_transform(f: Pmf, rho: float, margin: float = 0.01) -> RhoTransform:
    """Reshape the head of ``f`` so its cubic bound exceeds ``rho``; the tail is kept up to a constant.

    ``delta`` is chosen so that ``cubic_bound(f_rho*(1)) = rho + margin`` where
    ``f_rho*(1) = delta / (2 - delta)`` is the exact size-biased mass at one of
    the constructed pmf.  Tail ratio: ``sf_rho(k) / sf(k) = mu_rho / mu`` for
    ``k > K_delta``.
    """
    if not -1.0 < rho < 0.0:
        raise ValueError(f"rho must lie in (-1, 0), got {rho}")
    if f.prob(0) != 0.0:
        raise ValueError("rho_transform needs a pmf supported on the positive integers")
    target = rho + margin
    if not -3.0 < target < 0.0:
        raise ValueError(f"target bound {target} is not attainable")

    def gap(d):
        return cubic_bound(d / (2.0 - d)) - target

    delta = brentq(gap, 1e-300, 1.0 - 1e-16, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    if not 0.0 < delta < 1.0:
        raise ValueError(f"no feasible delta for rho={rho}")

    mu = f.mean
    fs = size_biased(f)
    fsd = delta_transform(fs, delta)
    K = fsd.m - 1
    m = K + 1
    ts = np.arange(1, m + 1)
    inv = math.fsum(fsd.head[1:] / ts) + f.sf(m) / mu
    mu_rho = 1.0 / inv
    head = np.empty(m + 1)
    head[0] = head[1] = mu_rho * fsd.head[1] / 2.0
    head[2:] = mu_rho * fsd.head[2:] / ts[1:]
    f_rho = HeadTailPmf(head, f, mu_rho / mu)
    return RhoTransform(
        pmf=f_rho,
        size_biased=size_biased(f_rho),
        delta=float(delta),
        k_delta=K,
        mu_rho=mu_rho,
        target=target,
    )


# ---------------------------------------------------------------------------
# pmf text files: one "k p" pair per line, '#' starts a comment


def read_pmf_file(path) -> TablePmf:
    entries = []
    last = -1
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'k p', got {raw!r}")
        k, p = int(parts[0]), float(parts[1])
        if k <= last:
            raise ValueError(f"{path}:{lineno}: k must be strictly increasing")
        last = k
        entries.append((k, p))
    return pmf_from_table(entries)


def write_pmf_file(path, pmf: Pmf, kmax: int | None = None) -> None:
    if kmax is None:
        if pmf.support_max is None:
            raise ValueError("kmax is required for unbounded pmfs")
        kmax = pmf.support_max
    probs = pmf.table(kmax)
    lines = [f"{k} {p:.17g}" for k, p in enumerate(probs) if p > 0]
    Path(path).write_text("\n".join(lines) + "\n")
