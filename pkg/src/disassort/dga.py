"""Disassortative graph construction by greedy extremal stub pairing.

Stubs of high-degree nodes (degree >= z_n, descending) are laid out against
stubs of low-degree nodes (degree <= z_n, ascending, equal degrees
interleaved round-robin) and paired position by position until both sides of a
pair have degree exactly z_n.  The remaining degree-z_n stubs are joined by the
configuration model.

Nodes are 0-based here; the edge-list file format is 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .degseq import DegreeSequence, compute_zn

STAR = 0
RESIDUAL = 1


class SimplicityError(RuntimeError):
    """A simple graph was requested but could not be produced."""


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph as a flat edge list.

    ``edges[e] = (i, j)`` with ``i <= j``; ``block[e]`` is :data:`STAR` for
    edges from the greedy phase and :data:`RESIDUAL` for configuration-model
    edges.
    """

    degrees: DegreeSequence
    edges: np.ndarray = field(repr=False)
    block: np.ndarray = field(repr=False)
    z_n: int | None = None

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        e = np.sort(e, axis=1)
        b = np.asarray(self.block, dtype=np.int8).reshape(-1)
        if b.size != e.shape[0]:
            raise ValueError("one block tag per edge required")
        e.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "block", b)

    @property
    def n(self) -> int:
        return self.degrees.n

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    def star_edges(self) -> np.ndarray:
        return self.edges[self.block == STAR]

    def residual_edges(self) -> np.ndarray:
        return self.edges[self.block == RESIDUAL]

    def degree_counts(self) -> np.ndarray:
        """Incident stub count per node computed from the edges (self-loops count twice)."""
        return np.bincount(self.edges.ravel(), minlength=self.n)

    def check(self) -> None:
        if 2 * self.m != self.degrees.L:
            raise AssertionError("edge count does not match L_n / 2")
        if not np.array_equal(self.degree_counts(), self.degrees.degrees):
            raise AssertionError("edge endpoints do not reproduce the degree sequence")


@dataclass(frozen=True)
class SimplicityReport:
    star_simple: bool
    residual_simple: bool
    overall_simple: bool
    self_loop_count: int
    parallel_edge_count: int


def _defects(edges: np.ndarray, n: int) -> tuple[int, int]:
    if edges.shape[0] == 0:
        return 0, 0
    loops = int(np.count_nonzero(edges[:, 0] == edges[:, 1]))
    code = edges[:, 0] * np.int64(n) + edges[:, 1]
    parallel = int(code.size - np.unique(code).size)
    return loops, parallel


def is_simple(g: Graph) -> SimplicityReport:
    loops, parallel = _defects(g.edges, g.n)
    star = _defects(g.star_edges(), g.n)
    resid = _defects(g.residual_edges(), g.n)
    return SimplicityReport(
        star_simple=star == (0, 0),
        residual_simple=resid == (0, 0),
        overall_simple=loops == 0 and parallel == 0,
        self_loop_count=loops,
        parallel_edge_count=parallel,
    )


def s_metric(g: Graph) -> int:
    """``sum_{edges i-j} D_i D_j``."""
    d = g.degrees.degrees
    return int(np.dot(d[g.edges[:, 0]], d[g.edges[:, 1]]))


def _stub_list(deg: np.ndarray) -> np.ndarray:
    return np.repeat(np.arange(deg.size, dtype=np.int64), deg)


def _random_matching(stubs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    return rng.permutation(stubs).reshape(-1, 2)


def configuration_model(
    ds: DegreeSequence, seed, max_retries: int = 0
) -> tuple[Graph, SimplicityReport]:
    """Uniform random stub matching, resampled up to ``max_retries`` times until simple.

    The last attempt is returned together with its report whether or not it is simple.
    """
    rng = np.random.default_rng(seed)
    stubs = _stub_list(ds.degrees)
    for _ in range(max_retries + 1):
        edges = _random_matching(stubs, rng)
        g = Graph(ds, edges, np.full(edges.shape[0], RESIDUAL, dtype=np.int8))
        report = is_simple(g)
        if report.overall_simple:
            break
    return g, report


def _low_side(deg: np.ndarray, z: int) -> np.ndarray:
    """Stubs of nodes with degree <= z, ascending degree, equal degrees round-robin."""
    blocks = []
    for k in range(1, z + 1):
        nodes = np.flatnonzero(deg == k)
        if nodes.size:
            blocks.append(np.tile(nodes, k))
    return np.concatenate(blocks) if blocks else np.empty(0, dtype=np.int64)


def _high_side(deg: np.ndarray, z: int) -> np.ndarray:
    """Stubs of nodes with degree >= z, descending degree, ties by ascending index."""
    nodes = np.flatnonzero(deg >= z)
    order = nodes[np.lexsort((nodes, -deg[nodes]))]
    return np.repeat(order, deg[order])


def star_pairing(ds: DegreeSequence) -> tuple[np.ndarray, np.ndarray, int]:
    """Deterministic greedy phase.

    Returns the STAR edges, the residual degree of every node and ``z_n``.
    """
    deg = ds.degrees
    z = compute_zn(ds)
    S = _high_side(deg, z)
    T = _low_side(deg, z)
    span = min(S.size, T.size)
    both_z = (deg[S[:span]] == z) & (deg[T[:span]] == z)
    stop = int(np.argmax(both_z)) if both_z.any() else span
    star = np.column_stack((S[:stop], T[:stop]))
    used = np.bincount(star.ravel(), minlength=ds.n)
    residual = deg - used
    if np.any(residual < 0) or np.any(deg[residual > 0] != z):
        raise AssertionError("greedy phase left stubs outside degree z_n")
    return star, residual, z


def build(
    ds: DegreeSequence, seed=None, require_simple: bool = False, max_retries: int = 100
) -> Graph:
    """Maximally disassortative multigraph on ``ds``.

    With ``require_simple`` the random residual matching is redrawn up to
    ``max_retries`` times; the greedy block is deterministic, so a non-simple
    greedy block fails immediately.

    Raises
    ------
    SimplicityError
        If a simple graph was required but not obtained.
    """
    if ds.L == 0:
        raise ValueError("build needs at least one nonzero degree")
    star, residual, z = star_pairing(ds)
    rng = np.random.default_rng(seed)
    resid_stubs = _stub_list(residual)
    tags_star = np.full(star.shape[0], STAR, dtype=np.int8)
    tags_res = np.full(resid_stubs.size // 2, RESIDUAL, dtype=np.int8)
    tags = np.concatenate((tags_star, tags_res))

    attempts = max_retries + 1 if require_simple else 1
    for _ in range(attempts):
        res_edges = _random_matching(resid_stubs, rng)
        g = Graph(ds, np.concatenate((star, res_edges)), tags, z_n=z)
        if not require_simple:
            return g
        report = is_simple(g)
        if not report.star_simple:
            raise SimplicityError("greedy block is not simple; resampling cannot fix it")
        if report.overall_simple:
            return g
    raise SimplicityError(f"no simple residual matching after {max_retries} retries")


def objective(g: Graph, weights) -> float:
    """``(1 / L_n) sum_{i->j} w(D_i) w(D_j)`` over both orientations of every edge."""
    w = np.asarray(weights, dtype=float)
    d = g.degrees.degrees
    prod = w[d[g.edges[:, 0]]] * w[d[g.edges[:, 1]]]
    return 2.0 * float(np.sum(prod)) / g.degrees.L


# ---------------------------------------------------------------------------
# edge-list files: "# n=<n> m=<m>" header, then "i j" per line, 1-based, i <= j


def write_edge_list(path, g: Graph) -> None:
    lines = [f"# n={g.n} m={g.m}"]
    lines += [f"{i + 1} {j + 1}" for i, j in g.edges.tolist()]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path, degrees: DegreeSequence | None = None) -> Graph:
    """Read an edge list; node degrees are inferred, or validated against ``degrees``."""
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith("#"):
        raise ValueError(f"{path}: missing '# n=<n> m=<m>' header")
    header = dict(tok.split("=", 1) for tok in text[0][1:].split())
    n, m = int(header["n"]), int(header["m"])
    rows = [line.split() for line in text[1:] if line.strip() and not line.startswith("#")]
    edges = np.array([[int(a) - 1, int(b) - 1] for a, b in rows], dtype=np.int64).reshape(-1, 2)
    if edges.shape[0] != m:
        raise ValueError(f"{path}: header says m={m}, found {edges.shape[0]} edges")
    if edges.size and (edges.min() < 0 or edges.max() >= n):
        raise ValueError(f"{path}: node index out of range 1..{n}")
    counts = np.bincount(edges.ravel(), minlength=n)
    if degrees is None:
        degrees = DegreeSequence(counts)
    elif not np.array_equal(counts, degrees.degrees):
        raise ValueError(f"{path}: edges are inconsistent with the given degrees")
    return Graph(degrees, edges, np.full(m, RESIDUAL, dtype=np.int8))
