"""Brute-force optimality checks for tiny degree sequences.

Enumerates every perfect matching of the stubs (self-loops and multi-edges
allowed), which is the relaxation over which the greedy pairing is optimal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .degseq import DegreeSequence

MAX_ORACLE_STUBS = 14


@dataclass(frozen=True)
class Pairing:
    """Stub matching as node pairs, with its objective value."""

    matching: tuple[tuple[int, int], ...]
    objective: float


def reversal_value(a) -> float:
    """``sum_k a_k a_{m-k+1}`` for ascending ``a``: the minimum over all permutations."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        raise ValueError("reversal_value needs a non-empty sequence")
    if np.any(np.diff(a) < 0):
        raise ValueError("reversal_value needs an ascending sequence")
    return float(np.dot(a, a[::-1]))


def iter_matchings(items: list):
    """Yield every perfect matching of ``items`` once (lowest unmatched item first)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for i in range(len(rest)):
        partner = rest[i]
        remaining = rest[:i] + rest[i + 1 :]
        for tail in iter_matchings(remaining):
            yield [(first, partner)] + tail


def min_pairing_bruteforce(ds: DegreeSequence, weights) -> Pairing:
    """Minimize ``(1 / L_n) sum_{i->j} w(D_i) w(D_j)`` over all stub matchings.

    ``weights`` is indexed by degree.
    """
    L = ds.L
    if L > MAX_ORACLE_STUBS:
        raise ValueError(f"oracle limited to L_n <= {MAX_ORACLE_STUBS}, got {L}")
    if L == 0:
        raise ValueError("no stubs to match")
    w = np.asarray(weights, dtype=float)
    deg = ds.degrees
    stubs = np.repeat(np.arange(ds.n), deg).tolist()
    stub_w = [float(w[deg[v]]) for v in stubs]

    best_val = np.inf
    best = None
    for matching in iter_matchings(list(range(L))):
        val = sum(stub_w[a] * stub_w[b] for a, b in matching)
        if val < best_val:
            best_val, best = val, matching
    pairs = tuple((stubs[a], stubs[b]) for a, b in best)
    return Pairing(pairs, 2.0 * best_val / L)


def stub_weight_sequence(ds: DegreeSequence, weights) -> np.ndarray:
    """Per-stub weights ``w(D)`` with stubs ordered by ascending degree."""
    w = np.asarray(weights, dtype=float)
    return np.repeat(w[np.sort(ds.degrees)], np.sort(ds.degrees))


def exhaustive_family(max_n: int = 5, max_degree: int = 4, max_stubs: int = 10):
    """Every node-labelled degree sequence with n <= max_n and even sum in 1..max_stubs."""
    for n in range(1, max_n + 1):
        for seq in itertools.product(range(max_degree + 1), repeat=n):
            s = sum(seq)
            if s % 2 == 0 and 0 < s <= max_stubs:
                yield seq
