"""Property-based checks of the structural invariants."""

import math

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from disassort import DegreeSequence, build, configuration_model, delta_transform, pmf_from_table
from disassort.dga import is_simple, objective
from disassort.oracle import min_pairing_bruteforce
from disassort.rankcorr import (
    JointPmf,
    empirical_joint,
    limit_joint,
    predicted_joint,
    rho_of_joint,
    size_biased_F,
    spearman_full,
    spearman_tilde,
)

SETTINGS = settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def pmfs(draw, min_k=0, max_k=30):
    size = draw(st.integers(1, 12))
    ks = draw(st.lists(st.integers(min_k, max_k), min_size=size, max_size=size, unique=True))
    w = draw(st.lists(st.floats(1e-6, 1.0), min_size=size, max_size=size))
    total = math.fsum(w)
    return pmf_from_table(sorted(zip(ks, [x / total for x in w])))


@st.composite
def degree_sequences(draw, max_n=40, max_d=12):
    d = draw(st.lists(st.integers(0, max_d), min_size=1, max_size=max_n))
    if sum(d) % 2:
        d[-1] += 1
    if sum(d) == 0:
        d[0] = 2
    return DegreeSequence(d)


@SETTINGS
@given(pmfs())
def test_telescoping(f):
    k = np.arange(f.support_max + 1)
    assert abs(math.fsum(f.prob(k) * (f.cdf(k) + f.cdf(k - 1))) - 1) <= 1e-12


@SETTINGS
@given(pmfs(min_k=1), st.floats(1e-6, 1 - 1e-6))
def test_delta_transform_normalized_and_tail(f, delta):
    fd = delta_transform(f, delta)
    kmax = max(fd.m, f.support_max) + 3
    assert abs(math.fsum(fd.table(kmax)) - 1) <= 1e-12
    k = np.arange(fd.m + 1, kmax + 1)
    assert np.array_equal(fd.prob(k), f.prob(k))
    assert fd.prob(1) == delta


@SETTINGS
@given(pmfs(min_k=1))
def test_limit_joint_symmetric_with_marginals(fs):
    h = limit_joint(fs)
    assert h.asymmetry() <= 1e-12
    m = h.marginal(0)
    k = np.arange(m.size)
    assert np.max(np.abs(m - fs.prob(k))) <= 1e-12
    assert np.all(h.p > 0)


@SETTINGS
@given(pmfs(min_k=1))
def test_independence_null(fs):
    k = np.arange(1, fs.support_max + 1)
    p = fs.prob(k)
    kk, ll = np.meshgrid(k, k, indexing="ij")
    assert abs(rho_of_joint(JointPmf(kk.ravel(), ll.ravel(), np.outer(p, p).ravel()), fs)) <= 1e-12


@SETTINGS
@given(degree_sequences(), st.integers(0, 2**32))
def test_joint_law_exactness(ds, seed):
    g = build(ds, seed)
    assert empirical_joint(g).count_dict() == predicted_joint(ds).count_dict()


@SETTINGS
@given(degree_sequences(), st.integers(0, 2**32))
def test_build_invariants(ds, seed):
    g = build(ds, seed)
    g.check()
    st_edges = g.star_edges()
    assert not np.any(st_edges[:, 0] == st_edges[:, 1])
    assert np.array_equal(build(ds, seed + 1).star_edges(), st_edges)
    rep = is_simple(g)
    assert rep.overall_simple == (rep.self_loop_count == 0 and rep.parallel_edge_count == 0)


@SETTINGS
@given(degree_sequences(), st.integers(0, 2**32))
def test_ranges_and_dominance(ds, seed):
    g = build(ds, seed)
    alt, _ = configuration_model(ds, seed)
    t = spearman_tilde(g)
    assert -1 - 1e-9 <= t <= 1 + 1e-9
    assert t <= spearman_tilde(alt) + 1e-12
    if ds.L >= 2:
        assert -1 - 1e-9 <= spearman_full(g, seed) <= 1 + 1e-9


@settings(max_examples=60, deadline=None)
@given(degree_sequences(max_n=6, max_d=5).filter(lambda d: d.L <= 10))
def test_oracle_agreement(ds):
    w = size_biased_F(ds)
    assert abs(min_pairing_bruteforce(ds, w).objective - objective(build(ds), w)) <= 1e-12
