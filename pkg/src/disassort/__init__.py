"""Maximally disassortative graphs with a prescribed degree distribution.

Degree laws and their transforms live in :mod:`.distributions`, degree
sequences in :mod:`.degseq`, the greedy construction in :mod:`.dga`, rank
correlations and joint degree laws in :mod:`.rankcorr`, brute-force checks in
:mod:`.oracle` and seeded experiments in :mod:`.experiment`.
"""

from .degseq import DegreeSequence, assumption_gap, compute_zn, empirical, sample_iid
from .dga import Graph, SimplicityError, build, configuration_model, is_simple, s_metric
from .distributions import (
    Pmf,
    cubic_bound,
    degenerate,
    delta_transform,
    pareto_floor,
    pmf_from_table,
    poisson,
    rho_transform,
    size_biased,
)
from .rankcorr import (
    JointPmf,
    empirical_joint,
    limit_joint,
    predicted_joint,
    rho_min,
    rho_of_joint,
    spearman_full,
    spearman_tilde,
)

__version__ = "0.1.0"
