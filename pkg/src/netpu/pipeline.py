"""End-to-end run: features -> similarity -> propagation -> labels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from netpu import features, labeling
from netpu.config import PipelineConfig
from netpu.graph import Graph
from netpu.seeds import SeedSet


@dataclass(frozen=True)
class PipelineResult:
    feature_matrix: features.FeatureMatrix
    similarity: labeling.SparseSimilarity
    rn_ids: np.ndarray
    state: labeling.PropagationState
    assignment: labeling.LabelAssignment

    @property
    def labels(self) -> np.ndarray:
        return self.assignment.labels


def run_labeling(g: Graph, seeds: SeedSet, cfg: PipelineConfig | None = None) -> PipelineResult:
    """Compute the four features and relabel every node.

    Raises labeling.PropagationError if the Markov process does not settle
    within cfg.max_iter iterations.
    """
    if cfg is None:
        cfg = PipelineConfig()
    fm = features.assemble_features(
        g, seeds, t=cfg.t, alpha_ns=cfg.alpha_ns, alpha_nr=cfg.alpha_nr,
        transforms=cfg.log_transform, threads=cfg.threads)
    thr = labeling.pairwise_similarity_threshold(
        fm.values, cfg.quantile_level, rng_seed=cfg.rng_seed)
    sim = labeling.build_similarity(fm.values, thr)
    rn_ids = labeling.select_rn(fm.values, seeds, cfg.rn_count)
    g0 = labeling.initial_state(g.n_nodes, seeds.ids, rn_ids)
    state = labeling.propagate(sim, g0, alpha=cfg.alpha_restart,
                               max_iter=cfg.max_iter, tol=cfg.tol)
    assignment = labeling.assign_labels(state, seeds.ids, rn_ids, split=cfg.split)
    return PipelineResult(fm, sim, rn_ids, state, assignment)


def discovery_ranking(result: PipelineResult, curated_ids: np.ndarray) -> np.ndarray:
    """All nodes except the curated seeds, by final score descending.

    Ties break toward the smaller node id. This is the candidate ordering
    consumed by the discovery evaluation.
    """
    n = len(result.state.g_inf)
    keep = np.ones(n, dtype=bool)
    keep[np.asarray(curated_ids, dtype=np.int64)] = False
    cand = np.flatnonzero(keep)
    order = np.lexsort((cand, -result.state.g_inf[cand]))
    return cand[order]
