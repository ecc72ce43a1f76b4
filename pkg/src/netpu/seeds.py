"""Scored seed-gene sets: ingestion onto graph ids and fold masking."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from netpu.graph import Graph


@dataclass(frozen=True)
class SeedSet:
    """Seed node ids with strictly positive association scores.

    ``ids`` is sorted ascending and aligned with ``scores``.
    """

    ids: np.ndarray
    scores: np.ndarray

    def __post_init__(self):
        if len(self.ids) == 0:
            raise ValueError("seed set is empty")
        if len(self.ids) != len(self.scores):
            raise ValueError("ids and scores length mismatch")
        if not (self.scores > 0).all():
            raise ValueError("association scores must be strictly positive")
        if not (np.diff(self.ids) > 0).all():
            raise ValueError("seed ids must be sorted and unique")

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def s_min(self) -> float:
        return float(self.scores.min())

    @property
    def s_max(self) -> float:
        return float(self.scores.max())

    def member_mask(self, n: int) -> np.ndarray:
        mask = np.zeros(n, dtype=bool)
        mask[self.ids] = True
        return mask

    def score_vector(self, n: int) -> np.ndarray:
        """Length-n vector with the score on members, 0 elsewhere."""
        v = np.zeros(n)
        v[self.ids] = self.scores
        return v


@dataclass
class SeedReport:
    """What happened while mapping a seed file onto a graph."""

    n_rows: int = 0
    n_mapped: int = 0
    dropped: list[str] = field(default_factory=list)
    duplicates: int = 0


def make_seed_set(ids, scores, n_nodes: int | None = None) -> SeedSet:
    ids = np.asarray(ids, dtype=np.int64)
    scores = np.asarray(scores, dtype=np.float64)
    order = np.argsort(ids)
    ids, scores = ids[order], scores[order]
    if n_nodes is not None and len(ids) and (ids[0] < 0 or ids[-1] >= n_nodes):
        raise ValueError("seed id outside graph")
    return SeedSet(ids, scores)


def load_seeds(path, g: Graph) -> tuple[SeedSet, SeedReport]:
    """Parse a ``gene_name<TAB>score`` TSV and map names onto graph ids.

    Names absent from the graph are dropped with a report entry, not an
    error; a duplicated name keeps its last score. Raises if no seed maps or
    a score fails to parse as a positive number.
    """
    report = SeedReport()
    score_by_id: dict[int, float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise ValueError(f"{path}:{lineno}: expected 'gene<TAB>score'")
            name, raw = parts[0], parts[1]
            try:
                score = float(raw)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric score {raw!r}") from None
            if not np.isfinite(score) or score <= 0:
                raise ValueError(f"{path}:{lineno}: score must be positive, got {raw}")
            report.n_rows += 1
            if name not in g:
                report.dropped.append(name)
                continue
            nid = g.id_of(name)
            if nid in score_by_id:
                report.duplicates += 1
            score_by_id[nid] = score
    if not score_by_id:
        raise ValueError(f"{path}: no seed maps onto the graph")
    report.n_mapped = len(score_by_id)
    ids = np.fromiter(score_by_id.keys(), dtype=np.int64)
    scores = np.fromiter(score_by_id.values(), dtype=np.float64)
    return make_seed_set(ids, scores), report


def fold_sizes(n_members: int, folds: int) -> list[int]:
    # first (n mod folds) folds take the extra element
    base, extra = divmod(n_members, folds)
    return [base + 1 if k < extra else base for k in range(folds)]


def mask_seeds(s: SeedSet, fold: int, folds: int, rng_seed: int) -> tuple[SeedSet, np.ndarray]:
    """Split members into ``folds`` disjoint blocks and hold out block ``fold``.

    The shuffle is a deterministic function of ``rng_seed``, so the blocks
    across fold indices partition the member set exactly.
    """
    if folds < 2:
        raise ValueError(f"folds must be >= 2, got {folds}")
    if not (0 <= fold < folds):
        raise ValueError(f"fold {fold} out of range for {folds} folds")
    if folds > len(s):
        raise ValueError(f"cannot split {len(s)} seeds into {folds} folds")
    rng = np.random.default_rng(rng_seed)
    perm = rng.permutation(len(s))
    sizes = fold_sizes(len(s), folds)
    start = sum(sizes[:fold])
    held_pos = perm[start : start + sizes[fold]]
    held_ids = np.sort(s.ids[held_pos])
    keep = np.ones(len(s), dtype=bool)
    keep[held_pos] = False
    if not keep.any():
        raise ValueError("masking removed every seed")
    return SeedSet(s.ids[keep], s.scores[keep]), held_ids
