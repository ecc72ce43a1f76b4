"""File formats: edge lists, seed tables, feature/label exports.

All writers are atomic (temp file + rename in the target directory) and
timestamp-free; floats are serialized with repr so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import tempfile
from typing import Any, Iterable, Sequence

import numpy as np

from netpu.features import FEATURE_COLUMNS

FEATURE_HEADER = ("gene",) + FEATURE_COLUMNS + ("label",)
LABEL_HEADER = ("gene", "label", "g_inf", "rank")


def fmt(x: float) -> str:
    """Shortest round-trip decimal form of a float."""
    return repr(float(x))


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: str, obj: Any) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def read_edge_tsv(path: str) -> list[tuple[str, str]]:
    """Two tab-separated name columns per line; '#' lines and blanks skipped."""
    edges: list[tuple[str, str]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2 or not parts[0] or not parts[1]:
                raise ValueError(f"{path}:{lineno}: expected two tab-separated names")
            edges.append((parts[0], parts[1]))
    return edges


def read_biogrid_tab3(path: str, organism: str = "9606") -> list[tuple[str, str]]:
    """Official-symbol edges for one organism from a BioGRID tab3 export."""
    sym_a = "Official Symbol Interactor A"
    sym_b = "Official Symbol Interactor B"
    org_a = "Organism ID Interactor A"
    org_b = "Organism ID Interactor B"
    edges: list[tuple[str, str]] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter="\t")
        if reader.fieldnames is None or sym_a not in reader.fieldnames:
            raise ValueError(f"{path}: not a tab3 file (missing '{sym_a}' column)")
        for row in reader:
            if row[org_a] != organism or row[org_b] != organism:
                continue
            a, b = row[sym_a], row[sym_b]
            if not a or not b or a == "-" or b == "-":
                continue
            edges.append((a, b))
    return edges


def write_features_tsv(path: str, names: Sequence[str], values: np.ndarray,
                       labels: Sequence[str]) -> None:
    """One row per node: gene, the four feature columns, and its label.

    ``values`` may be the normalized or the raw matrix; the caller picks.
    Nodes without a known label carry "-".
    """
    lines = ["\t".join(FEATURE_HEADER)]
    for i, name in enumerate(names):
        cols = [name] + [fmt(v) for v in values[i]] + [labels[i]]
        lines.append("\t".join(cols))
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_features_tsv(path: str) -> tuple[list[str], np.ndarray, list[str]]:
    """Inverse of write_features_tsv; validates the header by column name."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        for want, got in zip(FEATURE_HEADER, header + [""] * len(FEATURE_HEADER)):
            if want != got:
                raise ValueError(f"{path}: expected column '{want}', found '{got}'")
        names: list[str] = []
        rows: list[list[float]] = []
        labels: list[str] = []
        for lineno, line in enumerate(fh, 2):
            parts = line.rstrip("\n").split("\t")
            if len(parts) != len(FEATURE_HEADER):
                raise ValueError(f"{path}:{lineno}: expected {len(FEATURE_HEADER)} columns")
            names.append(parts[0])
            try:
                rows.append([float(p) for p in parts[1:-1]])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric feature value") from None
            labels.append(parts[-1])
    return names, np.array(rows, dtype=np.float64), labels


def write_labels_tsv(path: str, names: Sequence[str], label_names: Sequence[str],
                     g_inf: np.ndarray, ranks: np.ndarray) -> None:
    lines = ["\t".join(LABEL_HEADER)]
    for i, name in enumerate(names):
        lines.append(f"{name}\t{label_names[i]}\t{fmt(g_inf[i])}\t{int(ranks[i])}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_labels_tsv(path: str) -> tuple[list[str], list[str], np.ndarray, np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        for want, got in zip(LABEL_HEADER, header + [""] * len(LABEL_HEADER)):
            if want != got:
                raise ValueError(f"{path}: expected column '{want}', found '{got}'")
        names: list[str] = []
        labels: list[str] = []
        scores: list[float] = []
        ranks: list[int] = []
        for lineno, line in enumerate(fh, 2):
            parts = line.rstrip("\n").split("\t")
            if len(parts) != len(LABEL_HEADER):
                raise ValueError(f"{path}:{lineno}: expected {len(LABEL_HEADER)} columns")
            names.append(parts[0])
            labels.append(parts[1])
            try:
                scores.append(float(parts[2]))
                ranks.append(int(parts[3]))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric score or rank") from None
    return names, labels, np.array(scores), np.array(ranks, dtype=np.int64)


def write_f1_curve_csv(path: str, curve: Iterable[Any]) -> None:
    """CSV rows (pct, precision, recall, F1) for plotting."""
    lines = ["pct,precision,recall,f1"]
    for pt in curve:
        lines.append(f"{fmt(pt.pct)},{fmt(pt.precision)},{fmt(pt.recall)},{fmt(pt.f1)}")
    atomic_write_text(path, "\n".join(lines) + "\n")
