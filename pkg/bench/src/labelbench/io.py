"""Readers for the labeling pipeline's exported TSV tables.

The tables are the only coupling to the upstream tool: a feature file with
four numeric columns and a label file with the five-class assignment. Both
are validated column by column so a drifted export fails loudly.
"""

import hashlib

import numpy as np

FEATURE_HEADER = ("gene", "heat", "balanced", "netshort", "netring", "label")
LABEL_HEADER = ("gene", "label", "g_inf", "rank")
CLASS_NAMES = ("P", "LP", "WN", "LN", "RN")


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _check_header(path: str, got: list[str], want: tuple[str, ...]) -> None:
    if len(got) != len(want):
        raise ValueError(f"{path}: schema mismatch: expected {len(want)} columns "
                         f"{list(want)}, found {len(got)}")
    for want_col, got_col in zip(want, got):
        if want_col != got_col:
            raise ValueError(f"{path}: schema mismatch in column '{want_col}': "
                             f"found '{got_col}'")


def read_features_tsv(path: str) -> tuple[list[str], np.ndarray, list[str]]:
    """Node names, (n, 4) feature matrix, and the exported label column."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty file")
    _check_header(path, lines[0].split("\t"), FEATURE_HEADER)
    names: list[str] = []
    rows = []
    labels: list[str] = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != len(FEATURE_HEADER):
            raise ValueError(f"{path}:{lineno}: expected {len(FEATURE_HEADER)} "
                             f"fields, found {len(parts)}")
        names.append(parts[0])
        rows.append([float(v) for v in parts[1:5]])
        labels.append(parts[5])
    return names, np.array(rows, dtype=np.float64), labels


def read_labels_tsv(path: str) -> tuple[list[str], np.ndarray]:
    """Node names and integer class codes in the P..RN alphabet."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty file")
    _check_header(path, lines[0].split("\t"), LABEL_HEADER)
    code = {name: i for i, name in enumerate(CLASS_NAMES)}
    names: list[str] = []
    y = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != len(LABEL_HEADER):
            raise ValueError(f"{path}:{lineno}: expected {len(LABEL_HEADER)} "
                             f"fields, found {len(parts)}")
        if parts[1] not in code:
            raise ValueError(f"{path}:{lineno}: unknown class '{parts[1]}'")
        names.append(parts[0])
        y.append(code[parts[1]])
    return names, np.array(y, dtype=np.int64)


def load_dataset(features_file: str, labels_file: str):
    """Aligned (names, x, y) from a feature/label file pair."""
    f_names, x, _ = read_features_tsv(features_file)
    l_names, y = read_labels_tsv(labels_file)
    if f_names != l_names:
        n = min(len(f_names), len(l_names))
        for i in range(n):
            if f_names[i] != l_names[i]:
                raise ValueError(f"feature and label files disagree at row {i + 2}: "
                                 f"'{f_names[i]}' vs '{l_names[i]}'")
        raise ValueError(f"feature and label files have {len(f_names)} vs "
                         f"{len(l_names)} rows")
    return f_names, x, y
