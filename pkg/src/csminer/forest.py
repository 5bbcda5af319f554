"""Random forest of CART classifiers for coaxial-stacking labels.

Each tree is grown on a bootstrap sample with Gini splits over a random subset
of the fifteen junction features, to full depth. Prediction is a plurality vote
over trees. Every tree draws from its own generator seeded by
``(seed, tree_index)``, so training is reproducible and independent of the order
in which trees are built.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .features import FEATURE_LABELS, FEATURE_NAMES, FeatureVector, ThermoParams, extract_features
from .junction import JunctionError, ThreeWayJunction, junction_from_dataset_row

__all__ = [
    "CoaxLabel",
    "LabeledExample",
    "ForestConfig",
    "DecisionTree",
    "RandomForest",
    "DatasetError",
    "DATASET_COLUMNS",
    "load_dataset",
    "read_dataset",
    "format_dataset",
    "parse_label",
    "gini_impurity",
    "train_tree",
    "train_forest",
    "predict",
    "oob_accuracy",
    "majority_baseline",
    "class_prior_baseline",
]

N_FEATURES = len(FEATURE_NAMES)


class CoaxLabel(str, Enum):
    """Coaxial-stacking class. Declaration order is the tie-break order."""

    H1H2 = "H1H2"
    H1H3 = "H1H3"
    H2H3 = "H2H3"
    NONE = "NONE"

    @property
    def rank(self) -> int:
        return _LABEL_ORDER.index(self)


_LABEL_ORDER = list(CoaxLabel)
N_CLASSES = len(_LABEL_ORDER)


class DatasetError(ValueError):
    pass


def parse_label(token: str) -> CoaxLabel:
    tok = token.strip().upper()
    if tok in ("", "-", "NONE", "NA"):
        return CoaxLabel.NONE
    if "," in tok or ";" in tok:
        raise ValueError(f"multi-stack label {token!r} not allowed for a single junction")
    try:
        return CoaxLabel(tok)
    except ValueError:
        raise ValueError(f"unknown coaxial label {token!r}") from None


@dataclass(frozen=True)
class LabeledExample:
    features: FeatureVector
    label: CoaxLabel
    provenance: dict | None = field(default=None, compare=False)


DATASET_COLUMNS = (
    "Serial", "PDB", "RNAType", "Family", "Coaxial",
    "S1ID5", "S1ID3", "S2ID5", "S2ID3", "S3ID5", "S3ID3",
    "J12count", "J12bases", "J23count", "J23bases", "J31count", "J31bases",
    "StrSeq1", "StrSeq2", "StrSeq3",
)


def load_dataset(text: str, params: ThermoParams | None = None) -> list[LabeledExample]:
    """Read the junction table (TSV, header row) into labelled feature vectors."""
    params = params or ThermoParams.load()
    reader = csv.DictReader(io.StringIO(text), delimiter="\t")
    missing = [c for c in DATASET_COLUMNS if c not in (reader.fieldnames or [])]
    if missing:
        raise DatasetError(f"dataset header lacks columns: {', '.join(missing)}")
    out = []
    for rowno, row in enumerate(reader, start=2):
        try:
            coords = [int(row[c]) for c in DATASET_COLUMNS[5:11]]
            jn = junction_from_dataset_row(coords, [row["StrSeq1"], row["StrSeq2"], row["StrSeq3"]])
            for name, loop in (("J12", jn.j12), ("J23", jn.j23), ("J31", jn.j31)):
                bases = row[f"{name}bases"].strip()
                bases = "" if bases == "-" else bases.upper()
                count = int(row[f"{name}count"])
                if count != len(bases):
                    raise DatasetError(f"{name}count={count} but {name}bases has {len(bases)}")
                if bases != loop.bases:
                    raise DatasetError(f"{name}bases {bases!r} disagrees with subsequence loop {loop.bases!r}")
            label = parse_label(row["Coaxial"] or "")
        except (ValueError, JunctionError) as exc:
            raise DatasetError(f"row {rowno}: {exc}") from None
        prov = {k: row[k] for k in ("Serial", "PDB", "RNAType", "Family")}
        out.append(LabeledExample(extract_features(jn, params), label, prov))
    return out


def read_dataset(path, params: ThermoParams | None = None) -> list[LabeledExample]:
    with open(path, encoding="utf-8") as fh:
        return load_dataset(fh.read(), params)


def format_dataset(rows: Iterable[tuple[ThreeWayJunction, CoaxLabel]], pdb: str = "-", rna_type: str = "-") -> str:
    """Junction table text readable by :func:`load_dataset`."""
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(DATASET_COLUMNS)
    for serial, (j, label) in enumerate(rows, start=1):
        loops = []
        for loop in (j.j12, j.j23, j.j31):
            loops += [len(loop), loop.bases or "-"]
        w.writerow([serial, pdb, rna_type, j.family.value, label.value, *j.coords, *loops,
                    j.strseq1, j.strseq2, j.strseq3])
    return buf.getvalue()


def _counts(y: np.ndarray) -> np.ndarray:
    return np.bincount(y, minlength=N_CLASSES)


def gini_impurity(labels: Iterable[CoaxLabel]) -> float:
    tally = Counter(CoaxLabel(l) for l in labels)
    n = sum(tally.values())
    if n == 0:
        raise ValueError("Gini impurity of an empty set is undefined")
    return 1.0 - sum((c / n) ** 2 for c in tally.values())


def _plurality(counts: Sequence[int]) -> int:
    # argmax returns the first maximum, which is the tie-break order
    return int(np.argmax(np.asarray(counts)))


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    m_try: int = round(math.sqrt(N_FEATURES))
    min_leaf: int = 1
    seed: int = 42

    def __post_init__(self) -> None:
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if not 1 <= self.m_try <= N_FEATURES:
            raise ValueError(f"m_try must lie in 1..{N_FEATURES}")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass
class DecisionTree:
    """Flat binary tree.

    Node ``k`` is internal when ``feature[k] >= 0``: samples with
    ``x[feature] <= threshold`` go to ``left[k]``, the rest to ``right[k]``.
    Every node keeps its training class counts; leaves vote ``label[k]``.
    """

    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    label: list[int] = field(default_factory=list)
    counts: list[list[int]] = field(default_factory=list)

    def _add(self, counts: np.ndarray) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.label.append(_plurality(counts))
        self.counts.append([int(c) for c in counts])
        return len(self.feature) - 1

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def depth(self) -> int:
        def d(k: int) -> int:
            return 0 if self.feature[k] < 0 else 1 + max(d(self.left[k]), d(self.right[k]))
        return d(0)

    def route(self, x: Sequence[float]) -> list[int]:
        """Node indices visited from root to leaf."""
        k, path = 0, [0]
        while self.feature[k] >= 0:
            k = self.left[k] if x[self.feature[k]] <= self.threshold[k] else self.right[k]
            path.append(k)
        return path

    def predict_index(self, x: Sequence[float]) -> int:
        return self.label[self.route(x)[-1]]

    def to_dict(self) -> dict:
        return {
            "feature": self.feature, "threshold": self.threshold,
            "left": self.left, "right": self.right,
            "label": [_LABEL_ORDER[i].value for i in self.label],
            "counts": self.counts,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DecisionTree":
        return cls(
            list(d["feature"]), [float(t) for t in d["threshold"]],
            list(d["left"]), list(d["right"]),
            [CoaxLabel(l).rank for l in d["label"]], [list(c) for c in d["counts"]],
        )


def _best_split(X: np.ndarray, y: np.ndarray, feats: Iterable[int], m_try: int):
    """Lowest weighted child Gini over the first ``m_try`` splittable features.

    Candidates are midpoints between consecutive distinct values. Features that
    are constant in the node do not count toward ``m_try``.
    """
    n = len(y)
    onehot = np.zeros((n, N_CLASSES))
    onehot[np.arange(n), y] = 1.0
    best = (math.inf, -1, 0.0)
    tried = 0
    for f in feats:
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        cut = np.nonzero(xs[1:] > xs[:-1])[0]
        if cut.size == 0:
            continue
        tried += 1
        cum = np.cumsum(onehot[order], axis=0)
        left = cum[cut]
        right = cum[-1] - left
        nl = (cut + 1).astype(float)
        nr = n - nl
        gl = 1.0 - np.sum((left / nl[:, None]) ** 2, axis=1)
        gr = 1.0 - np.sum((right / nr[:, None]) ** 2, axis=1)
        w = (nl * gl + nr * gr) / n
        k = int(np.argmin(w))
        if w[k] < best[0] - 1e-12:
            best = (float(w[k]), int(f), float((xs[cut[k]] + xs[cut[k] + 1]) / 2.0))
        if tried >= m_try:
            break
    return best


def train_tree(
    X: np.ndarray, y: np.ndarray, config: ForestConfig, rng: np.random.Generator
) -> DecisionTree:
    """Grow one CART tree on ``X`` (n x 15) with integer class indices ``y``."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    if len(y) == 0:
        raise ValueError("cannot grow a tree on zero samples")
    tree = DecisionTree()
    stack = [(tree._add(_counts(y)), np.arange(len(y)))]
    while stack:
        node, idx = stack.pop()
        counts = _counts(y[idx])
        if len(idx) <= config.min_leaf or np.count_nonzero(counts) == 1:
            continue
        parent = 1.0 - np.sum((counts / len(idx)) ** 2)
        score, f, thr = _best_split(X[idx], y[idx], rng.permutation(N_FEATURES), config.m_try)
        if f < 0 or score >= parent - 1e-12:
            continue
        go_left = X[idx, f] <= thr
        li, ri = idx[go_left], idx[~go_left]
        tree.feature[node], tree.threshold[node] = f, thr
        tree.left[node] = tree._add(_counts(y[li]))
        tree.right[node] = tree._add(_counts(y[ri]))
        stack.append((tree.right[node], ri))
        stack.append((tree.left[node], li))
    return tree


def _dataset_digest(X: np.ndarray, y: np.ndarray) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(X, dtype="<f8").tobytes())
    h.update(np.ascontiguousarray(y, dtype="<i8").tobytes())
    return h.hexdigest()


def _as_arrays(samples: Sequence[LabeledExample]) -> tuple[np.ndarray, np.ndarray]:
    X = np.array([s.features.as_tuple() for s in samples], dtype=float).reshape(-1, N_FEATURES)
    y = np.array([CoaxLabel(s.label).rank for s in samples], dtype=np.int64)
    return X, y


def tree_rng(seed: int, tree_index: int) -> np.random.Generator:
    """PCG64 stream for one tree, keyed by ``(seed, tree_index)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, tree_index])))


@dataclass
class RandomForest:
    trees: list[DecisionTree]
    config: ForestConfig
    dataset_digest: str = ""
    n_samples: int = 0
    oob: list[list[int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if len(self.trees) != self.config.n_trees:
            raise ValueError("tree count differs from config.n_trees")

    def to_json(self) -> str:
        doc = {
            "format": "csminer-forest/1",
            "features": {str(k): {"name": n, "label": l}
                         for k, (n, l) in enumerate(zip(FEATURE_NAMES, FEATURE_LABELS))},
            "labels": [l.value for l in _LABEL_ORDER],
            "config": {"n_trees": self.config.n_trees, "m_try": self.config.m_try,
                       "min_leaf": self.config.min_leaf, "seed": self.config.seed,
                       "rng": "numpy PCG64, SeedSequence([seed, tree_index])"},
            "fingerprint": {"seed": self.config.seed, "dataset_sha256": self.dataset_digest,
                            "n_samples": self.n_samples},
            "oob": self.oob,
            "trees": [t.to_dict() for t in self.trees],
        }
        return json.dumps(doc, indent=1, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RandomForest":
        doc = json.loads(text)
        if doc.get("format") != "csminer-forest/1":
            raise ValueError("not a csminer forest model")
        c = doc["config"]
        cfg = ForestConfig(c["n_trees"], c["m_try"], c["min_leaf"], c["seed"])
        fp = doc.get("fingerprint", {})
        return cls([DecisionTree.from_dict(t) for t in doc["trees"]], cfg,
                   fp.get("dataset_sha256", ""), fp.get("n_samples", 0), doc.get("oob", []))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path) -> "RandomForest":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def train_forest(samples: Sequence[LabeledExample], config: ForestConfig = ForestConfig()) -> RandomForest:
    if len(samples) < 2:
        raise ValueError("need at least two samples to train a forest")
    X, y = _as_arrays(samples)
    n = len(y)
    trees, oob = [], []
    for t in range(config.n_trees):
        rng = tree_rng(config.seed, t)
        boot = rng.integers(0, n, size=n)
        trees.append(train_tree(X[boot], y[boot], config, rng))
        inbag = np.zeros(n, dtype=bool)
        inbag[boot] = True
        oob.append([int(i) for i in np.nonzero(~inbag)[0]])
    return RandomForest(trees, config, _dataset_digest(X, y), n, oob)


def predict(forest: RandomForest, fv: FeatureVector | Sequence[float]) -> tuple[CoaxLabel, dict[CoaxLabel, int]]:
    """Plurality vote of all trees; the tally always sums to ``n_trees``."""
    x = fv.as_tuple() if isinstance(fv, FeatureVector) else tuple(fv)
    votes = np.zeros(N_CLASSES, dtype=np.int64)
    for tree in forest.trees:
        votes[tree.predict_index(x)] += 1
    tally = {_LABEL_ORDER[k]: int(v) for k, v in enumerate(votes) if v}
    return _LABEL_ORDER[_plurality(votes)], tally


def oob_accuracy(forest: RandomForest, samples: Sequence[LabeledExample]) -> float:
    """Accuracy of out-of-bag plurality votes over samples that were ever out of bag."""
    X, y = _as_arrays(samples)
    if forest.dataset_digest and _dataset_digest(X, y) != forest.dataset_digest:
        raise ValueError("samples differ from the forest's training set")
    votes = np.zeros((len(y), N_CLASSES), dtype=np.int64)
    for tree, oob in zip(forest.trees, forest.oob):
        for i in oob:
            votes[i, tree.predict_index(X[i])] += 1
    seen = votes.sum(axis=1) > 0
    if not seen.any():
        raise ValueError("no sample was ever out of bag")
    pred = np.argmax(votes[seen], axis=1)
    return float(np.mean(pred == y[seen]))


def majority_baseline(samples: Sequence[LabeledExample]) -> float:
    tally = Counter(s.label for s in samples)
    return max(tally.values()) / len(samples)


def class_prior_baseline(samples: Sequence[LabeledExample]) -> float:
    """Expected accuracy of guessing labels at their empirical frequencies."""
    tally = Counter(s.label for s in samples)
    n = len(samples)
    return sum((c / n) ** 2 for c in tally.values())
