"""Random junctions and rule-labelled datasets for exercising the classifier."""

from __future__ import annotations

import numpy as np

from .features import ThermoParams, extract_features
from .forest import CoaxLabel, LabeledExample
from .junction import ThreeWayJunction, junction_from_dataset_row

__all__ = ["random_junction", "rule_label", "labelled_junctions", "synthetic_dataset", "shuffled"]

_PAIRS = ("AU", "UA", "GC", "CG", "GU", "UG")
_BASES = np.array(list("ACGU"))


def random_junction(rng: np.random.Generator, max_loop: int = 8, p_empty: float = 0.4) -> ThreeWayJunction:
    """A junction with random canonical helix ends and random loops.

    Each loop is empty with probability ``p_empty``, else 1..``max_loop`` long.
    """
    # penultimate + terminal pair for H1, H2, H3
    pairs = [[_PAIRS[k] for k in rng.integers(0, 6, size=2)] for _ in range(3)]
    loops = []
    for _ in range(3):
        n = 0 if rng.random() < p_empty else int(rng.integers(1, max_loop + 1))
        loops.append("".join(rng.choice(_BASES, size=n)))
    (p1, t1), (p2, t2), (p3, t3) = pairs
    s1 = p1[0] + t1[0] + loops[0] + t2[0] + p2[0]
    s2 = p2[1] + t2[1] + loops[1] + t3[0] + p3[0]
    s3 = p3[1] + t3[1] + loops[2] + t1[1] + p1[1]
    a = 1
    b = a + len(s1) + 10
    c = b + len(s2) + 10
    coords = (a, a + len(s1) - 1, b, b + len(s2) - 1, c, c + len(s3) - 1)
    return junction_from_dataset_row(coords, (s1, s2, s3))


def rule_label(fv) -> CoaxLabel:
    """Reference labelling rule used as the oracle for synthetic data."""
    if fv.j13 == 0 and fv.j23 > 0:
        return CoaxLabel.H1H3
    if fv.j12 == 0 and fv.dg_h1h2 < -1:
        return CoaxLabel.H1H2
    return CoaxLabel.NONE


def labelled_junctions(
    n: int = 200, noise: float = 0.0, seed: int = 0, params: ThermoParams | None = None
) -> list[tuple[ThreeWayJunction, CoaxLabel]]:
    """``n`` random junctions labelled by :func:`rule_label`.

    A fraction ``noise`` of the labels (chosen at random) is replaced by a
    different label drawn uniformly.
    """
    params = params or ThermoParams.load()
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        j = random_junction(rng)
        out.append((j, rule_label(extract_features(j, params))))
    if noise > 0:
        labels = list(CoaxLabel)
        flip = rng.choice(n, size=int(round(noise * n)), replace=False)
        for i in sorted(flip):
            others = [l for l in labels if l is not out[i][1]]
            out[i] = (out[i][0], others[int(rng.integers(0, len(others)))])
    return out


def synthetic_dataset(
    n: int = 200, noise: float = 0.0, seed: int = 0, params: ThermoParams | None = None
) -> list[LabeledExample]:
    """Feature vectors of :func:`labelled_junctions`."""
    params = params or ThermoParams.load()
    return [LabeledExample(extract_features(j, params), label)
            for j, label in labelled_junctions(n, noise, seed, params)]


def shuffled(samples: list[LabeledExample], seed: int = 0) -> list[LabeledExample]:
    """Same features with labels permuted at random."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(samples))
    return [LabeledExample(s.features, samples[int(p)].label) for s, p in zip(samples, perm)]
