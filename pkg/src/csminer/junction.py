"""Helix and three-way junction extraction from nested pair tables.

Coordinates follow the dataset convention: each junction is described by three
subsequences. Subsequence ``k`` starts at one base of a helix's penultimate pair
and ends at one base of the next helix's penultimate pair, so it always holds
two bases of each flanking helix plus the unpaired loop between them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .structio import PairTable

__all__ = [
    "BasePair",
    "Helix",
    "LoopRegion",
    "HelixArm",
    "JunctionFamily",
    "ThreeWayJunction",
    "MultiloopCensus",
    "JunctionError",
    "CANONICAL_PAIRS",
    "find_helices",
    "census_multiloops",
    "find_three_way_junctions",
    "classify_family",
    "junction_from_dataset_row",
]

log = logging.getLogger(__name__)

CANONICAL_PAIRS = frozenset({"AU", "UA", "GC", "CG", "GU", "UG"})


class JunctionError(ValueError):
    pass


@dataclass(frozen=True)
class BasePair:
    """Two paired residues.

    ``five_prime_base`` is the base on the strand read 5'->3' through a stack,
    which for a pair inside a helix is simply the 5' partner.
    """

    five_prime_base: str
    three_prime_base: str
    positions: tuple[int, int]

    @property
    def identity(self) -> str:
        return self.five_prime_base + self.three_prime_base

    @property
    def canonical(self) -> bool:
        return self.identity in CANONICAL_PAIRS

    def flipped(self) -> "BasePair":
        return BasePair(self.three_prime_base, self.five_prime_base, self.positions[::-1])


@dataclass(frozen=True)
class Helix:
    """Maximal run of stacked pairs, outermost first.

    Pairs may be given in descending coordinates (minus-strand hits), in which
    case each inner pair steps by -1 on the 5' side instead of +1.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not self.pairs:
            raise JunctionError("a helix needs at least one pair")
        step = 1 if self.pairs[0][0] < self.pairs[0][1] else -1
        for (i, j), (k, l) in zip(self.pairs, self.pairs[1:]):
            if (k, l) != (i + step, j - step):
                raise JunctionError(f"pairs ({i},{j}) and ({k},{l}) are not stacked")

    @property
    def length(self) -> int:
        return len(self.pairs)

    @property
    def outer(self) -> tuple[int, int]:
        return self.pairs[0]

    @property
    def inner(self) -> tuple[int, int]:
        return self.pairs[-1]


@dataclass(frozen=True)
class LoopRegion:
    positions: tuple[int, ...]
    bases: str

    def __len__(self) -> int:
        return len(self.bases)


@dataclass(frozen=True)
class HelixArm:
    """One helix as seen from the junction: its loop-adjacent pair and the next one out."""

    terminal: BasePair
    penultimate: BasePair
    helix: Helix | None = None


class JunctionFamily(str, Enum):
    A = "A"
    B = "B"
    C = "C"


@dataclass(frozen=True)
class ThreeWayJunction:
    h1: HelixArm
    h2: HelixArm
    h3: HelixArm
    j12: LoopRegion
    j23: LoopRegion
    j31: LoopRegion
    s1id5: int
    s1id3: int
    s2id5: int
    s2id3: int
    s3id5: int
    s3id3: int
    strseq1: str
    strseq2: str
    strseq3: str

    def __post_init__(self) -> None:
        for k, s in enumerate((self.strseq1, self.strseq2, self.strseq3), start=1):
            if len(s) < 4:
                raise JunctionError(f"StrSeq{k} {s!r} is shorter than 4")

    @property
    def coords(self) -> tuple[int, int, int, int, int, int]:
        return (self.s1id5, self.s1id3, self.s2id5, self.s2id3, self.s3id5, self.s3id3)

    @property
    def loop_counts(self) -> tuple[int, int, int]:
        return (len(self.j12), len(self.j23), len(self.j31))

    @property
    def family(self) -> JunctionFamily:
        return classify_family(self)

    @property
    def j13(self) -> LoopRegion:
        """Alias: the loop between H3 and H1 is called J13 in the feature table."""
        return self.j31


def classify_family(j: ThreeWayJunction) -> JunctionFamily:
    n31, n23 = len(j.j31), len(j.j23)
    if n31 < n23:
        return JunctionFamily.A
    if n31 == n23:
        return JunctionFamily.B
    return JunctionFamily.C


def find_helices(pt: PairTable) -> list[Helix]:
    """All maximal stacked helices, ordered by 5' start.

    Any unpaired base on either strand ends a helix, so a bulge splits a stem
    into two helices.
    """
    helices = []
    for i, j in pt.pairs():
        if i > 1 and pt[i - 1] == j + 1:
            continue  # not the outermost pair of its run
        run = [(i, j)]
        a, b = i + 1, j - 1
        while a < b and pt[a] == b:
            run.append((a, b))
            a, b = a + 1, b - 1
        helices.append(Helix(tuple(run)))
    return helices


@dataclass
class MultiloopCensus:
    """Result of a loop survey: emitted junctions plus what was passed over."""

    junctions: list[ThreeWayJunction] = field(default_factory=list)
    skipped: list[tuple[int, int]] = field(default_factory=list)
    higher_order: list[tuple[tuple[int, int], int]] = field(default_factory=list)

    @property
    def multiloop_count(self) -> int:
        return len(self.junctions) + len(self.skipped) + len(self.higher_order)


def _loop_branches(pt: PairTable, i: int, j: int) -> tuple[list[tuple[int, int]], list[int]]:
    branches, unpaired = [], []
    k = i + 1
    while k < j:
        p = pt[k]
        if p > k:
            branches.append((k, p))
            k = p + 1
        else:
            unpaired.append(k)
            k += 1
    return branches, unpaired


def census_multiloops(
    pt: PairTable,
    residues: str,
    coords: Sequence[int] | None = None,
) -> MultiloopCensus:
    """Survey every closed multibranch loop of a nested table.

    Loops closed by one pair with exactly two branches become
    :class:`ThreeWayJunction` objects. Loops whose arms lack a penultimate pair
    are recorded in ``skipped``; loops with more branches go to ``higher_order``.
    ``coords`` maps 1-based positions to reported coordinates.
    """
    if len(residues) != pt.length:
        raise JunctionError("residue string and pair table differ in length")
    if not pt.is_nested():
        pt = pt.nested()
    residues = residues.upper()

    def c(pos: int) -> int:
        return coords[pos - 1] if coords is not None else pos

    def bp(a: int, b: int) -> BasePair:
        return BasePair(residues[a - 1], residues[b - 1], (c(a), c(b)))

    helix_of: dict[tuple[int, int], Helix] = {}
    for h in find_helices(pt):
        reported = h if coords is None else Helix(tuple((c(a), c(b)) for a, b in h.pairs))
        for pair in h.pairs:
            helix_of[pair] = reported

    def arm(a: int, b: int, outward: int) -> HelixArm:
        return HelixArm(bp(a, b), bp(a + outward, b - outward), helix_of[(a, b)])

    out = MultiloopCensus()
    for i, j in pt.pairs():
        branches, _ = _loop_branches(pt, i, j)
        if len(branches) < 2:
            continue
        if len(branches) > 2:
            out.higher_order.append(((c(i), c(j)), len(branches) + 1))
            log.info("higher-order junction (%d-way) closed by %d-%d, unsupported",
                     len(branches) + 1, c(i), c(j))
            continue
        (k2, l2), (k3, l3) = branches
        # each arm needs a stacked pair one step further from the loop
        if not (
            i > 1 and pt[i - 1] == j + 1
            and pt[k2 + 1] == l2 - 1
            and pt[k3 + 1] == l3 - 1
        ):
            log.warning("junction closed by %d-%d skipped: an arm has a single stacked pair",
                        c(i), c(j))
            out.skipped.append((c(i), c(j)))
            continue

        def loop(a: int, b: int) -> LoopRegion:
            pos = tuple(range(a, b))
            return LoopRegion(tuple(c(p) for p in pos), "".join(residues[p - 1] for p in pos))

        def span(a: int, b: int) -> str:
            return residues[a - 1 : b]

        out.junctions.append(
            ThreeWayJunction(
                arm(i, j, -1), arm(k2, l2, 1), arm(k3, l3, 1),
                j12=loop(i + 1, k2),
                j23=loop(l2 + 1, k3),
                j31=loop(l3 + 1, j),
                s1id5=c(i - 1), s1id3=c(k2 + 1),
                s2id5=c(l2 - 1), s2id3=c(k3 + 1),
                s3id5=c(l3 - 1), s3id3=c(j + 1),
                strseq1=span(i - 1, k2 + 1),
                strseq2=span(l2 - 1, k3 + 1),
                strseq3=span(l3 - 1, j + 1),
            )
        )
    return out


def find_three_way_junctions(
    pt: PairTable, residues: str, coords: Sequence[int] | None = None
) -> list[ThreeWayJunction]:
    """Three-way junctions of a nested structure in 5' order of their closing pair."""
    return census_multiloops(pt, residues, coords).junctions


def junction_from_dataset_row(
    coords: Sequence[int], strseqs: Sequence[str]
) -> ThreeWayJunction:
    """Rebuild a junction from its six S-coordinates and three subsequences.

    Pairs are inferred from the subsequence ends only: the outer two bases of
    each subsequence are penultimate pairs, the next two inward are terminal.
    """
    if len(coords) != 6 or len(strseqs) != 3:
        raise JunctionError("need six coordinates and three subsequences")
    s1id5, s1id3, s2id5, s2id3, s3id5, s3id3 = (int(x) for x in coords)
    seqs = [s.upper().replace("T", "U") for s in strseqs]
    spans = ((s1id5, s1id3), (s2id5, s2id3), (s3id5, s3id3))
    for k, (s, (a, b)) in enumerate(zip(seqs, spans), start=1):
        if len(s) < 4:
            raise JunctionError(f"StrSeq{k} {s!r} is shorter than 4")
        if abs(b - a) + 1 != len(s):
            raise JunctionError(
                f"StrSeq{k} has length {len(s)} but S{k}ID5..S{k}ID3 spans {abs(b - a) + 1}"
            )
    s1, s2, s3 = seqs

    def step(a: int, b: int) -> int:
        return 1 if b >= a else -1

    d1, d2, d3 = (step(a, b) for a, b in spans)

    def loop(s: str, start: int, d: int) -> LoopRegion:
        inner = s[2:-2]
        return LoopRegion(tuple(start + d * (2 + k) for k in range(len(inner))), inner)

    h1 = HelixArm(
        BasePair(s1[1], s3[-2], (s1id5 + d1, s3id3 - d3)),
        BasePair(s1[0], s3[-1], (s1id5, s3id3)),
    )
    h2 = HelixArm(
        BasePair(s1[-2], s2[1], (s1id3 - d1, s2id5 + d2)),
        BasePair(s1[-1], s2[0], (s1id3, s2id5)),
    )
    h3 = HelixArm(
        BasePair(s2[-2], s3[1], (s2id3 - d2, s3id5 + d3)),
        BasePair(s2[-1], s3[0], (s2id3, s3id5)),
    )
    return ThreeWayJunction(
        h1, h2, h3,
        j12=loop(s1, s1id5, d1),
        j23=loop(s2, s2id5, d2),
        j31=loop(s3, s3id5, d3),
        s1id5=s1id5, s1id3=s1id3, s2id5=s2id5, s2id3=s2id3, s3id5=s3id5, s3id3=s3id3,
        strseq1=s1, strseq2=s2, strseq3=s3,
    )
