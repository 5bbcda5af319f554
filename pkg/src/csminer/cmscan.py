"""A small covariance model: build from a Stockholm alignment, align with CYK, scan genomes.

The model is a profile SCFG laid over the consensus structure. Each consensus
base pair becomes a PAIR node emitting two residues, each unpaired consensus
column a LEFT or RIGHT node (emitting on the 5' or 3' side of its subtree), and
each multiloop a BIF node splitting into two subtrees.
Any node may be deleted at a flat cost, and insertion runs with affine cost may
sit on either flank of any node. All scores are log-odds bits against a
background null model, so unmodelled residues (inserts, ``N``) score zero.
Alignments are local in the target: residues before and after the hit are free.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import _cyk
from ._cyk import BIF, END, LEFT, PAIR, RIGHT
from .seqio import (
    Alphabet,
    GenomicInterval,
    NucleotideSequence,
    Strand,
    gc_percent,
    reverse_complement,
    transcribe,
)
from .structio import CtRecord, PairTable, StockholmAlignment, parse_wuss, to_dot_bracket

__all__ = [
    "GapPenalties",
    "CovarianceModel",
    "AlignedColumn",
    "Traceback",
    "ScanHit",
    "ModelError",
    "build_cm",
    "cyk_align",
    "score_traceback",
    "scan_genome",
    "max_span",
    "resolve_overlaps",
    "strand_candidates",
    "traceback_to_structure",
]

NUC = "ACGU"
_CODE = {c: k for k, c in enumerate(NUC)}
_NODE_NAMES = {END: "END", PAIR: "PAIR", LEFT: "LEFT", RIGHT: "RIGHT", BIF: "BIF"}
_NODE_CODES = {v: k for k, v in _NODE_NAMES.items()}
CLAMP_BITS = -20.0
CANONICAL = frozenset({"AU", "UA", "GC", "CG", "GU", "UG"})


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class GapPenalties:
    """Penalties in bits, given as positive costs."""

    delete: float = 4.0
    insert_open: float = 8.0
    insert_extend: float = 2.0

    def __post_init__(self) -> None:
        if min(self.delete, self.insert_open, self.insert_extend) < 0:
            raise ModelError("gap penalties must be non-negative")
        if self.insert_open < self.insert_extend:
            raise ModelError("insert_open must be at least insert_extend")


def encode(residues: str) -> np.ndarray:
    """Residue codes 0-3 for ACGU, 4 for anything else (scored as background)."""
    table = np.full(256, 4, dtype=np.int8)
    for c, k in _CODE.items():
        table[ord(c)] = k
    table[ord("T")] = _CODE["U"]
    raw = np.frombuffer(residues.upper().encode("ascii"), dtype=np.uint8)
    return table[raw]


@dataclass
class CovarianceModel:
    """Guide structure, node skeleton and emission scores.

    Nodes are stored in preorder, so every child index exceeds its parent's.
    ``cols[v]`` holds the 1-based consensus columns a node emits (``(i, j)`` for
    PAIR, ``(i, 0)`` for LEFT and RIGHT, ``(0, 0)`` otherwise).
    """

    name: str
    guide: PairTable
    ntype: np.ndarray
    child1: np.ndarray
    child2: np.ndarray
    cols: np.ndarray
    pair_emit: np.ndarray  # (V, 4, 4) bits
    single_emit: np.ndarray  # (V, 4) bits, LEFT and RIGHT nodes
    gaps: GapPenalties
    null: np.ndarray  # background frequencies of A, C, G, U
    consensus: str = ""  # display residues, uppercase where conserved
    _padded: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def consensus_length(self) -> int:
        return self.guide.length

    @property
    def n_nodes(self) -> int:
        return len(self.ntype)

    def kernel_args(self) -> tuple:
        """Node arrays with emission tables padded by a zero-score ``N`` row/column."""
        if self._padded is None:
            V = self.n_nodes
            pe = np.zeros((V, 5, 5))
            pe[:, :4, :4] = self.pair_emit
            le = np.zeros((V, 5))
            le[:, :4] = self.single_emit
            self._padded = (
                self.ntype.astype(np.int8), self.child1.astype(np.int64),
                self.child2.astype(np.int64), pe, le,
            )
        return self._padded

    def structure(self) -> str:
        return to_dot_bracket(self.guide)

    def to_json(self) -> str:
        nodes = []
        for v in range(self.n_nodes):
            t = int(self.ntype[v])
            node = {"type": _NODE_NAMES[t]}
            kids = [int(k) for k in (self.child1[v], self.child2[v]) if k >= 0]
            if kids:
                node["children"] = kids
            if t == PAIR:
                node["cols"] = [int(c) for c in self.cols[v]]
                node["emit"] = [[round(float(s), 6) for s in row] for row in self.pair_emit[v]]
            elif t in (LEFT, RIGHT):
                node["cols"] = [int(self.cols[v][0])]
                node["emit"] = [round(float(s), 6) for s in self.single_emit[v]]
            nodes.append(node)
        doc = {
            "format": "csminer-cm/1",
            "name": self.name,
            "consensus_length": self.consensus_length,
            "guide": self.structure(),
            "consensus": self.consensus,
            "null": {c: round(float(p), 6) for c, p in zip(NUC, self.null)},
            "penalties": {"delete": self.gaps.delete, "insert_open": self.gaps.insert_open,
                          "insert_extend": self.gaps.insert_extend},
            "alphabet": NUC,
            "nodes": nodes,
        }
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CovarianceModel":
        doc = json.loads(text)
        if doc.get("format") != "csminer-cm/1":
            raise ModelError("not a csminer covariance model")
        guide = parse_wuss(doc["guide"])
        V = len(doc["nodes"])
        ntype = np.zeros(V, dtype=np.int8)
        c1 = np.full(V, -1, dtype=np.int64)
        c2 = np.full(V, -1, dtype=np.int64)
        cols = np.zeros((V, 2), dtype=np.int64)
        pe = np.zeros((V, 4, 4))
        le = np.zeros((V, 4))
        for v, node in enumerate(doc["nodes"]):
            t = _NODE_CODES[node["type"]]
            ntype[v] = t
            kids = node.get("children", [])
            if kids:
                c1[v] = kids[0]
            if len(kids) > 1:
                c2[v] = kids[1]
            if t == PAIR:
                cols[v] = node["cols"]
                pe[v] = node["emit"]
            elif t in (LEFT, RIGHT):
                cols[v, 0] = node["cols"][0]
                le[v] = node["emit"]
        p = doc["penalties"]
        null = np.array([doc["null"][c] for c in NUC])
        return cls(doc["name"], guide, ntype, c1, c2, cols, pe, le,
                   GapPenalties(p["delete"], p["insert_open"], p["insert_extend"]),
                   null, doc.get("consensus", ""))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path) -> "CovarianceModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def _skeleton(guide: PairTable):
    """Preorder node list for the guide structure.

    An interval ``[i, j]`` becomes END when empty, PAIR when ``i`` pairs ``j``,
    LEFT when ``i`` is unpaired, RIGHT when ``j`` is unpaired, else BIF at the
    partner of ``i``.
    """
    ntype, c1, c2, cols = [], [], [], []

    def new(t: int, i: int = 0, j: int = 0) -> int:
        ntype.append(t)
        c1.append(-1)
        c2.append(-1)
        cols.append((i, j))
        return len(ntype) - 1

    # iterative preorder: each task builds interval [i, j] and links it to a parent slot
    tasks = [(1, guide.length, -1, 0)]
    while tasks:
        i, j, parent, slot = tasks.pop()
        if i > j:
            v = new(END)
        elif guide[i] == j:
            v = new(PAIR, i, j)
            tasks.append((i + 1, j - 1, v, 0))
        elif guide[i] == 0:
            v = new(LEFT, i)
            tasks.append((i + 1, j, v, 0))
        elif guide[j] == 0:
            v = new(RIGHT, j)
            tasks.append((i, j - 1, v, 0))
        else:
            k = guide[i]
            v = new(BIF)
            # push right first so the left subtree gets the lower indices
            tasks.append((k + 1, j, v, 1))
            tasks.append((i, k, v, 0))
        if parent >= 0:
            (c1 if slot == 0 else c2)[parent] = v
    return (np.array(ntype, dtype=np.int8), np.array(c1, dtype=np.int64),
            np.array(c2, dtype=np.int64), np.array(cols, dtype=np.int64).reshape(-1, 2))


def _log_odds(counts: np.ndarray, pseudocount: float, background: np.ndarray) -> np.ndarray:
    total = counts.sum()
    k = counts.size
    p = (counts + pseudocount) / (total + k * pseudocount) if total + k * pseudocount > 0 else np.zeros_like(counts, dtype=float)
    with np.errstate(divide="ignore"):
        s = np.log2(p / background)
    return np.maximum(s, CLAMP_BITS)


def build_cm(
    aln: StockholmAlignment,
    pseudocount: float = 0.1,
    gap_penalties: GapPenalties = GapPenalties(),
    max_gap_fraction: float = 0.5,
    name: str | None = None,
) -> CovarianceModel:
    """Estimate a model from an alignment with a consensus structure.

    Consensus columns are those with fewer than ``max_gap_fraction`` gapped
    rows; the SS_cons string restricted to them must balance. Emission scores
    are ``log2(p / background)`` with additive pseudocounts; zero probabilities
    are clamped to -20 bits.
    """
    if not aln.rows or aln.column_count == 0:
        raise ModelError("empty alignment")
    if pseudocount < 0:
        raise ModelError("pseudocount must be non-negative")
    cons_cols = aln.consensus_columns(max_gap_fraction)
    if not cons_cols:
        raise ModelError("alignment has no consensus columns")
    try:
        guide = parse_wuss("".join(aln.ss_cons[c] for c in cons_cols))
    except ValueError as exc:
        raise ModelError(f"consensus structure unbalanced after projection: {exc}") from None

    residues = "".join(seq for _, seq in aln.rows)
    counts = np.array([residues.count(c) for c in NUC], dtype=float)
    if counts.sum() == 0:
        raise ModelError("alignment has no residues")
    null = np.maximum(counts / counts.sum(), 0.01)
    null /= null.sum()

    ntype, c1, c2, cols = _skeleton(guide)
    V = len(ntype)
    pe = np.zeros((V, 4, 4))
    le = np.zeros((V, 4))
    rows = [seq for _, seq in aln.rows]
    display = []
    for col in cons_cols:
        column = [s[col] for s in rows]
        tally = {c: column.count(c) for c in NUC}
        top = max(NUC, key=lambda c: (tally[c], -NUC.index(c)))
        display.append(top if 2 * tally[top] > len(rows) else top.lower())
    for v in range(V):
        if ntype[v] == PAIR:
            ci, cj = cons_cols[cols[v, 0] - 1], cons_cols[cols[v, 1] - 1]
            m = np.zeros((4, 4))
            for s in rows:
                a, b = _CODE.get(s[ci]), _CODE.get(s[cj])
                if a is not None and b is not None:
                    m[a, b] += 1
            pe[v] = _log_odds(m, pseudocount, np.outer(null, null))
        elif ntype[v] in (LEFT, RIGHT):
            ci = cons_cols[cols[v, 0] - 1]
            m = np.zeros(4)
            for s in rows:
                a = _CODE.get(s[ci])
                if a is not None:
                    m[a] += 1
            le[v] = _log_odds(m, pseudocount, null)
    return CovarianceModel(name or aln.name or "cm", guide, ntype, c1, c2, cols, pe, le,
                           gap_penalties, null, "".join(display))


# ---------------------------------------------------------------------------
# alignment


@dataclass(frozen=True)
class AlignedColumn:
    """One alignment column.

    ``cons`` is the 1-based consensus column (None for an insertion); ``pos`` the
    0-based index into the aligned target (None for a deletion). ``partner``
    gives the index of the paired column in the same traceback, or -1.
    """

    cons: int | None
    pos: int | None
    partner: int = -1


@dataclass(frozen=True)
class Traceback:
    columns: tuple[AlignedColumn, ...]
    start: int  # 0-based target start of the aligned span
    end: int  # exclusive

    def matched_pairs(self) -> list[tuple[int, int]]:
        """Target index pairs (0-based) emitted by PAIR nodes."""
        out = []
        for k, col in enumerate(self.columns):
            if col.partner > k:
                other = self.columns[col.partner]
                if col.pos is not None and other.pos is not None:
                    out.append((col.pos, other.pos))
        return out

    def query_span(self) -> tuple[int, int]:
        cons = [c.cons for c in self.columns if c.cons is not None and c.pos is not None]
        return (min(cons), max(cons)) if cons else (0, 0)


def _ins_cost(m: int, gaps: GapPenalties) -> float:
    return 0.0 if m == 0 else gaps.insert_open + gaps.insert_extend * (m - 1)


def score_traceback(cm: CovarianceModel, residues: str, tb: Traceback) -> float:
    """Score an alignment column by column, independently of the DP tables.

    Inserted runs are charged once per maximal run between aligned residues.
    """
    x = encode(residues)
    pe = cm.kernel_args()[3]
    le = cm.kernel_args()[4]
    node_of = {int(cm.cols[v, 0]): v for v in range(cm.n_nodes) if cm.ntype[v] in (PAIR, LEFT, RIGHT)}
    total = 0.0
    run = 0
    for k, col in enumerate(tb.columns):
        if col.cons is None:
            run += 1
            continue
        if col.pos is None:
            if col.partner < 0 or col.partner > k:
                total -= cm.gaps.delete
            continue
        total -= _ins_cost(run, cm.gaps)
        run = 0
        if col.partner < 0:
            total += le[node_of[col.cons], x[col.pos]]
        elif col.partner > k:
            v = node_of[col.cons]
            total += pe[v, x[col.pos], x[tb.columns[col.partner].pos]]
    total -= _ins_cost(run, cm.gaps)
    return total


class _Tracer:
    """Recover one optimal derivation from a filled ``L`` table."""

    def __init__(self, cm: CovarianceModel, x: np.ndarray, L: np.ndarray, tol: float = 1e-7):
        self.cm, self.x, self.L, self.tol = cm, x, L, tol
        self.nt, self.c1, self.c2, self.pe, self.le = cm.kernel_args()
        self.g = cm.gaps

    def close(self, a: float, b: float) -> bool:
        return abs(a - b) <= self.tol * max(1.0, abs(a), abs(b))

    def m_options(self, v: int, a: int, e: int) -> Iterator[tuple[float, list]]:
        t, c, r, L, x = self.nt[v], self.c1[v], self.c2[v], self.L, self.x
        if t == END:
            if e == a:
                yield 0.0, []
        elif t == PAIR:
            if e - a >= 2:
                yield self.pe[v, x[a], x[e - 1]] + L[c, a + 1, e - 1], [("pair", v, a, e - 1), ("L", c, a + 1, e - 1)]
            yield L[c, a, e] - self.g.delete, [("delpair", v), ("L", c, a, e)]
        elif t == LEFT:
            if e - a >= 1:
                yield self.le[v, x[a]] + L[c, a + 1, e], [("left", v, a), ("L", c, a + 1, e)]
            yield L[c, a, e] - self.g.delete, [("delleft", v), ("L", c, a, e)]
        elif t == RIGHT:
            if e - a >= 1:
                yield self.le[v, x[e - 1]] + L[c, a, e - 1], [("right", v, e - 1), ("L", c, a, e - 1)]
            yield L[c, a, e] - self.g.delete, [("delright", v), ("L", c, a, e)]
        else:
            for k in range(a, e + 1):
                yield L[c, a, k] + L[r, k, e], [("L", c, a, k), ("L", r, k, e)]

    def expand_L(self, v: int, a: int, e: int) -> list:
        target = self.L[v, a, e]
        n = e - a
        for p in range(n + 1):
            for q in range(n - p + 1):
                base = -_ins_cost(p, self.g) - _ins_cost(q, self.g)
                for s, parts in self.m_options(v, a + p, e - q):
                    if self.close(base + s, target):
                        return ([("ins", i) for i in range(a, a + p)] + parts
                                + [("ins", i) for i in range(e - q, e)])
        raise RuntimeError(f"traceback failed at node {v} span {a}:{e}")

    def run(self, a: int, e: int) -> list:
        """Flat event list in target order."""
        out: list = []
        stack: list = [("L", 0, a, e)]
        while stack:
            item = stack.pop()
            kind = item[0]
            if kind == "L":
                stack.extend(reversed(self.expand_L(item[1], item[2], item[3])))
            elif kind in ("pair", "delpair", "right", "delright"):
                # 3' emissions come after everything the child derives; the child
                # sits on top of the stack, so slide the 3' event in just below it
                if kind == "pair":
                    out.append(("pair5", item[1], item[2]))
                    late = ("pair3", item[1], item[3])
                elif kind == "delpair":
                    out.append(("del5", item[1]))
                    late = ("del3", item[1])
                else:
                    late = ("single", *item[1:]) if kind == "right" else ("delsingle", item[1])
                stack.insert(len(stack) - 1, late)
            else:
                out.append(item)
        return out


def _columns_from_events(cm: CovarianceModel, events: list) -> tuple[AlignedColumn, ...]:
    cols: list[AlignedColumn] = []
    open_pairs: dict[int, int] = {}
    fixups: list[tuple[int, int]] = []
    for ev in events:
        kind = ev[0]
        if kind == "ins":
            cols.append(AlignedColumn(None, ev[1]))
        elif kind in ("left", "single"):
            cols.append(AlignedColumn(int(cm.cols[ev[1], 0]), ev[2]))
        elif kind in ("delleft", "delsingle"):
            cols.append(AlignedColumn(int(cm.cols[ev[1], 0]), None))
        elif kind in ("pair5", "del5"):
            v = ev[1]
            open_pairs[v] = len(cols)
            cols.append(AlignedColumn(int(cm.cols[v, 0]), ev[2] if kind == "pair5" else None))
        elif kind in ("pair3", "del3"):
            v = ev[1]
            k5 = open_pairs.pop(v)
            fixups.append((k5, len(cols)))
            cols.append(AlignedColumn(int(cm.cols[v, 1]), ev[2] if kind == "pair3" else None, k5))
    for k5, k3 in fixups:
        c = cols[k5]
        cols[k5] = AlignedColumn(c.cons, c.pos, k3)
    return tuple(cols)


def _fill(cm: CovarianceModel, x: np.ndarray) -> np.ndarray:
    n = len(x)
    V = cm.n_nodes
    L = np.empty((V, n + 1, n + 1))
    R = np.empty((n + 1, n + 1))
    I = np.empty((n + 1, n + 1))
    nt, c1, c2, pe, le = cm.kernel_args()
    g = cm.gaps
    _cyk.cyk_fill(nt, c1, c2, pe, le, x, g.delete, g.insert_open, g.insert_extend, L, R, I)
    return L


def cyk_align(
    cm: CovarianceModel,
    window: NucleotideSequence | str,
    min_fraction: float = 0.5,
) -> tuple[float, Traceback]:
    """Best local alignment of the model to a window.

    Raises :class:`ModelError` if the window is shorter than ``min_fraction``
    of the consensus length.
    """
    residues = window if isinstance(window, str) else window.residues
    if len(residues) < min_fraction * cm.consensus_length:
        raise ModelError(
            f"window of {len(residues)} nt is shorter than {min_fraction:g} x consensus length {cm.consensus_length}"
        )
    x = encode(residues)
    L = _fill(cm, x)
    score, a, e = _cyk.best_local(L)
    events = _Tracer(cm, x, L).run(int(a), int(e))
    return float(score), Traceback(_columns_from_events(cm, events), int(a), int(e))


# ---------------------------------------------------------------------------
# scanning


@dataclass(frozen=True)
class ScanHit:
    model_name: str
    query_span: tuple[int, int]
    target: GenomicInterval
    score: float
    gc: int
    traceback: Traceback
    residues: str  # aligned target span, 5'->3' on the hit strand
    origin: tuple[int, ...]  # genome coordinate of each residue in ``residues``

    @property
    def strand(self) -> Strand:
        return self.target.strand


def max_span(consensus_length: int, window_factor: float = 1.2) -> int:
    """Longest target span a hit may cover."""
    if window_factor <= 0:
        raise ModelError("window_factor must be positive")
    return max(1, math.ceil(window_factor * consensus_length))


def _strand_views(genome: NucleotideSequence) -> list[tuple[Strand, str]]:
    rna = transcribe(genome) if genome.alphabet is Alphabet.DNA else genome
    return [(Strand.PLUS, rna.residues), (Strand.MINUS, reverse_complement(rna).residues)]


def resolve_overlaps(candidates: Sequence[tuple[float, int, int]], threshold: float) -> list[tuple[float, int, int]]:
    """Greedy non-overlapping selection of ``(score, start, end)`` spans.

    Spans are visited best score first (ties: leftmost, then shortest); a span
    is kept when it clears ``threshold`` and overlaps nothing kept so far.
    """
    kept: list[tuple[float, int, int]] = []
    for score, lo, hi in sorted(candidates, key=lambda c: (-c[0], c[1], c[2])):
        if score < threshold:
            break
        if hi <= lo or any(lo < khi and klo < hi for _, klo, khi in kept):
            continue
        kept.append((score, lo, hi))
    return kept


def strand_candidates(cm: CovarianceModel, residues: str, width: int) -> list[tuple[float, int, int]]:
    """Best-scoring span for every start position on one strand."""
    nt, c1, c2, pe, le = cm.kernel_args()
    g = cm.gaps
    best, end = _cyk.scan_banded(nt, c1, c2, pe, le, encode(residues), width,
                                 g.delete, g.insert_open, g.insert_extend)
    return [(float(best[a]), a, int(end[a])) for a in range(len(residues)) if end[a] > a]


def scan_genome(
    cm: CovarianceModel,
    genome: NucleotideSequence,
    threshold: float = 20.0,
    window_factor: float = 1.2,
    threads: int = 1,
) -> list[ScanHit]:
    """Scan both strands for spans up to ``ceil(window_factor * consensus_length)`` long.

    This is equivalent to sliding a window of that width one residue at a
    time. Above-threshold spans are resolved with :func:`resolve_overlaps`, so
    a region matched from many offsets yields one hit. Hits come back ordered
    by strand (plus first), then by descending score. With ``threads > 1`` the
    strands are filled concurrently; the result does not depend on it.
    """
    if len(genome) == 0:
        return []
    width = max_span(cm.consensus_length, window_factor)
    views = _strand_views(genome)
    cm.kernel_args()  # build the padded tables once, before any worker touches them
    if threads > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(views))) as pool:
            cands = list(pool.map(lambda v: strand_candidates(cm, v[1], width), views))
    else:
        cands = [strand_candidates(cm, r, width) for _, r in views]
    hits: list[ScanHit] = []
    for (strand, residues), cand in zip(views, cands):
        for score, lo, hi in resolve_overlaps(cand, threshold):
            hits.append(_make_hit(cm, genome, strand, residues, lo, hi))
    hits.sort(key=lambda h: (h.strand is Strand.MINUS, -h.score, h.target.low))
    return hits


def _align_span(cm: CovarianceModel, residues: str) -> tuple[float, Traceback]:
    """Traceback of the derivation covering all of ``residues``."""
    x = encode(residues)
    L = _fill(cm, x)
    events = _Tracer(cm, x, L).run(0, len(x))
    return float(L[0, 0, len(x)]), Traceback(_columns_from_events(cm, events), 0, len(x))


def _make_hit(cm, genome, strand, residues, a, e) -> ScanHit:
    n = len(residues)
    score, tb = _align_span(cm, residues[a:e])
    if strand is Strand.PLUS:
        origin = tuple(range(a + 1, e + 1))
    else:
        origin = tuple(n - p for p in range(a, e))
    span = residues[a:e]
    target = GenomicInterval(genome.id, origin[0], origin[-1], strand)
    return ScanHit(cm.name, tb.query_span(), target, score, gc_percent(span), tb, span, origin)


def traceback_to_structure(hit: ScanHit) -> CtRecord:
    """CT record over the hit's target residues with genome coordinates."""
    n = len(hit.residues)
    pt = PairTable.from_pairs(n, [(i + 1, j + 1) for i, j in hit.traceback.matched_pairs()])
    t = hit.target
    title = f"{t.target_id} {t.start}-{t.end} {t.strand.value} {hit.model_name} score={hit.score:.2f}"
    seq = NucleotideSequence(t.target_id, hit.residues, Alphabet.RNA)
    return CtRecord(title, seq, pt, hit.origin)


def single_pair_model(emit: Sequence[Sequence[float]], name: str = "pair", gaps: GapPenalties = GapPenalties()) -> CovarianceModel:
    """One PAIR node closing an empty END; handy for checks."""
    guide = parse_wuss("()")
    nt, c1, c2, cols = _skeleton(guide)
    pe = np.zeros((len(nt), 4, 4))
    pe[0] = np.asarray(emit, dtype=float)
    return CovarianceModel(name, guide, nt, c1, c2, cols, pe, np.zeros((len(nt), 4)), gaps,
                           np.full(4, 0.25), "GC")
