"""Secondary-structure formats: pair tables, CT files, WUSS strings, Stockholm."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .seqio import Alphabet, NucleotideSequence

__all__ = [
    "StructureFormatError",
    "PairTable",
    "CtRecord",
    "StockholmAlignment",
    "parse_ct",
    "read_ct",
    "write_ct",
    "parse_wuss",
    "to_dot_bracket",
    "parse_stockholm",
    "read_stockholm",
    "write_stockholm",
    "GAP_SYMBOLS",
]

GAP_SYMBOLS = frozenset("-._~")
_OPEN = "(<[{"
_CLOSE = ")>]}"
_UNPAIRED = frozenset(".,_:-~")


class StructureFormatError(ValueError):
    """Raised for malformed structure or alignment input."""


@dataclass(frozen=True)
class PairTable:
    """Partner table over 1-based positions; 0 marks an unpaired position.

    ``partner[k]`` holds the partner of position ``k + 1``.
    """

    partner: tuple[int, ...]

    def __post_init__(self) -> None:
        partner = tuple(int(p) for p in self.partner)
        object.__setattr__(self, "partner", partner)
        n = len(partner)
        for i, j in enumerate(partner, start=1):
            if j == 0:
                continue
            if j == i:
                raise StructureFormatError(f"position {i} paired with itself")
            if not 1 <= j <= n:
                raise StructureFormatError(f"position {i} partner {j} out of range 1..{n}")
            if partner[j - 1] != i:
                raise StructureFormatError(f"asymmetric pair {i}-{j}")

    @classmethod
    def unpaired(cls, n: int) -> "PairTable":
        return cls((0,) * n)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "PairTable":
        partner = [0] * n
        for i, j in pairs:
            if partner[i - 1] or partner[j - 1]:
                raise StructureFormatError(f"position paired twice in pair {i}-{j}")
            partner[i - 1] = j
            partner[j - 1] = i
        return cls(tuple(partner))

    def __len__(self) -> int:
        return len(self.partner)

    @property
    def length(self) -> int:
        return len(self.partner)

    def __getitem__(self, i: int) -> int:
        """Partner of 1-based position ``i``."""
        if i < 1:
            raise IndexError(i)
        return self.partner[i - 1]

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.partner, start=1) if j > i]

    @property
    def pseudoknotted(self) -> bool:
        return not self.is_nested()

    def is_nested(self) -> bool:
        stack: list[int] = []
        for i, j in enumerate(self.partner, start=1):
            if j > i:
                stack.append(j)
            elif 0 < j < i:
                if not stack or stack[-1] != i:
                    return False
                stack.pop()
        return True

    def nested(self) -> "PairTable":
        """Drop crossing pairs greedily (5' pairs first) to get a nested table."""
        if self.is_nested():
            return self
        kept: list[tuple[int, int]] = []
        for i, j in self.pairs():
            if all(not (a < i < b < j or i < a < j < b) for a, b in kept):
                kept.append((i, j))
        return PairTable.from_pairs(self.length, kept)


@dataclass(frozen=True, eq=False)
class CtRecord:
    """One CT structure. Equality ignores the sequence id, which CT files do not carry."""

    title: str
    sequence: NucleotideSequence
    pairs: PairTable
    origin_coords: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if len(self.sequence) != self.pairs.length:
            raise StructureFormatError(
                f"sequence length {len(self.sequence)} != pair table length {self.pairs.length}"
            )
        if self.origin_coords is not None:
            coords = tuple(int(c) for c in self.origin_coords)
            if len(coords) != len(self.sequence):
                raise StructureFormatError("origin_coords length mismatch")
            object.__setattr__(self, "origin_coords", coords)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CtRecord):
            return NotImplemented
        return (
            self.title == other.title
            and self.sequence.residues == other.sequence.residues
            and self.pairs == other.pairs
            and self.origin_coords == other.origin_coords
        )

    def __hash__(self) -> int:
        return hash((self.title, self.sequence.residues, self.pairs, self.origin_coords))

    def coord(self, i: int) -> int:
        """Original coordinate of 1-based position ``i``."""
        return self.origin_coords[i - 1] if self.origin_coords else i

    def index_of(self, coord: int) -> int:
        """1-based position carrying original coordinate ``coord``."""
        if self.origin_coords is None:
            return coord
        return self.origin_coords.index(coord) + 1


def _ct_base(ch: str) -> str:
    ch = ch.upper().replace("T", "U")
    return ch if ch in "ACGU" else "N"


def parse_ct(text: str) -> CtRecord:
    """Parse a single 6-column CT record.

    A pseudoknotted table is accepted; callers decide whether to use
    :meth:`PairTable.nested`. If column 6 equals column 1 everywhere the record
    gets no ``origin_coords``.
    """
    lines = [(n, ln) for n, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if not lines:
        raise StructureFormatError("empty CT input")
    head_no, head = lines[0]
    fields = head.split(None, 1)
    try:
        count = int(fields[0])
    except (ValueError, IndexError):
        raise StructureFormatError(f"bad CT header at line {head_no}") from None
    title = fields[1].strip() if len(fields) > 1 else ""
    rows = lines[1 : count + 1]
    if len(rows) != count:
        raise StructureFormatError(f"CT header declares {count} bases but {len(rows)} rows follow")
    extra = lines[count + 1 :]
    if extra:
        raise StructureFormatError(f"unexpected content after CT record at line {extra[0][0]}")

    bases, partner, origin, line_of = [], [], [], []
    for expect, (lineno, ln) in enumerate(rows, start=1):
        cols = ln.split()
        if len(cols) != 6:
            raise StructureFormatError(f"expected 6 columns at line {lineno}")
        try:
            idx, prev, nxt, pj, orig = (int(cols[k]) for k in (0, 2, 3, 4, 5))
        except ValueError:
            raise StructureFormatError(f"non-integer CT field at line {lineno}") from None
        if idx != expect:
            raise StructureFormatError(f"index gap at line {lineno}: expected {expect}, got {idx}")
        if not 0 <= pj <= count or pj == idx:
            raise StructureFormatError(f"invalid partner {pj} at line {lineno}")
        bases.append(_ct_base(cols[1]))
        partner.append(pj)
        origin.append(orig)
        line_of.append(lineno)
    for i, j in enumerate(partner, start=1):
        if j and partner[j - 1] != i:
            raise StructureFormatError(f"asymmetric pair at line {line_of[j - 1]}")

    seq = NucleotideSequence(title.split()[0] if title else "ct", "".join(bases), Alphabet.RNA)
    coords = None if origin == list(range(1, count + 1)) else tuple(origin)
    return CtRecord(title, seq, PairTable(tuple(partner)), coords)


def read_ct(path) -> CtRecord:
    with open(path, encoding="utf-8") as fh:
        return parse_ct(fh.read())


def write_ct(record: CtRecord) -> str:
    n = len(record.sequence)
    out = [f"{n} {record.title}".rstrip()]
    for i in range(1, n + 1):
        nxt = i + 1 if i < n else 0
        out.append(
            f"{i} {record.sequence.residues[i - 1]} {i - 1} {nxt} {record.pairs[i]} {record.coord(i)}"
        )
    return "\n".join(out) + "\n"


def parse_wuss(ss: str) -> PairTable:
    """Parse a WUSS/dot-bracket string into a nested pair table."""
    stacks: dict[str, list[int]] = {o: [] for o in _OPEN}
    partner = [0] * len(ss)
    for i, ch in enumerate(ss, start=1):
        if ch in _OPEN:
            stacks[ch].append(i)
        elif ch in _CLOSE:
            opener = _OPEN[_CLOSE.index(ch)]
            if not stacks[opener]:
                raise StructureFormatError(f"unbalanced {ch!r} at position {i}")
            j = stacks[opener].pop()
            partner[i - 1], partner[j - 1] = j, i
        elif ch not in _UNPAIRED:
            raise StructureFormatError(f"unsupported structure symbol {ch!r} at position {i}")
    for opener, st in stacks.items():
        if st:
            raise StructureFormatError(f"unbalanced {opener!r} at position {st[-1]}")
    pt = PairTable(tuple(partner))
    if not pt.is_nested():
        raise StructureFormatError("crossing pairs (pseudoknot) in consensus structure")
    return pt


def to_dot_bracket(pt: PairTable) -> str:
    if not pt.is_nested():
        raise StructureFormatError("dot-bracket output requires a nested pair table")
    return "".join(
        "." if j == 0 else ("(" if j > i else ")") for i, j in enumerate(pt.partner, start=1)
    )


@dataclass(frozen=True)
class StockholmAlignment:
    """Aligned rows plus the consensus structure line.

    Gap symbols in rows are normalised to ``-``; residues are uppercase RNA.
    """

    rows: tuple[tuple[str, str], ...]
    ss_cons: str
    name: str = ""

    def __post_init__(self) -> None:
        rows = tuple((rid, _norm_row(seq)) for rid, seq in self.rows)
        object.__setattr__(self, "rows", rows)
        width = len(self.ss_cons)
        for rid, seq in rows:
            if len(seq) != width:
                raise StructureFormatError(
                    f"ragged alignment: row {rid!r} has {len(seq)} columns, SS_cons has {width}"
                )

    @property
    def column_count(self) -> int:
        return len(self.ss_cons)

    @property
    def ids(self) -> list[str]:
        return [rid for rid, _ in self.rows]

    def row(self, rid: str) -> str:
        for r, seq in self.rows:
            if r == rid:
                return seq
        raise KeyError(rid)

    def ungapped(self, rid: str) -> str:
        return self.row(rid).replace("-", "")

    def gap_fraction(self, col: int) -> float:
        """Fraction of rows with a gap in 0-based column ``col``."""
        return sum(seq[col] == "-" for _, seq in self.rows) / len(self.rows)

    def consensus_columns(self, max_gap_fraction: float = 0.5) -> list[int]:
        """0-based columns in which fewer than ``max_gap_fraction`` of rows are gaps."""
        return [c for c in range(self.column_count) if self.gap_fraction(c) < max_gap_fraction]

    def projected_structure(self, max_gap_fraction: float = 0.5) -> str:
        """SS_cons restricted to consensus columns."""
        return "".join(self.ss_cons[c] for c in self.consensus_columns(max_gap_fraction))


def _norm_row(seq: str) -> str:
    return "".join("-" if c in GAP_SYMBOLS else c for c in seq.upper().replace("T", "U"))


def parse_stockholm(text: str) -> StockholmAlignment:
    lines = text.splitlines()
    first = next((ln for ln in lines if ln.strip()), "")
    if not first.startswith("# STOCKHOLM 1."):
        raise StructureFormatError("missing '# STOCKHOLM 1.0' header")
    order: list[str] = []
    seqs: dict[str, list[str]] = {}
    ss: list[str] = []
    name = ""
    terminated = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip()
        if not line.strip() or line.startswith("# STOCKHOLM"):
            continue
        if line.strip() == "//":
            terminated = True
            break
        if line.startswith("#=GC"):
            parts = line.split(None, 2)
            if len(parts) == 3 and parts[1] == "SS_cons":
                ss.append(parts[2].strip())
            continue
        if line.startswith("#=GF"):
            parts = line.split(None, 2)
            if len(parts) == 3 and parts[1] == "ID" and not name:
                name = parts[2].split()[0]
            continue
        if line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise StructureFormatError(f"malformed alignment line {lineno}")
        rid, chunk = parts
        if rid not in seqs:
            order.append(rid)
            seqs[rid] = []
        seqs[rid].append(chunk)
    if not terminated:
        raise StructureFormatError("missing '//' terminator")
    if not order:
        raise StructureFormatError("alignment has no sequences")
    if not ss:
        raise StructureFormatError("missing #=GC SS_cons line")
    return StockholmAlignment(tuple((r, "".join(seqs[r])) for r in order), "".join(ss), name)


def read_stockholm(path) -> StockholmAlignment:
    with open(path, encoding="utf-8") as fh:
        return parse_stockholm(fh.read())


def write_stockholm(aln: StockholmAlignment, width: int = 60, gf: Sequence[str] = ()) -> str:
    pad = max([len(r) for r in aln.ids] + [len("#=GC SS_cons")]) + 2
    out = ["# STOCKHOLM 1.0"]
    if aln.name:
        out.append(f"#=GF ID {aln.name}")
    out.extend(f"#=GF {line}" for line in gf)
    out.append("")
    for start in range(0, aln.column_count, width):
        for rid, seq in aln.rows:
            out.append(f"{rid.ljust(pad)}{seq[start:start + width]}")
        out.append(f"{'#=GC SS_cons'.ljust(pad)}{aln.ss_cons[start:start + width]}")
        out.append("")
    out.append("//")
    return "\n".join(out) + "\n"
