"""FASTA reading and simple nucleotide transformations."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

__all__ = [
    "Alphabet",
    "Strand",
    "NucleotideSequence",
    "GenomicInterval",
    "SequenceFormatError",
    "parse_fasta",
    "read_fasta",
    "format_fasta",
    "reverse_complement",
    "transcribe",
    "gc_percent",
]


class SequenceFormatError(ValueError):
    """Raised for malformed sequence input."""


class Alphabet(str, Enum):
    DNA = "DNA"
    RNA = "RNA"


class Strand(str, Enum):
    PLUS = "+"
    MINUS = "-"


_ALLOWED = {
    Alphabet.DNA: frozenset("ACGTN"),
    Alphabet.RNA: frozenset("ACGUN"),
}
_COMPLEMENT = {
    Alphabet.DNA: str.maketrans("ACGTN", "TGCAN"),
    Alphabet.RNA: str.maketrans("ACGUN", "UGCAN"),
}


@dataclass(frozen=True)
class NucleotideSequence:
    """An identified DNA or RNA residue string.

    Residues are stored uppercase. ``N`` is accepted in both alphabets.
    """

    id: str
    residues: str
    alphabet: Alphabet = Alphabet.RNA
    description: str = ""

    def __post_init__(self) -> None:
        residues = self.residues.upper()
        object.__setattr__(self, "residues", residues)
        object.__setattr__(self, "alphabet", Alphabet(self.alphabet))
        bad = set(residues) - _ALLOWED[self.alphabet]
        if bad:
            raise SequenceFormatError(
                f"illegal {self.alphabet.value} symbol(s) {''.join(sorted(bad))!r} in {self.id!r}"
            )

    def __len__(self) -> int:
        return len(self.residues)

    def __str__(self) -> str:
        return self.residues

    @classmethod
    def infer(cls, id: str, residues: str, description: str = "") -> "NucleotideSequence":
        """Build a sequence, choosing RNA if any U is present and DNA otherwise."""
        residues = residues.upper()
        alphabet = Alphabet.RNA if "U" in residues else Alphabet.DNA
        return cls(id, residues, alphabet, description)


@dataclass(frozen=True)
class GenomicInterval:
    """1-based inclusive interval on a target sequence.

    Minus-strand intervals are written high to low (``start >= end``), the way
    hits on the reverse complement are reported.
    """

    target_id: str
    start: int
    end: int
    strand: Strand = Strand.PLUS

    def __post_init__(self) -> None:
        object.__setattr__(self, "strand", Strand(self.strand))
        if self.strand is Strand.PLUS and self.start > self.end:
            raise ValueError("plus-strand interval must have start <= end")
        if self.strand is Strand.MINUS and self.start < self.end:
            raise ValueError("minus-strand interval must have start >= end")

    @property
    def low(self) -> int:
        return min(self.start, self.end)

    @property
    def high(self) -> int:
        return max(self.start, self.end)

    def __len__(self) -> int:
        return self.high - self.low + 1

    def overlap(self, other: "GenomicInterval") -> int:
        """Number of shared positions, ignoring strand."""
        return max(0, min(self.high, other.high) - max(self.low, other.low) + 1)


def parse_fasta(text: str) -> list[NucleotideSequence]:
    """Parse FASTA text into a list of sequences.

    The id is the header up to the first whitespace; the remainder is kept as
    the description. Residues are uppercased and the alphabet is inferred per
    record.
    """
    records: list[NucleotideSequence] = []
    header: str | None = None
    chunks: list[str] = []
    header_line = 0

    def flush() -> None:
        if header is None:
            return
        ident, _, desc = header.partition(" ")
        if not ident:
            raise SequenceFormatError(f"empty FASTA header at line {header_line}")
        records.append(NucleotideSequence.infer(ident, "".join(chunks), desc.strip()))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            flush()
            header = line[1:].strip().replace("\t", " ")
            header_line = lineno
            chunks = []
            continue
        if header is None:
            raise SequenceFormatError(f"sequence data before first header at line {lineno}")
        line = "".join(line.split()).upper()
        bad = set(line) - set("ACGTUN")
        if bad:
            raise SequenceFormatError(
                f"illegal symbol(s) {''.join(sorted(bad))!r} at line {lineno}"
            )
        chunks.append(line)
    flush()
    if not records:
        raise SequenceFormatError("no FASTA records found")
    for rec in records:
        if "U" in rec.residues and "T" in rec.residues:
            raise SequenceFormatError(f"record {rec.id!r} mixes T and U")
    return records


def read_fasta(path) -> list[NucleotideSequence]:
    with open(path, encoding="utf-8") as fh:
        return parse_fasta(fh.read())


def format_fasta(records: Iterable[NucleotideSequence], width: int = 60) -> str:
    out = []
    for rec in records:
        head = f">{rec.id} {rec.description}".rstrip()
        out.append(head)
        for i in range(0, len(rec.residues), width):
            out.append(rec.residues[i : i + width])
    return "\n".join(out) + "\n"


def reverse_complement(seq: NucleotideSequence) -> NucleotideSequence:
    rc = seq.residues.translate(_COMPLEMENT[seq.alphabet])[::-1]
    return NucleotideSequence(seq.id, rc, seq.alphabet, seq.description)


def transcribe(seq: NucleotideSequence) -> NucleotideSequence:
    if seq.alphabet is not Alphabet.DNA:
        raise SequenceFormatError(f"{seq.id!r} is already RNA")
    return NucleotideSequence(seq.id, seq.residues.replace("T", "U"), Alphabet.RNA, seq.description)


def gc_percent(seq: NucleotideSequence | str) -> int:
    """Integer G+C percentage, rounding halves up. N counts toward length only."""
    residues = seq if isinstance(seq, str) else seq.residues
    n = len(residues)
    if n == 0:
        raise ValueError("GC content of an empty sequence is undefined")
    gc = sum(1 for c in residues.upper() if c in "GC")
    # integer arithmetic for round-half-up
    return (200 * gc + n) // (2 * n)
