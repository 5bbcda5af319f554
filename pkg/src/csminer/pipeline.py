"""Scan, fold the hit into a structure, find junctions, predict stacking, report.

Reports keep only hits whose predicted structure contains a multibranch loop;
each kept hit carries a coaxial-stacking status built from the forest's labels.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .cmscan import CANONICAL, CovarianceModel, ScanHit, scan_genome, traceback_to_structure
from .features import FEATURE_NAMES, FeatureVector, ThermoParams, extract_features
from .forest import CoaxLabel, RandomForest, predict
from .junction import ThreeWayJunction, census_multiloops
from .seqio import NucleotideSequence, Strand
from .structio import CtRecord, write_ct

__all__ = [
    "JunctionCall",
    "HitAnalysis",
    "PipelineConfig",
    "HIGHER_ORDER_STATUS",
    "NO_HITS",
    "classify_structure",
    "analyze_hit",
    "run_scan_pipeline",
    "format_text_report",
    "alignment_rows",
    "tsv_rows",
    "emit_machine_output",
]

log = logging.getLogger(__name__)

HIGHER_ORDER_STATUS = "higher-order junction (unclassified)"
NO_HITS = "No hits containing multi-branch loops."
LINE_WIDTH = 60


@dataclass(frozen=True)
class JunctionCall:
    junction: ThreeWayJunction
    features: FeatureVector
    label: CoaxLabel
    votes: dict[CoaxLabel, int]


@dataclass
class HitAnalysis:
    hit: ScanHit
    ct: CtRecord
    junctions: list[JunctionCall] = field(default_factory=list)
    higher_order: int = 0

    @property
    def has_multiloop(self) -> bool:
        return bool(self.junctions) or self.higher_order > 0

    @property
    def coax_status(self) -> list[str]:
        """Non-NONE labels in 5' order, then a marker for any higher-order loop."""
        out = [c.label.value for c in self.junctions if c.label is not CoaxLabel.NONE]
        if self.higher_order:
            out.append(HIGHER_ORDER_STATUS)
        return out

    def status_text(self) -> str:
        return ", ".join(self.coax_status) or "none"


@dataclass(frozen=True)
class PipelineConfig:
    threshold: float = 20.0
    window_factor: float = 1.2


def classify_structure(
    ct: CtRecord, forest: RandomForest, params: ThermoParams
) -> tuple[list[JunctionCall], int]:
    """Junction calls for one structure plus the number of higher-order loops."""
    coords = list(ct.origin_coords) if ct.origin_coords is not None else None
    census = census_multiloops(ct.pairs, ct.sequence.residues, coords)
    calls = []
    for j in census.junctions:
        fv = extract_features(j, params)
        label, votes = predict(forest, fv)
        calls.append(JunctionCall(j, fv, label, votes))
    return calls, len(census.higher_order)


def analyze_hit(hit: ScanHit, forest: RandomForest, params: ThermoParams) -> HitAnalysis:
    ct = traceback_to_structure(hit)
    calls, higher = classify_structure(ct, forest, params)
    return HitAnalysis(hit, ct, calls, higher)


def run_scan_pipeline(
    model: CovarianceModel,
    genome: NucleotideSequence,
    forest: RandomForest,
    params: ThermoParams,
    config: PipelineConfig = PipelineConfig(),
    threads: int = 1,
) -> list[HitAnalysis]:
    """Analyses of the above-threshold hits that contain a multibranch loop."""
    hits = scan_genome(model, genome, config.threshold, config.window_factor, threads)
    kept = []
    for hit in hits:
        a = analyze_hit(hit, forest, params)
        if a.has_multiloop:
            kept.append(a)
        else:
            log.info("hit %s %d-%d dropped: no multibranch loop",
                     hit.strand.value, hit.target.start, hit.target.end)
    kept.sort(key=lambda a: (a.hit.strand is Strand.MINUS, -a.hit.score, a.hit.target.low))
    return kept


# ---------------------------------------------------------------------------
# text report


def alignment_rows(model: CovarianceModel, hit: ScanHit) -> list[tuple[str, str, str, str, list, list]]:
    """Per-column characters (structure, query, match, target) and coordinates.

    Matched pairs are drawn ``(`` ``)``; every other consensus column ``:``;
    insertions ``.``. Query shows the consensus residue (``.`` for an
    insertion), target the aligned residue (``-`` for a deletion, lowercase for
    an insertion). The match line carries the residue where query and target
    agree, ``+`` where they differ but the pair is still canonical.
    """
    cols = hit.traceback.columns
    rows = []
    for k, col in enumerate(cols):
        if col.cons is None:
            t = hit.residues[col.pos].lower()
            rows.append((".", ".", " ", t, None, hit.origin[col.pos]))
            continue
        q = model.consensus[col.cons - 1] if model.consensus else "N"
        if col.pos is None:
            rows.append((":", q, " ", "-", col.cons, None))
            continue
        t = hit.residues[col.pos]
        paired = col.partner >= 0 and cols[col.partner].pos is not None
        if paired:
            s = "(" if col.partner > k else ")"
            other = hit.residues[cols[col.partner].pos]
            pair = t + other if col.partner > k else other + t
        else:
            s, pair = ":", ""
        if q.upper() == t:
            m = t
        elif paired and pair in CANONICAL:
            m = "+"
        else:
            m = " "
        rows.append((s, q, m, t, col.cons, hit.origin[col.pos]))
    return rows


def _hit_block(a: HitAnalysis, model: CovarianceModel) -> list[str]:
    h = a.hit
    lines = [
        "",
        f"Query = {h.query_span[0]} - {h.query_span[1]}, Target = {h.target.start} - {h.target.end}",
        f"Score = {h.score:.2f}, GC = {h.gc}",
        "",
        f"Coax status = {a.status_text()}",
        "",
    ]
    rows = alignment_rows(model, h)
    coords = [str(c) for r in rows for c in (r[4], r[5]) if c is not None]
    pad = max((len(c) for c in coords), default=1)
    last_q, last_t = h.query_span[0], h.target.start
    for b in range(0, len(rows), LINE_WIDTH):
        chunk = rows[b : b + LINE_WIDTH]
        qs = [r[4] for r in chunk if r[4] is not None]
        ts = [r[5] for r in chunk if r[5] is not None]
        q0, q1 = (qs[0], qs[-1]) if qs else (last_q, last_q)
        t0, t1 = (ts[0], ts[-1]) if ts else (last_t, last_t)
        last_q, last_t = q1, t1
        blank = " " * (pad + 1)
        lines.append(blank + "".join(r[0] for r in chunk))
        lines.append(f"{str(q0).rjust(pad)} {''.join(r[1] for r in chunk)} {q1}")
        lines.append(blank + "".join(r[2] for r in chunk))
        lines.append(f"{str(t0).rjust(pad)} {''.join(r[3] for r in chunk)} {t1}")
        lines.append("")
    return lines


def format_text_report(analyses: Sequence[HitAnalysis], model: CovarianceModel, target: str) -> str:
    """Human-readable hit report for one target sequence."""
    lines = [f"CM: {model.name}", f">{target}"]
    if not analyses:
        lines += ["", NO_HITS]
        return "\n".join(lines) + "\n"
    for strand, title in ((Strand.PLUS, "Plus"), (Strand.MINUS, "Minus")):
        group = [a for a in analyses if a.hit.strand is strand]
        if not group:
            continue
        while lines[-1] == "":
            lines.pop()
        lines += ["", f"  {title} strand results:"]
        for a in group:
            lines += _hit_block(a, model)
    while lines and lines[-1] == "":
        lines.pop()
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# machine-readable output

TSV_HEADER = (
    ["target", "strand", "hit_start", "hit_end", "score",
     "s1id5", "s1id3", "s2id5", "s2id3", "s3id5", "s3id3"]
    + list(FEATURE_NAMES)
    + ["label", "votes"]
)


def _votes_text(votes: dict[CoaxLabel, int]) -> str:
    return ",".join(f"{k.value}:{v}" for k, v in sorted(votes.items(), key=lambda kv: kv[0].rank))


def tsv_rows(analyses: Sequence[HitAnalysis]) -> list[list[str]]:
    """One row per junction; the hit columns repeat for every junction of a hit."""
    rows = []
    for a in analyses:
        h = a.hit
        base = [h.target.target_id, h.strand.value, str(h.target.start), str(h.target.end), f"{h.score:.2f}"]
        for c in a.junctions:
            feats = [f"{v:.2f}" if isinstance(v, float) else str(v) for v in c.features.as_tuple()]
            rows.append(base + [str(x) for x in c.junction.coords] + feats
                        + [c.label.value, _votes_text(c.votes)])
    return rows


def _ct_name(a: HitAnalysis) -> str:
    t = a.hit.target
    safe = "".join(ch if ch.isalnum() or ch in "._-" else "_" for ch in t.target_id)
    return f"{safe}_{'plus' if t.strand is Strand.PLUS else 'minus'}_{t.start}-{t.end}.ct"


def analysis_to_dict(a: HitAnalysis) -> dict:
    h = a.hit
    return {
        "target": h.target.target_id,
        "strand": h.strand.value,
        "start": h.target.start,
        "end": h.target.end,
        "query": list(h.query_span),
        "score": round(h.score, 2),
        "gc": h.gc,
        "coax_status": a.coax_status,
        "higher_order": a.higher_order,
        "junctions": [
            {
                "coords": list(c.junction.coords),
                "strseq": [c.junction.strseq1, c.junction.strseq2, c.junction.strseq3],
                "family": c.junction.family.value,
                "features": dict(zip(FEATURE_NAMES, c.features.as_tuple())),
                "label": c.label.value,
                "votes": {k.value: v for k, v in c.votes.items()},
            }
            for c in a.junctions
        ],
    }


def emit_machine_output(
    analyses: Sequence[HitAnalysis],
    fmt: str,
    out: os.PathLike | str | None = None,
    ct_dir: os.PathLike | str | None = None,
) -> str:
    """Render analyses as ``tsv`` or ``json``; optionally write text and CT files.

    Returns the rendered text. When ``out`` is given it is also written there;
    when ``ct_dir`` is given one CT file per analysis is written into it.
    """
    if fmt == "tsv":
        body = "\n".join("\t".join(r) for r in [TSV_HEADER] + tsv_rows(analyses)) + "\n"
    elif fmt == "json":
        body = json.dumps([analysis_to_dict(a) for a in analyses], indent=1) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    try:
        if out is not None:
            Path(out).write_text(body, encoding="utf-8")
        if ct_dir is not None:
            write_ct_files(analyses, ct_dir)
    except OSError as exc:
        raise OSError(f"cannot write output: {exc.filename or out}: {exc.strerror}") from exc
    return body


def write_ct_files(analyses: Sequence[HitAnalysis], ct_dir: os.PathLike | str) -> list[Path]:
    d = Path(ct_dir)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for a in analyses:
        p = d / _ct_name(a)
        p.write_text(write_ct(a.ct), encoding="utf-8")
        paths.append(p)
    return paths
