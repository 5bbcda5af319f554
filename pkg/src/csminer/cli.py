"""``csminer`` command line: build, scan, classify, features, train.

Exit status: 0 success, 1 usage error, 2 bad input, 3 internal failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .cmscan import CovarianceModel, GapPenalties, ModelError, build_cm
from .features import ThermoParams, extract_features, format_feature_table
from .forest import DatasetError, ForestConfig, RandomForest, oob_accuracy, read_dataset, train_forest
from .junction import JunctionError, census_multiloops
from .pipeline import (
    PipelineConfig,
    classify_structure,
    emit_machine_output,
    format_text_report,
    run_scan_pipeline,
    write_ct_files,
)
from .seqio import SequenceFormatError, read_fasta
from .structio import StructureFormatError, read_ct, read_stockholm

log = logging.getLogger("csminer")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
NO_JUNCTIONS = "no 3-way junctions found"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which means bad input here
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _params(path: str | None) -> ThermoParams:
    return ThermoParams.load(path)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    aln = read_stockholm(args.msa)
    gaps = GapPenalties(args.delete, args.insert_open, args.insert_extend)
    cm = build_cm(aln, args.pseudocount, gaps, name=args.name)
    cm.save(args.out)
    print(f"{cm.name}: {cm.consensus_length} consensus columns, {len(cm.guide.pairs())} pairs, "
          f"{cm.n_nodes} nodes -> {args.out}")
    return EXIT_OK


def cmd_scan(args) -> int:
    cm = CovarianceModel.load(args.model)
    forest = RandomForest.load(args.forest)
    params = _params(args.params)
    genomes = read_fasta(args.genome)
    config = PipelineConfig(args.threshold, args.window_factor)
    texts, analyses = [], []
    for g in genomes:
        found = run_scan_pipeline(cm, g, forest, params, config, threads=args.threads)
        analyses.extend(found)
        texts.append(format_text_report(found, cm, g.id))
    if args.format == "text":
        _emit("\n".join(texts), args.out)
        if args.ct_dir:
            write_ct_files(analyses, args.ct_dir)
    else:
        body = emit_machine_output(analyses, args.format, args.out, args.ct_dir)
        if not args.out:
            sys.stdout.write(body)
    return EXIT_OK


def cmd_classify(args) -> int:
    ct = read_ct(args.ct)
    forest = RandomForest.load(args.forest)
    calls, higher = classify_structure(ct, forest, _params(args.params))
    if args.format == "json":
        doc = [{"coords": list(c.junction.coords), "family": c.junction.family.value,
                "label": c.label.value, "votes": {k.value: v for k, v in c.votes.items()}}
               for c in calls]
        _emit(json.dumps(doc, indent=1) + "\n", args.out)
        return EXIT_OK
    if not calls:
        msg = NO_JUNCTIONS + (f" ({higher} higher-order junction(s) not classified)" if higher else "")
        _emit(msg + "\n", args.out)
        return EXIT_OK
    lines = []
    if args.format == "tsv":
        lines.append("\t".join(["s1id5", "s1id3", "s2id5", "s2id3", "s3id5", "s3id3", "family", "label", "votes"]))
    for k, c in enumerate(calls, start=1):
        j = c.junction
        votes = ",".join(f"{lab.value}:{n}" for lab, n in sorted(c.votes.items(), key=lambda kv: kv[0].rank))
        if args.format == "tsv":
            lines.append("\t".join([*map(str, j.coords), j.family.value, c.label.value, votes]))
        else:
            s = j.coords
            lines.append(f"junction {k}: {s[0]}-{s[1]}, {s[2]}-{s[3]}, {s[4]}-{s[5]}  "
                         f"family {j.family.value}  {c.label.value}  ({votes})")
    if args.format == "text":
        status = [c.label.value for c in calls if c.label.value != "NONE"]
        lines.append(f"Coax status = {', '.join(status) or 'none'}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_features(args) -> int:
    ct = read_ct(args.ct)
    params = _params(args.params)
    coords = list(ct.origin_coords) if ct.origin_coords is not None else None
    junctions = census_multiloops(ct.pairs, ct.sequence.residues, coords).junctions
    if not junctions:
        _emit(NO_JUNCTIONS + "\n", args.out)
        return EXIT_OK
    blocks = []
    for k, j in enumerate(junctions, start=1):
        s = j.coords
        head = f"# junction {k}: {s[0]}-{s[1]}, {s[2]}-{s[3]}, {s[4]}-{s[5]} ({j.strseq1}/{j.strseq2}/{j.strseq3})\n"
        blocks.append(head + format_feature_table(extract_features(j, params)))
    _emit("\n".join(blocks), args.out)
    return EXIT_OK


def cmd_train(args) -> int:
    samples = read_dataset(args.data, _params(args.params))
    config = ForestConfig(n_trees=args.trees, m_try=args.mtry, seed=args.seed)
    forest = train_forest(samples, config)
    forest.save(args.out)
    print(f"trained {config.n_trees} trees on {len(samples)} junctions; "
          f"OOB accuracy = {oob_accuracy(forest, samples):.3f} -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="csminer", description="Find coaxial helical stacking in 3-way junctions of RNA genomic hits.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="Stockholm alignment -> covariance model")
    b.add_argument("--msa", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--name")
    b.add_argument("--pseudocount", type=float, default=0.1)
    b.add_argument("--delete", type=float, default=GapPenalties.delete)
    b.add_argument("--insert-open", type=float, default=GapPenalties.insert_open)
    b.add_argument("--insert-extend", type=float, default=GapPenalties.insert_extend)
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("scan", help="scan a genome and report hits containing multibranch loops")
    s.add_argument("--model", required=True)
    s.add_argument("--genome", required=True)
    s.add_argument("--forest", required=True)
    s.add_argument("--params")
    s.add_argument("--threshold", type=float, default=20.0)
    s.add_argument("--window-factor", type=float, default=1.2)
    s.add_argument("--format", choices=("text", "tsv", "json"), default="text")
    s.add_argument("--out")
    s.add_argument("--ct-dir")
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_scan)

    c = sub.add_parser("classify", help="predict stacking for every 3-way junction of a CT file")
    c.add_argument("--ct", required=True)
    c.add_argument("--forest", required=True)
    c.add_argument("--params")
    c.add_argument("--format", choices=("text", "tsv", "json"), default="text")
    c.add_argument("--out")
    c.set_defaults(func=cmd_classify)

    f = sub.add_parser("features", help="print the fifteen features of each 3-way junction of a CT file")
    f.add_argument("--ct", required=True)
    f.add_argument("--params")
    f.add_argument("--out")
    f.set_defaults(func=cmd_features)

    t = sub.add_parser("train", help="train a random forest from a junction table")
    t.add_argument("--data", required=True)
    t.add_argument("--out", required=True)
    t.add_argument("--trees", type=int, default=100)
    t.add_argument("--mtry", type=int, default=4)
    t.add_argument("--seed", type=int, default=42)
    t.add_argument("--params")
    t.set_defaults(func=cmd_train)
    return p


INPUT_ERRORS = (
    OSError, SequenceFormatError, StructureFormatError, ModelError, DatasetError,
    JunctionError, json.JSONDecodeError, KeyError, ValueError,
)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="csminer: %(levelname)s: %(message)s")
    if getattr(args, "threads", 1) < 1:
        print("csminer: error: --threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"csminer: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # anything else is a bug or a broken invariant
        print(f"csminer: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
