"""Build a covariance model from three rRNA segments and mine a synthetic genome.

One segment is planted on the plus strand and, reverse-complemented, on the
minus strand of a random 10 kb background. The scan finds both copies, folds
each hit along the model's consensus structure, and predicts coaxial stacking
for every 3-way junction in it.

Run: python3 demos/scan_genome.py
"""

import numpy as np

from csminer import data_path
from csminer.cmscan import build_cm
from csminer.features import ThermoParams
from csminer.forest import ForestConfig, train_forest
from csminer.pipeline import format_text_report, run_scan_pipeline
from csminer.seqio import Alphabet, NucleotideSequence
from csminer.structio import read_stockholm
from csminer.synthetic import synthetic_dataset


def revcomp(s: str) -> str:
    return s[::-1].translate(str.maketrans("ACGT", "TGCA"))


def main() -> None:
    aln = read_stockholm(data_path("rrna_segments.sto"))
    model = build_cm(aln)
    print(f"model {model.name}: {model.consensus_length} columns, "
          f"{len(model.guide.pairs())} pairs, {model.n_nodes} nodes")

    insert = aln.ungapped("2J01-19").replace("U", "T")
    rng = np.random.default_rng(7)
    genome = "".join(rng.choice(list("ACGT"), size=10_000))
    genome = genome[:2500] + insert + genome[2500 + len(insert):]
    genome = genome[:7000] + revcomp(insert) + genome[7000 + len(insert):]
    target = NucleotideSequence("synthetic", genome, Alphabet.DNA)

    params = ThermoParams.load()
    forest = train_forest(synthetic_dataset(200, seed=42, params=params), ForestConfig(seed=42))
    analyses = run_scan_pipeline(model, target, forest, params)
    print(format_text_report(analyses, model, target.id))


if __name__ == "__main__":
    main()
