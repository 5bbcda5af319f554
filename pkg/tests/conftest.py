import numpy as np
import pytest

from csminer import data_path
from csminer.cmscan import build_cm, scan_genome
from csminer.features import ThermoParams
from csminer.forest import ForestConfig, train_forest
from csminer.seqio import Alphabet, NucleotideSequence
from csminer.structio import read_ct, read_stockholm
from csminer.synthetic import synthetic_dataset

from oracles import embed, random_dna, revcomp_dna


@pytest.fixture(scope="session")
def params():
    return ThermoParams.load()


@pytest.fixture(scope="session")
def e8o_ct():
    return read_ct(data_path("1e8o.ct"))


@pytest.fixture(scope="session")
def rrna_aln():
    return read_stockholm(data_path("rrna_segments.sto"))


@pytest.fixture(scope="session")
def rrna_model(rrna_aln):
    return build_cm(rrna_aln)


@pytest.fixture(scope="session")
def rule_forest(params):
    return train_forest(synthetic_dataset(200, seed=42, params=params), ForestConfig(seed=42))


@pytest.fixture(scope="session")
def embedded_genomes(rrna_aln):
    """10 kb backgrounds with the 2J01 row on the plus and on the minus strand."""
    insert = rrna_aln.ungapped("2J01-19").replace("U", "T")
    bg = random_dna(10_000, seed=2024)
    plus = NucleotideSequence("synth_plus", embed(bg, insert, 4000), Alphabet.DNA)
    minus = NucleotideSequence("synth_minus", embed(bg, revcomp_dna(insert), 4000), Alphabet.DNA)
    return plus, minus, len(insert)


@pytest.fixture(scope="session")
def embedded_hits(rrna_model, embedded_genomes):
    """Default-threshold scan hits for the plus and the minus embedding."""
    plus, minus, _ = embedded_genomes
    return scan_genome(rrna_model, plus), scan_genome(rrna_model, minus)
