"""Covariance-model scanning of genomes for RNA 3-way junctions, with
random-forest prediction of coaxial helical stacking."""

from importlib import resources

from .cmscan import CovarianceModel, GapPenalties, ScanHit, build_cm, cyk_align, scan_genome, traceback_to_structure
from .features import FeatureVector, ThermoParams, extract_features
from .forest import CoaxLabel, ForestConfig, RandomForest, predict, train_forest
from .junction import ThreeWayJunction, find_three_way_junctions
from .pipeline import HitAnalysis, analyze_hit, format_text_report, run_scan_pipeline
from .seqio import NucleotideSequence, Strand, parse_fasta, read_fasta
from .structio import CtRecord, PairTable, parse_ct, parse_stockholm, parse_wuss, read_ct, read_stockholm, write_ct

__version__ = "0.1.0"


def data_path(name: str):
    """Path to a file shipped in ``csminer/data``."""
    return resources.files("csminer.data").joinpath(name)


__all__ = [
    "CovarianceModel", "GapPenalties", "ScanHit", "build_cm", "cyk_align", "scan_genome",
    "traceback_to_structure", "FeatureVector", "ThermoParams", "extract_features",
    "CoaxLabel", "ForestConfig", "RandomForest", "predict", "train_forest",
    "ThreeWayJunction", "find_three_way_junctions", "HitAnalysis", "analyze_hit",
    "format_text_report", "run_scan_pipeline", "NucleotideSequence", "Strand",
    "parse_fasta", "read_fasta", "CtRecord", "PairTable", "parse_ct", "parse_stockholm",
    "parse_wuss", "read_ct", "read_stockholm", "write_ct", "data_path",
]
