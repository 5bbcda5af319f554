import json
from collections import Counter

import numpy as np
import pytest

from csminer.cmscan import (
    CLAMP_BITS,
    AlignedColumn,
    CovarianceModel,
    GapPenalties,
    ModelError,
    _fill,
    _skeleton,
    build_cm,
    cyk_align,
    encode,
    max_span,
    resolve_overlaps,
    scan_genome,
    score_traceback,
    single_pair_model,
    strand_candidates,
    Traceback,
    traceback_to_structure,
)
from csminer.seqio import Alphabet, NucleotideSequence, Strand
from csminer.structio import parse_stockholm, parse_wuss
from csminer._cyk import BIF, END, LEFT, PAIR, RIGHT

from oracles import (
    brute_force_cm_table,
    dinucleotide_shuffle,
    embed,
    random_dna,
    random_model,
    random_rna,
    revcomp_dna,
)


# ---------------------------------------------------------------------------
# model construction


def test_skeleton_covers_guide():
    guide = parse_wuss("((.((...))..((...)).))")
    nt, c1, c2, cols = _skeleton(guide)
    pairs = sorted(tuple(c) for t, c in zip(nt, cols) if t == PAIR)
    assert pairs == sorted(guide.pairs())
    singles = sorted(int(c[0]) for t, c in zip(nt, cols) if t in (LEFT, RIGHT))
    assert singles == [i for i in range(1, guide.length + 1) if guide[i] == 0]
    assert list(nt).count(BIF) == 1
    # preorder: children come after parents
    for v in range(len(nt)):
        for c in (c1[v], c2[v]):
            assert c == -1 or c > v
        assert (nt[v] == END) == (c1[v] == -1)


def test_single_row_unpaired_model():
    aln = parse_stockholm("# STOCKHOLM 1.0\ns1 ACGU\n#=GC SS_cons ....\n//\n")
    cm = build_cm(aln, pseudocount=0.5)
    assert list(cm.ntype).count(LEFT) + list(cm.ntype).count(RIGHT) == 4
    assert cm.n_nodes == 5
    for v in range(cm.n_nodes):
        if cm.ntype[v] in (LEFT, RIGHT):
            col = int(cm.cols[v, 0])
            assert cm.single_emit[v, "ACGU".index("ACGU"[col - 1])] > 0


def test_zero_pseudocount_is_clamped():
    aln = parse_stockholm("# STOCKHOLM 1.0\ns1 GC\ns2 GC\n#=GC SS_cons <>\n//\n")
    cm = build_cm(aln, pseudocount=0.0)
    v = int(np.nonzero(cm.ntype == PAIR)[0][0])
    assert cm.pair_emit[v, 2, 1] > 0
    assert cm.pair_emit[v, 0, 3] == CLAMP_BITS
    assert np.isfinite(cm.pair_emit).all()


def test_build_rejects_bad_input():
    with pytest.raises(ModelError):
        build_cm(parse_stockholm("# STOCKHOLM 1.0\ns1 AC\n#=GC SS_cons ..\n//\n"), pseudocount=-1)
    with pytest.raises(ModelError):
        build_cm(parse_stockholm("# STOCKHOLM 1.0\ns1 --\n#=GC SS_cons ..\n//\n"))
    with pytest.raises(ModelError):
        GapPenalties(insert_open=1.0, insert_extend=2.0)
    with pytest.raises(ModelError):
        GapPenalties(delete=-1.0)


def test_rrna_model_shape(rrna_model):
    assert rrna_model.consensus_length == 125
    assert len(rrna_model.guide.pairs()) == 34
    assert np.isfinite(rrna_model.pair_emit).all() and np.isfinite(rrna_model.single_emit).all()
    assert rrna_model.null.sum() == pytest.approx(1.0)


def test_model_json_round_trip(rrna_model, tmp_path):
    text = rrna_model.to_json()
    doc = json.loads(text)
    assert doc["format"] == "csminer-cm/1"
    assert len(doc["nodes"]) == rrna_model.n_nodes
    back = CovarianceModel.from_json(text)
    assert back.to_json() == text
    assert np.allclose(back.pair_emit, rrna_model.pair_emit, atol=1e-6)
    rrna_model.save(tmp_path / "m.json")
    assert CovarianceModel.load(tmp_path / "m.json").to_json() == text


def test_model_json_rejects_other_formats():
    with pytest.raises(ModelError):
        CovarianceModel.from_json('{"format": "x"}')


def test_encode():
    assert list(encode("ACGUTN-x")) == [0, 1, 2, 3, 3, 4, 4, 4]


# ---------------------------------------------------------------------------
# alignment


def test_single_pair_model_on_gc():
    emit = np.full((4, 4), -1.0)
    emit[2, 1] = 3.0
    cm = single_pair_model(emit)
    score, tb = cyk_align(cm, "GC")
    assert score == 3.0
    assert tb.matched_pairs() == [(0, 1)]
    assert tb.query_span() == (1, 2)


def test_all_n_window_scores_no_better_than_empty():
    rng = np.random.default_rng(0)
    for _ in range(20):
        cm = random_model(rng)
        score, _ = cyk_align(cm, "N" * 10, min_fraction=0)
        assert score <= 0.0 + 1e-12


def test_short_window_is_an_error(rrna_model):
    with pytest.raises(ModelError, match="shorter"):
        cyk_align(rrna_model, "ACGU")


def test_cyk_matches_brute_force():
    rng = np.random.default_rng(7)
    for _ in range(15):
        cm = random_model(rng)
        sample = random_rna(9, rng)
        expected = brute_force_cm_table(cm, sample)
        L = _fill(cm, encode(sample))
        n = len(sample)
        for a in range(n + 1):
            for e in range(a, n + 1):
                assert L[0, a, e] == pytest.approx(expected[a, e], abs=1e-9)
        for a in range(n):
            for e in range(a + 1, n + 1):
                score, tb = cyk_align(cm, sample[a:e], min_fraction=0)
                sub = expected[a:e + 1, a:e + 1]
                assert score == pytest.approx(np.max(sub[np.triu_indices(e - a + 1)]), abs=1e-9)
                assert score_traceback(cm, sample[a:e][tb.start:tb.end], shift(tb)) == pytest.approx(score, abs=1e-9)


def shift(tb):
    """Traceback with positions relative to its own span."""
    cols = tuple(AlignedColumn(c.cons, None if c.pos is None else c.pos - tb.start, c.partner) for c in tb.columns)
    return Traceback(cols, 0, tb.end - tb.start)


def test_traceback_is_consistent(rrna_model, rrna_aln):
    row = rrna_aln.ungapped("2J01-19")
    score, tb = cyk_align(rrna_model, row)
    assert score > 20
    assert score_traceback(rrna_model, row[tb.start:tb.end], shift(tb)) == pytest.approx(score, abs=1e-6)
    cons = [c.cons for c in tb.columns if c.cons is not None]
    assert cons == list(range(1, rrna_model.consensus_length + 1))
    pos = [c.pos for c in tb.columns if c.pos is not None]
    assert pos == list(range(tb.start, tb.end))
    for k, c in enumerate(tb.columns):
        if c.partner >= 0:
            assert tb.columns[c.partner].partner == k
            assert rrna_model.guide[c.cons] == tb.columns[c.partner].cons


def test_inserted_residue_is_unpaired(rrna_model, rrna_aln):
    row = rrna_aln.ungapped("2J01-19")
    mutant = row[:60] + "AAAAAA" + row[60:]
    _, tb = cyk_align(rrna_model, mutant)
    paired = {p for pair in tb.matched_pairs() for p in pair}
    inserted = [c.pos for c in tb.columns if c.cons is None]
    assert inserted and not paired & set(inserted)


def test_banded_scan_matches_full_table():
    rng = np.random.default_rng(11)
    for _ in range(10):
        cm = random_model(rng)
        seq = random_rna(25, rng)
        width = int(rng.integers(1, 10))
        L = _fill(cm, encode(seq))
        for score, a, e in strand_candidates(cm, seq, width):
            expect = max(L[0, a, f] for f in range(a, min(a + width, len(seq)) + 1))
            assert score == pytest.approx(expect, abs=1e-9)
            assert e - a <= width and L[0, a, e] == pytest.approx(score, abs=1e-9)


# ---------------------------------------------------------------------------
# scanning


def test_max_span():
    assert max_span(125) == 150
    assert max_span(10, 1.0) == 10
    with pytest.raises(ModelError):
        max_span(10, 0)


def test_resolve_overlaps():
    cands = [(30.0, 0, 10), (25.0, 5, 15), (25.0, 10, 20), (10.0, 30, 40), (40.0, 8, 12), (21.0, 12, 30)]
    assert resolve_overlaps(cands, 20.0) == [(40.0, 8, 12), (21.0, 12, 30)]
    assert resolve_overlaps(cands, 50.0) == []


def test_resolve_overlaps_tie_break():
    # equal scores: leftmost first, then shortest
    cands = [(5.0, 3, 9), (5.0, 7, 12), (5.0, 3, 6)]
    assert resolve_overlaps(cands, 0.0) == [(5.0, 3, 6), (5.0, 7, 12)]


def test_threshold_monotonicity():
    rng = np.random.default_rng(3)
    cands = [(float(rng.normal(10, 8)), int(a), int(a + rng.integers(1, 30))) for a in rng.integers(0, 500, 200)]
    previous = None
    for t in (30.0, 20.0, 10.0, 0.0):
        kept = {(a, b) for _, a, b in resolve_overlaps(cands, t)}
        if previous is not None:
            assert previous <= kept
        previous = kept


def test_embedded_hit_plus(embedded_genomes, embedded_hits):
    _, _, n = embedded_genomes
    hits = embedded_hits[0]
    assert len(hits) == 1
    (h,) = hits
    assert h.strand is Strand.PLUS
    lo, hi = h.target.low, h.target.high
    overlap = min(hi, 4000 + n) - max(lo, 4001) + 1
    assert overlap >= 0.9 * n
    assert h.target.start < h.target.end


def test_embedded_hit_minus(embedded_hits):
    (hp,), (h,) = embedded_hits
    assert h.strand is Strand.MINUS
    assert h.target.start > h.target.end
    assert list(h.origin) == list(range(h.target.start, h.target.end - 1, -1))
    assert h.score == pytest.approx(hp.score)
    assert (h.target.low, h.target.high) == (hp.target.low, hp.target.high)


def test_reverse_complement_symmetry(rrna_model):
    g = NucleotideSequence("g", random_dna(600, 99), Alphabet.DNA)
    rc = NucleotideSequence("rc", revcomp_dna(g.residues), Alphabet.DNA)
    fwd = scan_genome(rrna_model, g, threshold=-50)
    rev = scan_genome(rrna_model, rc, threshold=-50)
    best = lambda hits, s: max(h.score for h in hits if h.strand is s)
    assert best(fwd, Strand.PLUS) == pytest.approx(best(rev, Strand.MINUS))
    assert best(fwd, Strand.MINUS) == pytest.approx(best(rev, Strand.PLUS))


def test_hit_structure_is_nested(embedded_hits):
    for (h,) in embedded_hits:
        ct = traceback_to_structure(h)
        assert ct.pairs.length == len(h.residues)
        assert not ct.pairs.pseudoknotted
        assert len(ct.pairs.pairs()) == len(h.traceback.matched_pairs())
        assert list(ct.origin_coords) == list(h.origin)


def test_dinucleotide_shuffle_preserves_counts():
    rng = np.random.default_rng(1)
    for _ in range(50):
        s = random_dna(int(rng.integers(3, 60)), int(rng.integers(1 << 30)))
        t = dinucleotide_shuffle(s, rng)
        assert Counter(zip(s, s[1:])) == Counter(zip(t, t[1:]))
        assert (t[0], t[-1]) == (s[0], s[-1])


def test_shuffled_insert_is_not_found(rrna_model, rrna_aln):
    insert = rrna_aln.ungapped("2J01-19").replace("U", "T")
    rng = np.random.default_rng(77)
    bg = random_dna(3000, seed=4242)
    for _ in range(3):
        g = NucleotideSequence("shuf", embed(bg, dinucleotide_shuffle(insert, rng), 1500), Alphabet.DNA)
        assert scan_genome(rrna_model, g) == []


def test_threads_do_not_change_hits(rrna_model, embedded_genomes, embedded_hits):
    plus, _, _ = embedded_genomes
    assert scan_genome(rrna_model, plus, threads=2) == embedded_hits[0]


def test_empty_genome(rrna_model):
    assert scan_genome(rrna_model, NucleotideSequence("e", "", Alphabet.DNA)) == []


def test_single_pair_hit_structure():
    emit = np.full((4, 4), -1.0)
    emit[2, 1] = 3.0
    cm = single_pair_model(emit)
    hits = scan_genome(cm, NucleotideSequence("gc", "AAGCAA", Alphabet.RNA), threshold=1.0)
    plus = [h for h in hits if h.strand is Strand.PLUS]
    assert [(h.target.start, h.target.end, h.score) for h in plus] == [(3, 4, 3.0)]
    ct = traceback_to_structure(plus[0])
    assert [ct.pairs[i] for i in (1, 2)] == [2, 1]
    assert list(ct.origin_coords) == [3, 4]


def test_self_score_beats_dinucleotide_shuffles(rrna_model, rrna_aln):
    row = rrna_aln.ungapped("2J01-19")
    score, _ = cyk_align(rrna_model, row)
    rng = np.random.default_rng(55)
    shuffles = [cyk_align(rrna_model, dinucleotide_shuffle(row, rng))[0] for _ in range(100)]
    assert score > np.mean(shuffles)
    assert score > max(shuffles)
