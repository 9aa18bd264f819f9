"""Relation extraction: nearest noun, patterns, probabilistic ranker."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mathns.corpus import build_corpus, default_stop_lists
from mathns.errors import IdentifierNotInDocument
from mathns.extraction import (
    NEAREST_NOUN,
    PATTERN,
    RANKER,
    RankerParams,
    extract_relations,
    match_patterns,
    nearest_noun,
    prepare_corpus,
    rank_candidates,
    ranker_score,
)
from mathns.textproc import ID

STOPS = default_stop_lists()


def prepare_one(text: str, doc_id: str = "d"):
    corpus = build_corpus([{"doc_id": doc_id, "text": text}], STOPS)
    return prepare_corpus(corpus)[0]


class TestNearestNoun:
    def test_bijection_sigma(self):
        doc = prepare_one(r"In other words, the bijection $\sigma$ normalizes $G$.")
        rels = extract_relations(doc, NEAREST_NOUN)
        assert ("sigma", "bijection") in {
            (r.identifier.key, r.definition) for r in rels
        }

    def test_verb_before_identifier_fails(self):
        doc = prepare_one(r"We denote $\sigma$ here.")
        sentence = doc.sentences[0]
        idx = next(i for i, t in enumerate(sentence) if t.tag == ID)
        assert nearest_noun(sentence, idx) is None

    def test_determiner_adjective_noun_run(self):
        doc = prepare_one("the unknown parameter $x$ is fixed.")
        sentence = doc.sentences[0]
        idx = next(i for i, t in enumerate(sentence) if t.tag == ID)
        rel = nearest_noun(sentence, idx)
        # brute scan over all prefixes ending right before the identifier:
        # the longest all-{DT,JJ,noun} suffix is "the unknown parameter"
        assert rel.definition == "unknown parameter"

    def test_reproduced_by_def_ide_pattern(self):
        doc = prepare_one("the bijection $\\sigma$ acts. a matrix $A$ here.")
        for sentence in doc.sentences:
            for idx, tok in enumerate(sentence):
                if tok.tag != ID:
                    continue
                rel = nearest_noun(sentence, idx)
                if rel is None:
                    continue
                pattern_hits = {
                    (r.identifier.key, r.definition) for r in match_patterns(sentence)
                }
                assert (rel.identifier.key, rel.definition) in pattern_hits


class TestMatchPatterns:
    def test_ide_is_def(self):
        doc = prepare_one("$E$ is energy.")
        hits = {(r.identifier.key, r.definition) for r in match_patterns(doc.sentences[0])}
        assert ("E", "energy") in hits

    def test_let_ide_be_def(self):
        doc = prepare_one("let $x$ be the step size.")
        hits = {(r.identifier.key, r.definition) for r in match_patterns(doc.sentences[0])}
        assert ("x", "step size") in hits

    def test_def_is_denoted_by_ide(self):
        doc = prepare_one("the temperature is denoted by $T$ here.")
        hits = {(r.identifier.key, r.definition) for r in match_patterns(doc.sentences[0])}
        assert ("T", "temperature") in hits

    def test_ide_denotes_def(self):
        doc = prepare_one("$v$ denotes the velocity of the particle.")
        hits = {(r.identifier.key, r.definition) for r in match_patterns(doc.sentences[0])}
        assert ("v", "velocity") in hits

    def test_sentence_without_ids_empty(self):
        doc = prepare_one("plain words only here.")
        assert match_patterns(doc.sentences[0]) == []

    def test_scores_are_one(self):
        doc = prepare_one("$E$ is energy.")
        assert all(r.score == 1.0 for r in match_patterns(doc.sentences[0]))


class TestRankerScore:
    def test_zero_distances(self):
        params = RankerParams(alpha=1.0, beta=1.0, gamma=0.1)
        assert ranker_score(0, 0, 0.0, params) == pytest.approx(2.0 / 2.1)

    def test_equal_weights_equal_components(self):
        params = RankerParams(alpha=2.0, beta=2.0, gamma=2.0)
        # all three components equal c: the weighted mean is c itself
        c = math.exp(-(3**2) / (2 * params.sigma_d**2))
        n = math.sqrt(2 * params.sigma_s**2 * (3**2) / (2 * params.sigma_d**2))
        assert ranker_score(3, n, c, params) == pytest.approx(c)

    def test_independent_arithmetic(self):
        params = RankerParams(sigma_d=5.0, sigma_s=2.0)
        expected = (math.exp(-25.0 / 50.0) + math.exp(-1.0 / 8.0) + 0.1 * 0.2) / 2.1
        assert ranker_score(5, 1, 0.2, params) == pytest.approx(expected, abs=1e-12)

    @given(
        st.floats(0, 50),
        st.floats(0, 20),
        st.floats(0, 1),
    )
    def test_bounded_zero_one(self, delta, n, tf):
        value = ranker_score(delta, n, tf, RankerParams())
        assert 0.0 <= value <= 1.0

    @given(st.floats(0, 30), st.floats(0, 30))
    def test_monotone_in_delta(self, d1, d2):
        lo, hi = sorted((d1, d2))
        params = RankerParams()
        assert ranker_score(hi, 1, 0.3, params) <= ranker_score(lo, 1, 0.3, params)

    @given(st.floats(0, 30), st.floats(0, 30))
    def test_monotone_in_sentence_distance(self, n1, n2):
        lo, hi = sorted((n1, n2))
        params = RankerParams()
        assert ranker_score(2, hi, 0.3, params) <= ranker_score(2, lo, 0.3, params)

    @given(st.floats(0.01, 100))
    def test_weight_scaling_invariant(self, factor):
        base = RankerParams(alpha=1.0, beta=1.0, gamma=0.1)
        scaled = RankerParams(alpha=factor, beta=factor, gamma=0.1 * factor)
        a = ranker_score(3, 1, 0.5, base)
        b = ranker_score(3, 1, 0.5, scaled)
        assert a == pytest.approx(b, rel=1e-9)

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            RankerParams(alpha=0.0, beta=0.0, gamma=0.0)
        with pytest.raises(ValueError):
            RankerParams(sigma_d=-1.0)


class TestRankCandidates:
    TEXT = (
        "The relation between energy and mass is described by the "
        "mass-energy equivalence formula $E = mc^2$, where $E$ is energy, "
        "$m$ is mass and $c$ is the [[ speed of light ]]."
    )

    def test_missing_identifier_raises(self):
        doc = prepare_one(self.TEXT)
        with pytest.raises(IdentifierNotInDocument):
            rank_candidates(doc, "zeta")

    def test_candidates_sorted_descending(self):
        doc = prepare_one(self.TEXT)
        ranked = rank_candidates(doc, "E")
        scores = [s for _, s in ranked]
        assert scores == sorted(scores, reverse=True)

    def test_emc2_relations_extracted(self):
        doc = prepare_one(self.TEXT)
        rels = {
            (r.identifier.key, r.definition)
            for r in extract_relations(doc, RANKER)
        }
        assert {("E", "energy"), ("m", "mass"), ("c", "speed of light")} <= rels

    def test_no_candidates(self):
        doc = prepare_one("just $x$ alone")
        # every noun-like token is absent, so nothing can be ranked
        assert extract_relations(doc, RANKER) == []


class TestExtractRelations:
    def test_dedup_keeps_max_score(self):
        doc = prepare_one("the energy $E$ is energy.")
        rels = [r for r in extract_relations(doc, RANKER) if r.definition == "energy"]
        assert len(rels) == 1

    def test_definition_stop_filtered(self):
        doc = prepare_one("$x$ is a variable.")
        rels = extract_relations(doc, RANKER, definition_stop=frozenset({"variable"}))
        assert all(r.definition != "variable" for r in rels)

    def test_doc_id_attached(self):
        doc = prepare_one("$E$ is energy.", doc_id="paper-1")
        rels = extract_relations(doc, PATTERN)
        assert all(r.doc_id == "paper-1" for r in rels)
