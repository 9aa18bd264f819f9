"""Corpus parsing, identifier extraction and statistics."""

import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mathns.corpus import (
    Identifier,
    StopLists,
    build_corpus,
    corpus_stats,
    default_stop_lists,
    drop_sparse_documents,
    extract_identifiers,
    normalize_identifier,
    parse_document,
    scan_formula,
)
from mathns.errors import (
    DuplicateDocId,
    ExcludedSymbol,
    UnbalancedFormulaDelimiter,
)

STOPS = default_stop_lists()


def oracle_scan(formula: str) -> list[str]:
    """Brute-force token scanner, independent of the library grammar.

    Walks the string with a flat regex, keeping single letters and
    greek commands (with an optional subscript), dropping anything that
    follows '^' and any stop-listed run.
    """
    token_re = re.compile(r"\\[A-Za-z]+|[A-Za-z]+|\^|\{|\}|_|.")
    tokens = token_re.findall(formula)
    out = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "^":
            if i + 1 < len(tokens) and tokens[i + 1] == "{":
                i += 2
                while i < len(tokens) and tokens[i] != "}":
                    i += 1
                i += 1
            else:
                i += 2
            continue
        name = None
        if tok.startswith("\\") and tok[1:] in {
            "sigma", "alpha", "beta", "gamma", "mu", "theta", "lambda", "pi",
        }:
            name = tok[1:]
        elif len(tok) == 1 and tok.isalpha():
            name = tok
        elif tok.isalpha() and not STOPS.is_stopped_symbol(tok):
            for ch in tok:
                out.append(ch)
            i += 1
            continue
        if name is None:
            i += 1
            continue
        # optional subscript
        if i + 1 < len(tokens) and tokens[i + 1] == "_":
            i += 2
            if i < len(tokens) and tokens[i] == "{":
                sub = []
                i += 1
                while i < len(tokens) and tokens[i] != "}":
                    sub.append(tokens[i])
                    i += 1
                i += 1
                out.append(f"{name}_{''.join(sub)}")
            else:
                out.append(f"{name}_{tokens[i]}")
                i += 1
        else:
            out.append(name)
            i += 1
    return out


class TestParseDocument:
    def test_single_formula(self):
        doc = parse_document({"doc_id": "a", "text": "Let $E = mc^2$."})
        assert len(doc.formulas) == 1
        assert doc.formulas[0] == "E = mc^2"
        assert "FORMULA_0" in doc.body

    def test_no_math(self):
        doc = parse_document({"doc_id": "a", "text": "no math"})
        assert doc.formulas == ()
        assert doc.body == "no math"

    def test_unbalanced_dollar(self):
        with pytest.raises(UnbalancedFormulaDelimiter):
            parse_document({"doc_id": "a", "text": "bad $x"})

    def test_duplicate_doc_id(self):
        records = [
            {"doc_id": "a", "text": "$x$"},
            {"doc_id": "a", "text": "$y$"},
        ]
        with pytest.raises(DuplicateDocId):
            build_corpus(records, STOPS)


class TestExtractIdentifiers:
    def test_emc2(self):
        ids = extract_identifiers("E = mc^2", STOPS)
        assert [i.key for i in ids] == ["E", "m", "c"]

    def test_superscript_ignored(self):
        assert [i.key for i in extract_identifiers("x^2", STOPS)] == ["x"]

    def test_sigma_subscript_and_operator(self):
        got = [i.key for i in extract_identifiers(r"\sigma_d + \sin(y)", STOPS)]
        assert got == oracle_scan(r"\sigma_d + \sin(y)")
        assert got == ["sigma_d", "y"]

    def test_braced_subscript(self):
        ids = extract_identifiers(r"x_{slope} + \beta_{\theta}", STOPS)
        assert [i.key for i in ids] == ["x_slope", "beta_theta"]

    def test_wrapper_commands_unwrapped(self):
        ids = extract_identifiers(r"\mathbf{w} + \bar X + \vec{v}_1", STOPS)
        assert [i.key for i in ids] == ["w", "X", "v_1"]

    def test_display_round_trips_source(self):
        ids = extract_identifiers(r"\sigma_d", STOPS)
        assert ids[0].display == r"\sigma_d"

    def test_operator_names_dropped_and_counted(self):
        ids, skipped = scan_formula(r"\sin(x) + \cos(y) + \frac{a}{b}", STOPS)
        assert [i.key for i in ids] == ["x", "y", "a", "b"]
        assert skipped >= 3

    @given(
        st.lists(
            st.sampled_from(["x", "y", "E", "m", r"\sigma", r"\mu_4", "x_1", "q^2"]),
            min_size=1,
            max_size=6,
        )
    )
    def test_matches_oracle_on_random_formulas(self, parts):
        formula = " + ".join(parts)
        got = [i.key for i in extract_identifiers(formula, STOPS)]
        assert got == oracle_scan(formula)


class TestNormalizeIdentifier:
    def test_bold_w_folds(self):
        assert normalize_identifier("\U0001D430").base == "w"

    def test_identity(self):
        assert normalize_identifier("w").base == "w"

    def test_arrow_rejected(self):
        with pytest.raises(ExcludedSymbol):
            normalize_identifier("\u2192")

    def test_operator_block_rejected_nabla_kept(self):
        with pytest.raises(ExcludedSymbol):
            normalize_identifier("\u2200")  # forall
        assert normalize_identifier("\u2207").base == "nabla"

    def test_greek_letter_named(self):
        assert normalize_identifier("\u03c3").base == "sigma"
        assert normalize_identifier("\u03a3").base == "Sigma"

    def test_stop_listed_symbol_rejected(self):
        stops = StopLists(symbol_stop=frozenset({"q"}))
        with pytest.raises(ExcludedSymbol):
            normalize_identifier("q", stops)

    @given(st.sampled_from("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"))
    def test_idempotent(self, ch):
        once = normalize_identifier(ch)
        twice = normalize_identifier(once.base)
        assert once.base == twice.base

    def test_no_extracted_base_is_stopped(self):
        ids = extract_identifiers(r"E + \sin x + where", STOPS)
        assert all(not STOPS.is_stopped_symbol(i.base) for i in ids)


class TestCorpusStats:
    def test_single_doc_counts(self):
        corpus = build_corpus([{"doc_id": "d", "text": "$x$ $x$ $y$"}], STOPS)
        report = corpus_stats(corpus)
        assert report.identifier_counts == [("x", 2), ("y", 1)]
        assert report.per_document[0]["distinct"] == 2

    def test_empty_corpus(self):
        report = corpus_stats(build_corpus([], STOPS))
        assert report.n_documents == 0
        assert report.identifier_counts == []

    def test_totals_equal_per_doc_sums(self):
        corpus = build_corpus(
            [
                {"doc_id": "a", "text": "$x$ $y$ and $z_1$"},
                {"doc_id": "b", "text": "$x$ twice $x$"},
                {"doc_id": "c", "text": r"$\mu$ $\mu$ $\mu$"},
            ],
            STOPS,
        )
        report = corpus_stats(corpus)
        # independent recount: a has {x, y, z_1}, b has {x, x}, c has 3 mu
        totals = sum(count for _, count in report.identifier_counts)
        per_doc = sum(row["total"] for row in report.per_document)
        assert totals == per_doc == 8

    def test_drop_sparse_documents(self):
        corpus = build_corpus(
            [
                {"doc_id": "a", "text": "$x$ only one"},
                {"doc_id": "b", "text": "$x$ and $y$"},
            ],
            STOPS,
        )
        kept = drop_sparse_documents(corpus, min_occurrences=2)
        assert [d.doc_id for d in kept.documents] == ["b"]


class TestIdentifierKey:
    def test_key_with_subscript(self):
        assert Identifier(base="x", subscript="1").key == "x_1"

    def test_key_plain(self):
        assert Identifier(base="sigma").key == "sigma"
