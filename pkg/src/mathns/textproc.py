"""Tokenization, sentence splitting and math-aware POS tagging.

The tag scheme is a Penn-Treebank subset extended with four tags for
mathematical text: MATH for multi-identifier formulas, ID for
stand-alone identifiers, LINK for ``[[...]]`` spans and NOUN_PHRASE for
collapsed noun runs.  Tagging is rule-based: a word lexicon first, then
ordered suffix rules, then OTHER.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

from .corpus import PLACEHOLDER_PREFIX, Identifier
from .errors import UnknownPlaceholder, UnterminatedLink

NN = "NN"
NNS = "NNS"
JJ = "JJ"
DT = "DT"
VB = "VB"
IN = "IN"
SYM = "SYM"
OTHER = "OTHER"
MATH = "MATH"
ID = "ID"
LINK = "LINK"
NOUN_PHRASE = "NOUN_PHRASE"

VALID_TAGS = frozenset(
    {NN, NNS, JJ, DT, VB, IN, SYM, OTHER, MATH, ID, LINK, NOUN_PHRASE}
)

_NOUNISH = frozenset({NN, NNS, NOUN_PHRASE})


@dataclass(frozen=True)
class TaggedToken:
    text: str
    tag: str
    sentence_idx: int
    token_idx: int
    identifier: Optional[Identifier] = None


class Lexicon:
    """Word -> tag map plus ordered suffix rules (longest match first)."""

    def __init__(self, words: dict[str, str], suffix_rules: list[tuple[str, str]]):
        self.words = {w.lower(): t for w, t in words.items()}
        self.suffix_rules = list(suffix_rules)

    @classmethod
    def load(cls, lexicon_path: str | Path, suffix_path: str | Path) -> "Lexicon":
        words = {}
        for line in Path(lexicon_path).read_text(encoding="utf-8").splitlines():
            line = line.split("#", 1)[0].rstrip()
            if not line:
                continue
            word, tag = line.split("\t")
            words[word] = tag
        rules = []
        for line in Path(suffix_path).read_text(encoding="utf-8").splitlines():
            line = line.split("#", 1)[0].rstrip()
            if not line:
                continue
            suffix, tag = line.split("\t")
            rules.append((suffix, tag))
        return cls(words, rules)

    @classmethod
    def default(cls) -> "Lexicon":
        data = Path(__file__).parent / "data"
        return cls.load(data / "lexicon.tsv", data / "suffix_rules.tsv")

    def tag_word(self, word: str) -> str:
        hit = self.words.get(word.lower())
        if hit is not None:
            return hit
        best = None
        for pos, (suffix, tag) in enumerate(self.suffix_rules):
            if len(word) > len(suffix) and word.lower().endswith(suffix):
                key = (-len(suffix), pos)
                if best is None or key < best[0]:
                    best = (key, tag)
        if best is not None:
            return best[1]
        return OTHER


_SENTENCE_RE = re.compile(r"[^.?!]*[.?!]+(?=\s|$)|[^.?!]+$")
_TOKEN_RE = re.compile(r"\[\[|\]\]|[\w'-]+|[^\w\s]")


def tokenize_sentences(text: str) -> list[list[str]]:
    """Split into sentences on ``.?!`` + whitespace/EOF, then tokenize.

    Formula placeholders stay single tokens; ``[[`` and ``]]`` are
    tokens of their own so link spans survive tokenization.
    """
    sentences = []
    for match in _SENTENCE_RE.finditer(text):
        chunk = match.group(0).strip()
        if not chunk:
            continue
        tokens = _TOKEN_RE.findall(chunk)
        if tokens:
            sentences.append(tokens)
    return sentences


def pos_tag(sentences: Sequence[Sequence[str]], lexicon: Lexicon) -> list[list[TaggedToken]]:
    """Tag every token: lexicon hit wins, else suffix rules, else OTHER."""
    tagged = []
    for s_idx, sentence in enumerate(sentences):
        row = []
        for t_idx, token in enumerate(sentence):
            if token.startswith(PLACEHOLDER_PREFIX):
                tag = MATH
            elif re.fullmatch(r"[^\w\s]+", token):
                tag = SYM
            else:
                tag = lexicon.tag_word(token)
            row.append(TaggedToken(token, tag, s_idx, t_idx))
        tagged.append(row)
    return tagged


def annotate_math(
    tagged: Sequence[Sequence[TaggedToken]],
    formula_identifiers: Sequence[Sequence[Identifier]],
    doc_identifiers: dict[str, Identifier],
) -> list[list[TaggedToken]]:
    """Resolve placeholders and re-tag identifier tokens.

    A placeholder whose formula holds more than one identifier keeps the
    MATH tag; with exactly one identifier the token is replaced by that
    identifier and tagged ID.  Plain tokens matching a known document
    identifier are re-tagged ID as well.
    """
    out = []
    for sentence in tagged:
        row = []
        for tok in sentence:
            if tok.text.startswith(PLACEHOLDER_PREFIX):
                suffix = tok.text[len(PLACEHOLDER_PREFIX) :]
                try:
                    idx = int(suffix)
                    ids = formula_identifiers[idx]
                except (ValueError, IndexError):
                    raise UnknownPlaceholder(tok.text) from None
                if len(ids) == 1:
                    ident = ids[0]
                    row.append(replace(tok, text=ident.key, tag=ID, identifier=ident))
                else:
                    row.append(replace(tok, tag=MATH))
            elif tok.text in doc_identifiers and tok.tag not in (LINK, NOUN_PHRASE):
                row.append(replace(tok, tag=ID, identifier=doc_identifiers[tok.text]))
            else:
                row.append(tok)
        out.append(row)
    return out


def chunk_phrases(tagged: Sequence[Sequence[TaggedToken]]) -> list[list[TaggedToken]]:
    """Collapse ``[[...]]`` spans to LINK and noun runs to NOUN_PHRASE.

    A noun run is a maximal (JJ)* (NN|NNS)+ sequence; chunking never
    crosses sentence boundaries.
    """
    out = []
    for sentence in tagged:
        merged = _merge_links(sentence)
        out.append(_merge_noun_runs(merged))
    return out


def _merge_links(sentence: Sequence[TaggedToken]) -> list[TaggedToken]:
    row: list[TaggedToken] = []
    i = 0
    while i < len(sentence):
        tok = sentence[i]
        if tok.text == "[[":
            j = i + 1
            inner = []
            while j < len(sentence) and sentence[j].text != "]]":
                inner.append(sentence[j].text)
                j += 1
            if j == len(sentence):
                raise UnterminatedLink(
                    f"sentence {tok.sentence_idx}: '[[' without ']]'"
                )
            row.append(
                TaggedToken(" ".join(inner), LINK, tok.sentence_idx, tok.token_idx)
            )
            i = j + 1
        else:
            row.append(tok)
            i += 1
    return row


def _merge_noun_runs(sentence: Sequence[TaggedToken]) -> list[TaggedToken]:
    row: list[TaggedToken] = []
    i = 0
    while i < len(sentence):
        tok = sentence[i]
        if tok.tag in (JJ, NN, NNS):
            j = i
            adjectives = []
            while j < len(sentence) and sentence[j].tag == JJ:
                adjectives.append(sentence[j])
                j += 1
            nouns = []
            while j < len(sentence) and sentence[j].tag in (NN, NNS):
                nouns.append(sentence[j])
                j += 1
            if nouns:
                parts = [t.text for t in adjectives + nouns]
                row.append(
                    TaggedToken(
                        " ".join(parts), NOUN_PHRASE, tok.sentence_idx, tok.token_idx
                    )
                )
                i = j
            else:
                row.append(tok)  # adjectives without a noun stay as-is
                i += 1
        else:
            row.append(tok)
            i += 1
    return row
