"""Transcript features: tokenization, lexical-complexity metrics, CoNLL-U
ingestion, part-of-speech / dependency counts, and lexicon sentiment.

Tagging itself is out of scope; tags arrive via CoNLL-U files produced by
any external tagger.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyLexicon, MalformedConllu
from .functionals import FeatureVector

DEFAULT_MARKERS = frozenset({"xxx", "[unintelligible]", "[inaudible]"})

DEFAULT_SUFFIXES = ("ness", "ment", "tion", "ity", "able", "ful", "less", "ly")

NUMBER_WORDS = frozenset({
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen", "twenty", "thirty",
    "forty", "fifty", "sixty", "seventy", "eighty", "ninety", "hundred",
    "thousand", "million", "billion",
})

# universal part-of-speech inventory, plus a bucket for untagged tokens
UPOS_TAGS = (
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
)
# universal dependency relations (subtypes like nsubj:pass fold into the base)
DEPRELS = (
    "acl", "advcl", "advmod", "amod", "appos", "aux", "case", "cc", "ccomp",
    "clf", "compound", "conj", "cop", "csubj", "dep", "det", "discourse",
    "dislocated", "expl", "fixed", "flat", "goeswith", "iobj", "list",
    "mark", "nmod", "nsubj", "nummod", "obj", "obl", "orphan", "parataxis",
    "punct", "reparandum", "root", "vocative", "xcomp",
)
UNTAGGED = "UNTAGGED"

_NUMERIC_RE = re.compile(r"^\d+(?:[.,]\d+)*$")


@dataclass(frozen=True)
class Token:
    surface: str
    lower: str
    pos: str | None = None
    deprel: str | None = None
    is_unintelligible: bool = False


@dataclass(frozen=True)
class Transcript:
    sentences: tuple[tuple[Token, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sentences", tuple(tuple(s) for s in self.sentences))
        for sentence in self.sentences:
            if not sentence:
                raise ValueError("sentences must be nonempty")
            if any(not t.surface for t in sentence):
                raise ValueError("token surfaces must be nonempty")

    def tokens(self) -> list[Token]:
        return [t for sentence in self.sentences for t in sentence]

    @property
    def n_tokens(self) -> int:
        return sum(len(s) for s in self.sentences)


@dataclass(frozen=True)
class ComplexityFeatures:
    unintelligible_word_ratio: float
    standardized_word_entropy: float
    suffix_ratio: float
    number_ratio: float
    brunet_index: float
    honore_statistic: float
    type_token_ratio: float


COMPLEXITY_FEATURE_NAMES = (
    "unintelligible_word_ratio", "standardized_word_entropy", "suffix_ratio",
    "number_ratio", "brunet_index", "honore_statistic", "type_token_ratio",
)


@dataclass(frozen=True)
class SyntaxCounts:
    pos_counts: dict[str, int]
    dep_counts: dict[str, int]
    total_tokens: int

    def rate(self, count: int) -> float:
        return count / self.total_tokens if self.total_tokens else np.nan


def tokenize(text: str, markers: frozenset[str] = DEFAULT_MARKERS) -> Transcript:
    """Split text into sentences on .!? and tokens on whitespace.

    Marker matching happens on the raw lowercased token before punctuation
    stripping, so bracketed markers like "[inaudible]" survive. Tokens that
    are pure punctuation vanish.
    """
    sentences = []
    for chunk in re.split(r"[.!?]+", text):
        tokens = []
        for raw in chunk.split():
            flagged = raw.lower() in markers
            surface = raw.strip(string.punctuation)
            if not surface:
                continue
            tokens.append(Token(surface, surface.lower(), is_unintelligible=flagged))
        if tokens:
            sentences.append(tuple(tokens))
    return Transcript(tuple(sentences))


def complexity(
    t: Transcript,
    lexicon: frozenset[str] | set[str] | None = None,
    suffixes: tuple[str, ...] = DEFAULT_SUFFIXES,
    number_words: frozenset[str] = NUMBER_WORDS,
) -> ComplexityFeatures:
    """Seven lexical-richness metrics.

    With N tokens, V distinct lower forms, V1 forms occurring once:
    entropy is base-2 Shannon over token frequencies standardized by
    log2(V) (NaN when V=1); brunet = N^(V^-0.165); honore =
    100 ln(N)/(1 - V1/V) (NaN when every type is a hapax); suffix matches
    require the word to be strictly longer than the suffix.
    """
    tokens = t.tokens()
    n = len(tokens)
    if n == 0:
        nan = float("nan")
        return ComplexityFeatures(nan, nan, nan, nan, nan, nan, nan)

    lowers = [tok.lower for tok in tokens]
    counts: dict[str, int] = {}
    for w in lowers:
        counts[w] = counts.get(w, 0) + 1
    v = len(counts)
    v1 = sum(1 for c in counts.values() if c == 1)

    unintelligible = sum(
        1 for tok in tokens
        if tok.is_unintelligible or (lexicon is not None and tok.lower not in lexicon)
    )
    probs = np.array(list(counts.values()), dtype=float) / n
    entropy = float(-(probs * np.log2(probs)).sum())
    standardized = entropy / np.log2(v) if v > 1 else float("nan")
    suffix_hits = sum(
        1 for w in lowers
        if any(w.endswith(suf) and len(w) > len(suf) for suf in suffixes)
    )
    number_hits = sum(1 for w in lowers if _NUMERIC_RE.match(w) or w in number_words)
    brunet = n ** (v ** -0.165)
    honore = 100.0 * np.log(n) / (1.0 - v1 / v) if v1 != v else float("nan")

    return ComplexityFeatures(
        unintelligible_word_ratio=unintelligible / n,
        standardized_word_entropy=standardized,
        suffix_ratio=suffix_hits / n,
        number_ratio=number_hits / n,
        brunet_index=float(brunet),
        honore_statistic=float(honore),
        type_token_ratio=v / n,
    )


def load_conllu(path: str | Path, markers: frozenset[str] = DEFAULT_MARKERS) -> Transcript:
    """Parse a CoNLL-U file into a tagged Transcript.

    Token lines carry 10 tab-separated columns; UPOS is column 4 and DEPREL
    column 8 ("_" means untagged). Multiword ranges ("1-2") and empty nodes
    ("1.1") are skipped. Sentences separate on blank lines.
    """
    path = Path(path)
    sentences: list[tuple[Token, ...]] = []
    current: list[Token] = []
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            if current:
                sentences.append(tuple(current))
                current = []
            continue
        if line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise MalformedConllu(
                f"{path.name}:{line_no}: {len(cols)} columns, expected 10"
            )
        token_id = cols[0]
        if "-" in token_id or "." in token_id:
            continue
        surface = cols[1]
        pos = cols[3] if cols[3] != "_" else None
        deprel = cols[7] if cols[7] != "_" else None
        current.append(Token(
            surface=surface,
            lower=surface.lower(),
            pos=pos,
            deprel=deprel,
            is_unintelligible=surface.lower() in markers,
        ))
    if current:
        sentences.append(tuple(current))
    return Transcript(tuple(sentences))


def syntax_counts(t: Transcript) -> SyntaxCounts:
    """Token counts over the fixed tag and relation inventories.

    Unknown or missing tags land in UNTAGGED so the output width never
    varies. Relation subtypes fold into their base (nsubj:pass -> nsubj).
    """
    pos_counts = {tag: 0 for tag in UPOS_TAGS + (UNTAGGED,)}
    dep_counts = {rel: 0 for rel in DEPRELS + (UNTAGGED,)}
    tokens = t.tokens()
    for tok in tokens:
        pos = tok.pos if tok.pos in pos_counts else UNTAGGED
        pos_counts[pos] += 1
        base = tok.deprel.split(":")[0] if tok.deprel else None
        dep = base if base in dep_counts else UNTAGGED
        dep_counts[dep] += 1
    return SyntaxCounts(pos_counts, dep_counts, len(tokens))


SYNTAX_FEATURE_NAMES = (
    tuple(f"pos_count_{tag}" for tag in UPOS_TAGS + (UNTAGGED,))
    + tuple(f"pos_rate_{tag}" for tag in UPOS_TAGS + (UNTAGGED,))
    + tuple(f"dep_count_{rel}" for rel in DEPRELS + (UNTAGGED,))
    + tuple(f"dep_rate_{rel}" for rel in DEPRELS + (UNTAGGED,))
)


def syntax_feature_vector(sc: SyntaxCounts, source_id: str = "") -> FeatureVector:
    values = (
        [float(sc.pos_counts[tag]) for tag in UPOS_TAGS + (UNTAGGED,)]
        + [sc.rate(sc.pos_counts[tag]) for tag in UPOS_TAGS + (UNTAGGED,)]
        + [float(sc.dep_counts[rel]) for rel in DEPRELS + (UNTAGGED,)]
        + [sc.rate(sc.dep_counts[rel]) for rel in DEPRELS + (UNTAGGED,)]
    )
    return FeatureVector(SYNTAX_FEATURE_NAMES, np.asarray(values), source_id)


def complexity_feature_vector(cf: ComplexityFeatures, source_id: str = "") -> FeatureVector:
    values = np.array([getattr(cf, name) for name in COMPLEXITY_FEATURE_NAMES])
    return FeatureVector(COMPLEXITY_FEATURE_NAMES, values, source_id)


def sentiment(t: Transcript, lexicon: dict[str, float]) -> float:
    """Mean valence of lexicon-matched token occurrences; NaN if none match."""
    if not lexicon:
        raise EmptyLexicon("sentiment lexicon is empty")
    hits = [lexicon[tok.lower] for tok in t.tokens() if tok.lower in lexicon]
    return float(np.mean(hits)) if hits else float("nan")


# ---------------------------------------------------------------------------
# lexicon file loaders
# ---------------------------------------------------------------------------

def load_valence_csv(path: str | Path) -> dict[str, float]:
    """CSV "word,valence" per line; one optional header line tolerated."""
    out: dict[str, float] = {}
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    for i, line in enumerate(lines):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"line {i + 1}: expected 'word,valence', got {line!r}")
        word, raw = parts[0].strip().lower(), parts[1].strip()
        try:
            out[word] = float(raw)
        except ValueError:
            if i == 0:
                continue  # header
            raise ValueError(f"line {i + 1}: bad valence {raw!r}") from None
    if not out:
        raise EmptyLexicon(f"{path}: no valence entries")
    return out


def load_word_list(path: str | Path) -> frozenset[str]:
    words = {
        line.strip().lower()
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    }
    return frozenset(words)


def load_suffix_list(path: str | Path) -> tuple[str, ...]:
    return tuple(
        line.strip().lower()
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    )
