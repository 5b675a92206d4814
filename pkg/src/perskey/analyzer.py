"""Term significance: tokenization, document-frequency tables, TF-IDF weights.

The analyzer returns ``(term, weight)`` pairs per segment with weights
max-normalized into (0, 1]. Anything implementing :class:`Analyzer` can be
dropped in instead of :class:`TfidfAnalyzer`.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Protocol, Sequence

from .dom import Segment
from .stopwords import ENGLISH_STOPWORDS

__all__ = [
    "Analyzer",
    "AnalyzerConfig",
    "DfTable",
    "DfFormatError",
    "EmptyCorpus",
    "SegmentTermScores",
    "TermScore",
    "TfidfAnalyzer",
    "analyze_page",
    "analyze_segment",
    "build_df_table",
    "idf",
    "tokenize",
]

_ALNUM = re.compile(r"[^\W_]+")


class EmptyCorpus(ValueError):
    pass


class DfFormatError(ValueError):
    pass


@dataclass(frozen=True)
class AnalyzerConfig:
    min_token_len: int = 2
    stopwords: frozenset[str] = ENGLISH_STOPWORDS
    top_k: int = 20

    def __post_init__(self) -> None:
        if self.min_token_len < 1:
            raise ValueError("min_token_len must be >= 1")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        object.__setattr__(self, "stopwords", frozenset(w.lower() for w in self.stopwords))


@dataclass(frozen=True, order=True)
class TermScore:
    term: str
    weight: float


@dataclass(frozen=True)
class SegmentTermScores:
    segment_id: int
    terms: tuple[TermScore, ...]


def tokenize(text: str, cfg: AnalyzerConfig | None = None) -> list[str]:
    """Lowercased alphanumeric runs, minus short tokens and stopwords."""
    cfg = cfg or AnalyzerConfig()
    out = []
    for piece in _ALNUM.findall(text):
        tok = piece.lower()
        if len(tok) >= cfg.min_token_len and tok not in cfg.stopwords:
            out.append(tok)
    return out


@dataclass(frozen=True)
class DfTable:
    total_docs: int
    counts: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.total_docs < 1:
            raise ValueError("total_docs must be positive")
        for tok, n in self.counts.items():
            if not 1 <= n <= self.total_docs:
                raise ValueError(f"df for {tok!r} out of range: {n}")
        object.__setattr__(self, "counts", MappingProxyType(dict(self.counts)))

    def df(self, token: str) -> int:
        return self.counts.get(token, 0)

    def to_tsv(self) -> str:
        lines = [f"#total_docs\t{self.total_docs}"]
        lines.extend(f"{tok}\t{self.counts[tok]}" for tok in sorted(self.counts))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "DfTable":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("#total_docs\t"):
            raise DfFormatError("line 1: expected '#total_docs<TAB><N>' header")
        try:
            total = int(lines[0].split("\t", 1)[1])
        except ValueError:
            raise DfFormatError("line 1: total_docs is not an integer") from None
        counts = {}
        for lineno, line in enumerate(lines[1:], start=2):
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DfFormatError(f"line {lineno}: expected 2 fields, got {len(parts)}")
            try:
                counts[parts[0]] = int(parts[1])
            except ValueError:
                raise DfFormatError(f"line {lineno}: df is not an integer") from None
        try:
            return cls(total, counts)
        except ValueError as exc:
            raise DfFormatError(str(exc)) from None


def build_df_table(docs: Sequence[str], cfg: AnalyzerConfig | None = None) -> DfTable:
    if not docs:
        raise EmptyCorpus("cannot build a DF table from zero documents")
    counts: Counter[str] = Counter()
    for doc in docs:
        counts.update(set(tokenize(doc, cfg)))
    return DfTable(len(docs), counts)


def idf(df: int, total_docs: int) -> float:
    return math.log(1.0 + total_docs / (1.0 + df))


def analyze_segment(
    segment_text: str, df: DfTable, cfg: AnalyzerConfig | None = None
) -> list[TermScore]:
    cfg = cfg or AnalyzerConfig()
    tokens = tokenize(segment_text, cfg)
    if not tokens:
        return []
    n = len(tokens)
    raw = {
        tok: (count / n) * idf(df.df(tok), df.total_docs)
        for tok, count in Counter(tokens).items()
    }
    top = max(raw.values())
    scored = sorted(((-(r / top), tok) for tok, r in raw.items()))
    return [TermScore(tok, -neg) for neg, tok in scored[: cfg.top_k]]


class Analyzer(Protocol):
    def analyze(self, text: str) -> list[TermScore]: ...


class TfidfAnalyzer:
    def __init__(self, df: DfTable, cfg: AnalyzerConfig | None = None) -> None:
        self.df = df
        self.cfg = cfg or AnalyzerConfig()

    def analyze(self, text: str) -> list[TermScore]:
        return analyze_segment(text, self.df, self.cfg)


def analyze_page(
    segments: Iterable[Segment],
    df: DfTable | None = None,
    cfg: AnalyzerConfig | None = None,
    analyzer: Analyzer | None = None,
) -> list[SegmentTermScores]:
    """Score every segment. Without ``df``, each segment counts as one document."""
    segments = list(segments)
    if not segments:
        return []
    if analyzer is None:
        if df is None:
            df = build_df_table([s.text for s in segments], cfg)
        analyzer = TfidfAnalyzer(df, cfg)
    return [SegmentTermScores(s.id, tuple(analyzer.analyze(s.text))) for s in segments]
