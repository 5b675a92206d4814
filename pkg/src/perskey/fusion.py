"""Score fusion, thresholding and the end-to-end extraction pipeline."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .analyzer import Analyzer, AnalyzerConfig, DfTable, SegmentTermScores, analyze_page
from .dom import EmptyPage, RawDocument, SegConfig, parse_document, segment_page
from .profile import Profile
from .scoring import DimensionScores, score_segment

__all__ = [
    "ExtractionConfig",
    "ExtractionResult",
    "FusedCell",
    "FusedKeyword",
    "SegmentMismatch",
    "extract_keywords",
    "fuse",
    "threshold_filter",
]


class SegmentMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ExtractionConfig:
    threshold: float = 1.0
    seg: SegConfig = field(default_factory=SegConfig)
    analyzer: AnalyzerConfig = field(default_factory=AnalyzerConfig)

    def __post_init__(self) -> None:
        if not self.threshold >= 0:
            raise ValueError(f"threshold must be >= 0, got {self.threshold}")


@dataclass(frozen=True)
class FusedCell:
    term: str
    segment_id: int
    delta: float
    lam: float

    @property
    def fused(self) -> float:
        return self.delta + self.lam


@dataclass(frozen=True)
class FusedKeyword:
    term: str
    score: float
    segments: tuple[int, ...]


def fuse(
    term_scores: Sequence[SegmentTermScores], seg_scores: Sequence[DimensionScores]
) -> list[FusedCell]:
    """Add each term's weight to the total score of the segment it came from."""
    lam = {s.segment_id: s.total for s in seg_scores}
    term_ids = {t.segment_id for t in term_scores}
    if term_ids != set(lam):
        missing = sorted(term_ids ^ set(lam))
        raise SegmentMismatch(f"segment ids not present in both inputs: {missing}")
    return [
        FusedCell(ts.term, sts.segment_id, ts.weight, lam[sts.segment_id])
        for sts in term_scores
        for ts in sts.terms
    ]


def threshold_filter(cells: Iterable[FusedCell], threshold: float) -> list[FusedKeyword]:
    """Keep cells strictly above ``threshold``; one keyword per term at its best score."""
    best: dict[str, float] = {}
    where: dict[str, set[int]] = {}
    for cell in cells:
        value = cell.fused
        if value > threshold:
            if cell.term not in best or value > best[cell.term]:
                best[cell.term] = value
            where.setdefault(cell.term, set()).add(cell.segment_id)
    keywords = [FusedKeyword(term, best[term], tuple(sorted(where[term]))) for term in best]
    keywords.sort(key=lambda k: (-k.score, k.term))
    return keywords


@dataclass(frozen=True)
class ExtractionResult:
    doc_id: str
    keywords: tuple[FusedKeyword, ...]
    segments: tuple[DimensionScores, ...]
    segment_paths: tuple[str, ...]
    candidate_count: int
    empty_page: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "doc_id": self.doc_id,
            "keywords": [
                {"term": k.term, "score": k.score, "segments": list(k.segments)}
                for k in self.keywords
            ],
            "segments": [
                {
                    "id": s.segment_id,
                    "path": path,
                    "L": s.link,
                    "I": s.image,
                    "V": s.visual,
                    "T": s.theme,
                    "lambda": s.total,
                }
                for s, path in zip(self.segments, self.segment_paths)
            ],
            "candidate_count": self.candidate_count,
        }

    def to_json(self) -> str:
        return _dump_json(self.to_dict()) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["term", "score", "segment_ids"])
        for k in self.keywords:
            writer.writerow([k.term, f"{k.score:.6f}", ";".join(map(str, k.segments))])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"{self.doc_id}: {len(self.keywords)} keywords from {len(self.segments)} segments"]
        if self.empty_page:
            lines.append("(page has no text content)")
        for k in self.keywords:
            lines.append(f"  {k.score:8.4f}  {k.term}  [{', '.join(map(str, k.segments))}]")
        return "\n".join(lines) + "\n"


def _dump_json(obj: Any, indent: int = 0) -> str:
    # json.dumps cannot fix the number of decimals, so floats are formatted here
    pad = "  " * (indent + 1)
    if isinstance(obj, float):
        return f"{obj:.6f}"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(isinstance(v, int) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(map(str, obj)) + "]"
        items = [pad + _dump_json(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(obj, ensure_ascii=False)


def extract_keywords(
    doc: RawDocument,
    profile: Profile,
    df: DfTable | None = None,
    cfg: ExtractionConfig | None = None,
    analyzer: Analyzer | None = None,
) -> ExtractionResult:
    """Segment, analyze, score, fuse and threshold one page."""
    cfg = cfg or ExtractionConfig()
    try:
        segments = segment_page(parse_document(doc), cfg.seg)
    except EmptyPage:
        return ExtractionResult(doc.doc_id, (), (), (), 0, empty_page=True)
    term_scores = analyze_page(segments, df, cfg.analyzer, analyzer)
    seg_scores = [score_segment(s, profile, cfg.analyzer) for s in segments]
    cells = fuse(term_scores, seg_scores)
    keywords = threshold_filter(cells, cfg.threshold)
    candidates = {cell.term for cell in cells}
    return ExtractionResult(
        doc.doc_id,
        tuple(keywords),
        tuple(seg_scores),
        tuple(s.path for s in segments),
        len(candidates),
    )
