"""Per-segment personalization scores along the link, image, visual and theme dimensions."""

from __future__ import annotations

from dataclasses import dataclass

from .analyzer import AnalyzerConfig, tokenize
from .dom import Segment
from .profile import Profile, match_count

__all__ = ["DIMENSIONS", "DimensionScores", "dimension_sources", "saturate", "score_dimension", "score_segment"]

DIMENSIONS = ("link", "image", "visual", "theme")


@dataclass(frozen=True)
class DimensionScores:
    segment_id: int
    link: float
    image: float
    visual: float
    theme: float
    total: float


def saturate(m: int) -> float:
    if m < 0:
        raise ValueError("match count must be non-negative")
    return m / (1 + m)


def dimension_sources(kind: str, segment: Segment) -> list[str]:
    """Texts a dimension reads from.

    Each anchor, alt, title and emphasis text is kept separate so that a
    phrase never matches across two unrelated elements.
    """
    if kind == "theme":
        return [segment.text]
    if kind == "link":
        return [link.anchor_text for link in segment.links]
    if kind == "image":
        return [t for img in segment.images for t in (img.alt_text, img.title_text)]
    if kind == "visual":
        return [span.text for span in segment.emphasis]
    raise ValueError(f"unknown dimension {kind!r}")


def score_dimension(
    kind: str, segment: Segment, profile: Profile, cfg: AnalyzerConfig | None = None
) -> float:
    """``m / (1 + m)`` for the number of distinct profile terms found in the source."""
    if not profile.terms:
        return 0.0
    token_lists = [toks for toks in (tokenize(t, cfg) for t in dimension_sources(kind, segment)) if toks]
    matched = sum(
        1 for term in profile.terms if any(match_count(term, toks) for toks in token_lists)
    )
    return saturate(matched)


def score_segment(segment: Segment, profile: Profile, cfg: AnalyzerConfig | None = None) -> DimensionScores:
    link, image, visual, theme = (score_dimension(k, segment, profile, cfg) for k in DIMENSIONS)
    return DimensionScores(segment.id, link, image, visual, theme, link + image + visual + theme)
