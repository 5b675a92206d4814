"""Batch evaluation over a manifest of (group, user, profile, page) rows."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from statistics import fmean
from typing import Iterable, Sequence

from .analyzer import DfTable
from .dom import read_document
from .fusion import ExtractionConfig, extract_keywords
from .profile import read_profile

__all__ = [
    "STATS_HEADER",
    "EmptyStats",
    "GroupStats",
    "MalformedRow",
    "ManifestRow",
    "RowError",
    "aggregate_means",
    "load_manifest",
    "read_stats_csv",
    "run_eval",
    "write_stats_csv",
]

STATS_HEADER = ("group_id", "mean_initial_profile_terms", "mean_segment_count", "mean_personalized_keywords")


class MalformedRow(ValueError):
    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class EmptyStats(ValueError):
    pass


class RowError(OSError):
    """A manifest row could not be evaluated; ``index`` is zero-based."""

    def __init__(self, index: int, cause: Exception) -> None:
        super().__init__(f"row {index}: {cause}")
        self.index = index
        self.cause = cause


@dataclass(frozen=True)
class ManifestRow:
    group_id: str
    user_id: str
    profile_path: str
    page_path: str


@dataclass(frozen=True)
class GroupStats:
    group_id: str
    mean_profile_terms: float
    mean_segments: float
    mean_keywords: float


def load_manifest(text: str) -> list[ManifestRow]:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise MalformedRow(lineno, f"expected 4 tab-separated fields, got {len(fields)}")
        if not all(f.strip() for f in fields):
            raise MalformedRow(lineno, "empty field")
        rows.append(ManifestRow(*(f.strip() for f in fields)))
    return rows


def run_eval(
    rows: Sequence[ManifestRow],
    cfg: ExtractionConfig | None = None,
    df: DfTable | None = None,
    base_dir: str | None = None,
) -> list[GroupStats]:
    """Extract keywords for every row and average per group (groups in first-seen order).

    Relative paths are resolved against ``base_dir``. Any unreadable row
    aborts the run with :class:`RowError`.
    """
    cfg = cfg or ExtractionConfig()
    per_group: dict[str, list[tuple[int, int, int]]] = {}
    for index, row in enumerate(rows):
        try:
            profile = read_profile(_resolve(row.profile_path, base_dir), row.user_id, cfg.analyzer)
            doc = read_document(_resolve(row.page_path, base_dir), doc_id=row.page_path)
        except OSError as exc:
            raise RowError(index, exc) from exc
        result = extract_keywords(doc, profile, df, cfg)
        per_group.setdefault(row.group_id, []).append(
            (len(profile), len(result.segments), len(result.keywords))
        )
    return [
        GroupStats(
            gid,
            fmean(v[0] for v in vals),
            fmean(v[1] for v in vals),
            fmean(v[2] for v in vals),
        )
        for gid, vals in per_group.items()
    ]


def _resolve(path: str, base_dir: str | None) -> str:
    if base_dir is None or os.path.isabs(path):
        return path
    return os.path.join(base_dir, path)


def aggregate_means(stats: Sequence[GroupStats]) -> tuple[float, float]:
    """Unweighted mean of the group means: ``(profile terms, keywords)``."""
    if not stats:
        raise EmptyStats("no group statistics to aggregate")
    return fmean(s.mean_profile_terms for s in stats), fmean(s.mean_keywords for s in stats)


def write_stats_csv(stats: Iterable[GroupStats]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(STATS_HEADER)
    for s in stats:
        writer.writerow(
            [s.group_id, f"{s.mean_profile_terms:.2f}", f"{s.mean_segments:.2f}", f"{s.mean_keywords:.2f}"]
        )
    return buf.getvalue()


def read_stats_csv(text: str) -> list[GroupStats]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedRow(1, "missing header") from None
    if tuple(h.strip() for h in header) != STATS_HEADER:
        raise MalformedRow(1, "unexpected header")
    stats = []
    for lineno, fields in enumerate(reader, start=2):
        if not fields:
            continue
        if len(fields) != 4:
            raise MalformedRow(lineno, f"expected 4 fields, got {len(fields)}")
        try:
            values = [float(f) for f in fields[1:]]
        except ValueError:
            raise MalformedRow(lineno, "non-numeric value") from None
        stats.append(GroupStats(fields[0], *values))
    return stats
