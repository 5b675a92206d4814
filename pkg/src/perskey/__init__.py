"""Personalized keyword extraction from segmented web pages."""

from .analyzer import (
    AnalyzerConfig,
    DfTable,
    EmptyCorpus,
    SegmentTermScores,
    TermScore,
    TfidfAnalyzer,
    analyze_page,
    analyze_segment,
    build_df_table,
    tokenize,
)
from .dom import (
    EmptyPage,
    RawDocument,
    SegConfig,
    Segment,
    extract_features,
    parse_document,
    segment_page,
    strip_text,
)
from .evaluation import GroupStats, aggregate_means, load_manifest, run_eval, write_stats_csv
from .fusion import (
    ExtractionConfig,
    ExtractionResult,
    FusedCell,
    FusedKeyword,
    SegmentMismatch,
    extract_keywords,
    fuse,
    threshold_filter,
)
from .profile import InvalidTerm, Profile, load_profile, match_count
from .scoring import DimensionScores, saturate, score_dimension, score_segment

__version__ = "0.1.0"
