"""Six-criterion innovation scoring: rubric core, revision-tracked
registry, TAI-watch analytics, description ingestion, and dataset export.
"""

from .analysis import (
    InsufficientIUsError,
    LevelNoise,
    StabilityReport,
    TaiAlertConfig,
    TaiAssessment,
    contribution,
    rank_stability,
    tai_flag,
)
from .config import AppConfig, load_config
from .ingestion import (
    FetchResult,
    IngestionConfig,
    SummaryClient,
    dataset_rows,
    export_dataset,
)
from .registry import IURecord, ScoreRevision, Store, slugify
from .rubric import (
    CRITERIA,
    CompositeScore,
    Criterion,
    CriterionScore,
    InvalidScoreCardError,
    LevelOutOfRangeError,
    ScoreCard,
    UnknownCriterionError,
    anchor_text,
    composite,
    validate_scorecard,
    whatif_delta,
)

__version__ = "0.1.0"

__all__ = [
    "AppConfig",
    "CRITERIA",
    "CompositeScore",
    "Criterion",
    "CriterionScore",
    "FetchResult",
    "IngestionConfig",
    "InsufficientIUsError",
    "InvalidScoreCardError",
    "IURecord",
    "LevelNoise",
    "LevelOutOfRangeError",
    "ScoreCard",
    "ScoreRevision",
    "StabilityReport",
    "Store",
    "SummaryClient",
    "TaiAlertConfig",
    "TaiAssessment",
    "anchor_text",
    "composite",
    "contribution",
    "dataset_rows",
    "export_dataset",
    "load_config",
    "rank_stability",
    "slugify",
    "tai_flag",
    "validate_scorecard",
    "whatif_delta",
]
