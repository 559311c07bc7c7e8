"""Named-entity driven event detection for time-stamped news streams."""
from ._kernels import BACKEND as KERNEL_BACKEND
from .config import PipelineConfig
from .entities import (
    CanonicalEntity,
    EntityRegistry,
    Gazetteer,
    PersonMemory,
    Provider,
    annotate,
    canonicalize,
    disambiguate_persons,
)
from .evaluate import (
    EvalMode,
    EvalReport,
    GroundTruthTopic,
    detection_precision,
    evaluate,
    keyword_precision_recall,
    match_topic,
    topic_recall,
)
from .graph import KnowledgeGraph, aggregate_block, doc_edge_contribution, significance, weighted_degree
from .ingest import Document, SourceKind, TimeBlock, discretize, parse_corpus
from .keygraph import EventSummary, KeyGraph, build_keygraph, filter_documents, summarize
from .louvain import louvain, modularity
from .mentions import EntityKind, EntityMention
from .peaks import DegreeSeries, PeakDetectorConfig, PeakEvent, build_series, detect_peaks, peaking_entities
from .phrases import Phrase, mine_phrases
from .pipeline import run_detection

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "PipelineConfig",
    "CanonicalEntity",
    "EntityRegistry",
    "Gazetteer",
    "PersonMemory",
    "Provider",
    "annotate",
    "canonicalize",
    "disambiguate_persons",
    "EvalMode",
    "EvalReport",
    "GroundTruthTopic",
    "detection_precision",
    "evaluate",
    "keyword_precision_recall",
    "match_topic",
    "topic_recall",
    "KnowledgeGraph",
    "aggregate_block",
    "doc_edge_contribution",
    "significance",
    "weighted_degree",
    "Document",
    "SourceKind",
    "TimeBlock",
    "discretize",
    "parse_corpus",
    "EventSummary",
    "KeyGraph",
    "build_keygraph",
    "filter_documents",
    "summarize",
    "louvain",
    "modularity",
    "EntityKind",
    "EntityMention",
    "DegreeSeries",
    "PeakDetectorConfig",
    "PeakEvent",
    "build_series",
    "detect_peaks",
    "peaking_entities",
    "Phrase",
    "mine_phrases",
    "run_detection",
    "__version__",
]
