"""nlikit: augmentation data generation, long-premise split classification,
and accuracy reporting for three-way NLI classifiers."""

__version__ = "0.1.0"

from .augment import (
    AugConfig,
    YearFact,
    YearQuery,
    gen_mixed,
    gen_numeric,
    gen_overlap,
    label_year_query,
)
from .backend import (
    BackendError,
    CachedBackend,
    ClassifierBackend,
    HeuristicMockBackend,
    HttpBackend,
    OracleMockBackend,
    ProtocolError,
    heuristic_mock,
    http_classify,
    make_backend,
    oracle_mock,
)
from .evaluate import EvalReport, SweepPoint, emit_report, emit_sweep, score
from .ingest import DatasetFormat, IngestReport, read_dataset, write_dataset
from .lexicon import Lexicon, builtin_lexicon, extract_lexicon
from .records import (
    Label,
    LabelError,
    NliExample,
    Prediction,
    ProbTriple,
    argmax_label,
    format_label,
    parse_label,
)
from .split import SplitConfig, classify_plain, classify_split, split_sentences

__all__ = [
    "AugConfig",
    "BackendError",
    "CachedBackend",
    "ClassifierBackend",
    "DatasetFormat",
    "EvalReport",
    "HeuristicMockBackend",
    "HttpBackend",
    "IngestReport",
    "Label",
    "LabelError",
    "Lexicon",
    "NliExample",
    "OracleMockBackend",
    "Prediction",
    "ProbTriple",
    "ProtocolError",
    "SplitConfig",
    "SweepPoint",
    "YearFact",
    "YearQuery",
    "argmax_label",
    "builtin_lexicon",
    "classify_plain",
    "classify_split",
    "emit_report",
    "emit_sweep",
    "extract_lexicon",
    "format_label",
    "gen_mixed",
    "gen_numeric",
    "gen_overlap",
    "heuristic_mock",
    "http_classify",
    "label_year_query",
    "make_backend",
    "oracle_mock",
    "parse_label",
    "read_dataset",
    "score",
    "split_sentences",
    "write_dataset",
]
