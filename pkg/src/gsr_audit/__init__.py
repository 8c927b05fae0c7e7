"""gsr_audit: measure gender stereotype reinforcement in ranking systems.

The toolkit scores words, queries, documents, and ranked lists along a
gender direction extracted from word embeddings, fits the stereotype
reinforcement slope of a system against an oracle ranker, and bundles the
toy/synthetic laboratory plus the supporting retrieval engines, metrics,
and statistics.
"""

from .collection import (
    Collection,
    CollectionFormatError,
    Document,
    Qrels,
    Topic,
    parse_jsonl_docs,
    parse_qrels,
    parse_topics,
    parse_trec_docs,
    write_jsonl_docs,
)
from .embeddings import (
    EmbeddingFormatError,
    EmbeddingStore,
    load_binary,
    load_text,
    save_binary,
    save_text,
)
from .engines import (
    EngineError,
    InvertedIndex,
    RankedItem,
    RankedList,
    RunSet,
    build_index,
    perfect_engine,
    random_engine,
    ranked_from_scores,
    read_run,
    score_bm25,
    score_emb_add,
    score_emb_si,
    score_qlm,
    score_tfidf,
    truncate_to_k,
    write_run,
)
from .gender import (
    DefinitionalPairs,
    GenderDirection,
    GenderedWordSet,
    GenderGeometryError,
    debias_regular,
    debias_strong,
    extract_direction,
    genderedness,
    load_pairs,
)
from .gsr import (
    GsrError,
    GsrPoint,
    GsrResult,
    audit,
    gsr_slope,
    list_genderedness,
    relative_gsr,
)
from .metrics import (
    MetricError,
    average_precision,
    kendall_tau_distance,
    ndcg_at,
    precision_at,
)
from .stats import (
    StatError,
    paired_t_test,
    pearson,
    permutation_test_one_tailed,
    spearman,
)
from .stereotype import (
    EntityLexicons,
    GapRecord,
    StereotypeError,
    delta_gap_analysis,
    gap,
    intrinsic_genderedness,
)
from .synthetic import (
    JobTable,
    ParityResult,
    SyntheticError,
    TraitTable,
    build_synthetic_collection,
    build_toy_collection,
    parity_experiment,
    run_synthetic_gsr,
    run_toy_gsr,
    simulate_engine,
)
from .text import StopList, document_genderedness, query_genderedness, tokenize

__version__ = "0.1.0"
