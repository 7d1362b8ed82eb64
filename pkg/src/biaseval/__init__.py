"""biaseval: quantify gender bias in word embeddings and MT output.

Four embedding fairness metrics (WEAT, RND, RNSB, ECT) run over queries of
target/attribute word sets and rank embeddings; a Hindi gender-neutral
corpus builder plus a translation bias index score MT systems end to end.
"""

from .eec import (
    DEFAULT_PRONOUNS,
    EvaluationSet,
    Lexicon,
    PronounSpec,
    Utterance,
    build_views,
    generate_utterances,
    load_lexicon,
)
from .embeddings import EmbeddingTable, WordResolution, cosine, load_word2vec_text
from .metrics import (
    ClassifierModel,
    MetricResult,
    ect,
    kl_from_uniform,
    rnd,
    rnsb,
    spearman,
    train_attribute_classifier,
    weat,
    weat_association,
)
from .queries import (
    Query,
    QueryTemplate,
    ResolvedQuery,
    WordSet,
    default_queries_path,
    expand_subqueries,
    load_queries,
    resolve_query,
    validate_query,
)
from .ranking import (
    RankTable,
    ScoreMatrix,
    aggregate_rows,
    build_rank_table,
    build_score_matrix,
    rank_embeddings,
    render_rank_table,
)
from .tgbi import (
    DEFAULT_GENDER_LEXICON,
    BucketCounts,
    GenderLexicon,
    SetScore,
    TgbiReport,
    classify_sentence,
    count_buckets,
    load_gender_lexicon,
    p_index,
    proportions,
    render_tgbi_table,
    score_views,
)
from .translate import (
    BackendConfig,
    TranslationRecord,
    fetch_translations_http,
    join,
    load_translations_tsv,
)

__version__ = "0.1.0"

__all__ = [
    "BackendConfig",
    "BucketCounts",
    "ClassifierModel",
    "DEFAULT_GENDER_LEXICON",
    "DEFAULT_PRONOUNS",
    "EmbeddingTable",
    "EvaluationSet",
    "GenderLexicon",
    "Lexicon",
    "MetricResult",
    "PronounSpec",
    "Query",
    "QueryTemplate",
    "RankTable",
    "ResolvedQuery",
    "ScoreMatrix",
    "SetScore",
    "TgbiReport",
    "TranslationRecord",
    "Utterance",
    "WordResolution",
    "WordSet",
    "aggregate_rows",
    "build_rank_table",
    "build_score_matrix",
    "build_views",
    "classify_sentence",
    "cosine",
    "count_buckets",
    "default_queries_path",
    "ect",
    "expand_subqueries",
    "fetch_translations_http",
    "generate_utterances",
    "join",
    "kl_from_uniform",
    "load_gender_lexicon",
    "load_lexicon",
    "load_queries",
    "load_translations_tsv",
    "load_word2vec_text",
    "p_index",
    "proportions",
    "rank_embeddings",
    "render_rank_table",
    "render_tgbi_table",
    "resolve_query",
    "rnd",
    "rnsb",
    "score_views",
    "spearman",
    "train_attribute_classifier",
    "validate_query",
    "weat",
    "weat_association",
]
