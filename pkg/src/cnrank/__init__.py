"""Unsupervised sentence ranking over contextual word networks.

The pipeline turns an annotated document (dependency trees, stopword
flags, contextual embeddings, sentence similarities) into a full
sentence ranking: a contextual network is scored with an
article-structure-biased PageRank, sentences are scored with a BM25
length normalizer, topics emerge from affinity propagation, and a
budget-constrained selection balances score against topic diversity.
"""

from .clustering import SimilarityMatrix, TopicClustering, affinity_propagation, wcss
from .document import (
    AnnotatedDocument,
    DocumentError,
    NodeIndex,
    Sentence,
    Token,
    content_nodes,
    parse_annotated_document,
    serialize_document,
)
from .harness import EvalError, EvalReport, evaluate_rankings, load_corpus, load_rankings
from .location import LocationWeights, location_weights
from .metrics import EvalPair, bleu_n, greedy_oracle, lead_baseline, rouge_l, rouge_n, rouge_su4
from .network import ContextualNetwork, NetworkError, build_network
from .pipeline import (
    BatchReport,
    PipelineConfig,
    PipelineError,
    rank_batch,
    rank_document,
    ranking_to_dict,
    ranking_to_json,
)
from .scoring import NodeScores, SentenceScores, score_nodes, score_sentences
from .selection import (
    RankingResult,
    SelectionBudget,
    allocate_quotas,
    rank_full,
    residual_fill,
    select_count_bounded,
    select_word_bounded,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotatedDocument",
    "BatchReport",
    "ContextualNetwork",
    "DocumentError",
    "EvalError",
    "EvalPair",
    "EvalReport",
    "LocationWeights",
    "NetworkError",
    "NodeIndex",
    "NodeScores",
    "PipelineConfig",
    "PipelineError",
    "RankingResult",
    "SelectionBudget",
    "Sentence",
    "SentenceScores",
    "SimilarityMatrix",
    "Token",
    "TopicClustering",
    "affinity_propagation",
    "allocate_quotas",
    "bleu_n",
    "build_network",
    "content_nodes",
    "evaluate_rankings",
    "greedy_oracle",
    "lead_baseline",
    "load_corpus",
    "load_rankings",
    "location_weights",
    "parse_annotated_document",
    "rank_batch",
    "rank_document",
    "rank_full",
    "ranking_to_dict",
    "ranking_to_json",
    "residual_fill",
    "rouge_l",
    "rouge_n",
    "rouge_su4",
    "score_nodes",
    "score_sentences",
    "select_count_bounded",
    "select_word_bounded",
    "serialize_document",
    "wcss",
]
