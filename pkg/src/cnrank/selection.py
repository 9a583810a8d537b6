"""Budgeted sentence selection and the full ranking sweep.

The diversity-aware selection splits a budget across topic clusters in
proportion to their within-cluster spread (floor of the proportional
share), solves each cluster independently (top-score for count budgets,
a 0-1 knapsack DP for word budgets), then fills any residual budget
greedily by score.  Sweeping the count budget L = 1..m-1 linearizes the
per-budget selections into a total order over sentences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clustering import TopicClustering
from .document import AnnotatedDocument
from .scoring import SentenceScores

DEFAULT_PERCENTS = (5, 10, 20, 30, 40, 50, 60, 70, 80, 90)


@dataclass(frozen=True)
class SelectionBudget:
    """A selection budget: a sentence count, a word cap, or a percentage.

    Percent budgets resolve to sentence counts per document
    (round half up, floor 1) once the sentence count is known.
    """

    kind: str  # "sentence_count", "word_budget", or "percent"
    value: int
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("sentence_count", "word_budget", "percent"):
            raise ValueError(f"unknown budget kind {self.kind!r}")
        if self.value < 1:
            raise ValueError(f"budget value must be >= 1, got {self.value}")
        if self.kind == "percent" and self.value > 100:
            raise ValueError(f"percent budget must be <= 100, got {self.value}")
        if not self.label:
            prefix = {"sentence_count": "L", "word_budget": "W", "percent": ""}[self.kind]
            suffix = "%" if self.kind == "percent" else ""
            sep = "=" if prefix else ""
            object.__setattr__(self, "label", f"{prefix}{sep}{self.value}{suffix}")

    def resolve(self, num_sentences: int) -> "SelectionBudget":
        if self.kind != "percent":
            return self
        count = max(1, (2 * self.value * num_sentences + 100) // 200)
        return SelectionBudget(kind="sentence_count", value=count, label=self.label)


@dataclass(frozen=True)
class RankingResult:
    doc_id: str
    total_order: tuple[int, ...]
    selections: dict[str, tuple[int, ...]]
    quotas: dict[str, tuple[int, ...]]
    sentence_scores: tuple[float, ...]


def percent_budgets(percents: tuple[int, ...] = DEFAULT_PERCENTS) -> list[SelectionBudget]:
    """The standard percentage sweep as unresolved percent budgets."""
    return [SelectionBudget(kind="percent", value=p) for p in percents]


def allocate_quotas(wcss_values, capacity: int) -> list[int]:
    """Floor-of-proportional-share split of the budget across clusters.

    All-zero spreads (every cluster a singleton) allocate nothing; the
    residual fill then selects purely by score.
    """
    if capacity < 1:
        raise ValueError(f"capacity must be >= 1, got {capacity}")
    w = [float(x) for x in wcss_values]
    if any(x < 0 for x in w):
        raise ValueError("cluster spreads must be non-negative")
    total = sum(w)
    if total == 0.0:
        return [0] * len(w)
    return [math.floor(x / total * capacity) for x in w]


def select_count_bounded(cluster, scores, quota: int) -> list[int]:
    """Top-quota sentences of one cluster by score, ties to earlier position."""
    quota = min(quota, len(cluster))
    if quota <= 0:
        return []
    ranked = sorted(cluster, key=lambda k: (-scores[k], k))
    return ranked[:quota]


def _better(a, b):
    # (score, words, positions): higher score, then fewer words, then
    # lexicographically earlier positions
    if a[0] != b[0]:
        return a[0] > b[0]
    if a[1] != b[1]:
        return a[1] < b[1]
    return a[2] < b[2]


def select_word_bounded(cluster, scores, lengths, budget: int) -> list[int]:
    """0-1 knapsack over one cluster: max total score within a word budget.

    Exact DP over (item, residual budget) states.  Equal-score optima
    prefer fewer total words, then earlier positions.
    """
    if budget < 0:
        raise ValueError(f"budget must be >= 0, got {budget}")
    items = sorted(cluster)
    for k in items:
        if lengths[k] < 1:
            raise ValueError(f"sentence {k} has non-positive length {lengths[k]}")
    empty = (0.0, 0, ())
    dp = [empty] * (budget + 1)
    for k in items:
        wt = int(lengths[k])
        s = float(scores[k])
        for b in range(budget, wt - 1, -1):
            prev = dp[b - wt]
            cand = (prev[0] + s, prev[1] + wt, prev[2] + (k,))
            if _better(cand, dp[b]):
                dp[b] = cand
    return list(dp[budget][2])


def residual_fill(selected, scores, capacity: int) -> list[int]:
    """Grow a selection to exactly min(capacity, m) sentences by score."""
    m = len(scores)
    target = min(capacity, m)
    chosen = sorted(set(selected))
    if len(chosen) > capacity:
        raise ValueError(f"selection of {len(chosen)} already exceeds capacity {capacity}")
    remaining = sorted((k for k in range(m) if k not in set(chosen)), key=lambda k: (-scores[k], k))
    for k in remaining:
        if len(chosen) >= target:
            break
        chosen.append(k)
    return sorted(chosen)


def _select_for_count(clusters, wcss_values, scores, capacity: int):
    quotas = allocate_quotas(wcss_values, capacity)
    chosen: list[int] = []
    for members, quota in zip(clusters, quotas):
        chosen.extend(select_count_bounded(members, scores, quota))
    return residual_fill(chosen, scores, capacity), quotas


def _select_for_words(clusters, wcss_values, scores, lengths, budget: int):
    quotas = allocate_quotas(wcss_values, budget)
    chosen: list[int] = []
    for members, quota in zip(clusters, quotas):
        chosen.extend(select_word_bounded(members, scores, lengths, quota))
    used = sum(int(lengths[k]) for k in chosen)
    taken = set(chosen)
    # residual: highest-scoring sentences that still fit
    for k in sorted(range(len(scores)), key=lambda k: (-scores[k], k)):
        if k in taken:
            continue
        if used + int(lengths[k]) <= budget:
            taken.add(k)
            used += int(lengths[k])
    return sorted(taken), quotas


def rank_full(
    doc: AnnotatedDocument,
    scores: SentenceScores,
    clustering: TopicClustering,
    budgets: list[SelectionBudget] | None = None,
) -> RankingResult:
    """Per-budget selections plus the sweep-derived total sentence order.

    The total order ranks sentences by the first count budget at which
    they are selected while sweeping L = 1..m-1, with ties broken by
    score and then by position.
    """
    if clustering.wcss is None:
        raise ValueError("clustering has no WCSS values; run wcss() first")
    score_vec = np.asarray(scores.scores, dtype=float)
    m = len(score_vec)
    clusters = [clustering.members(c) for c in range(clustering.num_clusters)]
    wcss_values = clustering.wcss
    lengths = doc.content_lengths()

    first_at = [math.inf] * m
    for capacity in range(1, m):
        chosen, _ = _select_for_count(clusters, wcss_values, score_vec, capacity)
        for k in chosen:
            if math.isinf(first_at[k]):
                first_at[k] = capacity
    total_order = tuple(sorted(range(m), key=lambda k: (first_at[k], -score_vec[k], k)))

    if budgets is None:
        budgets = percent_budgets()
    selections: dict[str, tuple[int, ...]] = {}
    quota_trace: dict[str, tuple[int, ...]] = {}
    for budget in budgets:
        budget = budget.resolve(m)
        if budget.kind == "sentence_count":
            chosen, quotas = _select_for_count(clusters, wcss_values, score_vec, budget.value)
        else:
            chosen, quotas = _select_for_words(clusters, wcss_values, score_vec, lengths, budget.value)
        selections[budget.label] = tuple(chosen)
        quota_trace[budget.label] = tuple(quotas)

    return RankingResult(
        doc_id=doc.doc_id,
        total_order=total_order,
        selections=selections,
        quotas=quota_trace,
        sentence_scores=tuple(float(s) for s in score_vec),
    )
