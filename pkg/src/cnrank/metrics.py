"""N-gram overlap metrics and reference-based selection baselines.

Tokenization is fixed for reproducibility: lowercase, split on anything
that is not alphanumeric, no stemming.  ROUGE variants are recall
oriented and macro-average over multiple references; BLEU follows the
standard multi-reference definition (clipping against the maximum
reference count, brevity penalty against the closest reference length).
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# recall weight of the ROUGE-L F-measure; large values follow the
# recall-oriented convention used for summarization evaluation
ROUGE_L_BETA = 8.0

SU4_MAX_GAP = 4  # skip-bigrams may span at most this many intervening tokens


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class EvalPair:
    candidate: tuple[str, ...]
    references: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if not self.references or all(len(r) == 0 for r in self.references):
            raise ValueError("at least one non-empty reference is required")

    @classmethod
    def from_texts(cls, candidate: str | list[str], references) -> "EvalPair":
        """Build a pair from raw text; lists are concatenated in order."""
        cand_texts = [candidate] if isinstance(candidate, str) else list(candidate)
        cand = tuple(tok for t in cand_texts for tok in tokenize(t))
        refs = []
        for ref in references:
            ref_texts = [ref] if isinstance(ref, str) else list(ref)
            refs.append(tuple(tok for t in ref_texts for tok in tokenize(t)))
        return cls(candidate=cand, references=tuple(refs))


def _ngram_counts(tokens, n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _clipped_recall(cand_counts: Counter, ref_counts: Counter) -> float:
    total = sum(ref_counts.values())
    if total == 0:
        return 0.0
    matched = sum(min(c, cand_counts[g]) for g, c in ref_counts.items())
    return matched / total


def rouge_n(pair: EvalPair, n: int) -> float:
    """Clipped n-gram recall, averaged over references."""
    if n not in (1, 2):
        raise ValueError(f"n must be 1 or 2, got {n}")
    cand = _ngram_counts(pair.candidate, n)
    scores = [_clipped_recall(cand, _ngram_counts(ref, n)) for ref in pair.references]
    return sum(scores) / len(scores)


def _lcs_length(a, b) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[-1]))
        prev = cur
    return prev[-1]


def rouge_l(pair: EvalPair, beta: float = ROUGE_L_BETA) -> float:
    """LCS-based F-measure with recall weighted by beta, averaged over refs."""
    scores = []
    for ref in pair.references:
        lcs = _lcs_length(pair.candidate, ref)
        if lcs == 0:
            scores.append(0.0)
            continue
        recall = lcs / len(ref)
        precision = lcs / len(pair.candidate)
        scores.append((1 + beta**2) * recall * precision / (recall + beta**2 * precision))
    return sum(scores) / len(scores)


def _su4_units(tokens) -> Counter:
    units = Counter((t,) for t in tokens)
    for i in range(len(tokens)):
        for j in range(i + 1, min(i + SU4_MAX_GAP + 2, len(tokens))):
            units[(tokens[i], tokens[j])] += 1
    return units


def rouge_su4(pair: EvalPair) -> float:
    """Skip-bigram (max gap 4) plus unigram recall, averaged over refs."""
    cand = _su4_units(pair.candidate)
    scores = [_clipped_recall(cand, _su4_units(ref)) for ref in pair.references]
    return sum(scores) / len(scores)


def bleu_n(pair: EvalPair, n: int) -> float:
    """BLEU with uniform weights over 1..n-gram clipped precisions."""
    if n not in (1, 2):
        raise ValueError(f"n must be 1 or 2, got {n}")
    cand = pair.candidate
    if not cand:
        return 0.0
    log_precisions = []
    for k in range(1, n + 1):
        counts = _ngram_counts(cand, k)
        max_ref = Counter()
        for ref in pair.references:
            for g, c in _ngram_counts(ref, k).items():
                max_ref[g] = max(max_ref[g], c)
        total = sum(counts.values())
        if total == 0:
            return 0.0
        matched = sum(min(c, max_ref[g]) for g, c in counts.items())
        if matched == 0:
            return 0.0
        log_precisions.append(math.log(matched / total))
    # brevity penalty against the reference length closest to the candidate
    ref_len = min((abs(len(r) - len(cand)), len(r)) for r in pair.references)[1]
    bp = 1.0 if len(cand) >= ref_len else math.exp(1.0 - ref_len / len(cand))
    return bp * math.exp(sum(log_precisions) / n)


def lead_baseline(num_sentences: int, k: int) -> list[int]:
    """The first min(k, m) sentence indices."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return list(range(min(k, num_sentences)))


def greedy_oracle(
    sentences: list[str],
    references,
    budget_sentences: int | None = None,
    budget_words: int | None = None,
) -> list[int]:
    """Greedy upper-bound selection maximizing unigram recall.

    Repeatedly adds the sentence that maximizes the ROUGE-1 score of the
    accumulated selection against the references; a word budget is a
    hard cap (only sentences that still fit are considered).  Returns
    selected indices in document order.
    """
    if (budget_sentences is None) == (budget_words is None):
        raise ValueError("exactly one of budget_sentences/budget_words is required")
    ref_tokens = []
    for ref in references:
        ref_texts = [ref] if isinstance(ref, str) else list(ref)
        ref_tokens.append([tok for t in ref_texts for tok in tokenize(t)])
    sent_tokens = [tokenize(s) for s in sentences]

    selected: list[int] = []
    used_words = 0
    while True:
        if budget_sentences is not None and len(selected) >= min(budget_sentences, len(sentences)):
            break
        best_idx = None
        best_score = -1.0
        for k in range(len(sentences)):
            if k in selected:
                continue
            if budget_words is not None and used_words + len(sent_tokens[k]) > budget_words:
                continue
            trial = sorted(selected + [k])
            cand = tuple(itertools.chain.from_iterable(sent_tokens[i] for i in trial))
            pair = EvalPair(candidate=cand, references=tuple(tuple(r) for r in ref_tokens))
            score = rouge_n(pair, 1)
            if score > best_score:
                best_score = score
                best_idx = k
        if best_idx is None:
            break
        selected.append(best_idx)
        used_words += len(sent_tokens[best_idx])
    return sorted(selected)
