"""Corpus-level evaluation: pair ranked selections with reference summaries.

Corpus format: a JSON array of documents, each
{"doc_id": ..., "article_sentences": [...], "references": [[...], ...]}
where every reference is a list of sentence strings.  Rankings are the
JSON objects emitted by the ranking pipeline (or any file providing
"doc_id" plus a "selections" mapping of budget label -> sentence
indices).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .metrics import EvalPair, bleu_n, rouge_l, rouge_n, rouge_su4

METRICS = ("rouge-1", "rouge-2", "rouge-l", "rouge-su4", "bleu-1", "bleu-2")


class EvalError(ValueError):
    """Raised for malformed corpus or rankings input."""


@dataclass
class CorpusDocument:
    doc_id: str
    sentences: list[str]
    references: list[list[str]]


@dataclass
class EvalReport:
    per_document: dict[str, dict[str, dict[str, float]]] = field(default_factory=dict)
    averages: dict[str, dict[str, float]] = field(default_factory=dict)


def compute_metric(name: str, pair: EvalPair) -> float:
    if name == "rouge-1":
        return rouge_n(pair, 1)
    if name == "rouge-2":
        return rouge_n(pair, 2)
    if name == "rouge-l":
        return rouge_l(pair)
    if name == "rouge-su4":
        return rouge_su4(pair)
    if name == "bleu-1":
        return bleu_n(pair, 1)
    if name == "bleu-2":
        return bleu_n(pair, 2)
    raise EvalError(f"unknown metric '{name}' (available: {', '.join(METRICS)})")


def load_corpus(data: bytes | str) -> list[CorpusDocument]:
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise EvalError(f"malformed corpus JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise EvalError("corpus must be a JSON array of documents")
    docs = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise EvalError(f"corpus entry {i} is not an object")
        for key in ("doc_id", "article_sentences", "references"):
            if key not in entry:
                raise EvalError(f"corpus entry {i} is missing '{key}'")
        refs = entry["references"]
        if not isinstance(refs, list) or not refs:
            raise EvalError(f"corpus entry {i}: at least one reference is required")
        docs.append(
            CorpusDocument(
                doc_id=str(entry["doc_id"]),
                sentences=[str(s) for s in entry["article_sentences"]],
                references=[[str(s) for s in (r if isinstance(r, list) else [r])] for r in refs],
            )
        )
    return docs


def load_rankings(data: bytes | str) -> dict[str, dict[str, list[int]]]:
    """Map doc_id -> {budget label -> selected sentence indices}."""
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise EvalError(f"malformed rankings JSON: {exc}") from exc
    if isinstance(raw, dict):
        raw = [raw]
    if not isinstance(raw, list):
        raise EvalError("rankings must be a JSON object or array")
    out = {}
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict) or "doc_id" not in entry or "selections" not in entry:
            raise EvalError(f"rankings entry {i} must contain 'doc_id' and 'selections'")
        out[str(entry["doc_id"])] = {
            str(label): [int(k) for k in idxs] for label, idxs in entry["selections"].items()
        }
    return out


def evaluate_rankings(
    corpus: list[CorpusDocument],
    rankings: dict[str, dict[str, list[int]]],
    metrics: tuple[str, ...] = METRICS,
) -> EvalReport:
    """Score every (document, budget) selection against its references.

    Documents without rankings are skipped; macro averages are taken per
    budget label over the documents that have it.
    """
    report = EvalReport()
    sums: dict[str, dict[str, float]] = {}
    counts: dict[str, int] = {}
    for doc in corpus:
        if doc.doc_id not in rankings:
            continue
        doc_scores: dict[str, dict[str, float]] = {}
        for label, indices in rankings[doc.doc_id].items():
            bad = [k for k in indices if not 0 <= k < len(doc.sentences)]
            if bad:
                raise EvalError(f"doc '{doc.doc_id}', budget '{label}': sentence index out of range: {bad}")
            candidate = [doc.sentences[k] for k in sorted(indices)]
            pair = EvalPair.from_texts(candidate, doc.references)
            doc_scores[label] = {name: compute_metric(name, pair) for name in metrics}
            bucket = sums.setdefault(label, {name: 0.0 for name in metrics})
            for name in metrics:
                bucket[name] += doc_scores[label][name]
            counts[label] = counts.get(label, 0) + 1
        report.per_document[doc.doc_id] = doc_scores
    report.averages = {
        label: {name: sums[label][name] / counts[label] for name in metrics} for label in sums
    }
    return report


def report_to_dict(report: EvalReport) -> dict:
    return {"documents": report.per_document, "averages": report.averages}


def report_to_csv(report: EvalReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["doc_id", "budget", "metric", "score"])
    for doc_id in sorted(report.per_document):
        for label in sorted(report.per_document[doc_id]):
            for metric, score in sorted(report.per_document[doc_id][label].items()):
                writer.writerow([doc_id, label, metric, f"{score:.6f}"])
    for label in sorted(report.averages):
        for metric, score in sorted(report.averages[label].items()):
            writer.writerow(["<average>", label, metric, f"{score:.6f}"])
    return buf.getvalue()
