"""End-to-end orchestration: document JSON in, ranking JSON out.

Per document: build the contextual network, compute location weights
over its content nodes, run the biased PageRank, aggregate to sentence
scores, cluster sentences on the similarity matrix (from the document,
a `<doc_id>.sim.json` sidecar, or the lemma-overlap stub), compute
WCSS, and run the budgeted selection sweep.  Batches map this over many
documents, collecting failures and wall-clock timings instead of
aborting.
"""

from __future__ import annotations

import concurrent.futures
import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import clustering as topics
from .clustering import SimilarityMatrix, TopicClustering
from .document import (
    SIMILARITY_MAX,
    SIMILARITY_MIN,
    STRUCTURES,
    AnnotatedDocument,
    DocumentError,
    parse_annotated_document,
)
from .location import DEFAULT_GAMMA, location_weights
from .network import DEFAULT_DELTA, build_network
from .scoring import DEFAULT_BETA, DEFAULT_MAX_ITER, DEFAULT_TOL, score_nodes, score_sentences
from .selection import RankingResult, SelectionBudget, rank_full


class PipelineError(RuntimeError):
    """Raised when a document cannot be ranked."""


@dataclass(frozen=True)
class PipelineConfig:
    delta: float = DEFAULT_DELTA
    beta: float = DEFAULT_BETA
    gamma: float = DEFAULT_GAMMA
    structure: str | None = None  # None: trust the document header
    damping: float = topics.DEFAULT_DAMPING
    wcss_convention: str = "sum"
    budgets: tuple[SelectionBudget, ...] | None = None  # None: percent sweep
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    ap_max_iter: int = topics.DEFAULT_MAX_ITER
    ap_convergence_window: int = topics.DEFAULT_CONVERGENCE_WINDOW
    cnr_only: bool = False
    stub_similarity: bool = False
    workers: int = 1


_CONFIG_FIELDS = {
    "delta": float,
    "beta": float,
    "gamma": float,
    "structure": str,
    "damping": float,
    "wcss_convention": str,
    "tol": float,
    "max_iter": int,
    "ap_max_iter": int,
    "ap_convergence_window": int,
    "cnr_only": lambda s: s.lower() in ("1", "true", "yes"),
    "stub_similarity": lambda s: s.lower() in ("1", "true", "yes"),
    "workers": int,
}


def parse_config_file(text: str) -> dict:
    """Flat key=value configuration; '#' starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PipelineError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_FIELDS:
            raise PipelineError(f"config line {lineno}: unknown key '{key}'")
        try:
            values[key] = _CONFIG_FIELDS[key](value.strip())
        except ValueError as exc:
            raise PipelineError(f"config line {lineno}: bad value for '{key}': {exc}") from exc
    return values


def stub_similarity_matrix(doc: AnnotatedDocument) -> SimilarityMatrix:
    """Deterministic model-free similarity: lemma-set overlap mapped to 1..5.

    Jaccard overlap of the content-lemma sets, scaled onto the annotator
    scale.  Two sentences with no content lemmas count as identical.
    """
    m = doc.num_sentences
    lemma_sets: list[set[str]] = [set() for _ in range(m)]
    for node in doc.nodes:
        lemma_sets[node.sentence].add(doc.node_lemma(node))
    values = np.full((m, m), SIMILARITY_MAX)
    for i in range(m):
        for j in range(i + 1, m):
            union = lemma_sets[i] | lemma_sets[j]
            overlap = 1.0 if not union else len(lemma_sets[i] & lemma_sets[j]) / len(union)
            values[i, j] = values[j, i] = SIMILARITY_MIN + (SIMILARITY_MAX - SIMILARITY_MIN) * overlap
    values.setflags(write=False)
    return SimilarityMatrix(values=values, provenance="stub")


def load_similarity_sidecar(path: Path, m: int) -> SimilarityMatrix:
    try:
        values = np.asarray(json.loads(path.read_text()), dtype=float)
    except (json.JSONDecodeError, ValueError) as exc:
        raise PipelineError(f"malformed similarity sidecar {path}: {exc}") from exc
    if values.shape != (m, m):
        raise PipelineError(f"similarity sidecar {path} must be {m}x{m}, got {values.shape}")
    return SimilarityMatrix(values=(values + values.T) / 2.0, provenance="model")


def resolve_similarity(
    doc: AnnotatedDocument,
    cfg: PipelineConfig,
    source_path: Path | None = None,
) -> SimilarityMatrix:
    if doc.sentence_similarity is not None:
        return SimilarityMatrix(values=doc.sentence_similarity, provenance="model")
    if source_path is not None:
        sidecar = source_path.with_name(f"{doc.doc_id}.sim.json")
        if sidecar.exists():
            return load_similarity_sidecar(sidecar, doc.num_sentences)
    if cfg.stub_similarity:
        return stub_similarity_matrix(doc)
    raise PipelineError(
        f"doc '{doc.doc_id}': no similarity source (no matrix in the document, "
        "no sidecar, and the stub is disabled)"
    )


def _single_cluster(doc: AnnotatedDocument) -> TopicClustering:
    return TopicClustering(
        assignment=tuple([0] * doc.num_sentences),
        exemplars=(0,),
        wcss=(0.0,),
        converged=True,
        fallback=False,
        iterations=0,
        final_residual=0.0,
    )


def rank_document(
    doc: AnnotatedDocument,
    cfg: PipelineConfig | None = None,
    source_path: Path | None = None,
) -> RankingResult:
    """Deterministic composition of the full ranking pipeline."""
    cfg = cfg or PipelineConfig()
    try:
        structure = cfg.structure or doc.structure
        if structure not in STRUCTURES:
            raise PipelineError(f"unknown structure '{structure}'")
        network = build_network(doc, cfg.delta)
        if doc.num_nodes == 0:
            raise PipelineError(f"doc '{doc.doc_id}': no content tokens to rank")
        lw = location_weights(structure, doc.num_nodes, cfg.gamma)
        node_scores = score_nodes(network, lw, tol=cfg.tol, max_iter=cfg.max_iter)
        sentence_scores = score_sentences(doc, node_scores, beta=cfg.beta)
        if cfg.cnr_only:
            clustered = _single_cluster(doc)
        else:
            sim = resolve_similarity(doc, cfg, source_path)
            clustered = topics.affinity_propagation(
                sim,
                damping=cfg.damping,
                max_iter=cfg.ap_max_iter,
                convergence_window=cfg.ap_convergence_window,
            )
            clustered = topics.wcss(sim, clustered, convention=cfg.wcss_convention)
        budgets = list(cfg.budgets) if cfg.budgets is not None else None
        return rank_full(doc, sentence_scores, clustered, budgets)
    except PipelineError:
        raise
    except (ValueError, DocumentError) as exc:
        raise PipelineError(f"doc '{doc.doc_id}': {exc}") from exc


def ranking_to_dict(result: RankingResult) -> dict:
    return {
        "doc_id": result.doc_id,
        "total_order": list(result.total_order),
        "selections": {label: list(sel) for label, sel in result.selections.items()},
        "quotas": {label: list(q) for label, q in result.quotas.items()},
        "scores": list(result.sentence_scores),
    }


def ranking_to_json(result: RankingResult) -> str:
    return json.dumps(ranking_to_dict(result), ensure_ascii=False, indent=2) + "\n"


@dataclass
class BatchReport:
    results: list[RankingResult] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)  # (source, error)
    seconds: dict[str, float] = field(default_factory=dict)  # doc_id -> wall time

    @property
    def total_seconds(self) -> float:
        return sum(self.seconds.values())


def _load_documents(path: Path) -> list[tuple[Path, dict]]:
    if path.is_dir():
        entries = []
        for child in sorted(path.glob("*.json")):
            if child.name.endswith(".sim.json"):
                continue
            entries.append((child, json.loads(child.read_text())))
        return entries
    raw = json.loads(path.read_text())
    if isinstance(raw, list):
        return [(path, entry) for entry in raw]
    return [(path, raw)]


def rank_batch(path: str | Path, cfg: PipelineConfig | None = None) -> BatchReport:
    """Rank every document under a path (file with one doc, array, or directory).

    Per-document failures are collected and reported; the batch always
    runs to completion.  Documents may be processed in parallel
    (cfg.workers); outputs are deterministic regardless.
    """
    cfg = cfg or PipelineConfig()
    path = Path(path)
    report = BatchReport()
    try:
        entries = _load_documents(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise PipelineError(f"cannot read documents from {path}: {exc}") from exc

    def run(entry):
        source, raw = entry
        started = time.perf_counter()
        doc = parse_annotated_document(raw)
        result = rank_document(doc, cfg, source_path=source)
        return doc.doc_id, result, time.perf_counter() - started

    if cfg.workers > 1 and len(entries) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(run, entry) for entry in entries]
            outcomes = []
            for entry, future in zip(entries, futures):
                try:
                    outcomes.append(future.result())
                except (DocumentError, PipelineError) as exc:
                    report.failures.append((str(entry[0]), str(exc)))
                    outcomes.append(None)
    else:
        outcomes = []
        for entry in entries:
            try:
                outcomes.append(run(entry))
            except (DocumentError, PipelineError) as exc:
                report.failures.append((str(entry[0]), str(exc)))
                outcomes.append(None)

    for outcome in outcomes:
        if outcome is None:
            continue
        doc_id, result, elapsed = outcome
        report.results.append(result)
        report.seconds[doc_id] = elapsed
    return report


def config_from_sources(file_values: dict | None = None, overrides: dict | None = None) -> PipelineConfig:
    """Defaults, overlaid with config-file values, overlaid with CLI values."""
    merged: dict = {}
    for source in (file_values, overrides):
        if source:
            merged.update({k: v for k, v in source.items() if v is not None})
    try:
        return replace(PipelineConfig(), **merged)
    except TypeError as exc:
        raise PipelineError(f"bad configuration: {exc}") from exc
