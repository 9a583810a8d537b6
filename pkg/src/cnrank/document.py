"""Annotated-document data model and interchange-format parsing.

A document arrives as a single JSON object produced by an annotator:
sentences with per-token lemma, stopword flag, dependency head and a
contextual embedding, plus an optional sentence-pair similarity matrix
on the annotator's 1..5 scale.  Everything downstream (network
construction, scoring, clustering, selection) consumes this model and
never touches raw text again.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

STRUCTURES = ("rectangle", "inverted_pyramid", "pyramid", "hourglass")

SIMILARITY_MIN = 1.0
SIMILARITY_MAX = 5.0
SIMILARITY_SYMMETRY_TOL = 1e-6


class DocumentError(ValueError):
    """Raised for malformed or invariant-violating document input."""


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    is_stop: bool
    head: int  # index of the governing token within the sentence; self for root
    dep_label: str
    embedding: np.ndarray

    def is_root(self, own_index: int) -> bool:
        return self.head == own_index


@dataclass(frozen=True)
class Sentence:
    index: int
    text: str
    tokens: tuple[Token, ...]

    def root_index(self) -> int:
        for t, tok in enumerate(self.tokens):
            if tok.head == t:
                return t
        raise DocumentError(f"sentence {self.index} has no root token")


@dataclass(frozen=True)
class NodeIndex:
    """Identifies one content word: global position, sentence, token offset."""

    position: int
    sentence: int
    token: int


@dataclass
class AnnotatedDocument:
    doc_id: str
    structure: str
    embedding_dim: int
    sentences: tuple[Sentence, ...]
    sentence_similarity: np.ndarray | None = None
    nodes: tuple[NodeIndex, ...] = field(default_factory=tuple)

    @property
    def num_sentences(self) -> int:
        return len(self.sentences)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    def node_token(self, node: NodeIndex) -> Token:
        return self.sentences[node.sentence].tokens[node.token]

    def node_lemma(self, node: NodeIndex) -> str:
        return self.node_token(node).lemma

    def content_lengths(self) -> list[int]:
        """Number of content tokens per sentence."""
        counts = [0] * len(self.sentences)
        for node in self.nodes:
            counts[node.sentence] += 1
        return counts


def content_nodes(doc: AnnotatedDocument) -> list[NodeIndex]:
    """All non-stopword tokens in document order, as NodeIndex entries."""
    nodes = []
    for sent in doc.sentences:
        for t, tok in enumerate(sent.tokens):
            if not tok.is_stop:
                nodes.append(NodeIndex(position=len(nodes), sentence=sent.index, token=t))
    return nodes


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise DocumentError(f"{where}: missing field '{key}'")
    return obj[key]


def _parse_token(raw, sent_idx: int, tok_idx: int, n_tokens: int, dim: int) -> Token:
    where = f"sentence {sent_idx}, token {tok_idx}"
    if not isinstance(raw, dict):
        raise DocumentError(f"{where}: token must be an object")
    head = _require(raw, "head", where)
    if not isinstance(head, int) or isinstance(head, bool) or not 0 <= head < n_tokens:
        raise DocumentError(f"{where}: head out of range (head={head}, sentence has {n_tokens} tokens)")
    embedding = _require(raw, "embedding", where)
    try:
        vec = np.asarray(embedding, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{where}: embedding is not numeric") from exc
    if vec.ndim != 1 or vec.shape[0] != dim:
        raise DocumentError(
            f"{where}: embedding dimension mismatch (got {vec.shape}, expected ({dim},))"
        )
    if not np.all(np.isfinite(vec)):
        raise DocumentError(f"{where}: embedding contains non-finite values")
    is_stop = _require(raw, "is_stop", where)
    if not isinstance(is_stop, bool):
        raise DocumentError(f"{where}: is_stop must be boolean")
    vec.setflags(write=False)
    return Token(
        surface=str(_require(raw, "surface", where)),
        lemma=str(_require(raw, "lemma", where)),
        is_stop=is_stop,
        head=head,
        dep_label=str(_require(raw, "dep_label", where)),
        embedding=vec,
    )


def _parse_sentence(raw, expect_index: int, dim: int) -> Sentence:
    where = f"sentence {expect_index}"
    if not isinstance(raw, dict):
        raise DocumentError(f"{where}: sentence must be an object")
    index = _require(raw, "index", where)
    if index != expect_index:
        raise DocumentError(f"{where}: index {index} does not match position {expect_index}")
    raw_tokens = _require(raw, "tokens", where)
    if not isinstance(raw_tokens, list) or not raw_tokens:
        raise DocumentError(f"{where}: non-empty token list required")
    tokens = tuple(
        _parse_token(t, expect_index, i, len(raw_tokens), dim) for i, t in enumerate(raw_tokens)
    )
    roots = [t for t, tok in enumerate(tokens) if tok.head == t]
    if len(roots) != 1:
        raise DocumentError(f"{where}: expected exactly one root token, found {len(roots)}")
    return Sentence(index=expect_index, text=str(_require(raw, "text", where)), tokens=tokens)


def _parse_similarity(raw, m: int) -> np.ndarray:
    try:
        mat = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DocumentError("sentence_similarity is not numeric") from exc
    if mat.shape != (m, m):
        raise DocumentError(f"sentence_similarity must be {m}x{m}, got {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise DocumentError("sentence_similarity contains non-finite values")
    if np.abs(mat - mat.T).max() > SIMILARITY_SYMMETRY_TOL:
        raise DocumentError("sentence_similarity is asymmetric")
    if np.abs(np.diag(mat) - SIMILARITY_MAX).max() > SIMILARITY_SYMMETRY_TOL:
        raise DocumentError(f"sentence_similarity diagonal must equal {SIMILARITY_MAX}")
    if mat.min() < SIMILARITY_MIN - SIMILARITY_SYMMETRY_TOL or mat.max() > SIMILARITY_MAX + SIMILARITY_SYMMETRY_TOL:
        raise DocumentError(
            f"sentence_similarity values must lie in [{SIMILARITY_MIN}, {SIMILARITY_MAX}]"
        )
    mat = (mat + mat.T) / 2.0
    mat.setflags(write=False)
    return mat


def parse_annotated_document(data: bytes | str | dict) -> AnnotatedDocument:
    """Parse and validate the interchange JSON into an AnnotatedDocument.

    Accepts raw bytes, a JSON string, or an already-decoded object.
    Raises DocumentError (never a bare decoding exception) on any
    malformed input or violated invariant.
    """
    if isinstance(data, (bytes, str)):
        try:
            obj = json.loads(data)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise DocumentError(f"malformed document JSON: {exc}") from exc
    else:
        obj = data
    if not isinstance(obj, dict):
        raise DocumentError("document must be a JSON object")

    doc_id = str(_require(obj, "doc_id", "document"))
    structure = _require(obj, "structure", "document")
    if structure not in STRUCTURES:
        raise DocumentError(f"unknown structure '{structure}' (expected one of {STRUCTURES})")
    dim = _require(obj, "embedding_dim", "document")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DocumentError(f"embedding_dim must be a positive integer, got {dim!r}")

    raw_sentences = _require(obj, "sentences", "document")
    if not isinstance(raw_sentences, list) or not raw_sentences:
        raise DocumentError("document must contain at least one sentence")
    sentences = tuple(_parse_sentence(s, i, dim) for i, s in enumerate(raw_sentences))

    similarity = None
    if obj.get("sentence_similarity") is not None:
        similarity = _parse_similarity(obj["sentence_similarity"], len(sentences))

    doc = AnnotatedDocument(
        doc_id=doc_id,
        structure=structure,
        embedding_dim=dim,
        sentences=sentences,
        sentence_similarity=similarity,
    )
    doc.nodes = tuple(content_nodes(doc))
    return doc


def document_to_dict(doc: AnnotatedDocument) -> dict:
    """Canonical dict form of a document; inverse of parse_annotated_document."""
    out = {
        "doc_id": doc.doc_id,
        "structure": doc.structure,
        "embedding_dim": doc.embedding_dim,
        "sentences": [
            {
                "index": s.index,
                "text": s.text,
                "tokens": [
                    {
                        "surface": t.surface,
                        "lemma": t.lemma,
                        "is_stop": t.is_stop,
                        "head": t.head,
                        "dep_label": t.dep_label,
                        "embedding": [float(x) for x in t.embedding],
                    }
                    for t in s.tokens
                ],
            }
            for s in doc.sentences
        ],
    }
    if doc.sentence_similarity is not None:
        out["sentence_similarity"] = [[float(x) for x in row] for row in doc.sentence_similarity]
    return out


def serialize_document(doc: AnnotatedDocument) -> str:
    return json.dumps(document_to_dict(doc), ensure_ascii=False, indent=2)
