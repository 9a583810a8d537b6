"""Model-free deterministic annotation.

Stub mode exists so the ranking engine can be exercised end to end
without any model assets: sentence splitting and tokenization are
regex-based, heads form a previous-token chain, embeddings are
hash-seeded unit vectors per (lemma, sentence index), and sentence
similarity is lemma-set overlap scaled onto the 1..5 range.  Identical
input bytes produce identical output bytes on every machine.
"""

from __future__ import annotations

import hashlib
import json
import re

import numpy as np

SIMILARITY_MIN = 1.0
SIMILARITY_MAX = 5.0

_SENTENCE_RE = re.compile(r"(?<=[.!?])\s+")
_TOKEN_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)?", re.UNICODE)

# fixed list; deliberately small and frozen so stub output never drifts
STOPWORDS = frozenset(
    """
    a about above after again all am an and any are aren't as at be because
    been before being below between both but by can cannot could couldn't did
    didn't do does doesn't doing don't down during each few for from further
    had hadn't has hasn't have haven't having he he'd he'll he's her here
    here's hers herself him himself his how how's i i'd i'll i'm i've if in
    into is isn't it it's its itself let's me more most mustn't my myself no
    nor not of off on once only or other ought our ours ourselves out over
    own same shan't she she'd she'll she's should shouldn't so some such than
    that that's the their theirs them themselves then there there's these
    they they'd they'll they're they've this those through to too under until
    up very was wasn't we we'd we'll we're we've were weren't what what's
    when when's where where's which while who who's whom why why's with won't
    would wouldn't you you'd you'll you're you've your yours yourself
    yourselves
    """.split()
)


class AnnotationError(ValueError):
    """Raised when input text cannot be annotated."""


def split_sentences(text: str) -> list[str]:
    parts = [p.strip() for p in _SENTENCE_RE.split(text.strip()) if p.strip()]
    if not parts:
        raise AnnotationError("text contains no sentences")
    return parts


def tokenize(sentence: str) -> list[str]:
    return _TOKEN_RE.findall(sentence)


def lemma_of(surface: str) -> str:
    lemma = surface.lower()
    if lemma.endswith("'s"):
        lemma = lemma[:-2]
    return lemma or surface.lower()


def hash_embedding(lemma: str, sentence_index: int, dim: int) -> list[float]:
    """Unit-norm vector derived purely from SHA-256 bytes; no RNG involved."""
    values: list[float] = []
    counter = 0
    key = f"{lemma}|{sentence_index}"
    while len(values) < dim:
        digest = hashlib.sha256(f"{key}|{counter}".encode("utf-8")).digest()
        for off in range(0, 32, 8):
            if len(values) >= dim:
                break
            chunk = int.from_bytes(digest[off : off + 8], "big", signed=False)
            values.append(chunk / 2**63 - 1.0)  # uniform in [-1, 1)
        counter += 1
    vec = np.array(values)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        vec[0] = 1.0
        norm = 1.0
    return [float(x) for x in vec / norm]


def stub_similarity(sentence_lemmas: list[set[str]]) -> list[list[float]]:
    """Jaccard overlap of content-lemma sets, mapped onto [1, 5]."""
    m = len(sentence_lemmas)
    matrix = [[SIMILARITY_MAX] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            union = sentence_lemmas[i] | sentence_lemmas[j]
            overlap = 1.0 if not union else len(sentence_lemmas[i] & sentence_lemmas[j]) / len(union)
            value = SIMILARITY_MIN + (SIMILARITY_MAX - SIMILARITY_MIN) * overlap
            matrix[i][j] = matrix[j][i] = value
    return matrix


def stub_annotate(
    text: str,
    dim: int = 16,
    structure: str = "inverted_pyramid",
    doc_id: str | None = None,
) -> dict:
    """Annotate text without models; output is byte-deterministic."""
    if dim < 2:
        raise AnnotationError(f"embedding dimension must be >= 2, got {dim}")
    if not text or not text.strip():
        raise AnnotationError("text is empty")
    if doc_id is None:
        doc_id = "stub-" + hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]

    sentences = []
    content_lemmas: list[set[str]] = []
    for k, sent_text in enumerate(split_sentences(text)):
        surfaces = tokenize(sent_text)
        if not surfaces:
            continue
        tokens = []
        lemmas: set[str] = set()
        for t, surface in enumerate(surfaces):
            lemma = lemma_of(surface)
            is_stop = lemma in STOPWORDS
            if not is_stop:
                lemmas.add(lemma)
            tokens.append(
                {
                    "surface": surface,
                    "lemma": lemma,
                    "is_stop": is_stop,
                    "head": max(0, t - 1),  # previous-token chain, token 0 is root
                    "dep_label": "ROOT" if t == 0 else "dep",
                    "embedding": hash_embedding(lemma, len(sentences), dim),
                }
            )
        sentences.append({"index": len(sentences), "text": sent_text, "tokens": tokens})
        content_lemmas.append(lemmas)
    if not sentences:
        raise AnnotationError("text contains no tokens")

    return {
        "doc_id": doc_id,
        "structure": structure,
        "embedding_dim": dim,
        "sentences": sentences,
        "sentence_similarity": stub_similarity(content_lemmas),
    }


def document_json(doc: dict) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"
