"""Annotation front end for the cnrank sentence-ranking engine.

Two modes: `stub_annotate` needs no models and is byte-deterministic;
`annotate` (in .model) uses the pinned spaCy/encoder/similarity models
for real dependency parses, contextual embeddings, and sentence
similarities.
"""

from .stub import AnnotationError, split_sentences, stub_annotate, stub_similarity, tokenize

__version__ = "0.1.0"

__all__ = [
    "AnnotationError",
    "split_sentences",
    "stub_annotate",
    "stub_similarity",
    "tokenize",
]
