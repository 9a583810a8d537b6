"""Model-backed annotation: real parses, embeddings, and similarities.

Requires the optional model dependencies (install with
`pip install cnrank-annotator[models]`) plus the pinned model assets
from models.lock.  Dependency trees and stopword/lemma tags come from
spaCy; token embeddings are the sum of the encoder's last four hidden
layers, mean-pooled over word pieces; sentence similarity comes from a
text-to-text scorer that maps a sentence pair onto the 1..5 scale.
Pronouns are replaced by their main mention when the loaded spaCy
pipeline exposes a coreference component; otherwise they are kept.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from .stub import AnnotationError, SIMILARITY_MAX, SIMILARITY_MIN

_LOCKFILE = Path(__file__).parent / "models.lock"


def load_lock() -> dict:
    """Pinned model identifiers; flat key=value."""
    pins = {}
    for line in _LOCKFILE.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line and "=" in line:
            key, _, value = line.partition("=")
            pins[key.strip()] = value.strip()
    return pins


class ModelBundle:
    """Lazily loaded annotation models; one instance per worker process."""

    def __init__(self, spacy_model=None, encoder=None, similarity=None):
        pins = load_lock()
        self.spacy_model = spacy_model or pins["spacy"]
        self.encoder_name = encoder or pins["encoder"]
        self.similarity_name = similarity or pins["similarity"]
        self._nlp = None
        self._encoder = None
        self._tokenizer = None
        self._scorer = None
        self._scorer_tokenizer = None

    @property
    def nlp(self):
        if self._nlp is None:
            try:
                import spacy
            except ImportError as exc:
                raise AnnotationError(f"model load failure: spacy is not installed ({exc})") from exc
            try:
                self._nlp = spacy.load(self.spacy_model)
            except OSError as exc:
                raise AnnotationError(
                    f"model load failure: spacy model '{self.spacy_model}' unavailable ({exc})"
                ) from exc
        return self._nlp

    def _load_encoder(self):
        if self._encoder is None:
            try:
                import torch  # noqa: F401
                from transformers import AutoModel, AutoTokenizer
            except ImportError as exc:
                raise AnnotationError(f"model load failure: transformers/torch missing ({exc})") from exc
            try:
                self._tokenizer = AutoTokenizer.from_pretrained(self.encoder_name)
                self._encoder = AutoModel.from_pretrained(self.encoder_name, output_hidden_states=True)
                self._encoder.eval()
            except OSError as exc:
                raise AnnotationError(
                    f"model load failure: encoder '{self.encoder_name}' unavailable ({exc})"
                ) from exc
        return self._tokenizer, self._encoder

    def _load_scorer(self):
        if self._scorer is None:
            try:
                import torch  # noqa: F401
                from transformers import AutoModelForSeq2SeqLM, AutoTokenizer
            except ImportError as exc:
                raise AnnotationError(f"model load failure: transformers/torch missing ({exc})") from exc
            try:
                self._scorer_tokenizer = AutoTokenizer.from_pretrained(self.similarity_name)
                self._scorer = AutoModelForSeq2SeqLM.from_pretrained(self.similarity_name)
                self._scorer.eval()
            except OSError as exc:
                raise AnnotationError(
                    f"model load failure: similarity model '{self.similarity_name}' unavailable ({exc})"
                ) from exc
        return self._scorer_tokenizer, self._scorer


def _resolve_pronouns(sent):
    """Surface forms with within-sentence pronoun replacement when available.

    Supports pipelines exposing either neuralcoref-style clusters or
    coferee-style chains on the document; unresolved pronouns are kept.
    """
    replacements = {}
    doc = sent.doc
    clusters = getattr(getattr(doc, "_", None), "coref_clusters", None)
    if clusters:
        for cluster in clusters:
            main_text = cluster.main.text
            for mention in cluster.mentions:
                if mention.start >= sent.start and mention.end <= sent.end:
                    if len(mention) == 1 and mention.root.pos_ == "PRON" and mention.text != main_text:
                        replacements[mention.start] = main_text
    return replacements


def _token_embeddings(bundle: ModelBundle, spacy_sent, dim_out: list):
    """Sum of the last four hidden layers, mean-pooled per word token."""
    import torch

    tokenizer, encoder = bundle._load_encoder()
    words = [t.text for t in spacy_sent]
    enc = tokenizer(
        words,
        is_split_into_words=True,
        return_tensors="pt",
        truncation=True,
        max_length=tokenizer.model_max_length,
    )
    with torch.no_grad():
        out = encoder(**enc)
    stacked = torch.stack(out.hidden_states[-4:]).sum(dim=0)[0]  # (pieces, dim)
    word_ids = enc.word_ids(0)
    vectors = []
    for w in range(len(words)):
        piece_rows = [i for i, wid in enumerate(word_ids) if wid == w]
        if piece_rows:
            vec = stacked[piece_rows].mean(dim=0).numpy().astype(float)
        else:  # truncated away: fall back to a stable nonzero vector
            vec = np.zeros(stacked.shape[1])
            vec[0] = 1.0
        vectors.append(vec)
    dim_out.append(len(vectors[0]))
    return vectors


def similarity_matrix(bundle: ModelBundle, sentences: list[str]) -> list[list[float]]:
    """Pairwise sentence similarity on the 1..5 scale, symmetrized."""
    import torch

    tokenizer, scorer = bundle._load_scorer()
    m = len(sentences)
    values = np.full((m, m), SIMILARITY_MAX)

    def score(a: str, b: str) -> float:
        prompt = f"stsb sentence1: {a} sentence2: {b}"
        inputs = tokenizer(prompt, return_tensors="pt", truncation=True)
        with torch.no_grad():
            out = scorer.generate(**inputs, max_new_tokens=8)
        text = tokenizer.decode(out[0], skip_special_tokens=True).strip()
        try:
            raw = float(text)
        except ValueError as exc:
            raise AnnotationError(f"similarity model returned non-numeric output {text!r}") from exc
        # the scorer works on a 0..5 scale; clamp onto the annotator range
        return float(min(SIMILARITY_MAX, max(SIMILARITY_MIN, raw)))

    for i in range(m):
        for j in range(i + 1, m):
            forward = score(sentences[i], sentences[j])
            backward = score(sentences[j], sentences[i])
            values[i, j] = values[j, i] = (forward + backward) / 2.0
    return [[float(x) for x in row] for row in values]


def annotate(
    text: str,
    bundle: ModelBundle | None = None,
    structure: str = "inverted_pyramid",
    doc_id: str | None = None,
    with_similarity: bool = True,
) -> dict:
    """Produce interchange JSON from raw text using the pinned models."""
    if not text or not text.strip():
        raise AnnotationError("text is empty")
    bundle = bundle or ModelBundle()
    parsed = bundle.nlp(text)
    spacy_sents = [s for s in parsed.sents if len(s) > 0]
    if not spacy_sents:
        raise AnnotationError("text contains no sentences")
    if doc_id is None:
        doc_id = "doc-" + hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]

    sentences = []
    dim_box: list[int] = []
    for k, sent in enumerate(spacy_sents):
        replacements = _resolve_pronouns(sent)
        vectors = _token_embeddings(bundle, sent, dim_box)
        tokens = []
        for t, tok in enumerate(sent):
            surface = replacements.get(tok.i, tok.text)
            head_local = t if tok.head.i == tok.i else tok.head.i - sent.start
            tokens.append(
                {
                    "surface": surface,
                    "lemma": tok.lemma_.lower() if surface == tok.text else surface.lower(),
                    "is_stop": bool(tok.is_stop or tok.is_punct or tok.is_space),
                    "head": head_local,
                    "dep_label": tok.dep_,
                    "embedding": [float(x) for x in vectors[t]],
                }
            )
        sentences.append({"index": k, "text": sent.text.strip(), "tokens": tokens})

    out = {
        "doc_id": doc_id,
        "structure": structure,
        "embedding_dim": dim_box[0],
        "sentences": sentences,
        "annotator": {
            "mode": "model",
            "spacy": bundle.spacy_model,
            "encoder": bundle.encoder_name,
            "similarity": bundle.similarity_name,
        },
    }
    if with_similarity:
        out["sentence_similarity"] = similarity_matrix(bundle, [s["text"] for s in sentences])
    return out
