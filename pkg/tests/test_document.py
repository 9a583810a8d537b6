import copy
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnrank import DocumentError, content_nodes, parse_annotated_document, serialize_document
from cnrank.document import document_to_dict


def make_doc(tokens=None, similarity=None, dim=4, m=None):
    """Minimal valid document dict; tokens is a list of per-sentence specs."""
    if tokens is None:
        tokens = [[("alpha", False), ("beta", False)]]
    sentences = []
    for k, spec in enumerate(tokens):
        toks = []
        for t, (lemma, is_stop) in enumerate(spec):
            toks.append(
                {
                    "surface": lemma.capitalize(),
                    "lemma": lemma,
                    "is_stop": is_stop,
                    "head": 0 if t > 0 else 0,  # chain to first token, first is root
                    "dep_label": "ROOT" if t == 0 else "dep",
                    "embedding": [1.0] + [0.0] * (dim - 1),
                }
            )
        sentences.append({"index": k, "text": " ".join(l for l, _ in spec), "tokens": toks})
    doc = {
        "doc_id": "t",
        "structure": "rectangle",
        "embedding_dim": dim,
        "sentences": sentences,
    }
    if similarity is not None:
        doc["sentence_similarity"] = similarity
    return doc


class TestParse:
    def test_minimal_document(self):
        doc = parse_annotated_document(make_doc())
        assert doc.num_sentences == 1
        assert doc.num_nodes == 2

    def test_accepts_bytes_and_str(self):
        raw = json.dumps(make_doc())
        assert parse_annotated_document(raw).doc_id == "t"
        assert parse_annotated_document(raw.encode()).doc_id == "t"

    def test_head_out_of_range(self):
        bad = make_doc(tokens=[[("a", False), ("b", False), ("c", False)]])
        bad["sentences"][0]["tokens"][1]["head"] = 7
        with pytest.raises(DocumentError, match="head out of range"):
            parse_annotated_document(bad)

    def test_embedding_dimension_mismatch(self):
        bad = make_doc()
        bad["sentences"][0]["tokens"][0]["embedding"] = [1.0, 2.0]
        with pytest.raises(DocumentError, match="dimension mismatch"):
            parse_annotated_document(bad)

    def test_asymmetric_similarity(self):
        bad = make_doc(
            tokens=[[("a", False)], [("b", False)]],
            similarity=[[5.0, 2.0], [3.0, 5.0]],
        )
        with pytest.raises(DocumentError, match="asymmetric"):
            parse_annotated_document(bad)

    def test_similarity_diagonal_must_be_max(self):
        bad = make_doc(
            tokens=[[("a", False)], [("b", False)]],
            similarity=[[4.0, 2.0], [2.0, 5.0]],
        )
        with pytest.raises(DocumentError, match="diagonal"):
            parse_annotated_document(bad)

    def test_two_roots_rejected(self):
        bad = make_doc(tokens=[[("a", False), ("b", False)]])
        bad["sentences"][0]["tokens"][1]["head"] = 1
        with pytest.raises(DocumentError, match="root"):
            parse_annotated_document(bad)

    def test_empty_sentence_list_rejected(self):
        bad = make_doc()
        bad["sentences"] = []
        with pytest.raises(DocumentError, match="at least one sentence"):
            parse_annotated_document(bad)

    def test_sentence_index_must_match_position(self):
        bad = make_doc(tokens=[[("a", False)], [("b", False)]])
        bad["sentences"][1]["index"] = 5
        with pytest.raises(DocumentError, match="does not match position"):
            parse_annotated_document(bad)

    def test_unknown_structure(self):
        bad = make_doc()
        bad["structure"] = "spiral"
        with pytest.raises(DocumentError, match="unknown structure"):
            parse_annotated_document(bad)

    def test_dove_fixture(self, dove_doc):
        assert dove_doc.num_sentences == 2
        # hand count: 8 content words in the first sentence, 7 in the second
        assert dove_doc.num_nodes == 15
        assert [n.sentence for n in dove_doc.nodes] == [0] * 8 + [1] * 7

    @given(st.binary(max_size=400))
    @settings(max_examples=200, deadline=None)
    def test_arbitrary_bytes_never_panic(self, blob):
        try:
            parse_annotated_document(blob)
        except DocumentError:
            pass  # structured failure is the only acceptable outcome


class TestContentNodes:
    def test_all_stopwords_yields_empty(self):
        doc = parse_annotated_document(make_doc(tokens=[[("the", True), ("of", True)]]))
        assert content_nodes(doc) == []

    def test_no_stopwords_yields_all(self):
        doc = parse_annotated_document(make_doc(tokens=[[("a", False), ("b", False), ("c", False)]]))
        nodes = content_nodes(doc)
        assert len(nodes) == 3
        assert [n.token for n in nodes] == [0, 1, 2]

    def test_subsequence_order_and_h_recoverable(self, dove_doc):
        nodes = content_nodes(dove_doc)
        assert [n.position for n in nodes] == list(range(len(nodes)))
        # h(i) is non-decreasing and token offsets increase within a sentence
        for a, b in zip(nodes, nodes[1:]):
            assert b.sentence >= a.sentence
            if b.sentence == a.sentence:
                assert b.token > a.token

    def test_mixed_flags(self):
        doc = parse_annotated_document(
            make_doc(tokens=[[("he", True), ("bought", False), ("her", True), ("dress", False)]])
        )
        assert [doc.node_lemma(n) for n in doc.nodes] == ["bought", "dress"]


class TestRoundTrip:
    def test_serialize_parse_is_identity(self, dove_raw):
        doc = parse_annotated_document(copy.deepcopy(dove_raw))
        assert document_to_dict(doc) == dove_raw

    def test_serialize_then_reparse(self, dove_doc):
        text = serialize_document(dove_doc)
        again = parse_annotated_document(text)
        assert document_to_dict(again) == document_to_dict(dove_doc)

    def test_similarity_preserved(self):
        doc = parse_annotated_document(
            make_doc(tokens=[[("a", False)], [("b", False)]], similarity=[[5.0, 1.5], [1.5, 5.0]])
        )
        assert np.allclose(doc.sentence_similarity, [[5.0, 1.5], [1.5, 5.0]])
