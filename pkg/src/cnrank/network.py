"""Contextual-network construction.

Nodes are (content word, sentence) occurrences.  Three edge sources:

* within-sentence syntactic relations read off the dependency tree,
  after contracting paths that run through stopwords;
* semantic edges between any two nodes whose contextual embeddings have
  cosine similarity >= delta;
* cross-sentence syntactic edges transported through a same-lemma
  witness node that is semantically tied to one endpoint and
  syntactically tied to the other.

Syntactic edges carry uniform initial weight 1 and are normalized by
their count; semantic edges carry their cosine value normalized by the
cosine total.  A pair connected both ways gets the sum of both
normalized weights.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .document import AnnotatedDocument, Sentence

DEFAULT_DELTA = 0.7


class NetworkError(ValueError):
    """Raised when a document cannot be turned into a contextual network."""


@dataclass(frozen=True)
class Edge:
    syntactic_weight: float
    semantic_weight: float

    @property
    def weight(self) -> float:
        return self.syntactic_weight + self.semantic_weight

    @property
    def syntactic(self) -> bool:
        return self.syntactic_weight > 0.0

    @property
    def semantic(self) -> bool:
        return self.semantic_weight > 0.0


@dataclass
class ContextualNetwork:
    node_count: int
    delta: float
    edges: dict[tuple[int, int], Edge]

    def weight(self, i: int, j: int) -> float:
        key = (i, j) if i < j else (j, i)
        edge = self.edges.get(key)
        return edge.weight if edge else 0.0

    def syntactic_mass(self) -> float:
        return sum(e.syntactic_weight for e in self.edges.values())

    def semantic_mass(self) -> float:
        return sum(e.semantic_weight for e in self.edges.values())


def contract_stopword_paths(sentence: Sentence) -> dict[int, set[int]]:
    """Contract the dependency tree of one sentence onto its content tokens.

    Returns an adjacency map over token indices (content tokens only).
    Two content words are adjacent if they are linked directly in the
    tree or by a path whose interior consists solely of stopwords.
    Raises NetworkError if the head links do not form a tree.
    """
    tokens = sentence.tokens
    n = len(tokens)
    tree: dict[int, set[int]] = {t: set() for t in range(n)}
    root = None
    for t, tok in enumerate(tokens):
        if tok.head == t:
            root = t
        else:
            tree[t].add(tok.head)
            tree[tok.head].add(t)
    if root is None:
        raise NetworkError(f"sentence {sentence.index}: not a tree (no root)")
    # a head-link structure with one root and n-1 edges is a tree iff connected
    seen = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for u in tree[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    if len(seen) != n:
        raise NetworkError(f"sentence {sentence.index}: not a tree (cyclic head links)")

    content = [t for t in range(n) if not tokens[t].is_stop]
    adj: dict[int, set[int]] = {t: set() for t in content}
    # direct edges between content words
    for t in content:
        for u in tree[t]:
            if not tokens[u].is_stop and u != t:
                adj[t].add(u)
    # each connected component of stopwords joins its content neighbors
    visited: set[int] = set()
    for s in range(n):
        if tokens[s].is_stop and s not in visited:
            comp = [s]
            visited.add(s)
            frontier = [s]
            boundary: set[int] = set()
            while frontier:
                v = frontier.pop()
                for u in tree[v]:
                    if tokens[u].is_stop:
                        if u not in visited:
                            visited.add(u)
                            comp.append(u)
                            frontier.append(u)
                    else:
                        boundary.add(u)
            for a in boundary:
                for b in boundary:
                    if a < b:
                        adj[a].add(b)
                        adj[b].add(a)
    return adj


def syntactic_pairs(adj: dict[int, set[int]]) -> set[tuple[int, int]]:
    """Syntactically related pairs: neighbors, or sharing a common neighbor."""
    pairs: set[tuple[int, int]] = set()
    for a, neighbors in adj.items():
        for b in neighbors:
            if a < b:
                pairs.add((a, b))
        for b in neighbors:
            for c in neighbors:
                if b < c:
                    pairs.add((b, c))
    return pairs


def semantic_edges(doc: AnnotatedDocument, delta: float = DEFAULT_DELTA) -> dict[tuple[int, int], float]:
    """Cosine-similarity edges between all node pairs at or above delta.

    Keys are (i, j) global node positions with i < j; values are the
    cosine similarities used as initial weights.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    nodes = doc.nodes
    if not nodes:
        return {}
    mat = np.stack([doc.node_token(nd).embedding for nd in nodes])
    norms = np.linalg.norm(mat, axis=1)
    bad = np.nonzero(norms == 0.0)[0]
    if bad.size:
        nd = nodes[int(bad[0])]
        raise NetworkError(
            f"zero-norm embedding for token '{doc.node_token(nd).surface}' "
            f"(sentence {nd.sentence}, token {nd.token})"
        )
    unit = mat / norms[:, None]
    cos = unit @ unit.T
    out: dict[tuple[int, int], float] = {}
    n = len(nodes)
    for i in range(n):
        row = cos[i]
        for j in range(i + 1, n):
            if row[j] >= delta:
                out[(i, j)] = float(row[j])
    return out


def within_sentence_syntactic(doc: AnnotatedDocument) -> set[tuple[int, int]]:
    """Union over sentences of syntactic pairs, in global node positions."""
    by_sentence: dict[int, dict[int, int]] = defaultdict(dict)
    for node in doc.nodes:
        by_sentence[node.sentence][node.token] = node.position
    pairs: set[tuple[int, int]] = set()
    for sent in doc.sentences:
        local = syntactic_pairs(contract_stopword_paths(sent))
        mapping = by_sentence[sent.index]
        for a, b in local:
            i, j = mapping[a], mapping[b]
            pairs.add((i, j) if i < j else (j, i))
    return pairs


def cross_sentence_syntactic_edges(
    doc: AnnotatedDocument,
    syntactic: set[tuple[int, int]],
    semantic: dict[tuple[int, int], float],
) -> set[tuple[int, int]]:
    """Syntactic edges across sentences via same-lemma semantic witnesses.

    Nodes i and j in different sentences are connected when some witness
    q in i's sentence (q != i) has the same lemma as j, is semantically
    linked to j, and is syntactically related to i -- or the mirror of
    that condition with i and j swapped.
    """
    related: dict[int, set[int]] = defaultdict(set)
    for a, b in syntactic:
        related[a].add(b)
        related[b].add(a)
    sentence_of = {nd.position: nd.sentence for nd in doc.nodes}
    lemma_of = {nd.position: doc.node_lemma(nd) for nd in doc.nodes}
    out: set[tuple[int, int]] = set()
    for a, b in semantic:
        if sentence_of[a] == sentence_of[b]:
            continue
        if lemma_of[a] != lemma_of[b]:
            continue
        for q, j in ((a, b), (b, a)):
            for i in related[q]:
                # i is in q's sentence, hence not in j's
                out.add((i, j) if i < j else (j, i))
    return out


def assemble_network(
    doc: AnnotatedDocument,
    syn_edges: set[tuple[int, int]],
    sem_edges: dict[tuple[int, int], float],
    cross_edges: set[tuple[int, int]],
    delta: float = DEFAULT_DELTA,
) -> ContextualNetwork:
    """Normalize and merge edge kinds into the final weighted network."""
    syntactic = set(syn_edges) | set(cross_edges)
    n_syn = len(syntactic)
    sem_total = sum(sem_edges.values())
    edges: dict[tuple[int, int], Edge] = {}
    for key in sorted(syntactic | set(sem_edges)):
        syn_w = 1.0 / n_syn if key in syntactic else 0.0
        sem_w = sem_edges[key] / sem_total if key in sem_edges else 0.0
        edges[key] = Edge(syntactic_weight=syn_w, semantic_weight=sem_w)
    return ContextualNetwork(node_count=doc.num_nodes, delta=delta, edges=edges)


def build_network(doc: AnnotatedDocument, delta: float = DEFAULT_DELTA) -> ContextualNetwork:
    """Full construction: contract, relate, link, transport, normalize."""
    syn = within_sentence_syntactic(doc)
    sem = semantic_edges(doc, delta)
    cross = cross_sentence_syntactic_edges(doc, syn, sem)
    return assemble_network(doc, syn, sem, cross, delta)


def network_to_dict(doc: AnnotatedDocument, net: ContextualNetwork) -> dict:
    """JSON-friendly debug dump: nodes with lemmas, edges with kinds."""
    return {
        "doc_id": doc.doc_id,
        "delta": net.delta,
        "node_count": net.node_count,
        "nodes": [
            {"i": nd.position, "sentence": nd.sentence, "lemma": doc.node_lemma(nd)}
            for nd in doc.nodes
        ],
        "edges": [
            {
                "i": i,
                "j": j,
                "weight": edge.weight,
                "kinds": [k for k, on in (("syntactic", edge.syntactic), ("semantic", edge.semantic)) if on],
            }
            for (i, j), edge in sorted(net.edges.items())
        ],
    }
