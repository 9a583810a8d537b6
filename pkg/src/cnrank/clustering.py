"""Topic clustering by affinity propagation over sentence similarities.

Standard responsibility/availability message passing on the raw
similarity matrix (annotator scale 1..5).  The shared preference is the
median off-diagonal similarity; an epsilon-sized, strictly decreasing
per-index bias is added on top because exact ties between equally good
exemplar sets (a known degeneracy of the algorithm, classically broken
with random noise) would otherwise leave the message fixed point on a
knife edge.  The bias keeps runs deterministic and resolves ties toward
lower sentence indices and finer clusterings; it is far below the
resolution of any real similarity model.

WCSS converts similarities to distances d = (5 - s) / 4 in [0, 1] and
accumulates squared distances to the cluster exemplar.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .document import SIMILARITY_MAX, SIMILARITY_MIN

DEFAULT_DAMPING = 0.5
DEFAULT_MAX_ITER = 200
DEFAULT_CONVERGENCE_WINDOW = 15
_TIEBREAK_EPS = 1e-6


@dataclass(frozen=True)
class SimilarityMatrix:
    values: np.ndarray
    provenance: str  # "model" or "stub"

    @property
    def size(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class TopicClustering:
    assignment: tuple[int, ...]  # sentence index -> cluster id
    exemplars: tuple[int, ...]  # cluster id -> exemplar sentence index
    wcss: tuple[float, ...] | None
    converged: bool
    fallback: bool
    iterations: int
    final_residual: float

    @property
    def num_clusters(self) -> int:
        return len(self.exemplars)

    def members(self, cluster_id: int) -> list[int]:
        return [i for i, c in enumerate(self.assignment) if c == cluster_id]


def _as_matrix(sim: SimilarityMatrix | np.ndarray) -> np.ndarray:
    values = sim.values if isinstance(sim, SimilarityMatrix) else np.asarray(sim, dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError(f"similarity matrix must be square, got shape {values.shape}")
    if values.shape[0] == 0:
        raise ValueError("similarity matrix is empty")
    return values.astype(float)


def _assign(values: np.ndarray, exemplars: list[int]) -> tuple[int, ...]:
    # non-exemplars go to their most similar exemplar, ties to the lower
    # exemplar index; exemplars are always their own cluster
    assignment = [0] * values.shape[0]
    for i in range(values.shape[0]):
        if i in exemplars:
            assignment[i] = exemplars.index(i)
        else:
            best = max(range(len(exemplars)), key=lambda c: (values[i, exemplars[c]], -exemplars[c]))
            assignment[i] = best
    return tuple(assignment)


def _fallback_clustering(values: np.ndarray, iterations: int, converged: bool, residual: float) -> TopicClustering:
    totals = values.sum(axis=1)
    exemplar = int(np.argmax(totals))  # argmax takes the first (lowest) index on ties
    m = values.shape[0]
    return TopicClustering(
        assignment=tuple([0] * m),
        exemplars=(exemplar,),
        wcss=None,
        converged=converged,
        fallback=True,
        iterations=iterations,
        final_residual=residual,
    )


def affinity_propagation(
    sim: SimilarityMatrix | np.ndarray,
    damping: float = DEFAULT_DAMPING,
    max_iter: int = DEFAULT_MAX_ITER,
    convergence_window: int = DEFAULT_CONVERGENCE_WINDOW,
) -> TopicClustering:
    """Cluster sentences; the number of clusters emerges from the data.

    Terminates once the exemplar set has been stable for
    convergence_window iterations (or at max_iter).  Degenerate outcomes
    (no exemplar emerges, or the messages oscillate) fall back to a
    single cluster around the sentence with the highest total similarity,
    flagged via `fallback`.
    """
    if not 0.5 <= damping < 1.0:
        raise ValueError(f"damping must be in [0.5, 1), got {damping}")
    values = _as_matrix(sim)
    m = values.shape[0]
    if m == 1:
        return TopicClustering(
            assignment=(0,),
            exemplars=(0,),
            wcss=None,
            converged=True,
            fallback=False,
            iterations=0,
            final_residual=0.0,
        )

    off = values[~np.eye(m, dtype=bool)]
    eps = _TIEBREAK_EPS * float(off.max() - off.min())
    preference = float(np.median(off)) + eps * (m - np.arange(m)) / m
    S = values.copy()
    S[np.diag_indices(m)] = preference

    R = np.zeros((m, m))
    A = np.zeros((m, m))
    idx = np.arange(m)
    last_exemplars: tuple[int, ...] | None = None
    stable = 0
    residual = np.inf
    iterations = 0
    converged = False

    for iterations in range(1, max_iter + 1):
        # responsibilities
        AS = A + S
        best_k = np.argmax(AS, axis=1)
        best = AS[idx, best_k]
        AS[idx, best_k] = -np.inf
        second = AS.max(axis=1)
        R_new = S - best[:, None]
        R_new[idx, best_k] = S[idx, best_k] - second
        R_next = damping * R + (1.0 - damping) * R_new
        # availabilities
        Rp = np.maximum(R_next, 0.0)
        Rp[idx, idx] = R_next[idx, idx]
        col = Rp.sum(axis=0)
        A_new = col[None, :] - Rp
        diag = A_new[idx, idx].copy()
        A_new = np.minimum(A_new, 0.0)
        A_new[idx, idx] = diag
        A_next = damping * A + (1.0 - damping) * A_new

        residual = max(np.abs(R_next - R).max(), np.abs(A_next - A).max())
        R, A = R_next, A_next

        exemplars = tuple(int(k) for k in np.flatnonzero(R.diagonal() + A.diagonal() > 0.0))
        if exemplars == last_exemplars:
            stable += 1
            if stable >= convergence_window:
                converged = True
                break
        else:
            stable = 0
        last_exemplars = exemplars

    if not converged or not last_exemplars:
        return _fallback_clustering(values, iterations, converged, float(residual))

    exemplar_list = list(last_exemplars)
    return TopicClustering(
        assignment=_assign(values, exemplar_list),
        exemplars=tuple(exemplar_list),
        wcss=None,
        converged=True,
        fallback=False,
        iterations=iterations,
        final_residual=float(residual),
    )


def similarity_to_distance(s: np.ndarray | float):
    """Map the 1..5 similarity scale onto distances in [0, 1]."""
    return (SIMILARITY_MAX - s) / (SIMILARITY_MAX - SIMILARITY_MIN)


def wcss(
    sim: SimilarityMatrix | np.ndarray,
    clustering: TopicClustering,
    convention: str = "sum",
) -> TopicClustering:
    """Fill per-cluster within-cluster sums of squared exemplar distances.

    convention "sum" accumulates squared distances over members;
    "mean" divides by the member count.  Singletons score 0 either way.
    """
    if convention not in ("sum", "mean"):
        raise ValueError(f"wcss convention must be 'sum' or 'mean', got {convention!r}")
    values = _as_matrix(sim)
    if len(clustering.assignment) != values.shape[0]:
        raise ValueError("clustering does not match similarity matrix size")
    totals = []
    for cluster_id, exemplar in enumerate(clustering.exemplars):
        members = clustering.members(cluster_id)
        d = similarity_to_distance(values[members, exemplar])
        total = float((d**2).sum())
        if convention == "mean":
            total /= len(members)
        totals.append(total)
    return replace(clustering, wcss=tuple(totals))
