#!/usr/bin/env python3
"""Regenerate tests/data/golden_metrics.json from the naive reference
implementations in tests/oracles.py.  The goldens are frozen; run this
only when the reference definitions themselves change."""

import json
import random
import re
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from oracles import bleu_reference, lcs_reference, rouge_n_reference, su4_reference  # noqa: E402

VOCAB = [
    "storm", "river", "city", "council", "vote", "flood", "bridge", "closed",
    "mayor", "said", "the", "a", "rain", "heavy", "north", "families",
    "evacuated", "homes", "water", "level", "rose", "rescue", "teams",
]


def toks(text):
    return re.findall(r"[^\W_]+", text.lower())


def rouge_l_reference(cand, refs, beta=8.0):
    scores = []
    for ref in refs:
        lcs = lcs_reference(tuple(cand), tuple(ref))
        if lcs == 0:
            scores.append(0.0)
            continue
        r = lcs / len(ref)
        p = lcs / len(cand)
        scores.append((1 + beta**2) * r * p / (r + beta**2 * p))
    return sum(scores) / len(scores)


def main():
    rng = random.Random(20260810)
    pairs = []
    for i in range(20):
        n_refs = rng.choice([1, 1, 1, 2, 3])
        cand_len = rng.randint(0, 14) if i == 0 else rng.randint(3, 14)
        candidate = " ".join(rng.choice(VOCAB) for _ in range(cand_len)) if cand_len else ""
        references = [
            " ".join(rng.choice(VOCAB) for _ in range(rng.randint(2, 12))) for _ in range(n_refs)
        ]
        cand_t = toks(candidate)
        ref_t = [toks(r) for r in references]
        r1 = sum(rouge_n_reference(cand_t, r, 1) for r in ref_t) / len(ref_t)
        r2 = sum(rouge_n_reference(cand_t, r, 2) for r in ref_t) / len(ref_t)
        rl = rouge_l_reference(cand_t, ref_t)
        rsu4 = sum(su4_reference(cand_t, r) for r in ref_t) / len(ref_t)
        b1 = bleu_reference(cand_t, ref_t, 1)
        b2 = bleu_reference(cand_t, ref_t, 2)
        pairs.append(
            {
                "candidate": candidate,
                "references": references,
                "rouge-1": r1,
                "rouge-2": r2,
                "rouge-l": rl,
                "rouge-su4": rsu4,
                "bleu-1": b1,
                "bleu-2": b2,
            }
        )
    out = ROOT / "tests" / "data" / "golden_metrics.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(pairs, indent=2) + "\n")
    print(f"wrote {out} ({len(pairs)} pairs)")


if __name__ == "__main__":
    main()
