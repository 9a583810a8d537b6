"""Annotation command line.

    cnrank-annotate --in raw.txt --out doc.json [--stub --dim 16]

Writes interchange JSON consumed by the ranking engine; --sim-sidecar
additionally writes the similarity matrix to `<doc_id>.sim.json` next
to the output file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .stub import AnnotationError, document_json, stub_annotate

STRUCTURES = ("rectangle", "inverted_pyramid", "pyramid", "hourglass")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cnrank-annotate", description=__doc__.splitlines()[0])
    parser.add_argument("--in", dest="input", required=True, help="raw UTF-8 text file")
    parser.add_argument("--out", required=True, help="output document JSON path")
    parser.add_argument("--stub", action="store_true", help="deterministic model-free mode")
    parser.add_argument("--dim", type=int, default=16, help="stub embedding dimension (default 16)")
    parser.add_argument("--structure", choices=STRUCTURES, default="inverted_pyramid")
    parser.add_argument("--doc-id", help="document id (default: derived from the text)")
    parser.add_argument("--sim-sidecar", action="store_true",
                        help="also write <doc_id>.sim.json next to the output")
    parser.add_argument("--no-similarity", action="store_true",
                        help="skip the similarity matrix entirely")
    parser.add_argument("--spacy-model", help="override the pinned spaCy model")
    parser.add_argument("--encoder", help="override the pinned embedding encoder")
    parser.add_argument("--similarity-model", help="override the pinned similarity scorer")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.input).read_text(encoding="utf-8")
    except OSError as exc:
        print(json.dumps({"error": "io", "message": str(exc)}), file=sys.stderr)
        return 1
    try:
        if args.stub:
            doc = stub_annotate(text, dim=args.dim, structure=args.structure, doc_id=args.doc_id)
            if args.no_similarity:
                doc.pop("sentence_similarity", None)
        else:
            from .model import ModelBundle, annotate

            bundle = ModelBundle(
                spacy_model=args.spacy_model,
                encoder=args.encoder,
                similarity=args.similarity_model,
            )
            doc = annotate(
                text,
                bundle,
                structure=args.structure,
                doc_id=args.doc_id,
                with_similarity=not args.no_similarity,
            )
    except AnnotationError as exc:
        print(json.dumps({"error": "annotation", "message": str(exc)}), file=sys.stderr)
        return 1

    out_path = Path(args.out)
    if args.sim_sidecar and "sentence_similarity" in doc:
        sidecar = out_path.with_name(f"{doc['doc_id']}.sim.json")
        sidecar.write_text(json.dumps(doc["sentence_similarity"]) + "\n", encoding="utf-8")
    out_path.write_text(document_json(doc), encoding="utf-8")
    return 0


if __name__ == "__main__":
    sys.exit(main())
