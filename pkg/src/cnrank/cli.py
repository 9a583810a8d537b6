"""Command-line interface.

Subcommands:
  rank          rank one annotated document or a whole corpus
  evaluate      score rankings against reference summaries
  network-dump  dump the contextual network of a document as JSON
  oracle        greedy reference-aware upper-bound selection

Errors are reported as one JSON object per line on stderr and a
non-zero exit code.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .document import DocumentError, parse_annotated_document
from .harness import (
    METRICS,
    EvalError,
    evaluate_rankings,
    load_corpus,
    load_rankings,
    report_to_csv,
    report_to_dict,
)
from .metrics import greedy_oracle
from .network import NetworkError, build_network, network_to_dict
from .pipeline import (
    PipelineConfig,
    PipelineError,
    config_from_sources,
    parse_config_file,
    rank_batch,
    ranking_to_dict,
)
from .selection import SelectionBudget


def _fail(message: str, kind: str = "error") -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return 1


def _write_output(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def parse_budget_spec(spec: str) -> tuple[SelectionBudget, ...]:
    """Comma-separated budgets: '5%,10%' (percent), '3' (count), '100w' (words)."""
    budgets = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if part.endswith("%"):
            budgets.append(SelectionBudget(kind="percent", value=int(part[:-1])))
        elif part.endswith("w"):
            budgets.append(SelectionBudget(kind="word_budget", value=int(part[:-1])))
        else:
            budgets.append(SelectionBudget(kind="sentence_count", value=int(part)))
    if not budgets:
        raise ValueError("empty budget string")
    return tuple(budgets)


def _add_config_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="flat key=value configuration file (CLI flags win)")
    parser.add_argument("--delta", type=float, help="semantic edge threshold (default 0.7)")
    parser.add_argument("--beta", type=float, help="BM25 length penalty (default 0.2)")
    parser.add_argument("--gamma", type=float, help="pyramid endpoint ratio (default 5)")
    parser.add_argument(
        "--structure",
        choices=("rectangle", "inverted_pyramid", "pyramid", "hourglass"),
        help="override the document's article structure",
    )
    parser.add_argument("--damping", type=float, help="clustering message damping (default 0.5)")
    parser.add_argument("--wcss", choices=("sum", "mean"), help="WCSS convention (default sum)")
    parser.add_argument("--tol", type=float, help="PageRank tolerance (default 1e-8)")
    parser.add_argument("--max-iter", type=int, help="PageRank iteration cap (default 100)")
    parser.add_argument("--cnr-only", action="store_true", default=None,
                        help="rank purely by sentence score, skipping topic clustering")
    parser.add_argument("--stub-similarity", action="store_true", default=None,
                        help="fall back to lemma-overlap similarity when no matrix is available")
    parser.add_argument("--workers", type=int, help="parallel documents in a batch (default 1)")


def _config_from_args(args) -> PipelineConfig:
    file_values = None
    if args.config:
        file_values = parse_config_file(Path(args.config).read_text())
    overrides = {
        "delta": args.delta,
        "beta": args.beta,
        "gamma": args.gamma,
        "structure": args.structure,
        "damping": args.damping,
        "wcss_convention": args.wcss,
        "tol": args.tol,
        "max_iter": args.max_iter,
        "cnr_only": args.cnr_only,
        "stub_similarity": args.stub_similarity,
        "workers": args.workers,
    }
    return config_from_sources(file_values, overrides)


def _cmd_rank(args) -> int:
    cfg = _config_from_args(args)
    if args.budgets:
        cfg = dataclasses.replace(cfg, budgets=parse_budget_spec(args.budgets))

    report = rank_batch(args.input, cfg)
    payloads = [ranking_to_dict(result) for result in report.results]
    out_obj = payloads[0] if len(payloads) == 1 and not args.always_array else payloads
    _write_output(json.dumps(out_obj, ensure_ascii=False, indent=2) + "\n", args.out)

    if args.timing:
        timing = {
            "documents": len(report.results),
            "failures": len(report.failures),
            "seconds_per_doc": report.seconds,
            "total_seconds": report.total_seconds,
        }
        Path(args.timing).write_text(json.dumps(timing, indent=2) + "\n", encoding="utf-8")
    for source, message in report.failures:
        print(json.dumps({"error": "document", "source": source, "message": message}), file=sys.stderr)
    return 1 if report.failures and not report.results else 0


def _cmd_evaluate(args) -> int:
    corpus = load_corpus(Path(args.corpus).read_text())
    rankings = load_rankings(Path(args.rankings).read_text())
    metrics = tuple(args.metrics.split(",")) if args.metrics else METRICS
    report = evaluate_rankings(corpus, rankings, metrics)
    if args.format == "csv":
        _write_output(report_to_csv(report), args.out)
    else:
        _write_output(json.dumps(report_to_dict(report), ensure_ascii=False, indent=2) + "\n", args.out)
    return 0


def _cmd_network_dump(args) -> int:
    doc = parse_annotated_document(Path(args.input).read_bytes())
    net = build_network(doc, delta=args.delta if args.delta is not None else 0.7)
    _write_output(json.dumps(network_to_dict(doc, net), ensure_ascii=False, indent=2) + "\n", args.out)
    return 0


def _cmd_oracle(args) -> int:
    corpus = load_corpus(Path(args.corpus).read_text())
    outputs = []
    for doc in corpus:
        selected = greedy_oracle(
            doc.sentences,
            doc.references,
            budget_sentences=args.budget_sentences,
            budget_words=args.budget_words,
        )
        outputs.append({"doc_id": doc.doc_id, "selections": {"oracle": selected}})
    _write_output(json.dumps(outputs, ensure_ascii=False, indent=2) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cnrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser("rank", help="rank an annotated document, array, or directory")
    p_rank.add_argument("input", help="document JSON, array of documents, or directory")
    p_rank.add_argument("--out", help="output path (default: stdout)")
    p_rank.add_argument("--budgets", help="budget spec, e.g. '5%%,10%%' or '3' or '100w'")
    p_rank.add_argument("--timing", help="write a timing report JSON to this path")
    p_rank.add_argument("--always-array", action="store_true", help="emit a JSON array even for one document")
    _add_config_flags(p_rank)
    p_rank.set_defaults(func=_cmd_rank)

    p_eval = sub.add_parser("evaluate", help="score rankings against a reference corpus")
    p_eval.add_argument("corpus", help="corpus JSON with article sentences and references")
    p_eval.add_argument("rankings", help="rankings JSON produced by 'rank' (or 'oracle')")
    p_eval.add_argument("--metrics", help=f"comma-separated subset of: {','.join(METRICS)}")
    p_eval.add_argument("--format", choices=("json", "csv"), default="json")
    p_eval.add_argument("--out", help="output path (default: stdout)")
    p_eval.set_defaults(func=_cmd_evaluate)

    p_net = sub.add_parser("network-dump", help="dump a document's contextual network")
    p_net.add_argument("input", help="annotated document JSON")
    p_net.add_argument("--delta", type=float, help="semantic edge threshold (default 0.7)")
    p_net.add_argument("--out", help="output path (default: stdout)")
    p_net.set_defaults(func=_cmd_network_dump)

    p_oracle = sub.add_parser("oracle", help="greedy unigram-recall oracle selection")
    p_oracle.add_argument("corpus", help="corpus JSON with article sentences and references")
    group = p_oracle.add_mutually_exclusive_group(required=True)
    group.add_argument("--budget-sentences", type=int)
    group.add_argument("--budget-words", type=int)
    p_oracle.add_argument("--out", help="output path (default: stdout)")
    p_oracle.set_defaults(func=_cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DocumentError, NetworkError, PipelineError, EvalError, ValueError) as exc:
        return _fail(str(exc), kind=type(exc).__name__)
    except OSError as exc:
        return _fail(str(exc), kind="io")


if __name__ == "__main__":
    sys.exit(main())
