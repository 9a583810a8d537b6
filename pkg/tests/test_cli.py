import json
import subprocess
import sys
from pathlib import Path

import pytest

from cnrank.cli import main, parse_budget_spec
from cnrank.selection import SelectionBudget

FIXTURES = Path(__file__).parent.parent / "fixtures"


@pytest.fixture
def corpus_file(tmp_path, sample10_doc):
    sentences = [s.text for s in sample10_doc.sentences]
    corpus = [
        {
            "doc_id": "sample10",
            "article_sentences": sentences,
            "references": [[sentences[0], sentences[4]], [sentences[1]]],
        }
    ]
    path = tmp_path / "corpus.json"
    path.write_text(json.dumps(corpus))
    return path


class TestBudgetSpec:
    def test_mixed(self):
        budgets = parse_budget_spec("5%, 3, 100w")
        assert budgets == (
            SelectionBudget(kind="percent", value=5),
            SelectionBudget(kind="sentence_count", value=3),
            SelectionBudget(kind="word_budget", value=100),
        )

    def test_empty(self):
        with pytest.raises(ValueError):
            parse_budget_spec(" , ")


class TestRankCommand:
    def test_rank_to_file(self, tmp_path, sample10_path):
        out = tmp_path / "ranking.json"
        assert main(["rank", str(sample10_path), "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["doc_id"] == "sample10"
        assert sorted(data["total_order"]) == list(range(10))
        assert "5%" in data["selections"]

    def test_rank_stdout(self, capsys, sample10_path):
        assert main(["rank", str(sample10_path)]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["doc_id"] == "sample10"

    def test_rank_with_budgets_and_flags(self, tmp_path, sample10_path):
        out = tmp_path / "r.json"
        code = main(
            ["rank", str(sample10_path), "--budgets", "2,40w", "--beta", "0.0",
             "--structure", "rectangle", "--out", str(out)]
        )
        assert code == 0
        data = json.loads(out.read_text())
        assert set(data["selections"]) == {"L=2", "W=40"}
        assert len(data["selections"]["L=2"]) == 2

    def test_rank_timing_report(self, tmp_path, sample10_path):
        out = tmp_path / "r.json"
        timing = tmp_path / "timing.json"
        assert main(["rank", str(sample10_path), "--out", str(out), "--timing", str(timing)]) == 0
        t = json.loads(timing.read_text())
        assert t["documents"] == 1
        assert t["total_seconds"] > 0

    def test_rank_missing_similarity_fails_cleanly(self, tmp_path, sample10_path, capsys):
        raw = json.loads(sample10_path.read_text())
        raw.pop("sentence_similarity")
        bad = tmp_path / "nosim.json"
        bad.write_text(json.dumps(raw))
        assert main(["rank", str(bad)]) == 1
        err = capsys.readouterr().err
        diagnostic = json.loads(err.strip().splitlines()[-1])
        assert "no similarity source" in diagnostic["message"]

    def test_rank_stub_similarity_flag(self, tmp_path, sample10_path):
        raw = json.loads(sample10_path.read_text())
        raw.pop("sentence_similarity")
        doc = tmp_path / "nosim.json"
        doc.write_text(json.dumps(raw))
        out = tmp_path / "r.json"
        assert main(["rank", str(doc), "--stub-similarity", "--out", str(out)]) == 0

    def test_config_file_with_cli_override(self, tmp_path, sample10_path):
        cfg = tmp_path / "cnrank.conf"
        cfg.write_text("beta = 0.9\ndelta = 0.65\n")
        out_a = tmp_path / "a.json"
        out_b = tmp_path / "b.json"
        assert main(["rank", str(sample10_path), "--config", str(cfg), "--out", str(out_a)]) == 0
        assert main(
            ["rank", str(sample10_path), "--config", str(cfg), "--beta", "0.0", "--out", str(out_b)]
        ) == 0
        assert json.loads(out_a.read_text())["scores"] != json.loads(out_b.read_text())["scores"]

    def test_batch_array_output(self, tmp_path, sample10_path):
        raw = json.loads(sample10_path.read_text())
        corpus = tmp_path / "docs.json"
        corpus.write_text(json.dumps([raw, dict(raw, doc_id="again")]))
        out = tmp_path / "r.json"
        assert main(["rank", str(corpus), "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert [d["doc_id"] for d in data] == ["sample10", "again"]


class TestEvaluateCommand:
    def rankings_file(self, tmp_path, sample10_path):
        out = tmp_path / "rankings.json"
        assert main(["rank", str(sample10_path), "--out", str(out)]) == 0
        return out

    def test_evaluate_json(self, tmp_path, corpus_file, sample10_path, capsys):
        rankings = self.rankings_file(tmp_path, sample10_path)
        assert main(["evaluate", str(corpus_file), str(rankings)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert "sample10" in report["documents"]
        scores = report["documents"]["sample10"]["50%"]
        assert set(scores) == {"rouge-1", "rouge-2", "rouge-l", "rouge-su4", "bleu-1", "bleu-2"}
        assert all(0.0 <= v <= 1.0 for v in scores.values())
        assert report["averages"]["50%"]["rouge-1"] == scores["rouge-1"]

    def test_evaluate_csv(self, tmp_path, corpus_file, sample10_path):
        rankings = self.rankings_file(tmp_path, sample10_path)
        out = tmp_path / "report.csv"
        assert main(
            ["evaluate", str(corpus_file), str(rankings), "--format", "csv", "--out", str(out)]
        ) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "doc_id,budget,metric,score"
        assert any(line.startswith("<average>") for line in lines)

    def test_metric_subset(self, tmp_path, corpus_file, sample10_path, capsys):
        rankings = self.rankings_file(tmp_path, sample10_path)
        assert main(["evaluate", str(corpus_file), str(rankings), "--metrics", "rouge-1,bleu-1"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert set(report["documents"]["sample10"]["5%"]) == {"rouge-1", "bleu-1"}

    def test_unknown_metric_fails(self, tmp_path, corpus_file, sample10_path, capsys):
        rankings = self.rankings_file(tmp_path, sample10_path)
        assert main(["evaluate", str(corpus_file), str(rankings), "--metrics", "meteor"]) == 1
        assert "unknown metric" in capsys.readouterr().err


class TestNetworkDumpCommand:
    def test_dump(self, capsys):
        assert main(["network-dump", str(FIXTURES / "dove.json")]) == 0
        dump = json.loads(capsys.readouterr().out)
        assert dump["node_count"] == 15
        pairs = {(e["i"], e["j"]) for e in dump["edges"]}
        assert (0, 11) in pairs
        assert (0, 14) not in pairs

    def test_dump_delta_flag(self, capsys):
        assert main(["network-dump", str(FIXTURES / "dove.json"), "--delta", "0.99"]) == 0
        dump = json.loads(capsys.readouterr().out)
        sem = [e for e in dump["edges"] if "semantic" in e["kinds"]]
        assert {tuple(sorted((e["i"], e["j"]))) for e in sem} == {(10, 13)}  # only cos 1.0 survives


class TestOracleCommand:
    def test_oracle_sentences(self, corpus_file, capsys):
        assert main(["oracle", str(corpus_file), "--budget-sentences", "2"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out[0]["doc_id"] == "sample10"
        assert len(out[0]["selections"]["oracle"]) == 2

    def test_oracle_feeds_evaluate(self, tmp_path, corpus_file):
        oracle_out = tmp_path / "oracle.json"
        assert main(["oracle", str(corpus_file), "--budget-words", "30", "--out", str(oracle_out)]) == 0
        report_out = tmp_path / "report.json"
        assert main(["evaluate", str(corpus_file), str(oracle_out), "--out", str(report_out)]) == 0
        report = json.loads(report_out.read_text())
        assert "oracle" in report["averages"]


class TestErrors:
    def test_missing_file(self, capsys):
        assert main(["rank", "/nonexistent/doc.json"]) == 1
        err = capsys.readouterr().err
        assert json.loads(err.strip())["error"]

    def test_malformed_document(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["network-dump", str(bad)]) == 1
        assert "malformed" in capsys.readouterr().err


def test_module_entry_point(sample10_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cnrank", "rank", str(sample10_path)],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["doc_id"] == "sample10"
