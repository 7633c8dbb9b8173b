import json
from pathlib import Path

import pytest

from compareviz.cli import main

from conftest import SAMPLE_DIR

BOOKS = str(SAMPLE_DIR / "books.csv")
NETFLIX = str(SAMPLE_DIR / "netflix.csv")
SALES = str(SAMPLE_DIR / "sales.csv")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_classify_sales(capsys):
    code, out, _ = run(capsys, "classify", "--data", SALES,
                       "--utterance", "compare the sales for Washington and California")
    assert code == 0
    doc = json.loads(out)
    assert doc["cardinality"] == "1-1"
    assert doc["concreteness"]["cell"] == "ev-ea"


def test_recommend_letters_in_rank_order(capsys):
    code, out, _ = run(capsys, "recommend", "--data", NETFLIX,
                       "--utterance",
                       "compare the performance of Starling to other PG-13 movies")
    assert code == 0
    doc = json.loads(out)
    assert [r["design"]["id"] for r in doc["recommendations"]] == ["E", "F", "G", "H"]


def test_classify_not_a_comparison_exit_2(capsys):
    code, out, err = run(capsys, "classify", "--data", BOOKS, "--utterance", "hello")
    assert code == 2
    assert "not_a_comparison" in err


def test_resolution_error_exit_3(capsys):
    code, _, err = run(capsys, "resolve", "--data", SALES,
                       "--utterance", "compare the physique of tall athletes")
    assert code == 3
    assert "unresolvable" in err


def test_resolve_with_choose(capsys):
    code, out, _ = run(capsys, "resolve", "--data", BOOKS,
                       "--utterance", "compare the prices of high rated books",
                       "--choose", "high rated books=1")
    assert code == 0
    doc = json.loads(out)
    assert doc["entries"][0]["chosen"] == 1


def test_emit_writes_four_specs(tmp_path, capsys):
    out_dir = tmp_path / "specs"
    code, out, _ = run(capsys, "emit", "--data", BOOKS,
                       "--utterance", "compare the prices across all fiction books",
                       "--out-dir", str(out_dir))
    assert code == 0
    written = json.loads(out)["written"]
    assert len(written) == 4
    for path in written:
        doc = json.loads(Path(path).read_text())
        assert doc["$schema"].endswith("v5.json")
    assert [Path(p).name for p in written] == \
           ["rank1_I.vl.json", "rank2_J.vl.json", "rank3_K.vl.json", "rank4_L.vl.json"]


def test_catalog_dump(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["designs"]) == 16


def test_table_format(capsys):
    code, out, _ = run(capsys, "classify", "--data", SALES, "--format", "table",
                       "--utterance", "compare the sales for Washington and California")
    assert code == 0
    assert "1-1" in out and "ev-ea" in out


def test_stdout_byte_stable(capsys):
    args = ("recommend", "--data", BOOKS,
            "--utterance", "compare the popularity of expensive books")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2


def test_missing_file_exit_2(capsys):
    code, _, err = run(capsys, "classify", "--data", "/nonexistent.csv",
                       "--utterance", "compare a and b")
    assert code == 2


def test_lexicon_env_override(tmp_path, capsys, monkeypatch):
    lexicon_doc = {"entries": [{
        "term": "shiny",
        "role": "value-modifier",
        "polarity": "high",
        "hints": [{"pattern": "price", "confidence": 0.9,
                   "policies": [{"kind": "mean"}]}],
    }]}
    path = tmp_path / "lex.json"
    path.write_text(json.dumps(lexicon_doc))
    monkeypatch.setenv("COMPAREVIZ_LEXICON", str(path))
    code, out, _ = run(capsys, "resolve", "--data", BOOKS,
                       "--utterance", "compare the prices of shiny books")
    assert code == 0
    doc = json.loads(out)
    assert doc["entries"][0]["interpretations"][0]["provenance"] == \
        "shiny = Price > mean(Price)"
