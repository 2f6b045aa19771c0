import json

import pytest

from trienorm import CountingTrie
from trienorm.cli import SEED_ENV, main


@pytest.fixture(scope="module")
def top_trie(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "top.trie"
    assert main(["train", "--corpus", "builtin:top3000", "--n", "100000", "--seed", "11", "--out", str(out)]) == 0
    return str(out)


@pytest.fixture(autouse=True)
def no_env_seed(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)


class TestTrain:
    def test_eight_words(self, tmp_path, capsys):
        out = tmp_path / "f.trie"
        assert main(["train", "--corpus", "builtin:eight", "--zipf", "0", "--out", str(out)]) == 0
        assert "dummies: 0  root count: 8" in capsys.readouterr().out
        assert CountingTrie.load(out).probability("bird") == 0.125

    def test_bill_then_bills_no_dummy(self, tmp_path, capsys):
        corpus = tmp_path / "c.txt"
        corpus.write_text("bill\nbills\n")
        assert main(["train", "--corpus", str(corpus), "--n", "0", "--out", str(tmp_path / "t")]) == 0
        assert "dummies: 0" in capsys.readouterr().out

    def test_missing_corpus(self, tmp_path, capsys):
        assert main(["train", "--corpus", str(tmp_path / "nope.txt"), "--out", str(tmp_path / "t")]) == 2
        assert "not found" in capsys.readouterr().err

    def test_unknown_builtin(self, tmp_path):
        assert main(["train", "--corpus", "builtin:klingon", "--out", str(tmp_path / "t")]) == 2

    def test_sampling_needs_seed(self, tmp_path):
        assert main(["train", "--corpus", "builtin:eight", "--n", "10", "--out", str(tmp_path / "t")]) == 2


class TestCorrect:
    @pytest.mark.parametrize("token, target", [("beleive", "believe"), ("h8", "hate")])
    def test_targets(self, top_trie, capsys, token, target):
        assert main(["correct", "--trie", top_trie, "--json", token]) == 0
        rec = json.loads(capsys.readouterr().out)
        assert rec["token"] == token
        assert target in [s["word"] for s in rec["suggestions"]]

    def test_in_lexicon_rank_one(self, top_trie, capsys):
        assert main(["correct", "--trie", top_trie, "--topk", "3", "--json", "train"]) == 0
        sugg = json.loads(capsys.readouterr().out)["suggestions"]
        assert sugg[0]["word"] == "train" and len(sugg) == 3
        assert set(sugg[0]) >= {"word", "score", "prior", "likelihood", "dl_distance"}

    def test_json_lines(self, top_trie, capsys):
        assert main(["correct", "--trie", top_trie, "--json", "tran", "m8"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert [json.loads(line)["token"] for line in lines] == ["tran", "m8"]

    def test_text_output(self, top_trie, capsys):
        assert main(["correct", "--trie", top_trie, "beleive"]) == 0
        assert "1. believe" in capsys.readouterr().out

    def test_stdin(self, top_trie, capsys, monkeypatch):
        import io
        monkeypatch.setattr("sys.stdin", io.StringIO("tran\n"))
        assert main(["correct", "--trie", top_trie, "--json"]) == 0
        assert json.loads(capsys.readouterr().out)["token"] == "tran"

    def test_bad_trie(self, tmp_path, capsys):
        bad = tmp_path / "bad.trie"
        bad.write_bytes(b"TRIE v1 mode=improved\n1 a x 1\n")
        assert main(["correct", "--trie", str(bad), "cat"]) == 2
        assert "byte offset 22" in capsys.readouterr().err

    def test_missing_trie(self, tmp_path):
        assert main(["correct", "--trie", str(tmp_path / "none"), "cat"]) == 2


class TestSimulate:
    def test_rows_and_rerun(self, tmp_path):
        out = tmp_path / "s.csv"
        args = ["simulate", "--corpus", "builtin:eight", "--zipf", "0", "--n", "2000",
                "--checkpoints", "100,1000,2000", "--seed", "3", "--out", str(out)]
        assert main(args) == 0
        lines = out.read_text().splitlines()
        assert len(lines) - 1 == 4 * 8
        first = out.read_bytes(), (tmp_path / "s.json").read_bytes()
        out2 = tmp_path / "again.csv"
        assert main(["simulate", "--config", str(out) + ".config", "--out", str(out2)]) == 0
        assert out2.read_bytes() == first[0]

    def test_replicates_json(self, tmp_path):
        out = tmp_path / "e.csv"
        assert main(["simulate", "--corpus", "builtin:eight", "--zipf", "0", "--n", "10000", "--replicates", "30",
                     "--seed", "1", "--out", str(out), "--check"]) == 0
        data = json.loads((tmp_path / "e.json").read_text())
        assert data["replicates"] == 30
        assert "se" in data["checkpoints"][-1]["words"]["bird"]
        assert data["config"]["replicates"] == 30

    def test_env_seed(self, tmp_path, monkeypatch):
        monkeypatch.setenv(SEED_ENV, "5")
        out = tmp_path / "s.csv"
        assert main(["simulate", "--corpus", "builtin:eight", "--n", "500", "--out", str(out)]) == 0
        assert "seed = 5" in (tmp_path / "s.csv.config").read_text()

    def test_missing_seed(self, capsys):
        assert main(["simulate", "--corpus", "builtin:eight", "--n", "500"]) == 2
        assert SEED_ENV in capsys.readouterr().err

    def test_bad_checkpoints(self):
        assert main(["simulate", "--corpus", "builtin:eight", "--n", "500", "--seed", "1", "--checkpoints", "9,3"]) == 2

    def test_check_exit_codes(self, monkeypatch):
        args = ["simulate", "--corpus", "builtin:eight", "--n", "500", "--seed", "1", "--check"]
        assert main(args) == 0
        monkeypatch.setattr("trienorm.simulate.consistency_violations", lambda trace: [("bird", 500)])
        assert main(args) == 1
        assert main(args[:-1]) == 0

    def test_flags_override_config(self, tmp_path):
        conf = tmp_path / "run.config"
        conf.write_text("corpus = builtin:eight\nseed = 1\nn = 500\n")
        out = tmp_path / "o.csv"
        assert main(["simulate", "--config", str(conf), "--seed", "9", "--out", str(out)]) == 0
        assert "seed = 9" in (tmp_path / "o.csv.config").read_text()

    def test_bad_config(self, tmp_path):
        conf = tmp_path / "run.config"
        conf.write_text("wat = 1\n")
        assert main(["simulate", "--config", str(conf)]) == 2


class TestCompare:
    def test_baseline_over_one(self, tmp_path, capsys):
        out = tmp_path / "c.csv"
        assert main(["compare", "--seed", "1", "--n", "20000", "--out", str(out), "--check"]) == 0
        last = [ln for ln in capsys.readouterr().out.splitlines() if ln.strip().startswith("20000")][0]
        improved, baseline = map(float, last.split()[1:])
        assert baseline > 1 and improved == 1
        data = json.loads((tmp_path / "c.json").read_text())
        assert data["baseline"]["sums"][-1]["sum"] > 1

    def test_prefix_free_warns(self, tmp_path, capsys):
        c = tmp_path / "c.txt"
        c.write_text("cat\ndog\n")
        assert main(["compare", "--corpus", str(c), "--seed", "1", "--n", "100"]) == 0
        assert "warning" in capsys.readouterr().err
