import json
from fractions import Fraction

import numpy as np
import pytest

from trienorm import load_corpus
from trienorm.simulate import (
    CSV_HEADER, CheckpointError, compare_models, consistency_bound, consistency_violations, ensemble_summary,
    log_checkpoints, run_replicates, run_training, unbiasedness_violations, write_json, write_trace_csv,
)

from oracles import binomial_tolerance


def test_log_checkpoints():
    cps = log_checkpoints(8, 50_000)
    assert cps[0] == 8 and cps[-1] == 50_000
    assert all(b > a for a, b in zip(cps, cps[1:]))


class TestRunTraining:
    def test_eight_words_converge(self, eight_corpus):
        tr = run_training(eight_corpus, "improved", 50_000, seed=1)
        assert tr.checkpoints[0] == 0 and tr.checkpoints[-1] == 50_000
        assert all(abs(p - 0.125) < 0.01 for p in tr.p_hat[-1])

    def test_single_word(self):
        tr = run_training(load_corpus(["w"]), "improved", 100, [10, 100], seed=0)
        assert tr.p_hat == [[1.0], [1.0], [1.0]]

    def test_bill_bills(self, bill_corpus):
        imp = run_training(bill_corpus, "improved", 50_000, seed=5)
        base = run_training(bill_corpus, "baseline", 50_000, seed=5)
        assert abs(imp.final()["bill"] - 0.75) < 0.01
        assert abs(imp.final()["bills"] - 0.25) < 0.01
        for row in base.p_hat:
            assert row[0] == row[1]

    def test_seeding_snapshot(self, bill_corpus):
        tr = run_training(bill_corpus, "improved", 10, [2, 5, 10], seed=0)
        # after one pass bill then bills no dummy exists yet: the window is visible
        assert tr.checkpoints == [0, 2, 5, 10]
        assert tr.complete[0] is False
        assert tr.sums[0] == Fraction(2)

    def test_deterministic(self, compare20):
        a = run_training(compare20, "improved", 5_000, seed=42)
        b = run_training(compare20, "improved", 5_000, seed=42)
        assert a.p_hat == b.p_hat and a.sums == b.sums

    def test_probabilities_in_unit_interval_and_sum(self, compare20):
        tr = run_training(compare20, "improved", 5_000, seed=9)
        for row, s, done in zip(tr.p_hat, tr.sums, tr.complete):
            assert all(0 <= p <= 1 for p in row)
            assert s <= 1 or not done
            if done:
                assert s == 1

    @pytest.mark.parametrize("cps", [[5, 3], [1, 100], [100, 10**9], [], [50, 50]])
    def test_invalid_checkpoints(self, compare20, cps):
        with pytest.raises(CheckpointError):
            run_training(compare20, "improved", 1_000, cps, seed=0)

    def test_n_smaller_than_corpus(self, compare20):
        with pytest.raises(CheckpointError):
            run_training(compare20, "improved", 10, seed=0)

    def test_consistency_bound(self, compare20):
        tr = run_training(compare20, "improved", 50_000, seed=3)
        assert consistency_violations(tr) == []
        assert consistency_bound(0.25, 10_000) == pytest.approx(binomial_tolerance(0.25, 10_000, 6) + 1e-4)


class TestReplicates:
    def test_unbiased_eight_words(self, eight_corpus):
        ens = run_replicates(eight_corpus, "improved", 10_000, 30, seed=100)
        assert ens.replicates == 30
        assert len(unbiasedness_violations(ens)) <= 1

    def test_k1_equals_single_run(self, eight_corpus):
        ens = run_replicates(eight_corpus, "improved", 2_000, 1, seed=4)
        single = run_training(eight_corpus, "improved", 2_000, seed=4)
        np.testing.assert_array_equal(ens.mean, single.as_array())
        assert (ens.se == 0).all()

    def test_mean_beats_median_replicate(self, eight_corpus):
        ens = run_replicates(eight_corpus, "improved", 10_000, 30, seed=8)
        p = np.asarray(eight_corpus.probs)
        mean_dev = np.abs(ens.mean[-1] - p).max()
        single_devs = [np.abs(np.asarray(r.p_hat[-1]) - p).max() for r in ens.runs]
        assert mean_dev < np.median(single_devs)

    def test_parallel_matches_serial(self, eight_corpus):
        a = run_replicates(eight_corpus, "improved", 1_000, 4, seed=2)
        b = run_replicates(eight_corpus, "improved", 1_000, 4, seed=2, workers=2)
        np.testing.assert_array_equal(a.mean, b.mean)

    def test_rejects_zero_replicates(self, eight_corpus):
        with pytest.raises(ValueError):
            run_replicates(eight_corpus, K=0)


class TestCompare:
    def test_prefix_pair_corpus(self, compare20):
        cmp = compare_models(compare20, 50_000, seed=1)
        assert cmp.warning is None
        assert cmp.baseline.sums[-1] > 1
        assert cmp.improved.complete[-1] and cmp.improved.sums[-1] == 1
        assert cmp.improved.max_deviation() < cmp.baseline.max_deviation()

    def test_prefix_free_identical(self):
        c = load_corpus(["cat", "dog", "bird", "fish"], [0.4, 0.3, 0.2, 0.1])
        cmp = compare_models(c, 5_000, seed=1)
        assert cmp.warning is not None
        assert cmp.improved.p_hat == cmp.baseline.p_hat

    def test_same_sample_stream(self, compare20):
        cmp = compare_models(compare20, 3_000, seed=6)
        solo = run_training(compare20, "baseline", 3_000, seed=6)
        assert cmp.baseline.p_hat == solo.p_hat


class TestOutput:
    def test_csv(self, tmp_path, eight_corpus):
        tr = run_training(eight_corpus, "improved", 1_000, [100, 1_000], seed=3)
        p = tmp_path / "t.csv"
        write_trace_csv(p, tr)
        lines = p.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) - 1 == len(tr.checkpoints) * len(eight_corpus)
        n, word, p_hat, p_true, mode, seed = lines[1].split(",")
        assert (n, word, mode, seed) == ("0", "bird", "improved", "3")
        assert float(p_true) == 0.125

    def test_ensemble_json(self, tmp_path, eight_corpus):
        ens = run_replicates(eight_corpus, "improved", 500, 3, [100, 500], seed=1)
        p = tmp_path / "e.json"
        write_json(p, ensemble_summary(ens))
        data = json.loads(p.read_text())
        assert data["replicates"] == 3
        assert set(data["checkpoints"][-1]["words"]["bird"]) == {"mean", "se", "p_true"}
