"""Monte Carlo harness for the trie probability estimator.

A run seeds a fresh trie with one pass over the corpus (so every word has
been seen once), then trains on i.i.d. draws from the corpus and snapshots
the trie probability of every corpus word at chosen checkpoints.

Checkpoint ``n`` means "after ``n`` training calls in total", seeding pass
included; the post-seeding snapshot is always stored first under ``n = 0``.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import CorpusModel, sample_words
from .trie import CountingTrie, Mode

SEEDING = 0  # checkpoint label of the post-seeding snapshot


class CheckpointError(ValueError):
    pass


@dataclass
class ConvergenceTrace:
    corpus: CorpusModel
    mode: Mode
    seed: int
    checkpoints: list[int] = field(default_factory=list)
    p_hat: list[list[float]] = field(default_factory=list)  # [checkpoint][word]
    sums: list[Fraction] = field(default_factory=list)  # exact sum of p_hat per checkpoint
    complete: list[bool] = field(default_factory=list)  # every needed dummy exists

    def as_array(self) -> np.ndarray:
        return np.asarray(self.p_hat)

    def final(self) -> dict[str, float]:
        return dict(zip(self.corpus.words, self.p_hat[-1]))

    def max_deviation(self, i: int = -1) -> float:
        return float(np.max(np.abs(np.asarray(self.p_hat[i]) - np.asarray(self.corpus.probs))))


@dataclass
class EnsembleTrace:
    corpus: CorpusModel
    mode: Mode
    seed: int
    checkpoints: list[int]
    mean: np.ndarray  # [checkpoint, word]
    se: np.ndarray  # standard error of the mean; zero when K = 1
    runs: list[ConvergenceTrace]

    @property
    def replicates(self) -> int:
        return len(self.runs)


@dataclass
class Comparison:
    improved: ConvergenceTrace
    baseline: ConvergenceTrace
    warning: str | None = None


def log_checkpoints(start: int, stop: int, count: int = 25) -> list[int]:
    """About ``count`` log-spaced integers from ``start`` to ``stop``, both included."""
    if stop <= start:
        return [stop]
    pts = np.unique(np.round(np.geomspace(start, stop, count)).astype(int))
    return [int(x) for x in pts]


def _validate_checkpoints(checkpoints: Sequence[int], lo: int, hi: int) -> list[int]:
    cps = [int(c) for c in checkpoints]
    if not cps:
        raise CheckpointError("checkpoint list is empty")
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise CheckpointError(f"checkpoints must be strictly increasing: {cps}")
    if cps[0] < lo or cps[-1] > hi:
        raise CheckpointError(f"checkpoints must lie in [{lo}, {hi}] (seeding pass takes {lo} steps): {cps}")
    return cps


def _snapshot(trie: CountingTrie, corpus: CorpusModel, trace: ConvergenceTrace, n: int) -> None:
    exact = [trie.probability_exact(w) for w in corpus.words]
    trace.checkpoints.append(n)
    trace.p_hat.append([float(p) for p in exact])
    trace.sums.append(sum(exact, Fraction(0)))
    trace.complete.append(not trie.improved or not trie.missing_dummies())


def _train_lockstep(corpus: CorpusModel, modes: Sequence[Mode], n: int,
                    checkpoints: Sequence[int] | None, seed: int) -> list[ConvergenceTrace]:
    size = len(corpus)
    if n < size:
        raise CheckpointError(f"n={n} is smaller than the seeding pass ({size} words)")
    cps = _validate_checkpoints(log_checkpoints(size, n) if checkpoints is None else checkpoints, size, n)
    rng = np.random.default_rng(seed)
    tries = [CountingTrie(m) for m in modes]
    traces = [ConvergenceTrace(corpus, t.mode, seed) for t in tries]

    for t in tries:
        t.train_many(corpus.words)
    for t, tr in zip(tries, traces):
        _snapshot(t, corpus, tr, SEEDING)

    pending = iter(cps)
    nxt = next(pending)
    step = size
    if nxt == step:
        for t, tr in zip(tries, traces):
            _snapshot(t, corpus, tr, step)
        nxt = next(pending, None)
    for w in sample_words(corpus, rng, n - size):
        for t in tries:
            t.train(w)
        step += 1
        if step == nxt:
            for t, tr in zip(tries, traces):
                _snapshot(t, corpus, tr, step)
            nxt = next(pending, None)
    return traces


def run_training(corpus: CorpusModel, mode: Mode | str = Mode.IMPROVED, n: int = 50_000,
                 checkpoints: Sequence[int] | None = None, seed: int = 0) -> ConvergenceTrace:
    """Train one trie for ``n`` steps (seeding pass included) and trace every word's estimate."""
    return _train_lockstep(corpus, [Mode(mode)], n, checkpoints, seed)[0]


def _run_one(args) -> ConvergenceTrace:
    return run_training(*args)


def run_replicates(corpus: CorpusModel, mode: Mode | str = Mode.IMPROVED, n: int = 10_000, K: int = 30,
                   checkpoints: Sequence[int] | None = None, seed: int = 0,
                   workers: int = 1) -> EnsembleTrace:
    """``K`` independent runs (replicate ``r`` uses seed ``seed + r``) averaged per checkpoint."""
    if K < 1:
        raise ValueError("need at least one replicate")
    if checkpoints is None:
        checkpoints = log_checkpoints(len(corpus), n)
    jobs = [(corpus, Mode(mode), n, list(checkpoints), seed + r) for r in range(K)]
    if workers > 1 and K > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            runs = list(ex.map(_run_one, jobs))
    else:
        runs = [_run_one(j) for j in jobs]
    stack = np.stack([r.as_array() for r in runs])  # [K, checkpoint, word]
    mean = stack.mean(axis=0)
    se = stack.std(axis=0, ddof=1) / math.sqrt(K) if K > 1 else np.zeros_like(mean)
    return EnsembleTrace(corpus, Mode(mode), seed, runs[0].checkpoints, mean, se, runs)


def compare_models(corpus: CorpusModel, n: int = 50_000, checkpoints: Sequence[int] | None = None,
                   seed: int = 0) -> Comparison:
    """Train improved and baseline tries on the same sample stream."""
    improved, baseline = _train_lockstep(corpus, [Mode.IMPROVED, Mode.BASELINE], n, checkpoints, seed)
    warning = None
    if not corpus.prefix_pairs():
        warning = "corpus has no prefix pairs; both modes behave identically"
    return Comparison(improved, baseline, warning)


def consistency_bound(p: float, n: int) -> float:
    """Deviation allowance ``6 * sqrt(p (1 - p) / n) + 1 / n`` for a single run."""
    return 6 * math.sqrt(p * (1 - p) / n) + 1 / n


def consistency_violations(trace: ConvergenceTrace, min_n: int = 10_000) -> list[tuple[int, str, float]]:
    out = []
    for n, row in zip(trace.checkpoints, trace.p_hat):
        if n < min_n:
            continue
        for w, p, ph in zip(trace.corpus.words, trace.corpus.probs, row):
            if abs(ph - p) > consistency_bound(p, n):
                out.append((n, w, ph))
    return out


def unbiasedness_violations(ens: EnsembleTrace, k_se: float = 3.0, index: int = -1) -> list[str]:
    """Words whose ensemble mean lies more than ``k_se`` standard errors from ``p``."""
    out = []
    for w, p, m, s in zip(ens.corpus.words, ens.corpus.probs, ens.mean[index], ens.se[index]):
        if abs(m - p) > k_se * s:
            out.append(w)
    return out


# output ----------------------------------------------------------------------

CSV_HEADER = "n,word,p_hat,p_true,mode,seed"


def trace_rows(trace: ConvergenceTrace | EnsembleTrace) -> list[str]:
    values = trace.mean if isinstance(trace, EnsembleTrace) else trace.p_hat
    rows = []
    for n, row in zip(trace.checkpoints, values):
        for w, p, ph in zip(trace.corpus.words, trace.corpus.probs, row):
            rows.append(f"{n},{w},{float(ph)!r},{p!r},{trace.mode.value},{trace.seed}")
    return rows


def write_trace_csv(path: str | Path, *traces: ConvergenceTrace | EnsembleTrace) -> None:
    lines = [CSV_HEADER]
    for t in traces:
        lines.extend(trace_rows(t))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def ensemble_summary(ens: EnsembleTrace) -> dict:
    return {
        "mode": ens.mode.value,
        "seed": ens.seed,
        "replicates": ens.replicates,
        "checkpoints": [
            {
                "n": n,
                "words": {
                    w: {"mean": float(m), "se": float(s), "p_true": p}
                    for w, p, m, s in zip(ens.corpus.words, ens.corpus.probs, ens.mean[i], ens.se[i])
                },
            }
            for i, n in enumerate(ens.checkpoints)
        ],
    }


def sums_series(trace: ConvergenceTrace) -> list[dict]:
    return [
        {"n": n, "sum": float(s), "exact": str(s), "all_dummies": c}
        for n, s, c in zip(trace.checkpoints, trace.sums, trace.complete)
    ]


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
