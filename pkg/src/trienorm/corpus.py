"""Word corpora with occurrence probabilities, Zipf fitting and i.i.d. sampling."""

from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .trie import InvalidWordError, normalize_word

log = logging.getLogger(__name__)

ZIPF_EXPONENT = 0.25


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class CorpusModel:
    """Distinct lowercase words with occurrence probabilities summing to 1.

    ``dropped`` counts input tokens rejected by the a-z alphabet rule.
    """

    words: tuple[str, ...]
    probs: tuple[float, ...]
    dropped: int = 0
    _cum: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.words:
            raise CorpusError("corpus is empty")
        if len(self.words) != len(self.probs):
            raise CorpusError("words and probabilities differ in length")
        if any(p <= 0 for p in self.probs):
            raise CorpusError("occurrence probabilities must be positive")
        if abs(math.fsum(self.probs) - 1.0) > 1e-12:
            raise CorpusError(f"probabilities sum to {math.fsum(self.probs)!r}, not 1")
        object.__setattr__(self, "_cum", tuple(np.cumsum(self.probs)))

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(zip(self.words, self.probs))

    @property
    def entries(self) -> list[tuple[str, float]]:
        return list(zip(self.words, self.probs))

    def prob(self, word: str) -> float:
        return self.probs[self.words.index(word)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.words, self.probs))

    def prefix_pairs(self) -> list[tuple[str, str]]:
        """``(short, long)`` pairs where ``short`` is a proper prefix of ``long``."""
        ws = sorted(self.words)
        pairs = []
        for i, a in enumerate(ws):
            for b in ws[i + 1:]:
                if not b.startswith(a):
                    break
                pairs.append((a, b))
        return pairs


def _normalize(weights: Sequence[float]) -> tuple[float, ...]:
    total = math.fsum(weights)
    probs = [w / total for w in weights]
    # fold the rounding residue into the largest entry so the sum is 1 to the last ulp we can get
    resid = 1.0 - math.fsum(probs)
    i = max(range(len(probs)), key=probs.__getitem__)
    probs[i] += resid
    return tuple(probs)


def load_corpus(words: Iterable[str], probabilities: Sequence[float] | None = None,
                zipf_exponent: float | None = None) -> CorpusModel:
    """Build a corpus from a ranked word list.

    Words are lowercased and tokens outside a-z are dropped (and counted).
    Explicit probabilities are renormalized over the surviving words.  With
    no probabilities, ``zipf_exponent`` fits a Zipf law over the surviving
    ranks; with neither, the weighting is uniform.
    """
    words = list(words)
    if probabilities is not None:
        if len(probabilities) != len(words):
            raise CorpusError("one probability per word required")
        if any(p <= 0 for p in probabilities):
            raise CorpusError("explicit probabilities must be positive")

    kept, weights, seen = [], [], set()
    dropped = 0
    for i, raw in enumerate(words):
        try:
            w = normalize_word(raw.strip())
        except InvalidWordError:
            dropped += 1
            continue
        if w in seen:
            raise CorpusError(f"duplicate word {w!r}")
        seen.add(w)
        kept.append(w)
        if probabilities is not None:
            weights.append(probabilities[i])
    if dropped:
        log.warning("dropped %d token(s) outside the a-z alphabet", dropped)
    if not kept:
        raise CorpusError("no usable words in corpus")

    if probabilities is None:
        if zipf_exponent is None:
            weights = [1.0] * len(kept)
        else:
            weights = list(fit_zipf(len(kept), zipf_exponent))
    return CorpusModel(tuple(kept), _normalize(weights), dropped)


def fit_zipf(n: int, s: float = ZIPF_EXPONENT) -> np.ndarray:
    """Zipf probabilities ``r**-s / sum_k k**-s`` for ranks ``r = 1..n``."""
    if n < 1:
        raise CorpusError("Zipf fit needs at least one rank")
    if s < 0:
        raise CorpusError("Zipf exponent must be non-negative")
    w = np.arange(1, n + 1, dtype=float) ** -s
    return w / math.fsum(w)


def read_corpus_file(path: str | Path, zipf_exponent: float | None = ZIPF_EXPONENT) -> CorpusModel:
    """Read a corpus file: one word per line, or ``word,probability`` lines.

    ``#`` lines and blank lines are ignored.  Files without probabilities get
    a Zipf fit over file order (``zipf_exponent=None`` means uniform).
    """
    text = Path(path).read_text(encoding="utf-8")
    return parse_corpus_text(text, zipf_exponent)


def parse_corpus_text(text: str, zipf_exponent: float | None = ZIPF_EXPONENT) -> CorpusModel:
    words, probs = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "," in line:
            w, p = line.split(",", 1)
            try:
                probs.append(float(p))
            except ValueError:
                raise CorpusError(f"line {lineno}: bad probability {p!r}") from None
            words.append(w.strip())
        else:
            words.append(line)
    if probs and len(probs) != len(words):
        raise CorpusError("mixing plain and word,probability lines")
    return load_corpus(words, probs or None, zipf_exponent)


def builtin_corpus_path(name: str) -> Path:
    """Path of a corpus shipped in ``trienorm/data`` (e.g. ``top3000_en.txt``)."""
    return Path(str(resources.files("trienorm") / "data" / name))


def sample_word(corpus: CorpusModel, rng: np.random.Generator) -> str:
    """Draw one word with probability ``p_i``."""
    i = bisect.bisect_right(corpus._cum, rng.random())
    return corpus.words[min(i, len(corpus) - 1)]


def sample_words(corpus: CorpusModel, rng: np.random.Generator, size: int) -> list[str]:
    """Vectorized :func:`sample_word`; consumes the generator identically."""
    idx = np.searchsorted(np.asarray(corpus._cum), rng.random(size), side="right")
    np.minimum(idx, len(corpus) - 1, out=idx)
    words = corpus.words
    return [words[i] for i in idx]
