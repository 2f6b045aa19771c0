"""Noisy-channel correction of non-lexical tokens.

Candidates come from three sources:

* single edits (deletion, adjacent swap, replacement, insertion) of the token,
* phonetic substitutions from a table such as ``8 -> ate|eight``,
* a second round of single edits applied only to first-round candidates whose
  character-bigram score clears a threshold (a one-step beam).

Candidates found in the trie are ranked by ``P(token | word) * P(word)``: the
channel likelihood of the recorded edits times the trie probability.

Edits are always described as operations that turn the *token* into the
*candidate*; ``position`` indexes the string the edit is applied to.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

from .corpus import CorpusModel, load_corpus
from .trie import ALPHABET, CountingTrie, InvalidWordError

EDIT_TYPES = ("insertion", "deletion", "replacement", "swap", "phonetic")
DEFAULT_TAU = 0.01
BIGRAM_SMOOTHING = 1e-6
START = "^"  # context of an edit at the start of the string

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_WORD_RE = re.compile(r"[a-z]+")
_IDX = {c: i for i, c in enumerate(ALPHABET)}


@dataclass(frozen=True)
class Edit:
    """One edit: replace ``before`` at ``position`` with ``after``.

    ``context`` is the character preceding ``position`` (``^`` at the start);
    insertion and deletion likelihoods are conditioned on it.
    """

    kind: str
    position: int
    before: str
    after: str
    context: str = START

    def apply(self, s: str) -> str:
        if s[self.position:self.position + len(self.before)] != self.before:
            raise ValueError(f"{self} does not apply to {s!r}")
        return s[:self.position] + self.after + s[self.position + len(self.before):]


@dataclass(frozen=True)
class EditCandidate:
    word: str
    edits: tuple[Edit, ...]

    @property
    def dl_distance(self) -> int:
        return len(self.edits)


@dataclass(frozen=True)
class Suggestion:
    word: str
    prior: float
    likelihood: float
    score: float
    dl_distance: int
    edits: tuple[Edit, ...] = ()

    def as_dict(self) -> dict:
        return {
            "word": self.word,
            "score": self.score,
            "prior": self.prior,
            "likelihood": self.likelihood,
            "dl_distance": self.dl_distance,
            "edits": [f"{e.kind}@{e.position}:{e.before or '-'}>{e.after or '-'}" for e in self.edits],
        }


def _check_token(token: str) -> str:
    if not token:
        raise InvalidWordError("empty token")
    t = token.lower()
    if _TOKEN_RE.fullmatch(t) is None:
        bad = next(c for c in t if not c.isalnum() or not c.isascii())
        raise InvalidWordError(f"character {bad!r} in {token!r} is not a letter or digit")
    return t


def _single_edits(s: str, alphabet: str = ALPHABET) -> Iterator[tuple[str, Edit]]:
    n = len(s)
    for i in range(n):
        yield s[:i] + s[i + 1:], Edit("deletion", i, s[i], "", s[i - 1] if i else START)
    for i in range(n - 1):
        if s[i] != s[i + 1]:
            yield s[:i] + s[i + 1] + s[i] + s[i + 2:], Edit("swap", i, s[i:i + 2], s[i + 1] + s[i])
    for i in range(n):
        for c in alphabet:
            if c != s[i]:
                yield s[:i] + c + s[i + 1:], Edit("replacement", i, s[i], c)
    for i in range(n + 1):
        ctx = s[i - 1] if i else START
        for c in alphabet:
            yield s[:i] + c + s[i:], Edit("insertion", i, "", c, ctx)


def edits1(token: str, alphabet: str = ALPHABET) -> dict[str, EditCandidate]:
    """All non-empty strings one edit away from ``token``, keyed by string.

    When several edits produce the same string the first in generation order
    (deletions, swaps, replacements, insertions; left to right) is kept.
    """
    token = _check_token(token)
    out: dict[str, EditCandidate] = {}
    for w, e in _single_edits(token, alphabet):
        if w and w != token and w not in out:
            out[w] = EditCandidate(w, (e,))
    return out


def load_phonetic_table(path: str | Path) -> dict[str, tuple[str, ...]]:
    """Parse ``key=exp1|exp2`` lines; ``#`` starts a comment line."""
    table: dict[str, tuple[str, ...]] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rhs = line.partition("=")
        key = key.strip().lower()
        exps = tuple(e.strip().lower() for e in rhs.split("|") if e.strip())
        if not sep or not key or not exps:
            raise ValueError(f"{path}:{lineno}: expected key=exp1|exp2, got {line!r}")
        table[key] = table.get(key, ()) + tuple(e for e in exps if e not in table.get(key, ()))
    return table


def default_phonetic_table() -> dict[str, tuple[str, ...]]:
    return load_phonetic_table(Path(str(resources.files("trienorm") / "data" / "phonetic.txt")))


def phonetic_variants(token: str, table: Mapping[str, Iterable[str]]) -> dict[str, EditCandidate]:
    """Replace each occurrence of each table key by each of its expansions, once."""
    token = _check_token(token)
    out: dict[str, EditCandidate] = {}
    for key, exps in table.items():
        i = token.find(key)
        while i >= 0:
            ctx = token[i - 1] if i else START
            for exp in exps:
                w = token[:i] + exp + token[i + len(key):]
                if w and w != token and w not in out:
                    out[w] = EditCandidate(w, (Edit("phonetic", i, key, exp, ctx),))
            i = token.find(key, i + 1)
    return out


@dataclass(frozen=True)
class BigramModel:
    """Row-stochastic 26x26 matrix; ``matrix[i, j] = P(next = j | current = i)``."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (26, 26):
            raise ValueError(f"bigram matrix must be 26x26, got {m.shape}")
        if not (m > 0).all():
            raise ValueError("bigram entries must be positive")
        if not np.allclose(m.sum(axis=1), 1.0, rtol=0, atol=1e-9):
            raise ValueError("bigram rows must sum to 1")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def uniform(cls) -> BigramModel:
        return cls(np.full((26, 26), 1 / 26))

    def __getitem__(self, pair: tuple[str, str]) -> float:
        a, b = pair
        return float(self.matrix[_IDX[a], _IDX[b]])

    def score(self, word: str) -> float:
        return bigram_score(word, self)


def bigram_score(word: str, model: BigramModel) -> float:
    """Product of the transition probabilities of consecutive letters (1 for one letter)."""
    if _WORD_RE.fullmatch(word) is None:
        raise InvalidWordError(f"{word!r} is not a non-empty a-z string")
    m = model.matrix
    return math.prod(m[_IDX[a], _IDX[b]] for a, b in zip(word, word[1:]))


def estimate_bigram(corpus: CorpusModel) -> BigramModel:
    """Letter transitions weighted by word occurrence probability, floored at 1e-6 per cell."""
    counts = np.zeros((26, 26))
    for word, p in corpus:
        for a, b in zip(word, word[1:]):
            counts[_IDX[a], _IDX[b]] += p
    counts += BIGRAM_SMOOTHING
    return BigramModel(counts / counts.sum(axis=1, keepdims=True))


def corpus_from_trie(trie: CountingTrie) -> CorpusModel:
    """Stored words weighted by their (renormalized) trie probabilities."""
    words = list(trie.words())
    return load_corpus(words, [trie.probability(w) for w in words])


def expand_beam(token: str, candidates: Mapping[str, EditCandidate], bigram: BigramModel,
                gamma: float | None = None, tau: float = DEFAULT_TAU,
                accept: Callable[[str], bool] | None = None,
                alphabet: str = ALPHABET) -> dict[str, EditCandidate]:
    """Second-round edits of the candidates whose bigram score exceeds the threshold.

    The threshold is ``gamma`` when given, else ``tau ** (len(candidate) - 1)``.
    Returned strings are at distance exactly 2: the token and every string one
    edit away from it are excluded.  ``accept`` filters strings before a
    candidate object is built (e.g. a lexicon lookup).
    """
    token = _check_token(token)
    near = set(edits1(token, alphabet))
    near.add(token)
    out: dict[str, EditCandidate] = {}
    for cand in candidates.values():
        w1 = cand.word
        if _WORD_RE.fullmatch(w1) is None:
            continue
        threshold = gamma if gamma is not None else tau ** (len(w1) - 1)
        if bigram_score(w1, bigram) <= threshold:
            continue
        for w2, e in _single_edits(w1, alphabet):
            if not w2 or w2 in near or w2 in out:
                continue
            if accept is not None and not accept(w2):
                continue
            out[w2] = EditCandidate(w2, cand.edits + (e,))
    return out


def load_confusion(path: str | Path) -> dict[tuple[str, str, str], float]:
    """Read ``type,from,to,weight`` rows into ``{(type, from, to): weight}``."""
    table: dict[tuple[str, str, str], float] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        rows = (r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#"))
        for row in rows:
            if [c.strip() for c in row] == ["type", "from", "to", "weight"]:
                continue
            if len(row) != 4:
                raise ValueError(f"{path}: expected type,from,to,weight, got {row!r}")
            kind, frm, to, weight = (c.strip() for c in row)
            if kind not in EDIT_TYPES:
                raise ValueError(f"{path}: unknown edit type {kind!r}")
            w = float(weight)
            if w < 0:
                raise ValueError(f"{path}: negative weight in {row!r}")
            table[(kind, frm, to)] = w
    return table


@dataclass
class ChannelModel:
    """Likelihood ``P(token | word)`` of a sequence of edits.

    Each edit contributes ``base[kind] * weight / row_total`` where the row is
    the set of alternatives sharing the edit's conditioning character:

    ============  ===========  ==================  ========================
    kind          conditioned  on target           alternatives
    ============  ===========  ==================  ========================
    replacement   old char     new char            25 other letters
    swap          first char   second char         25 other letters
    insertion     context      inserted char       26 letters
    deletion      context      deleted char        26 letters
    phonetic      table key    expansion           the key's expansions
    ============  ===========  ==================  ========================

    Unlisted cells weigh ``default_weight``, so an empty confusion table gives
    uniform rows.
    """

    base: dict[str, float] = field(default_factory=lambda: {t: 1 / len(EDIT_TYPES) for t in EDIT_TYPES})
    confusion: dict[tuple[str, str, str], float] = field(default_factory=dict)
    phonetic_table: dict[str, tuple[str, ...]] = field(default_factory=dict)
    default_weight: float = 1.0

    def __post_init__(self):
        if any(v <= 0 for v in self.base.values()):
            raise ValueError("base edit probabilities must be positive")
        if any(v < 0 for v in self.confusion.values()):
            raise ValueError("confusion weights must be non-negative")

    @cached_property
    def _row_totals(self) -> dict[tuple[str, str], float]:
        return {}

    def _alternatives(self, kind: str, frm: str, to: str) -> Iterable[str]:
        if kind in ("replacement", "swap"):
            return (c for c in ALPHABET if c != frm)
        if kind in ("insertion", "deletion"):
            return ALPHABET
        return self.phonetic_table.get(frm, (to,))

    def _weight(self, kind: str, frm: str, to: str) -> float:
        return self.confusion.get((kind, frm, to), self.default_weight)

    def edit_probability(self, edit: Edit) -> float:
        kind = edit.kind
        if kind not in EDIT_TYPES or kind not in self.base:
            raise ValueError(f"unknown edit type {kind!r}")
        if kind == "replacement" or kind == "phonetic":
            frm, to = edit.before, edit.after
        elif kind == "swap":
            frm, to = edit.before[0], edit.before[1]
        elif kind == "insertion":
            frm, to = edit.context, edit.after
        else:
            frm, to = edit.context, edit.before
        key = (kind, frm)
        total = self._row_totals.get(key)
        if total is None:
            total = self._row_totals[key] = math.fsum(self._weight(kind, frm, t) for t in self._alternatives(kind, frm, to))
        w = self._weight(kind, frm, to)
        if total == 0 or w == 0:
            return 0.0
        return self.base[kind] * w / total

    def likelihood(self, edits: Iterable[Edit]) -> float:
        return channel_probability(edits, self)


def channel_probability(edits: Iterable[Edit], model: ChannelModel) -> float:
    return math.prod(model.edit_probability(e) for e in edits)


def rank_suggestions(token: str, trie: CountingTrie, channel: ChannelModel, bigram: BigramModel,
                     gamma: float | None = None, k: int = 5, tau: float = DEFAULT_TAU) -> list[Suggestion]:
    """Top-``k`` corrections of ``token`` ranked by likelihood times trie prior.

    A token already in the trie is returned first with likelihood 1, followed
    by the best alternatives.  Ties in score are broken alphabetically.
    """
    token = _check_token(token)
    first = edits1(token)
    pools = (
        first,
        phonetic_variants(token, channel.phonetic_table),
        expand_beam(token, first, bigram, gamma=gamma, tau=tau, accept=trie.contains),
    )
    best: dict[str, tuple[float, EditCandidate]] = {}
    for pool in pools:
        for w, cand in pool.items():
            if w == token or not trie.contains(w):
                continue
            lik = channel_probability(cand.edits, channel)
            if w not in best or lik > best[w][0]:
                best[w] = (lik, cand)

    alternatives = []
    for w, (lik, cand) in best.items():
        prior = trie.probability(w)
        alternatives.append(Suggestion(w, prior, lik, lik * prior, cand.dl_distance, cand.edits))
    alternatives.sort(key=lambda s: (-s.score, s.word))

    out = []
    if trie.contains(token):
        prior = trie.probability(token)
        out.append(Suggestion(token, prior, 1.0, prior, 0))
    out.extend(alternatives)
    return out[:k]
