"""Independent reference computations used by the tests.

Nothing here imports the code under test except for the alphabet constant.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction

from rapidfuzz.distance import DamerauLevenshtein

ALPHABET = "abcdefghijklmnopqrstuvwxyz"


def dl_distance(a: str, b: str) -> int:
    """Unrestricted Damerau-Levenshtein distance (Lowrance-Wagner)."""
    inf = len(a) + len(b)
    last_row: dict[str, int] = {}
    d = [[inf] * (len(b) + 2) for _ in range(len(a) + 2)]
    for i in range(len(a) + 1):
        d[i + 1][0] = inf
        d[i + 1][1] = i
    for j in range(len(b) + 1):
        d[0][j + 1] = inf
        d[1][j + 1] = j
    for i in range(1, len(a) + 1):
        last_match_col = 0
        for j in range(1, len(b) + 1):
            i1 = last_row.get(b[j - 1], 0)
            j1 = last_match_col
            cost = 0 if a[i - 1] == b[j - 1] else 1
            if cost == 0:
                last_match_col = j
            d[i + 1][j + 1] = min(
                d[i][j] + cost,
                d[i + 1][j] + 1,
                d[i][j + 1] + 1,
                d[i1][j1] + (i - i1 - 1) + 1 + (j - j1 - 1),
            )
        last_row[a[i - 1]] = i
    return d[len(a) + 1][len(b) + 1]


def _canonical(tup, placeholders) -> bool:
    # placeholder k may only appear after placeholder k-1 has appeared
    seen = 0
    for ch in tup:
        if ch in placeholders:
            k = placeholders.index(ch)
            if k > seen:
                return False
            if k == seen:
                seen += 1
    return True


def dl_sphere(token: str, d: int, alphabet: str = ALPHABET) -> set[str]:
    """All non-empty strings over ``alphabet`` at DL distance exactly ``d`` from ``token``.

    Exhaustive over every length in ``[len - d, len + d]``.  Letters absent
    from the token are interchangeable for the distance, so they are
    enumerated as up to ``d`` placeholder symbols and expanded afterwards.
    """
    fresh = [c for c in alphabet if c not in token]
    placeholders = ["\x00", "\x01", "\x02"][:min(d, len(fresh))]
    symbols = sorted(set(token)) + placeholders
    out = set()
    for length in range(max(1, len(token) - d), len(token) + d + 1):
        for tup in itertools.product(symbols, repeat=length):
            if not _canonical(tup, placeholders):
                continue
            s = "".join(tup)
            if DamerauLevenshtein.distance(token, s) != d:
                continue
            used = [p for p in placeholders if p in s]
            for letters in itertools.permutations(fresh, len(used)):
                t = s
                for p, c in zip(used, letters):
                    t = t.replace(p, c)
                out.add(t)
    return out


def zipf_first(n: int, s: float) -> float:
    """``p_1`` of a Zipf law by plain left-to-right harmonic summation."""
    total = 0.0
    for k in range(1, n + 1):
        total += 1.0 / k ** s
    return 1.0 / total


def prefix_counts(training: list[str]) -> Counter:
    """Number of training words passing through each prefix (root = '')."""
    c = Counter()
    for w in training:
        for i in range(len(w) + 1):
            c[w[:i]] += 1
    return c


def baseline_probability(training: list[str], word: str) -> Fraction:
    """Chain-rule product of child count shares, computed from the training multiset."""
    pc = prefix_counts(training)
    if word not in set(training):
        return Fraction(0)
    p = Fraction(1)
    for i in range(len(word)):
        parent = word[:i]
        total = sum(pc[parent + c] for c in ALPHABET)
        p *= Fraction(pc[word[:i + 1]], total)
    return p


def empirical_probability(training: list[str], word: str) -> Fraction:
    return Fraction(training.count(word), len(training))


def binomial_tolerance(p: float, n: int, sigmas: float) -> float:
    return sigmas * math.sqrt(p * (1 - p) / n)
