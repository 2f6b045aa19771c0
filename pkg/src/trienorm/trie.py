"""Counting trie that estimates word occurrence probabilities.

Every node keeps an integer ``count`` of the training insertions that passed
through it.  The probability of a word is the product, along its path, of
each child's share of its parent's children counts.

Two behaviours are supported:

``baseline``
    Plain counting trie.  A word that is a prefix of another word shares
    its path product with that longer word's prefix, so prefix words are
    systematically over-estimated.
``improved``
    Adds a childless *dummy* node under an end-of-word node that also has
    real children.  The dummy absorbs the mass of words ending at that
    node, which makes the path product an unbiased, consistent estimate of
    the occurrence probability.

Counts are exact integers and :meth:`CountingTrie.probability_exact` returns
a :class:`fractions.Fraction`; the float API only converts at the boundary.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator

ALPHABET = "abcdefghijklmnopqrstuvwxyz"
DUMMY = "#"  # children-map key of the dummy node; never a legal character
DUMMY_TOKEN = "#DUMMY#"  # how the dummy key is spelled in the text format

_WORD_RE = re.compile(r"[a-z]+")
_HEADER_RE = re.compile(r"TRIE v1 mode=(improved|baseline)")


class InvalidWordError(ValueError):
    """Raised for empty words or words with characters outside a-z."""


class TrieFormatError(ValueError):
    """Raised when serialized trie data is malformed or truncated."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class Mode(str, enum.Enum):
    IMPROVED = "improved"
    BASELINE = "baseline"


def normalize_word(word: str) -> str:
    """Lowercase ``word`` and check it is a non-empty a-z string."""
    if not word:
        raise InvalidWordError("empty word")
    w = word.lower()
    if _WORD_RE.fullmatch(w) is None:
        bad = next(c for c in w if c not in ALPHABET)
        raise InvalidWordError(f"character {bad!r} in {word!r} is outside a-z")
    return w


class TrieNode:
    __slots__ = ("children", "count", "end_of_word", "is_dummy")

    def __init__(self, is_dummy: bool = False):
        self.children: dict[str, TrieNode] = {}
        self.count = 0
        self.end_of_word = False
        self.is_dummy = is_dummy

    @property
    def dummy(self) -> TrieNode | None:
        return self.children.get(DUMMY)

    def has_real_child(self) -> bool:
        return any(k != DUMMY for k in self.children)

    def children_total(self) -> int:
        """Sum of children counts (the ``Total`` denominator shared by siblings)."""
        return sum(c.count for c in self.children.values())

    def __repr__(self) -> str:
        flags = "D" if self.is_dummy else ("E" if self.end_of_word else "")
        return f"TrieNode(count={self.count}{', ' + flags if flags else ''}, children={sorted(self.children)})"


@dataclass(frozen=True)
class TrieStats:
    words: int
    nodes: int
    dummies: int
    root_count: int


class CountingTrie:
    """Counting trie with a ``mode`` switch between improved and baseline training."""

    def __init__(self, mode: Mode | str = Mode.IMPROVED):
        self.mode = Mode(mode)
        self.root = TrieNode()

    @property
    def improved(self) -> bool:
        return self.mode is Mode.IMPROVED

    def train(self, word: str) -> None:
        """Insert one occurrence of ``word``.

        Improved mode follows the published training procedure literally:
        an existing dummy under the final node is incremented; otherwise a
        dummy is created only when the insertion created no new node and the
        final node already has a real child.  Its count is the parent count
        (including this insertion) minus the sibling counts, i.e. the number
        of insertions that ended at the parent so far.
        """
        word = normalize_word(word)
        node = self.root
        node.count += 1
        created = False
        for ch in word:
            child = node.children.get(ch)
            if child is None:
                child = node.children[ch] = TrieNode()
                created = True
            node = child
            node.count += 1
        node.end_of_word = True

        if not self.improved:
            return
        dummy = node.children.get(DUMMY)
        if dummy is not None:
            dummy.count += 1
        elif not created and node.children:
            dummy = TrieNode(is_dummy=True)
            dummy.count = node.count - node.children_total()
            node.children[DUMMY] = dummy

    def train_many(self, words) -> None:
        for w in words:
            self.train(w)

    def _find(self, word: str) -> TrieNode | None:
        node = self.root
        for ch in word:
            node = node.children.get(ch)
            if node is None:
                return None
        return node

    def probability_exact(self, word: str) -> Fraction:
        """Trie probability of ``word`` as an exact rational."""
        word = normalize_word(word)
        node = self.root
        num = 1
        den = 1
        for ch in word:
            child = node.children.get(ch)
            if child is None:
                return Fraction(0)
            num *= child.count
            den *= node.children_total()
            node = child
        if not node.end_of_word:
            return Fraction(0)
        if self.improved:
            dummy = node.children.get(DUMMY)
            if dummy is not None:
                num *= dummy.count
                den *= node.children_total()
        return Fraction(num, den)

    def probability(self, word: str) -> float:
        return float(self.probability_exact(word))

    def contains(self, word: str) -> bool:
        try:
            word = normalize_word(word)
        except InvalidWordError:
            return False
        node = self._find(word)
        return node is not None and node.end_of_word

    __contains__ = contains

    def words(self) -> Iterator[str]:
        """Yield stored words in lexicographic order."""
        stack = [(self.root, "")]
        while stack:
            node, prefix = stack.pop()
            if node.end_of_word:
                yield prefix
            for ch in sorted((k for k in node.children if k != DUMMY), reverse=True):
                stack.append((node.children[ch], prefix + ch))

    def nodes(self) -> Iterator[tuple[int, str, TrieNode]]:
        """Pre-order walk yielding ``(depth, key, node)``; root excluded, dummy last among siblings."""
        stack = [(1, k, c) for k, c in reversed(_ordered_children(self.root))]
        while stack:
            depth, key, node = stack.pop()
            yield depth, key, node
            stack.extend((depth + 1, k, c) for k, c in reversed(_ordered_children(node)))

    def stats(self) -> TrieStats:
        words = nodes = dummies = 0
        for _, _, node in self.nodes():
            nodes += 1
            dummies += node.is_dummy
            words += node.end_of_word
        return TrieStats(words=words, nodes=nodes, dummies=dummies, root_count=self.root.count)

    def missing_dummies(self) -> list[str]:
        """Words whose final node has real children but no dummy yet."""
        out = []
        for w in self.words():
            node = self._find(w)
            if node.has_real_child() and node.dummy is None:
                out.append(w)
        return out

    def dumps(self) -> bytes:
        return serialize(self)

    @classmethod
    def loads(cls, data: bytes) -> CountingTrie:
        return deserialize(data)

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(serialize(self))

    @classmethod
    def load(cls, path: str | Path) -> CountingTrie:
        return deserialize(Path(path).read_bytes())


def _ordered_children(node: TrieNode) -> list[tuple[str, TrieNode]]:
    keys = sorted(k for k in node.children if k != DUMMY)
    if DUMMY in node.children:
        keys.append(DUMMY)
    return [(k, node.children[k]) for k in keys]


def serialize(trie: CountingTrie) -> bytes:
    """Encode as the line-oriented ``TRIE v1`` text format.

    The root line is implicit: its count equals the sum of the depth-1 counts.
    """
    lines = [f"TRIE v1 mode={trie.mode.value}"]
    for depth, key, node in trie.nodes():
        token = DUMMY_TOKEN if key == DUMMY else key
        lines.append(f"{depth} {token} {node.count} {int(node.end_of_word)}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def deserialize(data: bytes) -> CountingTrie:
    offset = 0
    lines = data.split(b"\n")
    if not data.endswith(b"\n"):
        raise TrieFormatError("truncated input: missing final newline", len(data))
    lines.pop()

    header = lines[0].decode("utf-8", errors="replace") if lines else ""
    m = _HEADER_RE.fullmatch(header)
    if m is None:
        raise TrieFormatError(f"bad header {header!r}", 0)
    trie = CountingTrie(m.group(1))
    offset = len(lines[0]) + 1

    path = [trie.root]  # path[d] is the most recent node at depth d
    for raw in lines[1:]:
        line_offset = offset
        offset += len(raw) + 1
        try:
            depth_s, token, count_s, eow_s = raw.decode("ascii").split(" ")
            depth, count, eow = int(depth_s), int(count_s), int(eow_s)
        except ValueError:
            raise TrieFormatError(f"malformed node line {raw!r}", line_offset) from None
        if not 1 <= depth <= len(path):
            raise TrieFormatError(f"depth {depth} does not follow depth {len(path) - 1}", line_offset)
        if count < 1 or eow not in (0, 1):
            raise TrieFormatError(f"invalid count/flag in {raw!r}", line_offset)
        parent = path[depth - 1]
        if parent.is_dummy:
            raise TrieFormatError("dummy node cannot have children", line_offset)
        if token == DUMMY_TOKEN:
            if not trie.improved:
                raise TrieFormatError("dummy node in baseline trie", line_offset)
            if eow or not parent.end_of_word or depth == 1:
                raise TrieFormatError("dummy node must hang under an end-of-word node", line_offset)
            key = DUMMY
        elif len(token) == 1 and token in ALPHABET:
            key = token
        else:
            raise TrieFormatError(f"invalid node character {token!r}", line_offset)
        if key in parent.children:
            raise TrieFormatError(f"duplicate child {token!r}", line_offset)
        node = TrieNode(is_dummy=key == DUMMY)
        node.count = count
        node.end_of_word = bool(eow)
        parent.children[key] = node
        del path[depth:]
        path.append(node)

    trie.root.count = trie.root.children_total()
    for _, _, node in trie.nodes():
        if DUMMY in node.children and not node.has_real_child():
            raise TrieFormatError("dummy node without a real sibling", offset)
    return trie
