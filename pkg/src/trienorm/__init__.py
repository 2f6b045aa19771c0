"""Counting-trie word probability estimation and noisy-channel text normalization."""

from .trie import CountingTrie, InvalidWordError, Mode, TrieFormatError, TrieNode, deserialize, serialize
from .corpus import CorpusModel, fit_zipf, load_corpus, read_corpus_file, sample_word, sample_words

__all__ = [
    "CountingTrie", "CorpusModel", "InvalidWordError", "Mode", "TrieFormatError", "TrieNode",
    "deserialize", "fit_zipf", "load_corpus", "read_corpus_file", "sample_word", "sample_words",
    "serialize",
]
