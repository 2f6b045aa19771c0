"""Top-5 corrections for the twelve noisy tokens, trained on the 3000-word Zipf corpus."""

import numpy as np

from trienorm import CountingTrie
from trienorm.corpus import sample_words
from trienorm.correction import ChannelModel, corpus_from_trie, default_phonetic_table, estimate_bigram, rank_suggestions

from _common import base_parser, corpus_arg

ROWS = [
    ("tran", "train"), ("lng", "long"), ("aple", "apple"), ("beleive", "believe"), ("gost", "ghost"),
    ("moble", "noble"), ("cuz", "cause"), ("cin", "seen"), ("dem", "them"), ("m8", "mate"),
    ("thx", "thanks"), ("h8", "hate"),
]


def main():
    ap = base_parser(__doc__, corpus="builtin:top3000", n=300_000)
    ap.add_argument("--tau", type=float, default=0.01)
    args = ap.parse_args()
    corpus = corpus_arg(args.corpus, args.zipf)
    trie = CountingTrie()
    trie.train_many(corpus.words)
    trie.train_many(sample_words(corpus, np.random.default_rng(args.seed), args.n))
    channel = ChannelModel(phonetic_table=default_phonetic_table())
    bigram = estimate_bigram(corpus_from_trie(trie))

    hits = 0
    print(f"{'token':<9}{'target':<9}{'rank':>5}  top 5")
    for tok, target in ROWS:
        words = [s.word for s in rank_suggestions(tok, trie, channel, bigram, k=5, tau=args.tau)]
        rank = words.index(target) + 1 if target in words else "-"
        hits += rank != "-"
        print(f"{tok:<9}{target:<9}{rank:>5}  {', '.join(words)}")
    print(f"targets in top 5: {hits}/{len(ROWS)}")


if __name__ == "__main__":
    main()
