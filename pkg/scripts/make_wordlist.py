"""Regenerate src/trienorm/data/top3000_en.txt from wordfreq.

Needs ``pip install wordfreq``; it is not a package dependency.
"""

import argparse
from pathlib import Path

SKIP = {"ll", "ve"}  # contraction shards ("you'll" -> "you", "ll")
KEEP_SINGLE = {"a", "i"}

HEADER = """\
# {n} most frequent English words, rank order = line order.
# Generated by scripts/make_wordlist.py from wordfreq {version} top_n_list('en').
# Non a-z tokens, stray single letters (other than a, i) and the contraction shards ll/ve are skipped.
"""


def select(tokens, n):
    out = []
    for w in tokens:
        if not (w.isascii() and w.isalpha() and w.islower()):
            continue
        if w in SKIP or (len(w) == 1 and w not in KEEP_SINGLE):
            continue
        out.append(w)
        if len(out) == n:
            break
    return out


def main():
    import wordfreq

    default = Path(__file__).resolve().parent.parent / "src" / "trienorm" / "data" / "top3000_en.txt"
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3000)
    ap.add_argument("--out", type=Path, default=default)
    args = ap.parse_args()

    words = select(wordfreq.top_n_list("en", args.n * 2), args.n)
    if len(words) < args.n:
        raise SystemExit(f"only {len(words)} usable words found")
    version = getattr(wordfreq, "__version__", "unknown")
    args.out.write_text(HEADER.format(n=args.n, version=version) + "\n".join(words) + "\n")
    print(f"wrote {len(words)} words to {args.out}")


if __name__ == "__main__":
    main()
