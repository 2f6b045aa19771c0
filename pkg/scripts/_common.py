"""Shared helpers for the experiment scripts."""

import argparse
from pathlib import Path

from trienorm.cli import BUILTIN
from trienorm.corpus import builtin_corpus_path, read_corpus_file


def corpus_arg(name, zipf=0.25):
    if name.startswith("builtin:"):
        return read_corpus_file(builtin_corpus_path(BUILTIN[name.split(":", 1)[1]]), zipf_exponent=zipf)
    return read_corpus_file(name, zipf_exponent=zipf)


def base_parser(doc, corpus="builtin:eight", n=50_000):
    ap = argparse.ArgumentParser(description=doc.splitlines()[0])
    ap.add_argument("--corpus", default=corpus)
    ap.add_argument("--zipf", type=float, default=0.25)
    ap.add_argument("--n", type=int, default=n)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--outdir", type=Path, default=Path("results"))
    ap.add_argument("--plot", action="store_true", help="also save a PNG (needs matplotlib)")
    return ap


def pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt
