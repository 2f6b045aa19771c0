"""Improved vs baseline trie on one sample stream: sum of estimates and final error."""

from trienorm.simulate import compare_models, sums_series, write_json, write_trace_csv

from _common import base_parser, corpus_arg, pyplot


def main():
    ap = base_parser(__doc__, corpus="builtin:compare20")
    args = ap.parse_args()
    corpus = corpus_arg(args.corpus, args.zipf)
    cmp = compare_models(corpus, args.n, seed=args.seed)
    if cmp.warning:
        print(f"warning: {cmp.warning}")

    args.outdir.mkdir(parents=True, exist_ok=True)
    write_trace_csv(args.outdir / "compare.csv", cmp.improved, cmp.baseline)
    write_json(args.outdir / "compare.json", {
        "improved": sums_series(cmp.improved), "baseline": sums_series(cmp.baseline),
        "max_deviation": {"improved": cmp.improved.max_deviation(), "baseline": cmp.baseline.max_deviation()},
    })
    print(f"final sum: improved {cmp.improved.sums[-1]}  baseline {float(cmp.baseline.sums[-1]):.4f}")
    print(f"final max |p_hat - p|: improved {cmp.improved.max_deviation():.4g}  "
          f"baseline {cmp.baseline.max_deviation():.4g}")

    if args.plot:
        plt = pyplot()
        x = [max(c, 1) for c in cmp.improved.checkpoints]
        fig, ax = plt.subplots(figsize=(7, 4))
        ax.plot(x, [float(s) for s in cmp.improved.sums], label="improved")
        ax.plot(x, [float(s) for s in cmp.baseline.sums], label="baseline")
        ax.axhline(1, ls="--", color="k", lw=0.8)
        ax.set_xscale("log")
        ax.set_xlabel("training steps")
        ax.set_ylabel("sum of estimates")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.outdir / "compare.png", dpi=120)


if __name__ == "__main__":
    main()
