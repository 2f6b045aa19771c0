"""Single-run convergence of trie estimates toward the true word probabilities.

Writes the per-checkpoint trace as CSV plus a JSON summary, and optionally a
log-x plot of p_hat per word with the true values as dashed lines.
"""

from trienorm.simulate import consistency_violations, run_training, sums_series, write_json, write_trace_csv

from _common import base_parser, corpus_arg, pyplot


def main():
    ap = base_parser(__doc__)
    ap.add_argument("--mode", choices=["improved", "baseline"], default="improved")
    args = ap.parse_args()
    corpus = corpus_arg(args.corpus, args.zipf)
    trace = run_training(corpus, args.mode, args.n, seed=args.seed)

    args.outdir.mkdir(parents=True, exist_ok=True)
    stem = args.outdir / f"convergence_{args.mode}"
    write_trace_csv(stem.with_suffix(".csv"), trace)
    bad = consistency_violations(trace)
    write_json(stem.with_suffix(".json"), {
        "final_max_deviation": trace.max_deviation(), "sums": sums_series(trace),
        "bound_violations": [list(v) for v in bad],
    })
    print(f"max |p_hat - p| at n={trace.checkpoints[-1]}: {trace.max_deviation():.4g}; bound violations: {len(bad)}")

    if args.plot:
        plt = pyplot()
        arr = trace.as_array()
        x = [max(c, 1) for c in trace.checkpoints]
        fig, ax = plt.subplots(figsize=(7, 4))
        for i, (w, p) in enumerate(corpus.entries):
            line, = ax.plot(x, arr[:, i], label=w)
            ax.axhline(p, ls="--", lw=0.8, color=line.get_color())
        ax.set_xscale("log")
        ax.set_xlabel("training steps")
        ax.set_ylabel("estimated probability")
        if len(corpus) <= 10:
            ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(stem.with_suffix(".png"), dpi=120)
        print(f"wrote {stem.with_suffix('.png')}")


if __name__ == "__main__":
    main()
