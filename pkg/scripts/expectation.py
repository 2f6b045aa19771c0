"""Mean of K independent tries against the true probabilities, with standard errors."""

import numpy as np

from trienorm.simulate import ensemble_summary, run_replicates, unbiasedness_violations, write_json

from _common import base_parser, corpus_arg, pyplot


def main():
    ap = base_parser(__doc__, n=10_000)
    ap.add_argument("--replicates", type=int, default=30)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    corpus = corpus_arg(args.corpus, args.zipf)
    ens = run_replicates(corpus, "improved", args.n, args.replicates, seed=args.seed, workers=args.workers)

    args.outdir.mkdir(parents=True, exist_ok=True)
    write_json(args.outdir / "expectation.json", ensemble_summary(ens))
    p = np.asarray(corpus.probs)
    z = np.abs(ens.mean[-1] - p) / np.where(ens.se[-1] > 0, ens.se[-1], np.inf)
    for w, pt, m, s, zz in zip(corpus.words, p, ens.mean[-1], ens.se[-1], z):
        print(f"{w:<12} p={pt:.5f} mean={m:.5f} se={s:.2e} z={zz:.2f}")
    print(f"words beyond 3 SE: {len(unbiasedness_violations(ens))}/{len(corpus)}")

    if args.plot:
        plt = pyplot()
        single = np.asarray(ens.runs[0].p_hat[-1])
        fig, ax = plt.subplots(figsize=(7, 4))
        idx = np.arange(len(corpus))
        ax.errorbar(idx, ens.mean[-1], yerr=3 * ens.se[-1], fmt="o", label=f"mean of {ens.replicates} (+-3 SE)")
        ax.plot(idx, single, "x", label="single replicate")
        ax.plot(idx, p, "_", ms=20, color="k", label="true")
        ax.set_xticks(idx, corpus.words, rotation=45)
        ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(args.outdir / "expectation.png", dpi=120)


if __name__ == "__main__":
    main()
