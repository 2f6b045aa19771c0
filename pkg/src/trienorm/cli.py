"""``trienorm`` command line: train, correct, simulate, compare.

Every option may also come from a ``key = value`` config file (``--config``);
flags given on the command line win.  Commands that write an output file also
write ``<out>.config`` holding the fully resolved configuration, so a run can
be repeated with ``--config <out>.config``.

Exit codes: 0 success, 1 failed statistical check (``--check``), 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Sequence

import numpy as np

from . import correction as corr
from . import simulate as sim
from .corpus import CorpusError, CorpusModel, builtin_corpus_path, read_corpus_file, sample_words
from .trie import CountingTrie, InvalidWordError, TrieFormatError

log = logging.getLogger("trienorm")

SEED_ENV = "TRIE_NORM_SEED"
BUILTIN = {
    "top3000": "top3000_en.txt",
    "eight": "eight_words.txt",
    "compare20": "compare20.txt",
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str = ""
    corpus: str | None = None
    zipf: float = 0.25
    mode: str = "improved"
    n: int | None = None
    replicates: int = 1
    seed: int | None = None
    checkpoints: str | None = None
    trie: str | None = None
    topk: int = 5
    tau: float = corr.DEFAULT_TAU
    gamma: float | None = None
    phonetic_table: str | None = None
    confusion: str | None = None
    out: str | None = None
    json: bool = False
    check: bool = False
    workers: int = 1

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None and f.name != "command":
                lines.append(f"{f.name} = {str(v).lower() if isinstance(v, bool) else v}")
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict:
        return {k: v for k, v in dataclasses.asdict(self).items() if v is not None}


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _TYPES[key]
    raw = raw.strip()
    if raw.lower() in ("", "none"):
        return None
    if "bool" in kind:
        if raw.lower() not in ("true", "false", "1", "0", "yes", "no"):
            raise UsageError(f"{key}: expected a boolean, got {raw!r}")
        return raw.lower() in ("true", "1", "yes")
    if "int" in kind:
        return int(raw)
    if "float" in kind:
        return float(raw)
    return raw


def read_config(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"config file not found: {path}")
    out = {}
    for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _TYPES or key == "command":
            raise UsageError(f"{path}:{lineno}: unknown or malformed setting {line!r}")
        try:
            out[key] = _coerce(key, value)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value.strip()!r}") from None
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = read_config(args.config) if args.config else {}
    for key in _TYPES:
        v = getattr(args, key, None)
        if v is not None and v is not False:
            values[key] = v
    values["command"] = args.command
    cfg = RunConfig(**values)
    if cfg.mode not in ("improved", "baseline"):
        raise UsageError(f"--mode must be improved or baseline, got {cfg.mode!r}")
    if cfg.seed is None and os.environ.get(SEED_ENV):
        try:
            cfg.seed = int(os.environ[SEED_ENV])
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer") from None
    for name in ("topk", "replicates", "workers"):
        if getattr(cfg, name) < 1:
            raise UsageError(f"--{name} must be at least 1")
    if cfg.n is not None and cfg.n < 0:
        raise UsageError("--n must be non-negative")
    if not 0 < cfg.tau <= 1:
        raise UsageError("--tau must lie in (0, 1]")
    if cfg.gamma is not None and not 0 <= cfg.gamma <= 1:
        raise UsageError("--gamma must lie in [0, 1]")
    for name in ("phonetic_table", "confusion"):
        p = getattr(cfg, name)
        if p is not None and not Path(p).is_file():
            raise UsageError(f"--{name.replace('_', '-')}: file not found: {p}")
    return cfg


def load_corpus_arg(cfg: RunConfig, default: str | None = None) -> CorpusModel:
    name = cfg.corpus or default
    if name is None:
        raise UsageError("--corpus is required")
    if name.startswith("builtin:"):
        key = name.split(":", 1)[1]
        if key not in BUILTIN:
            raise UsageError(f"unknown builtin corpus {key!r}; choose from {sorted(BUILTIN)}")
        path = builtin_corpus_path(BUILTIN[key])
    else:
        path = Path(name)
    if not path.is_file():
        raise UsageError(f"corpus file not found: {name}")
    try:
        return read_corpus_file(path, zipf_exponent=cfg.zipf)
    except CorpusError as e:
        raise UsageError(f"{name}: {e}") from None


def _require_seed(cfg: RunConfig) -> int:
    if cfg.seed is None:
        raise UsageError(f"a seed is required: pass --seed, set it in the config, or export {SEED_ENV}")
    return cfg.seed


def _checkpoints(cfg: RunConfig) -> list[int] | None:
    if not cfg.checkpoints:
        return None
    try:
        return [int(x) for x in str(cfg.checkpoints).replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"--checkpoints must be comma-separated integers: {cfg.checkpoints!r}") from None


def _write_config(cfg: RunConfig, out: str) -> None:
    Path(out + ".config").write_text(cfg.to_text(), encoding="utf-8")


def _json_path(out: str) -> str:
    p = Path(out)
    return str(p.with_suffix(".json")) if p.suffix != ".json" else str(p) + ".json"


# commands ---------------------------------------------------------------------


def cmd_train(cfg: RunConfig) -> int:
    corpus = load_corpus_arg(cfg)
    out = cfg.out or cfg.trie
    if out is None:
        raise UsageError("--out (or --trie) is required for train")
    extra = cfg.n or 0
    trie = CountingTrie(cfg.mode)
    trie.train_many(corpus.words)
    if extra:
        rng = np.random.default_rng(_require_seed(cfg))
        trie.train_many(sample_words(corpus, rng, extra))
    trie.save(out)
    _write_config(cfg, out)
    st = trie.stats()
    print(f"corpus words: {len(corpus)} (dropped {corpus.dropped})")
    print(f"mode: {trie.mode.value}  seeding pass + {extra} samples")
    print(f"stored words: {st.words}  nodes: {st.nodes}  dummies: {st.dummies}  root count: {st.root_count}")
    print(f"wrote {out}")
    return 0


def _build_corrector(cfg: RunConfig):
    if cfg.trie is None:
        raise UsageError("--trie is required for correct")
    try:
        trie = CountingTrie.load(cfg.trie)
    except (OSError, TrieFormatError, UnicodeDecodeError) as e:
        raise UsageError(f"cannot load trie {cfg.trie}: {e}") from None
    table = corr.load_phonetic_table(cfg.phonetic_table) if cfg.phonetic_table else corr.default_phonetic_table()
    confusion = corr.load_confusion(cfg.confusion) if cfg.confusion else {}
    channel = corr.ChannelModel(confusion=confusion, phonetic_table=table)
    source = load_corpus_arg(cfg) if cfg.corpus else corr.corpus_from_trie(trie)
    bigram = corr.estimate_bigram(source)
    return trie, channel, bigram


def _emit(token: str, suggestions, as_json: bool) -> None:
    if as_json:
        print(json.dumps({"token": token, "suggestions": [s.as_dict() for s in suggestions]}, sort_keys=True))
        return
    if not suggestions:
        print(f"{token}: no suggestions")
        return
    print(f"{token}:")
    for i, s in enumerate(suggestions, 1):
        print(f"  {i}. {s.word:<14} score={s.score:.3e} prior={s.prior:.3e} "
              f"likelihood={s.likelihood:.3e} distance={s.dl_distance}")


def cmd_correct(cfg: RunConfig, tokens: Sequence[str]) -> int:
    trie, channel, bigram = _build_corrector(cfg)

    def one(tok: str) -> None:
        try:
            sugg = corr.rank_suggestions(tok, trie, channel, bigram, gamma=cfg.gamma, k=cfg.topk, tau=cfg.tau)
        except InvalidWordError as e:
            print(f"{tok}: skipped ({e})", file=sys.stderr)
            return
        _emit(tok, sugg, cfg.json)

    if tokens:
        for t in tokens:
            one(t)
    else:
        for line in sys.stdin:
            for t in line.split():
                one(t)
            sys.stdout.flush()
    return 0


def _print_deviation_table(words, probs, final, se=None) -> None:
    print(f"{'word':<14}{'p_true':>12}{'p_hat':>12}{'|dev|':>12}" + (f"{'se':>12}" if se is not None else ""))
    for i, (w, p, ph) in enumerate(zip(words, probs, final)):
        line = f"{w:<14}{p:>12.6f}{ph:>12.6f}{abs(ph - p):>12.2e}"
        if se is not None:
            line += f"{se[i]:>12.2e}"
        print(line)


def cmd_simulate(cfg: RunConfig) -> int:
    corpus = load_corpus_arg(cfg)
    seed = _require_seed(cfg)
    cfg.n = 50_000 if cfg.n is None else cfg.n
    cps = _checkpoints(cfg)
    try:
        if cfg.replicates == 1:
            trace = sim.run_training(corpus, cfg.mode, cfg.n, cps, seed)
            payload = {"final_max_deviation": trace.max_deviation(), "sums": sim.sums_series(trace)}
            _print_deviation_table(corpus.words, corpus.probs, trace.p_hat[-1])
            failed = bool(sim.consistency_violations(trace))
        else:
            trace = sim.run_replicates(corpus, cfg.mode, cfg.n, cfg.replicates, cps, seed, workers=cfg.workers)
            payload = sim.ensemble_summary(trace)
            _print_deviation_table(corpus.words, corpus.probs, trace.mean[-1], trace.se[-1])
            allowance = max(1, math.ceil(0.01 * len(corpus)))
            failed = len(sim.unbiasedness_violations(trace)) > allowance
    except sim.CheckpointError as e:
        raise UsageError(str(e)) from None
    print(f"final checkpoint n={trace.checkpoints[-1]}")
    if cfg.out:
        sim.write_trace_csv(cfg.out, trace)
        payload["config"] = cfg.as_dict()
        sim.write_json(_json_path(cfg.out), payload)
        _write_config(cfg, cfg.out)
        print(f"wrote {cfg.out}")
    if cfg.check and failed:
        print("statistical check FAILED", file=sys.stderr)
        return 1
    return 0


def cmd_compare(cfg: RunConfig) -> int:
    corpus = load_corpus_arg(cfg, default="builtin:compare20")
    seed = _require_seed(cfg)
    cfg.n = 50_000 if cfg.n is None else cfg.n
    try:
        cmp = sim.compare_models(corpus, cfg.n, _checkpoints(cfg), seed)
    except sim.CheckpointError as e:
        raise UsageError(str(e)) from None
    if cmp.warning:
        print(f"warning: {cmp.warning}", file=sys.stderr)
    print(f"{'n':>8}{'improved sum':>16}{'baseline sum':>16}")
    for n, a, b in zip(cmp.improved.checkpoints, cmp.improved.sums, cmp.baseline.sums):
        print(f"{n:>8}{float(a):>16.6f}{float(b):>16.6f}")
    print(f"final max |p_hat - p|: improved {cmp.improved.max_deviation():.4g}, "
          f"baseline {cmp.baseline.max_deviation():.4g}")
    if cfg.out:
        sim.write_trace_csv(cfg.out, cmp.improved, cmp.baseline)
        payload = {
            "config": cfg.as_dict(),
            "warning": cmp.warning,
            "improved": {"sums": sim.sums_series(cmp.improved), "final_max_deviation": cmp.improved.max_deviation()},
            "baseline": {"sums": sim.sums_series(cmp.baseline), "final_max_deviation": cmp.baseline.max_deviation()},
        }
        sim.write_json(_json_path(cfg.out), payload)
        _write_config(cfg, cfg.out)
        print(f"wrote {cfg.out}")
    if cfg.check and corpus.prefix_pairs():
        ok = cmp.baseline.sums[-1] > 1 and (not cmp.improved.complete[-1] or cmp.improved.sums[-1] == 1)
        if not ok:
            print("comparison check FAILED", file=sys.stderr)
            return 1
    return 0


# argument parsing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value settings file; flags override it")
    common.add_argument("--corpus", help="word list path, or builtin:top3000 / builtin:eight / builtin:compare20")
    common.add_argument("--zipf", type=float, help="Zipf exponent for lists without probabilities (0 = uniform; default 0.25)")
    common.add_argument("--mode", choices=["improved", "baseline"])
    common.add_argument("--seed", type=int, help=f"RNG seed (falls back to ${SEED_ENV})")
    common.add_argument("--out", help="output path")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="trienorm", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", parents=[common], help="train a trie and save it")
    t.add_argument("--n", type=int, help="random samples drawn after the seeding pass (default 0)")
    t.add_argument("--trie", help="alias for --out")

    c = sub.add_parser("correct", parents=[common], help="suggest corrections for tokens (stdin REPL without tokens)")
    c.add_argument("tokens", nargs="*")
    c.add_argument("--trie", help="trained trie file")
    c.add_argument("--topk", type=int)
    c.add_argument("--tau", type=float, help="per-transition beam floor; threshold is tau**(len-1)")
    c.add_argument("--gamma", type=float, help="fixed beam threshold (overrides --tau)")
    c.add_argument("--phonetic-table", dest="phonetic_table")
    c.add_argument("--confusion", help="CSV of type,from,to,weight")
    c.add_argument("--json", action="store_true", help="one JSON object per token")

    for name, helptext in (("simulate", "convergence / expectation experiment"),
                           ("compare", "improved vs baseline on one sample stream")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--n", type=int, help="total training calls incl. the seeding pass (default 50000)")
        s.add_argument("--checkpoints", help="comma-separated step counts (default: log-spaced)")
        s.add_argument("--check", action="store_true", help="exit 1 if the statistical check fails")
        if name == "simulate":
            s.add_argument("--replicates", type=int, help="independent tries to average (K)")
            s.add_argument("--workers", type=int, help="processes for replicates")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = resolve_config(args)
        if cfg.command == "train":
            return cmd_train(cfg)
        if cfg.command == "correct":
            return cmd_correct(cfg, args.tokens)
        if cfg.command == "simulate":
            return cmd_simulate(cfg)
        return cmd_compare(cfg)
    except UsageError as e:
        print(f"trienorm: error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"trienorm: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
