"""Command-line interface.

stdout carries exactly one machine-readable JSON payload per run; diagnostics
go to stderr. Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric
failure. Every payload embeds a run manifest; wall-clock numbers live under
"timings" keys so reproducibility checks can strip them. Seeds default to 42
and are echoed in the manifest.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__, classifier, corpus as corpus_mod, lexicon as lexicon_mod
from . import stats as stats_mod, vectorizer as vec_mod
from .classifier import ModelFamily, TrainConfig
from .corpus import DataVariant, derive_variant
from .errors import DataError, NumericError
from .manifest import build_manifest
from .tokenizer import TokenizerMode, TokenKind, tokenize

logger = logging.getLogger("emosent")

_VARIANTS = {v.value: v for v in DataVariant}
_FAMILIES = {f.value: f for f in ModelFamily}
_MODES = {m.value: m for m in TokenizerMode}

MODEL_FORMAT_VERSION = 1


def _emit(payload: dict, out: str | None = None) -> None:
    text = json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=1) + "\n"
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text, encoding="utf-8")


def _write_csv(
    path: str | Path, header: list[str], rows: list[list], manifest: dict | None = None
) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    if manifest is not None:
        Path(f"{path}.manifest.json").write_text(
            json.dumps(manifest, ensure_ascii=False, sort_keys=True, indent=1) + "\n",
            encoding="utf-8",
        )


def _flags(args: argparse.Namespace) -> dict:
    skip = {"func", "config"}
    out = {}
    for key, value in vars(args).items():
        if key in skip:
            continue
        out[key] = value
    return out


def _load(path: str, fmt: str | None):
    return corpus_mod.load_posts(path, fmt)


def _variant_docs(c, variant: DataVariant, mode: TokenizerMode):
    return [tokenize(derive_variant(p, variant, mode), mode) for p in c.posts]


def _labels(c):
    labels = []
    for p in c.posts:
        if p.label is None:
            raise DataError(f"post {p.id!r} is unlabeled")
        labels.append(p.label)
    return labels


# ---------------------------------------------------------------- prepare


def cmd_prepare(args) -> int:
    t0 = time.perf_counter()
    mode = _MODES[args.mode]
    manifest = build_manifest("prepare", _flags(args), [args.input], args.seed)
    c = _load(args.input, args.format)
    n_loaded = len(c)
    c = corpus_mod.filter_emoji_posts(c, mode)
    n_emoji = len(c)
    c = corpus_mod.filter_labeled(c)
    n_labeled = len(c)
    if args.balance:
        c = corpus_mod.balance_undersample(c, args.seed)
    n_balanced = len(c)
    train, test = corpus_mod.split(c, args.test_fraction, args.seed)

    variant = _VARIANTS[args.variant]
    if variant is not DataVariant.TEXT_AND_EMOJI:
        train = replace(train, posts=tuple(
            replace(p, body=derive_variant(p, variant, mode)) for p in train.posts))
        test = replace(test, posts=tuple(
            replace(p, body=derive_variant(p, variant, mode)) for p in test.posts))

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    corpus_mod.save_posts(train, outdir / "train.jsonl")
    corpus_mod.save_posts(test, outdir / "test.jsonl")

    manifest["timings"] = {"wall_seconds": time.perf_counter() - t0}
    payload = {
        "counts": {
            "loaded": n_loaded,
            "skipped": c.skipped_records,
            "with_emoji": n_emoji,
            "labeled": n_labeled,
            "after_balance": n_balanced,
            "train": len(train),
            "test": len(test),
        },
        "outputs": {"train": str(outdir / "train.jsonl"), "test": str(outdir / "test.jsonl")},
        "manifest": manifest,
    }
    _emit(payload, str(outdir / "manifest.json"))
    return 0


# ------------------------------------------------------------ train / eval


def _train_pipeline(c, variant, family, mode, cfg):
    docs = _variant_docs(c, variant, mode)
    y = _labels(c)
    tfidf = vec_mod.fit(docs)
    if family is ModelFamily.LOGISTIC:
        X = [vec_mod.transform(d, tfidf) for d in docs]
        model = classifier.train_logistic(X, y, cfg)
    else:
        X = [vec_mod.count_transform(d, tfidf) for d in docs]
        model = classifier.train_multinomial_nb(X, y, cfg)
    return tfidf, X, y, model


def _save_model_file(path, model, tfidf, args, n_train) -> None:
    payload = {
        "format_version": MODEL_FORMAT_VERSION,
        "family": model.family.value,
        "vectorizer": {"formula_id": tfidf.formula_id, "digest": vec_mod.model_digest(tfidf)},
        "weights": [float(w) for w in model.weights],
        "bias": float(model.bias),
        "threshold": model.threshold,
        "training": {
            "n_train": n_train,
            "variant": args.variant,
            "tokenizer_mode": args.mode,
            "l2_lambda": args.l2_lambda,
            "max_iters": args.max_iters,
            "tol": args.tol,
            "nb_alpha": args.nb_alpha,
            "seed": args.seed,
        },
    }
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=1), encoding="utf-8"
    )


def _load_model_file(path):
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise DataError(f"cannot load model from {path}: {exc}") from exc
    model = classifier.LinearModel(
        weights=payload["weights"],
        bias=payload["bias"],
        family=ModelFamily(payload["family"]),
        threshold=payload["threshold"],
    )
    return model, payload


def cmd_train(args) -> int:
    t0 = time.perf_counter()
    mode = _MODES[args.mode]
    manifest = build_manifest("train", _flags(args), [args.train], args.seed)
    c = _load(args.train, args.format)
    cfg = TrainConfig(
        l2_lambda=args.l2_lambda,
        max_iters=args.max_iters,
        tol=args.tol,
        seed=args.seed,
        nb_alpha=args.nb_alpha,
    )
    family = _FAMILIES[args.family]
    variant = _VARIANTS[args.variant]
    if not 0.0 < args.threshold < 1.0:
        raise DataError("--threshold must lie in (0,1)")
    tfidf, X, y, model = _train_pipeline(c, variant, family, mode, cfg)
    model.threshold = args.threshold

    vec_mod.save_model(tfidf, args.vectorizer_out)
    _save_model_file(args.model_out, model, tfidf, args, len(c))
    pred, _ = classifier.predict(model, X)
    train_report = classifier.evaluate(pred, y)

    manifest["timings"] = {"wall_seconds": time.perf_counter() - t0}
    _emit(
        {
            "family": args.family,
            "variant": args.variant,
            "n_train": len(c),
            "vocab_size": tfidf.dim,
            "train_accuracy": train_report.accuracy,
            "outputs": {"model": args.model_out, "vectorizer": args.vectorizer_out},
            "manifest": manifest,
        }
    )
    return 0


def cmd_eval(args) -> int:
    t0 = time.perf_counter()
    manifest = build_manifest(
        "eval", _flags(args), [args.test, args.model_in, args.vectorizer_in], args.seed
    )
    c = _load(args.test, args.format)
    model, model_payload = _load_model_file(args.model_in)
    tfidf = vec_mod.load_model(args.vectorizer_in)
    recorded = model_payload["vectorizer"]["digest"]
    actual = vec_mod.model_digest(tfidf)
    if recorded != actual:
        raise DataError(
            f"vectorizer mismatch: model was trained against digest {recorded[:12]}..., "
            f"got {actual[:12]}..."
        )
    mode = _MODES[model_payload["training"]["tokenizer_mode"]]
    variant = _VARIANTS[model_payload["training"]["variant"]]
    docs = _variant_docs(c, variant, mode)
    if model.family is ModelFamily.LOGISTIC:
        X = [vec_mod.transform(d, tfidf) for d in docs]
    else:
        X = [vec_mod.count_transform(d, tfidf) for d in docs]
    y = _labels(c)
    pred, _ = classifier.predict(model, X)
    report = classifier.evaluate(pred, y)
    ci = classifier.bootstrap_ci(pred, y, n_resamples=args.bootstrap, seed=args.seed)

    if args.csv:
        rows = []
        for name in ("accuracy", "precision", "recall", "f1",
                     "precision_macro", "recall_macro", "f1_macro"):
            mean, lo, hi = ci.metrics[name]
            rows.append([name, getattr(report, name), mean, lo, hi])
        for cell in ("tp", "fp", "fn", "tn"):
            rows.append([cell, getattr(report, cell), "", "", ""])
        _write_csv(args.csv, ["metric", "value", "boot_mean", "boot_lo", "boot_hi"], rows, manifest)

    manifest["timings"] = {"wall_seconds": time.perf_counter() - t0}
    _emit(
        {
            "n_test": len(c),
            "report": report.to_dict(),
            "bootstrap": ci.to_dict(),
            "manifest": manifest,
        },
        args.out,
    )
    return 0


# ---------------------------------------------------------------- lexicon


def cmd_lexicon(args) -> int:
    t0 = time.perf_counter()
    mode = _MODES[args.mode]
    manifest = build_manifest("lexicon", _flags(args), [args.input], None)
    c = _load(args.input, args.format)
    lex = lexicon_mod.build_lexicon(c, args.top_k, mode)
    payload: dict = {
        "lexicon": lexicon_mod.lexicon_payload(lex),
        "manifest": manifest,
    }
    if args.buckets:
        buckets = lexicon_mod.count_buckets(c, mode)
        payload["buckets"] = [
            {
                "unique_count": b.unique_count,
                "n_posts": b.n_posts,
                "bullish_fraction": b.bullish_fraction,
                "bearish_fraction": b.bearish_fraction,
            }
            for b in buckets
        ]
    if not args.pairs:
        payload["lexicon"]["pairs"] = []

    if args.csv_prefix:
        prefix = Path(args.csv_prefix)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        _write_csv(
            f"{prefix}_singles.csv",
            ["emoji", "n_posts", "bullish_score", "bearish_score"],
            [[s.emoji, s.n_posts, s.bullish_score, s.bearish_score] for s in lex.singles],
            manifest,
        )
        if args.pairs:
            _write_csv(
                f"{prefix}_pairs.csv",
                ["emoji_a", "emoji_b", "n_posts", "bullish_score", "bearish_score"],
                [[p.pair[0], p.pair[1], p.n_posts, p.bullish_score, p.bearish_score] for p in lex.pairs],
                manifest,
            )
        if args.buckets:
            _write_csv(
                f"{prefix}_buckets.csv",
                ["unique_count", "n_posts", "bullish_fraction", "bearish_fraction"],
                [[b["unique_count"], b["n_posts"], b["bullish_fraction"], b["bearish_fraction"]]
                 for b in payload["buckets"]],
                manifest,
            )
    manifest["timings"] = {"wall_seconds": time.perf_counter() - t0}
    _emit(payload, args.out)
    return 0


# ---------------------------------------------------------------- compare


def cmd_compare(args) -> int:
    t0 = time.perf_counter()
    mode = _MODES[args.mode]
    manifest = build_manifest("compare", _flags(args), [args.corpus_a, args.corpus_b], None)
    a = _load(args.corpus_a, args.format)
    b = _load(args.corpus_b, args.format)
    report = stats_mod.compare_corpora(
        a, b, top_k=args.top_k, samples_mode=args.samples_mode, mass=args.mass, mode=mode
    )
    if args.csv:
        _write_csv(
            args.csv,
            ["emoji", "rank_a", "rank_b", "rel_freq_a", "rel_freq_b"],
            [
                [r["emoji"], r["rank_a"], r["rank_b"], r["rel_freq_a"], r["rel_freq_b"]]
                for r in report["rank_table"]
            ],
            manifest,
        )
    manifest["timings"] = {"wall_seconds": time.perf_counter() - t0}
    report["manifest"] = manifest
    _emit(report, args.out)
    return 0


# ------------------------------------------------------- curve / bench


def cmd_curve(args) -> int:
    t0 = time.perf_counter()
    mode = _MODES[args.mode]
    manifest = build_manifest("curve", _flags(args), [args.train, args.test], args.seed)
    train = _load(args.train, args.format)
    test = _load(args.test, args.format)
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    if not sizes:
        raise DataError("--sizes must list at least one size")
    cfg = TrainConfig(l2_lambda=args.l2_lambda, max_iters=args.max_iters, tol=args.tol,
                      seed=args.seed, nb_alpha=args.nb_alpha)
    points = classifier.learning_curve(
        train, test, sizes, _VARIANTS[args.variant], _FAMILIES[args.family],
        seed=args.seed, cfg=cfg, mode=mode,
    )
    if args.csv:
        _write_csv(args.csv, ["size", "accuracy"], [[p.size, p.accuracy] for p in points], manifest)
    manifest["timings"] = {"wall_seconds": time.perf_counter() - t0}
    _emit(
        {
            "family": args.family,
            "variant": args.variant,
            "points": [{"size": p.size, "accuracy": p.accuracy} for p in points],
            "manifest": manifest,
        },
        args.out,
    )
    return 0


def cmd_bench(args) -> int:
    t0 = time.perf_counter()
    mode = _MODES[args.mode]
    manifest = build_manifest("bench", _flags(args), [args.train, args.infer], args.seed)
    train = _load(args.train, args.format)
    infer = _load(args.infer, args.format)
    cfg = TrainConfig(l2_lambda=args.l2_lambda, max_iters=args.max_iters, tol=args.tol,
                      seed=args.seed, nb_alpha=args.nb_alpha)
    report = classifier.benchmark(
        _FAMILIES[args.family], _VARIANTS[args.variant], train, infer,
        cfg=cfg, repeats=args.repeats, mode=mode,
    )
    manifest["timings"] = {"wall_seconds": time.perf_counter() - t0}
    payload = {
        "family": report.family,
        "variant": report.variant,
        "n_train": report.n_train,
        "n_infer": report.n_infer,
        "repeats": report.repeats,
        "timings": {
            "train_seconds_min": report.train_seconds_min,
            "train_seconds_median": report.train_seconds_median,
            "infer_seconds_min": report.infer_seconds_min,
            "infer_seconds_median": report.infer_seconds_median,
            "per_post_infer_seconds_median": report.per_post_infer_seconds_median,
            "prep_train_seconds": report.prep_train_seconds,
            "prep_infer_seconds": report.prep_infer_seconds,
        },
        "manifest": manifest,
    }
    _emit(payload, args.out)
    return 0


# ------------------------------------------------------- entropy / index


def cmd_entropy(args) -> int:
    t0 = time.perf_counter()
    mode = _MODES[args.mode]
    manifest = build_manifest("entropy", _flags(args), [args.input], None)
    c = _load(args.input, args.format)
    basis = stats_mod.FrequencyBasis(args.basis)
    renorm = not args.no_renormalize
    payload: dict = {"basis": args.basis, "mass": args.mass, "manifest": manifest}
    if args.kind in ("words", "both"):
        dist = stats_mod.token_frequencies(c, TokenKind.WORD, basis, mode)
        payload["words"] = stats_mod.entropy_top_mass(dist, args.mass, renorm).to_dict()
    if args.kind in ("emojis", "both"):
        dist = stats_mod.token_frequencies(c, TokenKind.EMOJI, basis, mode)
        payload["emojis"] = stats_mod.entropy_top_mass(dist, args.mass, renorm).to_dict()
    manifest["timings"] = {"wall_seconds": time.perf_counter() - t0}
    _emit(payload, args.out)
    return 0


def _load_price_series(path: str) -> dict:
    series = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or "date" not in reader.fieldnames or "value" not in reader.fieldnames:
            raise DataError(f"{path}: price CSV needs 'date' and 'value' columns")
        for row in reader:
            try:
                series[row["date"]] = float(row["value"])
            except (TypeError, ValueError) as exc:
                raise DataError(f"{path}: bad price row {row!r}") from exc
    if not series:
        raise DataError(f"{path}: empty price series")
    return series


def _daily_changes(series: dict) -> dict:
    keys = sorted(series)
    return {b: series[b] - series[a] for a, b in zip(keys, keys[1:])}


def cmd_index(args) -> int:
    t0 = time.perf_counter()
    mode = _MODES[args.mode]
    inputs = [args.input] + ([args.prices] if args.prices else [])
    manifest = build_manifest("index", _flags(args), inputs, None)
    c = _load(args.input, args.format)
    series = lexicon_mod.emoji_index(c, args.emoji, "daily", mode)
    ratio_by_day = {day.isoformat(): ratio for day, ratio in series}
    payload: dict = {
        "emoji": args.emoji,
        "series": [[day.isoformat(), ratio] for day, ratio in series],
        "manifest": manifest,
    }
    if args.prices:
        prices = _load_price_series(args.prices)
        correlations = {}
        if args.align in ("levels", "both"):
            correlations["levels"] = lexicon_mod.pearson_corr(ratio_by_day, prices)
        if args.align in ("changes", "both"):
            correlations["changes"] = lexicon_mod.pearson_corr(ratio_by_day, _daily_changes(prices))
        payload["correlations"] = correlations
    if args.csv:
        _write_csv(args.csv, ["date", "ratio"], [[d, r] for d, r in payload["series"]], manifest)
    manifest["timings"] = {"wall_seconds": time.perf_counter() - t0}
    _emit(payload, args.out)
    return 0


# ---------------------------------------------------------------- parser


def _add_common(p: argparse.ArgumentParser, seed: bool = True, mode: bool = True) -> None:
    p.add_argument("--format", choices=["jsonl", "csv"], default=None,
                   help="input format (default: by file extension)")
    if mode:
        p.add_argument("--mode", choices=sorted(_MODES), default=TokenizerMode.PAPER_REGEX.value,
                       help="tokenizer mode")
    p.add_argument("--config", default=None, help="key=value defaults file")
    p.add_argument("--out", default=None, help="also write the JSON payload here")
    if seed:
        p.add_argument("--seed", type=int, default=42)


def _add_train_config(p: argparse.ArgumentParser) -> None:
    p.add_argument("--l2-lambda", type=float, default=1.0)
    p.add_argument("--max-iters", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--nb-alpha", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emosent",
        description="Emoji-centric sentiment analysis toolkit for financial microblogs.",
    )
    parser.add_argument("--version", action="version", version=f"emosent {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("prepare", help="filter, balance, and split a raw corpus")
    p.add_argument("input")
    p.add_argument("--balance", action="store_true", help="undersample the majority class")
    p.add_argument("--variant", choices=sorted(_VARIANTS), default=DataVariant.TEXT_AND_EMOJI.value)
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--format", choices=["jsonl", "csv"], default=None)
    p.add_argument("--mode", choices=sorted(_MODES), default=TokenizerMode.PAPER_REGEX.value)
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("train", help="fit a classifier on a prepared corpus")
    p.add_argument("--train", required=True)
    p.add_argument("--family", choices=sorted(_FAMILIES), default=ModelFamily.LOGISTIC.value)
    p.add_argument("--variant", choices=sorted(_VARIANTS), default=DataVariant.TEXT_AND_EMOJI.value)
    p.add_argument("--model-out", required=True)
    p.add_argument("--vectorizer-out", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    _add_train_config(p)
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a trained model on a test corpus")
    p.add_argument("--test", required=True)
    p.add_argument("--model-in", required=True)
    p.add_argument("--vectorizer-in", required=True)
    p.add_argument("--bootstrap", type=int, default=1000)
    p.add_argument("--csv", default=None, help="write the metric table CSV here")
    _add_common(p, mode=False)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("lexicon", help="build emoji/pair sentiment scores")
    p.add_argument("--input", required=True)
    p.add_argument("--top-k", type=int, default=50)
    p.add_argument("--pairs", action="store_true", help="include pair scores")
    p.add_argument("--buckets", action="store_true", help="include unique-emoji-count buckets")
    p.add_argument("--csv-prefix", default=None, help="write CSV tables with this path prefix")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_lexicon)

    p = sub.add_parser("compare", help="cross-domain emoji usage comparison")
    p.add_argument("corpus_a")
    p.add_argument("corpus_b")
    p.add_argument("--top-k", type=int, default=20)
    p.add_argument("--samples-mode", choices=["frequencies", "expanded"], default="frequencies")
    p.add_argument("--mass", type=float, default=0.9)
    p.add_argument("--csv", default=None, help="write the rank table CSV here")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("curve", help="learning curve against a fixed test set")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--sizes", required=True, help="comma-separated training sizes")
    p.add_argument("--family", choices=sorted(_FAMILIES), default=ModelFamily.LOGISTIC.value)
    p.add_argument("--variant", choices=sorted(_VARIANTS), default=DataVariant.TEXT_AND_EMOJI.value)
    p.add_argument("--csv", default=None)
    _add_train_config(p)
    _add_common(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("bench", help="training/inference wall-clock benchmark")
    p.add_argument("--train", required=True)
    p.add_argument("--infer", required=True)
    p.add_argument("--family", choices=sorted(_FAMILIES), default=ModelFamily.LOGISTIC.value)
    p.add_argument("--variant", choices=sorted(_VARIANTS), default=DataVariant.TEXT_AND_EMOJI.value)
    p.add_argument("--repeats", type=int, default=5)
    _add_train_config(p)
    _add_common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("entropy", help="top-mass entropy and vocabulary statistics")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", choices=["words", "emojis", "both"], default="both")
    p.add_argument("--basis", choices=["occurrence", "presence"], default="occurrence")
    p.add_argument("--mass", type=float, default=0.9)
    p.add_argument("--no-renormalize", action="store_true")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("index", help="daily emoji index and price correlations")
    p.add_argument("--input", required=True)
    p.add_argument("--emoji", default="\U0001F680")
    p.add_argument("--prices", default=None, help="CSV with date,value columns")
    p.add_argument("--align", choices=["levels", "changes", "both"], default="both")
    p.add_argument("--csv", default=None, help="write the date,ratio series here")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_index)

    return parser


def _apply_config(argv: list[str]) -> list[str]:
    """Expand --config key=value files into flags placed before user flags."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        return argv
    path = argv[i + 1]
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"cannot read config {path}: {exc}") from exc
    extra: list[str] = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#") or "=" not in line:
            continue
        key, value = line.split("=", 1)
        flag = "--" + key.strip().replace("_", "-")
        value = value.strip()
        if value.lower() in ("true", "yes", "on"):
            extra.append(flag)
        else:
            extra.extend([flag, value])
    # Insert right after the subcommand so explicit flags still win.
    return argv[:1] + extra + argv[1:]


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s")
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.filename}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
