"""Binary bullish/bearish linear classifiers and their evaluation protocol.

Two families share the LinearModel container: logistic regression trained by
deterministic full-batch gradient descent with Armijo backtracking (sum of
per-sample logistic losses plus (lambda/2)*||w||^2, bias unpenalized), and
multinomial Naive Bayes whose weights are per-token log-likelihood ratios with
Laplace smoothing and whose bias is the log-prior ratio. Both predict Bullish
when the calibrated probability clears the decision threshold (ties go to
Bullish).

Evaluation reports accuracy/precision/recall/F1 with Bullish as the positive
class plus macro-averaged variants, bootstrap confidence intervals from
with-replacement resampling of the test set, learning curves against a fixed
test set, and wall-clock training/inference benchmarks.
"""

from __future__ import annotations

import math
import random
import statistics
import time
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy import sparse

from .corpus import Corpus, DataVariant, SentimentLabel, derive_variant
from .errors import DataError, NumericError
from .tokenizer import TokenizerMode, tokenize
from .vectorizer import SparseVector, TfIdfModel, count_transform, fit as fit_tfidf, transform

__all__ = [
    "ModelFamily",
    "LinearModel",
    "TrainConfig",
    "EvalReport",
    "BootstrapCI",
    "LearningCurvePoint",
    "BenchmarkReport",
    "logistic_loss_and_grad",
    "train_logistic",
    "train_multinomial_nb",
    "predict",
    "evaluate",
    "bootstrap_ci",
    "learning_curve",
    "benchmark",
]


class ModelFamily(Enum):
    LOGISTIC = "logistic"
    MULTINOMIAL_NB = "nb"


@dataclass
class TrainConfig:
    l2_lambda: float = 1.0
    max_iters: int = 200
    tol: float = 1e-6
    seed: int = 42
    nb_alpha: float = 1.0

    def validate(self) -> None:
        if self.l2_lambda < 0:
            raise DataError("l2_lambda must be nonnegative")
        if self.max_iters < 1 or self.tol <= 0 or self.nb_alpha <= 0:
            raise DataError("max_iters, tol, and nb_alpha must be positive")


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: float
    family: ModelFamily
    threshold: float = 0.5
    n_train: int = 0

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if not np.all(np.isfinite(self.weights)) or not math.isfinite(self.bias):
            raise NumericError("model weights must be finite")
        if not 0.0 < self.threshold < 1.0:
            raise DataError("threshold must lie in (0,1)")


def _to_csr(X: Sequence[SparseVector], dim: Optional[int] = None) -> sparse.csr_matrix:
    if dim is None:
        if not X:
            raise DataError("empty design matrix with unknown dimension")
        dim = X[0].dim
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for v in X:
        if v.dim != dim:
            raise DataError(f"dimension mismatch: vector has dim {v.dim}, expected {dim}")
        for idx, w in v.entries:
            indices.append(idx)
            data.append(w)
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.asarray(data), np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
        shape=(len(X), dim),
    )


def _labels01(y: Sequence[SentimentLabel]) -> np.ndarray:
    return np.fromiter((1.0 if lab is SentimentLabel.BULLISH else 0.0 for lab in y), dtype=np.float64)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return np.exp(-np.logaddexp(0.0, -z))


def logistic_loss_and_grad(
    w: np.ndarray, b: float, X: sparse.csr_matrix, y: np.ndarray, l2_lambda: float
) -> tuple[float, np.ndarray, float]:
    """Regularized logistic loss and its analytic gradient.

    loss = sum_i log(1 + exp(-s_i (x_i.w + b))) + (lambda/2) ||w||^2,
    with s_i = +-1; the bias is not penalized.
    """
    z = X @ w + b
    s = 2.0 * y - 1.0
    loss = float(np.logaddexp(0.0, -s * z).sum()) + 0.5 * l2_lambda * float(w @ w)
    residual = _sigmoid(z) - y
    grad_w = X.T @ residual + l2_lambda * w
    grad_b = float(residual.sum())
    return loss, np.asarray(grad_w).ravel(), grad_b


def train_logistic(
    X: Sequence[SparseVector], y: Sequence[SentimentLabel], cfg: Optional[TrainConfig] = None
) -> LinearModel:
    """Fit logistic regression by full-batch gradient descent.

    Steepest descent with Armijo backtracking from w=0, b=0; stops when the
    gradient norm drops to cfg.tol or after cfg.max_iters iterations.
    Deterministic for fixed inputs and config.
    """
    cfg = cfg or TrainConfig()
    cfg.validate()
    if len(X) != len(y):
        raise DataError(f"|X|={len(X)} but |y|={len(y)}")
    if len(X) < 2:
        raise DataError("training requires at least 2 samples")
    labels = _labels01(y)
    if labels.min() == labels.max():
        raise DataError("training requires both classes present")

    A = _to_csr(X)
    w = np.zeros(A.shape[1])
    b = 0.0
    step = 1.0
    loss, gw, gb = logistic_loss_and_grad(w, b, A, labels, cfg.l2_lambda)
    for _ in range(cfg.max_iters):
        gnorm_sq = float(gw @ gw) + gb * gb
        if math.sqrt(gnorm_sq) <= cfg.tol:
            break
        step = min(step * 2.0, 1e6)
        for _ in range(60):
            w_new = w - step * gw
            b_new = b - step * gb
            loss_new, gw_new, gb_new = logistic_loss_and_grad(w_new, b_new, A, labels, cfg.l2_lambda)
            if loss_new <= loss - 1e-4 * step * gnorm_sq:
                break
            step *= 0.5
        else:
            break  # no productive step at the smallest scale; converged enough
        w, b, loss, gw, gb = w_new, b_new, loss_new, gw_new, gb_new
    return LinearModel(weights=w, bias=b, family=ModelFamily.LOGISTIC)


def train_multinomial_nb(
    counts: Sequence[SparseVector], y: Sequence[SentimentLabel], cfg: Optional[TrainConfig] = None
) -> LinearModel:
    """Fit multinomial Naive Bayes on raw occurrence counts.

    weights[t] = log theta(t|Bullish) - log theta(t|Bearish) with Laplace
    smoothing cfg.nb_alpha; bias = log prior ratio. The resulting linear score
    is the log posterior ratio, so prediction reduces to its sign.
    """
    cfg = cfg or TrainConfig()
    cfg.validate()
    if len(counts) != len(y):
        raise DataError(f"|X|={len(counts)} but |y|={len(y)}")
    labels = _labels01(y)
    if len(counts) == 0 or labels.min() == labels.max():
        raise DataError("training requires both classes present")
    A = _to_csr(counts)
    if A.nnz and A.data.min() < 0:
        raise DataError("count vectors must be nonnegative")

    dim = A.shape[1]
    alpha = cfg.nb_alpha
    bull_counts = np.asarray(A[labels == 1.0].sum(axis=0)).ravel()
    bear_counts = np.asarray(A[labels == 0.0].sum(axis=0)).ravel()
    log_theta_bull = np.log(bull_counts + alpha) - math.log(bull_counts.sum() + alpha * dim)
    log_theta_bear = np.log(bear_counts + alpha) - math.log(bear_counts.sum() + alpha * dim)
    n_bull = float(labels.sum())
    n_bear = float(len(y) - n_bull)
    bias = math.log(n_bull) - math.log(n_bear)
    return LinearModel(
        weights=log_theta_bull - log_theta_bear, bias=bias, family=ModelFamily.MULTINOMIAL_NB
    )


def predict(
    m: LinearModel, X: Sequence[SparseVector]
) -> tuple[list[SentimentLabel], np.ndarray]:
    """Labels plus calibrated probabilities of the Bullish class.

    Logistic: sigmoid of the linear score. NB: the normalized two-class
    posterior (the score is already a log posterior ratio). A probability
    exactly at the threshold counts as Bullish.
    """
    A = _to_csr(X, dim=len(m.weights)) if X else sparse.csr_matrix((0, len(m.weights)))
    probs = _sigmoid(A @ m.weights + m.bias)
    labels = [
        SentimentLabel.BULLISH if p >= m.threshold else SentimentLabel.BEARISH for p in probs
    ]
    return labels, probs


@dataclass
class EvalReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    precision_macro: float
    recall_macro: float
    f1_macro: float
    tp: int
    fp: int
    fn: int
    tn: int

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "precision_macro": self.precision_macro,
            "recall_macro": self.recall_macro,
            "f1_macro": self.f1_macro,
            "confusion": {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn},
        }


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def evaluate(pred: Sequence[SentimentLabel], truth: Sequence[SentimentLabel]) -> EvalReport:
    """Confusion counts and derived metrics, Bullish as the positive class."""
    if len(pred) != len(truth):
        raise DataError(f"prediction/truth length mismatch: {len(pred)} vs {len(truth)}")
    if not pred:
        raise DataError("evaluate requires at least one sample")
    tp = fp = fn = tn = 0
    for p, t in zip(pred, truth):
        if p is SentimentLabel.BULLISH:
            if t is SentimentLabel.BULLISH:
                tp += 1
            else:
                fp += 1
        else:
            if t is SentimentLabel.BULLISH:
                fn += 1
            else:
                tn += 1
    precision, recall, f1 = _prf(tp, fp, fn)
    # Macro: average the Bullish-positive and Bearish-positive views.
    p_bear, r_bear, f_bear = _prf(tn, fn, fp)
    return EvalReport(
        accuracy=(tp + tn) / len(pred),
        precision=precision,
        recall=recall,
        f1=f1,
        precision_macro=(precision + p_bear) / 2,
        recall_macro=(recall + r_bear) / 2,
        f1_macro=(f1 + f_bear) / 2,
        tp=tp,
        fp=fp,
        fn=fn,
        tn=tn,
    )


_CI_METRICS = ("accuracy", "precision", "recall", "f1", "precision_macro", "recall_macro", "f1_macro")


@dataclass
class BootstrapCI:
    metrics: dict[str, tuple[float, float, float]]  # name -> (mean, lo_2.5, hi_97.5)
    n_resamples: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "n_resamples": self.n_resamples,
            "seed": self.seed,
            "metrics": {
                k: {"mean": m, "lo": lo, "hi": hi} for k, (m, lo, hi) in self.metrics.items()
            },
        }


def bootstrap_ci(
    pred: Sequence[SentimentLabel],
    truth: Sequence[SentimentLabel],
    n_resamples: int = 1000,
    seed: int = 42,
) -> BootstrapCI:
    """Percentile bootstrap over joint (pred, truth) resamples.

    Draws n pairs with replacement at full test size, recomputes each metric
    per resample, and reports the mean with the 2.5th/97.5th percentiles
    (linear interpolation). Deterministic for a fixed seed.
    """
    if len(pred) != len(truth):
        raise DataError("prediction/truth length mismatch")
    n = len(pred)
    if n < 2:
        raise DataError("bootstrap requires at least 2 samples")
    pb = np.fromiter((p is SentimentLabel.BULLISH for p in pred), dtype=bool, count=n)
    tb = np.fromiter((t is SentimentLabel.BULLISH for t in truth), dtype=bool, count=n)
    rng = np.random.default_rng(seed)

    samples = {name: np.empty(n_resamples) for name in _CI_METRICS}
    chunk = max(1, min(n_resamples, 200_000 // max(n, 1) + 1))
    done = 0
    while done < n_resamples:
        m = min(chunk, n_resamples - done)
        idx = rng.integers(0, n, size=(m, n))
        p = pb[idx]
        t = tb[idx]
        tp = (p & t).sum(axis=1).astype(np.float64)
        fp = (p & ~t).sum(axis=1).astype(np.float64)
        fn = (~p & t).sum(axis=1).astype(np.float64)
        tn = (~p & ~t).sum(axis=1).astype(np.float64)

        def safe_div(num, den):
            return np.divide(num, den, out=np.zeros_like(num), where=den > 0)

        prec = safe_div(tp, tp + fp)
        rec = safe_div(tp, tp + fn)
        f1 = safe_div(2 * prec * rec, prec + rec)
        prec_b = safe_div(tn, tn + fn)
        rec_b = safe_div(tn, tn + fp)
        f1_b = safe_div(2 * prec_b * rec_b, prec_b + rec_b)
        block = {
            "accuracy": (tp + tn) / n,
            "precision": prec,
            "recall": rec,
            "f1": f1,
            "precision_macro": (prec + prec_b) / 2,
            "recall_macro": (rec + rec_b) / 2,
            "f1_macro": (f1 + f1_b) / 2,
        }
        for name in _CI_METRICS:
            samples[name][done : done + m] = block[name]
        done += m

    out = {}
    for name in _CI_METRICS:
        vals = samples[name]
        lo, hi = np.percentile(vals, [2.5, 97.5])
        out[name] = (float(vals.mean()), float(lo), float(hi))
    return BootstrapCI(metrics=out, n_resamples=n_resamples, seed=seed)


def _corpus_labels(c: Corpus) -> list[SentimentLabel]:
    labels = []
    for p in c.posts:
        if p.label is None:
            raise DataError(f"post {p.id!r} is unlabeled; supervised paths need labels")
        labels.append(p.label)
    return labels


def _corpus_docs(c: Corpus, variant: DataVariant, mode: TokenizerMode) -> list:
    return [tokenize(derive_variant(p, variant, mode), mode) for p in c.posts]


def _fit_and_vectorize(docs, family: ModelFamily):
    tfidf = fit_tfidf(docs)
    if family is ModelFamily.LOGISTIC:
        X = [transform(d, tfidf) for d in docs]
    else:
        X = [count_transform(d, tfidf) for d in docs]
    return tfidf, X


def _vectorize_with(docs, tfidf: TfIdfModel, family: ModelFamily):
    if family is ModelFamily.LOGISTIC:
        return [transform(d, tfidf) for d in docs]
    return [count_transform(d, tfidf) for d in docs]


def _train_family(family: ModelFamily, X, y, cfg: TrainConfig) -> LinearModel:
    if family is ModelFamily.LOGISTIC:
        return train_logistic(X, y, cfg)
    return train_multinomial_nb(X, y, cfg)


@dataclass
class LearningCurvePoint:
    size: int
    accuracy: float


def learning_curve(
    train: Corpus,
    test: Corpus,
    sizes: Sequence[int],
    variant: DataVariant,
    family: ModelFamily = ModelFamily.LOGISTIC,
    seed: int = 42,
    cfg: Optional[TrainConfig] = None,
    mode: TokenizerMode = TokenizerMode.PAPER_REGEX,
) -> list[LearningCurvePoint]:
    """Accuracy on a fixed test set as a function of training-set size.

    Each size gets its own uniform subsample (seeded per size, so rows do not
    depend on what other sizes were requested) and a full pipeline refit:
    vocabulary, TF-IDF statistics, and model are all rebuilt from the
    subsample alone. A size equal to |train| uses the corpus as-is.
    """
    cfg = cfg or TrainConfig()
    n = len(train.posts)
    for size in sizes:
        if size < 1 or size > n:
            raise DataError(f"learning-curve size {size} outside 1..{n}")
    y_test = _corpus_labels(test)
    test_docs = _corpus_docs(test, variant, mode)

    points = []
    train_labels = _corpus_labels(train)
    train_docs = _corpus_docs(train, variant, mode)
    for size in sizes:
        if size == n:
            picked = range(n)
        else:
            rng = random.Random(seed + size)
            picked = sorted(rng.sample(range(n), size))
        docs = [train_docs[i] for i in picked]
        y = [train_labels[i] for i in picked]
        tfidf, X = _fit_and_vectorize(docs, family)
        model = _train_family(family, X, y, cfg)
        pred, _ = predict(model, _vectorize_with(test_docs, tfidf, family))
        points.append(LearningCurvePoint(size=size, accuracy=evaluate(pred, y_test).accuracy))
    return points


@dataclass
class BenchmarkReport:
    family: str
    variant: str
    n_train: int
    n_infer: int
    repeats: int
    train_seconds_min: float
    train_seconds_median: float
    infer_seconds_min: float
    infer_seconds_median: float
    per_post_infer_seconds_median: float
    prep_train_seconds: float
    prep_infer_seconds: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def benchmark(
    family: ModelFamily,
    variant: DataVariant,
    train: Corpus,
    infer: Corpus,
    cfg: Optional[TrainConfig] = None,
    repeats: int = 5,
    mode: TokenizerMode = TokenizerMode.PAPER_REGEX,
) -> BenchmarkReport:
    """Wall-clock cost of model fitting and batch inference.

    Timed sections cover only the model fit and the predict call; tokenization
    plus vectorization is timed once and reported separately. Each section runs
    ``repeats`` times; min and median are reported.
    """
    cfg = cfg or TrainConfig()
    if repeats < 1:
        raise DataError("repeats must be >= 1")
    y_train = _corpus_labels(train)

    t0 = time.perf_counter()
    train_docs = _corpus_docs(train, variant, mode)
    tfidf, X_train = _fit_and_vectorize(train_docs, family)
    prep_train = time.perf_counter() - t0

    t0 = time.perf_counter()
    infer_docs = _corpus_docs(infer, variant, mode)
    X_infer = _vectorize_with(infer_docs, tfidf, family)
    prep_infer = time.perf_counter() - t0

    train_times, infer_times = [], []
    model = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        model = _train_family(family, X_train, y_train, cfg)
        train_times.append(time.perf_counter() - t0)
        if X_infer:
            t0 = time.perf_counter()
            predict(model, X_infer)
            infer_times.append(time.perf_counter() - t0)
        else:
            infer_times.append(0.0)

    n_infer = len(infer.posts)
    infer_median = statistics.median(infer_times)
    return BenchmarkReport(
        family=family.value,
        variant=variant.value,
        n_train=len(train.posts),
        n_infer=n_infer,
        repeats=repeats,
        train_seconds_min=min(train_times),
        train_seconds_median=statistics.median(train_times),
        infer_seconds_min=min(infer_times),
        infer_seconds_median=infer_median,
        per_post_infer_seconds_median=(infer_median / n_infer) if n_infer else 0.0,
        prep_train_seconds=prep_train,
        prep_infer_seconds=prep_infer,
    )
