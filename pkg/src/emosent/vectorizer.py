"""Log-normalized TF-IDF over token sequences.

The weight of token t with count c in a document of length L (L counts every
token, in-vocabulary or not) is

    (c / L) * ln(1 + n_docs / df[t])

applied verbatim: natural log, no smoothing knobs, no row normalization
(an optional post-hoc L2 flag exists but defaults off). The vocabulary is
assigned in first-seen order over the fitting corpus, so a fitted model is a
pure function of its corpus.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

from .errors import DataError
from .tokenizer import Token

__all__ = [
    "FORMULA_ID",
    "SparseVector",
    "TfIdfModel",
    "fit",
    "transform",
    "transform_batch",
    "count_transform",
    "save_model",
    "load_model",
    "model_digest",
]

FORMULA_ID = "paper-lognorm-v1"

TokenLike = Union[Token, str]


def _text(tok: TokenLike) -> str:
    return tok.text if isinstance(tok, Token) else tok


@dataclass(frozen=True)
class SparseVector:
    """Sorted sparse entries; no explicit zeros."""

    dim: int
    entries: tuple[tuple[int, float], ...]

    def __post_init__(self):
        prev = -1
        for idx, _ in self.entries:
            if idx <= prev or idx >= self.dim:
                raise ValueError("entries must have strictly increasing indices < dim")
            prev = idx

    def to_dict(self) -> dict[int, float]:
        return dict(self.entries)


@dataclass(frozen=True)
class TfIdfModel:
    vocab: dict[str, int]
    df: tuple[int, ...]
    n_docs: int
    formula_id: str = FORMULA_ID

    @property
    def dim(self) -> int:
        return len(self.vocab)

    def tokens_in_order(self) -> list[str]:
        out = [""] * len(self.vocab)
        for tok, idx in self.vocab.items():
            out[idx] = tok
        return out


def fit(docs: Sequence[Sequence[TokenLike]]) -> TfIdfModel:
    """Build vocabulary and per-document presence counts.

    Document frequency counts each document at most once per token.
    """
    if not docs:
        raise DataError("fit requires at least one document")
    vocab: dict[str, int] = {}
    df: list[int] = []
    any_token = False
    for doc in docs:
        seen: set[int] = set()
        for tok in doc:
            any_token = True
            text = _text(tok)
            idx = vocab.get(text)
            if idx is None:
                idx = len(vocab)
                vocab[text] = idx
                df.append(0)
            seen.add(idx)
        for idx in seen:
            df[idx] += 1
    if not any_token:
        raise DataError("fit requires at least one non-empty document")
    return TfIdfModel(vocab=vocab, df=tuple(df), n_docs=len(docs))


def _doc_counts(doc: Sequence[TokenLike], vocab: dict[str, int]) -> tuple[dict[int, int], int]:
    counts: dict[int, int] = {}
    length = 0
    for tok in doc:
        length += 1
        idx = vocab.get(_text(tok))
        if idx is not None:
            counts[idx] = counts.get(idx, 0) + 1
    return counts, length


def transform(
    doc: Sequence[TokenLike], m: TfIdfModel, l2_normalize: bool = False
) -> SparseVector:
    """Map one token sequence to its TF-IDF vector.

    Out-of-vocabulary tokens contribute no entry but count toward document
    length. An empty document yields the zero vector.
    """
    counts, length = _doc_counts(doc, m.vocab)
    if length == 0:
        return SparseVector(m.dim, ())
    entries = []
    for idx in sorted(counts):
        w = (counts[idx] / length) * math.log(1.0 + m.n_docs / m.df[idx])
        entries.append((idx, w))
    if l2_normalize and entries:
        norm = math.sqrt(sum(w * w for _, w in entries))
        if norm > 0:
            entries = [(i, w / norm) for i, w in entries]
    return SparseVector(m.dim, tuple(entries))


def transform_batch(
    docs: Iterable[Sequence[TokenLike]], m: TfIdfModel, l2_normalize: bool = False
) -> list[SparseVector]:
    return [transform(doc, m, l2_normalize) for doc in docs]


def count_transform(doc: Sequence[TokenLike], m: TfIdfModel) -> SparseVector:
    """Raw in-vocabulary occurrence counts (multinomial NB input)."""
    counts, _ = _doc_counts(doc, m.vocab)
    return SparseVector(m.dim, tuple((i, float(counts[i])) for i in sorted(counts)))


def _model_payload(m: TfIdfModel) -> dict:
    return {
        "format_version": 1,
        "formula_id": m.formula_id,
        "n_docs": m.n_docs,
        "vocab": m.tokens_in_order(),
        "df": list(m.df),
    }


def model_digest(m: TfIdfModel) -> str:
    """sha256 over the canonical serialization; pairs models with vectorizers."""
    blob = json.dumps(_model_payload(m), ensure_ascii=False, sort_keys=True)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def save_model(m: TfIdfModel, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(_model_payload(m), ensure_ascii=False, sort_keys=True, indent=1),
        encoding="utf-8",
    )


def load_model(path: str | Path) -> TfIdfModel:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise DataError(f"cannot load vectorizer from {path}: {exc}") from exc
    if payload.get("formula_id") != FORMULA_ID:
        raise DataError(f"unsupported vectorizer formula: {payload.get('formula_id')!r}")
    vocab = {tok: i for i, tok in enumerate(payload["vocab"])}
    return TfIdfModel(
        vocab=vocab,
        df=tuple(int(x) for x in payload["df"]),
        n_docs=int(payload["n_docs"]),
        formula_id=payload["formula_id"],
    )
