"""Post ingestion, filtering, balancing, and splitting.

Input formats: JSONL (one object per line with fields id, created_at, body,
label, symbols) and CSV (RFC 4180, header row, same column names, symbols
"|"-joined). Labels are "bullish" / "bearish" / null. Corpora are immutable;
every filter returns a new corpus with updated provenance.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import random
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Optional

from .errors import DataError
from .tokenizer import TokenizerMode, extract_emojis, strip_emojis

logger = logging.getLogger(__name__)

__all__ = [
    "SentimentLabel",
    "Post",
    "Corpus",
    "DataVariant",
    "load_posts",
    "save_posts",
    "filter_emoji_posts",
    "filter_labeled",
    "balance_undersample",
    "split",
    "derive_variant",
]


class SentimentLabel(Enum):
    BULLISH = "bullish"
    BEARISH = "bearish"


class DataVariant(Enum):
    TEXT_ONLY = "text_only"
    EMOJI_ONLY = "emoji_only"
    TEXT_AND_EMOJI = "text_and_emoji"


@dataclass(frozen=True)
class Post:
    id: str
    body: str
    created_at: Optional[datetime] = None
    label: Optional[SentimentLabel] = None
    symbols: tuple[str, ...] = ()


@dataclass(frozen=True)
class Corpus:
    posts: tuple[Post, ...]
    provenance: str = ""
    skipped_records: int = 0

    def __len__(self) -> int:
        return len(self.posts)

    def __iter__(self):
        return iter(self.posts)

    def with_step(self, step: str) -> "Corpus":
        prov = f"{self.provenance}|{step}" if self.provenance else step
        return replace(self, provenance=prov)


def _parse_timestamp(raw) -> Optional[datetime]:
    if raw is None or raw == "":
        return None
    try:
        if isinstance(raw, (int, float)):
            return datetime.fromtimestamp(int(raw), tz=timezone.utc)
        dt = datetime.fromisoformat(str(raw).replace("Z", "+00:00"))
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return dt.astimezone(timezone.utc).replace(microsecond=0)
    except (ValueError, OverflowError, OSError):
        return None


def _parse_label(raw) -> Optional[SentimentLabel]:
    """None for missing/empty; raises ValueError on anything unrecognized."""
    if raw is None or raw == "":
        return None
    low = str(raw).strip().lower()
    if low in ("", "null", "none"):
        return None
    return SentimentLabel(low)  # ValueError for junk values


def _post_from_record(rec: dict, symbols_joined: bool) -> Post:
    post_id = str(rec.get("id", "") or "")
    body = rec.get("body")
    if not post_id or body is None:
        raise ValueError("record requires non-empty id and a body")
    raw_symbols = rec.get("symbols")
    if raw_symbols is None or raw_symbols == "":
        symbols: tuple[str, ...] = ()
    elif symbols_joined:
        symbols = tuple(s for s in str(raw_symbols).split("|") if s)
    elif isinstance(raw_symbols, (list, tuple)):
        symbols = tuple(str(s) for s in raw_symbols)
    else:
        raise ValueError("symbols must be a list")
    return Post(
        id=post_id,
        body=str(body),
        created_at=_parse_timestamp(rec.get("created_at")),
        label=_parse_label(rec.get("label")),
        symbols=symbols,
    )


def load_posts(path: str | Path, format: Optional[str] = None) -> Corpus:
    """Load a corpus from a JSONL or CSV file.

    Malformed records (bad JSON, missing id/body, unrecognized label) are
    counted and skipped; the count lands in the provenance string and in
    ``Corpus.skipped_records``. Unparseable timestamps keep the post with
    created_at absent. Duplicate ids or zero parseable records are errors.
    """
    path = Path(path)
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    if format not in ("jsonl", "csv"):
        raise DataError(f"unknown corpus format: {format!r}")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc

    posts: list[Post] = []
    skipped = 0
    if format == "jsonl":
        for line in text.splitlines():
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                posts.append(_post_from_record(rec, symbols_joined=False))
            except (ValueError, TypeError, AttributeError):
                skipped += 1
    else:
        reader = csv.DictReader(text.splitlines())
        if not reader.fieldnames or "body" not in reader.fieldnames:
            raise DataError(f"{path}: CSV header row with a 'body' column is required")
        for rec in reader:
            try:
                posts.append(_post_from_record(rec, symbols_joined=True))
            except (ValueError, TypeError):
                skipped += 1

    if not posts:
        raise DataError(f"{path}: zero parseable records")
    ids = set()
    for p in posts:
        if p.id in ids:
            raise DataError(f"{path}: duplicate post id {p.id!r}")
        ids.add(p.id)
    if skipped:
        logger.warning("%s: skipped %d malformed record(s)", path, skipped)
    return Corpus(
        posts=tuple(posts),
        provenance=f"{path}[{format}] skipped={skipped}",
        skipped_records=skipped,
    )


def _format_timestamp(dt: Optional[datetime]) -> Optional[str]:
    if dt is None:
        return None
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def save_posts(c: Corpus, path: str | Path) -> None:
    """Write a corpus as JSONL, round-trippable through load_posts."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for p in c.posts:
            rec = {
                "id": p.id,
                "created_at": _format_timestamp(p.created_at),
                "body": p.body,
                "label": p.label.value if p.label else None,
                "symbols": list(p.symbols),
            }
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")


def filter_emoji_posts(c: Corpus, mode: TokenizerMode = TokenizerMode.PAPER_REGEX) -> Corpus:
    """Keep posts containing at least one emoji token."""
    kept = tuple(p for p in c.posts if extract_emojis(p.body, mode))
    return Corpus(kept, c.provenance, c.skipped_records).with_step("emoji_only_posts")


def filter_labeled(c: Corpus) -> Corpus:
    kept = tuple(p for p in c.posts if p.label is not None)
    return Corpus(kept, c.provenance, c.skipped_records).with_step("labeled")


def balance_undersample(c: Corpus, seed: int) -> Corpus:
    """Equalize class counts by uniform undersampling of the majority class.

    The minority class is kept whole; the result preserves input order and is
    deterministic for a fixed (corpus, seed).
    """
    bulls = [i for i, p in enumerate(c.posts) if p.label is SentimentLabel.BULLISH]
    bears = [i for i, p in enumerate(c.posts) if p.label is SentimentLabel.BEARISH]
    if len(bulls) + len(bears) != len(c.posts):
        raise DataError("balance_undersample requires a fully labeled corpus")
    if not bulls or not bears:
        raise DataError("balance_undersample requires both classes present")
    minority = min(len(bulls), len(bears))
    rng = random.Random(seed)
    keep = set(bulls if len(bulls) <= len(bears) else bears)
    majority = bears if len(bulls) <= len(bears) else bulls
    keep.update(rng.sample(majority, minority))
    kept = tuple(p for i, p in enumerate(c.posts) if i in keep)
    return Corpus(kept, c.provenance, c.skipped_records).with_step(f"balanced(seed={seed})")


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def split(c: Corpus, test_fraction: float, seed: int) -> tuple[Corpus, Corpus]:
    """Disjoint train/test split with |test| = round(test_fraction * |c|).

    Stratified by label when every post is labeled (per-class counts
    apportioned by largest remainder); plain shuffled split otherwise. Both
    outputs preserve the input's post order.
    """
    if not 0.0 < test_fraction < 1.0:
        raise DataError(f"test_fraction must be in (0,1), got {test_fraction}")
    n = len(c.posts)
    if n < 2:
        raise DataError("split requires at least 2 posts")
    n_test = _round_half_up(test_fraction * n)
    rng = random.Random(seed)

    all_labeled = all(p.label is not None for p in c.posts)
    test_idx: set[int] = set()
    if all_labeled:
        groups = {}
        for i, p in enumerate(c.posts):
            groups.setdefault(p.label.value, []).append(i)
        names = sorted(groups)
        floors, remainders = {}, []
        for name in names:
            exact = test_fraction * len(groups[name])
            floors[name] = int(math.floor(exact))
            remainders.append((-(exact - floors[name]), name))
        leftover = n_test - sum(floors.values())
        remainders.sort()
        for _, name in remainders[: max(leftover, 0)]:
            floors[name] += 1
        for name in names:
            idx = groups[name][:]
            rng.shuffle(idx)
            test_idx.update(idx[: floors[name]])
    else:
        idx = list(range(n))
        rng.shuffle(idx)
        test_idx.update(idx[:n_test])

    train = tuple(p for i, p in enumerate(c.posts) if i not in test_idx)
    test = tuple(p for i, p in enumerate(c.posts) if i in test_idx)
    base = Corpus((), c.provenance, c.skipped_records)
    tag = f"split(test_fraction={test_fraction},seed={seed})"
    return (
        replace(base.with_step(tag + "[train]"), posts=train),
        replace(base.with_step(tag + "[test]"), posts=test),
    )


def derive_variant(
    p: Post, v: DataVariant, mode: TokenizerMode = TokenizerMode.PAPER_REGEX
) -> str:
    """Project a post body onto one of the three data variants."""
    if v is DataVariant.TEXT_AND_EMOJI:
        return p.body
    if v is DataVariant.TEXT_ONLY:
        return strip_emojis(p.body, mode)
    return " ".join(extract_emojis(p.body, mode))
