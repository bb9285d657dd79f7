"""Emoji sentiment lexicon: per-emoji and per-pair scores, count buckets,
lexicon-only classification, and daily emoji indices.

All statistics are presence-based: an emoji (or unordered emoji pair) counts
at most once per post no matter how often it repeats. Scores are exact count
ratios, bullish_score = n_bullish / n_posts over labeled posts only.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from datetime import date
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence, Union

from .corpus import Corpus, Post, SentimentLabel
from .errors import DataError, NumericError
from .tokenizer import TokenizerMode, extract_emojis

__all__ = [
    "EmojiStats",
    "PairStats",
    "EmojiLexicon",
    "CountBucket",
    "LexiconVerdict",
    "LexiconPolicy",
    "single_scores",
    "pair_scores",
    "count_buckets",
    "build_lexicon",
    "classify_with_lexicon",
    "emoji_index",
    "pearson_corr",
    "save_lexicon",
    "load_lexicon",
]


@dataclass(frozen=True)
class EmojiStats:
    emoji: str
    n_posts: int
    n_bullish: int
    n_bearish: int
    bullish_score: float
    bearish_score: float


@dataclass(frozen=True)
class PairStats:
    pair: tuple[str, str]  # code-point-sorted, distinct
    n_posts: int
    n_bullish: int
    n_bearish: int
    bullish_score: float
    bearish_score: float


@dataclass(frozen=True)
class EmojiLexicon:
    singles: tuple[EmojiStats, ...]
    pairs: tuple[PairStats, ...]
    top_k: int
    source_size: int


@dataclass(frozen=True)
class CountBucket:
    unique_count: str  # "1".."9" or "10+"
    n_posts: int
    bullish_fraction: float
    bearish_fraction: float


class LexiconVerdict(Enum):
    BULLISH = "bullish"
    BEARISH = "bearish"
    ABSTAIN = "abstain"


class LexiconPolicy(Enum):
    SINGLES_MEAN = "singles_mean"
    PAIRS_FIRST = "pairs_first"


def _labeled_emoji_posts(c: Corpus, mode: TokenizerMode):
    """(distinct emoji set, label) per labeled post that has emojis."""
    out = []
    for p in c.posts:
        if p.label is None:
            continue
        emojis = set(extract_emojis(p.body, mode))
        if emojis:
            out.append((emojis, p.label))
    if not out:
        raise DataError("no labeled emoji-bearing posts")
    return out


def _codepoints(s: str) -> tuple[int, ...]:
    return tuple(ord(ch) for ch in s)


def single_scores(
    c: Corpus, top_k: int = 50, mode: TokenizerMode = TokenizerMode.PAPER_REGEX
) -> list[EmojiStats]:
    """Per-emoji sentiment scores over the top_k most-supported emojis.

    Sorted by presence count descending; frequency ties break by code point
    ascending.
    """
    tallies: dict[str, list[int]] = {}
    for emojis, label in _labeled_emoji_posts(c, mode):
        bull = 1 if label is SentimentLabel.BULLISH else 0
        for e in emojis:
            t = tallies.setdefault(e, [0, 0])
            t[0] += 1
            t[1] += bull
    ranked = sorted(tallies.items(), key=lambda kv: (-kv[1][0], _codepoints(kv[0])))
    out = []
    for emoji, (n, n_bull) in ranked[:top_k]:
        out.append(
            EmojiStats(
                emoji=emoji,
                n_posts=n,
                n_bullish=n_bull,
                n_bearish=n - n_bull,
                bullish_score=n_bull / n,
                bearish_score=(n - n_bull) / n,
            )
        )
    return out


def pair_scores(
    c: Corpus, top_k: int = 50, mode: TokenizerMode = TokenizerMode.PAPER_REGEX
) -> list[PairStats]:
    """Sentiment scores for unordered pairs of distinct co-occurring emojis.

    A pair counts once per post regardless of how many times either member
    repeats or in what order they appear.
    """
    tallies: dict[tuple[str, str], list[int]] = {}
    for emojis, label in _labeled_emoji_posts(c, mode):
        bull = 1 if label is SentimentLabel.BULLISH else 0
        for a, b in itertools.combinations(sorted(emojis, key=_codepoints), 2):
            t = tallies.setdefault((a, b), [0, 0])
            t[0] += 1
            t[1] += bull
    ranked = sorted(tallies.items(), key=lambda kv: (-kv[1][0], [_codepoints(e) for e in kv[0]]))
    out = []
    for pair, (n, n_bull) in ranked[:top_k]:
        out.append(
            PairStats(
                pair=pair,
                n_posts=n,
                n_bullish=n_bull,
                n_bearish=n - n_bull,
                bullish_score=n_bull / n,
                bearish_score=(n - n_bull) / n,
            )
        )
    return out


_BUCKET_LABELS = tuple(str(i) for i in range(1, 10)) + ("10+",)


def count_buckets(c: Corpus, mode: TokenizerMode = TokenizerMode.PAPER_REGEX) -> list[CountBucket]:
    """Label mix bucketed by the number of unique emojis per post.

    Always emits the ten buckets "1".."9" and "10+"; empty buckets carry zero
    fractions.
    """
    totals = {lab: [0, 0] for lab in _BUCKET_LABELS}
    for emojis, label in _labeled_emoji_posts(c, mode):
        u = len(emojis)
        key = str(u) if u < 10 else "10+"
        totals[key][0] += 1
        totals[key][1] += 1 if label is SentimentLabel.BULLISH else 0
    out = []
    for lab in _BUCKET_LABELS:
        n, n_bull = totals[lab]
        out.append(
            CountBucket(
                unique_count=lab,
                n_posts=n,
                bullish_fraction=n_bull / n if n else 0.0,
                bearish_fraction=(n - n_bull) / n if n else 0.0,
            )
        )
    return out


def build_lexicon(
    c: Corpus, top_k: int = 50, mode: TokenizerMode = TokenizerMode.PAPER_REGEX
) -> EmojiLexicon:
    return EmojiLexicon(
        singles=tuple(single_scores(c, top_k, mode)),
        pairs=tuple(pair_scores(c, top_k, mode)),
        top_k=top_k,
        source_size=len(c.posts),
    )


def classify_with_lexicon(
    p: Post,
    lex: EmojiLexicon,
    policy: LexiconPolicy = LexiconPolicy.SINGLES_MEAN,
    mode: TokenizerMode = TokenizerMode.PAPER_REGEX,
) -> LexiconVerdict:
    """Score a post from the lexicon alone.

    Default policy: mean bullish_score over the post's distinct in-lexicon
    emojis, Bullish at >= 0.5; Abstain when no lexicon emoji is present.
    PAIRS_FIRST uses scored pairs when any are present, falling back to
    singles otherwise.
    """
    present = set(extract_emojis(p.body, mode))
    if not present:
        return LexiconVerdict.ABSTAIN
    if policy is LexiconPolicy.PAIRS_FIRST:
        pair_hits = [
            ps.bullish_score for ps in lex.pairs if ps.pair[0] in present and ps.pair[1] in present
        ]
        if pair_hits:
            return (
                LexiconVerdict.BULLISH
                if sum(pair_hits) / len(pair_hits) >= 0.5
                else LexiconVerdict.BEARISH
            )
    single_hits = [es.bullish_score for es in lex.singles if es.emoji in present]
    if not single_hits:
        return LexiconVerdict.ABSTAIN
    mean = sum(single_hits) / len(single_hits)
    return LexiconVerdict.BULLISH if mean >= 0.5 else LexiconVerdict.BEARISH


def emoji_index(
    c: Corpus, emoji: str, granularity: str = "daily", mode: TokenizerMode = TokenizerMode.PAPER_REGEX
) -> list[tuple[date, float]]:
    """Daily proportion of posts containing ``emoji``, over UTC calendar days.

    Days with no posts at all are absent from the series; days whose posts
    never use the emoji contribute a zero.
    """
    if granularity != "daily":
        raise DataError(f"unsupported granularity: {granularity!r}")
    per_day: dict[date, list[int]] = {}
    for p in c.posts:
        if p.created_at is None:
            continue
        day = p.created_at.date()
        t = per_day.setdefault(day, [0, 0])
        t[0] += 1
        if emoji in set(extract_emojis(p.body, mode)):
            t[1] += 1
    if not per_day:
        raise DataError("emoji_index requires timestamped posts")
    return [(day, per_day[day][1] / per_day[day][0]) for day in sorted(per_day)]


Series = Union[Mapping, Sequence[tuple]]


def _as_map(s: Series) -> dict:
    if isinstance(s, Mapping):
        return dict(s)
    return {k: v for k, v in s}


def pearson_corr(a: Series, b: Series) -> float:
    """Sample Pearson correlation over the intersection of series keys."""
    ma, mb = _as_map(a), _as_map(b)
    keys = sorted(set(ma) & set(mb))
    if len(keys) < 2:
        raise DataError(f"need >= 2 aligned points, got {len(keys)}")
    xs = [float(ma[k]) for k in keys]
    ys = [float(mb[k]) for k in keys]
    n = len(keys)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    syy = sum((y - mean_y) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        raise NumericError("degenerate variance in correlation input")
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    return sxy / math.sqrt(sxx * syy)


def lexicon_payload(lex: EmojiLexicon) -> dict:
    """JSON-ready dict form of a lexicon (the on-disk format)."""
    return {
        "format_version": 1,
        "top_k": lex.top_k,
        "source_size": lex.source_size,
        "singles": [
            {
                "emoji": s.emoji,
                "codepoints": list(_codepoints(s.emoji)),
                "n_posts": s.n_posts,
                "n_bullish": s.n_bullish,
                "n_bearish": s.n_bearish,
                "bullish_score": s.bullish_score,
                "bearish_score": s.bearish_score,
            }
            for s in lex.singles
        ],
        "pairs": [
            {
                "emojis": list(p.pair),
                "codepoints": [list(_codepoints(e)) for e in p.pair],
                "n_posts": p.n_posts,
                "n_bullish": p.n_bullish,
                "n_bearish": p.n_bearish,
                "bullish_score": p.bullish_score,
                "bearish_score": p.bearish_score,
            }
            for p in lex.pairs
        ],
    }


def save_lexicon(lex: EmojiLexicon, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(lexicon_payload(lex), ensure_ascii=False, sort_keys=True, indent=1),
        encoding="utf-8",
    )


def load_lexicon(path: str | Path) -> EmojiLexicon:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise DataError(f"cannot load lexicon from {path}: {exc}") from exc
    singles = tuple(
        EmojiStats(
            emoji=s["emoji"],
            n_posts=s["n_posts"],
            n_bullish=s["n_bullish"],
            n_bearish=s["n_bearish"],
            bullish_score=s["bullish_score"],
            bearish_score=s["bearish_score"],
        )
        for s in payload["singles"]
    )
    pairs = tuple(
        PairStats(
            pair=(p["emojis"][0], p["emojis"][1]),
            n_posts=p["n_posts"],
            n_bullish=p["n_bullish"],
            n_bearish=p["n_bearish"],
            bullish_score=p["bullish_score"],
            bearish_score=p["bearish_score"],
        )
        for p in payload["pairs"]
    )
    return EmojiLexicon(
        singles=singles, pairs=pairs, top_k=payload["top_k"], source_size=payload["source_size"]
    )
