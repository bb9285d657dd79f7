"""Synthetic corpora for benchmarks, learning curves, and end-to-end tests.

The sentiment corpus mimics the structure the classifiers are built for:
a marker emoji carries the true sentiment, labels are flipped with a small
noise rate, neutral filler words plus a weak text signal make the text-only
variant learnable but slow to learn, and neutral distractor emojis keep the
emoji vocabulary from collapsing to two symbols.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone
from typing import Optional, Sequence

from .corpus import Corpus, Post, SentimentLabel

__all__ = ["synthetic_sentiment_corpus", "synthetic_emoji_corpus"]

BULL_MARKER = "\U0001F680"  # rocket
BEAR_MARKER = "\U0001FA78"  # drop of blood

_FILLER = (
    "the a this that just still really very so too now today tonight tomorrow "
    "watch watching chart charts level levels volume open close price action "
    "market session range zone move moves play setup entry exit position size "
    "daily weekly trend line support resistance candle wick gap fill break "
    "test retest bounce dip rip run flow order book spread bid ask tape print "
    "news earnings call report guidance numbers data update thread post note "
    "eyes here there soon later early late big small huge tiny quick slow "
    "clean messy wild quiet crazy boring easy hard real fake same different"
).split()

_BULL_HINTS = ("moon", "calls", "breakout", "strong", "green", "up", "long", "higher")
_BEAR_HINTS = ("puts", "breakdown", "weak", "red", "down", "short", "lower", "drill")

_NEUTRAL_EMOJIS = ("\U0001F440", "\U0001F48E", "\U0001F525", "\U0001F319", "\U0001F914")

_SYMBOLS = ("SYN", "BTC", "SPY", "DOGE", "APL")


def synthetic_sentiment_corpus(
    n_posts: int,
    seed: int = 42,
    label_noise: float = 0.05,
    text_signal: float = 0.35,
    start: Optional[datetime] = None,
    days: int = 60,
) -> Corpus:
    """Labeled posts whose marker emoji encodes the true sentiment.

    ``label_noise`` is the probability that the user-declared label disagrees
    with the marker; ``text_signal`` is the probability that a sentiment-tinged
    word joins the filler text, giving text-only models a weak signal.
    """
    rng = random.Random(seed)
    if start is None:
        start = datetime(2021, 1, 1, tzinfo=timezone.utc)
    posts = []
    for i in range(n_posts):
        bullish = rng.random() < 0.5
        words = rng.choices(_FILLER, k=rng.randint(3, 8))
        if rng.random() < text_signal:
            words.append(rng.choice(_BULL_HINTS if bullish else _BEAR_HINTS))
        rng.shuffle(words)
        marker = BULL_MARKER if bullish else BEAR_MARKER
        marker = marker * rng.randint(1, 3)
        pieces = words[:]
        pieces.insert(rng.randint(0, len(pieces)), marker)
        if rng.random() < 0.3:
            pieces.insert(rng.randint(0, len(pieces)), rng.choice(_NEUTRAL_EMOJIS))
        label = bullish if rng.random() >= label_noise else not bullish
        created = start + timedelta(days=rng.randrange(days), seconds=rng.randrange(86400))
        posts.append(
            Post(
                id=f"syn{i:07d}",
                body=" ".join(pieces),
                created_at=created,
                label=SentimentLabel.BULLISH if label else SentimentLabel.BEARISH,
                symbols=(rng.choice(_SYMBOLS),),
            )
        )
    return Corpus(tuple(posts), provenance=f"synthetic(n={n_posts},seed={seed})")


def synthetic_emoji_corpus(
    n_posts: int, emoji_pool: Sequence[str], seed: int = 42
) -> Corpus:
    """Posts drawing 1-3 emojis from a fixed pool; for distribution tests."""
    rng = random.Random(seed)
    posts = []
    start = datetime(2021, 6, 1, tzinfo=timezone.utc)
    for i in range(n_posts):
        emojis = rng.sample(list(emoji_pool), k=min(rng.randint(1, 3), len(emoji_pool)))
        words = rng.choices(_FILLER, k=rng.randint(2, 5))
        body = " ".join(words + ["".join(e * rng.randint(1, 2) for e in emojis)])
        label = rng.random() < 0.5
        posts.append(
            Post(
                id=f"pool{i:07d}",
                body=body,
                created_at=start + timedelta(hours=i % 240),
                label=SentimentLabel.BULLISH if label else SentimentLabel.BEARISH,
                symbols=("SYN",),
            )
        )
    return Corpus(tuple(posts), provenance=f"synthetic-pool(n={n_posts},seed={seed})")
