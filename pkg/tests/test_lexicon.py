import random
from datetime import datetime, timezone

import pytest

from emosent.corpus import Corpus, Post, SentimentLabel
from emosent.errors import DataError, NumericError
from emosent.lexicon import (
    EmojiLexicon,
    EmojiStats,
    LexiconPolicy,
    LexiconVerdict,
    build_lexicon,
    classify_with_lexicon,
    count_buckets,
    emoji_index,
    load_lexicon,
    pair_scores,
    pearson_corr,
    save_lexicon,
    single_scores,
)

BULL = SentimentLabel.BULLISH
BEAR = SentimentLabel.BEARISH

ROCKET = "\U0001F680"
GEM = "\U0001F48E"
FIRE = "\U0001F525"
EYES = "\U0001F440"
BLOOD = "\U0001FA78"


def post(i, body, label=BULL, ts=None):
    return Post(id=f"p{i}", body=body, label=label, created_at=ts)


class TestSingleScores:
    def test_hand_count(self):
        posts = [
            post(0, f"a {ROCKET}", BULL),
            post(1, f"b {ROCKET}", BULL),
            post(2, f"c {ROCKET}", BULL),
            post(3, f"d {ROCKET}", BEAR),
        ]
        (stats,) = single_scores(Corpus(tuple(posts)))
        assert stats.n_posts == 4
        assert stats.bullish_score == 0.75
        assert stats.bearish_score == 0.25

    def test_presence_semantics(self):
        (stats,) = single_scores(Corpus((post(0, f"{ROCKET}{ROCKET} twice", BULL),)))
        assert stats.n_posts == 1 and stats.bullish_score == 1.0

    def test_all_bullish_scores_one(self):
        posts = [post(i, f"{ROCKET} {GEM} {FIRE}", BULL) for i in range(5)]
        for stats in single_scores(Corpus(tuple(posts))):
            assert stats.bullish_score == 1.0 and stats.bearish_score == 0.0

    def test_top_k_and_tie_break(self):
        # GEM (U+1F48E) < ROCKET (U+1F680); equal support breaks by code point
        posts = [post(0, f"{ROCKET} {GEM}", BULL), post(1, f"{GEM} {ROCKET}", BEAR)]
        stats = single_scores(Corpus(tuple(posts)), top_k=1)
        assert len(stats) == 1 and stats[0].emoji == GEM

    def test_order_permutation_invariant(self):
        posts = [
            post(0, f"{ROCKET} one", BULL),
            post(1, f"{GEM} two", BEAR),
            post(2, f"{ROCKET} {GEM}", BULL),
        ]
        a = single_scores(Corpus(tuple(posts)))
        b = single_scores(Corpus(tuple(reversed(posts))))
        assert a == b

    def test_scores_are_exact_ratios(self):
        rng = random.Random(1)
        posts = []
        for i in range(200):
            label = BULL if rng.random() < 0.7 else BEAR
            emojis = "".join(rng.sample([ROCKET, GEM, FIRE, EYES], rng.randint(1, 3)))
            posts.append(post(i, f"w {emojis}", label))
        for stats in single_scores(Corpus(tuple(posts))):
            assert stats.n_bullish + stats.n_bearish == stats.n_posts
            assert stats.bullish_score == stats.n_bullish / stats.n_posts
            assert round(stats.bullish_score * stats.n_posts) == stats.n_bullish
            assert round(stats.bearish_score * stats.n_posts) == stats.n_bearish

    def test_empty_corpus_error(self):
        with pytest.raises(DataError):
            single_scores(Corpus(()))
        with pytest.raises(DataError):
            single_scores(Corpus((post(0, "no emojis", BULL),)))


class TestPairScores:
    def test_repeats_count_once(self):
        (stats,) = pair_scores(Corpus((post(0, f"{ROCKET}{GEM}{GEM}{ROCKET}", BULL),)))
        assert stats.pair == (GEM, ROCKET)  # code-point order
        assert stats.n_posts == 1

    def test_three_emojis_three_pairs(self):
        stats = pair_scores(Corpus((post(0, f"{ROCKET} {GEM} {FIRE}", BULL),)))
        assert {s.pair for s in stats} == {(GEM, ROCKET), (FIRE, ROCKET), (GEM, FIRE)}
        assert all(s.n_posts == 1 for s in stats)

    def test_bearish_only_pair(self):
        posts = [post(i, f"{FIRE} {EYES}", BEAR) for i in range(2)]
        (stats,) = pair_scores(Corpus(tuple(posts)))
        assert stats.bearish_score == 1.0 and stats.n_posts == 2

    def test_duplicated_emojis_change_nothing(self):
        a = pair_scores(Corpus((post(0, f"{ROCKET} {GEM}", BULL),)))
        b = pair_scores(Corpus((post(0, f"{ROCKET}{ROCKET} {GEM}{GEM}{GEM}", BULL),)))
        assert a == b


class TestCountBuckets:
    def test_repeated_emoji_is_bucket_one(self):
        buckets = count_buckets(Corpus((post(0, f"{ROCKET}{ROCKET}", BULL),)))
        by = {b.unique_count: b for b in buckets}
        assert by["1"].n_posts == 1
        assert sum(b.n_posts for b in buckets) == 1

    def test_twelve_distinct_goes_ten_plus(self):
        emojis = [chr(cp) for cp in range(0x1F680, 0x1F68C)]  # 12 distinct
        buckets = count_buckets(Corpus((post(0, " ".join(emojis), BEAR),)))
        by = {b.unique_count: b for b in buckets}
        assert by["10+"].n_posts == 1

    def test_even_mix_fractions(self):
        posts = [post(i, f"{ROCKET} {GEM}", BULL) for i in range(2)]
        posts += [post(i + 2, f"{ROCKET} {GEM}", BEAR) for i in range(2)]
        by = {b.unique_count: b for b in count_buckets(Corpus(tuple(posts)))}
        assert by["2"].bullish_fraction == 0.5 and by["2"].bearish_fraction == 0.5

    def test_exactly_ten_buckets_fractions_sum(self):
        rng = random.Random(3)
        pool = [chr(cp) for cp in range(0x1F600, 0x1F640)]
        posts = []
        for i in range(120):
            k = rng.randint(1, 14)
            emojis = rng.sample(pool, k)
            posts.append(post(i, "".join(emojis), BULL if rng.random() < 0.5 else BEAR))
        buckets = count_buckets(Corpus(tuple(posts)))
        assert [b.unique_count for b in buckets] == [str(i) for i in range(1, 10)] + ["10+"]
        for b in buckets:
            if b.n_posts:
                assert b.bullish_fraction + b.bearish_fraction == pytest.approx(1.0, abs=1e-12)


class TestClassify:
    def _lexicon(self, scores):
        singles = tuple(
            EmojiStats(emoji=e, n_posts=100, n_bullish=int(s * 100), n_bearish=100 - int(s * 100),
                       bullish_score=s, bearish_score=1 - s)
            for e, s in scores.items()
        )
        return EmojiLexicon(singles=singles, pairs=(), top_k=50, source_size=100)

    def test_strong_bullish_emoji(self):
        lex = self._lexicon({ROCKET: 0.96})
        assert classify_with_lexicon(post(0, f"only {ROCKET}"), lex) is LexiconVerdict.BULLISH

    def test_tie_mean_is_bullish(self):
        lex = self._lexicon({ROCKET: 0.9, BLOOD: 0.1})
        verdict = classify_with_lexicon(post(0, f"{ROCKET} {BLOOD}"), lex)
        assert verdict is LexiconVerdict.BULLISH

    def test_abstain_without_lexicon_emoji(self):
        lex = self._lexicon({ROCKET: 0.96})
        assert classify_with_lexicon(post(0, f"just {GEM}"), lex) is LexiconVerdict.ABSTAIN
        assert classify_with_lexicon(post(0, "no emojis"), lex) is LexiconVerdict.ABSTAIN

    def test_emoji_order_irrelevant(self):
        lex = self._lexicon({ROCKET: 0.8, GEM: 0.3, FIRE: 0.4})
        a = classify_with_lexicon(post(0, f"{ROCKET} {GEM} {FIRE}"), lex)
        b = classify_with_lexicon(post(0, f"{FIRE}{GEM}{ROCKET}"), lex)
        assert a == b

    def test_pairs_override_singles(self):
        singles = self._lexicon({ROCKET: 0.9, FIRE: 0.9}).singles
        from emosent.lexicon import PairStats

        pairs = (PairStats(pair=(FIRE, ROCKET), n_posts=50, n_bullish=5, n_bearish=45,
                           bullish_score=0.1, bearish_score=0.9),)
        lex = EmojiLexicon(singles=singles, pairs=pairs, top_k=50, source_size=100)
        body = f"{ROCKET} {FIRE}"
        assert classify_with_lexicon(post(0, body), lex) is LexiconVerdict.BULLISH
        assert (
            classify_with_lexicon(post(0, body), lex, LexiconPolicy.PAIRS_FIRST)
            is LexiconVerdict.BEARISH
        )


class TestEmojiIndex:
    def _ts(self, day, hour=0):
        return datetime(2021, 3, day, hour, tzinfo=timezone.utc)

    def test_daily_ratio(self):
        posts = [
            post(0, f"{ROCKET} up", ts=self._ts(1)),
            post(1, "flat", ts=self._ts(1, 5)),
            post(2, f"{ROCKET}", ts=self._ts(1, 9)),
            post(3, "down", ts=self._ts(1, 23)),
            post(4, f"{ROCKET}", ts=self._ts(2)),
        ]
        series = emoji_index(Corpus(tuple(posts)), ROCKET)
        assert series[0] == (self._ts(1).date(), 0.5)
        assert series[1] == (self._ts(2).date(), 1.0)

    def test_absent_emoji_all_zero(self):
        posts = [post(i, "text", ts=self._ts(1 + i)) for i in range(3)]
        series = emoji_index(Corpus(tuple(posts)), ROCKET)
        assert [r for _, r in series] == [0.0, 0.0, 0.0]

    def test_untimestamped_posts_skipped(self):
        posts = [post(0, ROCKET, ts=None), post(1, ROCKET, ts=self._ts(4))]
        series = emoji_index(Corpus(tuple(posts)), ROCKET)
        assert len(series) == 1

    def test_no_timestamps_error(self):
        with pytest.raises(DataError):
            emoji_index(Corpus((post(0, ROCKET, ts=None),)), ROCKET)


class TestPearson:
    def test_affine_perfect(self):
        a = {k: float(v) for k, v in zip("abcde", (1, 2, 3, 4, 5))}
        b = {k: 2 * v + 3 for k, v in a.items()}
        assert pearson_corr(a, b) == pytest.approx(1.0, abs=1e-12)

    def test_negation(self):
        a = {k: float(v) for k, v in zip("abcd", (1, 4, 2, 8))}
        b = {k: -v for k, v in a.items()}
        assert pearson_corr(a, b) == pytest.approx(-1.0, abs=1e-12)

    def test_hand_five_points(self):
        xs = [1.0, 2.0, 4.0, 5.0, 8.0]
        ys = [2.0, 1.0, 5.0, 4.0, 9.0]
        a = dict(zip("abcde", xs))
        b = dict(zip("abcde", ys))
        n = 5
        mx, my = sum(xs) / n, sum(ys) / n
        sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
        sxx = sum((x - mx) ** 2 for x in xs)
        syy = sum((y - my) ** 2 for y in ys)
        expected = sxy / (sxx * syy) ** 0.5
        assert pearson_corr(a, b) == pytest.approx(expected, abs=1e-12)

    def test_intersection_alignment(self):
        a = {"x": 1.0, "y": 2.0, "z": 3.0, "only_a": 9.0}
        b = {"x": 2.0, "y": 4.0, "z": 6.0, "only_b": -1.0}
        assert pearson_corr(a, b) == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_variance(self):
        with pytest.raises(NumericError):
            pearson_corr({"a": 1.0, "b": 1.0}, {"a": 2.0, "b": 3.0})

    def test_too_few_points(self):
        with pytest.raises(DataError):
            pearson_corr({"a": 1.0}, {"a": 2.0})


class TestLexiconSerialization:
    def test_round_trip(self, tmp_path):
        posts = [
            post(0, f"{ROCKET} {GEM}", BULL),
            post(1, f"{GEM}{FIRE}", BEAR),
            post(2, f"{ROCKET}", BULL),
        ]
        lex = build_lexicon(Corpus(tuple(posts)), top_k=10)
        path = tmp_path / "lex.json"
        save_lexicon(lex, path)
        assert load_lexicon(path) == lex
