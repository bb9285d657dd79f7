import json
from collections import Counter
from datetime import datetime, timezone

import pytest

from emosent.corpus import (
    Corpus,
    DataVariant,
    Post,
    SentimentLabel,
    balance_undersample,
    derive_variant,
    filter_emoji_posts,
    filter_labeled,
    load_posts,
    save_posts,
    split,
)
from emosent.errors import DataError
from emosent.tokenizer import tokenize

ROCKET = "\U0001F680"
MOON = "\U0001F319"
ASTRONAUT = "\U0001F469‍\U0001F680"


def make_posts(labels, body=f"x {ROCKET}"):
    return tuple(
        Post(id=f"p{i}", body=body, label=lab, created_at=None) for i, lab in enumerate(labels)
    )


BULL = SentimentLabel.BULLISH
BEAR = SentimentLabel.BEARISH


class TestLoadPosts:
    def test_jsonl_skips_malformed(self, tmp_path):
        p = tmp_path / "posts.jsonl"
        p.write_text(
            json.dumps({"id": "a", "body": "hello", "label": "bullish"}) + "\n"
            "{this is not json\n"
            + json.dumps({"id": "b", "body": "world", "label": None}) + "\n",
            encoding="utf-8",
        )
        c = load_posts(p)
        assert len(c) == 2
        assert c.skipped_records == 1
        assert "skipped=1" in c.provenance

    def test_empty_file_is_error(self, tmp_path):
        p = tmp_path / "empty.jsonl"
        p.write_text("", encoding="utf-8")
        with pytest.raises(DataError, match="zero parseable"):
            load_posts(p)

    def test_duplicate_ids_error(self, tmp_path):
        p = tmp_path / "dup.jsonl"
        rows = [{"id": "same", "body": "a"}, {"id": "same", "body": "b"}]
        p.write_text("\n".join(json.dumps(r) for r in rows), encoding="utf-8")
        with pytest.raises(DataError, match="duplicate"):
            load_posts(p)

    def test_csv_round_trip_preserves_order(self, tmp_path):
        p = tmp_path / "posts.csv"
        p.write_text(
            "id,created_at,body,label,symbols\n"
            "r1,2021-01-01T00:00:00Z,first post,bullish,BTC|ETH\n"
            f"r2,2021-01-02T12:30:45Z,{ROCKET} second,bearish,AAPL\n"
            "r3,,third no time,,\n"
            "r4,2021-01-03T01:02:03Z,fourth,bullish,\n"
            "r5,bad-timestamp,fifth,bearish,SPY\n",
            encoding="utf-8",
        )
        c = load_posts(p, "csv")
        assert [post.id for post in c.posts] == ["r1", "r2", "r3", "r4", "r5"]
        assert c.posts[0].symbols == ("BTC", "ETH")
        assert c.posts[0].created_at == datetime(2021, 1, 1, tzinfo=timezone.utc)
        assert c.posts[2].label is None and c.posts[2].created_at is None
        # unparseable timestamp keeps the post, timestamp absent
        assert c.posts[4].created_at is None and c.posts[4].label is BEAR

    def test_unknown_label_is_malformed(self, tmp_path):
        p = tmp_path / "labels.jsonl"
        rows = [
            {"id": "a", "body": "ok", "label": "bullish"},
            {"id": "b", "body": "bad", "label": "sideways"},
        ]
        p.write_text("\n".join(json.dumps(r) for r in rows), encoding="utf-8")
        c = load_posts(p)
        assert len(c) == 1 and c.skipped_records == 1

    def test_jsonl_save_load_round_trip(self, tmp_path):
        posts = (
            Post("a", f"body {ROCKET}", datetime(2021, 5, 1, 7, 8, 9, tzinfo=timezone.utc), BULL, ("BTC",)),
            Post("b", "plain", None, None, ()),
        )
        path = tmp_path / "out.jsonl"
        save_posts(Corpus(posts), path)
        again = load_posts(path)
        assert again.posts == posts


class TestFilters:
    def test_filter_emoji_posts(self):
        posts = (
            Post("1", "buy AAPL"),
            Post("2", ROCKET),
            Post("3", f"to the moon {MOON}"),
        )
        kept = filter_emoji_posts(Corpus(posts))
        assert [p.id for p in kept.posts] == ["2", "3"]

    def test_filter_emoji_posts_none(self):
        assert len(filter_emoji_posts(Corpus((Post("1", "text only"),)))) == 0

    def test_zwj_only_post_kept(self):
        assert len(filter_emoji_posts(Corpus((Post("1", ASTRONAUT),)))) == 1

    def test_filter_labeled_mixed(self):
        posts = make_posts([BULL] * 3 + [BEAR] * 2 + [None] * 3)
        assert len(filter_labeled(Corpus(posts))) == 5

    def test_filter_labeled_all_unlabeled(self):
        assert len(filter_labeled(Corpus(make_posts([None] * 4)))) == 0

    def test_filter_labeled_identity(self):
        c = Corpus(make_posts([BULL, BEAR]))
        assert filter_labeled(c).posts == c.posts


class TestBalance:
    def test_majority_undersampled(self):
        c = Corpus(make_posts([BULL] * 85 + [BEAR] * 15))
        balanced = balance_undersample(c, seed=3)
        counts = Counter(p.label for p in balanced.posts)
        assert counts[BULL] == counts[BEAR] == 15

    def test_already_balanced_unchanged(self):
        c = Corpus(make_posts([BULL] * 10 + [BEAR] * 10))
        assert balance_undersample(c, seed=1).posts == c.posts

    def test_deterministic_for_seed(self):
        c = Corpus(make_posts([BULL] * 40 + [BEAR] * 9))
        one = balance_undersample(c, seed=99)
        two = balance_undersample(c, seed=99)
        assert one.posts == two.posts

    def test_minority_kept_whole(self):
        c = Corpus(make_posts([BULL] * 30 + [BEAR] * 7))
        balanced = balance_undersample(c, seed=0)
        bear_ids = {p.id for p in balanced.posts if p.label is BEAR}
        assert bear_ids == {f"p{i}" for i in range(30, 37)}

    def test_single_class_error(self):
        with pytest.raises(DataError):
            balance_undersample(Corpus(make_posts([BULL] * 5)), seed=1)

    def test_unlabeled_error(self):
        with pytest.raises(DataError):
            balance_undersample(Corpus(make_posts([BULL, BEAR, None])), seed=1)


class TestSplit:
    def test_sizes_and_disjoint(self):
        c = Corpus(make_posts([BULL, BEAR] * 50))
        train, test = split(c, 0.2, seed=7)
        assert len(train) == 80 and len(test) == 20
        assert {p.id for p in train.posts} & {p.id for p in test.posts} == set()

    def test_multiset_cover(self):
        c = Corpus(make_posts([BULL, BEAR, None] * 7))
        train, test = split(c, 0.3, seed=5)
        assert Counter(p.id for p in train.posts) + Counter(p.id for p in test.posts) == Counter(
            p.id for p in c.posts
        )

    def test_stratified_balanced_test(self):
        c = Corpus(make_posts([BULL] * 50 + [BEAR] * 50))
        _, test = split(c, 0.2, seed=13)
        counts = Counter(p.label for p in test.posts)
        assert abs(counts[BULL] - counts[BEAR]) <= 1

    def test_different_seeds_differ(self):
        c = Corpus(make_posts([BULL, BEAR] * 50))
        _, test1 = split(c, 0.2, seed=1)
        _, test2 = split(c, 0.2, seed=2)
        assert {p.id for p in test1.posts} != {p.id for p in test2.posts}

    def test_fraction_bounds(self):
        c = Corpus(make_posts([BULL, BEAR]))
        for bad in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(DataError):
                split(c, bad, seed=1)


class TestDeriveVariant:
    def test_mixed_body(self):
        p = Post("1", f"AAPL {ROCKET} moon")
        assert derive_variant(p, DataVariant.TEXT_ONLY) == "AAPL moon"
        assert derive_variant(p, DataVariant.EMOJI_ONLY) == ROCKET
        assert derive_variant(p, DataVariant.TEXT_AND_EMOJI) == p.body

    def test_emoji_only_body(self):
        p = Post("1", f"{ROCKET}{ROCKET}")
        assert derive_variant(p, DataVariant.TEXT_ONLY) == ""
        assert derive_variant(p, DataVariant.EMOJI_ONLY) == f"{ROCKET} {ROCKET}"

    def test_pure_text_body(self):
        p = Post("1", "no emojis  here")
        assert derive_variant(p, DataVariant.EMOJI_ONLY) == ""
        assert derive_variant(p, DataVariant.TEXT_ONLY) == p.body

    @pytest.mark.parametrize(
        "body",
        [
            f"AAPL {ROCKET} moon",
            f"ab{ROCKET}cd",
            f"{ROCKET}{MOON} mixed !! {ASTRONAUT}",
            "plain words only",
            f"$BTC {ROCKET}{ROCKET}{ROCKET} 100k incoming...",
        ],
    )
    def test_variants_partition_tokens(self, body):
        p = Post("1", body)
        original = Counter(t.text for t in tokenize(body))
        text_side = Counter(t.text for t in tokenize(derive_variant(p, DataVariant.TEXT_ONLY)))
        emoji_side = Counter(t.text for t in tokenize(derive_variant(p, DataVariant.EMOJI_ONLY)))
        assert text_side + emoji_side == original
