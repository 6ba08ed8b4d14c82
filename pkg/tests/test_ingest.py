import io
import json
from datetime import datetime

import pytest

from lexstable.ingest import (
    Message,
    build_author_corpora,
    clean_text,
    parse_messages,
    parse_timestamp,
    read_corpus,
    strip_quoted,
    write_corpus,
)

from conftest import fixture_path


def ts(s):
    return datetime.fromisoformat(s.replace("Z", "+00:00"))


def tweets_stream(records):
    return io.BytesIO(b"\n".join(json.dumps(r).encode() for r in records))


# --- clean_text --------------------------------------------------------

def test_clean_removes_urls():
    assert clean_text("see https://x.co now", "blog") == "see now"


def test_clean_twitter_mentions_and_hashtags():
    assert clean_text("@ann #happy day", "twitter") == "happy day"


def test_clean_empty():
    assert clean_text("", "twitter") == ""


def test_clean_collapses_whitespace():
    assert clean_text("  a \t b \n c  ", "email") == "a b c"


def test_clean_keeps_mentions_outside_twitter():
    assert clean_text("@ann #happy", "forum") == "@ann #happy"


# --- tweets-jsonl ------------------------------------------------------

def test_retweet_prefix_dropped():
    result = parse_messages(tweets_stream([
        {"author_id": "a", "timestamp": "2014-03-01T12:00:00Z", "text": "RT @bob hello"},
    ]), "tweets-jsonl", "twitter")
    assert result.messages == [] and result.filtered == 1


def test_retweet_markers_dropped():
    result = parse_messages(tweets_stream([
        {"author_id": "a", "timestamp": "2014-03-01T12:00:00Z", "text": "x", "retweeted": True},
        {"author_id": "a", "timestamp": "2014-03-01T12:01:00Z", "text": "y",
         "retweeted_status": {"id": 1}},
        {"author_id": "a", "timestamp": "2014-03-01T12:02:00Z", "text": "keep me"},
    ]), "tweets-jsonl", "twitter")
    assert [m.text for m in result.messages] == ["keep me"]
    assert result.filtered == 2


def test_non_english_dropped_untagged_kept():
    result = parse_messages(tweets_stream([
        {"author_id": "a", "timestamp": "2014-03-01T12:00:00Z", "text": "hola", "lang": "es"},
        {"author_id": "a", "timestamp": "2014-03-01T12:01:00Z", "text": "hello", "lang": "en"},
        {"author_id": "a", "timestamp": "2014-03-01T12:02:00Z", "text": "no tag"},
    ]), "tweets-jsonl", "twitter")
    assert [m.text for m in result.messages] == ["hello", "no tag"]
    assert result.filtered == 1


def test_classic_user_and_created_at_keys():
    result = parse_messages(tweets_stream([
        {"user": {"id_str": "123"}, "created_at": "Wed Aug 27 13:08:45 +0000 2008",
         "text": "old style tweet"},
    ]), "tweets-jsonl", "twitter")
    m = result.messages[0]
    assert m.author_id == "123"
    assert m.timestamp == ts("2008-08-27T13:08:45Z")


def test_malformed_records_are_counted_not_fatal():
    stream = io.BytesIO(
        b'{"author_id": "a", "timestamp": "2014-03-01T12:00:00Z", "text": "ok"}\n'
        b'this is not json\n'
        b'{"author_id": "a", "text": "missing timestamp"}\n'
    )
    result = parse_messages(stream, "tweets-jsonl", "twitter")
    assert len(result.messages) == 1
    assert result.skipped == 2


# --- generic-jsonl -----------------------------------------------------

def test_generic_jsonl_drop_rule():
    records = [
        {"author_id": "a", "timestamp": "2014-03-01T12:00:00Z", "text": "one"},
        {"author_id": "a", "timestamp": "2014-03-01T12:01:00Z", "text": "two"},
        {"author_id": "b", "timestamp": "2014-03-01T12:02:00Z", "text": "three"},
        {"author_id": "b", "text": "no timestamp"},
    ]
    result = parse_messages(tweets_stream(records), "generic-jsonl", "forum")
    assert len(result.messages) == 3
    assert result.skipped == 1


def test_generic_jsonl_record_medium_wins():
    result = parse_messages(tweets_stream([
        {"author_id": "a", "timestamp": "2014-03-01T12:00:00Z", "text": "x", "medium": "wiki"},
    ]), "generic-jsonl", "forum")
    assert result.messages[0].medium == "wiki"


# --- mbox --------------------------------------------------------------

def test_quote_and_signature_stripping_rules():
    assert strip_quoted("I agree.\n> previous quoted line\n-- \nsig") == "I agree."
    assert strip_quoted("keep\n-----Original Message-----\ngone") == "keep"
    assert strip_quoted("keep\nOn Mon, Mar 3, Alice wrote:\n> gone") == "keep"


def test_mbox_parsing():
    with open(fixture_path("sample.mbox"), "rb") as fh:
        result = parse_messages(fh, "mbox", "email")
    assert len(result.messages) == 3
    assert result.skipped == 1  # message without usable headers
    first = result.messages[0]
    assert first.author_id == "alice@example.com"
    assert first.text == "I agree."
    assert first.word_count == 2
    assert first.timestamp == ts("2014-03-03T09:00:00Z")
    assert result.messages[1].text == (
        "Sounds good, see you at the meeting tomorrow. Bring the numbers please."
    )
    assert result.messages[2].text == "Here is the plan we discussed."


def test_unknown_format_rejected():
    with pytest.raises(ValueError, match="unknown format"):
        parse_messages(io.BytesIO(b""), "csv", "email")


# --- timestamps --------------------------------------------------------

def test_parse_timestamp_variants():
    assert parse_timestamp("2014-03-01T12:00:00Z") == ts("2014-03-01T12:00:00Z")
    assert parse_timestamp("2014-03-01T07:00:00-05:00") == ts("2014-03-01T12:00:00Z")
    assert parse_timestamp(1393675200) == ts("2014-03-01T12:00:00Z")
    assert parse_timestamp("Wed Aug 27 13:08:45 +0000 2008") == ts("2008-08-27T13:08:45Z")
    assert parse_timestamp("not a date") is None
    assert parse_timestamp(None) is None


# --- build_author_corpora ---------------------------------------------

def msg(author, minute, text="w " * 6, medium="twitter"):
    return Message(author, ts(f"2014-03-01T12:{minute:02d}:00Z"), medium, text.strip())


def test_thresholds_are_inclusive():
    messages = [msg("a", i % 60, text="word " * 12) for i in range(100)]
    corpora = build_author_corpora(messages, min_messages=100, min_words=1000)
    assert len(corpora) == 1
    assert corpora[0].total_messages == 100
    assert corpora[0].total_words == 1200


def test_just_below_message_threshold_excluded():
    messages = [msg("a", i % 60, text="word " * 51) for i in range(99)]
    assert sum(m.word_count for m in messages) > 5000
    assert build_author_corpora(messages, min_messages=100, min_words=1000) == []


def test_empty_input():
    assert build_author_corpora([], 1, 0) == []


def test_grouping_sorting_and_tie_stability():
    messages = [
        msg("b", 5),
        msg("a", 10, text="late"),
        msg("a", 1, text="first tie"),
        msg("a", 1, text="second tie"),
        msg("a", 1, text="third tie", medium="email"),
    ]
    corpora = build_author_corpora(messages, 1, 0)
    assert [(c.author_id, c.medium) for c in corpora] == [
        ("a", "email"), ("a", "twitter"), ("b", "twitter")]
    twitter_a = corpora[1]
    assert [m.text for m in twitter_a.messages] == ["first tie", "second tie", "late"]
    stamps = [m.timestamp for m in twitter_a.messages]
    assert stamps == sorted(stamps)


def test_validation():
    with pytest.raises(ValueError):
        build_author_corpora([], 0, 0)
    with pytest.raises(ValueError):
        build_author_corpora([], 1, -1)


# --- canonical corpus IO ----------------------------------------------

def test_corpus_roundtrip_and_determinism(tmp_path):
    messages = [
        msg("bob", 3, text="irrelevant detail"),
        msg("alice", 5, text="hello world"),
        msg("alice", 4, text="early message"),
    ]
    p1 = tmp_path / "c1.jsonl"
    p2 = tmp_path / "c2.jsonl"
    write_corpus(messages, p1)
    result = read_corpus(p1)
    assert [m.author_id for m in result.messages] == ["alice", "alice", "bob"]
    assert result.skipped == 0
    write_corpus(result.messages, p2)
    assert p1.read_bytes() == p2.read_bytes()

    lines = [json.loads(line) for line in p1.read_text().splitlines()]
    assert set(lines[0]) == {"author_id", "timestamp", "medium", "text"}
    assert lines[0]["timestamp"] == "2014-03-01T12:04:00Z"


def test_rebuild_is_idempotent(tmp_path):
    messages = [msg("a", i, text="some words here") for i in range(5)]
    corpora = build_author_corpora(messages, 1, 0)
    path = tmp_path / "c.jsonl"
    write_corpus([m for c in corpora for m in c.messages], path)
    rebuilt = build_author_corpora(read_corpus(path).messages, 1, 0)
    assert [(c.author_id, c.total_messages, c.total_words) for c in rebuilt] == \
           [(c.author_id, c.total_messages, c.total_words) for c in corpora]
    assert [[m.text for m in c.messages] for c in rebuilt] == \
           [[m.text for m in c.messages] for c in corpora]


def test_no_output_tweet_starts_with_rt():
    records = [
        {"author_id": "a", "timestamp": "2014-03-01T12:00:00Z", "text": f"RT @u{i} spam"}
        for i in range(20)
    ] + [
        {"author_id": "a", "timestamp": "2014-03-01T12:30:00Z", "text": "fine tweet"},
    ]
    result = parse_messages(tweets_stream(records), "tweets-jsonl", "twitter")
    assert all(not m.text.startswith("RT @") for m in result.messages)
    assert len(result.messages) == 1


def test_word_count_matches_tokenizer():
    m = Message("a", ts("2014-03-01T12:00:00Z"), "twitter", "I'm happy, so happy!")
    assert m.word_count == 4
