"""Corpus parsing, political classification, and subset extraction."""
from __future__ import annotations

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator

from .records import (
    CorpusFormatError,
    CorpusSummary,
    Kind,
    TweetRecord,
    normalize_hashtag,
    parse_record,
)

logger = logging.getLogger(__name__)

# How many malformed lines get their own warning before we go quiet.
_MAX_LINE_WARNINGS = 10


class LexiconError(ValueError):
    """The lexicon file is malformed or self-contradictory."""


# ---------------------------------------------------------------------------
# Lexicon
# ---------------------------------------------------------------------------

@dataclass(eq=True)
class Lexicon:
    """Political term lists, all entries pre-normalized.

    `excluded` holds deliberately dropped broad terms; they must not
    appear in either active list.
    """

    hashtags: frozenset[str]
    keywords: frozenset[str]
    excluded: frozenset[str] = frozenset()

    def __post_init__(self):
        for name in ("hashtags", "keywords", "excluded"):
            terms = getattr(self, name)
            cleaned = frozenset(normalize_hashtag(t) for t in terms)
            if "" in cleaned:
                raise LexiconError(f"empty term in {name}")
            object.__setattr__(self, name, cleaned)
        clashes = (self.hashtags | self.keywords) & self.excluded
        if clashes:
            raise LexiconError(f"excluded terms also listed as active: {sorted(clashes)}")

    @cached_property
    def _keyword_pattern(self) -> re.Pattern | None:
        if not self.keywords:
            return None
        # Longest-first keeps alternation order deterministic.
        alts = sorted(self.keywords, key=lambda t: (-len(t), t))
        return re.compile(r"\b(?:%s)\b" % "|".join(re.escape(t) for t in alts))

    def match_keywords(self, text: str) -> set[str]:
        """Distinct keywords appearing in `text` on word boundaries."""
        pattern = self._keyword_pattern
        if pattern is None:
            return set()
        return set(pattern.findall(text.casefold()))


def load_lexicon(path) -> Lexicon:
    """Load a lexicon JSON file ({"hashtags": [...], "keywords": [...], "excluded": [...]})."""
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise LexiconError(f"cannot read lexicon {path}: {exc}") from None
    if not isinstance(payload, dict):
        raise LexiconError("lexicon root must be an object")
    def _terms(key):
        value = payload.get(key, [])
        if not isinstance(value, list) or not all(isinstance(t, str) for t in value):
            raise LexiconError(f"{key} must be a list of strings")
        return frozenset(value)
    return Lexicon(
        hashtags=_terms("hashtags"),
        keywords=_terms("keywords"),
        excluded=_terms("excluded"),
    )


# ---------------------------------------------------------------------------
# Stream parsing
# ---------------------------------------------------------------------------

@dataclass
class ParseStats:
    total: int = 0
    parsed: int = 0
    malformed: int = 0

    @property
    def malformed_ratio(self) -> float:
        return self.malformed / self.total if self.total else 0.0


def _iter_lines(source) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            yield from handle
    else:
        yield from source


def parse_stream(source) -> tuple[list[TweetRecord], ParseStats]:
    """Parse an NDJSON corpus from a path or an iterable of lines.

    Malformed lines are counted and skipped (blank lines are ignored
    entirely). If more than half of the non-blank lines are malformed
    the whole stream is rejected with CorpusFormatError. The ratio
    check runs after the stream is exhausted; a streaming reader
    cannot know it earlier.
    """
    records = []
    stats = ParseStats()
    for lineno, line in enumerate(_iter_lines(source), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        stats.total += 1
        try:
            records.append(parse_record(json.loads(stripped)))
        except (json.JSONDecodeError, CorpusFormatError) as exc:
            stats.malformed += 1
            if stats.malformed <= _MAX_LINE_WARNINGS:
                logger.warning("skipping malformed line %d: %s", lineno, exc)
        else:
            stats.parsed += 1
    if stats.malformed > _MAX_LINE_WARNINGS:
        logger.warning("%d malformed lines in total", stats.malformed)
    if stats.total and stats.malformed_ratio > 0.5:
        raise CorpusFormatError(
            f"{stats.malformed}/{stats.total} lines malformed; refusing the stream"
        )
    return records, stats


# ---------------------------------------------------------------------------
# Classification and extraction
# ---------------------------------------------------------------------------

def classify_political(tweet: TweetRecord, lexicon: Lexicon) -> tuple[bool, list[str]]:
    """Decide whether a tweet matches the political lexicon.

    A tweet matches when it carries a lexicon hashtag or its text
    contains a lexicon keyword on word boundaries (case-insensitive;
    "corbynista" does not match "corbyn"). Returns the flag and the
    sorted distinct matched terms.
    """
    hits = {h for h in tweet.hashtags if h in lexicon.hashtags}
    hits |= lexicon.match_keywords(tweet.text)
    hits -= lexicon.excluded
    return (bool(hits), sorted(hits))


def extract_political_subset(
    corpus: Iterable[TweetRecord], lexicon: Lexicon
) -> list[TweetRecord]:
    """Political tweets plus the direct parents of political quotes/replies.

    The parent of a quote or reply is pulled in for context even when
    it does not itself match. Replies *to* political tweets are not
    pulled in. Output preserves input order; running the extraction on
    its own output returns the same list.
    """
    records = list(corpus)
    by_id = {}
    for record in records:
        by_id.setdefault(record.tweet_id, record)

    keep: set[str] = set()
    missing_parents = 0
    for record in records:
        political, _ = classify_political(record, lexicon)
        if not political:
            continue
        keep.add(record.tweet_id)
        if record.kind in (Kind.QUOTE, Kind.REPLY) and record.target_tweet_id:
            if record.target_tweet_id in by_id:
                keep.add(record.target_tweet_id)
            else:
                missing_parents += 1
    if missing_parents:
        logger.info("%d political quotes/replies had parents outside the corpus", missing_parents)
    return [r for r in records if r.tweet_id in keep]


# ---------------------------------------------------------------------------
# Summary
# ---------------------------------------------------------------------------

def summarize(corpus: Iterable[TweetRecord], top_n: int = 15) -> CorpusSummary:
    """Volume, kind mix, user/hashtag counts, top hashtags, date range."""
    records = list(corpus)
    counts = {kind.value: 0 for kind in Kind}
    users = set()
    tag_counts: Counter = Counter()
    first = last = None
    for record in records:
        counts[record.kind.value] += 1
        users.add(record.user_id)
        tag_counts.update(record.hashtags)
        if first is None or record.timestamp < first:
            first = record.timestamp
        if last is None or record.timestamp > last:
            last = record.timestamp
    total = len(records)
    shares = {
        kind: (count / total if total else 0.0) for kind, count in counts.items()
    }
    top = sorted(tag_counts.items(), key=lambda item: (-item[1], item[0]))[:top_n]
    return CorpusSummary(
        n_tweets=total,
        count_by_kind=counts,
        share_by_kind=shares,
        n_users=len(users),
        n_hashtags=len(tag_counts),
        top_hashtags=top,
        date_range=(first, last) if first is not None else None,
    )
