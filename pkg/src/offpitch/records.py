"""Core record types and their canonical wire format.

Everything downstream (graph builders, detectors, the synthetic
generator) speaks in these types. The wire format is NDJSON with a
fixed key order so that equal corpora serialize to identical bytes.
"""
from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum


class CorpusFormatError(ValueError):
    """A record (or record line) violates the corpus schema."""


# ---------------------------------------------------------------------------
# Enums
# ---------------------------------------------------------------------------

class Kind(str, Enum):
    ORIGINAL = "original"
    RETWEET = "retweet"
    QUOTE = "quote"
    REPLY = "reply"


class ActorType(str, Enum):
    POLITICAL_PARTY = "political_party"
    POLITICIAN = "politician"
    NEWS_OUTLET = "news_outlet"
    FOOTBALL_CLUB = "football_club"
    FOOTBALLER = "footballer"
    FAN_GROUP = "fan_group"
    BOT_LIKE = "bot_like"
    OTHER = "other"


class Category(str, Enum):
    """Node annotation categories for hashtag-level networks."""

    POLITICAL = "political"
    FOOTBALL = "football"
    LOCATION = "location"
    OTHER = "other"


class Theme(str, Enum):
    """Cluster-level labels assigned to hashtag community groups."""

    POLITICAL = "political"
    FOOTBALL = "football"
    UK_LOCATION = "uk_location"
    OTHER = "other"


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------

def normalize_hashtag(raw: str) -> str:
    """Map a raw hashtag string to its canonical token.

    Strips surrounding whitespace and a single leading '#', casefolds,
    and applies NFC. Returns "" when nothing survives (e.g. a bare
    '#'); callers treat an empty result as a rejected tag.
    """
    token = raw.strip()
    if token.startswith("#"):
        token = token[1:]
    return unicodedata.normalize("NFC", token.casefold())


def _parse_timestamp(value: str) -> datetime:
    # Python 3.10 fromisoformat rejects the 'Z' suffix.
    if value.endswith("Z"):
        value = value[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(value)
    except ValueError as exc:
        raise CorpusFormatError(f"bad timestamp {value!r}: {exc}") from None
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------

# Canonical key order for the NDJSON wire format.
_RECORD_FIELDS = (
    "tweet_id",
    "user_id",
    "timestamp",
    "text",
    "hashtags",
    "kind",
    "target_tweet_id",
    "target_user_id",
    "mentioned_user_ids",
)

_TARGETED_KINDS = (Kind.RETWEET, Kind.QUOTE, Kind.REPLY)


@dataclass
class TweetRecord:
    """One tweet. Hashtags are stored normalized and de-duplicated."""

    tweet_id: str
    user_id: str
    timestamp: datetime
    text: str
    hashtags: list[str]
    kind: Kind
    target_tweet_id: str | None = None
    target_user_id: str | None = None
    mentioned_user_ids: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.tweet_id or not self.user_id:
            raise CorpusFormatError("tweet_id and user_id are required")
        if self.timestamp.tzinfo is None:
            self.timestamp = self.timestamp.replace(tzinfo=timezone.utc)
        else:
            self.timestamp = self.timestamp.astimezone(timezone.utc)
        seen = []
        for raw in self.hashtags:
            token = normalize_hashtag(raw)
            if token and token not in seen:
                seen.append(token)
        self.hashtags = seen

    @property
    def is_interaction(self) -> bool:
        return self.kind in _TARGETED_KINDS


def parse_record(data: dict) -> TweetRecord:
    """Build a TweetRecord from a decoded JSON object.

    Raises CorpusFormatError on missing/ill-typed fields.
    """
    if not isinstance(data, dict):
        raise CorpusFormatError(f"record must be an object, got {type(data).__name__}")
    try:
        tweet_id = data["tweet_id"]
        user_id = data["user_id"]
        timestamp = data["timestamp"]
        text = data["text"]
        kind = data["kind"]
    except KeyError as exc:
        raise CorpusFormatError(f"missing field {exc.args[0]!r}") from None
    if not isinstance(tweet_id, str) or not isinstance(user_id, str):
        raise CorpusFormatError("tweet_id and user_id must be strings")
    if not isinstance(text, str):
        raise CorpusFormatError("text must be a string")
    try:
        kind_val = Kind(kind)
    except ValueError:
        raise CorpusFormatError(f"unknown kind {kind!r}") from None
    hashtags = data.get("hashtags", [])
    if not isinstance(hashtags, list) or not all(isinstance(h, str) for h in hashtags):
        raise CorpusFormatError("hashtags must be a list of strings")
    mentions = data.get("mentioned_user_ids", [])
    if not isinstance(mentions, list) or not all(isinstance(m, str) for m in mentions):
        raise CorpusFormatError("mentioned_user_ids must be a list of strings")
    for key in ("target_tweet_id", "target_user_id"):
        val = data.get(key)
        if val is not None and not isinstance(val, str):
            raise CorpusFormatError(f"{key} must be a string or null")
    return TweetRecord(
        tweet_id=tweet_id,
        user_id=user_id,
        timestamp=_parse_timestamp(timestamp) if isinstance(timestamp, str) else _reject_ts(timestamp),
        text=text,
        hashtags=list(hashtags),
        kind=kind_val,
        target_tweet_id=data.get("target_tweet_id"),
        target_user_id=data.get("target_user_id"),
        mentioned_user_ids=list(mentions),
    )


def _reject_ts(value) -> datetime:
    raise CorpusFormatError(f"timestamp must be an ISO-8601 string, got {type(value).__name__}")


def record_to_dict(record: TweetRecord) -> dict:
    """Record as a plain dict in canonical key order."""
    return {
        "tweet_id": record.tweet_id,
        "user_id": record.user_id,
        "timestamp": record.timestamp.isoformat(),
        "text": record.text,
        "hashtags": list(record.hashtags),
        "kind": record.kind.value,
        "target_tweet_id": record.target_tweet_id,
        "target_user_id": record.target_user_id,
        "mentioned_user_ids": list(record.mentioned_user_ids),
    }


def serialize_record(record: TweetRecord) -> str:
    """One canonical NDJSON line (no trailing newline)."""
    return json.dumps(record_to_dict(record), ensure_ascii=False, separators=(",", ":"))


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------

@dataclass
class UserProfile:
    user_id: str
    display_name: str = ""
    description: str = ""
    verified: bool = False
    annotation: ActorType | None = None


def parse_profile(data: dict) -> UserProfile:
    if not isinstance(data, dict) or "user_id" not in data:
        raise CorpusFormatError("profile must be an object with user_id")
    annotation = data.get("annotation")
    if annotation is not None:
        try:
            annotation = ActorType(annotation)
        except ValueError:
            raise CorpusFormatError(f"unknown actor type {annotation!r}") from None
    return UserProfile(
        user_id=data["user_id"],
        display_name=data.get("display_name", ""),
        description=data.get("description", ""),
        verified=bool(data.get("verified", False)),
        annotation=annotation,
    )


def serialize_profile(profile: UserProfile) -> str:
    payload = {
        "user_id": profile.user_id,
        "display_name": profile.display_name,
        "description": profile.description,
        "verified": profile.verified,
        "annotation": profile.annotation.value if profile.annotation else None,
    }
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


# ---------------------------------------------------------------------------
# Corpus summary
# ---------------------------------------------------------------------------

@dataclass
class CorpusSummary:
    n_tweets: int
    count_by_kind: dict[str, int]
    share_by_kind: dict[str, float]
    n_users: int
    n_hashtags: int
    top_hashtags: list[tuple[str, int]]
    date_range: tuple[datetime, datetime] | None

    def to_json_dict(self) -> dict:
        return {
            "n_tweets": self.n_tweets,
            "count_by_kind": dict(self.count_by_kind),
            "share_by_kind": dict(self.share_by_kind),
            "n_users": self.n_users,
            "n_hashtags": self.n_hashtags,
            "top_hashtags": [[t, c] for t, c in self.top_hashtags],
            "date_range": (
                [self.date_range[0].isoformat(), self.date_range[1].isoformat()]
                if self.date_range
                else None
            ),
        }
