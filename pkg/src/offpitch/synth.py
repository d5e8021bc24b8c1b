"""Synthetic corpus generation with plantable infiltration campaigns.

The generator writes down what it planted (per-tweet political flags,
user community labels, campaign membership), so detector behaviour can
be scored against exact ground truth. Same config and seed give the
same corpus, byte for byte.
"""
from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

from .records import Kind, TweetRecord, UserProfile, ActorType

PLANT_KINDS = ("hijack", "activism", "megaphone")

_KIND_ORDER = (Kind.ORIGINAL, Kind.RETWEET, Kind.QUOTE, Kind.REPLY)

BACKGROUND = "background"


class SynthConfigError(ValueError):
    """The generator config is inconsistent or infeasible."""


# ---------------------------------------------------------------------------
# Config
# ---------------------------------------------------------------------------

@dataclass
class CommunitySpec:
    name: str
    size: int
    vocabulary: list[str]
    political_fraction: float
    profile_keywords: list[str] = field(default_factory=list)
    profile_keyword_rate: float = 0.0

    def __post_init__(self):
        if self.size < 1:
            raise SynthConfigError(f"community {self.name}: size must be >= 1")
        if not self.vocabulary:
            raise SynthConfigError(f"community {self.name}: vocabulary is empty")
        if not 0.0 <= self.political_fraction <= 1.0:
            raise SynthConfigError(f"community {self.name}: political_fraction out of [0, 1]")
        if not 0.0 <= self.profile_keyword_rate <= 1.0:
            raise SynthConfigError(f"community {self.name}: profile_keyword_rate out of [0, 1]")


@dataclass
class CampaignSpec:
    kind: str
    params: object = None  # defaulted per kind when None

    def __post_init__(self):
        if self.kind not in PLANT_KINDS:
            raise SynthConfigError(f"unknown campaign kind {self.kind!r}")


@dataclass
class SynthConfig:
    seed: int
    n_tweets: int
    n_users: int
    communities: list[CommunitySpec]
    kind_mix: dict[str, float]
    political_hashtags: list[str]
    background_vocabulary: list[str]
    background_political_fraction: float = 0.05
    mention_rate: float = 0.1
    tags_per_tweet: tuple[int, int] = (1, 3)
    intra_retweet_bias: float = 0.8
    start: datetime = datetime(2017, 5, 1, tzinfo=timezone.utc)
    step_seconds: int = 60
    campaigns: list[CampaignSpec] = field(default_factory=list)

    def __post_init__(self):
        if self.seed is None:
            raise SynthConfigError("seed is required")
        if self.n_tweets < 1:
            raise SynthConfigError("n_tweets must be >= 1")
        committed = sum(c.size for c in self.communities)
        if committed > self.n_users:
            raise SynthConfigError(
                f"community sizes ({committed}) exceed n_users ({self.n_users})"
            )
        mix_keys = set(self.kind_mix)
        expected = {k.value for k in _KIND_ORDER}
        if mix_keys != expected:
            raise SynthConfigError(f"kind_mix must have exactly the keys {sorted(expected)}")
        total = sum(self.kind_mix.values())
        if any(v < 0 for v in self.kind_mix.values()) or abs(total - 1.0) > 1e-9:
            raise SynthConfigError(f"kind_mix shares must be nonnegative and sum to 1, got {total}")
        interactive = sum(
            self.kind_mix[k.value] for k in (Kind.RETWEET, Kind.QUOTE, Kind.REPLY)
        )
        if interactive > 0 and self.kind_mix[Kind.ORIGINAL.value] == 0:
            raise SynthConfigError("interaction kinds need at least some originals to target")
        if not self.background_vocabulary:
            raise SynthConfigError("background_vocabulary is empty")
        political_needed = self.background_political_fraction > 0 or any(
            c.political_fraction > 0 for c in self.communities
        )
        if political_needed and not self.political_hashtags:
            raise SynthConfigError("political_hashtags is empty but political tweets are configured")
        lo, hi = self.tags_per_tweet
        if not (1 <= lo <= hi):
            raise SynthConfigError(f"bad tags_per_tweet range: {self.tags_per_tweet}")
        if not 0.0 <= self.mention_rate <= 1.0:
            raise SynthConfigError("mention_rate out of [0, 1]")
        if not 0.0 <= self.intra_retweet_bias <= 1.0:
            raise SynthConfigError("intra_retweet_bias out of [0, 1]")


# ---------------------------------------------------------------------------
# Ground truth
# ---------------------------------------------------------------------------

@dataclass
class CampaignTruth:
    kind: str
    subject: str
    tweet_ids: list[str]
    user_ids: list[str]

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "subject": self.subject,
            "tweet_ids": list(self.tweet_ids),
            "user_ids": list(self.user_ids),
        }


@dataclass
class GroundTruth:
    user_community: dict[str, str] = field(default_factory=dict)
    political: dict[str, bool] = field(default_factory=dict)
    campaigns: list[CampaignTruth] = field(default_factory=list)

    def merge(self, delta: "GroundTruth") -> None:
        self.user_community.update(delta.user_community)
        self.political.update(delta.political)
        self.campaigns.extend(delta.campaigns)

    def to_json_dict(self) -> dict:
        return {
            "user_community": self.user_community,
            "political": self.political,
            "campaigns": [c.to_json_dict() for c in self.campaigns],
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "GroundTruth":
        return cls(
            user_community=dict(payload.get("user_community", {})),
            political=dict(payload.get("political", {})),
            campaigns=[
                CampaignTruth(
                    kind=c["kind"],
                    subject=c["subject"],
                    tweet_ids=list(c["tweet_ids"]),
                    user_ids=list(c["user_ids"]),
                )
                for c in payload.get("campaigns", [])
            ],
        )


# ---------------------------------------------------------------------------
# Base corpus generation
# ---------------------------------------------------------------------------

def _allocate_kinds(mix: dict[str, float], n: int, rng: random.Random) -> list[Kind]:
    """Exact largest-remainder allocation of kinds, then a seeded shuffle.

    The first slot is forced to an original so every later interaction
    has a target. Counts match n*share to within rounding, so shares
    land within 1/n of the configured mix.
    """
    quotas = [(kind, mix[kind.value] * n) for kind in _KIND_ORDER]
    counts = {kind: int(q) for kind, q in quotas}
    leftover = n - sum(counts.values())
    by_frac = sorted(
        quotas, key=lambda kq: -(kq[1] - int(kq[1]))
    )  # stable: ties keep _KIND_ORDER
    for kind, _ in by_frac[:leftover]:
        counts[kind] += 1
    kinds: list[Kind] = []
    for kind in _KIND_ORDER:
        kinds.extend([kind] * counts[kind])
    rng.shuffle(kinds)
    if kinds[0] is not Kind.ORIGINAL and counts[Kind.ORIGINAL] > 0:
        swap = kinds.index(Kind.ORIGINAL)
        kinds[0], kinds[swap] = kinds[swap], kinds[0]
    return kinds


def _pick_tags(rng: random.Random, vocab: list[str], lo: int, hi: int) -> list[str]:
    n = min(rng.randint(lo, hi), len(vocab))
    return rng.sample(vocab, n)


def generate_corpus(
    config: SynthConfig,
) -> tuple[list[TweetRecord], list[UserProfile], GroundTruth]:
    """Generate a corpus, its profiles, and exact ground truth.

    Community members tweet mostly from their community vocabulary and
    preferentially retweet within the community; planted campaigns (if
    configured) are appended after the organic stream. A tweet is
    politically flagged in ground truth iff it carries at least one of
    config.political_hashtags, so lexicon classification agrees with
    the truth by construction.
    """
    rng = random.Random(config.seed)
    truth = GroundTruth()

    users: list[str] = [f"u{i:05d}" for i in range(config.n_users)]
    community_of: dict[str, str] = {}
    vocab_of: dict[str, list[str]] = {}
    pf_of: dict[str, float] = {BACKGROUND: config.background_political_fraction}
    cursor = 0
    for spec in config.communities:
        pf_of[spec.name] = spec.political_fraction
        vocab_of[spec.name] = list(spec.vocabulary)
        for uid in users[cursor:cursor + spec.size]:
            community_of[uid] = spec.name
        cursor += spec.size
    for uid in users[cursor:]:
        community_of[uid] = BACKGROUND
    vocab_of[BACKGROUND] = list(config.background_vocabulary)

    profiles: list[UserProfile] = []
    spec_by_name = {c.name: c for c in config.communities}
    for i, uid in enumerate(users):
        comm = community_of[uid]
        spec = spec_by_name.get(comm)
        if (
            spec
            and spec.profile_keywords
            and rng.random() < spec.profile_keyword_rate
        ):
            kw = rng.choice(spec.profile_keywords)
            description = f"{kw} fan account m{rng.randrange(1000):03d}"
        else:
            description = f"here for the chat m{rng.randrange(1000):03d}"
        profiles.append(
            UserProfile(user_id=uid, display_name=f"User {i}", description=description)
        )
        truth.user_community[uid] = comm

    kinds = _allocate_kinds(config.kind_mix, config.n_tweets, rng)
    lo, hi = config.tags_per_tweet
    records: list[TweetRecord] = []
    # Non-retweet tweets are retweet/quote/reply targets; track by community.
    targets_all: list[int] = []
    targets_by_comm: dict[str, list[int]] = {}

    for i, kind in enumerate(kinds):
        tid = f"t{i:06d}"
        author = users[rng.randrange(len(users))]
        comm = community_of[author]
        ts = config.start + timedelta(seconds=i * config.step_seconds)

        if kind is Kind.RETWEET:
            pool = targets_by_comm.get(comm)
            if pool and rng.random() < config.intra_retweet_bias:
                target = records[pool[rng.randrange(len(pool))]]
            else:
                target = records[targets_all[rng.randrange(len(targets_all))]]
            political = truth.political[target.tweet_id]
            record = TweetRecord(
                tweet_id=tid,
                user_id=author,
                timestamp=ts,
                text=f"rt @{target.user_id}: {target.text}",
                hashtags=list(target.hashtags),
                kind=Kind.RETWEET,
                target_tweet_id=target.tweet_id,
                target_user_id=target.user_id,
            )
        else:
            political = rng.random() < pf_of[comm]
            tags = _pick_tags(rng, vocab_of[comm], lo, hi)
            if political:
                extra = min(rng.randint(1, 2), len(config.political_hashtags))
                tags = tags + rng.sample(config.political_hashtags, extra)
            mentioned: list[str] = []
            if rng.random() < config.mention_rate:
                other = users[rng.randrange(len(users))]
                if other != author:
                    mentioned.append(other)
            target = None
            if kind in (Kind.QUOTE, Kind.REPLY):
                target = records[targets_all[rng.randrange(len(targets_all))]]
            prefix = " ".join(f"@{m}" for m in mentioned)
            body = " ".join(f"#{t}" for t in tags)
            text = f"{prefix} {body} m{rng.randrange(1000):03d}".strip()
            record = TweetRecord(
                tweet_id=tid,
                user_id=author,
                timestamp=ts,
                text=text,
                hashtags=tags,
                kind=kind,
                target_tweet_id=target.tweet_id if target else None,
                target_user_id=target.user_id if target else None,
                mentioned_user_ids=mentioned,
            )
        truth.political[tid] = bool(political)
        records.append(record)
        if kind is not Kind.RETWEET:
            targets_all.append(i)
            targets_by_comm.setdefault(comm, []).append(i)

    # Campaigns recruit engagement only from the organic population so
    # consecutively planted campaigns stay independent of each other.
    organic_users = sorted({r.user_id for r in records})
    for spec in config.campaigns:
        records, profiles, delta = plant_campaign(
            records, profiles, spec.kind, spec.params, rng, audience=organic_users
        )
        truth.merge(delta)
    return records, profiles, truth


# ---------------------------------------------------------------------------
# Campaign parameter sets
# ---------------------------------------------------------------------------

@dataclass
class HijackParams:
    domain_hashtag: str
    political_hashtags: list[str]
    affiliation_keywords: list[str]
    n_retweets: int = 1413
    n_quotes: int = 205
    audience_affiliation_rate: float = 0.008
    n_bot_repeats: int = 11

    def __post_init__(self):
        if not self.domain_hashtag or not self.political_hashtags:
            raise SynthConfigError("hijack needs a domain hashtag and political hashtags")
        if self.n_retweets < 1:
            raise SynthConfigError("hijack n_retweets must be >= 1")
        if self.n_quotes < 0:
            raise SynthConfigError("hijack n_quotes must be >= 0")
        if not 0.0 <= self.audience_affiliation_rate <= 1.0:
            raise SynthConfigError("audience_affiliation_rate out of [0, 1]")
        if self.n_bot_repeats < 0 or (
            self.n_bot_repeats > self.n_retweets
        ):
            raise SynthConfigError("n_bot_repeats out of range")


@dataclass
class ActivismParams:
    political_hashtags: list[str]
    n_members: int = 1379
    retweet_rate: float = 0.97
    n_roots: int = 2

    def __post_init__(self):
        if not self.political_hashtags:
            raise SynthConfigError("activism needs political hashtags")
        if self.n_roots < 1:
            raise SynthConfigError("activism n_roots must be >= 1")
        if self.n_members <= self.n_roots:
            raise SynthConfigError("activism cluster must be larger than its root set")
        if not 0.0 < self.retweet_rate < 1.0:
            raise SynthConfigError("retweet_rate must be strictly between 0 and 1")


@dataclass
class MegaphoneParams:
    political_hashtags: list[str]
    football_hashtags: list[str]
    n_mentions: int = 948
    n_replies: int = 300
    n_quotes: int = 250
    n_topical_posts: int = 1

    def __post_init__(self):
        if not self.political_hashtags or not self.football_hashtags:
            raise SynthConfigError("megaphone needs political and football hashtags")
        if self.n_mentions < 1:
            raise SynthConfigError("megaphone without mentions is degenerate")
        if self.n_replies < 0 or self.n_quotes < 0:
            raise SynthConfigError("reply/quote counts must be >= 0")
        if self.n_topical_posts < 1:
            raise SynthConfigError("subject needs at least one post to be replied/quoted at")


# ---------------------------------------------------------------------------
# Planting
# ---------------------------------------------------------------------------

def plant_campaign(
    corpus: list[TweetRecord],
    profiles: list[UserProfile],
    kind: str,
    params=None,
    rng: random.Random | int | None = None,
    audience: Sequence[str] | None = None,
) -> tuple[list[TweetRecord], list[UserProfile], GroundTruth]:
    """Append one campaign to a corpus; returns new lists plus the truth delta.

    `params` carries the kind's parameter dataclass and is required. `rng`
    may be a seed or a live Random (generate_corpus threads its own
    through so whole-corpus generation stays one deterministic stream).
    `audience` restricts which existing users a campaign recruits for
    engagement events; by default any corpus author qualifies, which can
    tangle consecutively planted campaigns into each other.
    """
    if kind not in PLANT_KINDS:
        raise SynthConfigError(f"unknown campaign kind {kind!r}")
    if rng is None:
        rng = random.Random(0)
    elif isinstance(rng, int):
        rng = random.Random(rng)
    if not corpus:
        raise SynthConfigError("cannot plant a campaign into an empty corpus")
    planter = {
        "hijack": _plant_hijack,
        "activism": _plant_activism,
        "megaphone": _plant_megaphone,
    }[kind]
    return planter(list(corpus), list(profiles), params, rng, audience)


def _after(corpus: list[TweetRecord], offset: int, step: int = 30) -> datetime:
    last = max(r.timestamp for r in corpus)
    return last + timedelta(seconds=(offset + 1) * step)


def _plant_hijack(corpus, profiles, params, rng, audience=None):
    if params is None:
        raise SynthConfigError("hijack params are required (no universal domain hashtag exists)")
    p: HijackParams = params
    base = len(corpus)
    truth = GroundTruth()

    author = f"hju{base:06d}a"
    profiles.append(
        UserProfile(
            user_id=author,
            display_name="Hijack Author",
            description="news and views m000",
        )
    )
    truth.user_community[author] = "campaign:hijack"
    tags = [p.domain_hashtag] + list(p.political_hashtags)
    source_id = f"hj{base:06d}"
    source = TweetRecord(
        tweet_id=source_id,
        user_id=author,
        timestamp=_after(corpus, 0),
        text=" ".join(f"#{t}" for t in tags) + " m001",
        hashtags=tags,
        kind=Kind.ORIGINAL,
    )
    tweet_ids = [source_id]
    user_ids = [author]
    new_records = [source]
    truth.political[source_id] = True

    n_distinct = p.n_retweets - max(p.n_bot_repeats - 1, 0)
    n_affiliated = round(p.audience_affiliation_rate * n_distinct)
    retweeter_ids = [f"hju{base:06d}r{i:05d}" for i in range(n_distinct)]
    affiliated = set(rng.sample(range(n_distinct), n_affiliated))
    events: list[str] = []
    for i, uid in enumerate(retweeter_ids):
        if i in affiliated:
            kw = rng.choice(p.affiliation_keywords)
            description = f"{kw} fan account m{rng.randrange(1000):03d}"
        else:
            description = f"politics first m{rng.randrange(1000):03d}"
        profiles.append(
            UserProfile(user_id=uid, display_name=f"Amp {i}", description=description)
        )
        truth.user_community[uid] = "campaign:hijack"
        user_ids.append(uid)
        events.append(uid)
    # The first planted retweeter doubles as the repeat-offender bot.
    if p.n_bot_repeats >= 2 and retweeter_ids:
        events.extend([retweeter_ids[0]] * (p.n_bot_repeats - 1))

    for i, uid in enumerate(events):
        rid = f"hj{base:06d}r{i:05d}"
        new_records.append(
            TweetRecord(
                tweet_id=rid,
                user_id=uid,
                timestamp=_after(corpus, i + 1),
                text=f"rt @{author}: {source.text}",
                hashtags=list(tags),
                kind=Kind.RETWEET,
                target_tweet_id=source_id,
                target_user_id=author,
            )
        )
        truth.political[rid] = True
        tweet_ids.append(rid)

    for i in range(p.n_quotes):
        uid = f"hju{base:06d}q{i:05d}"
        profiles.append(
            UserProfile(
                user_id=uid,
                display_name=f"Quoter {i}",
                description=f"politics first m{rng.randrange(1000):03d}",
            )
        )
        truth.user_community[uid] = "campaign:hijack"
        user_ids.append(uid)
        qid = f"hj{base:06d}q{i:05d}"
        new_records.append(
            TweetRecord(
                tweet_id=qid,
                user_id=uid,
                timestamp=_after(corpus, len(events) + i + 1),
                text=f"this #{p.political_hashtags[0]} m{rng.randrange(1000):03d}",
                hashtags=[p.political_hashtags[0]],
                kind=Kind.QUOTE,
                target_tweet_id=source_id,
                target_user_id=author,
            )
        )
        truth.political[qid] = True
        tweet_ids.append(qid)

    truth.campaigns.append(
        CampaignTruth(kind="hijack", subject=source_id, tweet_ids=tweet_ids, user_ids=user_ids)
    )
    return corpus + new_records, profiles, truth


def _plant_activism(corpus, profiles, params, rng, audience=None):
    if params is None:
        raise SynthConfigError("activism params are required")
    p: ActivismParams = params
    base = len(corpus)
    truth = GroundTruth()

    members = [f"acu{base:06d}m{i:05d}" for i in range(p.n_members)]
    roots = members[: p.n_roots]
    for i, uid in enumerate(members):
        profiles.append(
            UserProfile(
                user_id=uid,
                display_name=f"Member {i}",
                description=f"grassroots m{rng.randrange(1000):03d}",
            )
        )
        truth.user_community[uid] = "campaign:activism"

    # Every non-root member retweets once; post count is set so the
    # cluster's retweet share lands on retweet_rate.
    n_retweets = p.n_members - p.n_roots
    n_posts = max(1, round(n_retweets * (1.0 - p.retweet_rate) / p.retweet_rate))
    posts: list[TweetRecord] = []
    tweet_ids: list[str] = []
    new_records: list[TweetRecord] = []
    for i in range(n_posts):
        uid = roots[i % len(roots)]
        tid = f"ac{base:06d}p{i:05d}"
        extra = min(2, len(p.political_hashtags))
        tags = rng.sample(p.political_hashtags, extra)
        post = TweetRecord(
            tweet_id=tid,
            user_id=uid,
            timestamp=_after(corpus, i),
            text=" ".join(f"#{t}" for t in tags) + f" m{rng.randrange(1000):03d}",
            hashtags=tags,
            kind=Kind.ORIGINAL,
        )
        posts.append(post)
        new_records.append(post)
        truth.political[tid] = True
        tweet_ids.append(tid)

    for i, uid in enumerate(members[p.n_roots:]):
        target = posts[rng.randrange(len(posts))]
        tid = f"ac{base:06d}r{i:05d}"
        new_records.append(
            TweetRecord(
                tweet_id=tid,
                user_id=uid,
                timestamp=_after(corpus, n_posts + i),
                text=f"rt @{target.user_id}: {target.text}",
                hashtags=list(target.hashtags),
                kind=Kind.RETWEET,
                target_tweet_id=target.tweet_id,
                target_user_id=target.user_id,
            )
        )
        truth.political[tid] = True
        tweet_ids.append(tid)

    truth.campaigns.append(
        CampaignTruth(
            kind="activism", subject="campaign:activism", tweet_ids=tweet_ids, user_ids=members
        )
    )
    return corpus + new_records, profiles, truth


def _plant_megaphone(corpus, profiles, params, rng, audience=None):
    if params is None:
        raise SynthConfigError("megaphone params are required")
    p: MegaphoneParams = params
    base = len(corpus)
    truth = GroundTruth()

    if audience is not None:
        base_users = sorted(set(audience))
    else:
        base_users = sorted({r.user_id for r in corpus})
    if not base_users:
        raise SynthConfigError("megaphone needs existing users to mention the subject")

    subject = f"mgu{base:06d}s"
    profiles.append(
        UserProfile(
            user_id=subject,
            display_name="Subject",
            description="public figure m000",
            verified=True,
            annotation=ActorType.POLITICIAN,
        )
    )
    truth.user_community[subject] = "campaign:megaphone"
    tweet_ids: list[str] = []
    new_records: list[TweetRecord] = []

    # Subject's own rare topical posts; tagged both ways so they stay in
    # the political subset and count against max_topical_posts.
    posts: list[TweetRecord] = []
    for i in range(p.n_topical_posts):
        tid = f"mg{base:06d}p{i:05d}"
        tags = [rng.choice(p.football_hashtags), rng.choice(p.political_hashtags)]
        post = TweetRecord(
            tweet_id=tid,
            user_id=subject,
            timestamp=_after(corpus, i),
            text=" ".join(f"#{t}" for t in tags) + f" m{rng.randrange(1000):03d}",
            hashtags=tags,
            kind=Kind.ORIGINAL,
        )
        posts.append(post)
        new_records.append(post)
        truth.political[tid] = True
        tweet_ids.append(tid)

    offset = p.n_topical_posts
    for i in range(p.n_mentions):
        uid = base_users[rng.randrange(len(base_users))]
        tid = f"mg{base:06d}m{i:05d}"
        tag = rng.choice(p.political_hashtags)
        new_records.append(
            TweetRecord(
                tweet_id=tid,
                user_id=uid,
                timestamp=_after(corpus, offset + i),
                text=f"@{subject} #{tag} m{rng.randrange(1000):03d}",
                hashtags=[tag],
                kind=Kind.ORIGINAL,
                mentioned_user_ids=[subject],
            )
        )
        truth.political[tid] = True
        tweet_ids.append(tid)

    offset += p.n_mentions
    for i in range(p.n_replies):
        uid = base_users[rng.randrange(len(base_users))]
        tid = f"mg{base:06d}y{i:05d}"
        tag = rng.choice(p.political_hashtags)
        target = posts[rng.randrange(len(posts))]
        new_records.append(
            TweetRecord(
                tweet_id=tid,
                user_id=uid,
                timestamp=_after(corpus, offset + i),
                text=f"#{tag} m{rng.randrange(1000):03d}",
                hashtags=[tag],
                kind=Kind.REPLY,
                target_tweet_id=target.tweet_id,
                target_user_id=subject,
            )
        )
        truth.political[tid] = True
        tweet_ids.append(tid)

    offset += p.n_replies
    for i in range(p.n_quotes):
        uid = base_users[rng.randrange(len(base_users))]
        tid = f"mg{base:06d}q{i:05d}"
        tag = rng.choice(p.political_hashtags)
        target = posts[rng.randrange(len(posts))]
        new_records.append(
            TweetRecord(
                tweet_id=tid,
                user_id=uid,
                timestamp=_after(corpus, offset + i),
                text=f"#{tag} m{rng.randrange(1000):03d}",
                hashtags=[tag],
                kind=Kind.QUOTE,
                target_tweet_id=target.tweet_id,
                target_user_id=subject,
            )
        )
        truth.political[tid] = True
        tweet_ids.append(tid)

    truth.campaigns.append(
        CampaignTruth(kind="megaphone", subject=subject, tweet_ids=tweet_ids, user_ids=[subject])
    )
    return corpus + new_records, profiles, truth
