"""Infiltration detectors: hashtag hijacks, embedded activism, megaphones.

Each detector consumes pipeline products (subset corpus, annotations,
networks, partitions) and emits typed findings with the evidence and
thresholds that produced them, so results are auditable after the run.
"""
from __future__ import annotations

import logging
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .communities import Partition
from .graph import WeightedGraph
from .records import Category, Kind, TweetRecord, UserProfile

logger = logging.getLogger(__name__)


class UndefinedRateError(ValueError):
    """An affiliation rate has an empty denominator."""


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass
class HijackConfig:
    min_engagement: int = 100
    max_affiliation_ratio: float = 0.25

    def __post_init__(self):
        if self.min_engagement < 1:
            raise ValueError(f"min_engagement must be >= 1, got {self.min_engagement}")
        if not 0.0 < self.max_affiliation_ratio <= 1.0:
            raise ValueError(
                f"max_affiliation_ratio out of (0, 1]: {self.max_affiliation_ratio}"
            )


@dataclass
class ActivismConfig:
    min_cluster_size: int = 10
    min_retweet_rate_lift: float = 0.2
    min_source_posts: int = 2

    def __post_init__(self):
        if self.min_cluster_size < 1:
            raise ValueError(f"min_cluster_size must be >= 1, got {self.min_cluster_size}")
        if not 0.0 < self.min_retweet_rate_lift <= 1.0:
            raise ValueError(
                f"min_retweet_rate_lift out of (0, 1]: {self.min_retweet_rate_lift}"
            )
        if self.min_source_posts < 1:
            raise ValueError(f"min_source_posts must be >= 1, got {self.min_source_posts}")


@dataclass
class MegaphoneConfig:
    top_k_in_degree: int = 20
    max_topical_posts: int = 5
    min_in_degree: float = 10.0

    def __post_init__(self):
        if self.top_k_in_degree < 1:
            raise ValueError(f"top_k_in_degree must be >= 1, got {self.top_k_in_degree}")
        if self.max_topical_posts < 0:
            raise ValueError(f"max_topical_posts must be >= 0, got {self.max_topical_posts}")
        if self.min_in_degree < 0:
            raise ValueError(f"min_in_degree must be >= 0, got {self.min_in_degree}")


@dataclass
class DetectorConfig:
    hijack: HijackConfig = field(default_factory=HijackConfig)
    activism: ActivismConfig = field(default_factory=ActivismConfig)
    megaphone: MegaphoneConfig = field(default_factory=MegaphoneConfig)


@dataclass
class AffiliationProfile:
    """Who counts as an affiliated audience member for a domain hashtag."""

    domain: str
    keywords: list[str]
    baseline_rate: float

    def __post_init__(self):
        if not 0.0 <= self.baseline_rate <= 1.0:
            raise ValueError(f"baseline_rate out of [0, 1]: {self.baseline_rate}")

    @cached_property
    def _pattern(self) -> re.Pattern | None:
        terms = [t.casefold() for t in self.keywords if t]
        if not terms:
            return None
        alts = sorted(terms, key=lambda t: (-len(t), t))
        return re.compile(r"\b(?:%s)\b" % "|".join(re.escape(t) for t in alts))

    def matches(self, description: str) -> bool:
        return bool(self._pattern and self._pattern.search(description.casefold()))


@dataclass
class InfluenceFinding:
    kind: str
    subject: str
    score: float
    evidence: dict
    thresholds: dict

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "subject": self.subject,
            "score": self.score,
            "evidence": self.evidence,
            "thresholds": self.thresholds,
        }


# ---------------------------------------------------------------------------
# Audience affiliation
# ---------------------------------------------------------------------------

def audience_affiliation(
    tweet_id: str,
    corpus: Iterable[TweetRecord],
    profiles: dict[str, UserProfile],
    profile: AffiliationProfile,
) -> float:
    """Share of a tweet's profiled retweeters whose bio matches the domain.

    Only distinct retweeters with a profile enter the denominator.
    Raises UndefinedRateError when there are none.
    """
    retweeters = {
        r.user_id
        for r in corpus
        if r.kind is Kind.RETWEET and r.target_tweet_id == tweet_id
    }
    profiled = [profiles[u] for u in retweeters if u in profiles]
    if not profiled:
        raise UndefinedRateError(f"no profiled retweeters for tweet {tweet_id}")
    matched = sum(1 for p in profiled if profile.matches(p.description))
    return matched / len(profiled)


# ---------------------------------------------------------------------------
# Hijack detection
# ---------------------------------------------------------------------------

def detect_hijacks(
    corpus: Iterable[TweetRecord],
    annotations: dict[str, Category],
    profiles: dict[str, UserProfile],
    affiliations: dict[str, AffiliationProfile],
    config: DetectorConfig,
) -> list[InfluenceFinding]:
    """Tweets that ride a domain hashtag to push political content.

    A finding needs (a) football and political hashtags on the same
    tweet, (b) combined retweet+quote engagement at or above
    min_engagement with at least one retweet, and (c) an audience whose
    affiliation rate is at most max_affiliation_ratio of the domain
    baseline. The mechanism under test is a retweet wave, so quote-only
    engagement never qualifies. When no baseline or no profiled
    retweeters exist, criteria (a) and (b) alone emit the finding with
    the affiliation criterion marked unevaluated.
    """
    records = list(corpus)
    cfg = config.hijack
    retweet_count: Counter = Counter()
    quote_count: Counter = Counter()
    retweeters: dict[str, Counter] = defaultdict(Counter)
    for r in records:
        if r.target_tweet_id is None:
            continue
        if r.kind is Kind.RETWEET:
            retweet_count[r.target_tweet_id] += 1
            retweeters[r.target_tweet_id][r.user_id] += 1
        elif r.kind is Kind.QUOTE:
            quote_count[r.target_tweet_id] += 1

    findings = []
    for r in records:
        football = [t for t in r.hashtags if annotations.get(t) is Category.FOOTBALL]
        political = [t for t in r.hashtags if annotations.get(t) is Category.POLITICAL]
        if not football or not political:
            continue
        engagement = retweet_count[r.tweet_id] + quote_count[r.tweet_id]
        if engagement < cfg.min_engagement or retweet_count[r.tweet_id] == 0:
            continue

        domain = next((t for t in football if t in affiliations), None)
        rate = None
        baseline = None
        evaluated = False
        if domain is not None:
            baseline = affiliations[domain].baseline_rate
            try:
                rate = audience_affiliation(
                    r.tweet_id, records, profiles, affiliations[domain]
                )
                evaluated = True
            except UndefinedRateError:
                logger.info("tweet %s: no profiled retweeters", r.tweet_id)
        if evaluated and rate > cfg.max_affiliation_ratio * baseline:
            continue

        repeats = {
            u: int(n)
            for u, n in sorted(
                retweeters[r.tweet_id].items(), key=lambda kv: (-kv[1], kv[0])
            )
            if n >= 2
        }
        findings.append(
            InfluenceFinding(
                kind="hijack",
                subject=r.tweet_id,
                score=float(engagement),
                evidence={
                    "author": r.user_id,
                    "football_hashtags": football,
                    "political_hashtags": political,
                    "retweets": int(retweet_count[r.tweet_id]),
                    "quotes": int(quote_count[r.tweet_id]),
                    "affiliation_rate": rate,
                    "baseline_rate": baseline,
                    "affiliation_evaluated": evaluated,
                    "repeat_retweeters": repeats,
                },
                thresholds={
                    "min_engagement": cfg.min_engagement,
                    "max_affiliation_ratio": cfg.max_affiliation_ratio,
                },
            )
        )
    findings.sort(key=lambda f: (-f.score, f.subject))
    return findings


# ---------------------------------------------------------------------------
# Activist cluster detection
# ---------------------------------------------------------------------------

def detect_activist_clusters(
    retweet_graph: WeightedGraph,
    user_partition: Partition,
    corpus: Iterable[TweetRecord],
    config: DetectorConfig,
) -> list[InfluenceFinding]:
    """Retweet-network communities that mostly amplify instead of post.

    A community of at least min_cluster_size users is flagged when its
    members' retweet share of authored tweets exceeds the rest of the
    network's share by at least min_retweet_rate_lift, and members'
    within-community retweets spread over at least min_source_posts
    distinct source tweets. The spread requirement separates grassroots
    amplification of a message set from a wave hammering a single tweet.
    The community is excluded from its own baseline; a tiny tight
    cluster should not be compared against numbers it dominates.
    """
    cfg = config.activism
    records = list(corpus)
    tweets: Counter = Counter()
    retweets: Counter = Counter()
    for r in records:
        tweets[r.user_id] += 1
        if r.kind is Kind.RETWEET:
            retweets[r.user_id] += 1
    total_tweets = sum(tweets.values())
    total_retweets = sum(retweets.values())

    assignment = user_partition.assignment
    source_posts: dict[int, set] = defaultdict(set)
    for r in records:
        if r.kind is not Kind.RETWEET or r.target_user_id is None:
            continue
        comm = assignment.get(r.user_id)
        if comm is not None and assignment.get(r.target_user_id) == comm:
            source_posts[comm].add(r.target_tweet_id)

    findings = []
    for comm, members in user_partition.communities().items():
        if len(members) < cfg.min_cluster_size:
            continue
        ct = sum(tweets.get(u, 0) for u in members)
        cr = sum(retweets.get(u, 0) for u in members)
        if ct == 0:
            logger.info("community %s has no authored tweets in the corpus", comm)
            continue
        rest_t = total_tweets - ct
        rest_r = total_retweets - cr
        if rest_t == 0:
            logger.info("community %s covers the whole corpus; no baseline", comm)
            continue
        community_rate = cr / ct
        rest_rate = rest_r / rest_t
        lift = community_rate - rest_rate
        if lift < cfg.min_retweet_rate_lift:
            continue
        n_sources = len(source_posts.get(comm, ()))
        if n_sources < cfg.min_source_posts:
            logger.info(
                "community %s amplifies only %d source post(s); skipped", comm, n_sources
            )
            continue
        inner = retweet_graph.subgraph(members)
        roots = sorted(
            ((u, inner.in_degree(u, weighted=True)) for u in inner.nodes()),
            key=lambda kv: (-kv[1], str(kv[0])),
        )[:3]
        findings.append(
            InfluenceFinding(
                kind="activist_cluster",
                subject=str(comm),
                score=float(lift),
                evidence={
                    "size": len(members),
                    "community_tweets": ct,
                    "community_retweets": cr,
                    "community_retweet_rate": community_rate,
                    "rest_retweet_rate": rest_rate,
                    "source_posts": n_sources,
                    "cascade_roots": [[str(u), float(d)] for u, d in roots],
                },
                thresholds={
                    "min_cluster_size": cfg.min_cluster_size,
                    "min_retweet_rate_lift": cfg.min_retweet_rate_lift,
                    "min_source_posts": cfg.min_source_posts,
                },
            )
        )
    findings.sort(key=lambda f: (-f.score, f.subject))
    return findings


# ---------------------------------------------------------------------------
# Megaphone detection
# ---------------------------------------------------------------------------

MEGAPHONE_NETWORKS = ("quote", "reply", "mention")


def detect_megaphones(
    subnetworks: dict[str, WeightedGraph],
    corpus: Iterable[TweetRecord],
    annotations: dict[str, Category],
    config: DetectorConfig,
    user_partition: Partition | None = None,
) -> list[InfluenceFinding]:
    """Accounts pulled into the conversation without posting about it.

    Flags accounts in the top-k weighted in-degree of at least two of
    the quote/reply/mention networks whose own non-retweet output
    contains at most max_topical_posts football-tagged tweets. Summed
    in-degree over those networks must reach min_in_degree; the tail of
    a top-k list in a sparse network is indistinguishable from noise.
    With a user partition, evidence includes where the mentions come
    from.
    """
    cfg = config.megaphone
    records = list(corpus)
    present = [name for name in MEGAPHONE_NETWORKS if name in subnetworks]
    top_lists: dict[str, list] = {}
    for name in present:
        graph = subnetworks[name]
        scored = sorted(
            ((node, graph.in_degree(node, weighted=True)) for node in graph.nodes()),
            key=lambda kv: (-kv[1], str(kv[0])),
        )
        top_lists[name] = [node for node, _ in scored[: cfg.top_k_in_degree]]

    appearance: Counter = Counter()
    for name in present:
        appearance.update(top_lists[name])
    candidates = sorted((node for node, n in appearance.items() if n >= 2), key=str)
    if not candidates:
        return []

    topical: Counter = Counter()
    for r in records:
        if r.kind is Kind.RETWEET:
            continue
        if any(annotations.get(t) is Category.FOOTBALL for t in r.hashtags):
            topical[r.user_id] += 1

    findings = []
    for node in candidates:
        if topical.get(node, 0) > cfg.max_topical_posts:
            continue
        in_degrees = {
            name: float(subnetworks[name].in_degree(node, weighted=True))
            if node in subnetworks[name]
            else 0.0
            for name in present
        }
        networks_top = sorted(name for name in present if node in top_lists[name])
        if sum(in_degrees[name] for name in networks_top) < cfg.min_in_degree:
            continue
        evidence = {
            "in_degrees": in_degrees,
            "networks_top": networks_top,
            "topical_posts": int(topical.get(node, 0)),
        }
        if user_partition is not None and "mention" in subnetworks:
            graph = subnetworks["mention"]
            concentration: Counter = Counter()
            if node in graph:
                for src in graph.predecessors(node):
                    comm = user_partition.assignment.get(src)
                    concentration[str(comm) if comm is not None else "unassigned"] += 1
            evidence["mention_concentration"] = dict(
                sorted(concentration.items(), key=lambda kv: (-kv[1], kv[0]))
            )
        score = sum(in_degrees[name] for name in networks_top)
        findings.append(
            InfluenceFinding(
                kind="megaphone",
                subject=str(node),
                score=float(score),
                evidence=evidence,
                thresholds={
                    "top_k_in_degree": cfg.top_k_in_degree,
                    "max_topical_posts": cfg.max_topical_posts,
                    "min_in_degree": cfg.min_in_degree,
                },
            )
        )
    findings.sort(key=lambda f: (-f.score, f.subject))
    return findings
