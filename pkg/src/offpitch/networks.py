"""Network construction: co-occurrence, interactions, bipartite projections."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .graph import WeightedGraph
from .records import Kind, TweetRecord

logger = logging.getLogger(__name__)

INTERACTION_KINDS = ("retweet", "quote", "reply", "mention")

# Default similarity floors for the two projection axes.
USER_MIN_SIMILARITY = 0.45
HASHTAG_MIN_SIMILARITY = 0.1


class UndefinedSimilarityError(ValueError):
    """Cosine similarity is undefined for a zero vector."""


class ConfigError(ValueError):
    """A configuration value is out of range or inconsistent."""


# ---------------------------------------------------------------------------
# Co-occurrence
# ---------------------------------------------------------------------------

def build_hashtag_cooccurrence(corpus: Iterable[TweetRecord]) -> WeightedGraph:
    """Undirected hashtag graph; weight = tweets where both tags appear.

    Each tweet contributes one count to every unordered pair of its
    distinct hashtags, so total edge weight equals the sum over tweets
    of C(n_tags, 2). Single-tag tweets still register the node.
    """
    graph = WeightedGraph(directed=False)
    for record in corpus:
        tags = record.hashtags  # already normalized and de-duplicated
        for tag in tags:
            graph.add_node(tag)
        for a, b in combinations(tags, 2):
            graph.add_edge(a, b, 1.0)
    return graph


# ---------------------------------------------------------------------------
# Interaction networks
# ---------------------------------------------------------------------------

def build_interaction_network(
    corpus: Iterable[TweetRecord], kinds: Sequence[str] | None = None
) -> WeightedGraph:
    """Directed user-to-user network over the given interaction channels.

    Channels are "retweet", "quote", "reply", "mention"; None means all
    four (the union network). Edges point actor -> target and weights
    count events. Mention edges come from originals, quotes and replies
    only; mentions inside a retweet belong to the source text. Records
    of a targeted kind that lack target_user_id are skipped and
    counted, as are self-interactions.
    """
    wanted = set(INTERACTION_KINDS if kinds is None else kinds)
    unknown = wanted - set(INTERACTION_KINDS)
    if unknown:
        raise ConfigError(f"unknown interaction kinds: {sorted(unknown)}")
    graph = WeightedGraph(directed=True)
    skipped_untargeted = 0
    skipped_self = 0
    for record in corpus:
        if record.kind is not Kind.ORIGINAL and record.kind.value in wanted:
            if record.target_user_id is None:
                skipped_untargeted += 1
            elif record.target_user_id == record.user_id:
                skipped_self += 1
            else:
                graph.add_edge(record.user_id, record.target_user_id, 1.0)
        if "mention" in wanted and record.kind is not Kind.RETWEET:
            for mentioned in record.mentioned_user_ids:
                if mentioned == record.user_id:
                    skipped_self += 1
                else:
                    graph.add_edge(record.user_id, mentioned, 1.0)
    if skipped_untargeted or skipped_self:
        logger.info(
            "interaction builder skipped %d untargeted and %d self-directed records",
            skipped_untargeted,
            skipped_self,
        )
    return graph


# ---------------------------------------------------------------------------
# Bipartite matrix
# ---------------------------------------------------------------------------

@dataclass
class BipartiteMatrix:
    """User x hashtag usage counts, both axes sorted for stable indexing."""

    users: list[str]
    hashtags: list[str]
    counts: np.ndarray  # shape (len(users), len(hashtags)), int64

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.shape != (len(self.users), len(self.hashtags)):
            raise ValueError("counts shape does not match axis lengths")

    @property
    def is_empty(self) -> bool:
        return self.counts.size == 0

    def user_index(self) -> dict[str, int]:
        return {u: i for i, u in enumerate(self.users)}

    def hashtag_index(self) -> dict[str, int]:
        return {h: i for i, h in enumerate(self.hashtags)}

    def to_json_dict(self) -> dict:
        ui, hi = np.nonzero(self.counts)
        cells = [
            [int(u), int(h), int(self.counts[u, h])] for u, h in zip(ui.tolist(), hi.tolist())
        ]
        return {"users": list(self.users), "hashtags": list(self.hashtags), "cells": cells}

    @classmethod
    def from_json_dict(cls, payload: dict) -> "BipartiteMatrix":
        users = list(payload["users"])
        hashtags = list(payload["hashtags"])
        counts = np.zeros((len(users), len(hashtags)), dtype=np.int64)
        for u, h, c in payload["cells"]:
            counts[u, h] = c
        return cls(users=users, hashtags=hashtags, counts=counts)


def build_user_hashtag_matrix(
    corpus: Iterable[TweetRecord],
    min_hashtag_uses: int = 20,
    min_user_tweets: int = 2,
) -> BipartiteMatrix:
    """Count hashtag uses per user, then prune rare tags and thin users.

    A cell counts the tweets by that user containing that hashtag.
    Hashtags used fewer than `min_hashtag_uses` times corpus-wide are
    dropped first; then users with fewer than `min_user_tweets` tweets
    (of any kind) are dropped; finally all-zero rows and columns are
    pruned to a fixed point so every remaining row and column has
    support.
    """
    user_tweets: dict[str, int] = {}
    cell: dict[tuple[str, str], int] = {}
    tag_total: dict[str, int] = {}
    for record in corpus:
        user_tweets[record.user_id] = user_tweets.get(record.user_id, 0) + 1
        for tag in record.hashtags:
            cell[(record.user_id, tag)] = cell.get((record.user_id, tag), 0) + 1
            tag_total[tag] = tag_total.get(tag, 0) + 1

    kept_tags = {t for t, n in tag_total.items() if n >= min_hashtag_uses}
    kept_users = {u for u, n in user_tweets.items() if n >= min_user_tweets}

    users = sorted(
        {u for (u, t), n in cell.items() if u in kept_users and t in kept_tags}
    )
    hashtags = sorted(
        {t for (u, t), n in cell.items() if u in kept_users and t in kept_tags}
    )
    counts = np.zeros((len(users), len(hashtags)), dtype=np.int64)
    uix = {u: i for i, u in enumerate(users)}
    hix = {h: i for i, h in enumerate(hashtags)}
    for (u, t), n in cell.items():
        if u in uix and t in hix:
            counts[uix[u], hix[t]] = n

    # Zero-row/column pruning to a fixed point. Dropping rows can zero
    # out columns whose support was only those rows, and vice versa.
    while counts.size:
        row_ok = counts.sum(axis=1) > 0
        col_ok = counts.sum(axis=0) > 0
        if row_ok.all() and col_ok.all():
            break
        users = [u for u, ok in zip(users, row_ok) if ok]
        hashtags = [h for h, ok in zip(hashtags, col_ok) if ok]
        counts = counts[np.ix_(row_ok, col_ok)]
    if not counts.size:
        users, hashtags = [], []
        counts = np.zeros((0, 0), dtype=np.int64)
    return BipartiteMatrix(users=users, hashtags=hashtags, counts=counts)


# ---------------------------------------------------------------------------
# Similarity and projection
# ---------------------------------------------------------------------------

def cosine_similarity(a, b) -> float:
    """Cosine of two nonneg count vectors; raises on a zero vector."""
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape:
        raise ValueError(f"shape mismatch: {va.shape} vs {vb.shape}")
    na = math.sqrt(float(np.dot(va, va)))
    nb = math.sqrt(float(np.dot(vb, vb)))
    if na == 0.0 or nb == 0.0:
        raise UndefinedSimilarityError("cosine similarity undefined for a zero vector")
    return float(np.dot(va, vb)) / (na * nb)


@dataclass
class ProjectionConfig:
    """One-mode projection settings.

    axis: "user" projects rows against rows, "hashtag" columns against
    columns. The permutation null shuffles each user's counts across
    hashtags (row-wise) in both cases, preserving per-user volume.
    """

    axis: str
    min_similarity: float | None = None
    alpha: float = 0.05
    permutations: int = 1000
    seed: int = 0
    binary: bool = False

    def __post_init__(self):
        if self.axis not in ("user", "hashtag"):
            raise ConfigError(f"axis must be 'user' or 'hashtag', got {self.axis!r}")
        if self.min_similarity is None:
            self.min_similarity = (
                USER_MIN_SIMILARITY if self.axis == "user" else HASHTAG_MIN_SIMILARITY
            )
        if not 0.0 <= self.min_similarity < 1.0:
            raise ConfigError(f"min_similarity out of [0, 1): {self.min_similarity}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha out of (0, 1): {self.alpha}")
        if self.permutations < 1:
            raise ConfigError(f"permutations must be positive: {self.permutations}")


def project_similarity(matrix: BipartiteMatrix, config: ProjectionConfig) -> WeightedGraph:
    """One-mode similarity projection with a permutation-test filter.

    An edge joins two axis entities when their cosine similarity both
    exceeds config.min_similarity and is significant under the null
    (p < alpha, where p is the fraction of row-shuffled matrices whose
    similarity for that pair reaches the observed one). Edge weight is
    the observed similarity. Node set is the full axis.

    Given equal inputs and seed the result is reproducible to the
    byte: counts and their dot products are exact integers in float64,
    and norms/similarities are single correctly-rounded operations on
    them, so no accumulation-order effects exist.
    """
    graph = WeightedGraph(directed=False)
    ids = matrix.users if config.axis == "user" else matrix.hashtags
    for node in ids:
        graph.add_node(node)
    if matrix.is_empty or len(ids) < 2:
        return graph

    M = matrix.counts.astype(np.float64)
    if config.binary:
        M = (M > 0).astype(np.float64)

    def axis_rows(mat):
        return mat if config.axis == "user" else mat.T

    R = axis_rows(M)
    n = R.shape[0]
    ss = np.einsum("ij,ij->i", R, R)  # exact integers
    norms = np.sqrt(ss)
    dots = R @ R.T  # exact integers
    sims = dots / np.outer(norms, norms)

    iu, ju = np.triu_indices(n, k=1)
    cand = sims[iu, ju] > config.min_similarity
    ci, cj = iu[cand], ju[cand]
    if ci.size == 0:
        return graph
    obs = sims[ci, cj]

    # Full matmul beats gathered einsum once the candidate set is a
    # sizable fraction of all pairs; both paths yield identical floats.
    use_matmul = ci.size > (n * n) // 8
    rng = np.random.default_rng(config.seed)
    counts_ge = np.zeros(ci.size, dtype=np.int64)
    for _ in range(config.permutations):
        P = axis_rows(rng.permuted(M, axis=1))
        ss_p = np.einsum("ij,ij->i", P, P)
        norms_p = np.sqrt(ss_p)
        if use_matmul:
            dots_p = (P @ P.T)[ci, cj]
        else:
            dots_p = np.einsum("ij,ij->i", P[ci], P[cj])
        sims_p = dots_p / (norms_p[ci] * norms_p[cj])
        counts_ge += sims_p >= obs

    pvals = counts_ge / config.permutations
    for k in range(ci.size):
        if pvals[k] < config.alpha:
            graph.add_edge(ids[int(ci[k])], ids[int(cj[k])], float(obs[k]))
    return graph
