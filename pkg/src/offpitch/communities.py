"""Community detection and characterisation.

Louvain here is the classic two-phase loop (greedy local moves, then
aggregation) with a seeded node order, so runs are reproducible and
per-pass modularity can be asserted non-decreasing.
"""
from __future__ import annotations

import logging
import random
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage

from .graph import WeightedGraph
from .networks import BipartiteMatrix
from .records import Category, Theme

logger = logging.getLogger(__name__)

# Fixed category order for composition vectors and clustering features.
CATEGORY_ORDER = (
    Category.POLITICAL.value,
    Category.FOOTBALL.value,
    Category.LOCATION.value,
    Category.OTHER.value,
)

_CATEGORY_THEME = {
    Category.POLITICAL.value: Theme.POLITICAL,
    Category.FOOTBALL.value: Theme.FOOTBALL,
    Category.LOCATION.value: Theme.UK_LOCATION,
    Category.OTHER.value: Theme.OTHER,
}


@dataclass
class Partition:
    """Node-to-community assignment with the run's bookkeeping."""

    assignment: dict
    modularity: float
    resolution: float
    seed: int
    pass_modularity: list[float] = field(default_factory=list)

    def __post_init__(self):
        ids = set(self.assignment.values())
        if ids and ids != set(range(len(ids))):
            raise ValueError("community ids must be dense 0..C-1")

    @property
    def n_communities(self) -> int:
        return len(set(self.assignment.values()))

    def communities(self) -> dict[int, list]:
        groups: dict[int, list] = defaultdict(list)
        for node, comm in self.assignment.items():
            groups[comm].append(node)
        return {c: sorted(members, key=str) for c, members in sorted(groups.items())}


# ---------------------------------------------------------------------------
# Modularity
# ---------------------------------------------------------------------------

def modularity(graph: WeightedGraph, assignment: dict, resolution: float = 1.0) -> float:
    """Weighted Newman modularity of a partition.

    Directed graphs are symmetrized first. Zero-edge graphs score 0 by
    convention. Every graph node must appear in the assignment.
    """
    und = graph.undirected_view()
    m = und.total_edge_weight()
    if m == 0:
        return 0.0
    sigma_tot: dict = defaultdict(float)
    for node in und.nodes():
        if node not in assignment:
            raise ValueError(f"node {node!r} missing from assignment")
        sigma_tot[assignment[node]] += und.degree(node, weighted=True)
    w_in: dict = defaultdict(float)
    for u, v, w in und.edges():
        if assignment[u] == assignment[v]:
            w_in[assignment[u]] += w
    two_m = 2.0 * m
    total = 0.0
    for comm, sig in sigma_tot.items():
        total += w_in.get(comm, 0.0) / m - resolution * (sig / two_m) ** 2
    return total


# ---------------------------------------------------------------------------
# Louvain
# ---------------------------------------------------------------------------

def _local_move(adj, k, node2com, sigma_tot, m2, resolution, rng) -> bool:
    """Sweep nodes (seeded shuffle) until no move improves modularity."""
    n = len(adj)
    improved_any = False
    moved = True
    while moved:
        moved = False
        order = list(range(n))
        rng.shuffle(order)
        for i in order:
            ci = node2com[i]
            neigh_w: dict = defaultdict(float)
            for j, w in adj[i].items():
                if j != i:
                    neigh_w[node2com[j]] += w
            sigma_tot[ci] -= k[i]
            best_c = ci
            best_gain = neigh_w.get(ci, 0.0) - resolution * sigma_tot[ci] * k[i] / m2
            for c in sorted(neigh_w):
                if c == ci:
                    continue
                gain = neigh_w[c] - resolution * sigma_tot[c] * k[i] / m2
                if gain > best_gain:
                    best_gain = gain
                    best_c = c
            sigma_tot[best_c] += k[i]
            if best_c != ci:
                node2com[i] = best_c
                moved = True
                improved_any = True
    return improved_any


def louvain(graph: WeightedGraph, resolution: float = 1.0, seed: int = 0) -> Partition:
    """Louvain community detection on the (symmetrized) weighted graph.

    Node sweep order is drawn from `seed`, so equal inputs and seed give
    identical partitions. Community ids are relabeled densely in order
    of first appearance over lexicographically sorted nodes. Per-pass
    modularity is recorded and never decreases.
    """
    if graph.node_count == 0:
        raise ValueError("cannot partition an empty graph")
    und = graph.undirected_view()
    orig_nodes = sorted(und.nodes(), key=str)
    if und.total_edge_weight() == 0:
        assignment = {node: i for i, node in enumerate(orig_nodes)}
        return Partition(
            assignment=assignment,
            modularity=0.0,
            resolution=resolution,
            seed=seed,
            pass_modularity=[0.0],
        )

    rng = random.Random(seed)
    index = {node: i for i, node in enumerate(orig_nodes)}
    # Working graph over int ids; self-loop weight holds intra mass once.
    adj: list[dict[int, float]] = [dict() for _ in orig_nodes]
    for u, v, w in und.edges():
        iu, iv = index[u], index[v]
        if iu == iv:
            adj[iu][iu] = adj[iu].get(iu, 0.0) + w
        else:
            adj[iu][iv] = adj[iu].get(iv, 0.0) + w
            adj[iv][iu] = adj[iv].get(iu, 0.0) + w

    # orig node idx -> current work-graph node
    placement = list(range(len(orig_nodes)))
    pass_mods: list[float] = []

    while True:
        n = len(adj)
        k = [sum(w for j, w in adj[i].items() if j != i) + 2.0 * adj[i].get(i, 0.0) for i in range(n)]
        m2 = sum(k)
        node2com = list(range(n))
        sigma_tot: dict = defaultdict(float)
        for i in range(n):
            sigma_tot[i] = k[i]
        improved = _local_move(adj, k, node2com, sigma_tot, m2, resolution, rng)

        projected = {node: node2com[placement[i]] for i, node in enumerate(orig_nodes)}
        pass_mods.append(modularity(graph, projected, resolution))
        if not improved:
            break

        # Aggregate communities into the next working graph.
        comm_ids = sorted(set(node2com))
        dense = {c: i for i, c in enumerate(comm_ids)}
        new_adj: list[dict[int, float]] = [dict() for _ in comm_ids]
        for i in range(n):
            ci = dense[node2com[i]]
            for j, w in adj[i].items():
                if j < i:
                    continue  # visit each undirected pair once
                cj = dense[node2com[j]]
                if i == j:
                    new_adj[ci][ci] = new_adj[ci].get(ci, 0.0) + w
                elif ci == cj:
                    new_adj[ci][ci] = new_adj[ci].get(ci, 0.0) + w
                else:
                    new_adj[ci][cj] = new_adj[ci].get(cj, 0.0) + w
                    new_adj[cj][ci] = new_adj[cj].get(ci, 0.0) + w
        adj = new_adj
        placement = [dense[node2com[p]] for p in placement]

    # Dense relabel by first appearance over sorted original nodes.
    final = {node: node2com[placement[i]] for i, node in enumerate(orig_nodes)}
    relabel: dict = {}
    for node in orig_nodes:
        comm = final[node]
        if comm not in relabel:
            relabel[comm] = len(relabel)
    assignment = {node: relabel[final[node]] for node in orig_nodes}
    return Partition(
        assignment=assignment,
        modularity=modularity(graph, assignment, resolution),
        resolution=resolution,
        seed=seed,
        pass_modularity=pass_mods,
    )


# ---------------------------------------------------------------------------
# Composition and themes
# ---------------------------------------------------------------------------

@dataclass
class CompositionVector:
    community: int
    size: int
    proportions: dict[str, float]

    def to_json_dict(self) -> dict:
        return {
            "community": self.community,
            "size": self.size,
            "proportions": {cat: self.proportions[cat] for cat in CATEGORY_ORDER},
        }


def community_composition(
    partition: Partition, annotations: dict[str, Category]
) -> list[CompositionVector]:
    """Category share per community; unannotated nodes count as OTHER."""
    out = []
    for comm, members in partition.communities().items():
        counts = {cat: 0 for cat in CATEGORY_ORDER}
        for node in members:
            category = annotations.get(node, Category.OTHER)
            counts[category.value] += 1
        size = len(members)
        out.append(
            CompositionVector(
                community=comm,
                size=size,
                proportions={cat: counts[cat] / size for cat in CATEGORY_ORDER},
            )
        )
    return out


@dataclass
class ThemeAssignment:
    clusters: dict[int, int]
    themes: dict[int, Theme]
    cluster_themes: dict[int, Theme]
    linkage: list[list[float]] | None

    def to_json_dict(self) -> dict:
        return {
            "clusters": {str(c): cl for c, cl in sorted(self.clusters.items())},
            "themes": {str(c): t.value for c, t in sorted(self.themes.items())},
            "cluster_themes": {str(cl): t.value for cl, t in sorted(self.cluster_themes.items())},
            "linkage": self.linkage,
        }


def ward_cluster(vectors: list[CompositionVector], k: int = 4) -> ThemeAssignment:
    """Ward-cluster composition vectors into k groups and name them.

    A cluster takes the theme of the dominant category of its mean
    composition; an exact tie at the top falls back to OTHER. Needs at
    least k vectors.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if len(vectors) < k:
        raise ValueError(f"need at least {k} communities, got {len(vectors)}")
    X = np.array(
        [[vec.proportions[cat] for cat in CATEGORY_ORDER] for vec in vectors],
        dtype=np.float64,
    )
    if len(vectors) == 1:
        labels = np.array([1])
        link = None
    else:
        link_matrix = linkage(X, method="ward")
        labels = fcluster(link_matrix, t=k, criterion="maxclust")
        link = [[float(x) for x in row] for row in link_matrix]

    # Dense relabel in input (community id) order.
    relabel: dict[int, int] = {}
    clusters: dict[int, int] = {}
    for vec, raw in zip(vectors, labels.tolist()):
        if raw not in relabel:
            relabel[raw] = len(relabel)
        clusters[vec.community] = relabel[raw]

    cluster_themes: dict[int, Theme] = {}
    for cluster in sorted(set(clusters.values())):
        rows = [
            X[i] for i, vec in enumerate(vectors) if clusters[vec.community] == cluster
        ]
        mean = np.mean(rows, axis=0)
        top = float(mean.max())
        dominant = [cat for cat, val in zip(CATEGORY_ORDER, mean.tolist()) if val == top]
        if len(dominant) == 1:
            cluster_themes[cluster] = _CATEGORY_THEME[dominant[0]]
        else:
            cluster_themes[cluster] = Theme.OTHER
    themes = {c: cluster_themes[cl] for c, cl in clusters.items()}
    return ThemeAssignment(
        clusters=clusters, themes=themes, cluster_themes=cluster_themes, linkage=link
    )


# ---------------------------------------------------------------------------
# Engagement profiles
# ---------------------------------------------------------------------------

@dataclass
class Sector:
    hashtag_community: int
    theme: Theme
    count: int


@dataclass
class EngagementProfile:
    user_community: int
    size: int
    sectors: list[Sector]

    def to_json_dict(self) -> dict:
        return {
            "user_community": self.user_community,
            "size": self.size,
            "sectors": [
                {
                    "hashtag_community": s.hashtag_community,
                    "theme": s.theme.value,
                    "count": s.count,
                }
                for s in self.sectors
            ],
        }


def engagement_profile(
    user_partition: Partition,
    hashtag_partition: Partition,
    matrix: BipartiteMatrix,
    min_community_size: int = 10,
    themes: ThemeAssignment | None = None,
) -> list[EngagementProfile]:
    """Hashtag-community engagement per user community.

    For each user community of at least `min_community_size` members,
    sums matrix counts into one sector per hashtag community (zero
    counts kept so shapes are comparable). Sector themes come from
    `themes` when given, else OTHER.
    """
    uix = matrix.user_index()
    hix = matrix.hashtag_index()
    hashtag_comms = sorted(set(hashtag_partition.assignment.values()))
    # Column index -> hashtag community, for fast group sums.
    col_comm = np.full(len(matrix.hashtags), -1, dtype=np.int64)
    missing = 0
    for tag, col in hix.items():
        if tag in hashtag_partition.assignment:
            col_comm[col] = hashtag_partition.assignment[tag]
        else:
            missing += 1
    if missing:
        logger.warning("%d matrix hashtags missing from the hashtag partition", missing)

    out = []
    for comm, members in user_partition.communities().items():
        if len(members) < min_community_size:
            continue
        rows = [uix[u] for u in members if u in uix]
        if rows:
            block = matrix.counts[rows, :]
            col_sums = block.sum(axis=0)
        else:
            col_sums = np.zeros(len(matrix.hashtags), dtype=np.int64)
        sectors = []
        for hc in hashtag_comms:
            count = int(col_sums[col_comm == hc].sum())
            theme = themes.themes.get(hc, Theme.OTHER) if themes else Theme.OTHER
            sectors.append(Sector(hashtag_community=hc, theme=theme, count=count))
        out.append(
            EngagementProfile(user_community=comm, size=len(members), sectors=sectors)
        )
    return out
