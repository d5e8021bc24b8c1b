"""Network metrics: global properties, centralities, filters.

Betweenness and path metrics run over CSR index arrays so the 50k-tweet
pipeline stays fast; `betweenness(exact=True)` switches to rational
arithmetic for reference-grade values on small graphs.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import sparse

from .graph import WeightedGraph
from .records import ActorType, UserProfile


class ConvergenceError(RuntimeError):
    """Power iteration did not reach tolerance; carries the last iterate."""

    def __init__(self, message, scores=None):
        super().__init__(message)
        self.scores = scores


# ---------------------------------------------------------------------------
# CSR scaffolding
# ---------------------------------------------------------------------------

def _node_order(graph: WeightedGraph) -> list:
    return sorted(graph.nodes(), key=str)


def _csr_undirected(graph: WeightedGraph):
    """(nodes, indptr, indices) for the undirected simple view, no self-loops."""
    nodes = _node_order(graph)
    index = {n: i for i, n in enumerate(nodes)}
    adj: list[set[int]] = [set() for _ in nodes]
    for u, v, _ in graph.edges():
        if u == v:
            continue
        iu, iv = index[u], index[v]
        adj[iu].add(iv)
        adj[iv].add(iu)
    indptr = np.zeros(len(nodes) + 1, dtype=np.int64)
    chunks = []
    for i, nbrs in enumerate(adj):
        ordered = np.fromiter(sorted(nbrs), dtype=np.int64, count=len(nbrs))
        chunks.append(ordered)
        indptr[i + 1] = indptr[i] + len(ordered)
    indices = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return nodes, indptr, indices


def _csr_from_pairs(n: int, pairs) -> tuple[np.ndarray, np.ndarray]:
    """CSR arrays from (src, dst) int pairs, successors sorted."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in pairs:
        adj[u].append(v)
    indptr = np.zeros(n + 1, dtype=np.int64)
    chunks = []
    for i, succ in enumerate(adj):
        ordered = np.asarray(sorted(set(succ)), dtype=np.int64)
        chunks.append(ordered)
        indptr[i + 1] = indptr[i] + len(ordered)
    indices = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return indptr, indices


def _expand_frontier(indptr, indices, frontier):
    """Successors of all frontier nodes (concatenated, repeats kept),
    plus the frontier node each came from."""
    starts = indptr[frontier]
    counts = indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    offsets = np.repeat(np.cumsum(counts) - counts, counts)
    flat = np.arange(total, dtype=np.int64) - offsets + np.repeat(starts, counts)
    return indices[flat], np.repeat(frontier, counts)


def _bfs_distances(indptr, indices, source, n):
    dist = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        nbrs, _ = _expand_frontier(indptr, indices, frontier)
        nbrs = nbrs[dist[nbrs] < 0]
        if nbrs.size == 0:
            break
        dist[nbrs] = level
        frontier = np.unique(nbrs)
    return dist


def _components(indptr, indices, n) -> np.ndarray:
    """Component label per node (labels are 0..k-1 in discovery order)."""
    labels = np.full(n, -1, dtype=np.int64)
    current = 0
    for start in range(n):
        if labels[start] >= 0:
            continue
        dist = _bfs_distances(indptr, indices, start, n)
        labels[dist >= 0] = current
        current += 1
    return labels


# ---------------------------------------------------------------------------
# Global properties
# ---------------------------------------------------------------------------

@dataclass
class GlobalMetrics:
    node_count: int
    edge_count: int
    density: float
    avg_degree: float
    avg_clustering: float
    component_count: int
    giant_fraction: float
    avg_path_length: float | None
    diameter: int | None

    def to_json_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "density": self.density,
            "avg_degree": self.avg_degree,
            "avg_clustering": self.avg_clustering,
            "component_count": self.component_count,
            "giant_fraction": self.giant_fraction,
            "avg_path_length": self.avg_path_length,
            "diameter": self.diameter,
        }


def global_properties(graph: WeightedGraph) -> GlobalMetrics:
    """Size, density, clustering, components, and giant-component paths.

    Components are weak components for directed graphs. Path length and
    diameter are measured on the unweighted undirected view of the
    giant component and are None when that component has under two
    nodes. Density uses the directed formula for directed graphs.
    """
    n = graph.node_count
    m = graph.edge_count
    if n == 0:
        return GlobalMetrics(0, 0, 0.0, 0.0, 0.0, 0, 0.0, None, None)
    if n > 1:
        pairs = n * (n - 1)
        density = m / pairs if graph.directed else 2 * m / pairs
    else:
        density = 0.0
    avg_degree = 2 * m / n

    nodes, indptr, indices = _csr_undirected(graph)

    # Clustering: fraction of closed neighbor pairs, averaged over nodes.
    neighbor_sets = [
        frozenset(indices[indptr[i]:indptr[i + 1]].tolist()) for i in range(n)
    ]
    total_cc = 0.0
    for i in range(n):
        nbrs = neighbor_sets[i]
        k = len(nbrs)
        if k < 2:
            continue
        links = sum(len(nbrs & neighbor_sets[j]) for j in nbrs) // 2
        total_cc += 2.0 * links / (k * (k - 1))
    avg_clustering = total_cc / n

    labels = _components(indptr, indices, n)
    component_count = int(labels.max()) + 1
    sizes = np.bincount(labels)
    giant_label = int(sizes.argmax())
    giant = int(sizes[giant_label])
    giant_fraction = giant / n

    avg_path = None
    diameter = None
    if giant >= 2:
        members = np.flatnonzero(labels == giant_label)
        total = 0
        ecc_max = 0
        for src in members.tolist():
            dist = _bfs_distances(indptr, indices, src, n)
            reach = dist[dist > 0]
            total += int(reach.sum())
            if reach.size:
                ecc_max = max(ecc_max, int(reach.max()))
        avg_path = total / (giant * (giant - 1))
        diameter = ecc_max

    return GlobalMetrics(
        node_count=n,
        edge_count=m,
        density=density,
        avg_degree=avg_degree,
        avg_clustering=avg_clustering,
        component_count=component_count,
        giant_fraction=giant_fraction,
        avg_path_length=avg_path,
        diameter=diameter,
    )


# ---------------------------------------------------------------------------
# Betweenness
# ---------------------------------------------------------------------------

def betweenness(graph: WeightedGraph, exact: bool = False) -> dict:
    """Shortest-path betweenness (unweighted paths, endpoints excluded).

    Undirected pair counts are halved so a path graph a-b-c gives b a
    score of 1. With exact=True the accumulation runs in rational
    arithmetic (slow; meant for reference values on small graphs).
    """
    if exact:
        return _betweenness_exact(graph)
    return _betweenness_float(graph)


def _betweenness_float(graph: WeightedGraph) -> dict:
    if graph.directed:
        nodes = _node_order(graph)
        index = {node: i for i, node in enumerate(nodes)}
        fwd_pairs = []
        rev_pairs = []
        for u, v, _ in graph.edges():
            if u == v:
                continue
            fwd_pairs.append((index[u], index[v]))
            rev_pairs.append((index[v], index[u]))
        n = len(nodes)
        indptr, indices = _csr_from_pairs(n, fwd_pairs)
        rindptr, rindices = _csr_from_pairs(n, rev_pairs)
    else:
        nodes, indptr, indices = _csr_undirected(graph)
        n = len(nodes)
        rindptr, rindices = indptr, indices

    score = np.zeros(n, dtype=np.float64)
    for source in range(n):
        dist = np.full(n, -1, dtype=np.int64)
        sigma = np.zeros(n, dtype=np.float64)
        dist[source] = 0
        sigma[source] = 1.0
        frontier = np.array([source], dtype=np.int64)
        levels = [frontier]
        level = 0
        while frontier.size:
            level += 1
            targets, origins = _expand_frontier(indptr, indices, frontier)
            if targets.size == 0:
                break
            fresh = dist[targets] < 0
            if fresh.any():
                dist[targets[fresh]] = level
            onlevel = dist[targets] == level
            np.add.at(sigma, targets[onlevel], sigma[origins[onlevel]])
            frontier = np.unique(targets[fresh])
            if frontier.size == 0:
                break
            levels.append(frontier)
        delta = np.zeros(n, dtype=np.float64)
        for lvl_nodes in reversed(levels[1:]):
            preds, origins = _expand_frontier(rindptr, rindices, lvl_nodes)
            if preds.size == 0:
                continue
            mask = dist[preds] == dist[origins] - 1
            preds = preds[mask]
            origins = origins[mask]
            contrib = sigma[preds] * (1.0 + delta[origins]) / sigma[origins]
            np.add.at(delta, preds, contrib)
        score += delta
        score[source] -= delta[source]
    if not graph.directed:
        score /= 2.0
    return {nodes[i]: float(score[i]) for i in range(n)}


def _betweenness_exact(graph: WeightedGraph) -> dict:
    nodes = _node_order(graph)
    if graph.directed:
        succ = {u: sorted((v for v in graph.successors(u) if v != u), key=str) for u in nodes}
    else:
        succ = {u: sorted((v for v in graph.neighbors(u) if v != u), key=str) for u in nodes}
    score = {node: Fraction(0) for node in nodes}
    for s in nodes:
        stack = []
        preds: dict = {node: [] for node in nodes}
        sigma = {node: 0 for node in nodes}
        dist = {node: -1 for node in nodes}
        sigma[s] = 1
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in succ[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = {node: Fraction(0) for node in nodes}
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += Fraction(sigma[v], sigma[w]) * (1 + delta[w])
            if w != s:
                score[w] += delta[w]
    if graph.directed:
        return dict(score)
    return {node: value / 2 for node, value in score.items()}


# ---------------------------------------------------------------------------
# PageRank
# ---------------------------------------------------------------------------

def pagerank(
    graph: WeightedGraph,
    damping: float = 0.85,
    tolerance: float = 1e-9,
    max_iterations: int = 200,
) -> dict:
    """Power-iteration PageRank on a directed weighted graph.

    Out-weights are normalized per source; the rank mass of dangling
    nodes is spread uniformly. Iteration stops when the L1 change drops
    below `tolerance`, else ConvergenceError (with the last iterate
    attached) after `max_iterations`. Scores sum to 1.
    """
    if not graph.directed:
        raise ValueError("pagerank expects a directed graph")
    nodes = _node_order(graph)
    n = len(nodes)
    if n == 0:
        raise ValueError("pagerank is undefined on an empty graph")
    index = {node: i for i, node in enumerate(nodes)}
    rows, cols, vals = [], [], []
    out_weight = np.zeros(n, dtype=np.float64)
    for u in nodes:
        i = index[u]
        for v, w in graph.successors(u).items():
            rows.append(i)
            cols.append(index[v])
            vals.append(w)
            out_weight[i] += w
    matrix = sparse.csr_matrix(
        (np.asarray(vals, dtype=np.float64), (rows, cols)), shape=(n, n)
    )
    norm = np.where(out_weight > 0, out_weight, 1.0)
    transition = (sparse.diags(1.0 / norm) @ matrix).T.tocsr()
    dangling = out_weight == 0.0

    x = np.full(n, 1.0 / n, dtype=np.float64)
    base = (1.0 - damping) / n
    for _ in range(max_iterations):
        loose = float(x[dangling].sum())
        new_x = base + damping * (transition @ x) + damping * loose / n
        if float(np.abs(new_x - x).sum()) < tolerance:
            new_x = new_x / new_x.sum()
            return {nodes[i]: float(new_x[i]) for i in range(n)}
        x = new_x
    raise ConvergenceError(
        f"pagerank did not converge in {max_iterations} iterations",
        scores={nodes[i]: float(x[i]) for i in range(n)},
    )


# ---------------------------------------------------------------------------
# Filters
# ---------------------------------------------------------------------------

def filter_by_edge_weight(graph: WeightedGraph, min_weight: float) -> WeightedGraph:
    """Keep edges with weight strictly above min_weight; drop isolates."""
    out = WeightedGraph(graph.directed)
    for u, v, w in graph.edges():
        if w > min_weight:
            out.add_edge(u, v, w)
    return out


def k_core(graph: WeightedGraph, k: int) -> WeightedGraph:
    """Maximal subgraph where every node keeps degree >= k.

    Unweighted degrees, self-loops ignored; directed edges count once
    each toward both endpoints (in plus out), so a reciprocal pair adds
    two. Cores nest: the (k+1)-core is a subgraph of the k-core.
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    nodes, indptr, indices = _csr_undirected(graph)
    n = len(nodes)
    index = {node: i for i, node in enumerate(nodes)}
    # Multiplicity per undirected pair: 1, or 2 for reciprocal directed edges.
    mult: dict[tuple[int, int], int] = {}
    deg = np.zeros(n, dtype=np.int64)
    for u, v, _ in graph.edges():
        if u == v:
            continue
        iu, iv = index[u], index[v]
        key = (iu, iv) if iu <= iv else (iv, iu)
        mult[key] = mult.get(key, 0) + 1
        deg[iu] += 1
        deg[iv] += 1
    alive = np.ones(n, dtype=bool)
    queue = deque(np.flatnonzero(deg < k).tolist())
    queued = set(queue)
    while queue:
        i = queue.popleft()
        queued.discard(i)
        if not alive[i]:
            continue
        alive[i] = False
        for j in indices[indptr[i]:indptr[i + 1]].tolist():
            if not alive[j]:
                continue
            key = (i, j) if i <= j else (j, i)
            deg[j] -= mult[key]
            if deg[j] < k and j not in queued:
                queue.append(j)
                queued.add(j)
    keep = {nodes[i] for i in np.flatnonzero(alive)}
    return graph.subgraph(keep)


# ---------------------------------------------------------------------------
# Centrality tables
# ---------------------------------------------------------------------------

@dataclass
class CentralityTable:
    metric: str
    scores: dict
    network: str = ""


@dataclass
class RankedInfluencer:
    rank: int
    node_id: str
    score: float
    actor_type: ActorType


def weighted_in_degree(graph: WeightedGraph) -> dict:
    return {node: graph.in_degree(node, weighted=True) for node in graph.nodes()}


def weighted_out_degree(graph: WeightedGraph) -> dict:
    return {node: graph.out_degree(node, weighted=True) for node in graph.nodes()}


def top_influencers(
    table: CentralityTable,
    profiles: dict[str, UserProfile],
    k: int = 20,
) -> list[RankedInfluencer]:
    """Top-k rows by score, ties broken lexicographically by node id.

    Actor types come from profile annotations; unannotated or unknown
    accounts rank as OTHER.
    """
    ordered = sorted(table.scores.items(), key=lambda item: (-item[1], str(item[0])))
    out = []
    for rank, (node, score) in enumerate(ordered[:k], start=1):
        profile = profiles.get(node)
        actor = profile.annotation if profile and profile.annotation else ActorType.OTHER
        out.append(
            RankedInfluencer(rank=rank, node_id=str(node), score=float(score), actor_type=actor)
        )
    return out
