"""Weighted graph container used across the pipeline.

Small on purpose: dict-of-dict adjacency, positive weights, optional
direction. Algorithms that need determinism sort node ids themselves;
iteration order here is insertion order.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Iterable, Iterator

from .records import Category

Node = Hashable


@dataclass
class NodeAnnotation:
    """Human-applied label for a network node (hashtag or account)."""

    node_id: str
    label: str
    category: Category


class WeightedGraph:
    def __init__(self, directed: bool = False):
        self.directed = directed
        self._adj: dict[Node, dict[Node, float]] = {}
        # Predecessor map, only maintained for directed graphs.
        self._pred: dict[Node, dict[Node, float]] = {} if directed else self._adj

    # -- construction -------------------------------------------------

    def add_node(self, node: Node) -> None:
        if node not in self._adj:
            self._adj[node] = {}
            if self.directed:
                self._pred[node] = {}

    def add_edge(self, u: Node, v: Node, weight: float = 1.0) -> None:
        """Add weight to the (u, v) edge, creating nodes as needed."""
        if weight <= 0:
            raise ValueError(f"edge weight must be positive, got {weight}")
        self.add_node(u)
        self.add_node(v)
        self._adj[u][v] = self._adj[u].get(v, 0.0) + weight
        if self.directed:
            self._pred[v][u] = self._pred[v].get(u, 0.0) + weight
        elif u != v:
            self._adj[v][u] = self._adj[v].get(u, 0.0) + weight

    # -- inspection ---------------------------------------------------

    def __contains__(self, node: Node) -> bool:
        return node in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    @property
    def node_count(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        total = sum(len(nbrs) for nbrs in self._adj.values())
        if self.directed:
            return total
        loops = sum(1 for u, nbrs in self._adj.items() if u in nbrs)
        return (total + loops) // 2

    def nodes(self) -> Iterator[Node]:
        return iter(self._adj)

    def edges(self) -> Iterator[tuple[Node, Node, float]]:
        """Each edge once; for undirected graphs the first-seen end leads."""
        if self.directed:
            for u, nbrs in self._adj.items():
                for v, w in nbrs.items():
                    yield u, v, w
            return
        seen = set()
        for u, nbrs in self._adj.items():
            for v, w in nbrs.items():
                if (v, u) in seen:
                    continue
                seen.add((u, v))
                yield u, v, w

    def has_edge(self, u: Node, v: Node) -> bool:
        return u in self._adj and v in self._adj[u]

    def weight(self, u: Node, v: Node) -> float:
        return self._adj.get(u, {}).get(v, 0.0)

    def neighbors(self, node: Node) -> Iterator[Node]:
        """Out-neighbors for directed graphs, neighbors otherwise."""
        return iter(self._adj[node])

    def successors(self, node: Node) -> dict[Node, float]:
        return self._adj[node]

    def predecessors(self, node: Node) -> dict[Node, float]:
        return self._pred[node]

    def degree(self, node: Node, weighted: bool = False) -> float:
        """Degree with self-loops counted twice (undirected convention).

        For directed graphs this is in-degree plus out-degree.
        """
        if self.directed:
            return self.in_degree(node, weighted) + self.out_degree(node, weighted)
        nbrs = self._adj[node]
        if weighted:
            return sum(nbrs.values()) + nbrs.get(node, 0.0)
        return len(nbrs) + (1 if node in nbrs else 0)

    def in_degree(self, node: Node, weighted: bool = False) -> float:
        preds = self._pred[node]
        return sum(preds.values()) if weighted else len(preds)

    def out_degree(self, node: Node, weighted: bool = False) -> float:
        succs = self._adj[node]
        return sum(succs.values()) if weighted else len(succs)

    def total_edge_weight(self) -> float:
        """Sum of edge weights, each edge counted once."""
        return sum(w for _, _, w in self.edges())

    # -- derivation ---------------------------------------------------

    def copy(self) -> "WeightedGraph":
        out = WeightedGraph(self.directed)
        for node in self._adj:
            out.add_node(node)
        for u, v, w in self.edges():
            out.add_edge(u, v, w)
        return out

    def subgraph(self, nodes: Iterable[Node]) -> "WeightedGraph":
        keep = set(nodes)
        out = WeightedGraph(self.directed)
        for node in self._adj:
            if node in keep:
                out.add_node(node)
        for u, v, w in self.edges():
            if u in keep and v in keep:
                out.add_edge(u, v, w)
        return out

    def undirected_view(self) -> "WeightedGraph":
        """Symmetrized copy; reciprocal directed weights are summed."""
        if not self.directed:
            return self
        out = WeightedGraph(directed=False)
        for node in self._adj:
            out.add_node(node)
        done = set()
        for u, nbrs in self._adj.items():
            for v, w in nbrs.items():
                if (v, u) in done or (u, v) in done:
                    continue
                done.add((u, v))
                total = w + (self._adj[v].get(u, 0.0) if u != v else 0.0)
                out.add_edge(u, v, total)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.directed == other.directed and self._adj == other._adj

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"<WeightedGraph {kind} nodes={self.node_count} edges={self.edge_count}>"


# ---------------------------------------------------------------------------
# Edge-list CSV interchange (src,dst,weight)
# ---------------------------------------------------------------------------

def write_edge_csv(graph: WeightedGraph, path) -> None:
    """Write a sorted src,dst,weight CSV; undirected pairs are canonicalized."""
    rows = []
    for u, v, w in graph.edges():
        a, b = (u, v)
        if not graph.directed and str(b) < str(a):
            a, b = b, a
        rows.append((str(a), str(b), w))
    rows.sort(key=lambda r: (r[0], r[1]))
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["src", "dst", "weight"])
        for a, b, w in rows:
            writer.writerow([a, b, format_weight(w)])


def read_edge_csv(path, directed: bool = False) -> WeightedGraph:
    graph = WeightedGraph(directed)
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != ["src", "dst", "weight"]:
            raise ValueError(f"unexpected edge CSV header in {path}: {header}")
        for row in reader:
            if len(row) != 3:
                raise ValueError(f"bad edge row in {path}: {row}")
            graph.add_edge(row[0], row[1], float(row[2]))
    return graph


def format_weight(w: float) -> str:
    """Integers render without a trailing .0; floats use repr (round-trips)."""
    if float(w).is_integer():
        return str(int(w))
    return repr(float(w))
