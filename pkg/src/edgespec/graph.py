"""Finite symmetric graphs with directed-edge bookkeeping.

Vertices and directed edges carry dense integer ids. The k-th undirected
input edge ``(u, v)`` becomes the directed edges ``2k = (u, v)`` and
``2k + 1 = (v, u)``, so the opposite edge of ``e`` is always ``e ^ 1`` and
every iteration order follows the input order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import Disconnected, DuplicateEdge, EmptyGraph, LoopEdge

__all__ = [
    "Graph",
    "PruneResult",
    "SpanningTree",
    "build_graph",
    "cyclomatic_number",
    "is_bipartite",
    "count_leaves",
    "prune_dead_ends",
    "spanning_tree",
    "dead_end_edges",
]


class Graph:
    """Immutable connected graph without loops or multiple edges.

    ``iota``, ``tau`` and ``opp`` are tuples indexed by directed edge id.
    ``out_edges[x]`` lists the directed edges starting at ``x`` in id order.
    """

    __slots__ = ("labels", "iota", "tau", "out_edges", "_index")

    def __init__(self, labels, pairs):
        labels = tuple(str(label) for label in labels)
        if not labels:
            raise EmptyGraph("graph has no vertices")
        n = len(labels)
        iota = []
        tau = []
        seen = set()
        for u, v in pairs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"vertex id out of range in edge ({u}, {v})")
            if u == v:
                raise LoopEdge(f"loop at vertex {labels[u]!r}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DuplicateEdge(f"duplicate edge {labels[u]!r}-{labels[v]!r}")
            seen.add(key)
            iota += [u, v]
            tau += [v, u]
        if not iota:
            raise EmptyGraph("graph has no edges")
        out = [[] for _ in range(n)]
        for e, x in enumerate(iota):
            out[x].append(e)
        self.labels = labels
        self.iota = tuple(iota)
        self.tau = tuple(tau)
        self.out_edges = tuple(tuple(es) for es in out)
        self._index = {(u, v): e for e, (u, v) in enumerate(zip(iota, tau))}
        if _component_sizes(self)[0] != n:
            raise Disconnected("graph is not connected")

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    @property
    def num_dir_edges(self) -> int:
        return len(self.iota)

    @property
    def num_edges(self) -> int:
        return len(self.iota) // 2

    @staticmethod
    def opp(e: int) -> int:
        return e ^ 1

    def degree(self, x: int) -> int:
        return len(self.out_edges[x])

    def q(self, x: int) -> int:
        return len(self.out_edges[x]) - 1

    def edge(self, u: int, v: int) -> int:
        """Directed edge id of ``(u, v)``; raises ``KeyError`` if absent."""
        return self._index[(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._index

    def neighbors(self, x: int):
        return [self.tau[e] for e in self.out_edges[x]]

    def successors(self, e: int):
        """Non-backtracking continuations of ``e``."""
        back = e ^ 1
        return [f for f in self.out_edges[self.tau[e]] if f != back]

    def undirected_pairs(self):
        """Input-ordered undirected edges as vertex-id pairs."""
        return [(self.iota[e], self.tau[e]) for e in range(0, len(self.iota), 2)]

    def label_pairs(self):
        return [(self.labels[u], self.labels[v]) for u, v in self.undirected_pairs()]

    def is_regular(self) -> bool:
        return len({len(es) for es in self.out_edges}) == 1

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.labels == other.labels
            and self.iota == other.iota
        )

    def __hash__(self):
        return hash((self.labels, self.iota))

    def __repr__(self):
        return f"Graph(|X|={self.num_vertices}, |E|={self.num_edges})"


def _component_sizes(g: Graph):
    n = g.num_vertices
    comp = [-1] * n
    sizes = []
    for s in range(n):
        if comp[s] >= 0:
            continue
        comp[s] = len(sizes)
        size = 1
        stack = [s]
        while stack:
            x = stack.pop()
            for e in g.out_edges[x]:
                y = g.tau[e]
                if comp[y] < 0:
                    comp[y] = comp[s]
                    size += 1
                    stack.append(y)
        sizes.append(size)
    return sizes


def build_graph(undirected_edges) -> Graph:
    """Intern labels in order of first appearance and build the graph."""
    undirected_edges = list(undirected_edges)
    if not undirected_edges:
        raise EmptyGraph("edge list is empty")
    ids = {}
    pairs = []
    for u, v in undirected_edges:
        u, v = str(u), str(v)
        for label in (u, v):
            if label not in ids:
                ids[label] = len(ids)
        pairs.append((ids[u], ids[v]))
    return Graph(list(ids), pairs)


def cyclomatic_number(g: Graph) -> int:
    return g.num_edges - g.num_vertices + 1


def is_bipartite(g: Graph):
    """Return ``(True, coloring)`` or ``(False, None)``."""
    color = [-1] * g.num_vertices
    color[0] = 0
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x):
            if color[y] < 0:
                color[y] = 1 - color[x]
                queue.append(y)
            elif color[y] == color[x]:
                return False, None
    return True, color


def count_leaves(g: Graph) -> int:
    return sum(1 for es in g.out_edges if len(es) == 1)


def dead_end_edges(g: Graph):
    """Directed edges with only finitely many non-backtracking continuations.

    Greatest fixed point of forward extendability: an edge stays alive while
    at least one of its continuations is alive.
    """
    m = g.num_dir_edges
    live_succ = [len(g.successors(e)) for e in range(m)]
    preds = [[] for _ in range(m)]
    for e in range(m):
        for f in g.successors(e):
            preds[f].append(e)
    dead = [False] * m
    queue = deque(e for e in range(m) if live_succ[e] == 0)
    for e in queue:
        dead[e] = True
    while queue:
        f = queue.popleft()
        for e in preds[f]:
            if not dead[e]:
                live_succ[e] -= 1
                if live_succ[e] == 0:
                    dead[e] = True
                    queue.append(e)
    return [e for e in range(m) if dead[e]]


@dataclass(frozen=True)
class PruneResult:
    """Outcome of dead-end pruning.

    ``pruned`` is ``None`` when nothing survives (``empty`` is then set).
    ``kept_dir_edges[i]`` is the original id of directed edge ``i`` of the
    pruned graph, and ``kept_vertices`` does the same for vertices.
    """

    pruned: Graph | None
    removed_dir_edges: list
    removed_vertices: list
    kept_dir_edges: list = field(default_factory=list)
    kept_vertices: list = field(default_factory=list)
    dead_ends: list = field(default_factory=list)
    disconnected: bool = False

    @property
    def empty(self) -> bool:
        return self.pruned is None


def prune_dead_ends(g: Graph) -> PruneResult:
    """Restrict ``g`` to its largest subgraph in which every edge extends forever.

    Peels undirected edges until both directions of every remaining edge have
    a non-backtracking continuation inside the remainder. In a symmetric graph
    this is the same as repeatedly deleting vertices of degree one.
    """
    n = g.num_vertices
    deg = [g.degree(x) for x in range(n)]
    alive_edge = [True] * g.num_edges
    alive_vertex = [True] * n
    queue = deque(x for x in range(n) if deg[x] <= 1)
    while queue:
        x = queue.popleft()
        if not alive_vertex[x]:
            continue
        alive_vertex[x] = False
        for e in g.out_edges[x]:
            if alive_edge[e >> 1]:
                alive_edge[e >> 1] = False
                y = g.tau[e]
                deg[y] -= 1
                if deg[y] <= 1 and alive_vertex[y]:
                    queue.append(y)

    kept_pairs = [k for k in range(g.num_edges) if alive_edge[k]]
    removed_dir = [e for e in range(g.num_dir_edges) if not alive_edge[e >> 1]]
    dead = dead_end_edges(g)
    if not kept_pairs:
        return PruneResult(None, removed_dir, list(range(n)), dead_ends=dead)

    kept_vertices = [x for x in range(n) if alive_vertex[x]]
    new_id = {x: i for i, x in enumerate(kept_vertices)}
    labels = [g.labels[x] for x in kept_vertices]
    pairs = [(new_id[g.iota[2 * k]], new_id[g.tau[2 * k]]) for k in kept_pairs]
    disconnected = False
    try:
        pruned = Graph(labels, pairs)
    except Disconnected:
        # Deleting leaves never disconnects a graph; kept as a guard.
        disconnected = True
        pruned, kept_vertices, kept_pairs = _largest_component(g, kept_vertices, kept_pairs)
    kept_dir = [e for k in kept_pairs for e in (2 * k, 2 * k + 1)]
    kept_set = set(kept_vertices)
    removed_vertices = [x for x in range(n) if x not in kept_set]
    kept_pair_set = set(kept_pairs)
    removed_dir = [e for e in range(g.num_dir_edges) if (e >> 1) not in kept_pair_set]
    return PruneResult(
        pruned, removed_dir, removed_vertices, kept_dir, kept_vertices, dead, disconnected
    )


def _largest_component(g, vertices, edge_ids):
    adj = {x: [] for x in vertices}
    for k in edge_ids:
        u, v = g.iota[2 * k], g.tau[2 * k]
        adj[u].append(v)
        adj[v].append(u)
    best = []
    seen = set()
    for s in vertices:
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        if len(comp) > len(best):
            best = sorted(comp)
    best_set = set(best)
    edge_ids = [k for k in edge_ids if g.iota[2 * k] in best_set]
    new_id = {x: i for i, x in enumerate(best)}
    pairs = [(new_id[g.iota[2 * k]], new_id[g.tau[2 * k]]) for k in edge_ids]
    return Graph([g.labels[x] for x in best], pairs), best, edge_ids


@dataclass(frozen=True)
class SpanningTree:
    """BFS spanning tree.

    ``tree_dir_edges`` point away from ``root`` and are sorted by the depth of
    their terminal vertex. ``non_tree_dir_edges`` keep input orientation.
    ``parent_edge[x]`` is the tree edge ending at ``x`` (``-1`` at the root).
    """

    root: int
    tree_dir_edges: list
    non_tree_dir_edges: list
    depth: list
    parent_edge: list


def spanning_tree(g: Graph, root: int = 0) -> SpanningTree:
    n = g.num_vertices
    depth = [-1] * n
    parent_edge = [-1] * n
    depth[root] = 0
    frontier = [root]
    tree = []
    while frontier:
        # Scan undirected edges in input order for each BFS layer.
        layer = set(frontier)
        nxt = []
        for k in range(g.num_edges):
            for e in (2 * k, 2 * k + 1):
                x, y = g.iota[e], g.tau[e]
                if x in layer and depth[y] < 0:
                    depth[y] = depth[x] + 1
                    parent_edge[y] = e
                    tree.append(e)
                    nxt.append(y)
        frontier = nxt
    in_tree = {e >> 1 for e in tree}
    non_tree = [2 * k for k in range(g.num_edges) if k not in in_tree]
    return SpanningTree(root, tree, non_tree, depth, parent_edge)
