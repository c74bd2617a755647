"""Small named graphs and a seeded random generator.

Vertex labels are the strings ``"0" .. "n-1"``.
"""

from __future__ import annotations

import random
from itertools import combinations

from .errors import BadParams
from .graph import Graph, build_graph, prune_dead_ends

__all__ = [
    "cycle",
    "complete",
    "complete_bipartite",
    "petersen",
    "theta_subdivided",
    "dumbbell",
    "path",
    "star",
    "with_pendant",
    "random_graph",
    "random_pruned",
    "corpus",
    "leafy_corpus",
    "edge_list_text",
    "GENERATORS",
]


def _build(pairs) -> Graph:
    return build_graph((str(u), str(v)) for u, v in pairs)


def cycle(n: int) -> Graph:
    if n < 3:
        raise BadParams("a cycle needs at least 3 vertices")
    return _build((i, (i + 1) % n) for i in range(n))


def complete(n: int) -> Graph:
    if n < 2:
        raise BadParams("a complete graph needs at least 2 vertices")
    return _build(combinations(range(n), 2))


def complete_bipartite(m: int, n: int) -> Graph:
    if m < 1 or n < 1:
        raise BadParams("both sides need at least one vertex")
    return _build((i, m + j) for i in range(m) for j in range(n))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return _build(outer + spokes + inner)


def theta_subdivided() -> Graph:
    """Two branch vertices joined by three paths of length two."""
    return _build([(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)])


def dumbbell() -> Graph:
    """Two triangles joined by a bridge."""
    return _build([(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])


def path(n: int) -> Graph:
    if n < 2:
        raise BadParams("a path needs at least 2 vertices")
    return _build((i, i + 1) for i in range(n - 1))


def star(k: int) -> Graph:
    if k < 1:
        raise BadParams("a star needs at least one leaf")
    return _build((0, i) for i in range(1, k + 1))


def with_pendant(g: Graph, tree_sizes) -> Graph:
    """Attach a path with ``size`` new vertices at vertex ``i`` for each ``i, size``."""
    pairs = [(int(a), int(b)) for a, b in g.label_pairs()]
    nxt = g.num_vertices
    for at, size in enumerate(tree_sizes):
        prev = at
        for _ in range(size):
            pairs.append((prev, nxt))
            prev = nxt
            nxt += 1
    return _build(pairs)


def random_graph(n: int, m: int, seed: int, max_tries: int = 10_000) -> Graph:
    """Connected simple graph with ``n`` vertices and ``m`` edges.

    Candidates are drawn from one seeded stream and disconnected ones are
    rejected, so equal arguments always give the same graph.
    """
    if n < 2 or m < n - 1 or m > n * (n - 1) // 2:
        raise BadParams(f"no connected simple graph with {n} vertices and {m} edges")
    rng = random.Random(seed)
    pairs = list(combinations(range(n), 2))
    for _ in range(max_tries):
        chosen = sorted(rng.sample(pairs, m))
        if _connected(n, chosen):
            return _build(chosen)
    raise BadParams(f"no connected sample after {max_tries} tries")


def _connected(n, pairs) -> bool:
    adj = [[] for _ in range(n)]
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def random_pruned(n: int, m: int, seed: int) -> Graph:
    return prune_dead_ends(random_graph(n, m, seed)).pruned


def corpus() -> dict:
    """Graphs without dead ends used throughout the test suite."""
    out = {f"C{n}": cycle(n) for n in range(3, 9)}
    out.update(
        {
            "K4": complete(4),
            "K5": complete(5),
            "K3,3": complete_bipartite(3, 3),
            "Petersen": petersen(),
            "theta": theta_subdivided(),
            "dumbbell": dumbbell(),
        }
    )
    for seed in range(10):
        out[f"random8x12#{seed}"] = random_pruned(8, 12, seed)
    return out


def leafy_corpus() -> dict:
    return {
        "P3": path(3),
        "P5": path(5),
        "K1,3": star(3),
        "C3+pendant": with_pendant(cycle(3), [1]),
    }


def edge_list_text(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.label_pairs())


# name -> (argument count, builder)
GENERATORS = {
    "cycle": (1, cycle),
    "complete": (1, complete),
    "complete_bipartite": (2, complete_bipartite),
    "petersen": (0, petersen),
    "theta_subdivided": (0, theta_subdivided),
    "dumbbell": (0, dumbbell),
    "random": (3, random_graph),
}
