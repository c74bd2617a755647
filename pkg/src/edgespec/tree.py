"""Truncated universal covers, boundary measures and Poisson transforms.

A :class:`TreeBall` stores the radius-``R`` ball around a base point of a
tree. Vertices are numbered in breadth-first order with children in a fixed
order, so every level is sorted lexicographically and the frontier
descendants of any vertex form a contiguous range. The directed edges are
``2v`` (parent to ``v``, outward) and ``2v + 1`` (``v`` to parent, inward)
for every non-root vertex ``v``; the opposite of ``e`` is ``e ^ 1`` as in
:mod:`edgespec.graph`.

Frontier classes (outward edges ending at depth ``R``) stand in for the
boundary. Kernels evaluated at points of depth at most ``R - 1`` are
locally constant at that resolution, so every transform here is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DomainTooSmall,
    InconsistentInput,
    NotClosed,
    NotPruned,
    NotReduced,
    RadiusTooSmall,
    TooDeep,
    ZeroParameter,
)
from .graph import Graph, spanning_tree

__all__ = [
    "TreeBall",
    "BoundaryMeasure",
    "DeckTransform",
    "CheckResult",
    "build_ball",
    "regular_ball",
    "horocycle_bracket",
    "vertex_poisson",
    "edge_poisson",
    "boundary_value",
    "phi_rescale",
    "psi_rescale",
    "extend_eigenfunction",
    "lift_edge_function",
    "ball_edge_laplacian",
    "deck_transform",
    "fundamental_loops",
    "apply_deck",
    "deck_image_class",
    "gamma_invariance_check",
    "reduce_walk",
    "horocycle_instances",
    "horocycle_check",
    "poisson_suite",
]


class TreeBall:
    """Radius-``R`` ball of a tree, stored by parent pointers.

    ``base_graph`` is ``None`` for balls in a regular tree built from ``q``
    alone. For covers, ``step[v]`` is the base directed edge traversed last
    on the walk to ``v`` and ``walk(v)`` returns the whole reduced walk.
    """

    def __init__(self, parent, step, radius, base_graph=None, base=0):
        self.base_graph = base_graph
        self.base = base
        self.radius = radius
        self.parent = parent
        self.step = step
        n = len(parent)
        depth = [0] * n
        children = [[] for _ in range(n)]
        for v in range(1, n):
            depth[v] = depth[parent[v]] + 1
            children[parent[v]].append(v)
        self.depth = depth
        self.children = children
        self.frontier_start = next((v for v in range(n) if depth[v] == radius), n)
        lo = [0] * n
        hi = [0] * n
        for v in range(n - 1, -1, -1):
            if depth[v] == radius:
                lo[v] = v - self.frontier_start
                hi[v] = lo[v] + 1
            elif children[v]:
                lo[v] = lo[children[v][0]]
                hi[v] = hi[children[v][-1]]
        self.lo = lo
        self.hi = hi
        self._walk_index = None
        self._tables = None

    # vertices and edges

    @property
    def num_vertices(self) -> int:
        return len(self.parent)

    @property
    def num_frontier(self) -> int:
        return len(self.parent) - self.frontier_start

    @property
    def edges(self):
        return range(2, 2 * len(self.parent))

    def iota(self, e: int) -> int:
        v = e >> 1
        return self.parent[v] if e % 2 == 0 else v

    def tau(self, e: int) -> int:
        v = e >> 1
        return v if e % 2 == 0 else self.parent[v]

    @staticmethod
    def is_outward(e: int) -> bool:
        return e % 2 == 0

    def out_edges(self, x: int):
        """Edges starting at ``x``; complete only when ``depth[x] < R``."""
        es = [2 * c for c in self.children[x]]
        if x:
            es.append(2 * x + 1)
        return es

    def successors(self, e: int):
        back = e ^ 1
        return [f for f in self.out_edges(self.tau(e)) if f != back]

    def step_tables(self):
        """Per-edge ``(successors, starting_edges)``, ``None`` where incomplete.

        Entry ``e`` of the first list is set when ``tau(e)`` is interior, and
        of the second when ``iota(e)`` is interior. Built once per ball.
        """
        if self._tables is None:
            size = 2 * len(self.parent)
            succ = [None] * size
            starts = [None] * size
            r = self.radius
            for e in self.edges:
                if self.depth[self.tau(e)] < r:
                    succ[e] = tuple(self.successors(e))
                if self.depth[self.iota(e)] < r:
                    starts[e] = tuple(self.out_edges(self.iota(e)))
            self._tables = (succ, starts)
        return self._tables

    def frontier_vertex(self, omega: int) -> int:
        return self.frontier_start + omega

    def frontier_edge(self, omega: int) -> int:
        return 2 * (self.frontier_start + omega)

    def classes_below(self, v: int):
        return range(self.lo[v], self.hi[v])

    def interior_vertices(self):
        return [v for v in range(self.num_vertices) if self.depth[v] < self.radius]

    def interior_edges(self):
        """Edges whose endpoints both have depth at most ``R - 1``."""
        return [e for e in self.edges if self.depth[e >> 1] < self.radius]

    def edge_level(self, e: int) -> int:
        return self.depth[e >> 1]

    def edges_up_to(self, level: int):
        """Edges of level at most ``level``; a prefix of the id range since ids follow BFS order."""
        end = next((v for v in range(self.num_vertices) if self.depth[v] > level), self.num_vertices)
        return range(2, 2 * end)

    # projections to the base graph

    def project_v(self, v: int) -> int:
        if v == 0:
            return self.base
        return self.base_graph.tau[self.step[v]]

    def project_e(self, e: int) -> int:
        s = self.step[e >> 1]
        return s if e % 2 == 0 else s ^ 1

    def walk(self, v: int):
        out = []
        while v:
            out.append(self.step[v])
            v = self.parent[v]
        return tuple(reversed(out))

    def vertex_of_walk(self, walk):
        """Ball vertex of a reduced walk, or ``None`` if it leaves the ball."""
        if self._walk_index is None:
            self._walk_index = {self.walk(v): v for v in range(self.num_vertices)}
        return self._walk_index.get(tuple(walk))

    def path_string(self, v: int) -> str:
        if self.base_graph is None:
            out = []
            while v:
                p = self.parent[v]
                out.append(str(self.children[p].index(v)))
                v = p
            return "/".join(["o"] + out[::-1])
        labels = self.base_graph.labels
        return "-".join([labels[self.base]] + [labels[self.base_graph.tau[s]] for s in self.walk(v)])

    def __repr__(self):
        return f"TreeBall(R={self.radius}, |V|={self.num_vertices}, frontier={self.num_frontier})"


def build_ball(g: Graph, base: int, radius: int) -> TreeBall:
    """All reduced walks of length at most ``radius`` from ``base``."""
    if any(g.degree(x) < 2 for x in range(g.num_vertices)):
        raise NotPruned("universal cover balls need a graph without dead ends")
    if radius < 2:
        raise RadiusTooSmall(f"radius must be at least 2, got {radius}")
    parent = [-1]
    step = [-1]
    level = [0]
    for _ in range(radius):
        nxt = []
        for v in level:
            options = g.out_edges[base] if v == 0 else g.successors(step[v])
            for s in options:
                parent.append(v)
                step.append(s)
                nxt.append(len(parent) - 1)
        level = nxt
    return TreeBall(parent, step, radius, g, base)


def regular_ball(q: int, radius: int) -> TreeBall:
    """Radius-``radius`` ball in the ``(q + 1)``-regular tree."""
    if q < 1:
        raise ValueError("q must be at least 1")
    if radius < 2:
        raise RadiusTooSmall(f"radius must be at least 2, got {radius}")
    parent = [-1]
    step = [-1]
    level = [0]
    for _ in range(radius):
        nxt = []
        for v in level:
            for i in range(q + 1 if v == 0 else q):
                parent.append(v)
                step.append(i)
                nxt.append(len(parent) - 1)
        level = nxt
    return TreeBall(parent, step, radius)


@dataclass
class BoundaryMeasure:
    """Finitely additive measure given by its values on frontier classes."""

    ball: TreeBall
    values: list

    def __post_init__(self):
        if len(self.values) != self.ball.num_frontier:
            raise ValueError("one value per frontier class is required")
        self.values = [Fraction(v) for v in self.values]
        prefix = [Fraction(0)]
        for v in self.values:
            prefix.append(prefix[-1] + v)
        self._prefix = prefix

    @property
    def total(self) -> Fraction:
        return self._prefix[-1]

    def below(self, v: int) -> Fraction:
        """Mass of the frontier classes descending from ball vertex ``v``."""
        return self._prefix[self.ball.hi[v]] - self._prefix[self.ball.lo[v]]

    def of_edge(self, e: int) -> Fraction:
        """Mass of the boundary classes reachable through edge ``e``."""
        m = self.below(e >> 1)
        return m if e % 2 == 0 else self.total - m

    def to_json(self) -> dict:
        from .linalg import format_rational

        b = self.ball
        return {
            b.path_string(b.frontier_vertex(w)): format_rational(x)
            for w, x in enumerate(self.values)
        }

    @classmethod
    def from_json(cls, ball: TreeBall, data: dict):
        from .linalg import parse_rational

        index = {ball.path_string(ball.frontier_vertex(w)): w for w in range(ball.num_frontier)}
        values = [Fraction(0)] * ball.num_frontier
        for key, val in data.items():
            if key not in index:
                raise InconsistentInput(f"unknown frontier class {key!r}")
            values[index[key]] = parse_rational(val)
        return cls(ball, values)


def _nonzero(z) -> Fraction:
    z = Fraction(z)
    if z == 0:
        raise ZeroParameter("spectral parameter must be nonzero")
    return z


def horocycle_bracket(ball: TreeBall, x: int, omega: int) -> int:
    """``<x, omega>`` = twice the depth of the meeting vertex minus the depth of ``x``."""
    if ball.depth[x] >= ball.radius:
        raise TooDeep("horocycle bracket needs a vertex of depth at most R - 1")
    y = x
    while not (ball.lo[y] <= omega < ball.hi[y]):
        y = ball.parent[y]
    return 2 * ball.depth[y] - ball.depth[x]


def vertex_poisson(ball: TreeBall, mu: BoundaryMeasure, z, method: str = "fast") -> dict:
    """Scalar Poisson transform on vertices of depth at most ``R - 1``.

    ``method="direct"`` sums the kernel over every frontier class; the fast
    method uses ``P(c) = P(x)/z + (z^(d+1) - z^(d-1)) mu(below c)`` for a
    child ``c`` of ``x`` at depth ``d``.
    """
    z = _nonzero(z)
    if method == "direct":
        out = {}
        for x in ball.interior_vertices():
            out[x] = sum(
                (z ** horocycle_bracket(ball, x, w) * m for w, m in enumerate(mu.values) if m),
                Fraction(0),
            )
        return out
    out = {0: mu.total}
    zi = 1 / z
    for v in range(1, ball.frontier_start):
        d = ball.depth[v] - 1
        out[v] = out[ball.parent[v]] * zi + (z ** (d + 1) - z ** (d - 1)) * mu.below(v)
    return out


def edge_poisson(ball: TreeBall, mu: BoundaryMeasure, z, method: str = "fast") -> dict:
    """Edge Poisson transform on edges whose initial vertex has depth at most ``R - 1``."""
    z = _nonzero(z)
    out = {}
    if method == "direct":
        for e in ball.edges:
            x = ball.iota(e)
            if ball.depth[x] >= ball.radius:
                continue
            v = e >> 1
            inside = range(ball.lo[v], ball.hi[v])
            total = Fraction(0)
            for w, m in enumerate(mu.values):
                if m and ((w in inside) == (e % 2 == 0)):
                    total += z ** horocycle_bracket(ball, x, w) * m
            out[e] = total
        return out
    p = vertex_poisson(ball, mu, z)
    for v in range(1, ball.num_vertices):
        d = ball.depth[v]
        out[2 * v] = z ** (d - 1) * mu.below(v)
        if d < ball.radius:
            out[2 * v + 1] = p[v] - z ** d * mu.below(v)
    return out


def boundary_value(ball: TreeBall, f: dict, z) -> BoundaryMeasure:
    """Measure with ``mu(frontier class of e) = z^-(R-1) f(e)`` on frontier edges."""
    z = _nonzero(z)
    scale = z ** (1 - ball.radius)
    try:
        values = [scale * f[ball.frontier_edge(w)] for w in range(ball.num_frontier)]
    except KeyError as exc:
        raise InconsistentInput(f"missing value on frontier edge {exc.args[0]}") from None
    return BoundaryMeasure(ball, values)


def _rescale(ball: TreeBall, f: dict, z, sign: int) -> dict:
    z = _nonzero(z)
    out = {}
    for e, val in f.items():
        if e % 2:
            raise InconsistentInput("rescalings act on outward edges only")
        out[e] = z ** (-sign * ball.depth[ball.parent[e >> 1]]) * val
    return out


def phi_rescale(ball: TreeBall, f: dict, z) -> dict:
    """``f(e) * z^-d(o, iota e)`` on outward edges."""
    return _rescale(ball, f, z, 1)


def psi_rescale(ball: TreeBall, f: dict, z) -> dict:
    """Inverse of :func:`phi_rescale`."""
    return _rescale(ball, f, z, -1)


def extend_eigenfunction(ball: TreeBall, f_out: dict, z) -> dict:
    """Fill in inward-edge values of an outward z-eigenfunction.

    For an inward edge ``(v, p)`` the pair identity at ``p`` gives
    ``z f(v, p) = sum_{iota e = p} f(e) - f(p, v)``, which only involves the
    inward edge one step closer to the base, so values are produced level by
    level away from the base.
    """
    z = _nonzero(z)
    f = {}
    for v in range(1, ball.num_vertices):
        try:
            f[2 * v] = Fraction(f_out[2 * v])
        except KeyError:
            raise InconsistentInput(f"missing value on outward edge {2 * v}") from None
    for v in range(1, ball.frontier_start):
        s = sum((f[2 * c] for c in ball.children[v]), Fraction(0))
        if s != z * f[2 * v]:
            raise InconsistentInput(f"outward data violates the eigen-equation at edge {2 * v}")
    for v in range(1, ball.num_vertices):
        p = ball.parent[v]
        around = sum((f[e] for e in ball.out_edges(p)), Fraction(0))
        f[2 * v + 1] = (around - f[2 * v]) / z
    return f


def lift_edge_function(g: Graph, ball: TreeBall, f) -> dict:
    return {e: Fraction(f[ball.project_e(e)]) for e in ball.edges}


def ball_edge_laplacian(ball: TreeBall, f: dict) -> dict:
    """Apply the edge Laplacian wherever all continuations carry values."""
    out = {}
    for e in ball.edges:
        if ball.depth[ball.tau(e)] >= ball.radius:
            continue
        succ = ball.successors(e)
        if all(s in f for s in succ):
            out[e] = sum((f[s] for s in succ), Fraction(0))
    return out


# deck transformations


def reduce_walk(walk):
    """Cancel adjacent opposite pairs until the walk is non-backtracking."""
    out = []
    for e in walk:
        if out and out[-1] == e ^ 1:
            out.pop()
        else:
            out.append(e)
    return tuple(out)


@dataclass(frozen=True)
class DeckTransform:
    graph: Graph
    base: int
    loop: tuple

    def inverse(self):
        return DeckTransform(self.graph, self.base, tuple(e ^ 1 for e in reversed(self.loop)))

    def act_on_walk(self, walk):
        return reduce_walk(self.loop + tuple(walk))


def deck_transform(g: Graph, loop, base: int = 0) -> DeckTransform:
    """Deck transformation given by a reduced closed walk at ``base``."""
    loop = tuple(loop)
    at = base
    for e in loop:
        if g.iota[e] != at:
            raise NotClosed("walk is not concatenated at the base vertex")
        at = g.tau[e]
    if at != base:
        raise NotClosed("walk does not return to the base vertex")
    if reduce_walk(loop) != loop:
        raise NotReduced("loop backtracks")
    return DeckTransform(g, base, loop)


def fundamental_loops(g: Graph, base: int = 0) -> list:
    """One closed walk at ``base`` per non-tree edge of the BFS spanning tree."""
    tree = spanning_tree(g, base)

    def down(x):
        walk = []
        while x != base:
            e = tree.parent_edge[x]
            walk.append(e)
            x = g.iota[e]
        return walk[::-1]

    loops = []
    for e in tree.non_tree_dir_edges:
        walk = down(g.iota[e]) + [e] + [f ^ 1 for f in reversed(down(g.tau[e]))]
        loops.append(reduce_walk(walk))
    return loops


def apply_deck(dt: DeckTransform, ball: TreeBall, x: int):
    """Image of ball vertex ``x``, or ``None`` when it falls outside the ball."""
    return ball.vertex_of_walk(dt.act_on_walk(ball.walk(x)))


def deck_image_class(dt: DeckTransform, ball: TreeBall, omega: int):
    """Frontier class containing the image of every end in class ``omega``.

    Defined when the image of the depth-``R`` walk is still at least ``R``
    long and did not consume the whole walk, so its first ``R`` steps are
    fixed for every continuation.
    """
    walk = ball.walk(ball.frontier_vertex(omega))
    image = dt.act_on_walk(walk)
    consumed = len(dt.loop) + len(walk) - len(image)
    if consumed >= 2 * len(walk) or len(image) < ball.radius:
        return None
    v = ball.vertex_of_walk(image[: ball.radius])
    return v - ball.frontier_start


def _word_bracket(x_walk, end_walk) -> int:
    k = 0
    for a, b in zip(x_walk, end_walk):
        if a != b:
            break
        k += 1
    return 2 * k - len(x_walk)


@dataclass
class CheckResult:
    passed: bool
    coverage: int
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


def gamma_invariance_check(g: Graph, ball: TreeBall, f, dt: DeckTransform, z) -> CheckResult:
    """Check ``pi_z(dt) mu = mu`` for ``mu`` the boundary value of the lift of ``f``.

    On a frontier class ``A`` the twisted push-forward has mass
    ``z^-<go, A> mu(dt^-1 A)``, and ``dt^-1 A`` is the boundary set of the
    image of the frontier edge of ``A``, which is computable whenever both
    of its endpoints stay in the ball.
    """
    z = _nonzero(z)
    if len(dt.loop) >= ball.radius:
        raise DomainTooSmall("loop is too long for this radius")
    lifted = lift_edge_function(g, ball, f)
    mu = boundary_value(ball, lifted, z)
    inv = dt.inverse()
    coverage = 0
    failures = []
    for w in range(ball.num_frontier):
        a = ball.frontier_vertex(w)
        b = apply_deck(inv, ball, a)
        bp = apply_deck(inv, ball, ball.parent[a])
        if b is None or bp is None:
            continue
        if ball.parent[b] == bp:
            pulled = mu.of_edge(2 * b)
        else:
            pulled = mu.of_edge(2 * bp + 1)
        bracket = _word_bracket(dt.loop, ball.walk(a))
        coverage += 1
        if mu.values[w] != z ** (-bracket) * pulled:
            failures.append(w)
    if coverage == 0:
        raise DomainTooSmall("no frontier class has a computable preimage; increase R")
    return CheckResult(not failures, coverage, failures)


def horocycle_instances(dt: DeckTransform, ball: TreeBall, max_depth=None):
    """Yield ``(x, omega, gx, g_omega)`` for every pair where both sides are computable."""
    limit = ball.radius - 1 if max_depth is None else min(max_depth, ball.radius - 1)
    images = {w: deck_image_class(dt, ball, w) for w in range(ball.num_frontier)}
    for x in range(ball.num_vertices):
        if ball.depth[x] > limit:
            break
        gx = apply_deck(dt, ball, x)
        if gx is None or ball.depth[gx] >= ball.radius:
            continue
        for w, gw in images.items():
            if gw is not None:
                yield x, w, gx, gw


def horocycle_check(dt: DeckTransform, ball: TreeBall, max_depth=None) -> dict:
    """Both horocycle identities for a deck transformation on every computable pair.

    ``<gx, g omega> = <x, omega> + <go, g omega>`` over the pairs from
    :func:`horocycle_instances`, and ``<go, g omega> = -<g^-1 o, omega>``
    over the classes whose image is computable, given ``go`` and ``g^-1 o``
    lie strictly inside the ball.
    """
    go = apply_deck(dt, ball, 0)
    gio = apply_deck(dt.inverse(), ball, 0)
    inside = go is not None and ball.depth[go] < ball.radius
    first = []
    n_first = 0
    if inside:
        for x, w, gx, gw in horocycle_instances(dt, ball, max_depth):
            n_first += 1
            lhs = horocycle_bracket(ball, gx, gw)
            if lhs != horocycle_bracket(ball, x, w) + horocycle_bracket(ball, go, gw):
                first.append((x, w))
    second = []
    n_second = 0
    if inside and gio is not None and ball.depth[gio] < ball.radius:
        for w in range(ball.num_frontier):
            gw = deck_image_class(dt, ball, w)
            if gw is None:
                continue
            n_second += 1
            if horocycle_bracket(ball, go, gw) != -horocycle_bracket(ball, gio, w):
                second.append(w)
    return {
        "<gx, gw> = <x, w> + <go, gw>": CheckResult(n_first > 0 and not first, n_first, first),
        "<go, gw> = -<g^-1 o, w>": CheckResult(n_second > 0 and not second, n_second, second),
    }


def _agree(lhs: dict, rhs: dict, keys=None) -> CheckResult:
    keys = sorted(set(lhs) & set(rhs) if keys is None else keys)
    bad = [k for k in keys if lhs[k] != rhs[k]]
    return CheckResult(bool(keys) and not bad, len(keys), bad)


def poisson_suite(g: Graph, ball: TreeBall, mu: BoundaryMeasure, z, eigenvectors=()) -> dict:
    """Exact checks of the transforms of ``mu`` on a cover ball.

    ``eigenvectors`` are base-graph edge vectors in ``E_z``; each is lifted,
    turned into a boundary measure and transformed back. Every entry reports
    how many points it was checked on.
    """
    z = _nonzero(z)
    r = ball.radius
    p = vertex_poisson(ball, mu, z)
    pe = edge_poisson(ball, mu, z)
    out = {}

    lap = ball_edge_laplacian(ball, pe)
    out["eigen-equation"] = _agree(lap, {e: z * v for e, v in pe.items()})

    rel_l, rel_r = {}, {}
    for e in ball.edges:
        x, y = ball.iota(e), ball.tau(e)
        if x in p and y in p:
            rel_l[e] = z * p[y] - p[x]
            rel_r[e] = (z * z - 1) * pe[e]
    out["scalar/edge relation"] = _agree(rel_l, rel_r)

    sums = {x: sum((pe[e] for e in ball.out_edges(x)), Fraction(0)) for x in ball.interior_vertices()}
    out["vertex sum"] = _agree(sums, p)

    outward = {e: v for e, v in pe.items() if e % 2 == 0}
    pe1 = edge_poisson(ball, mu, 1)
    out["rescaling diagram"] = _agree(phi_rescale(ball, outward, z), {e: pe1[e] for e in outward})

    # The boundary value read off every outward edge, not only frontier ones.
    back = boundary_value(ball, pe, z)
    recovered = {("edge", e): z ** (-ball.depth[ball.iota(e)]) * v for e, v in outward.items()}
    recovered.update({("class", w): m for w, m in enumerate(back.values)})
    expected = {("edge", e): mu.of_edge(e) for e in outward}
    expected.update({("class", w): m for w, m in enumerate(mu.values)})
    out["boundary round trip"] = _agree(recovered, expected)
    out["inward extension"] = _agree(extend_eigenfunction(ball, outward, z), pe)

    probe = [Fraction((7 * e) % 5 - 2, 1 + e % 3) for e in range(g.num_dir_edges)]
    lifted = lift_edge_function(g, ball, probe)
    down = [sum((probe[s] for s in g.successors(e)), Fraction(0)) for e in range(g.num_dir_edges)]
    out["lift commutes with the edge Laplacian"] = _agree(
        ball_edge_laplacian(ball, lifted), lift_edge_function(g, ball, down)
    )

    if eigenvectors:
        total = 0
        bad = []
        for k, f in enumerate(eigenvectors):
            lf = lift_edge_function(g, ball, f)
            again = edge_poisson(ball, boundary_value(ball, lf, z), z)
            for e in again:
                if ball.depth[ball.tau(e)] < r:
                    total += 1
                    if again[e] != lf[e]:
                        bad.append((k, e))
        out["lifted eigenfunction round trip"] = CheckResult(total > 0 and not bad, total, bad)
    return out
