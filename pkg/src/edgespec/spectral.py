"""Edge and vertex operators of a finite graph and their exact eigenspaces.

All functions take a :class:`~edgespec.graph.Graph` and return exact
rational data. Edge functions are lists indexed by directed edge id and
vertex functions are lists indexed by vertex id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ExceptionalParameter, NotPruned, ZeroParameter
from .graph import (
    Graph,
    count_leaves,
    cyclomatic_number,
    is_bipartite,
    prune_dead_ends,
    spanning_tree,
)
from .linalg import RationalMatrix, nullspace, vectors_rank

__all__ = [
    "EdgeOperator",
    "edge_laplacian",
    "transition_matrix",
    "transfer_matrix",
    "sigma_matrix",
    "xi_matrix",
    "vertex_laplacian",
    "chi",
    "edge_eigenspace",
    "vertex_equalizer_space",
    "transfer_eigenspace",
    "vertex_sum",
    "vertex_to_edge",
    "spanning_tree_basis",
    "root_condition",
    "poisson_image_dim",
    "predicted_dims",
    "SpectralReport",
    "verify_topology_theorems",
    "qcc_report",
]

EDGE_LAPLACIAN = "EdgeLaplacian"
TRANSITION = "Transition"
TRANSFER = "Transfer"
SIGMA = "Sigma"
XI = "Xi"


@dataclass(frozen=True)
class EdgeOperator:
    matrix: RationalMatrix
    kind: str


def _successor_matrix(g: Graph) -> RationalMatrix:
    m = g.num_dir_edges
    return RationalMatrix(m, m, {(e, f): 1 for e in range(m) for f in g.successors(e)})


def edge_laplacian(g: Graph) -> EdgeOperator:
    return EdgeOperator(_successor_matrix(g), EDGE_LAPLACIAN)


def transition_matrix(g: Graph) -> EdgeOperator:
    m = g.num_dir_edges
    entries = {}
    for e in range(m):
        for f in g.out_edges[g.tau[e]]:
            if g.tau[f] != g.iota[e]:
                entries[(e, f)] = 1
    return EdgeOperator(RationalMatrix(m, m, entries), TRANSITION)


def transfer_matrix(g: Graph) -> EdgeOperator:
    return EdgeOperator(transition_matrix(g).matrix.transpose(), TRANSFER)


def sigma_matrix(g: Graph) -> EdgeOperator:
    m = g.num_dir_edges
    entries = {(e, f): 1 for e in range(m) for f in g.out_edges[g.iota[e]]}
    return EdgeOperator(RationalMatrix(m, m, entries), SIGMA)


def xi_matrix(g: Graph) -> EdgeOperator:
    m = g.num_dir_edges
    return EdgeOperator(RationalMatrix(m, m, {(e, e ^ 1): 1 for e in range(m)}), XI)


def vertex_laplacian(g: Graph) -> RationalMatrix:
    n = g.num_vertices
    entries = {}
    for x in range(n):
        w = Fraction(1, g.degree(x))
        for y in g.neighbors(x):
            entries[(x, y)] = w
    return RationalMatrix(n, n, entries)


def chi(z, qx: int) -> Fraction:
    z = Fraction(z)
    if z == 0:
        raise ZeroParameter("chi is undefined at z = 0")
    return (z + qx / z) / (qx + 1)


def _shifted(m: RationalMatrix, diag) -> RationalMatrix:
    entries = dict(m.entries)
    for i, d in enumerate(diag):
        entries[(i, i)] = entries.get((i, i), 0) - d
    return RationalMatrix(m.rows, m.cols, entries)


def edge_eigenspace(g: Graph, z) -> list:
    """Basis of ``ker(edge Laplacian - z)``."""
    z = Fraction(z)
    return nullspace(_shifted(edge_laplacian(g).matrix, [z] * g.num_dir_edges))


def transfer_eigenspace(g: Graph, z) -> list:
    z = Fraction(z)
    return nullspace(_shifted(transfer_matrix(g).matrix, [z] * g.num_dir_edges))


def vertex_equalizer_space(g: Graph, z) -> list:
    """Basis of ``ker(vertex Laplacian - diag chi(z))``."""
    diag = [chi(z, g.q(x)) for x in range(g.num_vertices)]
    return nullspace(_shifted(vertex_laplacian(g), diag))


def vertex_sum(g: Graph, f) -> list:
    return [sum((f[e] for e in g.out_edges[x]), Fraction(0)) for x in range(g.num_vertices)]


def vertex_to_edge(g: Graph, phi, z) -> list:
    """Edge function ``(z phi(tau e) - phi(iota e)) / (z^2 - 1)``."""
    z = Fraction(z)
    if z * z in (0, 1):
        raise ExceptionalParameter(f"vertex_to_edge needs z not in {{0, 1, -1}}, got {z}")
    d = z * z - 1
    return [(z * phi[g.tau[e]] - phi[g.iota[e]]) / d for e in range(g.num_dir_edges)]


def apply_edge_laplacian(g: Graph, f) -> list:
    return [sum((f[s] for s in g.successors(e)), Fraction(0)) for e in range(g.num_dir_edges)]


def _require_pruned(g: Graph):
    if any(g.degree(x) < 2 for x in range(g.num_vertices)):
        raise NotPruned("graph has dead ends; prune it first")


def _cycle_walk(g: Graph):
    """Directed edges of the unique cycle of a pruned graph with c = 1."""
    start = g.out_edges[0][0]
    walk = [start]
    e = start
    while True:
        (e,) = g.successors(e)
        if e == start:
            return walk
        walk.append(e)


def _unicyclic_basis(g: Graph, z: int) -> list:
    # A pruned graph with one independent cycle is the cycle itself.
    cycle = _cycle_walk(g)
    if z == -1 and len(cycle) % 2:
        return []
    basis = []
    for c1, C in ((1, 0), (0, 1)):
        f = [Fraction(0)] * g.num_dir_edges
        for i, e in enumerate(cycle):
            s = 1 if z == 1 or i % 2 == 0 else -1
            f[e] = Fraction(s * c1)
            f[e ^ 1] = Fraction(s * (C - c1)) if z == 1 else Fraction(s * (c1 - C))
        basis.append(f)
    return basis


def root_condition(g: Graph, tree) -> list:
    """Coefficients, one per non-tree edge, of the outflow at the root for z = -1.

    With ``f(e) = f(opp e)`` and the tree conditions imposed, the sum of ``f``
    over edges leaving the root equals the sum over non-tree edges ``e_j`` of
    ``(-1)^{d(iota e_j)} f(e_j) + (-1)^{d(tau e_j)} f(opp e_j)`` with tree
    distances to the root.
    """
    d = tree.depth
    return [(-1) ** d[g.iota[e]] + (-1) ** d[g.tau[e]] for e in tree.non_tree_dir_edges]


def spanning_tree_basis(g: Graph, z: int, root: int = 0) -> list:
    """Explicit basis of the z-eigenspace for z = 1 or z = -1.

    Free parameters are the values on non-tree edges; tree-edge values are
    back-solved from the deepest vertex towards the root, using the relation
    between ``f(e)`` and ``f(opp e)`` (antisymmetric for z = 1, symmetric for
    z = -1) and one eigen-equation per non-root vertex.
    """
    if z not in (1, -1):
        raise ExceptionalParameter("spanning_tree_basis only handles z = 1 or z = -1")
    _require_pruned(g)
    if cyclomatic_number(g) == 1:
        basis = _unicyclic_basis(g, z)
    else:
        basis = _tree_basis(g, z, root)
    out = []
    for f in basis:
        if apply_edge_laplacian(g, f) != [z * x for x in f]:
            raise AssertionError("spanning tree basis vector fails the eigen-equation")
        lead = next(x for x in f if x)
        out.append([x / lead for x in f])
    return out


def _tree_basis(g: Graph, z: int, root: int, impose_root: bool = True) -> list:
    tree = spanning_tree(g, root)
    free = tree.non_tree_dir_edges
    nfree = len(free)
    sign = -1 if z == 1 else 1  # f(opp e) = sign * f(e)

    # Each chosen-direction value as a linear form in the free parameters.
    forms = {}
    for j, e in enumerate(free):
        v = [0] * nfree
        v[j] = 1
        forms[e] = v

    def value(e):
        if e in forms:
            return forms[e]
        return [sign * a for a in forms[e ^ 1]]

    for e in reversed(tree.tree_dir_edges):
        acc = [0] * nfree
        for s in g.successors(e):
            for j, a in enumerate(value(s)):
                acc[j] += a
        forms[e] = [z * a for a in acc]  # divide by z, and 1/z = z here

    params = [[Fraction(int(i == j)) for j in range(nfree)] for i in range(nfree)]
    if impose_root and z == -1 and not is_bipartite(g)[0]:
        coeffs = root_condition(g, tree)
        p = next(j for j, c in enumerate(coeffs) if c)
        params = []
        for j in range(nfree):
            if j == p:
                continue
            v = [Fraction(0)] * nfree
            v[j] = Fraction(1)
            v[p] = Fraction(-coeffs[j], coeffs[p])
            params.append(v)

    basis = []
    for t in params:
        f = [Fraction(0)] * g.num_dir_edges
        for e, form in forms.items():
            val = sum((a * b for a, b in zip(form, t) if a), Fraction(0))
            f[e] = val
            f[e ^ 1] = sign * val
        basis.append(f)
    return basis


def poisson_image_dim(g: Graph, z: int) -> int:
    """Dimension of the span of vertex sums of the z-eigenspace, z = 1 or -1."""
    if z not in (1, -1):
        raise ExceptionalParameter("poisson_image_dim only handles z = 1 or z = -1")
    _require_pruned(g)
    return vectors_rank(vertex_sum(g, f) for f in edge_eigenspace(g, z))


def predicted_dims(c: int, bipartite: bool) -> dict:
    """Eigenspace and image dimensions at z = 1, -1 from topology alone."""
    if c == 1:
        e1, em1 = 2, (2 if bipartite else 0)
        i1, im1 = 1, (1 if bipartite else 0)
    else:
        e1, em1 = c, (c if bipartite else c - 1)
        i1, im1 = 0, 0
    return {"E_1": e1, "E_-1": em1, "image_1": i1, "image_-1": im1}


@dataclass
class SpectralReport:
    num_vertices: int
    num_edges: int
    cyclomatic: int
    bipartite: bool
    leaves: int
    pruned_vertices: int
    pruned_edges: int
    claims: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.claims.values())

    def add(self, name, computed, predicted):
        self.claims[name] = {
            "computed": computed,
            "predicted": predicted,
            "pass": computed == predicted,
        }


def verify_topology_theorems(g: Graph) -> SpectralReport:
    """Compare computed eigenspace dimensions with the topological predictions.

    The z = 0 claim uses the input graph; the z = +-1 claims use the pruned
    graph. If pruning leaves nothing, only the z = 0 claim is made.
    """
    pr = prune_dead_ends(g)
    h = pr.pruned
    leaves = count_leaves(g)
    report = SpectralReport(
        g.num_vertices,
        g.num_edges,
        cyclomatic_number(g),
        is_bipartite(g)[0],
        leaves,
        0 if h is None else h.num_vertices,
        0 if h is None else h.num_edges,
    )
    report.add("dim E_0", len(edge_eigenspace(g, 0)), leaves)
    if h is None:
        return report
    expected = predicted_dims(cyclomatic_number(h), is_bipartite(h)[0])
    report.add("dim E_1", len(edge_eigenspace(h, 1)), expected["E_1"])
    report.add("dim E_-1", len(edge_eigenspace(h, -1)), expected["E_-1"])
    report.add("image dim z=1", poisson_image_dim(h, 1), expected["image_1"])
    report.add("image dim z=-1", poisson_image_dim(h, -1), expected["image_-1"])
    return report


def qcc_report(g: Graph, zs) -> list:
    """Per z: vertex, edge and transfer eigenspace dimensions with agreement flags.

    All three must agree for z not in {1, -1}; at z = +-1 only the edge and
    transfer dimensions are required to agree.
    """
    rows = []
    for z in zs:
        z = Fraction(z)
        if z == 0:
            raise ZeroParameter("qcc_report needs z != 0")
        dv = len(vertex_equalizer_space(g, z))
        de = len(edge_eigenspace(g, z))
        dt = len(transfer_eigenspace(g, z))
        exceptional = z in (1, -1)
        required = de == dt if exceptional else dv == de == dt
        rows.append(
            {
                "z": z,
                "vertex": dv,
                "edge": de,
                "transfer": dt,
                "exceptional": exceptional,
                "vertex_agrees": dv == de,
                "pass": required,
            }
        )
    return rows
