"""Operator Hecke algebra of the (q+1)-regular tree.

Elements are combinations of words in ``D`` (edge Laplacian) and ``X``
(edge flip) modulo ``XX = Id`` and ``DXD = qX + (q-1)D``. A reduced word
contains neither ``XX`` nor ``DXD``, which leaves exactly the shapes

    D^m (m >= 0, D^0 = Id), X, D^m X, X D^m, X D^m X (m >= 1)

so the reduced word itself is the canonical key. :class:`BasisWord`
gives the tagged view of a key.

Matrix avatars act on a :func:`~edgespec.tree.regular_ball`. An operator
word is evaluated row by row: the row of ``w1 w2 ... wk`` at edge ``e`` is
the unit row vector at ``e`` multiplied through the generator matrices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import BadSymbol, InsufficientMargin, MixedQ, ZeroParameter
from .tree import BoundaryMeasure, CheckResult, TreeBall, edge_poisson, regular_ball, vertex_poisson

__all__ = [
    "BasisWord",
    "HeckeElement",
    "hecke_reduce",
    "hecke_mul",
    "hecke_word",
    "sigma_element",
    "word_avatar_row",
    "hecke_to_matrix",
    "ops_agree",
    "delta_measure",
    "apply_op",
    "poisson_action_check",
    "golden_table",
    "v1_projection_check",
    "v1_operator_check",
    "elements_agree",
    "k_type_dims",
    "random_word",
    "hecke_suite",
]

_TAGS = ("Dm", "X", "DmX", "XDm", "XDmX")


@dataclass(frozen=True, order=True)
class BasisWord:
    """Tagged normal-form word; ``Dm`` with ``m = 0`` is the identity."""

    tag: str
    m: int

    @classmethod
    def from_key(cls, key: str):
        if key == "X":
            return cls("X", 0)
        if key.startswith("X") and key.endswith("X"):
            return cls("XDmX", len(key) - 2)
        if key.startswith("X"):
            return cls("XDm", len(key) - 1)
        if key.endswith("X"):
            return cls("DmX", len(key) - 1)
        return cls("Dm", len(key))

    @property
    def key(self) -> str:
        d = "D" * self.m
        return {"Dm": d, "X": "X", "DmX": d + "X", "XDm": "X" + d, "XDmX": "X" + d + "X"}[self.tag]


def _rewrite_step(word: str, q: int, rng=None):
    """One rewrite of the first (or a random) redex, or ``None`` if reduced."""
    sites = []
    i = word.find("XX")
    while i >= 0:
        sites.append((i, "XX"))
        i = word.find("XX", i + 1)
    i = word.find("DXD")
    while i >= 0:
        sites.append((i, "DXD"))
        i = word.find("DXD", i + 1)
    if not sites:
        return None
    i, kind = rng.choice(sites) if rng is not None else min(sites)
    if kind == "XX":
        return [(Fraction(1), word[:i] + word[i + 2 :])]
    head, tail = word[:i], word[i + 3 :]
    return [(Fraction(q), head + "X" + tail), (Fraction(q - 1), head + "D" + tail)]


def _reduce_terms(q: int, terms, rng=None) -> dict:
    out = {}
    stack = list(terms)
    while stack:
        c, w = stack.pop()
        if not c:
            continue
        step = _rewrite_step(w, q, rng)
        if step is None:
            out[w] = out.get(w, 0) + c
        else:
            stack.extend((c * a, v) for a, v in step)
    return {w: c for w, c in out.items() if c}


class HeckeElement:
    """Exact combination of reduced words for a fixed ``q``."""

    __slots__ = ("q", "coeffs")

    def __init__(self, q: int, coeffs=None):
        if q < 1:
            raise ValueError("q must be at least 1")
        self.q = q
        self.coeffs = {}
        for w, c in (coeffs or {}).items():
            if set(w) - {"D", "X"}:
                raise BadSymbol(f"unknown generator in {w!r}")
            c = Fraction(c)
            if c:
                self.coeffs[w] = c
        if any(_rewrite_step(w, q) is not None for w in self.coeffs):
            self.coeffs = _reduce_terms(q, [(c, w) for w, c in self.coeffs.items()])

    @classmethod
    def identity(cls, q: int):
        return cls(q, {"": 1})

    def _same_q(self, other):
        if self.q != other.q:
            raise MixedQ(f"q = {self.q} and q = {other.q}")

    def __add__(self, other):
        self._same_q(other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return HeckeElement(self.q, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return HeckeElement(self.q, {w: c * v for w, v in self.coeffs.items()})

    def __mul__(self, other):
        return hecke_mul(self, other)

    def __eq__(self, other):
        return isinstance(other, HeckeElement) and self.q == other.q and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.q, frozenset(self.coeffs.items())))

    def basis(self) -> dict:
        return {BasisWord.from_key(w): c for w, c in self.coeffs.items()}

    def to_json(self) -> dict:
        from .linalg import format_rational

        return {(w or "Id"): format_rational(c) for w, c in sorted(self.coeffs.items(), key=_word_order)}

    def __str__(self):
        if not self.coeffs:
            return "0"
        from .linalg import format_rational

        return " + ".join(
            f"{format_rational(c)}·{w or 'Id'}" for w, c in sorted(self.coeffs.items(), key=_word_order)
        )

    __repr__ = __str__


def _word_order(item):
    # shorter words first, X before D
    w = item[0]
    return (len(w), w.replace("X", "0"))


def hecke_reduce(q: int, word: str, rng=None) -> HeckeElement:
    """Normal form of a word over ``{D, X}``; ``rng`` picks redexes at random."""
    word = word.strip()
    if set(word) - {"D", "X"}:
        raise BadSymbol(f"words use only D and X, got {word!r}")
    if q < 1:
        raise ValueError("q must be at least 1")
    el = HeckeElement.__new__(HeckeElement)
    el.q = q
    el.coeffs = _reduce_terms(q, [(Fraction(1), word)], rng)
    return el


def hecke_word(q: int, word: str) -> HeckeElement:
    return hecke_reduce(q, word)


def hecke_mul(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    a._same_q(b)
    terms = [(x * y, u + v) for u, x in a.coeffs.items() for v, y in b.coeffs.items()]
    el = HeckeElement.__new__(HeckeElement)
    el.q = a.q
    el.coeffs = _reduce_terms(a.q, terms)
    return el


def sigma_element(q: int) -> HeckeElement:
    """``Sigma = X D + Id``."""
    return HeckeElement(q, {"XD": 1, "": 1})


# matrix avatars on tree balls


def _int_row(ball: TreeBall, word: str, e: int) -> dict:
    succ, starts = ball.step_tables()
    row = {e: 1}
    for letter in word:
        if letter == "X":
            row = {f ^ 1: c for f, c in row.items()}
            continue
        if letter == "I":
            continue
        if letter == "D":
            table = succ
        elif letter == "S":
            table = starts
        else:
            raise BadSymbol(f"unknown operator letter {letter!r}")
        nxt = {}
        for f, c in row.items():
            nb = table[f]
            if nb is None:
                raise InsufficientMargin(f"letter {letter} at edge {f} reaches past the frontier")
            for g in nb:
                nxt[g] = nxt.get(g, 0) + c
        row = {g: c for g, c in nxt.items() if c}
    return row


def word_avatar_row(ball: TreeBall, word: str, e: int) -> dict:
    """Row ``e`` of the operator ``word`` (letters D, X, S for Sigma, I)."""
    return {f: Fraction(c) for f, c in _int_row(ball, word, e).items()}


def _terms(elem):
    if isinstance(elem, HeckeElement):
        return list(elem.coeffs.items())
    return list(elem.items())


def _margin(elem) -> int:
    return max((w.count("D") + w.count("S") for w, _ in _terms(elem)), default=0)


def _limit(ball: TreeBall, need: int, margin) -> int:
    margin = need if margin is None else margin
    if margin < need:
        raise InsufficientMargin(f"margin {margin} is below the {need} steps the words need")
    if margin >= ball.radius:
        raise InsufficientMargin(f"margin {margin} leaves no edges at radius {ball.radius}")
    return ball.radius - margin


def _scaled_matrix(elem, ball: TreeBall, limit: int):
    """``(scale, rows)`` with integer rows equal to ``scale`` times the avatar."""
    terms = _terms(elem)
    scale = lcm(*(Fraction(c).denominator for _, c in terms)) if terms else 1
    ints = [(w, int(Fraction(c) * scale)) for w, c in terms]
    out = {}
    for e in ball.edges_up_to(limit):
        row = {}
        for w, c in ints:
            for f, a in _int_row(ball, w, e).items():
                row[f] = row.get(f, 0) + c * a
        out[e] = {f: a for f, a in row.items() if a}
    return scale, out


def hecke_to_matrix(elem, ball: TreeBall, margin=None) -> dict:
    """Rows of ``elem`` at every edge of level at most ``R - margin``.

    ``elem`` is a :class:`HeckeElement` or a plain ``{word: coeff}`` map whose
    words may also use ``S`` (Sigma) and ``I``.
    """
    limit = _limit(ball, _margin(elem), margin)
    scale, rows = _scaled_matrix(elem, ball, limit)
    return {e: {f: Fraction(a, scale) for f, a in row.items()} for e, row in rows.items()}


def ops_agree(a: dict, b: dict) -> CheckResult:
    common = sorted(set(a) & set(b))
    bad = [e for e in common if a[e] != b[e]]
    return CheckResult(bool(common) and not bad, len(common), bad)


def elements_agree(a, b, ball: TreeBall) -> CheckResult:
    """Compare two operator combinations row by row where both are defined."""
    limit = _limit(ball, max(_margin(a), _margin(b)), None)
    sa, ra = _scaled_matrix(a, ball, limit)
    sb, rb = _scaled_matrix(b, ball, limit)
    bad = []
    for e in sorted(ra):
        x = {f: v * sb for f, v in ra[e].items()}
        y = {f: v * sa for f, v in rb[e].items()}
        if x != y:
            bad.append(e)
    return CheckResult(bool(ra) and not bad, len(ra), bad)


def free_mul(a: dict, b: dict) -> dict:
    """Product of ``{word: coeff}`` maps without any reduction."""
    out = {}
    for u, x in a.items():
        for v, y in b.items():
            out[u + v] = out.get(u + v, 0) + x * y
    return {w: c for w, c in out.items() if c}


def free_add(*parts) -> dict:
    out = {}
    for scale, p in parts:
        for w, c in p.items():
            out[w] = out.get(w, 0) + Fraction(scale) * c
    return {w: c for w, c in out.items() if c}


# Poisson images on the regular tree


def delta_measure(ball: TreeBall, omega: int) -> BoundaryMeasure:
    values = [0] * ball.num_frontier
    values[omega] = 1
    return BoundaryMeasure(ball, values)


def apply_op(ball: TreeBall, letter: str, f: dict) -> dict:
    """Apply D, X, S or I to a partial edge function where all inputs are known."""
    if letter == "X":
        return {e ^ 1: v for e, v in f.items()}
    if letter == "I":
        return dict(f)
    if letter not in ("D", "S"):
        raise BadSymbol(f"unknown operator letter {letter!r}")
    succ, starts = ball.step_tables()
    table = succ if letter == "D" else starts
    out = {}
    for e, nb in enumerate(table):
        if nb is None:
            continue
        try:
            out[e] = sum(f[g] for g in nb)
        except KeyError:
            pass
    return out


def _check(lhs: dict, parts) -> CheckResult:
    """``lhs == sum(c * p)`` on the common domain, in integer arithmetic when possible."""
    parts = [(Fraction(c), p) for c, p in parts]
    scale = lcm(*(c.denominator for c, _ in parts)) if parts else 1
    ints = [(int(c * scale), p) for c, p in parts]
    keys = set(lhs).intersection(*(p.keys() for _, p in parts))
    bad = sorted(e for e in keys if lhs[e] * scale != sum(c * p[e] for c, p in ints))
    return CheckResult(bool(keys) and not bad, len(keys), bad)


def _transforms(ball, mu, z):
    p = vertex_poisson(ball, mu, z)
    pe = edge_poisson(ball, mu, z)
    pi = {e: p[ball.iota(e)] for e in ball.edges if ball.iota(e) in p}
    return p, pe, pi


def _scaled_transforms(ball, mu, z):
    """Edge and pulled-back vertex transforms times one common integer.

    With ``z = a/b`` and depth at most ``R``, every power ``z^k`` that occurs
    becomes an integer after multiplying by ``(ab)^R``, so the recursion of
    the vertex transform runs entirely in integers.
    """
    z = Fraction(z)
    if z == 0:
        raise ZeroParameter("spectral parameter must be nonzero")
    a, b = z.numerator, z.denominator
    r = ball.radius
    scale = lcm(*(v.denominator for v in mu.values))
    prefix = [0]
    for v in mu.values:
        prefix.append(prefix[-1] + v.numerator * (scale // v.denominator))
    lo, hi, depth, parent = ball.lo, ball.hi, ball.depth, ball.parent
    pw = {k: a ** (r + k) * b ** (r - k) for k in range(-r, r + 1)}
    p = [0] * ball.frontier_start
    p[0] = prefix[-1] * pw[0]
    pe = {}
    for v in range(1, ball.num_vertices):
        d = depth[v]
        m = prefix[hi[v]] - prefix[lo[v]]
        pe[2 * v] = pw[d - 1] * m
        if d < r:
            p[v] = p[parent[v]] * b // a + (pw[d] - pw[d - 2]) * m
            pe[2 * v + 1] = p[v] - pw[d] * m
    pi = {e: p[ball.iota(e)] for e in ball.edges if ball.depth[ball.iota(e)] < r}
    return pe, pi


def _action_checks(q, z, pe, pi, ball):
    zi = 1 / z
    x_pi = apply_op(ball, "X", pi)
    return {
        "D Pe = z Pe": _check(apply_op(ball, "D", pe), [(z, pe)]),
        "X Pe = z^-1 Pi - z^-1 Pe": _check(apply_op(ball, "X", pe), [(zi, pi), (-zi, pe)]),
        "X Pi = z^-1 Pi + (z - z^-1) Pe": _check(x_pi, [(zi, pi), (z - zi, pe)]),
        "D Pi = q z^-1 Pi + q (z - z^-1) Pe": _check(
            apply_op(ball, "D", pi), [(q * zi, pi), (q * (z - zi), pe)]
        ),
        "S Pe = Pi": _check(apply_op(ball, "S", pe), [(1, pi)]),
        "S Pi = (q+1) Pi": _check(apply_op(ball, "S", pi), [(q + 1, pi)]),
        "S X Pi = (z + q z^-1) Pi": _check(apply_op(ball, "S", x_pi), [(z + q * zi, pi)]),
    }


def poisson_action_check(q: int, z, mu: BoundaryMeasure, ball: TreeBall) -> dict:
    """The seven Hecke-action identities on edge and pulled-back vertex transforms.

    Every identity is homogeneous, so both transforms are scaled to integers
    by one common factor before the operators are applied.
    """
    z = Fraction(z)
    pe, pi = _scaled_transforms(ball, mu, z)
    return _action_checks(q, z, pe, pi, ball)


def _op_at(ball, word, f, e):
    return sum((c * f[g] for g, c in _int_row(ball, word, e).items()), Fraction(0))


def golden_table(q: int, z, ball: TreeBall) -> dict:
    """Values at ``e1`` (base to its first neighbour) for unit masses on either side.

    ``omega+`` is the first frontier class behind ``e1`` and ``omega-`` the
    first one behind its opposite. Each entry is ``(computed, expected)``.
    """
    z = Fraction(z)
    v1 = ball.children[0][0]
    e1 = 2 * v1
    plus = ball.lo[v1]
    minus = ball.lo[ball.children[0][1]]
    rows = {}
    for name, omega, s in (("+", plus, 1), ("-", minus, -1)):
        p, pe, pi = _transforms(ball, delta_measure(ball, omega), z)
        rows[f"P d{name} (o)"] = (p[0], Fraction(1))
        rows[f"Pe d{name} (e1)"] = (pe[e1], Fraction(1 if s > 0 else 0))
        rows[f"D Pe d{name} (e1)"] = (_op_at(ball, "D", pe, e1), z if s > 0 else Fraction(0))
        rows[f"X Pe d{name} (e1)"] = (_op_at(ball, "X", pe, e1), Fraction(0) if s > 0 else 1 / z)
        rows[f"D Pi d{name} (e1)"] = (_op_at(ball, "D", pi, e1), q * z**s)
        rows[f"X Pi d{name} (e1)"] = (_op_at(ball, "X", pi, e1), z**s)
    return rows


def _projector(q: int) -> dict:
    """``Id - Sigma/(q+1)`` with Sigma as the letter ``S``."""
    return {"I": Fraction(1), "S": Fraction(-1, q + 1)}


def _v1_checks(q, z, pe, pi, ball):
    g = {e: (q + 1) * pe[e] - pi[e] for e in pe.keys() & pi.keys()}

    def proj(f):
        s = apply_op(ball, "S", f)
        return {e: (q + 1) * f[e] - v for e, v in s.items() if e in f}

    def shift(f):  # D - qX
        d = apply_op(ball, "D", f)
        return {e: v - q * f[e ^ 1] for e, v in d.items() if e ^ 1 in f}

    return {
        "X0 g = (z + q/z) g": _check(proj(shift(g)), [((q + 1) * (z + q / z), g)]),
        "projector fixes g": _check(proj(g), [(q + 1, g)]),
        "projector kills Pi": _check(proj(pi), []),
    }


def v1_projection_check(q: int, z, mu: BoundaryMeasure, ball: TreeBall) -> dict:
    """Eigenvalue of ``X0`` on the V1 part ``g = Pe - Pi/(q+1)`` of the transforms.

    Works with ``(q+1) g`` and the scaled projector ``(q+1) Id - Sigma``.
    """
    z = Fraction(z)
    pe, pi = _scaled_transforms(ball, mu, z)
    return _v1_checks(q, z, pe, pi, ball)


def v1_operator_check(q: int, ball: TreeBall, n_max: int = 4) -> dict:
    """The ``X_n`` recursion and ``X0^n = P (D - qX)^n`` as operator identities."""
    shift_w = {"D": Fraction(1), "X": Fraction(-q)}
    proj_w = _projector(q)

    def x_def(n):
        return free_mul(free_mul(proj_w, {"D" * n: Fraction(1)}), shift_w)

    out = {}
    xs = [x_def(0), x_def(1)]
    for n in range(2, n_max + 1):
        rec = free_add((1, free_mul(xs[n - 1], shift_w)), (-q, xs[n - 2]))
        xs.append(rec)
        out[f"X{n} recursion"] = elements_agree(x_def(n), rec, ball)
    power = {"": Fraction(1)}
    x0 = x_def(0)
    x0_pow = {"": Fraction(1)}
    # X0 carries two margin steps, so powers are limited by the radius.
    for n in range(1, min(n_max, (ball.radius - 1) // 2) + 1):
        power = free_mul(power, shift_w)
        x0_pow = free_mul(x0_pow, x0)
        out[f"X0^{n} = P (D - qX)^{n}"] = elements_agree(x0_pow, free_mul(proj_w, power), ball)
    return out


def k_type_dims(q: int, i: int) -> int:
    """Dimension of the i-th K-type, counted on a tree ball.

    For ``i >= 2`` this is the number of edges pointing away from the base at
    distance ``i - 1`` minus those at distance ``i - 2``.
    """
    if q < 2 or i < 0:
        raise ValueError("need q >= 2 and i >= 0")
    if i == 0:
        return 1
    if i == 1:
        return q
    ball = regular_ball(q, i)
    counts = [0] * (ball.radius + 1)
    for v in range(1, ball.num_vertices):
        counts[ball.depth[v] - 1] += 1
    return counts[i - 1] - counts[i - 2]


def random_word(rng, max_len: int) -> str:
    return "".join(rng.choice("DX") for _ in range(rng.randint(1, max_len)))


def hecke_suite(q: int, zs, radius: int = 8, seed: int = 0, n_words: int = 100, n_random: int = 5) -> dict:
    """Every regular-tree check for one ``q``.

    Returns ``{"checks": {name: CheckResult}, "golden": {z: table},
    "k_types": {i: (computed, predicted)}}``.
    """
    ball = regular_ball(q, radius)
    rng = random.Random(seed)
    checks = {}
    checks["X X = Id"] = elements_agree({"XX": 1}, {"": 1}, ball)
    checks["D X D = q X + (q-1) D"] = elements_agree({"DXD": 1}, {"X": q, "D": q - 1}, ball)

    rows, bad = 0, []
    for _ in range(n_words):
        w = random_word(rng, 6)
        nf = hecke_reduce(q, w)
        res = elements_agree({w: 1}, nf, ball)
        rows += res.coverage
        if not res or hecke_reduce(q, w, rng) != nf:
            bad.append(w)
    checks[f"{n_words} random words: normal form = avatar"] = CheckResult(rows > 0 and not bad, rows, bad)

    measures = [
        ("delta+", delta_measure(ball, ball.lo[ball.children[0][0]])),
        ("delta-", delta_measure(ball, ball.lo[ball.children[0][1]])),
    ]
    for k in range(n_random):
        values = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(ball.num_frontier)]
        measures.append((f"random{k}", BoundaryMeasure(ball, values)))
    golden = {}
    for z in zs:
        z = Fraction(z)
        for label, mu in measures:
            pe, pi = _scaled_transforms(ball, mu, z)
            for name, res in _action_checks(q, z, pe, pi, ball).items():
                checks[f"z={z} {label}: {name}"] = res
            for name, res in _v1_checks(q, z, pe, pi, ball).items():
                checks[f"z={z} {label}: {name}"] = res
        table = golden_table(q, z, ball)
        golden[z] = table
        for name, (got, want) in table.items():
            checks[f"z={z} golden {name}"] = CheckResult(got == want, 1, [] if got == want else [name])
    checks.update(v1_operator_check(q, ball))

    k_types = {}
    for i in range(6):
        predicted = 1 if i == 0 else q if i == 1 else q**i - q ** (i - 2)
        k_types[i] = (k_type_dims(q, i), predicted)
        checks[f"K-type {i} dimension"] = CheckResult(k_types[i][0] == predicted, 1, [])
    return {"checks": checks, "golden": golden, "k_types": k_types}
