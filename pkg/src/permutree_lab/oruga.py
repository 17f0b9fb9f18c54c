"""The s-oruga graph: flow/word/tree bijections, triangulation cliques, and
the exact tropical realization of the s-permutahedron.

Vertices are coded 0..n+1 (0 is the extra source, n+1 the sink); the edge
e^k_t is the id ("e", k, t).  Level k in [n] carries the bump ("e", k, 0) and
dip ("e", k, s_k) between vertices n+1-k and n+2-k; sources ("e", k, t) with
0 < t < s_k leave vertex 0, plus the single source ("e", n+1, 1) into vertex 1.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from . import flows as fl
from .errors import ValidationError
from .posets import Hasse
from .s_weak_order import (
    all_words,
    ascents,
    blocks,
    check_composition,
    check_word,
    count_s_trees,
    transpose_ascent,
)


def build_oru(s) -> fl.FramedGraph:
    """The framed s-oruga graph (s strict; s_{n+1} = 2 internally).

    >>> len(build_oru((2, 3, 2, 2)).edges)  # |s| + n + 1
    14
    """
    s = check_composition(s, strict=True)
    n = len(s)
    full = s + (2,)
    edges = {}
    for k in range(1, n + 2):
        for t in range(1, full[k - 1]):
            edges[("e", k, t)] = (0, n + 2 - k)
    for k in range(1, n + 1):
        edges[("e", k, 0)] = (n + 1 - k, n + 2 - k)
        edges[("e", k, s[k - 1])] = (n + 1 - k, n + 2 - k)
    framing = {}
    for v in range(1, n + 1):
        k_in = n + 2 - v
        k_out = n + 1 - v
        ins = [("e", k_in, t) for t in range(full[k_in - 1] + 1) if ("e", k_in, t) in edges]
        outs = [("e", k_out, 0), ("e", k_out, s[k_out - 1])]
        framing[v] = {"in": ins, "out": outs}
    return fl.FramedGraph(n + 1, edges, framing)


def contracted_oru(s) -> fl.FramedGraph:
    """Test utility: oru(s) with the edge (v_-1, v_0) contracted."""
    s = check_composition(s, strict=True)
    n = len(s)
    edges = {}
    for k in range(1, n + 1):
        for t in range(1, s[k - 1]):
            edges[("e", k, t)] = (0, n + 1 - k)
        edges[("e", k, 0)] = (n - k, n + 1 - k)
        edges[("e", k, s[k - 1])] = (n - k, n + 1 - k)
    framing = {}
    for v in range(1, n):
        k_in = n + 1 - v
        ins = [("e", k_in, t) for t in range(s[k_in - 1] + 1) if ("e", k_in, t) in edges]
        k_out = n - v
        outs = [("e", k_out, 0), ("e", k_out, s[k_out - 1])]
        framing[v] = {"in": ins, "out": outs}
    return fl.FramedGraph(n, edges, framing)


def oru_route(s, k, t, bits):
    """The route R(k, t, delta): source into level k, then bumps/dips down.

    `bits` lists delta_1..delta_{k-1}; bit a picks the dip at level a.
    """
    s = check_composition(s, strict=True)
    n = len(s)
    full = s + (2,)
    if not 1 <= k <= n + 1 or not 1 <= t <= full[k - 1] - 1:
        raise ValidationError(f"no source edge e^{k}_{t}")
    if len(bits) != k - 1:
        raise ValidationError(f"need {k - 1} bump/dip choices for k={k}")
    route = [("e", k, t)]
    for a in range(k - 1, 0, -1):
        route.append(("e", a, s[a - 1] if bits[a - 1] else 0))
    return tuple(route)


def route_params(route, s):
    """Inverse of `oru_route`: recover (k, t, bits)."""
    s = check_composition(s, strict=True)
    _, k, t = route[0]
    bits = [0] * (k - 1)
    for _, a, ta in route[1:]:
        bits[a - 1] = 0 if ta == 0 else 1
    return k, t, tuple(bits)


def all_bump_route(s):
    return oru_route(s, len(s) + 1, 1, (0,) * len(s))


def all_dip_route(s):
    return oru_route(s, len(s) + 1, 1, (1,) * len(s))


# --- d-flows <-> Stirling s-permutations <-> s-decreasing trees -------------


def word_to_flow(w, s):
    """Integer d-flow of a word: the bump at level i carries the number of
    letters exceeding i that precede the i-block.

    >>> f = word_to_flow((3,3,7,2,5,4,5,5,7,1,6), (1,1,2,1,3,1,2))
    >>> [f[("e", i, 0)] for i in range(1, 7)]
    [9, 3, 0, 2, 1, 2]
    """
    w = check_word(w, s)
    n = len(s)
    spans = blocks(w)
    flow = {e: 0 for e in build_oru(s).edges}
    tail = 0
    for i in range(n - 1, 0, -1):
        tail += s[i]
        bump = sum(1 for v in w[: spans[i][0]] if v > i)
        flow[("e", i, 0)] = bump
        flow[("e", i, s[i - 1])] = tail - bump
    return flow


def bumps_to_word(bumps, s):
    """Insertion: place the copies of v at gap `bumps[v]` of the word so far."""
    s = check_composition(s, strict=True)
    n = len(s)
    word = [n] * s[n - 1]
    for v in range(n - 1, 0, -1):
        k = bumps[v]
        if not 0 <= k <= len(word):
            raise ValidationError(f"bump flow {k} at level {v} out of range")
        word[k:k] = [v] * s[v - 1]
    return tuple(word)


def flow_to_word(flow, s):
    """Inverse of `word_to_flow`; checks conservation first."""
    graph = build_oru(s)
    d = fl.netflow_d(graph)
    for v in range(1, graph.n):
        into = sum(flow[e] for e in graph.incoming[v])
        outof = sum(flow[e] for e in graph.outgoing[v])
        if into + d[v] != outof:
            raise ValidationError(f"flow violates conservation at vertex {v}")
    n = len(s)
    return bumps_to_word({i: flow[("e", i, 0)] for i in range(1, n)}, s)


def flow_to_tree(flow_or_bumps, s):
    """Grafting construction; works for weak compositions as well."""
    s = check_composition(s)
    n = len(s)
    if n == 0:
        return None
    bumps = dict(flow_or_bumps)
    if bumps and not isinstance(next(iter(bumps)), int):
        bumps = {i: flow_or_bumps[("e", i, 0)] for i in range(1, n)}
    tree = (n, (None,) * (s[n - 1] + 1))

    def graft(t, target, new, counter):
        label, children = t
        cs = list(children)
        for idx, ch in enumerate(cs):
            if ch is None:
                if counter[0] == target:
                    cs[idx] = new
                    counter[0] += 1
                    return (label, tuple(cs)), True
                counter[0] += 1
            else:
                cs[idx], done = graft(ch, target, new, counter)
                if done:
                    return (label, tuple(cs)), True
        return (label, tuple(cs)), False

    for v in range(n - 1, 0, -1):
        node = (v, (None,) * (s[v - 1] + 1))
        tree, done = graft(tree, bumps[v], node, [0])
        if not done:
            raise ValidationError(f"graft position {bumps[v]} out of range at node {v}")
    return tree


def tree_to_flow(tree, s):
    """Bump flows of a tree: leaf index at grafting time, per node.

    Walking the tree with all labels below v read as leaves, bump v is the
    number of leaves passed before reaching node v.
    """
    s = check_composition(s)
    n = len(s)
    bumps = {}

    def seek(t, v, counter):
        _, children = t
        for ch in children:
            if ch is None or ch[0] < v:
                counter[0] += 1
            elif ch[0] == v:
                return counter[0]
            else:
                got = seek(ch, v, counter)
                if got is not None:
                    return got
        return None

    for v in range(1, n):
        bumps[v] = seek(tree, v, [0])
        if bumps[v] is None:
            raise ValidationError(f"node {v} missing from the tree")
    return bumps


# --- cliques of the triangulation -------------------------------------------


_route_intern = {}


def _prefix_route(counts, s):
    n = len(s)
    c = next((v for v in range(1, n + 1) if 0 < counts[v - 1] < s[v - 1]), n + 1)
    t = 1 if c == n + 1 else counts[c - 1]
    bits = tuple(1 if counts[a - 1] else 0 for a in range(1, c))
    route = oru_route(s, c, t, bits)
    return _route_intern.setdefault(route, route)


def prefix_route(w, s, length):
    """R[w_{[length]}]: the route attached to a prefix of a word."""
    counts = [0] * (len(s) + 1)
    for v in tuple(w)[:length]:
        counts[v - 1] += 1
    return _prefix_route(counts, s)


def delta_w(w, s):
    """Maximal clique of the triangulation: one route per prefix of w.

    Contains both exceptional routes (empty and full prefixes) and |s|+1
    routes in total.
    """
    w = check_word(w, s)
    routes = []
    counts = [0] * (len(s) + 1)
    for i in range(len(w) + 1):
        routes.append(_prefix_route(counts, s))
        if i < len(w):
            counts[w[i] - 1] += 1
    clique = frozenset(routes)
    assert len(clique) == sum(s) + 1
    return clique


def face_simplex(w, A, s):
    """Interior simplex of a face (w, A): drop the routes whose prefixes end
    exactly at an ascent of A."""
    w = check_word(w, s)
    A = frozenset(A)
    asc = set(ascents(w))
    if not A <= asc:
        raise ValidationError(f"A must be a set of ascents of {w}")
    spans = blocks(w)
    cut_lengths = {spans[a][1] + 1 for (a, c) in A}
    keep = []
    counts = [0] * (len(s) + 1)
    for i in range(len(w) + 1):
        if i not in cut_lengths:
            keep.append(_prefix_route(counts, s))
        if i < len(w):
            counts[w[i] - 1] += 1
    return frozenset(keep)


def hasse_from_adjacency(s, cap=None) -> Hasse:
    """Dual graph of the triangulation, oriented by the conflict rule.

    Nodes are the maximal cliques; two cliques are adjacent when they share
    a facet.  Isomorphic to the s-weak order via w -> delta_w.
    """
    s = check_composition(s, strict=True)
    graph = build_oru(s)
    cliques = {delta_w(w, s): w for w in all_words(s)}
    covers = [
        (cliques[lo], cliques[hi])
        for lo, hi in fl.dual_adjacency_covers(graph, list(cliques))
    ]
    return Hasse(sorted(cliques.values()), set(covers))


# --- heights and the tropical realization ------------------------------------


def oruga_height(route_or_params, s, eps) -> Fraction:
    """h_eps(R) = -sum_{k >= c > a >= 1} eps^(c-a) (t_c + delta_a)^2, exact.

    Coincides with the generic framed-graph height on oru(s).
    """
    s = check_composition(s, strict=True)
    eps = Fraction(eps)
    if eps <= 0:
        raise ValidationError("eps must be positive")
    if isinstance(route_or_params, tuple) and route_or_params and isinstance(
        route_or_params[0], tuple
    ):
        k, t, bits = route_params(route_or_params, s)
    else:
        k, t, bits = route_or_params
    levels = {k: t}
    for a in range(1, k):
        levels[a] = s[a - 1] if bits[a - 1] else 0
    total = Fraction(0)
    for c in range(2, k + 1):
        for a in range(1, c):
            da = 1 if (a < k and bits[a - 1]) else 0
            total -= eps ** (c - a) * (levels[c] + da) ** 2
    return total


def admissibility_bound(s) -> Fraction:
    """eps below 1 / (n (1 + sum_{j=2}^n (2 s_j + 1))) certifies h_eps."""
    s = check_composition(s, strict=True)
    n = len(s)
    return Fraction(1, n * (1 + sum(2 * s[j - 1] + 1 for j in range(2, n + 1))))


def default_epsilon(s) -> Fraction:
    return admissibility_bound(s) / 2


class Realization:
    """Exact tropical realization of the s-permutahedron.

    `vertices` maps each Stirling s-permutation to its point in Q^n; `edges`
    records each cover (w, w') with its direction pair (a, c) and the strictly
    positive scalar lambda in v(w') - v(w) = lambda (e_a - e_c).
    """

    def __init__(self, s, eps, vertices, edges, support):
        self.s = s
        self.eps = eps
        self.vertices = vertices
        self.edges = edges
        self.support = support  # permutation (tuple) -> word w^sigma

    def coordinate_sum(self) -> Fraction:
        return oruga_height(all_bump_route(self.s), self.s, self.eps) - oruga_height(
            all_dip_route(self.s), self.s, self.eps
        )

    def to_json(self, approx=None):
        def num(x):
            if approx is not None:
                return round(float(x), approx)
            return {"num": x.numerator, "den": x.denominator}

        return {
            "s": list(self.s),
            "epsilon": {"num": self.eps.numerator, "den": self.eps.denominator},
            "vertices": {
                ",".join(map(str, w)): [num(x) for x in pt]
                for w, pt in sorted(self.vertices.items())
            },
            "edges": [
                {
                    "from": ",".join(map(str, w1)),
                    "to": ",".join(map(str, w2)),
                    "direction": [a, c],
                    "scalar": num(scal),
                }
                for (w1, w2, (a, c), scal) in self.edges
            ],
        }


def vertex_coordinates(w, s, eps):
    """v(w)_a: telescoping height differences around each occurrence of a."""
    w = check_word(w, s)
    n = len(s)
    heights = {}

    def h(length):
        if length not in heights:
            heights[length] = oruga_height(prefix_route(w, s, length), s, eps)
        return heights[length]

    coords = []
    for a in range(1, n + 1):
        occ = [k for k, v in enumerate(w) if v == a]
        coords.append(sum(h(k) - h(k + 1) for k in occ))
    return tuple(coords)


def realize(s, eps=None) -> Realization:
    """Exact vertex/edge data of the s-permutahedron for an admissible eps.

    Refuses inadmissible heights, naming a violated minimal conflict.
    """
    s = check_composition(s, strict=True)
    eps = default_epsilon(s) if eps is None else Fraction(eps)
    graph = build_oru(s)
    rs = fl.routes(graph)
    h = {r: oruga_height(r, s, eps) for r in rs}
    ok, witness = fl.is_admissible(graph, h, all_routes=rs, witness=True)
    if not ok:
        raise ValidationError(
            f"eps={eps} is not admissible for s={s}", witness=witness
        )
    words = all_words(s)
    vertices = {w: vertex_coordinates(w, s, eps) for w in words}
    edges = []
    for w in words:
        spans = blocks(w)
        for (a, c) in ascents(w):
            w2 = transpose_ascent(w, (a, c), s)
            start, end = spans[a]
            lam = (
                h[prefix_route(w2, s, start + 1)]
                + h[prefix_route(w, s, end + 1)]
                - h[prefix_route(w, s, start)]
                - h[prefix_route(w, s, end + 2)]
            )
            if lam <= 0:
                raise AssertionError(f"edge scalar not positive at {w} + {(a, c)}")
            diff = tuple(x - y for x, y in zip(vertices[w2], vertices[w]))
            want = tuple(
                lam if i == a else (-lam if i == c else Fraction(0))
                for i in range(1, len(s) + 1)
            )
            if diff != want:
                raise AssertionError(f"edge direction mismatch at {w} + {(a, c)}")
            edges.append((w, w2, (a, c), lam))
    support = {
        sigma: tuple(v for v in sigma for _ in range(s[v - 1]))
        for sigma in permutations(range(1, len(s) + 1))
    }
    return Realization(s, eps, vertices, edges, support)


# --- Lidskii identities -------------------------------------------------------


def _gbinom(m, k) -> int:
    """Generalized binomial C(m, k) for integer m (possibly negative), k >= 0."""
    num = 1
    for i in range(k):
        num *= m - i
    den = 1
    for i in range(1, k + 1):
        den *= i
    q, r = divmod(num, den)
    assert r == 0
    return q


def _multiset_binom(m, k) -> int:
    return _gbinom(m + k - 1, k)


def lidskii_identities(s) -> dict:
    """Both decomposition formulas for the number of s-decreasing trees.

    The sums run over weak compositions j of n-1 dominating (1, ..., 1);
    the second formula can carry negative terms yet totals the same.
    """
    s = check_composition(s)
    n = len(s)
    lhs = count_s_trees(s)
    rhs1 = rhs2 = 0
    comps = _dominant_compositions(n - 1)
    for j in comps:
        inner = 1
        part = 0
        for i in range(1, n):
            part += j[i - 1]
            inner *= part - i + 1
        term1 = inner
        term2 = inner
        for i in range(1, n):
            m = s[n - i]  # s_{n-i+1} with 1-based indexing
            term1 *= _gbinom(m + 1, j[i - 1])
            term2 *= _multiset_binom(m + 1 if i == 1 else m - 1, j[i - 1])
        rhs1 += term1
        rhs2 += term2
    return {
        "s": list(s),
        "product": lhs,
        "first_sum": rhs1,
        "second_sum": rhs2,
        "equal": lhs == rhs1 == rhs2,
    }


def _dominant_compositions(parts):
    """Weak compositions of `parts` into `parts` slots with partial sums >= i."""
    out = []

    def rec(acc, used):
        i = len(acc)
        if i == parts:
            if used == parts:
                out.append(tuple(acc))
            return
        for v in range(parts - used + 1):
            if used + v >= i + 1:
                rec(acc + [v], used + v)

    if parts == 0:
        return [()]
    rec([], 0)
    return out
