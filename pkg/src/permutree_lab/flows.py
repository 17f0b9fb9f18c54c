"""Framed directed multigraphs: routes, coherence, cliques, flows, volumes.

Vertices are 0..n with every edge pointing forward; a framing totally orders
the incoming and the outgoing edges at each inner vertex.  Heights and all
flow-polytope data are exact (`fractions.Fraction` / int); routes are tuples
of edge ids.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb, factorial

from .caps import require_cap
from .errors import ValidationError


class FramedGraph:
    """Loopless forward multigraph on vertices 0..n with per-vertex framings.

    `edges` maps edge id -> (tail, head); `framing` maps an inner vertex to
    {"in": [ids...], "out": [ids...]}, each list a total order on exactly the
    incident edges.  Position lookups return 0 at the source and the sink.
    """

    def __init__(self, n, edges, framing):
        self.n = n
        self.edges = dict(edges)
        for e, (a, b) in self.edges.items():
            if not 0 <= a < b <= n:
                raise ValidationError(f"edge {e}: must go forward between 0 and {n}")
        self.incoming = {v: [] for v in range(n + 1)}
        self.outgoing = {v: [] for v in range(n + 1)}
        for e, (a, b) in self.edges.items():
            self.outgoing[a].append(e)
            self.incoming[b].append(e)
        self._in_pos, self._out_pos = {}, {}
        for v in range(1, n):
            spec = framing.get(v, {})
            ins, outs = list(spec.get("in", [])), list(spec.get("out", []))
            if sorted(map(str, ins)) != sorted(map(str, self.incoming[v])):
                raise ValidationError(f"framing at v{v}: 'in' must order {self.incoming[v]}")
            if sorted(map(str, outs)) != sorted(map(str, self.outgoing[v])):
                raise ValidationError(f"framing at v{v}: 'out' must order {self.outgoing[v]}")
            for k, e in enumerate(ins):
                self._in_pos[e] = k
            for k, e in enumerate(outs):
                self._out_pos[e] = k
        self.framing = {
            v: {"in": list(framing.get(v, {}).get("in", [])),
                "out": list(framing.get(v, {}).get("out", []))}
            for v in range(1, n)
        }

    def tail(self, e):
        return self.edges[e][0]

    def head(self, e):
        return self.edges[e][1]

    def in_pos(self, e):
        """Position of e in the incoming order at its head (0 at the sink)."""
        return self._in_pos.get(e, 0)

    def out_pos(self, e):
        return self._out_pos.get(e, 0)

    def indegrees(self):
        return tuple(len(self.incoming[v]) for v in range(self.n + 1))

    def outdegrees(self):
        return tuple(len(self.outgoing[v]) for v in range(self.n + 1))

    def dimension(self):
        return len(self.edges) - (self.n + 1) + 1

    def to_json(self):
        return {
            "vertices": self.n + 1,
            "edges": [
                {"id": str(e), "tail": a, "head": b}
                for e, (a, b) in sorted(self.edges.items(), key=lambda kv: str(kv[0]))
            ],
            "framing": {
                str(v): {"in": [str(e) for e in spec["in"]], "out": [str(e) for e in spec["out"]]}
                for v, spec in self.framing.items()
            },
        }


def graph_from_json(data) -> FramedGraph:
    edges = {e["id"]: (e["tail"], e["head"]) for e in data["edges"]}
    framing = {
        int(v): {"in": spec["in"], "out": spec["out"]} for v, spec in data["framing"].items()
    }
    return FramedGraph(data["vertices"] - 1, edges, framing)


def routes(graph) -> list:
    """All maximal source-to-sink paths, in a deterministic order."""
    out = []

    def rec(v, acc):
        if v == graph.n:
            out.append(tuple(acc))
            return
        for e in sorted(graph.outgoing[v], key=str):
            rec(graph.head(e), acc + [e])

    rec(0, [])
    return out


def route_vertices(graph, route):
    verts = [graph.tail(route[0])]
    verts.extend(graph.head(e) for e in route)
    return verts


def _shared_blocks(graph, p, q):
    """Maximal shared subroutes, as (entry_edges, exit_edges) around each.

    entry/exit is None at the source/sink ends; inside a block both routes
    ride the same edges.
    """
    in_p = {graph.head(e): e for e in p}
    in_q = {graph.head(e): e for e in q}
    out_p = {graph.tail(e): e for e in p}
    out_q = {graph.tail(e): e for e in q}
    common = sorted(
        (set(route_vertices(graph, p)) & set(route_vertices(graph, q)))
    )
    blocks = []
    k = 0
    while k < len(common):
        v = common[k]
        start = v
        while True:
            ep, eq = out_p.get(v), out_q.get(v)
            if ep is not None and ep == eq:
                v = graph.head(ep)
                k = common.index(v)
            else:
                break
        blocks.append((start, v))
        k += 1
    out = []
    for start, end in blocks:
        entry = (in_p.get(start), in_q.get(start))
        exit_ = (out_p.get(end), out_q.get(end))
        out.append({"start": start, "end": end, "entry": entry, "exit": exit_})
    return out


def conflicts(graph, p, q):
    """Shared subroutes where the entry order disagrees with the exit order."""
    out = []
    for block in _shared_blocks(graph, p, q):
        ep, eq = block["entry"]
        fp, fq = block["exit"]
        if ep is None or eq is None or fp is None or fq is None:
            continue
        din = graph.in_pos(ep) - graph.in_pos(eq)
        dout = graph.out_pos(fp) - graph.out_pos(fq)
        if din * dout < 0:
            out.append(block)
    return out


def coherent(graph, p, q) -> bool:
    """Reflexive and symmetric, but not transitive."""
    return not conflicts(graph, p, q)


def resolvents(graph, p, q):
    """Alternating recombination of two conflicting routes.

    Swaps the tails at the start of each conflict; the edge multiset is
    conserved and both outputs are coherent with each other and with p, q.
    """
    confl = conflicts(graph, p, q)
    if not confl:
        raise ValidationError("routes are not conflicting")
    starts = [c["start"] for c in confl]
    cur_p, cur_q = list(p), list(q)
    for v in starts:
        ip = next(k for k, e in enumerate(cur_p) if graph.tail(e) == v)
        iq = next(k for k, e in enumerate(cur_q) if graph.tail(e) == v)
        cur_p, cur_q = cur_p[:ip] + cur_q[iq:], cur_q[:iq] + cur_p[ip:]
    p2, q2 = tuple(cur_p), tuple(cur_q)
    assert sorted(map(str, p2 + q2)) == sorted(map(str, p + q))
    return p2, q2


def is_minimal_conflict(graph, p, q) -> bool:
    """One conflict only, with frame-adjacent entry and exit edges."""
    confl = conflicts(graph, p, q)
    if len(confl) != 1:
        return False
    block = confl[0]
    ep, eq = block["entry"]
    fp, fq = block["exit"]
    return (
        abs(graph.in_pos(ep) - graph.in_pos(eq)) == 1
        and abs(graph.out_pos(fp) - graph.out_pos(fq)) == 1
    )


def minimal_conflicts(graph, all_routes=None):
    rs = routes(graph) if all_routes is None else list(all_routes)
    out = []
    for p, q in combinations(rs, 2):
        if is_minimal_conflict(graph, p, q):
            out.append((p, q))
    return out


def dkk_height(route, graph, eps) -> Fraction:
    """Exact height sum_{a<c} -eps^(c-a) (in_pos(e_a) + out_pos(e_c))^2.

    The sign makes greater lifted height mark conflicts: for every minimal
    conflict h(P) + h(Q) > h(P') + h(Q') holds with the resolvents on the
    right, which is the admissibility inequality used throughout.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValidationError("eps must be positive")
    total = Fraction(0)
    k = len(route)
    for a in range(k):
        ia = graph.in_pos(route[a])
        for c in range(a + 1, k):
            oc = graph.out_pos(route[c])
            total -= eps ** (c - a) * (ia + oc) ** 2
    return total


def is_admissible(graph, height, all_routes=None, witness=False):
    """Strict height drop from every minimal conflict to its resolvents.

    `height` maps routes to exact rationals (dict or callable).  By the
    minimal-conflict reduction this is equivalent to full admissibility.
    """
    h = height.__getitem__ if isinstance(height, dict) else height
    for p, q in minimal_conflicts(graph, all_routes):
        p2, q2 = resolvents(graph, p, q)
        if not h(p) + h(q) > h(p2) + h(q2):
            return (False, (p, q)) if witness else False
    return (True, None) if witness else True


def max_cliques(graph, cap=None):
    """All maximal cliques of the coherence relation (Bron-Kerbosch, pivoting).

    Every output is checked to have |E| - |V| + 2 routes.
    """
    rs = routes(graph)
    require_cap("max_cliques_routes", len(rs), cap)
    idx = range(len(rs))
    adj = {i: set() for i in idx}
    for i, j in combinations(idx, 2):
        if coherent(graph, rs[i], rs[j]):
            adj[i].add(j)
            adj[j].add(i)
    out = []

    def extend(clique, cand, excl):
        if not cand and not excl:
            out.append(frozenset(clique))
            return
        pivot = max(cand | excl, key=lambda u: len(adj[u] & cand))
        for v in sorted(cand - adj[pivot]):
            extend(clique | {v}, cand & adj[v], excl & adj[v])
            cand = cand - {v}
            excl = excl | {v}

    extend(frozenset(), set(idx), set())
    want = len(graph.edges) - (graph.n + 1) + 2
    cliques = [frozenset(rs[i] for i in cl) for cl in out]
    for cl in cliques:
        if len(cl) != want:
            raise AssertionError(f"maximal clique of size {len(cl)}, expected {want}")
    return sorted(cliques, key=lambda cl: sorted(map(str, cl)))


def check_netflow(graph, a):
    a = tuple(int(x) for x in a)
    if len(a) != graph.n + 1:
        raise ValidationError(f"netflow needs {graph.n + 1} entries")
    if sum(a) != 0:
        raise ValidationError("netflow entries must sum to zero")
    return a


def netflow_i(graph):
    return (1,) + (0,) * (graph.n - 1) + (-1,)


def netflow_d(graph):
    """(0, d_1, ..., d_{n-1}, -sum) with d_i = indeg_i - 1."""
    deg = graph.indegrees()
    d = [0] + [deg[v] - 1 for v in range(1, graph.n)]
    return tuple(d) + (-sum(d),)


def integer_flows(graph, a):
    """All integer a-flows, by forward propagation over the vertices."""
    a = check_netflow(graph, a)
    order = sorted(graph.edges, key=str)
    out_edges = [sorted(graph.outgoing[v], key=str) for v in range(graph.n + 1)]
    flows = []

    def rec(v, supply, flow):
        if v == graph.n:
            flows.append(dict(flow))
            return
        need = supply[v] + a[v]
        if need < 0:
            return
        es = out_edges[v]
        if not es:
            if need != 0:
                return
            rec(v + 1, supply, flow)
            return

        def spread(k, remaining):
            if k == len(es) - 1:
                flow[es[k]] = remaining
                supply2 = dict(supply)
                for e in es:
                    supply2[graph.head(e)] = supply2.get(graph.head(e), 0) + flow[e]
                rec(v + 1, supply2, flow)
                return
            for val in range(remaining + 1):
                flow[es[k]] = val
                spread(k + 1, remaining - val)

        spread(0, need)

    rec(0, {v: 0 for v in range(graph.n + 1)}, {})
    for f in flows:
        for e in order:
            f.setdefault(e, 0)
    return flows


def kostant(graph, a) -> int:
    """Number of integer a-flows, by a layered DP over pending supplies."""
    a = check_netflow(graph, a)
    n = graph.n
    heads = {
        v: sorted({graph.head(e) for e in graph.outgoing[v]}) for v in range(n + 1)
    }
    mult = {
        v: {h: sum(1 for e in graph.outgoing[v] if graph.head(e) == h) for h in heads[v]}
        for v in range(n + 1)
    }
    # state: supplies pending at vertices > v
    states = {tuple([0] * (n + 1)): 1}
    for v in range(n + 1):
        nxt = {}
        for supply, ways in states.items():
            need = supply[v] + a[v]
            if need < 0:
                continue
            hs = heads[v]
            if not hs:
                if need != 0:
                    continue
                nxt[supply] = nxt.get(supply, 0) + ways
                continue

            def spread(k, remaining, acc, extra):
                if k == len(hs) - 1:
                    h = hs[k]
                    ways2 = acc * comb(remaining + mult[v][h] - 1, mult[v][h] - 1)
                    sup = list(supply)
                    for hh, val in extra + [(h, remaining)]:
                        sup[hh] += val
                    key = tuple(sup)
                    nxt[key] = nxt.get(key, 0) + ways * ways2
                    return
                h = hs[k]
                for val in range(remaining + 1):
                    spread(
                        k + 1,
                        remaining - val,
                        acc * comb(val + mult[v][h] - 1, mult[v][h] - 1),
                        extra + [(h, val)],
                    )

            spread(0, need, 1, [])
        states = nxt
    return sum(states.values())


def _dominance_compositions(total, parts, mins):
    """Weak compositions j of `total` with partial sums >= those of `mins`."""
    out = []
    floor = [0] * (parts + 1)
    for k in range(parts):
        floor[k + 1] = floor[k] + mins[k]

    def rec(k, acc, used):
        if k == parts - 1:
            last = total - used
            if last >= 0:
                out.append(tuple(acc + [last]))
            return
        for v in range(total - used + 1):
            if used + v >= floor[k + 1]:
                rec(k + 1, acc + [v], used + v)

    if parts == 0:
        return [()] if total == 0 else []
    rec(0, [], 0)
    return out


def lidskii_volume(graph, a) -> int:
    """Normalized volume of the flow polytope by the first Lidskii formula.

    Sums multinomial(m - n; j) * prod a_i^{j_i} * K_G(j - o, 0) over weak
    compositions j of m - n dominating the shifted outdegrees o.
    """
    a = check_netflow(graph, a)
    n = graph.n
    if any(x < 0 for x in a[:-1]):
        raise ValidationError("Lidskii needs a_0..a_{n-1} >= 0")
    m = len(graph.edges)
    o = [graph.outdegrees()[v] - 1 for v in range(n)]
    total = 0
    mn = factorial(m - n)
    for j in _dominance_compositions(m - n, n, o):
        coeff = mn
        term = 1
        for k in range(n):
            coeff //= factorial(j[k])
            if a[k] == 0 and j[k] > 0:
                term = 0
                break
            term *= a[k] ** j[k]
        if term == 0:
            continue
        shifted = tuple(j[k] - o[k] for k in range(n)) + (0,)
        total += coeff * term * kostant(graph, shifted)
    return total


def omega(clique, graph):
    """Integer d-flow of a maximal clique: distinct route prefixes per edge,
    minus one.

    Prefixes are cut at the head of each edge; two routes sharing the prefix
    count once.
    """
    want = len(graph.edges) - (graph.n + 1) + 2
    if len(clique) != want:
        raise ValidationError(f"clique has {len(clique)} routes, maximal needs {want}")
    prefixes = {e: set() for e in graph.edges}
    for route in clique:
        for k, e in enumerate(route):
            prefixes[e].add(route[: k + 1])
    flow = {e: len(ps) - 1 for e, ps in prefixes.items()}
    if min(flow.values()) < 0:
        raise ValidationError("clique misses an edge entirely; it cannot be maximal")
    d = netflow_d(graph)
    for v in range(1, graph.n):
        into = sum(flow[e] for e in graph.incoming[v])
        outof = sum(flow[e] for e in graph.outgoing[v])
        if into + d[v] != outof:
            raise AssertionError(f"omega output violates conservation at v{v}")
    return flow


def flow_key(flow):
    return tuple(sorted((str(e), v) for e, v in flow.items()))


def orient_adjacent_cliques(graph, c1, c2):
    """Order two facet-adjacent maximal cliques: the lower one owns the route
    that enters the (unique, minimal) conflict earlier and leaves it later."""
    (p,) = c1 - c2
    (q,) = c2 - c1
    block = conflicts(graph, p, q)
    if len(block) != 1:
        raise AssertionError("adjacent cliques must differ by a single conflict")
    ep, eq = block[0]["entry"]
    fp, fq = block[0]["exit"]
    if graph.in_pos(ep) < graph.in_pos(eq) and graph.out_pos(fp) > graph.out_pos(fq):
        return c1, c2
    return c2, c1


def dual_adjacency_covers(graph, cliques):
    """Cover pairs (lower, upper) of the oriented dual graph of a triangulation,
    from facet sharing."""
    facets = {}
    for cl in cliques:
        for route in cl:
            facets.setdefault(cl - {route}, []).append(cl)
    covers = []
    for owners in facets.values():
        if len(owners) > 2:
            raise AssertionError("a triangulation facet has more than two sides")
        if len(owners) == 2:
            covers.append(orient_adjacent_cliques(graph, owners[0], owners[1]))
    return covers


def reduce_multiedges(graph, a):
    """Single-edge reduction of one multiedge bundle (integral equivalence
    utility): each extra copy of (u, v) becomes a detour through a fresh
    vertex with zero netflow.

    Returns (graph, netflow) with at most the same multiedge count minus one
    bundle; apply repeatedly to clear all bundles.
    """
    a = check_netflow(graph, a)
    bundles = {}
    for e, (u, v) in graph.edges.items():
        bundles.setdefault((u, v), []).append(e)
    target = next((k for k, es in bundles.items() if len(es) > 1), None)
    if target is None:
        return graph, a
    u, v = target
    es = sorted(bundles[target], key=str)
    extra = len(es) - 1
    # shift vertices >= u by `extra`, insert chain vertices u..u+extra-1
    def shift(x):
        return x + extra if x >= u else x

    edges = {}
    for e, (x, y) in graph.edges.items():
        if e in es[1:]:
            continue
        edges[str(e)] = (shift(x), shift(y))
    for k in range(extra):
        edges[f"chain{k}"] = (u + k, u + k + 1)
        edges[f"jump{k}"] = (u + k, shift(v))
    n2 = graph.n + extra
    framing = {}
    for w in range(1, n2):
        ins = sorted((e for e, (x, y) in edges.items() if y == w), key=str)
        outs = sorted((e for e, (x, y) in edges.items() if x == w), key=str)
        framing[w] = {"in": ins, "out": outs}
    a2 = [0] * (n2 + 1)
    for x in range(graph.n + 1):
        a2[shift(x) if x != u else u] = a[x]
    return FramedGraph(n2, edges, framing), tuple(a2)


def example_graph() -> FramedGraph:
    """Four-vertex fixture with five routes and one conflicting pair.

    Volume 2: the netflow (0, 1, 1, -2) has exactly the two integer flows
    (e1-e3) + (e2-e3) and (e1-e2) + 2(e2-e3); three routes are exceptional
    and the other two conflict at the inner vertex v1.
    """
    edges = {
        "a": (0, 1),
        "b": (0, 1),
        "c": (0, 2),
        "p": (1, 2),
        "q": (1, 3),
        "r": (2, 3),
    }
    framing = {
        1: {"in": ["a", "b"], "out": ["p", "q"]},
        2: {"in": ["c", "p"], "out": ["r"]},
    }
    return FramedGraph(3, edges, framing)
