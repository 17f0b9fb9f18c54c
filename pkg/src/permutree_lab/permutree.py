"""Permutrees: insertion from decorated permutations, rotations, lattices.

A permutree is a directed unrooted tree on nodes 1..n where the decoration
symbol of a node fixes its slot arity: 'n' one parent/one child, 'd' one
parent/two children, 'u' two parents/one child, 'x' two of each.  Nodes in a
left slot are smaller than the slot owner, nodes in a right slot larger.

Trees compare equal exactly when they share decoration and inversion set
{(i, j) : i < j and j is a descendant of i}; the slot structure is canonical
given those data.
"""

from __future__ import annotations

from functools import lru_cache

from .caps import require_cap
from .errors import ValidationError
from .posets import Hasse
from .weak_order import (
    all_perms,
    check_perm,
    identity,
    perm_from_inversions,
    transitive_closure_pairs,
)

SYMBOLS = "ndux"
DOWNISH = {"d", "x"}
UPISH = {"u", "x"}


class Decoration:
    """Length-n symbol vector over n(one), d(own), u(p), x(=updown).

    Positions 1 and n are silently normalized to 'n'; `normalized_ends`
    records whether that rewrite happened.
    """

    __slots__ = ("symbols", "normalized_ends")

    def __init__(self, symbols):
        syms = tuple(symbols)
        if any(c not in SYMBOLS for c in syms):
            raise ValidationError(f"decoration symbols must be in '{SYMBOLS}': {syms}")
        self.normalized_ends = False
        if len(syms) >= 1 and syms[0] != "n":
            syms = ("n",) + syms[1:]
            self.normalized_ends = True
        if len(syms) >= 2 and syms[-1] != "n":
            syms = syms[:-1] + ("n",)
            self.normalized_ends = True
        self.symbols = syms

    @property
    def n(self):
        return len(self.symbols)

    def __getitem__(self, i):
        """Symbol at 1-based position i."""
        return self.symbols[i - 1]

    def __eq__(self, other):
        return isinstance(other, Decoration) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __str__(self):
        return "".join(self.symbols)

    def __repr__(self):
        return f"Decoration({''.join(self.symbols)!r})"

    def refines(self, other) -> bool:
        """Coordinatewise n < {d,u} < x order."""
        rank = {"n": 0, "d": 1, "u": 1, "x": 2}
        if self.n != other.n:
            return False
        for a, b in zip(self.symbols, other.symbols):
            if rank[a] > rank[b] or (rank[a] == 1 == rank[b] and a != b):
                return False
        return True


def parse_decoration(text) -> Decoration:
    return Decoration(text.strip())


def normalized_decorations(n):
    """All 4^(n-2) decorations with ends already 'n', lexicographic."""
    if n <= 2:
        return [Decoration("n" * n)]
    out = []

    def rec(prefix):
        if len(prefix) == n - 2:
            out.append(Decoration("n" + "".join(prefix) + "n"))
            return
        for c in SYMBOLS:
            rec(prefix + [c])

    rec([])
    return out


class Permutree:
    __slots__ = ("n", "delta", "children", "parents", "_inv", "_hash")

    def __init__(self, n, delta, children, parents):
        self.n = n
        self.delta = delta
        self.children = children  # tuple over 1..n of slot tuples, entries node|None
        self.parents = parents
        self._inv = None
        self._hash = None

    def child_slots(self, i):
        return self.children[i - 1]

    def parent_slots(self, i):
        return self.parents[i - 1]

    def descendants(self, i):
        """All nodes strictly below i (through any child slot)."""
        out = set()
        stack = [c for c in self.children[i - 1] if c is not None]
        while stack:
            v = stack.pop()
            if v in out:
                continue
            out.add(v)
            stack.extend(c for c in self.children[v - 1] if c is not None)
        return out

    def inversion_pairs(self):
        """B(T) = {(i, j) : i < j and j a descendant of i}."""
        if self._inv is None:
            pairs = set()
            for i in range(1, self.n + 1):
                for j in self.descendants(i):
                    if j > i:
                        pairs.add((i, j))
            self._inv = frozenset(pairs)
        return self._inv

    def slot_component(self, i, start):
        """Nodes of the component of T - v_i containing the slot occupant `start`.

        Subtrees in the permutree sense are components of the unrooted tree,
        so they may climb through the second parent of a node below i.
        """
        if start is None:
            return frozenset()
        adj = self.undirected_adjacency()
        seen = {i, start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return frozenset(seen - {i})

    def child_components(self, i):
        """One component per child slot (empty frozenset for boundary slots)."""
        return tuple(self.slot_component(i, c) for c in self.children[i - 1])

    def parent_components(self, i):
        return tuple(self.slot_component(i, p) for p in self.parents[i - 1])

    def direct_edges(self):
        """Edges (child, parent) of the underlying tree."""
        out = []
        for p in range(1, self.n + 1):
            for c in self.children[p - 1]:
                if c is not None:
                    out.append((c, p))
        return out

    def undirected_adjacency(self):
        adj = {i: set() for i in range(1, self.n + 1)}
        for c, p in self.direct_edges():
            adj[c].add(p)
            adj[p].add(c)
        return adj

    def __eq__(self, other):
        return (
            isinstance(other, Permutree)
            and self.delta == other.delta
            and self.inversion_pairs() == other.inversion_pairs()
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.delta.symbols, self.inversion_pairs()))
        return self._hash

    def __repr__(self):
        return f"Permutree({self.delta}, B={sorted(self.inversion_pairs())})"

    def key(self) -> str:
        """Canonical string key: the sorted inversion pair list."""
        return ";".join(f"{i},{j}" for i, j in sorted(self.inversion_pairs()))

    def to_json(self):
        slots = []
        for i in range(1, self.n + 1):
            cs = self.children[i - 1]
            if len(cs) == 2:
                slots.append({"LD": cs[0], "RD": cs[1]})
            else:
                slots.append({"D": cs[0]})
        return {"n": self.n, "delta": str(self.delta), "children": slots}


def permutree_from_json(data) -> Permutree:
    n = data["n"]
    delta = parse_decoration(data["delta"])
    children = []
    for i in range(1, n + 1):
        slot = data["children"][i - 1]
        if delta[i] in DOWNISH:
            children.append((slot["LD"], slot["RD"]))
        else:
            children.append((slot["D"],))
    parents = [[None, None] if delta[i] in UPISH else [None] for i in range(1, n + 1)]
    for p in range(1, n + 1):
        for c in children[p - 1]:
            if c is None:
                continue
            if delta[c] in UPISH:
                parents[c - 1][0 if p < c else 1] = p
            else:
                parents[c - 1][0] = p
    return Permutree(n, delta, tuple(children), tuple(tuple(s) for s in parents))


def insert(pi, delta) -> Permutree:
    """Insertion algorithm: read the table of pi bottom-up, strings catch/release.

    The permutation is a linear extension of the result, and the fibers of
    this map are exactly the congruence classes of the decoration.
    """
    pi = check_perm(pi)
    if not isinstance(delta, Decoration):
        delta = Decoration(delta)
    n = len(pi)
    if delta.n != n:
        raise ValidationError(f"decoration size {delta.n} != permutation size {n}")

    children = [[None, None] if delta[i] in DOWNISH else [None] for i in range(1, n + 1)]
    parents = [[None, None] if delta[i] in UPISH else [None] for i in range(1, n + 1)]

    # zones are column intervals (lo, hi) between active walls; each carries the
    # string top: None or (node, side) with side in {'only', 'left', 'right'}
    walls = [i for i in range(1, n + 1) if delta[i] in DOWNISH]
    bounds = [0] + walls + [n + 1]
    zones = [[bounds[k], bounds[k + 1], None] for k in range(len(bounds) - 1)]

    def attach_parent(top, v):
        if top is None:
            return
        node, side = top
        if side == "only":
            parents[node - 1][0] = v
        elif side == "left":
            parents[node - 1][0] = v
        else:
            parents[node - 1][1] = v

    for v in pi:
        dv = delta[v]
        if dv in DOWNISH:
            z = next(k for k, zone in enumerate(zones) if zone[1] == v)
            left, right = zones[z], zones[z + 1]
            children[v - 1][0] = left[2][0] if left[2] else None
            children[v - 1][1] = right[2][0] if right[2] else None
            attach_parent(left[2], v)
            attach_parent(right[2], v)
            merged = [left[0], right[1], None]
            zones[z : z + 2] = [merged]
            zone = merged
            z_idx = z
        else:
            z_idx = next(k for k, zone in enumerate(zones) if zone[0] < v < zone[1])
            zone = zones[z_idx]
            children[v - 1][0] = zone[2][0] if zone[2] else None
            attach_parent(zone[2], v)
        if dv in UPISH:
            zones[z_idx : z_idx + 1] = [
                [zone[0], v, (v, "left")],
                [v, zone[1], (v, "right")],
            ]
        else:
            zone[2] = (v, "only")

    return Permutree(n, delta, tuple(tuple(c) for c in children), tuple(tuple(p) for p in parents))


def linear_extensions(tree, limit=None):
    """The fiber of the insertion map: all topological orders, children first."""
    n = tree.n
    child_count = [sum(1 for c in tree.children[i] if c is not None) for i in range(n)]
    parents_of = [
        [p for p in tree.parents[i] if p is not None] for i in range(n)
    ]
    out = []
    avail = sorted(i + 1 for i in range(n) if child_count[i] == 0)
    pending = child_count[:]

    def rec(avail, placed):
        if limit is not None and len(out) >= limit:
            return
        if len(placed) == n:
            out.append(tuple(placed))
            return
        for v in list(avail):
            nxt = [w for w in avail if w != v]
            opened = []
            for p in parents_of[v - 1]:
                pending[p - 1] -= 1
                if pending[p - 1] == 0:
                    opened.append(p)
            rec(sorted(nxt + opened), placed + [v])
            for p in parents_of[v - 1]:
                pending[p - 1] += 1

    rec(avail, [])
    return out


def _tree_from_pairs(pairs, delta) -> Permutree:
    """Internal reconstruction: minimal linear extension of the pair set, then insert."""
    pi = perm_from_inversions(pairs, delta.n)
    tree = insert(pi, delta)
    if tree.inversion_pairs() != frozenset(pairs):
        raise ValidationError("pair set is not the inversion set of any permutree")
    return tree


def bottom(delta) -> Permutree:
    """Minimal permutree: i -> i+1 for all i, empty inversion set."""
    if not isinstance(delta, Decoration):
        delta = Decoration(delta)
    return insert(identity(delta.n), delta)


def top(delta) -> Permutree:
    if not isinstance(delta, Decoration):
        delta = Decoration(delta)
    n = delta.n
    full = frozenset((i, j) for i in range(1, n) for j in range(i + 1, n + 1))
    return _tree_from_pairs(full, delta)


def rotate(tree, edge) -> Permutree:
    """Increasing rotation along a tree edge i -> j (i < j, i a child of j).

    Every edge cut survives except the one of the rotated edge; on inversion
    sets this is the transitive closure of adding the pair (i, j).
    """
    i, j = edge
    if not (1 <= i < j <= tree.n):
        raise ValidationError(f"need an edge (i, j) with i < j, got {edge}")
    if (i, j) not in tree.direct_edges():
        raise ValidationError(f"({i}->{j}) is not an edge of the permutree", witness=edge)
    pairs = transitive_closure_pairs(tree.inversion_pairs() | {(i, j)}, tree.n)
    return _tree_from_pairs(pairs, tree.delta)


def increasing_rotations(tree):
    """Edges (i, j), i < j, i child of j: the Hasse moves going up."""
    return sorted((c, p) for c, p in tree.direct_edges() if c < p)


def rotation_lattice(delta, cap=None) -> Hasse:
    """Hasse diagram of the rotation order, built by BFS from the bottom tree."""
    if not isinstance(delta, Decoration):
        delta = Decoration(delta)
    require_cap("rotation_lattice_n", delta.n, cap)
    start = bottom(delta)
    seen = {start}
    frontier = [start]
    covers = []
    while frontier:
        nxt = []
        for tree in frontier:
            for edge in increasing_rotations(tree):
                other = rotate(tree, edge)
                covers.append((tree, other))
                if other not in seen:
                    seen.add(other)
                    nxt.append(other)
        frontier = nxt
    elems = sorted(seen, key=lambda t: (len(t.inversion_pairs()), sorted(t.inversion_pairs())))
    return Hasse(elems, set(covers))


def count_permutrees(delta) -> int:
    """Number of delta-permutrees.

    Updown positions cut the count into independent sections and each up may
    be flipped to a down without changing it; inside a section the recursion
    strips the topmost node (a chain of 'n' roots, then a 'd' root splitting
    by labels).
    """
    if not isinstance(delta, Decoration):
        delta = Decoration(delta)
    total = 1
    for section in updown_sections(delta):
        flipped = tuple("d" if c == "u" else c for c in section)
        total *= _count_section(flipped)
    return total


def updown_sections(delta):
    """Symbol runs delimited by 'x' positions, with the 'x' endpoints read as 'n'."""
    syms = delta.symbols
    n = len(syms)
    cuts = [0] + [p for p in range(n) if syms[p] == "x"] + [n - 1]
    if n == 0:
        return []
    sections = []
    for k in range(len(cuts) - 1):
        lo, hi = cuts[k], cuts[k + 1]
        sec = list(syms[lo : hi + 1])
        if sec and sec[0] == "x":
            sec[0] = "n"
        if sec and sec[-1] == "x":
            sec[-1] = "n"
        sections.append(tuple(sec))
    return sections


@lru_cache(maxsize=None)
def _count_section(sec) -> int:
    if len(sec) <= 1:
        return 1
    total = 0
    for r, sym in enumerate(sec):
        if sym == "d":
            total += _count_section(sec[:r]) * _count_section(sec[r + 1 :])
        else:
            total += _count_section(sec[:r] + sec[r + 1 :])
    return total


def insertion_fibers(delta):
    """Partition of S_n into insertion fibers, as {tree: sorted list of perms}."""
    if not isinstance(delta, Decoration):
        delta = Decoration(delta)
    fibers = {}
    for pi in all_perms(delta.n):
        fibers.setdefault(insert(pi, delta), []).append(pi)
    return fibers


def permutreehedron_vertex(tree):
    """Vertex coordinates of the permutreehedron; all points sum to C(n+1, 2).

    Here d and the slot sizes count whole components of T - v_i (the subtree
    below a slot can climb back up through two-parent nodes), not just nodes
    reachable by directed paths.
    """
    coords = []
    for i in range(1, tree.n + 1):
        below = tree.child_components(i)
        above = tree.parent_components(i)
        a = 1 + sum(len(c) for c in below)
        if tree.delta[i] in DOWNISH:
            a += len(below[0]) * len(below[1])
        if tree.delta[i] in UPISH:  # both adjustments apply when the symbol is 'x'
            a -= len(above[0]) * len(above[1])
        coords.append(a)
    return tuple(coords)


def edge_cuts(tree):
    """One ordered partition (I || [n] \\ I) per tree edge, I on the child side."""
    n = tree.n
    adj = tree.undirected_adjacency()
    cuts = set()
    for c, p in tree.direct_edges():
        seen = {p, c}
        stack = [c]
        side = {c}
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    side.add(w)
                    stack.append(w)
        cuts.add((frozenset(side), frozenset(range(1, n + 1)) - frozenset(side)))
    return cuts


def lattice_to_json(hasse):
    return hasse.to_json(key=lambda t: t.key())
