"""Stirling s-permutations, s-decreasing trees, and the s-weak order.

An s-decreasing tree has node i carrying s_i + 1 ordered children with labels
decreasing toward the leaves; reading node labels in in-order gives the
121-avoiding rearrangement of 1^{s_1} ... n^{s_n} (the Stirling s-permutation)
when s is strict.  The order compares inversion multisets |(c, a)| in [0, s_c]
counting occurrences of c before the a-block.
"""

from __future__ import annotations

from .caps import require_cap
from .errors import ValidationError
from .posets import Hasse

Word = tuple


def check_composition(s, strict=False):
    s = tuple(int(x) for x in s)
    if any(x < 0 for x in s):
        raise ValidationError(f"composition entries must be >= 0: {s}")
    if strict and any(x == 0 for x in s):
        raise ValidationError(f"operation needs a strict composition (no zeros): {s}")
    return s


def count_s_trees(s) -> int:
    """prod_{i=1}^{n-1} (1 + s_{n-i+1} + ... + s_n); weak compositions allowed.

    >>> count_s_trees((1, 2, 2))
    15
    """
    s = check_composition(s)
    n = len(s)
    total, tail = 1, 0
    for i in range(n - 1, 0, -1):
        tail += s[i]
        total *= 1 + tail
    return total


# --- s-decreasing trees: node = (label, (child, ...)), leaf = None ----------


def tree_nodes(tree):
    out = []
    stack = [tree]
    while stack:
        t = stack.pop()
        if t is None:
            continue
        out.append(t[0])
        stack.extend(t[1])
    return out


def check_tree(tree, s):
    s = check_composition(s)
    n = len(s)
    if sorted(tree_nodes(tree)) != list(range(1, n + 1)):
        raise ValidationError("tree labels are not exactly [n]")

    def rec(t, bound):
        if t is None:
            return
        label, children = t
        if label > bound:
            raise ValidationError(f"label {label} not decreasing below {bound}")
        if len(children) != s[label - 1] + 1:
            raise ValidationError(f"node {label} must have {s[label - 1] + 1} children")
        for ch in children:
            rec(ch, label - 1)

    if tree is None or tree[0] != n:
        raise ValidationError(f"root must be labeled {n}")
    rec(tree, n)
    return tree


def all_s_trees(s):
    """Every s-decreasing tree, built by grafting n-1, ..., 1 onto leaf gaps."""
    s = check_composition(s)
    n = len(s)
    if n == 0:
        return [None]

    def leaves(t):
        # leaf positions in in-order, as paths (child indices from the root)
        out = []

        def rec(t, path):
            label, children = t
            for k, ch in enumerate(children):
                if ch is None:
                    out.append(path + (k,))
                else:
                    rec(ch, path + (k,))

        rec(t, ())
        return out

    def graft(t, path, new):
        if len(path) == 1:
            label, children = t
            cs = list(children)
            cs[path[0]] = new
            return (label, tuple(cs))
        label, children = t
        cs = list(children)
        cs[path[0]] = graft(cs[path[0]], path[1:], new)
        return (label, tuple(cs))

    trees = [(n, (None,) * (s[n - 1] + 1))]
    for label in range(n - 1, 0, -1):
        nxt = []
        node = (label, (None,) * (s[label - 1] + 1))
        for t in trees:
            for path in leaves(t):
                nxt.append(graft(t, path, node))
        trees = nxt
    return trees


def tree_to_word(tree, s) -> Word:
    """In-order reading: s_i copies of i separate the children of node i."""
    s = check_composition(s, strict=True)
    out = []

    def rec(t):
        if t is None:
            return
        label, children = t
        for k, ch in enumerate(children):
            if k:
                out.append(label)
            rec(ch)

    rec(tree)
    return tuple(out)


def word_to_tree(w, s):
    """Inverse of `tree_to_word` (split at the occurrences of the maximum)."""
    s = check_composition(s, strict=True)

    def rec(chunk, labels):
        if not chunk:
            return None
        m = max(chunk)
        idx = [k for k, v in enumerate(chunk) if v == m]
        parts = []
        prev = 0
        for k in idx:
            parts.append(chunk[prev:k])
            prev = k + 1
        parts.append(chunk[prev:])
        return (m, tuple(rec(p, labels) for p in parts))

    tree = rec(tuple(w), None)
    return check_tree(tree, s)


def tree_to_brackets(tree) -> str:
    if tree is None:
        return "*"
    label, children = tree
    return f"{label}[{','.join(tree_to_brackets(c) for c in children)}]"


# --- Stirling s-permutations ------------------------------------------------


def check_word(w, s) -> Word:
    s = check_composition(s, strict=True)
    w = tuple(w)
    n = len(s)
    counts = [0] * n
    for v in w:
        if not 1 <= v <= n:
            raise ValidationError(f"letter {v} outside [1, {n}]")
        counts[v - 1] += 1
    if tuple(counts) != s:
        raise ValidationError(f"letter multiplicities {tuple(counts)} != s = {s}")
    # 121-avoidance: once a letter's block is left it never returns
    last = {}
    for k, v in enumerate(w):
        if v in last:
            for u in w[last[v] + 1 : k]:
                if u > v:
                    raise ValidationError(f"word contains the pattern 121 at letter {v}")
        last[v] = k
    return w


def sorted_word(s) -> Word:
    s = check_composition(s, strict=True)
    return tuple(v for v in range(1, len(s) + 1) for _ in range(s[v - 1]))


def reverse_sorted_word(s) -> Word:
    return tuple(reversed(sorted_word(s)))


def all_words(s):
    return sorted(tree_to_word(t, s) for t in all_s_trees(s))


def blocks(w):
    """a-block spans as half-open index intervals [start, end]."""
    first, last = {}, {}
    for k, v in enumerate(w):
        first.setdefault(v, k)
        last[v] = k
    return {v: (first[v], last[v]) for v in first}


def inversion_multiset(w, s):
    """|(c, a)| = number of occurrences of c before the a-block, for a < c.

    >>> inversion_multiset((3,3,7,2,5,4,5,5,7,1,6), (1,1,2,1,3,1,2))[(7, 2)]
    1
    """
    w = check_word(w, s)
    n = len(s)
    first = blocks(w)
    out = {}
    for a in range(1, n):
        start = first[a][0]
        prefix = w[:start]
        for c in range(a + 1, n + 1):
            out[(c, a)] = sum(1 for v in prefix if v == c)
    return out


def multiset_key(m, n):
    return tuple(m[(c, a)] for a in range(1, n) for c in range(a + 1, n + 1))


def transitivity_ok(m, s):
    n = len(s)
    for a in range(1, n - 1):
        for b in range(a + 1, n):
            for c in range(b + 1, n + 1):
                if m[(b, a)] != 0 and m[(c, a)] < m[(c, b)]:
                    return (a, b, c)
    return None


def planarity_ok(m, s):
    n = len(s)
    for a in range(1, n - 1):
        for b in range(a + 1, n):
            for c in range(b + 1, n + 1):
                if m[(b, a)] != s[b - 1] and m[(c, b)] < m[(c, a)]:
                    return (a, b, c)
    return None


def validate_multiset(m, s):
    n = len(s)
    for a in range(1, n):
        for c in range(a + 1, n + 1):
            if not 0 <= m[(c, a)] <= s[c - 1]:
                raise ValidationError(f"|({c},{a})| = {m[(c, a)]} outside [0, s_{c}]")
    w = transitivity_ok(m, s)
    if w is not None:
        raise ValidationError("multiset transitivity fails", witness=w)
    w = planarity_ok(m, s)
    if w is not None:
        raise ValidationError("multiset planarity fails", witness=w)
    return m


def word_from_multiset(m, s) -> Word:
    """Decode a valid inversion multiset: bump counts are its column sums."""
    s = check_composition(s, strict=True)
    n = len(s)
    validate_multiset(m, s)
    bumps = {a: sum(m[(c, a)] for c in range(a + 1, n + 1)) for a in range(1, n)}
    word = [n] * s[n - 1]
    for v in range(n - 1, 0, -1):
        word[bumps[v] : bumps[v]] = [v] * s[v - 1]
    w = tuple(word)
    if inversion_multiset(w, s) != dict(m):
        raise ValidationError("multiset does not arise from a Stirling s-permutation")
    return w


def s_leq(w1, w2, s) -> bool:
    """Coordinatewise comparison of inversion multisets."""
    m1, m2 = inversion_multiset(w1, s), inversion_multiset(w2, s)
    return all(m1[k] <= m2[k] for k in m1)


def ascents(w):
    """Pairs (a, c), a < c, with 'ac' a substring of w."""
    return sorted({(a, c) for a, c in zip(w, w[1:]) if a < c})


def descents(w):
    return sorted({(a, c) for c, a in zip(w, w[1:]) if a < c})


def transpose_ascent(w, pair, s) -> Word:
    """u1 B_a c u2 -> u1 c B_a u2: the cover relation of the s-weak order.

    >>> transpose_ascent((3,3,7,2,5,4,5,5,7,1,6), (5, 7), (1,1,2,1,3,1,2))
    (3, 3, 7, 2, 7, 5, 4, 5, 5, 1, 6)
    """
    a, c = pair
    w = check_word(w, s)
    if (a, c) not in ascents(w):
        raise ValidationError(f"({a},{c}) is not an ascent of {w}")
    start, end = blocks(w)[a]
    assert w[end + 1] == c
    return w[:start] + (c,) + w[start : end + 1] + w[end + 2 :]


def a_dependent(w, A, pair, s) -> bool:
    """Whether (a, c) gains an inversion in w + A.

    The witness chain starts at the largest letter below c whose block
    contains the a-block, then hops across directly-adjacent blocks along
    ascents of A until it hits an occurrence of c.
    """
    a, c = pair
    spans = blocks(w)
    A = set(A)
    # b_1: greatest letter < c with B_a inside B_b
    sa, ea = spans[a]
    cands = [
        b
        for b in spans
        if b < c and spans[b][0] <= sa and ea <= spans[b][1]
    ]
    b = max(cands)  # a itself is always a candidate
    while True:
        end = spans[b][1]
        if end + 1 >= len(w):
            return False
        x = w[end + 1]
        if (b, x) not in A:
            return False
        if x == c:
            return True
        if not b < x < c:
            return False
        if spans[x][0] != end + 1:
            return False  # the next letter must open its own block
        b = x


def tc_closure(m, s):
    """Generic fixpoint transitive closure of an inversion multiset."""
    n = len(s)
    m = dict(m)
    changed = True
    while changed:
        changed = False
        for a in range(1, n - 1):
            for b in range(a + 1, n):
                if m[(b, a)] == 0:
                    continue
                for c in range(b + 1, n + 1):
                    if m[(c, a)] < m[(c, b)]:
                        m[(c, a)] = m[(c, b)]
                        changed = True
    return m


def add_ascents(w, A, s) -> Word:
    """w + A via the direct A-dependency characterization.

    >>> add_ascents((3,3,7,2,5,4,5,5,7,1,6), {(2,5),(5,7),(1,6)}, (1,1,2,1,3,1,2))
    (3, 3, 7, 7, 5, 2, 4, 5, 5, 6, 1)
    """
    w = check_word(w, s)
    A = set(A)
    asc = set(ascents(w))
    if not A <= asc:
        raise ValidationError(f"A contains non-ascents: {sorted(A - asc)}")
    m = inversion_multiset(w, s)
    out = dict(m)
    n = len(s)
    for a in range(1, n):
        for c in range(a + 1, n + 1):
            if m[(c, a)] < s[c - 1] and a_dependent(w, A, (a, c), s):
                out[(c, a)] = m[(c, a)] + 1
    return word_from_multiset(out, s)


def add_ascents_fixpoint(w, A, s) -> Word:
    """Oracle for `add_ascents`: increment A, then close under transitivity."""
    w = check_word(w, s)
    m = inversion_multiset(w, s)
    for a, c in A:
        m[(c, a)] += 1
    return word_from_multiset(tc_closure(m, s), s)


def s_hasse(s, cap=None) -> Hasse:
    """Hasse diagram of the s-weak order via ascent transpositions."""
    s = check_composition(s, strict=True)
    require_cap("s_hasse_total", sum(s), cap)
    start = sorted_word(s)
    seen = {start}
    frontier = [start]
    covers = []
    while frontier:
        nxt = []
        for w in frontier:
            for pair in ascents(w):
                w2 = transpose_ascent(w, pair, s)
                covers.append((w, w2))
                if w2 not in seen:
                    seen.add(w2)
                    nxt.append(w2)
        frontier = nxt
    elems = sorted(seen)
    return Hasse(elems, set(covers))


def join_candidate(w1, w2, s):
    """tc of the pointwise max of the inversion multisets; the join when valid."""
    m1, m2 = inversion_multiset(w1, s), inversion_multiset(w2, s)
    m = {k: max(m1[k], m2[k]) for k in m1}
    return tc_closure(m, s)


class SFace:
    """Face (w, A) of the s-permutahedron: the interval [w, w + A]."""

    __slots__ = ("word", "A", "s")

    def __init__(self, word, A, s):
        self.s = check_composition(s, strict=True)
        self.word = check_word(word, self.s)
        self.A = frozenset(A)
        asc = set(ascents(self.word))
        if not self.A <= asc:
            raise ValidationError(f"A must consist of ascents of {self.word}")

    def upper(self) -> Word:
        return add_ascents(self.word, self.A, self.s)

    def __repr__(self):
        return f"SFace({self.word}, A={sorted(self.A)})"

    def __eq__(self, other):
        return (self.word, self.A, self.s) == (other.word, other.A, other.s)

    def __hash__(self):
        return hash((self.word, self.A, self.s))


def face_contains(f, g) -> bool:
    """f contained in g as faces: [w_f, w_f + A_f] inside [w_g, w_g + A_g]."""
    if f.s != g.s:
        raise ValidationError("faces live over different compositions")
    return s_leq(g.word, f.word, f.s) and s_leq(f.upper(), g.upper(), f.s)


def serialize_word(w) -> str:
    return ",".join(str(v) for v in w)


def parse_word(text) -> Word:
    return tuple(int(v) for v in text.strip().split(","))
