"""Sorting automata over reduced words, permutree sorting, Coxeter sorting.

The automaton U(j) walks a spine of healthy states h_j, h_{j+1}, ..., h_n,
moving up on s_k, branching to the ill state i_k on s_{k-1}, and dying from
i_k on s_k; all other letters loop.  D(j) is the mirror image with the spine
descending to h_1.  Healthy and ill states accept, dead states absorb.
States are keyed by (class, spine position), never by drawn coordinates.
"""

from __future__ import annotations

from functools import lru_cache

from .caps import require_cap
from .errors import ValidationError
from .weak_order import (
    all_perms,
    avoids_fixed_pattern,
    check_perm,
    identity,
    inverse,
    left_descents,
    left_mult,
)

HEALTHY, ILL, DEAD = "healthy", "ill", "dead"


class PermutreeAutomaton:
    """Complete deterministic automaton over the alphabet {1, ..., n-1}.

    `transitions` maps (state, letter) -> state only for non-loops; missing
    arrows are loops.  `classify` maps a state to healthy/ill/dead.
    """

    def __init__(self, n, states, initial, transitions, classify, label=""):
        self.n = n
        self.states = list(states)
        self.initial = initial
        self.transitions = dict(transitions)
        self.classify = dict(classify)
        self.label = label

    def step(self, state, letter):
        return self.transitions.get((state, letter), state)

    def run(self, word, state=None):
        """Final state after reading the word left to right."""
        state = self.initial if state is None else state
        for letter in word:
            state = self.step(state, letter)
        return state

    def accepts(self, word) -> bool:
        return self.classify[self.run(word)] != DEAD

    def state_class(self, state):
        return self.classify[state]

    def to_json(self):
        key = {s: repr(s) for s in self.states}
        table = {}
        for s in self.states:
            row = {}
            for letter in range(1, self.n):
                t = self.step(s, letter)
                if t != s:
                    row[str(letter)] = key[t]
            table[key[s]] = row
        return {
            "label": self.label,
            "alphabet": list(range(1, self.n)),
            "initial": key[self.initial],
            "states": {key[s]: self.classify[s] for s in sorted(self.states, key=repr)},
            "transitions": table,
        }

    def to_edge_list(self):
        """Graphviz-style plain-text edge list (loops omitted)."""
        lines = []
        for s in sorted(self.states, key=repr):
            for letter in range(1, self.n):
                t = self.step(s, letter)
                if t != s:
                    lines.append(f"{s!r} -> {t!r} [s{letter}]")
        return "\n".join(lines)


def build_single(kind, j, n) -> PermutreeAutomaton:
    """The automaton U(j) (kind='U') or D(j) (kind='D') over s_1..s_{n-1}."""
    if not 2 <= j <= n - 1:
        raise ValidationError(f"j={j} outside [2, {n - 1}]")
    states, transitions, classify = [], {}, {}
    if kind == "U":
        spine = range(j, n + 1)
        for k in spine:
            h, i = (HEALTHY, k), (ILL, k)
            states += [h, i]
            classify[h], classify[i] = HEALTHY, ILL
            if k < n:
                transitions[(h, k)] = (HEALTHY, k + 1)
            transitions[(h, k - 1)] = i
            if k <= n - 1:
                d = (DEAD, k)
                states.append(d)
                classify[d] = DEAD
                transitions[(i, k)] = d
        return PermutreeAutomaton(n, states, (HEALTHY, j), transitions, classify, f"U({j})")
    if kind == "D":
        spine = range(j, 0, -1)
        for k in spine:
            h, i = (HEALTHY, k), (ILL, k)
            states += [h, i]
            classify[h], classify[i] = HEALTHY, ILL
            if k > 1:
                transitions[(h, k - 1)] = (HEALTHY, k - 1)
            transitions[(h, k)] = i
            if k >= 2:
                d = (DEAD, k)
                states.append(d)
                classify[d] = DEAD
                transitions[(i, k - 1)] = d
        return PermutreeAutomaton(n, states, (HEALTHY, j), transitions, classify, f"D({j})")
    raise ValidationError(f"kind must be 'U' or 'D', got {kind!r}")


def product(U, D, n) -> PermutreeAutomaton:
    """Synchronous product P(U, D) of all U(j), j in U, and D(j), j in D.

    A product state is dead as soon as one factor is dead, ill when some
    factor is ill and none dead.  Only reachable states are materialized.
    """
    return _product_cached(frozenset(U), frozenset(D), n)


@lru_cache(maxsize=None)
def _product_cached(U, D, n) -> PermutreeAutomaton:
    U, D = sorted(set(U)), sorted(set(D))
    factors = [build_single("U", j, n) for j in U] + [build_single("D", j, n) for j in D]
    if not factors:
        st = ("all",)
        return PermutreeAutomaton(n, [st], st, {}, {st: HEALTHY}, "P(-,-)")
    initial = tuple(a.initial for a in factors)
    states, transitions, classify = [], {}, {}
    stack = [initial]
    seen = {initial}
    while stack:
        st = stack.pop()
        states.append(st)
        classes = [a.classify[s] for a, s in zip(factors, st)]
        if DEAD in classes:
            classify[st] = DEAD
            continue  # dead states absorb: keep all letters as loops
        classify[st] = ILL if ILL in classes else HEALTHY
        for letter in range(1, n):
            nxt = tuple(a.step(s, letter) for a, s in zip(factors, st))
            if nxt != st:
                transitions[(st, letter)] = nxt
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    label = f"P({{{','.join(map(str, U))}}},{{{','.join(map(str, D))}}})"
    return PermutreeAutomaton(n, states, initial, transitions, classify, label)


def _check_disjoint(U, D):
    U, D = frozenset(U), frozenset(D)
    if U & D:
        raise ValidationError(f"U and D must be disjoint, both contain {sorted(U & D)}")
    return U, D


def avoids_all(pi, U, D) -> bool:
    return all(avoids_fixed_pattern(pi, j, "jki") for j in U) and all(
        avoids_fixed_pattern(pi, j, "kij") for j in D
    )


def _search_accepted(pi, automaton):
    """Depth-first search for a reduced word of pi avoiding dead states."""
    failed = set()

    def rec(p, state):
        if p == identity(len(p)):
            return True
        key = (p, state)
        if key in failed:
            return False
        for l in left_descents(p):
            nxt = automaton.step(state, l)
            if automaton.classify[nxt] == DEAD:
                continue
            if rec(left_mult(p, l), nxt):
                return True
        failed.add(key)
        return False

    return rec(pi, automaton.initial)


def exists_accepted_word(pi, U, D) -> bool:
    """True iff pi has a reduced word accepted by P(U, D).

    Computed both by fixed-pattern scan and by word search; the two must
    agree (theorem), and the disagreement would be a bug worth crashing on.
    """
    pi = check_perm(pi)
    U, D = _check_disjoint(U, D)
    by_pattern = avoids_all(pi, U, D)
    by_search = _search_accepted(pi, product(U, D, len(pi)))
    if by_pattern != by_search:
        raise AssertionError(f"pattern scan and word search disagree on {pi}, U={sorted(U)}, D={sorted(D)}")
    return by_pattern


class SortOutcome:
    """Result of permutree sorting: the produced word, whether it sorted the
    input (equivalently: the word is a reduced word of the input), the
    residual permutation, and the per-step trace."""

    __slots__ = ("word", "sorted", "residual", "trace")

    def __init__(self, word, sorted_, residual, trace):
        self.word = tuple(word)
        self.sorted = sorted_
        self.residual = residual
        self.trace = tuple(trace)

    def __repr__(self):
        return f"SortOutcome(word={self.word}, sorted={self.sorted}, residual={self.residual})"


def _reversed_in(pi_pos, l):
    return pi_pos[l - 1] > pi_pos[l]


def _sort_single(pi, j, kind, priority):
    """({j}, {}) or ({}, {j}) permutree sorting (the single-automaton algorithm).

    Healthy moves use any priority-first letter that is not the ill letter,
    shifting j along the spine; then one ill move, after which the two blocks
    untouched by the deadly letter are sorted independently.
    """
    n = len(pi)
    word, trace = [], []
    while True:
        pos = inverse(pi)
        ill_letter = j - 1 if kind == "U" else j
        cands = [l for l in priority if l != ill_letter and _reversed_in(pos, l)]
        if not cands:
            break
        l = cands[0]
        trace.append((pi, j, l))
        pi = left_mult(pi, l)
        word.append(l)
        if kind == "U" and l == j:
            j += 1
        elif kind == "D" and l == j - 1:
            j -= 1
    pos = inverse(pi)
    ill_letter = j - 1 if kind == "U" else j
    if 1 <= ill_letter <= n - 1 and _reversed_in(pos, ill_letter):
        trace.append((pi, j, ill_letter))
        pi = left_mult(pi, ill_letter)
        word.append(ill_letter)
        # sort the blocks [cut] and [n] \ [cut], never touching s_cut
        cut = j if kind == "U" else j - 1
        while True:
            pos = inverse(pi)
            cands = [l for l in priority if l != cut and _reversed_in(pos, l)]
            if not cands:
                break
            l = cands[0]
            trace.append((pi, j, l))
            pi = left_mult(pi, l)
            word.append(l)
    return word, pi, trace


def _move_up(U, l):
    return (U - {l}) | {l + 1} if l in U else U


def _move_down(D, l):
    return (D - {l + 1}) | {l} if l + 1 in D else D


def _sort_multiple(pi, U, D, priority):
    """(U, D)-permutree sorting: follow P(U, D) without building it."""
    n = len(pi)
    word, trace = [], []
    while True:
        pos = inverse(pi)
        healthy = [
            l for l in priority if _reversed_in(pos, l) and l + 1 not in U and l not in D
        ]
        if healthy:
            l = healthy[0]
            trace.append((pi, (frozenset(U), frozenset(D)), l))
            pi = left_mult(pi, l)
            word.append(l)
            U, D = _move_up(U, l), _move_down(D, l)
            continue
        # ill moves: every factor that s_l sends to an ill state must be
        # individually safe to forget (no reduced word of pi can revisit it)
        ill = []
        for l in priority:
            if not _reversed_in(pos, l):
                continue
            u_hit, d_hit = l + 1 in U, l in D
            if not (u_hit or d_hit):
                continue
            if u_hit and set(pi[: l + 1]) != set(range(1, l + 2)):
                continue
            if d_hit and set(pi[: l - 1]) != set(range(1, l)):
                continue
            ill.append(l)
        if ill:
            l = ill[0]
            trace.append((pi, (frozenset(U), frozenset(D)), l))
            pi = left_mult(pi, l)
            word.append(l)
            U, D = _move_up(U - {l + 1}, l), _move_down(D - {l}, l)
            continue
        return word, pi, trace


def permutree_sort(pi, U, D, priority=None) -> SortOutcome:
    """Produce a reduced word accepted by P(U, D); it is a reduced word of pi
    exactly when pi is (U, D)-permutree minimal.

    >>> permutree_sort((3, 4, 2, 1), {2}, set()).sorted
    True
    >>> permutree_sort((4, 2, 3, 1), {2}, set()).residual
    (1, 2, 4, 3)
    """
    pi = check_perm(pi)
    U, D = _check_disjoint(U, D)
    n = len(pi)
    priority = tuple(priority) if priority is not None else tuple(range(1, n))
    if len(U) + len(D) == 1:
        if U:
            word, res, trace = _sort_single(pi, next(iter(U)), "U", priority)
        else:
            word, res, trace = _sort_single(pi, next(iter(D)), "D", priority)
    else:
        word, res, trace = _sort_multiple(pi, set(U), set(D), priority)
    outcome = SortOutcome(word, res == identity(n), res, trace)
    aut = product(U, D, n)
    if not aut.accepts(outcome.word):
        raise AssertionError(f"sorting produced a rejected word for {pi}")
    return outcome


def minimal_permutations(n, U, D):
    U, D = _check_disjoint(U, D)
    return [pi for pi in all_perms(n) if avoids_all(pi, U, D)]


def lex_min_accepted_word(pi, automaton, priority):
    """Priority-lexicographic minimal reduced word of pi accepted by the automaton."""
    failed = set()

    def rec(p, state):
        if p == identity(len(p)):
            return ()
        if (p, state) in failed:
            return None
        descents = set(left_descents(p))
        for l in priority:
            if l not in descents:
                continue
            nxt = automaton.step(state, l)
            if automaton.classify[nxt] == DEAD:
                continue
            tail = rec(left_mult(p, l), nxt)
            if tail is not None:
                return (l,) + tail
        failed.add((p, state))
        return None

    return rec(pi, automaton.initial)


def generating_tree(n, U, D, priority=None, cap=None):
    """Prefix tree of the lex-minimal accepted reduced words of all
    (U, D)-minimal permutations.

    Returns (words, children) where children maps each word to its one-letter
    extensions inside the set.  The word set is closed under prefixes and has
    one node per minimal permutation.
    """
    require_cap("generating_tree_n", n, cap)
    U, D = _check_disjoint(U, D)
    priority = tuple(priority) if priority is not None else tuple(range(1, n))
    aut = product(U, D, n)
    words = set()
    for pi in minimal_permutations(n, U, D):
        w = lex_min_accepted_word(pi, aut, priority)
        if w is None:
            raise AssertionError(f"minimal permutation {pi} has no accepted word")
        words.add(w)
    for w in list(words):
        for k in range(len(w)):
            if w[:k] not in words:
                raise AssertionError(f"prefix closure fails at {w[:k]} < {w}")
    children = {w: [] for w in words}
    for w in words:
        if w:
            children[w[:-1]].append(w)
    return words, children


def coxeter_element_sets(c, n):
    """U_c, D_c: j goes to U_c when s_j appears before s_{j-1} in c."""
    if sorted(c) != list(range(1, n)):
        raise ValidationError(f"{c} is not a Coxeter element word for n={n}")
    pos = {l: k for k, l in enumerate(c)}
    U = frozenset(j for j in range(2, n) if pos[j] < pos[j - 1])
    D = frozenset(j for j in range(2, n) if pos[j] > pos[j - 1])
    return U, D


def coxeter_sorting_word(pi, c):
    """The c-sorting word: greedy reduced subword of c^infinity, with factors."""
    n = len(pi)
    word, factors = [], []
    rho = pi
    while rho != identity(n):
        factor = set()
        for l in c:
            if _reversed_in(inverse(rho), l):
                rho = left_mult(rho, l)
                word.append(l)
                factor.add(l)
        factors.append(frozenset(factor))
    return tuple(word), factors


def coxeter_sort(pi, c):
    """c-sorting word of pi and the nested-factor sortability test.

    >>> coxeter_sort((3, 4, 2, 1), (2, 1, 3))
    ((2, 1, 3, 2, 3), True)
    """
    pi = check_perm(pi)
    c = tuple(c)
    if sorted(c) != list(range(1, len(pi))):
        raise ValidationError(f"{c} is not a Coxeter element word")
    word, factors = coxeter_sorting_word(pi, c)
    sortable = all(factors[k + 1] <= factors[k] for k in range(len(factors) - 1))
    return word, sortable
