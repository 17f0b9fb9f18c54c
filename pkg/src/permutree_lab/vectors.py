"""Inversion and cubic sets of permutrees: the constructive meet and the
cubical embedding.

The inversion set B(T) records directed descendance (pairs (i, j), i < j,
with j below i); the cubic set C(T) records, per node, the members of the
right/only child component that exceed the node.  Inversion sets drive the
meet; cubic vectors embed the rotation lattice into the box
[0, n-1] x ... x [0, 1].
"""

from __future__ import annotations

from .errors import ValidationError
from .permutree import DOWNISH, Decoration, Permutree, _tree_from_pairs, rotation_lattice
from .weak_order import cotransitivity_witness, transitivity_witness


def inversion_set(tree) -> frozenset:
    """B(T) = {(i, j) : i < j and j -> i}."""
    return tree.inversion_pairs()


def inversion_vector(tree):
    b = inversion_set(tree)
    return tuple(sum(1 for p in b if p[0] == i) for i in range(1, tree.n))


def validate_inversion_set(pairs, delta):
    """Check the four conditions; raise with the witness triple on failure."""
    n = delta.n
    pairs = frozenset(pairs)
    for i, j in pairs:
        if not 1 <= i < j <= n:
            raise ValidationError(f"pair {(i, j)} outside 1 <= i < j <= {n}", witness=(i, j))
    w = transitivity_witness(pairs, n)
    if w is not None:
        raise ValidationError("condition 1 (transitivity) fails", witness=w)
    w = cotransitivity_witness(pairs, n)
    if w is not None:
        raise ValidationError("condition 2 (cotransitivity) fails", witness=w)
    for j in range(2, n):
        for i in range(1, j):
            for k in range(j + 1, n + 1):
                if delta[j] in "dx" and (i, j) not in pairs and (j, k) in pairs:
                    if (i, k) in pairs:
                        raise ValidationError(
                            f"condition 3 fails at delta_{j}={delta[j]}", witness=(i, j, k)
                        )
                if delta[j] in "ux" and (i, j) in pairs and (j, k) not in pairs:
                    if (i, k) in pairs:
                        raise ValidationError(
                            f"condition 4 fails at delta_{j}={delta[j]}", witness=(i, j, k)
                        )
    return pairs


def permutree_from_inversion_set(pairs, delta) -> Permutree:
    """Inverse of `inversion_set`: grid placement of the values, then insertion."""
    if not isinstance(delta, Decoration):
        delta = Decoration(delta)
    pairs = validate_inversion_set(pairs, delta)
    return _tree_from_pairs(pairs, delta)


def meet_via_inversions(tree, other) -> Permutree:
    """Greatest lower bound in the rotation lattice, computed on inversion sets.

    B(T ^ T') keeps a common inversion (i, j) only when every l strictly
    between them has (i, l) or (l, j) common as well.
    """
    if tree.delta != other.delta:
        raise ValidationError("meet requires a common decoration")
    kept = tree.inversion_pairs() & other.inversion_pairs()
    # greatest fixpoint: keep (i, j) only while every l between has a kept
    # witness on one side; a single pass is not idempotent around 'n' nodes
    while True:
        nxt = frozenset(
            (i, j)
            for i, j in kept
            if all((i, l) in kept or (l, j) in kept for l in range(i + 1, j))
        )
        if nxt == kept:
            return _tree_from_pairs(kept, tree.delta)
        kept = nxt


def cubic_set(tree) -> frozenset:
    """C(T): for downish i the right child component, otherwise the members
    of the only child component larger than i."""
    pairs = set()
    for i in range(1, tree.n + 1):
        comps = tree.child_components(i)
        if tree.delta[i] in DOWNISH:
            members = comps[1]
        else:
            members = {j for j in comps[0] if j > i}
        pairs.update((i, j) for j in members)
    return frozenset(pairs)


def cubic_vector(tree):
    c = cubic_set(tree)
    return tuple(sum(1 for p in c if p[0] == i) for i in range(1, tree.n))


def extremal_permutree(delta, corner) -> Permutree:
    """Permutree whose cubic vector is the given box corner (entries 0 or n-i).

    Built by stacking the corner-0 values increasingly at the bottom of the
    table, then v_n, then the maximal values decreasingly on top.
    """
    if not isinstance(delta, Decoration):
        delta = Decoration(delta)
    n = delta.n
    corner = tuple(corner)
    if len(corner) != n - 1:
        raise ValidationError(f"corner must have length {n - 1}")
    for i, r in enumerate(corner, start=1):
        if r not in (0, n - i):
            raise ValidationError(f"corner entry r_{i}={r} not in {{0, {n - i}}}")
    lows = [i for i in range(1, n) if corner[i - 1] == 0]
    highs = [i for i in range(1, n) if corner[i - 1] != 0 and corner[i - 1] == n - i]
    pi = tuple(lows + [n] + sorted(highs, reverse=True))
    from .permutree import insert

    tree = insert(pi, delta)
    got = cubic_vector(tree)
    if got != corner:
        raise ValidationError(f"extremal construction failed: got {got} for {corner}")
    return tree


def cubical_embedding(delta, cap=None):
    """Map permutree -> cubic vector over the whole rotation lattice.

    Injective, image inside [0,n-1] x ... x [0,1], Hasse edges axis-parallel.
    """
    lattice = rotation_lattice(delta, cap)
    return lattice, {t: cubic_vector(t) for t in lattice.elements}
