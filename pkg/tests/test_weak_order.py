import pytest

from permutree_lab import weak_order as wo
from permutree_lab.errors import ResourceCapError, ValidationError


def test_inversions_examples():
    assert sorted(wo.inversions((4, 1, 3, 2, 5))) == [(1, 4), (2, 3), (2, 4), (3, 4)]
    assert wo.inversions((1, 2, 3, 4, 5)) == frozenset()
    assert wo.inversions((3, 2, 1)) == frozenset({(1, 2), (1, 3), (2, 3)})


def test_versions_complement():
    for pi in wo.all_perms(4):
        inv, ver = wo.inversions(pi), wo.versions(pi)
        assert not inv & ver and len(inv) + len(ver) == 6


def test_lehmer_examples():
    assert wo.lehmer_code((4, 1, 3, 2, 5)) == (1, 2, 1, 0)
    assert wo.lehmer_code((1, 2, 3, 4)) == (0, 0, 0)
    assert wo.lehmer_code((5, 4, 3, 2, 1)) == (4, 3, 2, 1)


@pytest.mark.parametrize("n", range(1, 8))
def test_lehmer_roundtrip(n):
    for pi in wo.all_perms(n):
        assert wo.lehmer_decode(wo.lehmer_code(pi)) == pi


def test_lehmer_decode_validates():
    with pytest.raises(ValidationError):
        wo.lehmer_decode((4, 0, 0))


@pytest.mark.parametrize("n", range(2, 6))
def test_inversion_sets_transitive_cotransitive(n):
    for pi in wo.all_perms(n):
        inv = wo.inversions(pi)
        assert wo.transitivity_witness(inv, n) is None
        assert wo.cotransitivity_witness(inv, n) is None
        assert wo.perm_from_inversions(inv, n) == pi


def test_weak_leq_examples():
    e = (1, 2, 3)
    for pi in wo.all_perms(3):
        assert wo.weak_leq(e, pi)
    # incomparable pair: inversion sets {(1,2)} and {(2,3)}
    assert not wo.weak_leq((2, 1, 3), (1, 3, 2))
    assert not wo.weak_leq((1, 3, 2), (2, 1, 3))
    # comparable: {(1,2)} inside {(1,2),(1,3)}
    assert wo.weak_leq((2, 1, 3), (2, 3, 1))


def test_cover_relations():
    # sigma covers pi iff sigma = pi o s_i with one more inversion
    H = wo.weak_order_hasse(4)
    covers = H.cover_pairs()
    for pi in wo.all_perms(4):
        for i in range(1, 4):
            sigma = wo.right_mult(pi, i)
            gained = len(wo.inversions(sigma)) == len(wo.inversions(pi)) + 1
            assert ((pi, sigma) in covers) == gained


@pytest.mark.parametrize("n", range(2, 7))
def test_meet_join_against_hasse(n):
    H = wo.weak_order_hasse(n)
    elems = H.elements
    for i, a in enumerate(elems):
        for b in elems[i:]:
            m, j = wo.lattice_meet_join(a, b)
            assert m == H.meet(a, b)
            assert j == H.join(a, b)


def test_meet_join_trivial_cases():
    pi = (3, 1, 4, 2)
    assert wo.lattice_meet_join(pi, pi) == (pi, pi)
    w0 = wo.longest(4)
    assert wo.lattice_meet_join(pi, w0) == (pi, w0)
    # incomparable atoms join to the closure of their union
    assert wo.lattice_meet_join((2, 1, 3), (1, 3, 2)) == ((1, 2, 3), (3, 2, 1))


def test_reduced_words():
    assert sorted(wo.reduced_words((3, 2, 1))) == [(1, 2, 1), (2, 1, 2)]
    assert wo.reduced_words((1, 2, 3)) == {()}
    words = wo.reduced_words((4, 3, 2, 1))
    assert len(words) == 16
    for w in words:
        assert wo.evaluate_word(w, 4) == (4, 3, 2, 1)
        assert len(w) == len(wo.inversions((4, 3, 2, 1)))


def test_reduced_words_cap():
    with pytest.raises(ResourceCapError):
        wo.reduced_words(tuple(range(1, 10)))
    assert wo.reduced_words(tuple(range(1, 10)), cap=9) == {()}


def test_fixed_pattern_avoidance():
    pi = (4, 2, 1, 3, 5)
    for j in (2, 3, 4):
        assert wo.avoids_fixed_pattern(pi, j, "jki")
    assert not wo.avoids_fixed_pattern(pi, 3, "kij")  # contains 4,2,3
    for j in (2, 3):
        assert wo.avoids_fixed_pattern((1, 2, 3, 4), j, "jki")
        assert wo.avoids_fixed_pattern((1, 2, 3, 4), j, "kij")
    assert not wo.avoids_fixed_pattern((4, 2, 3, 1), 2, "jki")  # 2,3,1
    with pytest.raises(ValidationError):
        wo.avoids_fixed_pattern((1, 2, 3), 3, "jki")


def test_fixed_pattern_matches_triple_scan():
    from itertools import combinations

    for pi in wo.all_perms(5):
        for j in (2, 3, 4):
            jki = any(
                pi[p] == j and pi[q] > j and pi[r] < j
                for p, q, r in combinations(range(5), 3)
            )
            kij = any(
                pi[p] > j and pi[q] < j and pi[r] == j
                for p, q, r in combinations(range(5), 3)
            )
            assert wo.avoids_fixed_pattern(pi, j, "jki") == (not jki)
            assert wo.avoids_fixed_pattern(pi, j, "kij") == (not kij)


def test_serialization():
    assert wo.serialize((3, 4, 2, 1)) == "3421"
    assert wo.parse_perm("3421") == (3, 4, 2, 1)
    big = tuple(range(1, 11))
    assert wo.parse_perm(wo.serialize(big)) == big
    with pytest.raises(ValidationError):
        wo.parse_perm("3441")
