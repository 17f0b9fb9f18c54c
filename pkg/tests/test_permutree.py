import pytest

from permutree_lab import permutree as pt
from permutree_lab import weak_order as wo
from permutree_lab.errors import ResourceCapError, ValidationError


def test_decoration_normalization():
    d = pt.Decoration("dunxndd")
    assert str(d) == "nunxndn"
    assert d.normalized_ends
    assert not pt.Decoration("nnxn").normalized_ends
    with pytest.raises(ValidationError):
        pt.Decoration("nzn")


def test_decoration_refinement():
    assert pt.Decoration("nnn").refines(pt.Decoration("ndn"))
    assert pt.Decoration("ndn").refines(pt.Decoration("nxn"))
    assert not pt.Decoration("ndn").refines(pt.Decoration("nun"))
    assert not pt.Decoration("nxn").refines(pt.Decoration("ndn"))


def test_insert_chain_for_none():
    pi = (2, 4, 1, 3)
    tree = pt.insert(pi, "nnnn")
    assert pt.linear_extensions(tree) == [pi]
    # chain order pi_1 < ... < pi_n: inversion pairs record later-smaller
    assert tree.inversion_pairs() == wo.inversions(pi)


def test_insert_figure_example():
    pi = (5, 7, 4, 1, 3, 2, 6)
    tree = pt.insert(pi, "dunxndd")
    assert pi in pt.linear_extensions(tree)


def test_fibers_partition_and_linear_extensions():
    for n in (3, 4):
        for d in pt.normalized_decorations(n):
            fibers = pt.insertion_fibers(d)
            seen = []
            for tree, perms in fibers.items():
                assert sorted(pt.linear_extensions(tree)) == sorted(perms)
                seen.extend(perms)
            assert sorted(seen) == wo.all_perms(n)


def test_fiber_minimum_avoids_patterns():
    for d in pt.normalized_decorations(4):
        U = {j for j in range(2, 4) if d[j] in "ux"}
        D = {j for j in range(2, 4) if d[j] in "dx"}
        for tree, perms in pt.insertion_fibers(d).items():
            bottom = min(perms, key=lambda p: len(wo.inversions(p)))
            assert all(wo.avoids_fixed_pattern(bottom, j, "jki") for j in U)
            assert all(wo.avoids_fixed_pattern(bottom, j, "kij") for j in D)


def test_down_case_is_binary_tree_fibers():
    # for down decorations, every fiber minimum avoids kij for all j
    d = pt.Decoration("nddn")
    for tree, perms in pt.insertion_fibers(d).items():
        bottom = min(perms, key=lambda p: len(wo.inversions(p)))
        assert all(wo.avoids_fixed_pattern(bottom, j, "kij") for j in (2, 3))


def test_refinement_of_congruences():
    # delta refines delta' => every delta'-fiber is a union of delta-fibers
    n = 4
    decs = pt.normalized_decorations(n)
    tables = {}
    for d in decs:
        tables[str(d)] = {pi: pt.insert(pi, d) for pi in wo.all_perms(n)}
    for d1 in decs:
        for d2 in decs:
            if not d1.refines(d2):
                continue
            t1, t2 = tables[str(d1)], tables[str(d2)]
            for a in wo.all_perms(n):
                for b in wo.all_perms(n):
                    if t1[a] == t1[b]:
                        assert t2[a] == t2[b], (str(d1), str(d2), a, b)


def test_edge_count_formula():
    for d in pt.normalized_decorations(4):
        downs = sum(1 for c in d.symbols if c in "du")
        ups2 = sum(1 for c in d.symbols if c == "x")
        for tree in pt.rotation_lattice(d).elements:
            inner = len(tree.direct_edges())
            boundary = sum(1 for i in range(1, 5) for x in tree.children[i - 1] if x is None)
            boundary += sum(1 for i in range(1, 5) for x in tree.parents[i - 1] if x is None)
            assert inner + boundary == 5 + downs + 2 * ups2


def test_rotate_errors_and_covers():
    d = pt.Decoration("nxun")
    b = pt.bottom(d)
    with pytest.raises(ValidationError):
        pt.rotate(b, (2, 4))  # not an edge
    atoms = [pt.rotate(b, e) for e in pt.increasing_rotations(b)]
    assert all(len(a.inversion_pairs()) >= 1 for a in atoms)
    # minimal element has edges i -> i+1 only
    assert pt.increasing_rotations(b) == [(1, 2), (2, 3), (3, 4)]


def test_disjoint_rotations_commute():
    d = pt.Decoration("nnnnn")
    b = pt.bottom(d)
    t1 = pt.rotate(pt.rotate(b, (1, 2)), (3, 4))
    t2 = pt.rotate(pt.rotate(b, (3, 4)), (1, 2))
    assert t1 == t2


def test_rotation_lattice_sizes():
    assert len(pt.rotation_lattice(pt.Decoration("nnnn"))) == 24
    assert len(pt.rotation_lattice(pt.Decoration("nddn"))) == 14
    assert len(pt.rotation_lattice(pt.Decoration("nxxn"))) == 8
    with pytest.raises(ResourceCapError):
        pt.rotation_lattice(pt.Decoration("n" * 9))


def test_rotation_lattice_is_lattice_small():
    for n in (2, 3, 4):
        for d in pt.normalized_decorations(n):
            lat = pt.rotation_lattice(d)
            assert lat.is_lattice()
            assert lat.minimum() == pt.bottom(d)
            assert lat.maximum() == pt.top(d)


def test_count_matches_fibers():
    for d in pt.normalized_decorations(4):
        assert pt.count_permutrees(d) == len(pt.insertion_fibers(d))
    assert pt.count_permutrees(pt.Decoration("n" * 6)) == 720


def test_tamari_rotation_oracle():
    # down^n permutree rotations match classical binary-tree covers: compare
    # the cover relations through the independent bracket-vector moves
    from permutree_lab import vectors as vec

    for n in (3, 4, 5):
        d = pt.Decoration("n" + "d" * (n - 2) + "n")
        lat = pt.rotation_lattice(d)
        got = {(vec.cubic_vector(a), vec.cubic_vector(b)) for a, b in lat.cover_pairs()}
        want = set()
        for b_vec in {vec.cubic_vector(t) for t in lat.elements}:
            # classical rotation at i: b_i grows by b_j + 1 where j = i + b_i + 1
            for i in range(1, n):
                j = i + b_vec[i - 1] + 1
                if j > n:
                    continue
                grow = (b_vec[j - 1] + 1) if j <= n - 1 else 1
                new = list(b_vec)
                new[i - 1] += grow
                if new[i - 1] <= n - i:
                    want.add((b_vec, tuple(new)))
        assert got <= want
        assert len(got) == len(lat.covers)
        # every classical move that lands on a valid bracket vector is a cover
        vecs = {vec.cubic_vector(t) for t in lat.elements}
        assert got == {(a, b) for a, b in want if a in vecs and b in vecs}


def test_permutreehedron_vertices():
    v = (3, 1, -1, -3)
    for d in pt.normalized_decorations(4):
        lat = pt.rotation_lattice(d)
        pts = {t: pt.permutreehedron_vertex(t) for t in lat.elements}
        assert all(sum(p) == 10 for p in pts.values())
        assert len(set(pts.values())) == len(pts)
        for a, b in lat.cover_pairs():
            da = sum(x * y for x, y in zip(pts[a], v))
            db = sum(x * y for x, y in zip(pts[b], v))
            assert db > da


def test_permutreehedron_none_case():
    lat = pt.rotation_lattice(pt.Decoration("nnnn"))
    for t in lat.elements:
        (pi,) = pt.linear_extensions(t)
        assert pt.permutreehedron_vertex(t) == wo.inverse(pi)


def test_edge_cuts_under_rotation():
    d = pt.Decoration("nxdn")
    for tree in pt.rotation_lattice(d).elements:
        for e in pt.increasing_rotations(tree):
            other = pt.rotate(tree, e)
            c1, c2 = pt.edge_cuts(tree), pt.edge_cuts(other)
            assert len(c1) == len(c2) == 3
            assert len(c1 & c2) == 2


def test_json_roundtrip():
    tree = pt.insert((5, 7, 4, 1, 3, 2, 6), "dunxndd")
    again = pt.permutree_from_json(tree.to_json())
    assert again == tree
    assert again.parents == tree.parents


def test_updown_sections():
    d = pt.Decoration("nxxn")
    assert pt.updown_sections(d) == [("n", "n"), ("n", "n"), ("n", "n")]
    d = pt.Decoration("ndxun")
    assert pt.updown_sections(d) == [("n", "d", "n"), ("n", "u", "n")]
