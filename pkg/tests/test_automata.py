import json

import pytest

from permutree_lab import automata as am
from permutree_lab import weak_order as wo
from permutree_lab.errors import ValidationError


def test_single_automaton_examples():
    U2 = am.build_single("U", 2, 3)
    assert U2.accepts((2, 1, 2))
    assert not U2.accepts((1, 2, 1))
    assert U2.accepts(())
    U4 = am.build_single("U", 4, 6)
    assert U4.accepts((3, 5, 2, 1, 3))
    with pytest.raises(ValidationError):
        am.build_single("U", 1, 3)
    with pytest.raises(ValidationError):
        am.build_single("X", 2, 4)


def test_mirror_automaton():
    D2 = am.build_single("D", 2, 3)
    assert D2.accepts((1, 2, 1))
    assert not D2.accepts((2, 1, 2))


def test_state_counts_and_classes():
    aut = am.build_single("U", 2, 4)
    classes = sorted(aut.classify.values())
    assert classes.count("healthy") == 3  # spine 2, 3, 4
    assert classes.count("ill") == 3
    assert classes.count("dead") == 2


def test_same_state_examples():
    U2 = am.build_single("U", 2, 4)
    words = wo.reduced_words((4, 3, 1, 2))
    assert len(words) == 5
    assert {U2.run(w) for w in words} == {("healthy", 4)}
    words = wo.reduced_words((4, 3, 2, 1))
    accepted = [w for w in words if U2.accepts(w)]
    assert len(accepted) == 7
    assert {U2.run(w) for w in accepted} == {("ill", 4)}
    dead = {}
    for w in words:
        st = U2.run(w)
        if U2.classify[st] == "dead":
            dead[st] = dead.get(st, 0) + 1
    assert sorted(dead.values()) == [2, 7]


def test_refined_state_cases_n5():
    U4 = am.build_single("U", 4, 5)
    for pi, cls, count in [
        ((3, 2, 1, 4, 5), "healthy", 2),
        ((4, 3, 2, 1, 5), "ill", 16),
        ((4, 3, 2, 5, 1), "dead", 35),
    ]:
        words = wo.reduced_words(pi)
        assert len(words) == count
        states = {U4.run(w) for w in words}
        assert len(states) == 1
        assert U4.classify[states.pop()] == cls


def test_product_classification():
    aut = am.product({2}, {2}, 3)
    # neither reduced word of 321 is accepted by both factors
    assert not aut.accepts((2, 1, 2))
    assert not aut.accepts((1, 2, 1))
    empty = am.product(set(), set(), 4)
    for pi in wo.all_perms(4):
        assert all(empty.accepts(w) for w in wo.reduced_words(pi))


def test_product_skeleton_s4():
    aut = am.product({3}, {2}, 4)
    for pi in wo.all_perms(4):
        has = any(aut.accepts(w) for w in wo.reduced_words(pi))
        assert has == am.avoids_all(pi, {3}, {2})


def test_exists_accepted_word():
    assert am.exists_accepted_word((3, 4, 2, 1), {2}, set())
    assert not am.exists_accepted_word((4, 2, 3, 1), {2}, set())
    assert am.exists_accepted_word((1, 2, 3, 4), {2}, {3})
    with pytest.raises(ValidationError):
        am.exists_accepted_word((3, 2, 1), {2}, {2})


def test_sorting_worked_traces():
    out = am.permutree_sort((3, 4, 2, 1), {2}, set())
    assert out.sorted
    assert out.word == (2, 1, 3, 2, 3)
    assert wo.evaluate_word(out.word, 4) == (3, 4, 2, 1)
    out = am.permutree_sort((4, 2, 3, 1), {2}, set())
    assert not out.sorted
    assert out.residual == (1, 2, 4, 3)
    out = am.permutree_sort((5, 4, 2, 1, 3), {2}, {4})
    assert out.sorted and out.word[0] == 3


def test_sort_trace_structure():
    out = am.permutree_sort((3, 4, 2, 1), {2}, set())
    assert len(out.trace) == len(out.word)
    pi0, j0, l0 = out.trace[0]
    assert pi0 == (3, 4, 2, 1) and l0 == out.word[0]


def test_resorting_residual_terminates():
    # re-sorting residuals keeps making progress until a fixpoint
    pi = (4, 2, 3, 1)
    seen = []
    for _ in range(10):
        out = am.permutree_sort(pi, {2}, set())
        seen.append(pi)
        if out.residual == pi:
            break
        pi = out.residual
    assert pi not in seen[:-1]
    assert am.permutree_sort(pi, {2}, set()).sorted or pi == seen[-1]


def test_priority_is_configurable():
    out_default = am.permutree_sort((3, 4, 2, 1), set(), set())
    out_rev = am.permutree_sort((3, 4, 2, 1), set(), set(), priority=(3, 2, 1))
    assert out_default.sorted and out_rev.sorted
    assert out_default.word != out_rev.word


def test_generating_tree_counts():
    words, children = am.generating_tree(4, {2, 3}, set())
    assert len(words) == 14
    assert () in words
    for U, D in [({2}, {3}), ({3}, {2}), (set(), {2, 3})]:
        ws, _ = am.generating_tree(4, U, D)
        assert len(ws) == 14
    ws, _ = am.generating_tree(4, set(), set())
    assert len(ws) == 24
    ws, _ = am.generating_tree(4, {2}, set())
    from permutree_lab import permutree as pt

    assert len(ws) == pt.count_permutrees(pt.Decoration("nunn"))


def test_generating_tree_prefix_closed_and_structure():
    words, children = am.generating_tree(4, {3}, {2})
    for w in words:
        for k in range(len(w)):
            assert w[:k] in words
    roots = [w for w in words if not w]
    assert roots == [()]
    assert sum(len(v) for v in children.values()) == len(words) - 1


def test_coxeter_sorting_example():
    word, sortable = am.coxeter_sort((3, 4, 2, 1), (2, 1, 3))
    assert word == (2, 1, 3, 2, 3)
    assert sortable
    assert am.coxeter_sort((1, 2, 3, 4), (1, 2, 3)) == ((), True)
    with pytest.raises(ValidationError):
        am.coxeter_sort((2, 1, 3), (1, 1))


def test_coxeter_element_sets():
    assert am.coxeter_element_sets((2, 1, 3), 4) == ({2}, {3})
    assert am.coxeter_element_sets((1, 2, 3), 4) == (set(), {2, 3})
    assert am.coxeter_element_sets((3, 2, 1), 4) == ({2, 3}, set())


def test_coxeter_catalan_counts():
    from itertools import permutations

    for n, catalan in [(3, 5), (4, 14)]:
        for c in permutations(range(1, n)):
            cnt = sum(1 for pi in wo.all_perms(n) if am.coxeter_sort(pi, c)[1])
            assert cnt == catalan


def test_exports():
    aut = am.build_single("U", 2, 3)
    data = aut.to_json()
    json.dumps(data)
    assert data["initial"] == repr(("healthy", 2))
    assert set(data["states"].values()) <= {"healthy", "ill", "dead"}
    text = aut.to_edge_list()
    assert "->" in text and "[s1]" in text
