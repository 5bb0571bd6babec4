import itertools
import random
from pathlib import Path

import pytest

from codingmaps.coding_tree import extend_tree, pi_eval
from codingmaps.eq_graph import (B1, B2, build_eq_graph, classify_lift, dihedral_group,
                                 lift_table, multiplicity_classify, named_radial, prune,
                                 quadcantor_graph, random_related_pair, random_sequence,
                                 relation_decide, singleton_certificates)
from codingmaps.errors import EmptyGraph

GOLDEN = Path(__file__).parent / "golden"
NAMES = ("r1", "r2", "r3")


@pytest.fixture(scope="module")
def group():
    return dihedral_group()


@pytest.fixture(scope="module")
def graphs(group):
    return {n: quadcantor_graph(n, group) for n in NAMES}


def _canonical_dot(text):
    lines = [l.strip() for l in text.strip().splitlines()]
    return lines[0], sorted(lines[1:-1]), lines[-1]


def test_group_axioms(group):
    group.check_axioms()
    assert group.order == 8
    n = group.order
    for a, b, c in itertools.product(range(n), repeat=3):
        assert group.mul(group.mul(a, b), c) == group.mul(a, group.mul(b, c))
    for a in range(n):
        assert group.mul(a, 0) == group.mul(0, a) == a
        assert group.mul(a, group.inv(a)) == 0
    for rel in ((B1, B1), (B2, B2), (B1, B2) * 4):
        assert group.element(rel) == 0


def test_label_round_trip(group):
    for a in range(group.order):
        assert group.parse(group.label(a)) == a
    assert group.parse("B2^-1B1B2") == group.parse("B2B1B2")


def test_classify_lift_examples(group):
    r1, r2 = named_radial("r1"), named_radial("r2")
    e, b1 = group.parse("e"), group.parse("B1")
    assert classify_lift(r1, r1, (), 1, 1, group) == e
    assert classify_lift(r1, r1, (B1,), 1, 2, group) == e
    assert classify_lift(r2, r2, (B1,), 1, 2, group) == b1


@pytest.mark.parametrize("name", NAMES)
def test_golden_dot(graphs, name):
    got = _canonical_dot(graphs[name].to_dot())
    want = _canonical_dot((GOLDEN / f"{name}.dot").read_text())
    assert got == want


def test_graph_sizes(graphs):
    sizes = {n: (len(g.vertices), len(g.edges)) for n, g in graphs.items()}
    assert sizes == {"r1": (1, 2), "r2": (2, 4), "r3": (5, 10)}


@pytest.mark.parametrize("name", NAMES)
def test_every_vertex_has_outgoing_edge(graphs, name):
    g = graphs[name]
    assert {e[0] for e in g.edges} == set(g.vertices)


@pytest.mark.parametrize("name", NAMES)
def test_edge_soundness(graphs, group, name):
    r = named_radial(name)
    for s, t, i, j in graphs[name].edges:
        assert classify_lift(r, r, group.words[t], i, j, group) == s


@pytest.mark.parametrize("name", NAMES)
def test_pruning_soundness(graphs, group, name):
    g = graphs[name]
    r = named_radial(name)
    table = lift_table(r, r, group, g.vertices)
    edges = [(c, h, i, j) for (h, i, j), c in table.items()]
    assert prune(g.vertices, edges) == (sorted(g.vertices), sorted(g.edges))


def test_prune_drops_dead_ends():
    assert prune([0, 1, 2], [(0, 1, 1, 1), (1, 1, 2, 2), (2, 0, 1, 2)]) == ([0, 1, 2], [(0, 1, 1, 1), (1, 1, 2, 2), (2, 0, 1, 2)])
    assert prune([0, 1], [(0, 1, 1, 1)]) == ([], [])


def test_empty_graph(monkeypatch, group):
    import codingmaps.eq_graph as eg
    monkeypatch.setattr(eg, "lift_table", lambda *a, **k: {})
    r1 = named_radial("r1")
    with pytest.raises(EmptyGraph):
        build_eq_graph(r1, r1, group)


@pytest.mark.parametrize("name,w,wp,want", [
    ("r1", "12^", "12^", True), ("r1", "1^", "2^", False),
    ("r2", "1^", "2^", True), ("r2", "12^", "21^", True), ("r2", "112^", "122^", False),
])
def test_relation_examples(graphs, name, w, wp, want):
    assert relation_decide(graphs[name], w, wp) is want


def test_relation_example_numeric_cross_check():
    tree = extend_tree(named_radial("r2"), 8)
    a = pi_eval(tree, "112^", eps=1e-9).point
    b = pi_eval(tree, "122^", eps=1e-9).point
    assert abs(a - b) > 1e-4


def test_finite_words_are_undecided_or_false(graphs):
    assert relation_decide(graphs["r1"], "1212", "1212") is None
    assert relation_decide(graphs["r1"], "12", "11") is False


@pytest.mark.parametrize("name", NAMES)
def test_diagonal_symmetry_transitivity(graphs, name):
    g = graphs[name]
    rng = random.Random(name)
    seqs = [random_sequence(rng) for _ in range(12)]
    for a, b in random_related_pair(g, rng), random_related_pair(g, rng):
        seqs += [a, b]
    rel = {(i, j): relation_decide(g, a, b) for i, a in enumerate(seqs) for j, b in enumerate(seqs)}
    n = len(seqs)
    for i in range(n):
        assert rel[i, i]
        for j in range(n):
            assert rel[i, j] == rel[j, i]
            if rel[i, j]:
                assert all(rel[i, k] for k in range(n) if rel[j, k])


@pytest.mark.parametrize("name", NAMES)
def test_graph_numeric_consistency(graphs, name):
    g = graphs[name]
    tree = extend_tree(named_radial(name), 8)
    rng = random.Random(name + "numeric")
    pairs = [random_related_pair(g, rng) for _ in range(25)]
    pairs += [(random_sequence(rng), random_sequence(rng)) for _ in range(25)]
    for a, b in pairs:
        dist = abs(pi_eval(tree, a, eps=1e-9).point - pi_eval(tree, b, eps=1e-9).point)
        assert dist <= 1e-7 or dist >= 1e-4
        assert relation_decide(g, a, b) == (dist <= 1e-7)


@pytest.mark.parametrize("name,sure,most", [("r1", 1, 1), ("r2", 2, 2), ("r3", 1, 3)])
def test_multiplicity(graphs, name, sure, most):
    rep = multiplicity_classify(graphs[name], samples=1000)
    assert rep.almost_sure == sure
    assert rep.max_observed <= most
    if name == "r3":
        assert "12121" in rep.certificates


def test_multiplicity_is_deterministic(graphs):
    a = multiplicity_classify(graphs["r3"], samples=300, seed=5, min_frequency=0.0)
    b = multiplicity_classify(graphs["r3"], samples=300, seed=5, min_frequency=0.0)
    assert a == b


def test_certificates_empty_for_r2(graphs):
    assert singleton_certificates(graphs["r2"]) == ()
