import pytest
from hypothesis import given

from helpers import cycle_pls, oracle_cycles, random_pls
from tightembed import fixtures as F
from tightembed.errors import (BoundExceeded, InputError, LineSizeNot3, LinesShareTwoPoints,
                               NotAQimp, NotAUmp, PathCollision, UnknownPoint)
from tightembed.pls import (AugmentStep, PLS, add_path, blueprint_graph, build_pls,
                            canonical_junctions, classify_pls, components, components_and_rank,
                            enumerate_cycles, find_triangle_configurations, is_path, is_qimp,
                            is_testifying_ordering, link_summary, make_cycle, midpoint_links,
                            plot_graph, plotted_points, recognize_augmented_ump, replay_history,
                            split_rank, tree_decomposition)
from tightembed.pls import testifying_ordering as find_ordering

LAMBDA1_ORDER = [(1, 2, 3), (3, 4, 5), (5, 6, 7), (7, 8, 1), (2, 9, 5)]


def _keys(p):
    return {(frozenset(map(frozenset, c.lines)), frozenset(c.junctions)) for c in enumerate_cycles(p)}


def test_validation():
    assert len(F.get("lambda1").lines) == 5
    with pytest.raises(LinesShareTwoPoints):
        build_pls([1, 2, 3, 4], [(1, 2, 3), (1, 2, 4)])
    with pytest.raises(LineSizeNot3):
        build_pls([1, 2, 3, 4], [(1, 2, 3, 4)])
    with pytest.raises(UnknownPoint):
        build_pls([1, 2], [(1, 2, 3)])
    fano = F.get("fano")
    assert len(fano.points) == 7 and len(fano.lines) == 7


def test_ranks():
    l1 = F.get("lambda1")
    cr = components_and_rank(l1)
    assert (cr.rk, cr.c) == (4, 1)
    assert F.get("fano").rank == 0
    assert F.get("j2").rank == 6
    iso = build_pls([1, 2, 3, 4, 5], [(1, 2, 3)])
    cr = components_and_rank(iso)
    assert cr.c == 3 and cr.isolated == (4, 5) and cr.rk == 4


def test_paths():
    l1 = F.get("lambda1")
    assert is_path(l1, [1, 3, 5])
    assert not is_path(l1, [1, 3, 1])
    assert not is_path(l1, [1, 5])


def test_cycles_of_lambda1():
    cyc = enumerate_cycles(F.get("lambda1"))
    js = {canonical_junctions(F.get("lambda1"), c.junctions) for c in cyc}
    assert canonical_junctions(F.get("lambda1"), (1, 3, 5, 7)) in js
    assert canonical_junctions(F.get("lambda1"), (1, 2, 5, 7)) in js
    assert len(cyc) == 3


@pytest.mark.parametrize("name,count", [("lambda1", 3), ("j2", 4), ("fano", 28), ("j3", 4),
                                        ("hexagon", 1), ("acyclic_tree", 0), ("fig7a", 3)])
def test_cycle_counts_match_oracle(name, count):
    p = F.get(name)
    assert len(enumerate_cycles(p)) == count
    assert _keys(p) == oracle_cycles(p)


@given(random_pls(max_points=9, max_lines=7))
def test_cycles_match_oracle_on_random_plses(p):
    assert _keys(p) == oracle_cycles(p)


def test_j2_cycles():
    p = F.get("j2")
    js = {canonical_junctions(p, c.junctions) for c in enumerate_cycles(p)}
    for c in [(1, 3, 5), (5, 6, 8, 10), (1, 13, 7, 6)]:
        assert canonical_junctions(p, c) in js
    big = [c for c in enumerate_cycles(p) if c.n == 7]
    assert len(big) == 1 and big[0].support == frozenset(p.points)


def test_make_cycle():
    p = F.get("lambda1")
    c = make_cycle(p, (1, 3, 5, 7))
    assert c.midpoints == (2, 4, 6, 8)
    assert make_cycle(p, (1, 3, 4)) is None


def test_classify_lambda1():
    prof = classify_pls(F.get("lambda1"))
    assert not prof.ump and not prof.bmpl and prof.sparse
    assert is_testifying_ordering(prof.testifying_ordering)
    assert is_testifying_ordering(LAMBDA1_ORDER)


def test_classify_others():
    fano = classify_pls(F.get("fano"))
    assert not fano.sparse and fano.testifying_ordering == ()
    tree = classify_pls(F.get("acyclic_tree"))
    assert tree.acyclic and tree.ump and tree.nmpl and tree.bmpl and tree.qimp
    j2 = classify_pls(F.get("j2"))
    assert j2.bmpl and not j2.ump and not j2.only_type1_links and j2.n_cycles == 4
    j3 = classify_pls(F.get("j3"))
    assert j3.bmpl and not j3.ump
    assert not classify_pls(F.get("fig7a_dashed")).bmpl
    assert classify_pls(F.get("fig7a")).bmpl


def test_empty_lines():
    p = build_pls([1, 2, 3], [])
    prof = classify_pls(p)
    assert prof.acyclic and prof.qimp and prof.ump and prof.bmpl and prof.sparse
    assert p.rank == 3


def test_lambda1_line_has_two_midpoints():
    p = F.get("lambda1")
    mids = {}
    for c in enumerate_cycles(p):
        for l, m in zip(c.lines, c.midpoints):
            mids.setdefault(l, set()).add(m)
    assert mids[(1, 2, 3)] == {1, 2, 3}


def test_testifying_ordering_rejects_bad_orders():
    assert not is_testifying_ordering([(1, 2, 4), (2, 3, 5), (1, 3, 6), (4, 5, 6)])
    assert find_ordering(F.get("fano")) is None


def test_midpoint_links_j2():
    p = F.get("j2")
    c = make_cycle(p, (1, 3, 5))
    links = midpoint_links(p, c)
    assert any(l.kind == 1 and l.benign and set(l.path) == {6, 8, 10, 5}
               and l.path[0] == 6 for l in links)
    c = make_cycle(p, (5, 6, 8, 10))
    links = midpoint_links(p, c)
    assert any(l.kind == 2 and l.benign and l.path in ((1, 13, 7), (7, 13, 1)) for l in links)
    assert all(l.benign for c in enumerate_cycles(p) for l in midpoint_links(p, c))


def test_midpoint_links_of_nmpl_are_empty():
    p = cycle_pls(4)
    for c in enumerate_cycles(p):
        assert midpoint_links(p, c) == [] or midpoint_links(p, c) == ()
        assert link_summary(p, c) == (False, False, False)


def test_lambda1_has_bad_link():
    p = F.get("lambda1")
    c = make_cycle(p, (1, 3, 5, 7))
    bad = [l for l in midpoint_links(p, c) if not l.benign]
    assert bad and all(l.kind == 1 for l in bad)


def test_blueprints():
    g = blueprint_graph(F.get("hexagon"))
    assert g.number_of_nodes() == 6 and g.number_of_edges() == 6
    assert all(d == 2 for _, d in g.degree())
    g = blueprint_graph(F.get("fig3c"))
    assert g.number_of_edges() == 5
    assert sorted(d for _, d in g.degree()) == [1, 2, 2, 2, 3]
    with pytest.raises(NotAQimp):
        plotted_points(F.get("lambda1"))
    single = build_pls(["a", "m", "b"], [("a", "m", "b")])
    g = blueprint_graph(single)
    assert g.number_of_edges() == 1


def test_plot_graph_round_trip():
    import networkx as nx
    p = plot_graph(nx.cycle_graph(5))
    assert is_qimp(p)
    assert len(enumerate_cycles(p)) == 1
    g = blueprint_graph(p)
    assert nx.is_isomorphic(g, nx.cycle_graph(5))


def test_tree_decompositions():
    td = tree_decomposition(F.get("qimp_j1"))
    assert len(td.parts) == 1 and td.glue_points == (None,)
    # glued at a junction of both: still one QIMP
    bowtie = build_pls(range(1, 12), [(1, 2, 3), (3, 4, 5), (5, 6, 1), (1, 7, 8), (8, 9, 10),
                                      (10, 11, 1)])
    assert len(tree_decomposition(bowtie).parts) == 1
    # glued at a midpoint of the first triangle: two parts
    two = build_pls(range(1, 12), [(1, 2, 3), (3, 4, 5), (5, 6, 1), (2, 7, 8), (8, 9, 10),
                                   (10, 11, 2)])
    assert not is_qimp(two)
    td = tree_decomposition(two)
    assert len(td.parts) == 2 and td.glue_points == (None, 2)
    td = tree_decomposition(F.get("ump_j5"))
    assert len(td.parts) == 2 and td.glue_points == (None, "q")
    with pytest.raises(NotAUmp):
        tree_decomposition(F.get("lambda1"))


def test_add_path():
    p = build_pls([1, 2], [])
    res = add_path(p, 1, 2)
    # two old points on the new line: the rank does not move
    assert len(res.pls.lines) == 1 and res.pls.rank == p.rank
    res = add_path(p, 1, 2, inner_count=1)
    assert res.pls.rank == p.rank + 1
    base = F.get("j2_base")
    mid = add_path(base, 6, 5, inner=[8, 10], midpoints=[7, 9, 11])
    assert len(mid.pls.points) == 11 and len(mid.pls.lines) == 6
    assert any(l.kind == 1 for l in mid.benign_links)
    full = add_path(mid.pls, 1, 7, inner=[13], midpoints=[12, 14])
    assert full.pls == F.get("j2")
    assert any(l.kind == 2 for l in full.benign_links)
    with pytest.raises(PathCollision):
        add_path(base, 1, 3)
    with pytest.raises(UnknownPoint):
        add_path(base, 1, 99)
    with pytest.raises(InputError):
        add_path(base, 1, 1)


def test_replay_history():
    hist = F.get("j2_history")
    assert replay_history(F.get("j2_base"), hist) == F.get("j2")
    bad = (AugmentStep((1, 3, 5), (2, 5), 1, (99,)),)
    with pytest.raises(PathCollision):
        replay_history(F.get("j2_base"), bad)


def test_recognize_augmented_ump():
    rec = recognize_augmented_ump(cycle_pls(4))
    assert rec.yes and rec.history == ()
    rec = recognize_augmented_ump(F.get("j2"))
    assert rec.yes and len(rec.history) == 2
    assert replay_history(rec.base, rec.history) == F.get("j2")
    assert classify_pls(rec.base).ump
    assert not recognize_augmented_ump(F.get("j2"), type1_only=True).yes
    assert not recognize_augmented_ump(F.get("j3")).yes


def test_split_rank():
    sr = split_rank(F.get("lambda1"))
    assert sr.r_star == 2 and sr.identity_holds
    assert 4 == 5 - sr.r_star + 1
    sr = split_rank(build_pls([1], []))
    assert sr.r_star == 0 and 1 == 0 - 0 + 1
    assert split_rank(F.get("acyclic_tree")).r_star == 0
    sr = split_rank(F.get("fano"))
    assert F.get("fano").rank == 7 - sr.r_star + 1
    big = build_pls(range(1, 40), [(i, i + 1, i + 2) for i in range(1, 37, 2)])
    with pytest.raises(BoundExceeded):
        split_rank(big)


def test_triangle_configurations():
    confs = find_triangle_configurations(F.get("fano"))
    assert len(confs) >= 1
    for conf in confs:
        pts = set().union(*map(set, conf))
        assert len(pts) == 6
    assert find_triangle_configurations(F.get("lambda1")) == []
    assert find_triangle_configurations(F.get("acyclic_tree")) == []
    quad = build_pls(range(1, 7), [(1, 2, 4), (1, 3, 6), (2, 3, 5), (4, 5, 6)])
    assert len(find_triangle_configurations(quad)) == 1


def test_components():
    p = build_pls(range(1, 8), [(1, 2, 3), (4, 5, 6)])
    assert components(p) == [(1, 2, 3), (4, 5, 6), (7,)]


def test_cycle_bound():
    with pytest.raises(BoundExceeded):
        enumerate_cycles(cycle_pls(25))
