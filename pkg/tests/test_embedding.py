import itertools

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from helpers import THIN_POOL, lattice_from_recipe, modular_recipe
from tightembed import fixtures as F
from tightembed.errors import (BoundExceeded, FactorNotTight, GraphDisconnected, InputError,
                               ModelCheckFailed, NotABijection, NotDistributive, NotTight)
from tightembed.embedding import (Partition, all_partitions, brute_force_embedding_search,
                                  build_geometric_embedding, build_partition_embedding, certify,
                                  check_lattice_model, comp, connect_components,
                                  direct_embedding_search, distributive_embedding,
                                  embed_lattice, extract_model_from_embedding, flats_lattice,
                                  make_embedding, pad_embedding, part_lattice,
                                  pipeline_embed_thin, subdirect_embedding)
from tightembed.lattice import (boolean_lattice, chain, join_irreducibles, m_n,
                                maximal_congruences)
from tightembed.matroid import BinaryMatroid, complete_graph, fano_matroid, labeled_graph


# ------------------------------------------------------------- partitions

@st.composite
def partitions(draw, n):
    lab = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    groups = {}
    for x, k in enumerate(lab, start=1):
        groups.setdefault(k, []).append(x)
    return Partition.of(n, list(groups.values()))


def pair_closure(n, pairs):
    G = nx.Graph()
    G.add_nodes_from(range(1, n + 1))
    G.add_edges_from(pairs)
    return {tuple(sorted(e)) for c in nx.connected_components(G)
            for e in itertools.combinations(sorted(c), 2)}


@given(st.integers(1, 7).flatmap(lambda n: st.tuples(partitions(n), partitions(n))))
def test_partition_operations_match_pair_sets(ab):
    a, b = ab
    n = a.n
    assert a.meet(b).pairs() == a.pairs() & b.pairs()
    assert a.join(b).pairs() == pair_closure(n, a.pairs() | b.pairs())
    assert a.leq(b) == (a.pairs() <= b.pairs())
    assert a.covers(b) == (b.pairs() < a.pairs() and a.rank() == b.rank() + 1)
    assert Partition.parse(str(a), n) == a


def test_bell_numbers():
    assert [sum(1 for _ in all_partitions(n)) for n in range(7)] == [1, 1, 2, 5, 15, 52, 203]


def test_partition_strings():
    p = Partition.parse("13|25|4")
    assert p.blocks == ((1, 3), (2, 5), (4,))
    assert str(p) == "13|25|4"
    assert comp(4, [(1, 2), (3, 4)]) == Partition.parse("12|34")
    big = Partition.discrete(10)
    assert Partition.parse(str(big), 10) == big
    with pytest.raises(InputError):
        Partition.of(3, [[1, 2]])


def test_part_lattice():
    P4 = part_lattice(4)
    assert P4.n == 15 and P4.height == 3
    assert P4.profile.modular is False
    with pytest.raises(BoundExceeded):
        part_lattice(8)


# ------------------------------------------------------------- certified embeddings

def test_m3_into_part3():
    emb = build_partition_embedding(F.get("m3"),
                                    labeled_graph([(1, 2, "a1"), (1, 3, "a2"), (2, 3, "a3")]))
    assert emb.n == 3 and emb.tight and emb.certificate.injective
    atoms = sorted(str(emb.map[a]) for a in ("a1", "a2", "a3"))
    assert atoms == ["12|3", "13|2", "1|23"]
    assert str(emb.map[1]) == "123" and str(emb.map[0]) == "1|2|3"


def test_boolean_square_via_path():
    L = boolean_lattice(2)
    J = join_irreducibles(L).J
    g = labeled_graph([(0, 1, J[0]), (1, 2, J[1])])
    emb = build_partition_embedding(L, g)
    assert emb.n == 3 and emb.tight


def test_l2_pipeline_into_part4():
    rep = pipeline_embed_thin(F.get("l2"))
    assert rep.branch == "ump"
    emb = rep.embedding
    assert emb.n == 4 and emb.tight and emb.certificate.injective


def test_model_check_failures():
    m3 = F.get("m3")
    path = labeled_graph([(0, 1, "a1"), (1, 2, "a2"), (2, 3, "a3")])
    chk = check_lattice_model(m3, path)
    assert not chk.ok and chk.failed_condition == "rank"
    with pytest.raises(ModelCheckFailed):
        build_partition_embedding(m3, path)
    with pytest.raises(NotABijection):
        check_lattice_model(m3, path, {"a1": "a1", "a2": "a1", "a3": "a3"})
    # the distributive cube glued onto a triangle violates the join condition
    L = boolean_lattice(3)
    J = join_irreducibles(L).J
    tri = labeled_graph([(0, 1, J[0]), (1, 2, J[1]), (0, 2, J[2])])
    chk = check_lattice_model(L, tri)
    assert not chk.ok and chk.failed_condition == "join"
    with pytest.raises(InputError):
        check_lattice_model(m3, "not a carrier")


def test_disconnected_model_is_rejected():
    L = boolean_lattice(2)
    J = join_irreducibles(L).J
    g = labeled_graph([(0, 1, J[0]), (2, 3, J[1])])
    with pytest.raises(GraphDisconnected):
        build_partition_embedding(L, g)
    emb = build_partition_embedding(L, connect_components(g))
    assert emb.n == 3 and emb.tight


def test_certify_catches_broken_maps():
    m3 = F.get("m3")
    emb = build_partition_embedding(m3, labeled_graph([(1, 2, "a1"), (1, 3, "a2"),
                                                       (2, 3, "a3")]))
    bad = dict(emb.map)
    bad["a1"], bad["a2"] = bad["a2"], bad["a2"]
    cert = certify(m3, 3, bad)
    assert not cert.tight and not cert.injective and cert.witness
    with pytest.raises(NotTight):
        make_embedding(m3, 3, bad)
    padded = pad_embedding(emb, 5)
    assert padded.n == 5 and padded.tight
    loose = dict(padded.map)
    loose[1] = Partition.parse("12345")
    assert not certify(m3, 5, loose).is_cover_preserving


def test_subdirect_embedding_of_l2():
    L = F.get("l2")
    emb = subdirect_embedding(L)
    assert emb.n == 5 and emb.tight and emb.certificate.injective
    x = extract_model_from_embedding(L, emb.map)
    assert len(x.graph.vertices) == 4 and x.embedding.n == 4 and x.embedding.tight
    assert len(x.graph.labels) == len(join_irreducibles(L).J)


def test_subdirect_needs_tight_factors():
    L = F.get("l2")
    mc = maximal_congruences(L)
    facs = [embed_lattice(f) for f in mc.factors]
    bad = facs[0]
    broken = type(bad)(bad.lattice, bad.n, {a: Partition.discrete(bad.n) for a in bad.map},
                       bad.certificate)
    with pytest.raises(FactorNotTight):
        subdirect_embedding(L, [broken] + facs[1:])


def test_single_factor_subdirect():
    emb = subdirect_embedding(F.get("m3"))
    assert emb.n == 3 and emb.tight


def test_extract_from_m3():
    emb = pipeline_embed_thin(F.get("m3")).embedding
    x = extract_model_from_embedding(F.get("m3"), emb.map)
    assert len(x.graph.vertices) == 3 and len(x.graph.labels) == 3
    assert x.embedding.map == emb.map


def test_extract_rejects_non_tight():
    m3 = F.get("m3")
    with pytest.raises(NotTight):
        extract_model_from_embedding(m3, {a: Partition.discrete(3) for a in m3.labels}, 3)


@pytest.mark.parametrize("L,n", [(chain(2), 2), (boolean_lattice(2), 3), (chain(3), 3),
                                 (boolean_lattice(3), 4)])
def test_distributive_embedding(L, n):
    emb = distributive_embedding(L)
    assert emb.n == n and emb.tight and emb.certificate.injective


def test_distributive_embedding_rejects_m3():
    with pytest.raises(NotDistributive):
        distributive_embedding(F.get("m3"))


def test_distributive_square_as_subdirect_power():
    L = boolean_lattice(2)
    a, b = distributive_embedding(L), subdirect_embedding(L)
    assert a.tight and b.tight
    assert b.n == 4


# ------------------------------------------------------------- geometric embeddings

def test_geometric_embedding_of_m3():
    m = BinaryMatroid(("a1", "a2", "a3"), (1, 2, 3))
    g = build_geometric_embedding(F.get("m3"), m)
    assert g.tight
    assert g.map[1] == frozenset({"a1", "a2", "a3"})


def test_geometric_embedding_of_l2():
    L = F.get("l2")
    J = join_irreducibles(L).J
    cols = {("p", 0): 1, ("q", 0): 2, ("r", 0): 3, (0, 1): 4}
    m = BinaryMatroid(tuple(J), tuple(cols[p] for p in J))
    g = build_geometric_embedding(L, m)
    assert g.tight
    assert flats_lattice(m).height == 3


def test_fano_models_the_subspace_lattice():
    L = F.get("lm_gf2_3")
    J = join_irreducibles(L).J
    assert check_lattice_model(L, fano_matroid(J)).ok
    g = build_geometric_embedding(L, fano_matroid(J))
    assert g.tight


def test_closure_condition_failure():
    # the cube on a 3-circuit: the ideal of two atoms is not closed
    B = boolean_lattice(3)
    JB = join_irreducibles(B).J
    m3 = BinaryMatroid(tuple(JB), (1, 2, 3))
    with pytest.raises(ModelCheckFailed):
        build_geometric_embedding(B, m3)


# ------------------------------------------------------------- searches

def test_brute_force_search():
    e = brute_force_embedding_search(F.get("m3"), n=3)
    assert e is not None and e.n == 3 and e.tight
    e = brute_force_embedding_search(F.get("l2"), n=4)
    assert e is not None and e.n == 4 and e.tight
    assert brute_force_embedding_search(F.get("lm_gf2_3")) is None
    assert brute_force_embedding_search(F.get("m4")) is None
    assert brute_force_embedding_search(F.get("m3"), n=2) is None
    padded = brute_force_embedding_search(F.get("m3"), n=5)
    assert padded.n == 5 and padded.tight
    with pytest.raises(BoundExceeded):
        brute_force_embedding_search(F.get("l2"), ji_bound=2)


@pytest.mark.parametrize("name,n,expect", [("m3", 3, True), ("l2", 4, True), ("m4", 4, False),
                                           ("m4", 5, False), ("boolean2", 3, True),
                                           ("chain3", 3, True), ("pentagon", 4, False)])
def test_direct_search_agrees_with_graph_search(name, n, expect):
    L = F.get(name)
    direct = direct_embedding_search(L, n)
    assert (direct is not None) == expect
    if L.profile.modular:
        graph = brute_force_embedding_search(L, n=n)
        assert (graph is not None) == expect


def test_direct_search_bound():
    with pytest.raises(BoundExceeded):
        direct_embedding_search(F.get("m3"), 6)


def test_pipeline_reports():
    assert "covering M4" in pipeline_embed_thin(F.get("m4")).reason
    assert "2-distributive" in pipeline_embed_thin(F.get("lm_gf2_3")).reason
    assert "not modular" in pipeline_embed_thin(F.get("pentagon")).reason
    rep = pipeline_embed_thin(chain(4))
    assert rep.embedding.n == 4 and rep.embedding.tight


def test_embed_lattice_routes():
    assert embed_lattice(chain(1)).n == 1
    assert embed_lattice(boolean_lattice(2)).n == 3
    assert embed_lattice(m_n(3)).n == 3
    assert embed_lattice(F.get("m4")) is None


# ------------------------------------------------------------- properties

@given(modular_recipe(pool=THIN_POOL, max_size=32))
def test_pipeline_on_thin_lattices(recipe):
    L = lattice_from_recipe(recipe)
    if not L.profile.thin:
        return
    rep = pipeline_embed_thin(L)
    emb = rep.embedding
    assert emb is not None, rep.reason
    assert emb.tight and emb.certificate.injective
    assert emb.n == L.height + 1
    x = extract_model_from_embedding(L, emb.map)
    assert len(x.graph.vertices) == L.height + 1
    assert x.embedding.tight


@given(modular_recipe(max_size=24))
def test_tight_embeddings_have_enough_points(recipe):
    L = lattice_from_recipe(recipe)
    if len(join_irreducibles(L).J) > 8:
        return
    emb = brute_force_embedding_search(L)
    if emb is None:
        assert not L.profile.thin
        return
    assert emb.tight and emb.n >= L.height + 1
    x = extract_model_from_embedding(L, emb.map)
    assert x.embedding.tight and x.embedding.n == L.height + 1
