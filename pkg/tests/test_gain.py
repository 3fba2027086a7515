from __future__ import annotations

import pytest

from liftforge.core import (CapacityError, MatroidError, check_rank_axioms, complete_graph_edges, graphic, is_quotient,
                            isomorphic, rank_zero, same_table)
from liftforge.fields import galois_field
from liftforge.gain import (Cycle, GainGraph, balanced_lift, build_gain_graph, build_N, class_membership,
                            cycle_circuit_trace, edge_subset, enumerate_cycles, g_map, is_balanced, label_projection,
                            lift_matroid_direct, phi, projective_geometry, projective_lift, theta_check,
                            tilde_relation)
from liftforge.groups import elementary_abelian, parse_group_name, symmetric_group
from liftforge.lift import lift, satisfies_star

import oracles

Z2 = elementary_abelian(2, 1)
V4 = elementary_abelian(2, 2)


def test_build_examples():
    assert build_gain_graph(3, Z2).size == 6
    assert build_gain_graph(3, V4).size == 12
    assert build_gain_graph(4, parse_group_name("Z3")).size == 18
    G = build_gain_graph(3, Z2)
    assert G.edges[:3] == [(0, 1, 0), (0, 1, 1), (0, 2, 0)]
    assert G.edge_index(1, 2, 1) == 5
    with pytest.raises(MatroidError):
        build_gain_graph(2, Z2)


@pytest.mark.parametrize("n,group,count", [
    (3, Z2, 11), (3, parse_group_name("trivial"), 1), (3, V4, 82), (3, parse_group_name("Z3"), 36),
    (4, Z2, 86),
], ids=str)
def test_cycle_counts(n, group, count):
    G = build_gain_graph(n, group)
    cyc = enumerate_cycles(G)
    assert len(cyc) == count
    # same list, same order, as the brute-force circuits of the multigraph
    edges = [(i, j) for i, j, _ in G.edges]
    if G.size <= 12:
        brute = oracles.circuits_from_rank(G.size, lambda X: oracles.forest_rank(edges, n, X))
        assert [C.edges for C in cyc] == brute
    assert [C.edges for C in cyc] == list(G.matroid.circuits())


def test_phi_digon():
    G = build_gain_graph(3, parse_group_name("Z3"))
    a, b = G.edge_index(0, 1, 1), G.edge_index(0, 1, 2)
    C = Cycle(G, (1 << a) | (1 << b))
    grp = G.group
    assert phi(C) == frozenset({grp.compose(1, grp.inverse(2)), grp.compose(2, grp.inverse(1))})
    assert not is_balanced(C)


def test_phi_triangle_in_z2():
    G = build_gain_graph(3, Z2)
    for C in G.cycles():
        if C.edges.bit_count() == 3:
            total = sum(G.edges[e][2] for e in oracles.members(C.edges)) % 2
            assert phi(C) == frozenset({total})


def test_identity_labels_balanced():
    for grp in (Z2, V4, symmetric_group(3)):
        G = build_gain_graph(3, grp)
        tri = Cycle(G, sum(1 << G.edge_index(i, j, 0) for i, j in [(0, 1), (1, 2), (0, 2)]))
        assert phi(tri) == frozenset({0}) and is_balanced(tri)


def test_digons_unbalanced():
    for grp in (Z2, V4, symmetric_group(3)):
        for C in build_gain_graph(3, grp).cycles():
            if C.edges.bit_count() == 2:
                assert not is_balanced(C)


def test_phi_nonabelian_uses_walks():
    G = build_gain_graph(3, symmetric_group(3))
    sizes = {len(phi(C)) for C in G.cycles()}
    # conjugate pairs can make φ larger than in the abelian case
    assert max(sizes) > 2


def test_cycle_capacity():
    with pytest.raises(CapacityError):
        build_gain_graph(6, Z2).cycles()


def test_lg_examples():
    LG = balanced_lift(3, Z2)
    assert LG.size == 6 and LG.full_rank == 3
    assert check_rank_axioms(LG)
    T = balanced_lift(3, parse_group_name("trivial"))
    assert isomorphic(T, graphic(complete_graph_edges(3))) is not None
    LG3 = balanced_lift(3, parse_group_name("Z3"))
    assert LG3.size == 9 and LG3.full_rank == 3


def test_lg_direct_against_independence_oracle():
    G = build_gain_graph(3, Z2)
    balanced = [C.edges for C in G.cycles() if is_balanced(C)]
    edges = [(i, j) for i, j, _ in G.edges]

    def independent(X):
        nullity = X.bit_count() - oracles.forest_rank(edges, 3, X)
        return nullity <= 1 and not any(B & ~X == 0 for B in balanced)

    table = oracles.rank_from_independent(G.size, independent)
    assert oracles.same_ranks(lift_matroid_direct(G), table)


def test_lg_is_lift_of_graphic():
    G = build_gain_graph(3, Z2)
    assert is_quotient(G.matroid, balanced_lift(3, Z2))


@pytest.mark.parametrize("group", [Z2, V4, parse_group_name("Z3"), symmetric_group(3)], ids=lambda g: g.name)
def test_theta_property(group):
    assert theta_check(build_gain_graph(3, group))


def test_label_projection_examples():
    P = label_projection(2, 2, 2)
    assert P.num_points == 1 and P.point((1, 0)) == 0
    P = label_projection(2, 2, 1)
    assert P.points.column(P.point((1, 1))) == (1, 1)
    P = label_projection(3, 2, 1)
    assert P.point((2, 1)) == P.point((1, 2))
    assert P.points.column(P.point((2, 1))) == (1, 2)
    with pytest.raises(MatroidError):
        label_projection(2, 3, 2)


def test_g_map_single_valued():
    G = build_gain_graph(3, elementary_abelian(3, 2))
    P = label_projection(3, 2, 1)
    for C in G.cycles(max_group=9):
        if not is_balanced(C):
            assert 0 <= g_map(C, P) < P.num_points


def test_build_N_examples():
    F2 = galois_field(2)
    PG = projective_geometry(2, F2)
    S = build_N(3, 2, 2, PG)
    G = GainGraph(3, V4)
    fam = G.matroid.circuits()
    for C in G.cycles():
        k = fam.index(C.edges)
        assert (S.N.rank(1 << k) == 0) == is_balanced(C)
    Z = build_N(3, 2, 2, rank_zero(3))
    assert Z.N.full_rank == 0
    assert same_table(lift(G.matroid, Z, check=False), G.matroid)


def test_build_N_star_on_z2():
    S = build_N(3, 1, 2, projective_geometry(1, galois_field(2)))
    G = GainGraph(3, Z2)
    assert satisfies_star(G.matroid, S)


def test_build_N_size_mismatch():
    with pytest.raises(MatroidError):
        build_N(3, 2, 2, rank_zero(4))


def test_projective_lift_examples():
    L1 = projective_lift(3, 2, 2, 1)
    assert L1.full_rank == 3
    assert same_table(L1, balanced_lift(3, V4))
    L2 = projective_lift(3, 2, 2, 2)
    assert L2.size == 12 and L2.full_rank == 4
    assert cycle_circuit_trace(L2, L2.gain_graph)
    with pytest.raises(CapacityError):
        projective_lift(3, 3, 2, 1)
    with pytest.raises(MatroidError):
        projective_lift(3, 2, 2, 3)


def test_edge_subset_examples():
    G = build_gain_graph(3, Z2)
    assert edge_subset(G, {0}).bit_count() == 3
    assert edge_subset(G, {0, 1}) == (1 << G.size) - 1
    assert edge_subset(G, set()) == 0


def test_class_membership_examples():
    G = build_gain_graph(3, Z2)
    assert class_membership(balanced_lift(3, Z2), G)
    assert not class_membership(G.matroid, G)
    L = projective_lift(3, 2, 2, 2)
    assert class_membership(L, L.gain_graph)


def test_tilde_lg_z2():
    G = build_gain_graph(3, Z2)
    rep = tilde_relation(balanced_lift(3, Z2), G)
    assert rep.ok
    assert [sorted(c) for c in rep.classes] == [[1]]


def test_tilde_lg_z4():
    Z4 = parse_group_name("Z4")
    rep = tilde_relation(balanced_lift(3, Z4), build_gain_graph(3, Z4))
    assert rep.ok
    assert [sorted(c) for c in rep.classes] == [[1, 2, 3]]


def test_tilde_projective_lift_has_three_classes():
    L = projective_lift(3, 2, 2, 2)
    G = L.gain_graph
    rep = tilde_relation(L, G)
    assert rep.ok
    labels = sorted(tuple(G.group.label(a) for a in c) for c in rep.classes)
    assert labels == [("(0,1)",), ("(1,0)",), ("(1,1)",)]
    for c in rep.classes:
        assert G.group.is_subgroup(set(c) | {0})


def test_tilde_requires_membership():
    G = build_gain_graph(3, Z2)
    with pytest.raises(MatroidError):
        tilde_relation(G.matroid, G)
