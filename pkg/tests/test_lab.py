from __future__ import annotations

import numpy as np
import pytest

from liftforge.core import (CapacityError, MatroidError, check_basis_exchange, complete_graph_edges, dual, free,
                            graphic, is_quotient, isomorphic, rank_zero, same_table, uniform)
from liftforge.lab import (candidate_family, catalog_count, conjectured_family, conjectured_hyperplane_family,
                           enumerate_matroids, independence_verdict, intermediate_matroids, search_circuit_matroids)
from liftforge.lift import rank3_N

K3 = graphic(complete_graph_edges(3))


def test_catalog_examples():
    assert len(enumerate_matroids(3, 3)) == 1
    two = enumerate_matroids(2, 1)
    assert len(two) == 3
    assert sorted(tuple(M.rank_table().tolist()) for M in two) == [(0, 0, 1, 1), (0, 1, 0, 1), (0, 1, 1, 1)]


def test_catalog_counts():
    # numbers of matroids on a labeled n-set
    assert [catalog_count(m) for m in range(6)] == [1, 2, 5, 16, 68, 406]


def test_catalog_entries_are_distinct_matroids():
    tables = [M.rank_table() for M in enumerate_matroids(4)]
    assert len({t.tobytes() for t in tables}) == len(tables)
    pc = np.array([bin(X).count("1") for X in range(16)])
    for t in tables:
        r = int(t[-1])
        assert check_basis_exchange([X for X in range(16) if t[X] == r and pc[X] == r]) is None


def test_catalog_capacity():
    with pytest.raises(CapacityError):
        enumerate_matroids(7)


def test_intermediate_examples():
    U = uniform(2, 4)
    got = intermediate_matroids(U, U)
    assert len(got) == 1 and same_table(got[0], U)
    assert len(intermediate_matroids(free(3), rank_zero(3))) == catalog_count(3)
    lifts = intermediate_matroids(free(4), uniform(1, 4))
    expected = [M for M in enumerate_matroids(4) if is_quotient(uniform(1, 4), M)]
    assert [M.name for M in lifts] == [M.name for M in expected]
    with pytest.raises(MatroidError):
        intermediate_matroids(uniform(1, 4), free(4))


def test_independence_verdict():
    ok = np.zeros(8, dtype=bool)
    ok[[0, 1, 2, 4, 3, 5, 6]] = True
    assert independence_verdict(ok, 3)
    hered = np.zeros(4, dtype=bool)
    hered[[0, 3]] = True
    v = independence_verdict(hered, 2)
    assert not v and v.witness[0] == "hereditary"
    aug = np.zeros(8, dtype=bool)
    aug[[0, 1, 2, 4, 3]] = True
    v = independence_verdict(aug, 3)
    assert not v and v.witness == ("augmentation", 4, 3)
    empty = np.zeros(2, dtype=bool)
    assert independence_verdict(empty, 1).witness == ("empty",)


@pytest.mark.parametrize("M,K", [(uniform(1, 4), free(4)), (uniform(2, 5), free(5))], ids=["U14", "U25"])
def test_conjectured_family_on_corank_three(M, K):
    rep = conjectured_family(M, K)
    assert rep.is_matroid and rep.star
    assert rep.isomorphism is not None and rep.success and rep.flag is None
    # the family agrees with the explicit rank-3 construction
    S = rank3_N(M)
    assert same_table(rep.N, S.N)


def test_conjectured_family_corank_two_sweep():
    count = 0
    for m in range(5):
        for M in enumerate_matroids(m):
            if M.corank > 2:
                continue
            for K in intermediate_matroids(free(m), M):
                if K.full_rank > M.full_rank:
                    assert conjectured_family(M, K).success, (M.name, K.name)
                    count += 1
    assert count > 100


def test_conjectured_family_is_deterministic():
    a = conjectured_family(uniform(1, 4), free(4))
    b = conjectured_family(uniform(1, 4), free(4))
    assert a.as_dict() == b.as_dict() and a.lines()[:-1] == b.lines()[:-1]


def test_conjectured_family_capacity():
    with pytest.raises(CapacityError):
        conjectured_family(uniform(1, 6), free(6))


def test_candidate_family_k_equals_m():
    M = uniform(2, 4)
    flags = candidate_family(M, M)
    assert flags[0] and not flags[1:].any()


def test_search_examples():
    U = uniform(2, 4)
    rep = search_circuit_matroids(U, U)
    assert rep.success and all(W.full_rank == 0 for W in rep.witnesses)
    rep = search_circuit_matroids(uniform(1, 3), free(3))
    assert any(isomorphic(W, K3) is not None for W in rep.witnesses)
    for K in intermediate_matroids(free(4), U):
        if K.full_rank == 3:
            assert search_circuit_matroids(U, K).success, K.name


def test_search_rejects_non_lift():
    with pytest.raises(MatroidError):
        search_circuit_matroids(free(3), uniform(1, 3))


def test_hyperplane_family_examples():
    rep = conjectured_hyperplane_family(uniform(3, 4), uniform(1, 4))
    assert rep.success and rep.flag is None
    assert rep.labels == ("K", "M")
    assert any("isomorphic to M" in n for n in rep.notes)
    d = conjectured_hyperplane_family(dual(uniform(1, 4)), dual(free(4)))
    assert d.success
    with pytest.raises(MatroidError):
        conjectured_hyperplane_family(uniform(1, 4), uniform(3, 4))
