from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest

from liftforge.bitsets import mask_of
from liftforge.core import (CapacityError, ExplicitMatroid, MatroidError, check_rank_axioms, closure,
                            complete_graph_edges, dual, explicit, free, graphic, is_quotient, isomorphic, linear,
                            materialize, rank, rank_zero, relabel, restrict, same_table, truncate, uniform)
from liftforge.fields import galois_field
from liftforge.gain import balanced_lift, build_gain_graph
from liftforge.groups import elementary_abelian
from liftforge.lift import graphic_on_pairs, lift

import oracles

K3 = [(0, 1), (1, 2), (0, 2)]


def test_rank_examples():
    assert rank(uniform(2, 4), 0b0111) == 2
    for M in (uniform(2, 4), graphic(K3), free(3), rank_zero(2)):
        assert rank(M, 0) == 0
    assert rank(graphic(K3), 0b111) == 2


def test_rank_rejects_out_of_range():
    with pytest.raises(IndexError):
        uniform(2, 3).rank(0b1000)


def test_circuit_examples():
    for n in (3, 4, 5):
        fam = uniform(1, n).circuits()
        assert len(fam) == n * (n - 1) // 2
        assert sorted(fam) == sorted(mask_of(p) for p in combinations(range(n), 2))
    assert sorted(uniform(2, 4).circuits()) == sorted(mask_of(t) for t in combinations(range(4), 3))
    assert list(free(5).circuits()) == []


def test_circuits_in_ascending_order():
    fam = list(graphic(complete_graph_edges(4)).circuits())
    assert fam == sorted(fam)


def test_closure_examples():
    assert closure(uniform(1, 3), 0b001) == 0b111
    F = free(4)
    for X in range(16):
        assert closure(F, X) == X
    assert closure(graphic(K3), 0b011) == 0b111


def test_dual_examples():
    assert same_table(dual(uniform(2, 5)), uniform(3, 5))
    assert same_table(dual(free(4)), rank_zero(4))
    M = graphic(complete_graph_edges(4))
    assert dual(dual(M)) is M


def test_truncate_examples():
    PG12 = linear([[1, 0, 1], [0, 1, 1]], galois_field(2))
    T = truncate(PG12, 1)
    assert T.full_rank == 1 and T.loops() == 0 and T.size == 3
    M = uniform(3, 5)
    assert truncate(M, 0) is M
    assert same_table(truncate(M, 1), uniform(2, 5))
    with pytest.raises(MatroidError):
        truncate(M, 4)


def test_restrict_examples():
    assert same_table(restrict(uniform(2, 5), 0b00111), uniform(2, 3))
    K4 = graphic(complete_graph_edges(4))
    # edges 01, 02, 12 form a triangle
    tri = mask_of([0, 1, 3])
    assert same_table(restrict(K4, tri), graphic([(0, 1), (0, 2), (1, 2)]))


def test_check_rank_axioms_examples():
    assert check_rank_axioms(uniform(2, 4))
    t = np.array(uniform(2, 2).rank_table()) + 1
    v = check_rank_axioms(t, 2)
    assert not v and v.witness == ("normalization", 0)
    L = lift(uniform(1, 3), graphic_on_pairs(uniform(1, 3)))
    assert check_rank_axioms(L)


def test_check_rank_axioms_finds_submodularity_failure():
    # 0 parallel to both 1 and 2, yet {1,2} independent
    t = [0, 1, 1, 2, 1, 2, 2, 2]
    t[0b011] = 1
    t[0b101] = 1
    v = check_rank_axioms(t, 3)
    assert not v and v.witness[0] == "submodularity"


def test_is_quotient_examples():
    assert is_quotient(uniform(1, 3), free(3))
    v = is_quotient(free(3), uniform(1, 3))
    assert not v and v.witness is not None
    G = build_gain_graph(3, elementary_abelian(2, 1))
    assert is_quotient(G.matroid, balanced_lift(3, elementary_abelian(2, 1)))


def test_isomorphic_examples():
    U = uniform(2, 4)
    shuffled = relabel(U, [2, 0, 3, 1])
    perm = isomorphic(U, shuffled)
    assert perm is not None and same_table(relabel(U, perm), shuffled)
    assert isomorphic(uniform(2, 4), uniform(3, 4)) is None
    L = lift(uniform(1, 4), graphic_on_pairs(uniform(1, 4)))
    assert isomorphic(L, free(4)) is not None


def test_isomorphic_detects_nonisomorphic_same_counts():
    # a triangle plus a loop vs a triangle plus a coloop
    A = graphic([(0, 1), (1, 2), (0, 2), (0, 0)])
    B = graphic([(0, 1), (1, 2), (0, 2), (2, 3)])
    assert isomorphic(A, B) is None


def test_constructor_examples():
    T = graphic(K3)
    assert T.full_rank == 2 and len(T.circuits()) == 1
    assert same_table(linear([[1, 1, 1, 1]], galois_field(2)), uniform(1, 4))
    assert same_table(explicit(combinations(range(4), 2)), uniform(2, 4))


def test_explicit_rejects_bad_bases():
    with pytest.raises(MatroidError):
        explicit([{0, 1}, {2, 3}])
    with pytest.raises(MatroidError):
        explicit([{0}, {1, 2}])
    with pytest.raises(MatroidError):
        explicit([])


def test_graphic_against_forest_oracle():
    edges = [(0, 1), (0, 1), (1, 2), (2, 3), (3, 0), (1, 3), (2, 2)]
    M = graphic(edges)
    assert [int(x) for x in M.rank_table()] == [oracles.forest_rank(edges, 4, X) for X in range(1 << len(edges))]


def test_linear_against_prime_field_oracle():
    cols = [(1, 0, 0), (0, 1, 0), (1, 1, 0), (2, 1, 1), (0, 0, 1), (1, 2, 2)]
    F = galois_field(3)
    M = linear([[c[r] for c in cols] for r in range(3)], F)
    for X in range(1 << 6):
        assert M.rank(X) == oracles.prime_field_rank(cols, 3, X)


def test_circuits_against_brute_force():
    M = graphic([(0, 1), (0, 1), (1, 2), (0, 2), (2, 3)])
    assert list(M.circuits()) == oracles.circuits_from_rank(M.size, M.rank)


def test_bases_flats_hyperplanes():
    U = uniform(2, 4)
    assert sorted(U.bases()) == sorted(mask_of(p) for p in combinations(range(4), 2))
    assert sorted(U.hyperplanes()) == [1, 2, 4, 8]
    assert U.flats()[0] == 0 and U.flats()[-1] == 0b1111
    M = graphic(complete_graph_edges(4))
    assert sorted(M.hyperplanes()) == sorted(oracles.hyperplanes_from_rank(M.size, M.rank))


def test_materialize_keeps_table():
    M = graphic(complete_graph_edges(4))
    E = materialize(M)
    assert isinstance(E, ExplicitMatroid) and same_table(E, M)


def test_capacity_limit(monkeypatch):
    monkeypatch.setenv("LIFTFORGE_MAX_GROUND", "6")
    with pytest.raises(CapacityError):
        free(7).rank_table()
    monkeypatch.setenv("LIFTFORGE_MAX_GROUND", "99")
    from liftforge.core import HARD_MAX_GROUND, max_ground
    assert max_ground() == HARD_MAX_GROUND
