from __future__ import annotations

import pytest

from liftforge.bitsets import mask_of
from liftforge.core import (MatroidError, check_rank_axioms, complete_graph_edges, free, graphic, is_quotient,
                            isomorphic, rank_zero, same_table, truncate, uniform)
from liftforge.lift import (CircuitSpaceMatroid, enumerate_perfect, fundamental_circuits, graphic_on_pairs,
                            independent_by_collections, is_linear_class, is_perfect, lift, linear_class_formula,
                            linear_class_lift, loops_of, rank1_N, rank3_N, satisfies_star, uniform_N)

import oracles

K4 = graphic(complete_graph_edges(4))


def test_fundamental_circuit_examples():
    assert fundamental_circuits(uniform(1, 3), 0b001) == 0b011
    assert fundamental_circuits(free(4), 0b1111) == 0
    U = uniform(2, 4)
    fc = fundamental_circuits(U, 0b0011)
    assert [U.circuits()[i] for i in oracles.members(fc)] == [0b0111, 0b1011]
    assert is_perfect(U, fc)
    with pytest.raises(MatroidError):
        fundamental_circuits(U, 0b0001)


def test_is_perfect_examples():
    U = uniform(1, 3)
    assert is_perfect(U, 0b011)
    assert not is_perfect(U, 0b111)
    for M in (U, K4, free(3)):
        assert is_perfect(M, 0)


def test_enumerate_perfect_examples():
    assert enumerate_perfect(free(4)) == [0]
    assert enumerate_perfect(uniform(1, 3)) == list(range(7))


def test_maximal_perfect_collections_of_u14_are_stars():
    U = uniform(1, 4)
    colls = enumerate_perfect(U)
    maximal = [c for c in colls if not any(d != c and d & c == c for d in colls)]
    stars = sorted(fundamental_circuits(U, 1 << e) for e in range(4))
    assert sorted(maximal) == stars


@pytest.mark.parametrize("M", [uniform(1, 4), uniform(2, 5), K4, graphic([(0, 1), (0, 1), (1, 2), (0, 2)]),
                               uniform(3, 5)], ids=lambda M: M.name)
def test_perfect_collections_match_definition(M):
    circ = list(M.circuits())
    assert enumerate_perfect(M) == oracles.perfect_by_definition(M.rank, circ)


def test_perfect_collections_are_downward_closed():
    for M in (uniform(1, 5), K4, uniform(2, 5)):
        colls = set(enumerate_perfect(M))
        for c in colls:
            for i in oracles.members(c):
                assert c & ~(1 << i) in colls


def test_star_examples():
    for n in (3, 4, 5):
        U = uniform(1, n)
        assert satisfies_star(U, graphic_on_pairs(U))
    for M in (uniform(1, 4), uniform(2, 5), K4):
        assert satisfies_star(M, uniform_N(M, 2))
    U = uniform(1, 3)
    v = satisfies_star(U, CircuitSpaceMatroid(U.circuits(), free(3)))
    assert not v
    assert v.witness == (0b011, 2)
    assert U.circuits()[2] == 0b110


def test_lift_examples():
    U = uniform(1, 3)
    assert same_table(lift(U, graphic_on_pairs(U)), free(3))
    for M in (K4, uniform(2, 4)):
        assert same_table(lift(M, uniform_N(M, 0)), M)
    L = lift(uniform(1, 4), graphic_on_pairs(uniform(1, 4)))
    assert L.full_rank == 4


def test_lift_refuses_star_failure():
    U = uniform(1, 3)
    with pytest.raises(MatroidError):
        lift(U, CircuitSpaceMatroid(U.circuits(), free(3)))


def test_lift_needs_matching_circuit_space():
    with pytest.raises(MatroidError):
        lift(uniform(1, 3), uniform_N(uniform(1, 4), 1))
    with pytest.raises(MatroidError):
        CircuitSpaceMatroid(uniform(1, 3).circuits(), free(4))


@pytest.mark.parametrize("M,N", [
    (uniform(1, 4), "pairs"), (uniform(1, 4), "rank3"), (uniform(2, 5), "rank3"), (K4, 2), (uniform(2, 5), 2),
], ids=str)
def test_rank_law_and_independence(M, N):
    csm = graphic_on_pairs(M) if N == "pairs" else rank3_N(M) if N == "rank3" else uniform_N(M, N)
    L = lift(M, csm)
    assert check_rank_axioms(L)
    assert L.full_rank == M.full_rank + csm.N.full_rank
    assert is_quotient(M, L)
    for X in range(1 << M.size):
        assert (L.rank(X) == X.bit_count()) == independent_by_collections(M, csm, X)


def test_linear_class_examples():
    T = graphic([(0, 1), (1, 2), (0, 2)])
    assert same_table(linear_class_lift(T, 0b1), T)
    L = linear_class_lift(T, 0)
    assert L.full_rank == 3 and check_rank_axioms(L)
    assert same_table(L, free(3))


def test_is_linear_class_examples():
    nc = len(K4.circuits())
    assert is_linear_class(K4, (1 << nc) - 1)
    assert is_linear_class(K4, 0)
    fam = K4.circuits()
    t012, t013, square = fam.index(mask_of([0, 1, 3])), fam.index(mask_of([0, 2, 4])), fam.index(mask_of([1, 2, 3, 4]))
    v = is_linear_class(K4, (1 << t012) | (1 << t013))
    assert not v and v.witness == (t012, t013, square)
    with pytest.raises(MatroidError):
        linear_class_lift(K4, (1 << t012) | (1 << t013))


def test_every_linear_class_of_k4_matches_formula():
    nc = len(K4.circuits())
    count = 0
    for L in range(1 << nc):
        if is_linear_class(K4, L):
            count += 1
            assert same_table(linear_class_lift(K4, L), linear_class_formula(K4, L))
    # empty, full, and single-circuit classes are all linear
    assert count >= nc + 2


def test_rank1_N_loops():
    fam = K4.circuits()
    S = rank1_N(fam, 0b101)
    assert loops_of(S) == 0b101 and S.N.full_rank == 1


def test_rank3_examples():
    S = rank3_N(uniform(1, 4))
    assert S.N.full_rank == 3
    for a in range(6):
        for b in range(a + 1, 6):
            assert S.N.rank((1 << a) | (1 << b)) == 2
    assert rank3_N(uniform(2, 5)).N.full_rank == 3
    with pytest.raises(MatroidError):
        rank3_N(uniform(2, 4))


def test_rank3_N_is_a_matroid_with_listed_independents():
    S = rank3_N(uniform(2, 5))
    assert check_rank_axioms(S.N)
    listed = set(S.independent)
    for X in range(1 << S.N.size):
        assert (S.N.rank(X) == X.bit_count()) == (X in listed)


def test_truncations_stay_star_satisfying():
    M = uniform(1, 4)
    N = graphic_on_pairs(M).N
    for t in range(N.full_rank + 1):
        assert satisfies_star(M, CircuitSpaceMatroid(M.circuits(), truncate(N, t)))


def test_free_lift_of_u1n():
    for n in (3, 4, 5):
        U = uniform(1, n)
        assert isomorphic(lift(U, graphic_on_pairs(U)), free(n)) is not None


def test_zero_rank_N_reproduces_m():
    M = graphic([(0, 1), (0, 1), (1, 2)])
    assert same_table(lift(M, uniform_N(M, 0)), M)
    assert same_table(lift(rank_zero(3), uniform_N(rank_zero(3), 3)), free(3))
