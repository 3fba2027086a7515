from __future__ import annotations

from itertools import combinations

import pytest

from liftforge.bitsets import mask_of
from liftforge.core import (MatroidError, check_rank_axioms, complete_graph_edges, dual, free, graphic, is_quotient,
                            rank_zero, same_table, uniform)
from liftforge.dual import (duality_bridge, hyperplanes, is_linear_subclass, is_perfect_hyperplanes,
                            linear_subclass_projection, on_hyperplanes, perfect_hyperplane_collections, project,
                            rank1_hyperplane_N, satisfies_dual_star, star_correspondence)

import oracles

K3 = graphic([(0, 1), (1, 2), (0, 2)])


def test_hyperplane_examples():
    assert list(hyperplanes(uniform(2, 3))) == [1, 2, 4]
    assert sorted(hyperplanes(free(3))) == sorted(mask_of(p) for p in combinations(range(3), 2))
    assert list(hyperplanes(K3)) == [1, 2, 4]


@pytest.mark.parametrize("K", [uniform(2, 4), graphic(complete_graph_edges(4)), free(4), uniform(3, 5),
                               graphic([(0, 1), (0, 1), (1, 2)])], ids=lambda K: K.name)
def test_hyperplanes_are_cocircuit_complements(K):
    hs = list(hyperplanes(K))
    assert hs == oracles.hyperplanes_from_rank(K.size, K.rank)
    assert sorted(K.ground ^ D for D in dual(K).circuits()) == hs


def test_perfect_hyperplane_examples():
    K = uniform(2, 3)
    assert is_perfect_hyperplanes(K, 0b011)
    assert is_perfect_hyperplanes(K, 0)
    assert not is_perfect_hyperplanes(K, 0b111)


def test_perfect_hyperplanes_via_dual_match_definition():
    for K in (uniform(2, 4), uniform(3, 5), graphic(complete_graph_edges(4))):
        fam = hyperplanes(K)
        direct = [m for m in range(1 << len(fam)) if is_perfect_hyperplanes(K, m, fam)]
        assert perfect_hyperplane_collections(K, fam) == direct


def test_project_examples():
    K = uniform(2, 3)
    P = project(K, uniform(1, 3))
    assert same_table(P, uniform(1, 3))
    # the formula by hand on every subset
    assert [P.rank(X) for X in range(8)] == [0, 1, 1, 1, 1, 1, 1, 1]
    for K in (uniform(2, 4), graphic(complete_graph_edges(4))):
        assert same_table(project(K, rank_zero(len(hyperplanes(K)))), K)


@pytest.mark.parametrize("K,r", [(uniform(2, 4), 1), (uniform(2, 4), 2), (uniform(3, 4), 2),
                                 (graphic(complete_graph_edges(4)), 1), (free(4), 2), (uniform(3, 5), 2)],
                         ids=str)
def test_projection_laws(K, r):
    nh = len(hyperplanes(K))
    N = on_hyperplanes(K, uniform(r, nh))
    assert satisfies_dual_star(K, N)
    P = project(K, N)
    assert check_rank_axioms(P)
    assert P.full_rank == K.full_rank - r
    assert is_quotient(P, K)
    assert duality_bridge(K, N)
    assert star_correspondence(K, N)


def test_bridge_examples():
    assert duality_bridge(uniform(2, 3), uniform(1, 3))
    F = free(4)
    nh = len(hyperplanes(F))
    for r in range(3):
        N = on_hyperplanes(F, uniform(r, nh))
        if satisfies_dual_star(F, N):
            assert duality_bridge(F, N)
    assert duality_bridge(K3, rank_zero(3))


def test_project_refuses_dual_star_failure():
    # dual of the primal counterexample U(1,3) with a free N
    K = uniform(2, 3)
    N = on_hyperplanes(K, free(3))
    v = satisfies_dual_star(K, N)
    assert not v
    with pytest.raises(MatroidError):
        project(K, N)
    assert star_correspondence(K, N)


def test_linear_subclass_projection_matches_formula():
    for K in (uniform(2, 4), uniform(3, 5), graphic(complete_graph_edges(4))):
        fam = hyperplanes(K)
        nh = len(fam)
        tried = 0
        for S in range((1 << nh) - 1):
            if not is_linear_subclass(K, S, fam):
                continue
            tried += 1
            P = project(K, rank1_hyperplane_N(fam, S))
            assert same_table(P, linear_subclass_projection(K, S))
        assert tried >= nh + 1


def test_linear_subclass_failure():
    K = uniform(2, 4)
    # two points of a rank-2 matroid meet in the empty flat, which lies in all four hyperplanes
    v = is_linear_subclass(K, 0b0011)
    assert not v and v.witness[2] == 2
    with pytest.raises(MatroidError):
        linear_subclass_projection(K, 0b0011)
