"""Property tests over the labeled catalog and random linear matroids."""

from __future__ import annotations

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from liftforge.core import check_rank_axioms, dual, is_quotient, linear, same_table, truncate
from liftforge.dual import duality_bridge, hyperplanes, on_hyperplanes, satisfies_dual_star, star_correspondence
from liftforge.fields import galois_field
from liftforge.gain import build_gain_graph, is_balanced, phi, theta_check
from liftforge.groups import parse_group_name
from liftforge.lab import enumerate_matroids
from liftforge.lift import (CircuitSpaceMatroid, enumerate_perfect, independent_by_collections, lift, loops_of,
                            satisfies_star)
from liftforge.specfile import parse_matroid

import oracles

CATALOG = [M for m in range(6) for M in enumerate_matroids(m)]
SMALL = [M for M in CATALOG if len(M.circuits()) <= 6]
PROPS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

catalog = st.sampled_from(CATALOG)


@st.composite
def linear_matroids(draw):
    p = draw(st.sampled_from([2, 3]))
    rows = draw(st.integers(1, 3))
    cols = draw(st.integers(1, 6))
    data = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=cols, max_size=cols), min_size=rows,
                         max_size=rows))
    return linear(data, galois_field(p)), data, p


@PROPS
@given(catalog)
def test_catalog_tables_are_matroids(M):
    assert check_rank_axioms(M)


@PROPS
@given(linear_matroids())
def test_linear_matches_oracle(args):
    M, data, p = args
    cols = [tuple(row[j] for row in data) for j in range(M.size)]
    assert all(M.rank(X) == oracles.prime_field_rank(cols, p, X) for X in range(1 << M.size))
    assert check_rank_axioms(M)


@PROPS
@given(catalog)
def test_dual_involution_and_rank(M):
    D = dual(M)
    assert check_rank_axioms(D)
    assert D.full_rank == M.corank
    assert same_table(dual(D), M)


@PROPS
@given(catalog)
def test_hyperplanes_complement_dual_circuits(M):
    if M.full_rank == 0:
        return
    hs = list(hyperplanes(M))
    assert hs == sorted(M.ground ^ C for C in dual(M).circuits())
    assert hs == oracles.hyperplanes_from_rank(M.size, M.rank)


@PROPS
@given(catalog, st.data())
def test_closure_operator(M, data):
    X = data.draw(st.integers(0, M.ground))
    Y = data.draw(st.integers(0, M.ground))
    cX = M.closure(X)
    assert X & ~cX == 0
    assert M.closure(cX) == cX
    assert M.rank(cX) == M.rank(X)
    if X & ~Y == 0:
        assert cX & ~M.closure(Y) == 0


@PROPS
@given(catalog)
def test_circuits_match_brute_force(M):
    assert list(M.circuits()) == oracles.circuits_from_rank(M.size, M.rank)


@PROPS
@given(st.sampled_from(SMALL))
def test_perfect_collections_match_definition(M):
    assert enumerate_perfect(M, max_circuits=None) == oracles.perfect_by_definition(M.rank, list(M.circuits()))


@PROPS
@given(catalog, st.data())
def test_truncation(M, data):
    t = data.draw(st.integers(0, M.full_rank))
    T = truncate(M, t)
    assert check_rank_axioms(T)
    assert is_quotient(T, M)
    assert T.full_rank == M.full_rank - t


@st.composite
def star_pairs(draw):
    M = draw(st.sampled_from(SMALL))
    fam = M.circuits()
    N = draw(st.sampled_from(enumerate_matroids(len(fam))))
    return M, CircuitSpaceMatroid(fam, N)


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(star_pairs())
def test_lift_laws(pair):
    M, S = pair
    if not satisfies_star(M, S, max_circuits=None):
        return
    L = lift(M, S)
    assert check_rank_axioms(L)
    assert L.full_rank == M.full_rank + S.N.full_rank
    assert is_quotient(M, L)
    for X in range(1 << M.size):
        assert (L.rank(X) == X.bit_count()) == independent_by_collections(M, S, X)
    # loops of N are exactly the circuits of M that stay circuits
    fam = S.family
    stay = {fam[i] for i in range(len(fam))} & set(L.circuits())
    assert {fam[i] for i in oracles.members(loops_of(S))} == stay
    # every circuit of the lift is a union of circuits of M
    for D in L.circuits():
        assert fam.union(fam.inside(D)) == D
    # truncations of a star-satisfying N stay star-satisfying
    for t in range(1, S.N.full_rank + 1):
        assert satisfies_star(M, CircuitSpaceMatroid(fam, truncate(S.N, t)), max_circuits=None)


@st.composite
def hyperplane_pairs(draw):
    K = draw(st.sampled_from([M for M in SMALL if M.full_rank > 0 and len(M.hyperplanes()) <= 6]))
    N = draw(st.sampled_from(enumerate_matroids(len(K.hyperplanes()))))
    return K, on_hyperplanes(K, N)


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(hyperplane_pairs())
def test_dual_star_matches_primal_and_bridge(pair):
    K, N = pair
    assert star_correspondence(K, N)
    if satisfies_dual_star(K, N):
        assert duality_bridge(K, N)


@PROPS
@given(st.sampled_from(["Z2", "Z3", "Z4", "Z2^2", "S3", "Z5"]))
def test_phi_closed_under_inverses(name):
    G = build_gain_graph(3, parse_group_name(name))
    grp = G.group
    for C in G.cycles():
        vals = phi(C)
        assert {grp.inverse(v) for v in vals} == vals
        if grp.is_abelian():
            assert len(vals) <= 2
        assert is_balanced(C) == (vals == frozenset({0}))
    assert theta_check(G)


@PROPS
@given(catalog)
def test_bases_spec_round_trip(M):
    bases = M.bases()
    sets = ",".join("{" + ",".join(map(str, oracles.members(B))) + "}" for B in bases)
    spec = f"bases rank={M.full_rank} n={M.size} sets={sets}"
    assert same_table(parse_matroid(spec), M)
