"""Exhaustive experiments on tiny matroids: a labeled catalog and searches for
matroids ``N`` on circuits that reproduce a given lift.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bitsets import elements_of, fmt, iter_bits, popcount_table, subset_max, subset_or
from .core import (CapacityError, ExplicitMatroid, Matroid, MatroidError, Verdict, check_basis_exchange,
                   dual, is_quotient, isomorphic)
from .dual import hyperplanes, project
from .lift import CircuitSpaceMatroid, lift, satisfies_star

CATALOG_MAX = 6
FAMILY_DEFAULT_MAX = 5
SEARCH_MAX_CIRCUITS = 6


# ---------------------------------------------------------------------------
# Catalog of all matroids on [m]


def _increments(tables: np.ndarray, m: int) -> np.ndarray:
    """``r(X+e) - r(X)`` for every ``X`` lacking ``e``, flattened per row."""
    idx = np.arange(1 << m)
    parts = []
    for e in range(m):
        lack = idx[(idx >> e) & 1 == 0]
        parts.append(tables[:, lack | (1 << e)] - tables[:, lack])
    if not parts:
        return np.zeros((tables.shape[0], 0), dtype=np.int16)
    return np.concatenate(parts, axis=1)


@lru_cache(maxsize=None)
def _catalog_tables(m: int) -> tuple[tuple[np.ndarray, ...], ...]:
    """Rank tables of all matroids on [m], grouped by rank.

    A matroid on [m] is determined by what happens to element m-1: a loop or
    coloop over a smaller matroid, or else a pair (deletion, contraction)
    where the contraction is an elementary quotient of the deletion. The
    bases of every assembled table are re-checked against basis exchange.
    """
    if m == 0:
        return ((np.zeros(1, dtype=np.int16),),)
    prev = _catalog_tables(m - 1)
    out: list[list[np.ndarray]] = [[] for _ in range(m + 1)]
    for r in range(m + 1):
        if r <= m - 1:
            for t in prev[r]:
                out[r].append(np.concatenate([t, t]))  # new element is a loop
        if r >= 1:
            for t in prev[r - 1]:
                out[r].append(np.concatenate([t, t + 1]))  # new element is a coloop
        if 1 <= r <= m - 1 and prev[r] and prev[r - 1]:
            A = np.stack(prev[r])
            B = np.stack(prev[r - 1])
            dA = _increments(A, m - 1)
            dB = _increments(B, m - 1)
            ok = (dA[:, None, :] >= dB[None, :, :]).all(axis=2)
            for a, b in zip(*np.nonzero(ok)):
                out[r].append(np.concatenate([A[a], B[b] + 1]))
    pc = popcount_table(m)
    result = []
    for r in range(m + 1):
        tables = sorted(out[r], key=lambda t: t.tobytes())
        for t in tables:
            bases = [int(X) for X in np.nonzero((t == r) & (pc == r))[0]]
            if check_basis_exchange(bases) is not None:
                raise MatroidError(f"catalog produced a non-matroid on [{m}]")
            t.setflags(write=False)
        result.append(tuple(tables))
    return tuple(result)


def enumerate_matroids(m: int, r: int | None = None) -> list[ExplicitMatroid]:
    """All matroids on [m] (of rank ``r`` if given), in a fixed order."""
    if not 0 <= m <= CATALOG_MAX:
        raise CapacityError(f"catalog covers ground sets of size at most {CATALOG_MAX}, got {m}")
    groups = _catalog_tables(m)
    ranks = range(m + 1) if r is None else ([r] if 0 <= r <= m else [])
    out = []
    for rr in ranks:
        for k, t in enumerate(groups[rr]):
            out.append(ExplicitMatroid(m, t, name=f"cat{m}.{rr}.{k}"))
    return out


def catalog_count(m: int) -> int:
    return sum(len(g) for g in _catalog_tables(m))


def _quotient_rows(P: np.ndarray, Qs: np.ndarray, m: int) -> np.ndarray:
    """For each row of ``Qs``, whether it is a quotient of the single table ``P``."""
    dP = _increments(P[None, :], m)
    dQ = _increments(Qs, m)
    return (dP >= dQ).all(axis=1)


def _lift_rows(Q: np.ndarray, Ps: np.ndarray, m: int) -> np.ndarray:
    """For each row of ``Ps``, whether the single table ``Q`` is a quotient of it."""
    dQ = _increments(Q[None, :], m)
    dP = _increments(Ps, m)
    return (dP >= dQ).all(axis=1)


def intermediate_matroids(K: Matroid, M: Matroid) -> list[ExplicitMatroid]:
    """Catalog matroids that are projections of ``K`` and lifts of ``M``."""
    if K.size != M.size:
        raise MatroidError("K and M live on different ground sets")
    v = is_quotient(M, K)
    if not v:
        raise MatroidError(f"K is not a lift of M: {v.message}", witness=v.witness)
    m = K.size
    cands = [X for X in enumerate_matroids(m) if M.full_rank <= X.full_rank <= K.full_rank]
    if not cands:
        return []
    T = np.stack([X.rank_table() for X in cands])
    keep = _quotient_rows(K.rank_table(), T, m) & _lift_rows(M.rank_table(), T, m)
    return [X for X, k in zip(cands, keep) if k]


# ---------------------------------------------------------------------------
# Reports


@dataclass
class LabReport:
    title: str
    base: Matroid
    target: Matroid
    circuits: list[int]
    independent: np.ndarray | None = field(default=None, repr=False)
    is_matroid: Verdict | None = None
    N: Matroid | None = None
    star: Verdict | None = None
    isomorphism: list[int] | None = None
    witnesses: list[Matroid] = field(default_factory=list)
    flag: str | None = None
    notes: list[str] = field(default_factory=list)
    seconds: float = 0.0
    labels: tuple[str, str] = ("M", "K")

    @property
    def success(self) -> bool:
        return self.isomorphism is not None or bool(self.witnesses)

    def lines(self) -> list[str]:
        a, b = self.labels
        out = [f"{self.title}: {a}={self.base.name} (rank {self.base.full_rank}), "
               f"{b}={self.target.name} (rank {self.target.full_rank}), {len(self.circuits)} circuits"]
        if self.independent is not None:
            out.append(f"  family I: {int(self.independent.sum())} sets")
        if self.is_matroid is not None:
            out.append(f"  I is a matroid: {self.is_matroid}")
        if self.N is not None:
            out.append(f"  N: rank {self.N.full_rank} on {self.N.size} circuits")
        if self.star is not None:
            out.append(f"  star condition: {self.star}")
        if self.is_matroid is not None or self.witnesses:
            built = "M^N vs K" if self.labels == ("M", "K") else "(K*)^N vs M*"
            if self.isomorphism is not None:
                out.append(f"  {built}: isomorphic via {self.isomorphism}")
            elif not self.witnesses:
                out.append(f"  {built}: not isomorphic")
        for W in self.witnesses:
            ranks = [W.rank(1 << i) for i in range(W.size)]
            out.append(f"  witness N: rank {W.full_rank}, element ranks {ranks}")
        for n in self.notes:
            out.append(f"  {n}")
        if self.flag:
            out.append(f"  {self.flag}")
        out.append(f"  result: {'SUCCESS' if self.success else 'NO WITNESS WITHIN CAPACITY'}")
        return out

    def as_dict(self) -> dict:
        return {
            "title": self.title,
            self.labels[0]: self.base.name,
            self.labels[1]: self.target.name,
            "circuits": [elements_of(c) for c in self.circuits],
            "family_size": None if self.independent is None else int(self.independent.sum()),
            "is_matroid": None if self.is_matroid is None else bool(self.is_matroid),
            "N_rank": None if self.N is None else self.N.full_rank,
            "star": None if self.star is None else bool(self.star),
            "isomorphism": self.isomorphism,
            "witnesses": len(self.witnesses),
            "flag": self.flag,
            "success": self.success,
        }


# ---------------------------------------------------------------------------
# Independence-axiom testing on a family given as flags over 2^c


def independence_verdict(flags: np.ndarray, c: int) -> Verdict:
    """Check ``flags`` (indexed by subset of [c]) against the independence axioms.

    Failure witnesses: ``("empty",)``, ``("hereditary", S, e)`` or
    ``("augmentation", A, B)`` with ``|B| > |A|`` and no ``e`` in ``B - A``
    extending ``A``; each is re-checked before it is returned.
    """
    flags = np.asarray(flags, dtype=bool)
    if not flags[0]:
        return Verdict(False, "the empty set is not in the family", witness=("empty",))
    idx = np.arange(1 << c)
    for e in range(c):
        has = idx[(idx >> e) & 1 == 1]
        bad = has[flags[has] & ~flags[has ^ (1 << e)]]
        if len(bad):
            S = int(bad[0])
            return Verdict(False, f"{fmt(S)} is in the family but {fmt(S ^ (1 << e))} is not",
                           witness=("hereditary", S, e))
    pc = popcount_table(c)
    r = subset_max(np.where(flags, pc, 0).astype(np.int16), c)
    full = (1 << c) - 1
    ext = np.zeros(1 << c, dtype=np.int64)
    for e in range(c):
        lack = (idx >> e) & 1 == 0
        ok = np.zeros(1 << c, dtype=bool)
        ok[lack] = flags[idx[lack] | (1 << e)]
        ext |= np.where(ok, 1 << e, 0)
    span = idx | (full & ~ext)
    bad = np.nonzero(flags & (r[span] != pc))[0]
    if len(bad):
        A = int(bad[0])
        X = int(span[A])
        B = next(int(S) for S in range(1 << c) if flags[S] and S & ~X == 0 and int(pc[S]) == int(pc[A]) + 1)
        assert not any(flags[A | (1 << e)] for e in iter_bits(B & ~A))
        return Verdict(False, f"{fmt(B)} is larger than {fmt(A)} but no element of it extends {fmt(A)}",
                       witness=("augmentation", A, B))
    return Verdict(True, f"independence axioms hold for {int(flags.sum())} sets")


# ---------------------------------------------------------------------------
# Conjectured explicit N


def _circuit_masks(Kp: Matroid, fam) -> int:
    out = 0
    for i, C in enumerate(fam):
        k = C.bit_count()
        if Kp.rank(C) == k - 1 and all(Kp.rank(C ^ (1 << e)) == k - 1 for e in iter_bits(C)):
            out |= 1 << i
    return out


def candidate_family(M: Matroid, K: Matroid, intermediates: list[Matroid] | None = None) -> np.ndarray:
    """Flags over subsets of circuits of ``M``: true iff no intermediate ``K'`` has every member as a
    circuit with ``r(K) - r(K') < |members|``."""
    fam = M.circuits()
    c = len(fam)
    if intermediates is None:
        intermediates = intermediate_matroids(K, M)
    pc = popcount_table(c)
    dep = np.zeros(1 << c, dtype=bool)
    by_def: dict[int, list[int]] = {}
    for Kp in intermediates:
        by_def.setdefault(K.full_rank - Kp.full_rank, []).append(_circuit_masks(Kp, fam))
    for d, masks in sorted(by_def.items()):
        top = np.zeros(1 << c, dtype=bool)
        top[masks] = True
        dep |= subset_or(top, c) & (pc > d)
    return ~dep


def conjectured_family(M: Matroid, K: Matroid, max_size: int = FAMILY_DEFAULT_MAX,
                        iso_limit: int = 10) -> LabReport:
    start = time.perf_counter()
    if M.size > min(max_size, CATALOG_MAX):
        raise CapacityError(f"ground size {M.size} exceeds the lab limit {min(max_size, CATALOG_MAX)}")
    fam = M.circuits()
    c = len(fam)
    if c > 20:
        raise CapacityError(f"{c} circuits is too many for an exhaustive family")
    rep = LabReport("conjectured family", M, K, list(fam))
    rep.independent = candidate_family(M, K)
    rep.is_matroid = independence_verdict(rep.independent, c)
    if not rep.is_matroid:
        rep.flag = f"COUNTEREXAMPLE-CANDIDATE: I fails the independence axioms, witness {rep.is_matroid.witness}"
    else:
        pc = popcount_table(c)
        table = subset_max(np.where(rep.independent, pc, 0).astype(np.int16), c)
        rep.N = ExplicitMatroid(c, table, name="N_I")
        rep.star = satisfies_star(M, CircuitSpaceMatroid(fam, rep.N), max_circuits=None)
        if rep.star:
            L = lift(M, CircuitSpaceMatroid(fam, rep.N), check=False)
            rep.isomorphism = isomorphic(L, K, limit=iso_limit)
            if rep.isomorphism is None:
                rep.flag = "COUNTEREXAMPLE-CANDIDATE: M^N is not isomorphic to K"
        else:
            rep.flag = "COUNTEREXAMPLE-CANDIDATE: N_I fails the star condition"
    rep.seconds = time.perf_counter() - start
    return rep


def search_circuit_matroids(M: Matroid, K: Matroid, iso_limit: int = 10) -> LabReport:
    """Every catalog matroid ``N`` on the circuits of ``M`` that is star-satisfying with ``M^N`` isomorphic to ``K``."""
    start = time.perf_counter()
    v = is_quotient(M, K)
    if not v:
        raise MatroidError(f"K is not a lift of M: {v.message}", witness=v.witness)
    fam = M.circuits()
    c = len(fam)
    if c > SEARCH_MAX_CIRCUITS:
        raise CapacityError(f"{c} circuits exceeds the search limit {SEARCH_MAX_CIRCUITS}")
    rep = LabReport("circuit-matroid search", M, K, list(fam))
    k = K.full_rank - M.full_rank
    tried = 0
    for N in enumerate_matroids(c, k):
        space = CircuitSpaceMatroid(fam, N)
        if not satisfies_star(M, space, max_circuits=None):
            continue
        tried += 1
        L = lift(M, space, check=False)
        perm = isomorphic(L, K, limit=iso_limit)
        if perm is not None:
            rep.witnesses.append(N)
            if rep.isomorphism is None:
                rep.isomorphism = perm
    rep.notes.append(f"{tried} star-satisfying rank-{k} matroids on the circuits examined")
    rep.seconds = time.perf_counter() - start
    return rep


def conjectured_hyperplane_family(K: Matroid, M: Matroid, max_size: int = FAMILY_DEFAULT_MAX) -> LabReport:
    """The hyperplane-side family, computed by running the circuit-side family on ``(K*, M*)``.

    Circuit ``D`` of ``K*`` stands for the hyperplane ``E - D`` of ``K``; when
    the family is a matroid it is carried to the hyperplanes and ``K_N`` is
    compared with ``M`` directly.
    """
    v = is_quotient(M, K)
    if not v:
        raise MatroidError(f"M is not a projection of K: {v.message}", witness=v.witness)
    rep = conjectured_family(dual(K), dual(M), max_size=max_size)
    rep.title = "conjectured hyperplane family"
    rep.base, rep.target = K, M
    rep.labels = ("K", "M")
    if rep.N is not None and rep.star:
        hf = hyperplanes(K)
        perm = hf.to_dual_circuits()
        back = [0] * len(perm)
        for i, d in enumerate(perm):
            back[d] = i
        t = np.zeros(1 << len(perm), dtype=np.int16)
        for S in range(1 << len(perm)):
            m = 0
            for d in iter_bits(S):
                m |= 1 << back[d]
            t[m] = rep.N.rank(S)
        Nh = ExplicitMatroid(len(perm), t, name="N_I(hyperplanes)")
        P = project(K, Nh, check=True)
        iso = isomorphic(P, M)
        rep.notes.append(f"K_N computed on hyperplanes: {'isomorphic' if iso is not None else 'not isomorphic'} to M")
        if (iso is None) != (rep.isomorphism is None):
            raise MatroidError("hyperplane-side and circuit-side results disagree")
        rep.N = Nh
    return rep
