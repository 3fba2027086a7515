"""Lifts of a matroid built from a matroid on its circuits.

Given ``M`` and a matroid ``N`` whose elements are the circuits of ``M``, the
lift ``M^N`` has rank function ``r_M(X) + r_N({circuits of M inside X})``,
valid whenever ``N`` satisfies the star condition: for every perfect
collection of circuits, each circuit inside its union is spanned in ``N`` by
the collection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .bitsets import contained_family_masks, elements_of, fmt, iter_bits, mask_of, popcount_table
from .core import (CapacityError, CircuitFamily, Matroid, MatroidError, OracleMatroid, Verdict,
                   require_capacity, uniform)

DEFAULT_MAX_CIRCUITS = 24
_TABLE_SOS_THRESHOLD = 13


@dataclass
class CircuitSpaceMatroid:
    """A matroid ``N`` whose element ``i`` is circuit ``family[i]`` of the base matroid."""

    family: CircuitFamily
    N: Matroid
    independent: list[int] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.N.size != len(self.family):
            raise MatroidError(f"N has {self.N.size} elements but the base matroid has {len(self.family)} circuits")

    @property
    def base(self) -> Matroid:
        return self.family.base

    def rank(self, members: int | None = None) -> int:
        return self.N.rank(members)

    def closure_contains(self, members: int, i: int) -> bool:
        return self.N.rank(members | (1 << i)) == self.N.rank(members)


def on_circuits(M: Matroid, N: Matroid) -> CircuitSpaceMatroid:
    return CircuitSpaceMatroid(M.circuits(), N)


def _nullity(M: Matroid, X: int) -> int:
    return X.bit_count() - M.rank(X)


# ---------------------------------------------------------------------------
# Perfect collections


def fundamental_circuits(M: Matroid, B: int) -> int:
    """Circuit-index bitset of the fundamental circuits of ``M`` with respect to basis ``B``."""
    if B.bit_count() != M.full_rank or M.rank(B) != M.full_rank:
        raise MatroidError(f"{fmt(B)} is not a basis", witness=B)
    fam = M.circuits()
    out = 0
    for e in range(M.size):
        if (B >> e) & 1:
            continue
        span = B | (1 << e)
        c = next(c for c in fam if c & ~span == 0)
        out |= 1 << fam.index(c)
    return out


def is_perfect(M: Matroid, members: int, family: CircuitFamily | None = None) -> bool:
    fam = family or M.circuits()
    idx = elements_of(members)
    union = 0
    for i in idx:
        union |= fam[i]
    if _nullity(M, union) != len(idx):
        return False
    for i in idx:
        rest = 0
        for j in idx:
            if j != i:
                rest |= fam[j]
        if fam[i] & ~rest == 0:
            return False
    return True


def perfect_collections(M: Matroid, family: CircuitFamily | None = None,
                        max_circuits: int | None = DEFAULT_MAX_CIRCUITS) -> tuple[list[int], list[int]]:
    """All perfect collections as ``(members, unions)``, members ascending as bitsets.

    Subcollections of perfect collections are perfect, so collections are grown
    one circuit at a time: adding circuit ``m`` to a collection whose indices are
    all below ``m`` keeps it perfect iff ``m`` brings a new element, every old
    member keeps a private element, and the nullity of the union goes up by one.
    """
    fam = family or M.circuits()
    nc = len(fam)
    if max_circuits is not None and nc > max_circuits:
        raise CapacityError(f"{nc} circuits exceeds the perfect-collection capacity {max_circuits}")
    cache = fam.__dict__.setdefault("_perfect", {})
    if "all" in cache:
        return cache["all"]
    require_capacity(M.size)
    nul = (popcount_table(M.size) - M.rank_table()).astype(np.int16)
    width = max(1, M.corank + 1)
    pad = np.int64(1) << np.int64(62)

    cap = 1024
    U = np.zeros(cap, dtype=np.int64)
    K = np.zeros(cap, dtype=np.int16)
    P = np.full((cap, width), pad, dtype=np.int64)
    members = [0]
    count = 1

    for m, D in enumerate(fam):
        d = np.int64(D)
        u = U[:count]
        ok = (d & ~u) != 0
        ok &= nul[u | d] == K[:count] + 1
        ok &= np.all((P[:count] & ~d) != 0, axis=1)
        sel = np.nonzero(ok)[0]
        if not len(sel):
            continue
        new = len(sel)
        if count + new > cap:
            while count + new > cap:
                cap *= 2
            U = np.resize(U, cap)
            K = np.resize(K, cap)
            P2 = np.full((cap, width), pad, dtype=np.int64)
            P2[:count] = P[:count]
            P = P2
        su = U[sel]
        sk = K[sel]
        block = P[sel] & ~d
        block[np.arange(new), sk] = d & ~su
        U[count:count + new] = su | d
        K[count:count + new] = sk + 1
        P[count:count + new] = block
        bit = 1 << m
        members.extend(members[i] | bit for i in sel.tolist())
        count += new

    result = (members, U[:count].tolist())
    cache["all"] = result
    return result


def enumerate_perfect(M: Matroid, max_circuits: int | None = DEFAULT_MAX_CIRCUITS) -> list[int]:
    """Perfect collections of circuits of ``M`` as circuit-index bitsets, in ascending order."""
    return perfect_collections(M, max_circuits=max_circuits)[0]


def satisfies_star(M: Matroid, N: CircuitSpaceMatroid | Matroid,
                   max_circuits: int | None = DEFAULT_MAX_CIRCUITS) -> Verdict:
    """Check the star condition over every perfect collection.

    On failure the witness is ``(members, circuit_index)`` for the least
    perfect collection (as a bitset) and the least circuit it fails to span.
    """
    csm = N if isinstance(N, CircuitSpaceMatroid) else on_circuits(M, N)
    fam = csm.family
    Nm = csm.N
    members, unions = perfect_collections(M, fam, max_circuits)
    inside: dict[int, int] = {}
    inside_rank: dict[int, int] = {}
    for cm, U in zip(members, unions):
        ins = inside.get(U)
        if ins is None:
            ins = inside[U] = fam.inside(U)
            inside_rank[U] = Nm.rank(ins)
        if ins == cm:
            continue
        rc = Nm.rank(cm)
        if rc == inside_rank[U]:
            continue
        for i in iter_bits(ins & ~cm):
            if Nm.rank(cm | (1 << i)) != rc:
                return Verdict(False, f"circuit {fmt(fam[i])} lies in the union of perfect collection "
                                      f"{[fmt(fam[j]) for j in iter_bits(cm)]} but not in its N-closure",
                               witness=(cm, i))
    return Verdict(True, f"star condition holds over {len(members)} perfect collections")


# ---------------------------------------------------------------------------
# The lift


class LiftedMatroid(Matroid):
    """``M^N``: rank ``r_M(X) + r_N(circuits of M|X)``."""

    def __init__(self, M: Matroid, N: CircuitSpaceMatroid, name: str | None = None):
        super().__init__(M.size, name or f"{M.name}^{N.N.name}")
        self.M = M
        self.N = N
        self._inside: dict[int, int] = {}

    def circuits_inside(self, X: int) -> int:
        got = self._inside.get(X)
        if got is None:
            got = self._inside[X] = self.N.family.inside(X)
        return got

    def _rank(self, X: int) -> int:
        return self.M.rank(X) + self.N.N.rank(self.circuits_inside(X))

    def _build_table(self):
        tM = self.M.rank_table()
        if self.size >= _TABLE_SOS_THRESHOLD:
            masks = contained_family_masks(self.size, list(self.N.family))
        else:
            fam = self.N.family
            masks = [fam.inside(X) for X in range(1 << self.size)]
        rN = self.N.N.rank
        return tM + np.fromiter((rN(m) for m in masks), dtype=np.int16, count=len(masks))


def lift(M: Matroid, N: CircuitSpaceMatroid | Matroid, check: bool = True,
         max_circuits: int | None = DEFAULT_MAX_CIRCUITS) -> LiftedMatroid:
    """Build ``M^N``; with ``check`` the star condition is verified first."""
    csm = N if isinstance(N, CircuitSpaceMatroid) else on_circuits(M, N)
    if csm.family.base is not M and csm.family.circuits != M.circuits().circuits:
        raise MatroidError("N is not indexed by the circuits of M")
    if check:
        v = satisfies_star(M, csm, max_circuits)
        if not v:
            raise MatroidError(f"star condition fails: {v.message}", witness=v.witness)
    return LiftedMatroid(M, csm)


def independent_by_collections(M: Matroid, N: CircuitSpaceMatroid, X: int) -> bool:
    """True iff some ``|X| - r_M(X)`` circuits of ``M|X`` are independent in ``N`` (direct search)."""
    k = _nullity(M, X)
    if k == 0:
        return True
    inside = elements_of(N.family.inside(X))
    for combo in combinations(inside, k):
        m = mask_of(combo)
        if N.N.rank(m) == k:
            return True
    return False


# ---------------------------------------------------------------------------
# Rank-1 case: linear classes


def is_linear_class(M: Matroid, members: int, family: CircuitFamily | None = None) -> Verdict:
    """Whenever two members span a union of nullity 2, every circuit inside is a member."""
    fam = family or M.circuits()
    idx = elements_of(members)
    for a, b in combinations(idx, 2):
        U = fam[a] | fam[b]
        if _nullity(M, U) != 2:
            continue
        missing = fam.inside(U) & ~members
        if missing:
            c = (missing & -missing).bit_length() - 1
            return Verdict(False, f"{fmt(fam[a])} and {fmt(fam[b])} are in the class but {fmt(fam[c])} is not",
                           witness=(a, b, c))
    return Verdict(True, f"linear class of {len(idx)} circuits")


def rank1_N(family: CircuitFamily, loops: int) -> CircuitSpaceMatroid:
    """Rank-1 matroid on the circuits: ``loops`` are loops, every other circuit is in one parallel class."""
    nc = len(family)
    non_loops = ((1 << nc) - 1) & ~loops
    N = OracleMatroid(nc, lambda S: 1 if S & non_loops else 0, name="rank1")
    return CircuitSpaceMatroid(family, N)


def linear_class_lift(M: Matroid, L: int) -> LiftedMatroid:
    """Elementary lift from a linear class ``L`` (bitset of circuit indices)."""
    fam = M.circuits()
    v = is_linear_class(M, L, fam)
    if not v:
        raise MatroidError(f"not a linear class: {v.message}", witness=v.witness)
    # Validity rests on the linear-class property, so the star search is skipped.
    return lift(M, rank1_N(fam, L), check=False, max_circuits=None)


def linear_class_formula(M: Matroid, L: int) -> Matroid:
    """The two-case rank function, computed directly from circuit containment."""
    fam = M.circuits()

    def r(X):
        return M.rank(X) + (1 if fam.inside(X) & ~L else 0)

    return OracleMatroid(M.size, r, name=f"linear_class_lift({M.name})")


# ---------------------------------------------------------------------------
# Generic constructions of N


def uniform_N(M: Matroid, r: int) -> CircuitSpaceMatroid:
    fam = M.circuits()
    return CircuitSpaceMatroid(fam, uniform(min(r, len(fam)), len(fam)))


def _rank3_independent(M: Matroid, fam: CircuitFamily, T: tuple[int, ...]) -> bool:
    if len(T) > 3:
        return False
    for k in range(1, len(T) + 1):
        for sub in combinations(T, k):
            u = 0
            for i in sub:
                u |= fam[i]
            if k > _nullity(M, u):
                return False
    return True


def rank3_N(M: Matroid) -> CircuitSpaceMatroid:
    """The rank-3 matroid whose independent sets are the collections of at most three
    circuits in which every subcollection has size at most the nullity of its union."""
    if M.corank < 3:
        raise MatroidError(f"rank3_N needs corank at least 3, got {M.corank}")
    fam = M.circuits()
    nc = len(fam)
    memo: dict[int, int] = {}

    def r(S: int) -> int:
        got = memo.get(S)
        if got is not None:
            return got
        els = elements_of(S)
        best = 0
        for k in (3, 2, 1):
            if k > len(els):
                continue
            if any(_rank3_independent(M, fam, T) for T in combinations(els, k)):
                best = k
                break
        memo[S] = best
        return best

    N = OracleMatroid(nc, r, name="rank3")
    indep = [0]
    for k in (1, 2, 3):
        for T in combinations(range(nc), k):
            if _rank3_independent(M, fam, T):
                indep.append(mask_of(T))
    return CircuitSpaceMatroid(fam, N, independent=sorted(indep))


def loops_of(N: CircuitSpaceMatroid) -> int:
    return mask_of(i for i in range(N.N.size) if N.N.rank(1 << i) == 0)


def graphic_on_pairs(M: Matroid) -> CircuitSpaceMatroid:
    """When every circuit of ``M`` has two elements, the graphic matroid whose edge ``i`` joins the two
    elements of circuit ``i`` (for ``U_{1,n}`` this is ``M(K_n)``)."""
    from .core import graphic

    fam = M.circuits()
    edges = []
    for c in fam:
        if c.bit_count() != 2:
            raise MatroidError(f"circuit {fmt(c)} does not have two elements")
        a, b = elements_of(c)
        edges.append((a, b))
    return CircuitSpaceMatroid(fam, graphic(edges, nv=M.size, name=f"M(K_{M.size})"))
