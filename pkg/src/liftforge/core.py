"""Oracle-based matroid kernel.

Every matroid is a ground set ``{0, ..., size-1}`` plus a rank function on
bitsets. Values are immutable after construction; the per-matroid rank memo
is a plain dict and is meant to be used from a single worker.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .bitsets import (elements_of, fmt, iter_bits, mask_of, popcount_table, subset_max, subset_or,
                      superset_or)
from .fields import GF, FieldMatrix, matrix_rank

HARD_MAX_GROUND = 24
DEFAULT_MAX_ISO = 10


class MatroidError(ValueError):
    """Invalid input or a violated matroid-theoretic precondition."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class CapacityError(MatroidError):
    pass


class VerificationError(MatroidError):
    """A check that is supposed to hold (usually a proved statement) did not."""


@dataclass
class Verdict:
    ok: bool
    message: str = ""
    witness: Any = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        head = "PASS" if self.ok else "FAIL"
        return f"{head}: {self.message}" if self.message else head


def max_ground() -> int:
    """Ground-size capacity for full-table work; ``LIFTFORGE_MAX_GROUND`` can only lower it."""
    env = os.environ.get("LIFTFORGE_MAX_GROUND")
    if env:
        try:
            return max(0, min(HARD_MAX_GROUND, int(env)))
        except ValueError:
            pass
    return HARD_MAX_GROUND


def require_capacity(size: int, limit: int | None = None, what: str = "ground set") -> None:
    cap = max_ground() if limit is None else min(limit, HARD_MAX_GROUND)
    if size > cap:
        raise CapacityError(f"{what} of size {size} exceeds capacity {cap}")


class Matroid:
    """Base class: subclasses implement ``_rank(mask)``."""

    def __init__(self, size: int, name: str | None = None):
        if size < 0:
            raise MatroidError("ground size must be nonnegative")
        self.size = size
        self.name = name or type(self).__name__
        self._memo: dict[int, int] = {}
        self._table: np.ndarray | None = None
        self._table_list: list[int] | None = None
        self._circuits: CircuitFamily | None = None
        self._full_rank: int | None = None

    def __repr__(self) -> str:
        return f"<{self.name}: {self.size} elements>"

    @property
    def ground(self) -> int:
        return (1 << self.size) - 1

    def _rank(self, X: int) -> int:
        raise NotImplementedError

    def rank(self, X: int | None = None) -> int:
        if X is None:
            return self.full_rank
        if X < 0 or X >> self.size:
            raise IndexError(f"subset {fmt(X) if X >= 0 else X} is not within a ground set of size {self.size}")
        if self._table_list is not None:
            return self._table_list[X]
        r = self._memo.get(X)
        if r is None:
            r = int(self._rank(X))
            self._memo[X] = r
        return r

    @property
    def full_rank(self) -> int:
        if self._full_rank is None:
            self._full_rank = self.rank(self.ground)
        return self._full_rank

    @property
    def corank(self) -> int:
        return self.size - self.full_rank

    def rank_table(self) -> np.ndarray:
        """Ranks of all ``2**size`` subsets, indexed by bitset."""
        if self._table is None:
            require_capacity(self.size)
            t = np.asarray(self._build_table(), dtype=np.int16)
            t.setflags(write=False)
            self._table = t
            self._table_list = t.tolist()
        return self._table

    def _build_table(self) -> np.ndarray:
        return np.fromiter((self._rank(X) for X in range(1 << self.size)), dtype=np.int16,
                           count=1 << self.size)

    def is_independent(self, X: int) -> bool:
        return self.rank(X) == X.bit_count()

    def closure(self, X: int) -> int:
        r = self.rank(X)
        cl = X
        for e in range(self.size):
            if not (X >> e) & 1 and self.rank(X | (1 << e)) == r:
                cl |= 1 << e
        return cl

    def loops(self) -> int:
        return mask_of(e for e in range(self.size) if self.rank(1 << e) == 0)

    def coloops(self) -> int:
        r = self.full_rank
        return mask_of(e for e in range(self.size) if self.rank(self.ground ^ (1 << e)) < r)

    def circuits(self) -> "CircuitFamily":
        if self._circuits is None:
            self._circuits = CircuitFamily(self, tuple(_circuits_from_table(self)))
        return self._circuits

    def bases(self) -> list[int]:
        t = self.rank_table()
        pc = popcount_table(self.size)
        r = self.full_rank
        return [int(X) for X in np.nonzero((t == r) & (pc == r))[0]]

    def flats(self) -> list[int]:
        return [int(X) for X in np.nonzero(_closed_flags(self))[0]]

    def hyperplanes(self) -> list[int]:
        if self.full_rank == 0:
            return []
        t = self.rank_table()
        return [int(X) for X in np.nonzero(_closed_flags(self) & (t == self.full_rank - 1))[0]]


def _closed_flags(M: Matroid) -> np.ndarray:
    t = M.rank_table()
    n = M.size
    closed = np.ones(1 << n, dtype=bool)
    idx = np.arange(1 << n)
    for e in range(n):
        bit = 1 << e
        lack = idx[(idx & bit) == 0]
        closed[lack] &= t[lack | bit] > t[lack]
    return closed


def _circuits_from_table(M: Matroid) -> list[int]:
    n = M.size
    t = M.rank_table()
    pc = popcount_table(n)
    indep = t == pc
    circ = ~indep
    idx = np.arange(1 << n)
    for e in range(n):
        bit = 1 << e
        has = idx[(idx & bit) != 0]
        circ[has] &= indep[has ^ bit]
    return [int(X) for X in np.nonzero(circ)[0]]


@dataclass(frozen=True)
class CircuitFamily:
    """Circuits of ``base`` in ascending bitset order; position ``i`` names circuit ``C_i``."""

    base: Matroid = field(repr=False, compare=False)
    circuits: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.circuits)

    def __getitem__(self, i: int) -> int:
        return self.circuits[i]

    def __iter__(self):
        return iter(self.circuits)

    def index(self, circuit: int) -> int:
        return self._lookup()[circuit]

    def _lookup(self) -> dict[int, int]:
        lk = self.__dict__.get("_lk")
        if lk is None:
            lk = {c: i for i, c in enumerate(self.circuits)}
            object.__setattr__(self, "_lk", lk)
        return lk

    def inside(self, X: int) -> int:
        """Bitset of circuit indices ``i`` with ``C_i <= X``."""
        out = 0
        for i, c in enumerate(self.circuits):
            if c & ~X == 0:
                out |= 1 << i
        return out

    def union(self, members: int) -> int:
        u = 0
        for i in iter_bits(members):
            u |= self.circuits[i]
        return u

    def as_sets(self) -> list[list[int]]:
        return [elements_of(c) for c in self.circuits]


# ---------------------------------------------------------------------------
# Concrete matroids


class ExplicitMatroid(Matroid):
    """A matroid given by its full rank table."""

    def __init__(self, size: int, table: Sequence[int] | np.ndarray, name: str | None = None):
        super().__init__(size, name or "explicit")
        t = np.asarray(table, dtype=np.int16)
        if t.shape != (1 << size,):
            raise MatroidError(f"rank table must have {1 << size} entries, got {t.shape}")
        t = t.copy()
        t.setflags(write=False)
        self._table = t
        self._table_list = t.tolist()

    def _rank(self, X: int) -> int:
        return self._table_list[X]


class UniformMatroid(Matroid):
    def __init__(self, r: int, n: int):
        if not 0 <= r <= n:
            raise MatroidError(f"uniform matroid needs 0 <= r <= n, got r={r}, n={n}")
        super().__init__(n, f"U({r},{n})")
        self.r = r

    def _rank(self, X: int) -> int:
        return min(X.bit_count(), self.r)

    def _build_table(self):
        return np.minimum(popcount_table(self.size), self.r)


class GraphicMatroid(Matroid):
    """Cycle matroid of a multigraph on vertices ``0..nv-1``; edge ``i`` is ``edges[i]``."""

    def __init__(self, nv: int, edges: Sequence[tuple[int, int]], name: str | None = None):
        for u, v in edges:
            if not (0 <= u < nv and 0 <= v < nv):
                raise MatroidError(f"edge {u}-{v} has an endpoint outside 0..{nv - 1}")
        super().__init__(len(edges), name or f"M(graph on {nv} vertices)")
        self.nv = nv
        self.edges = tuple((int(u), int(v)) for u, v in edges)

    def _rank(self, X: int) -> int:
        parent = list(range(self.nv))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        r = 0
        for e in iter_bits(X):
            u, v = self.edges[e]
            a, b = find(u), find(v)
            if a != b:
                parent[a] = b
                r += 1
        return r

    def _build_table(self):
        size = 1 << self.size
        ranks = [0] * size
        labels: list[tuple[int, ...] | None] = [None] * size
        labels[0] = tuple(range(self.nv))
        edges = self.edges
        for X in range(1, size):
            low = X & -X
            prev = labels[X ^ low]
            u, v = edges[low.bit_length() - 1]
            a, b = prev[u], prev[v]
            if a == b:
                labels[X] = prev
                ranks[X] = ranks[X ^ low]
            else:
                labels[X] = tuple(a if x == b else x for x in prev)
                ranks[X] = ranks[X ^ low] + 1
        return np.asarray(ranks, dtype=np.int16)


class LinearMatroid(Matroid):
    """Column matroid of a matrix over a finite field."""

    def __init__(self, A: FieldMatrix, name: str | None = None):
        super().__init__(A.ncols, name or f"M({A.nrows}x{A.ncols} over {A.field!r})")
        self.matrix = A

    def _rank(self, X: int) -> int:
        return matrix_rank(self.matrix, elements_of(X))


class OracleMatroid(Matroid):
    """A matroid whose rank is an arbitrary callable on bitsets."""

    def __init__(self, size: int, fn: Callable[[int], int], name: str | None = None):
        super().__init__(size, name or "oracle")
        self._fn = fn

    def _rank(self, X: int) -> int:
        return self._fn(X)


class DualMatroid(Matroid):
    def __init__(self, M: Matroid):
        super().__init__(M.size, f"dual({M.name})")
        self.primal = M

    def _rank(self, X: int) -> int:
        M = self.primal
        return X.bit_count() + M.rank(M.ground ^ X) - M.full_rank

    def _build_table(self):
        t = self.primal.rank_table().astype(np.int16)
        pc = popcount_table(self.size)
        return pc + t[::-1] - self.primal.full_rank


class TruncatedMatroid(Matroid):
    def __init__(self, M: Matroid, t: int):
        super().__init__(M.size, f"trunc{t}({M.name})")
        self.base = M
        self.cap = M.full_rank - t

    def _rank(self, X: int) -> int:
        return min(self.base.rank(X), self.cap)

    def _build_table(self):
        return np.minimum(self.base.rank_table(), self.cap)


class RestrictedMatroid(Matroid):
    def __init__(self, M: Matroid, X: int):
        keep = elements_of(X)
        super().__init__(len(keep), f"{M.name}|{fmt(X)}")
        self.base = M
        self.keep = tuple(keep)

    def _rank(self, Y: int) -> int:
        m = 0
        for i in iter_bits(Y):
            m |= 1 << self.keep[i]
        return self.base.rank(m)


class RelabeledMatroid(Matroid):
    """``M`` with element ``e`` renamed ``perm[e]``."""

    def __init__(self, M: Matroid, perm: Sequence[int]):
        if sorted(perm) != list(range(M.size)):
            raise MatroidError("relabeling must be a permutation of the ground set")
        super().__init__(M.size, f"relabel({M.name})")
        self.base = M
        self.inv = [0] * M.size
        for e, f in enumerate(perm):
            self.inv[f] = e

    def _rank(self, Y: int) -> int:
        m = 0
        for f in iter_bits(Y):
            m |= 1 << self.inv[f]
        return self.base.rank(m)


# ---------------------------------------------------------------------------
# Constructors


def uniform(r: int, n: int) -> Matroid:
    return UniformMatroid(r, n)


def free(n: int) -> Matroid:
    M = UniformMatroid(n, n)
    M.name = f"free({n})"
    return M


def rank_zero(n: int) -> Matroid:
    M = UniformMatroid(0, n)
    M.name = f"zero({n})"
    return M


def graphic(edges: Sequence[tuple[int, int]], nv: int | None = None, name: str | None = None) -> Matroid:
    """Cycle matroid of a multigraph; vertices are 0-based, repeated edges allowed."""
    if nv is None:
        nv = 1 + max((max(u, v) for u, v in edges), default=-1)
    return GraphicMatroid(nv, edges, name)


def complete_graph_edges(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


def linear(A: FieldMatrix | Sequence[Sequence[int]], F: GF | None = None, name: str | None = None) -> Matroid:
    if not isinstance(A, FieldMatrix):
        if F is None:
            raise MatroidError("a field is needed for a raw matrix")
        A = FieldMatrix(F, A)
    return LinearMatroid(A, name)


def check_basis_exchange(bases: Iterable[int]) -> tuple[int, int, int] | None:
    """First ``(B1, B2, x)`` violating basis exchange, or ``None``."""
    bs = sorted(set(bases))
    bset = set(bs)
    for B1 in bs:
        for B2 in bs:
            for x in iter_bits(B1 & ~B2):
                base = B1 ^ (1 << x)
                if not any((base | (1 << y)) in bset for y in iter_bits(B2 & ~B1)):
                    return B1, B2, x
    return None


def explicit(bases: Iterable[Iterable[int] | int], n: int | None = None, name: str | None = None) -> Matroid:
    """Matroid from a basis list; the exchange axiom is verified before accepting."""
    bl = [b if isinstance(b, int) else mask_of(b) for b in bases]
    if not bl:
        raise MatroidError("a matroid has at least one basis")
    sizes = {b.bit_count() for b in bl}
    if len(sizes) != 1:
        raise MatroidError(f"bases have different sizes {sorted(sizes)}")
    top = max(bl).bit_length()
    if n is None:
        n = top
    if top > n:
        raise MatroidError(f"basis element outside ground set of size {n}")
    bad = check_basis_exchange(bl)
    if bad is not None:
        B1, B2, x = bad
        raise MatroidError(f"basis exchange fails: B1={fmt(B1)}, B2={fmt(B2)}, x={x}", witness=bad)
    return from_bases(bl, n, name)


def from_bases(bases: Iterable[int], n: int, name: str | None = None) -> ExplicitMatroid:
    """Rank table from a basis list, without validation."""
    require_capacity(n)
    flags = np.zeros(1 << n, dtype=bool)
    flags[list(bases)] = True
    indep = subset_or(flags, n)
    pc = popcount_table(n)
    table = subset_max(np.where(indep, pc, 0).astype(np.int16), n)
    return ExplicitMatroid(n, table, name or "bases")


def from_independent_flags(indep: np.ndarray, n: int, name: str | None = None) -> ExplicitMatroid:
    pc = popcount_table(n)
    table = subset_max(np.where(indep, pc, 0).astype(np.int16), n)
    return ExplicitMatroid(n, table, name)


def from_circuits(n: int, circuits: Iterable[int], name: str | None = None) -> ExplicitMatroid:
    """Rank table of the matroid whose circuits are ``circuits`` (assumed to be a valid circuit family)."""
    require_capacity(n)
    flags = np.zeros(1 << n, dtype=bool)
    cl = list(circuits)
    if cl:
        flags[cl] = True
    dep = superset_or(flags, n)
    return from_independent_flags(~dep, n, name)


def materialize(M: Matroid, name: str | None = None) -> ExplicitMatroid:
    return ExplicitMatroid(M.size, M.rank_table(), name or M.name)


# ---------------------------------------------------------------------------
# Operations


def rank(M: Matroid, X: int) -> int:
    return M.rank(X)


def circuits(M: Matroid) -> CircuitFamily:
    return M.circuits()


def closure(M: Matroid, X: int) -> int:
    return M.closure(X)


def dual(M: Matroid) -> Matroid:
    if isinstance(M, DualMatroid):
        return M.primal
    return DualMatroid(M)


def truncate(M: Matroid, t: int) -> Matroid:
    """Cap the rank function at ``r(M) - t``."""
    if t < 0 or t > M.full_rank:
        raise MatroidError(f"cannot truncate a rank-{M.full_rank} matroid {t} times")
    if t == 0:
        return M
    return TruncatedMatroid(M, t)


def restrict(M: Matroid, X: int) -> Matroid:
    if X >> M.size:
        raise IndexError("restriction set leaves the ground set")
    if X == M.ground:
        return M
    return RestrictedMatroid(M, X)


def relabel(M: Matroid, perm: Sequence[int]) -> Matroid:
    return RelabeledMatroid(M, perm)


def same_table(M1: Matroid, M2: Matroid) -> bool:
    return M1.size == M2.size and bool(np.array_equal(M1.rank_table(), M2.rank_table()))


def first_table_difference(M1: Matroid, M2: Matroid) -> int | None:
    diff = np.nonzero(M1.rank_table() != M2.rank_table())[0]
    return int(diff[0]) if len(diff) else None


def check_rank_axioms(M: Matroid | np.ndarray, n: int | None = None) -> Verdict:
    """Normalization, unit increase, and local submodularity over the full table.

    Local submodularity ``r(X+e) + r(X+f) >= r(X+e+f) + r(X)`` together with the
    first two axioms is equivalent to full submodularity.
    """
    if isinstance(M, Matroid):
        t = M.rank_table().astype(np.int32)
        n = M.size
    else:
        t = np.asarray(M, dtype=np.int32)
        if n is None:
            n = int(t.shape[0]).bit_length() - 1
        if t.shape != (1 << n,):
            return Verdict(False, "table length is not a power of two", witness=None)
    if t[0] != 0:
        return Verdict(False, f"normalization: r(∅) = {t[0]}", witness=("normalization", 0))
    idx = np.arange(1 << n)
    for e in range(n):
        bit = 1 << e
        lack = idx[(idx & bit) == 0]
        d = t[lack | bit] - t[lack]
        bad = np.nonzero((d < 0) | (d > 1))[0]
        if len(bad):
            X = int(lack[bad[0]])
            return Verdict(False, f"unit increase fails at X={fmt(X)}, e={e}", witness=("unit-increase", X, e))
    for e in range(n):
        for f in range(e + 1, n):
            be, bf = 1 << e, 1 << f
            lack = idx[(idx & (be | bf)) == 0]
            lhs = t[lack | be] + t[lack | bf]
            rhs = t[lack | be | bf] + t[lack]
            bad = np.nonzero(lhs < rhs)[0]
            if len(bad):
                X = int(lack[bad[0]])
                return Verdict(False, f"submodularity fails at X={fmt(X)}, e={e}, f={f}",
                               witness=("submodularity", X, e, f))
    return Verdict(True, f"rank axioms hold on all {1 << n} subsets")


def is_quotient(Mq: Matroid, K: Matroid) -> Verdict:
    """PASS iff ``cl_K(X) <= cl_Mq(X)`` for every ``X``, i.e. ``Mq`` is a quotient of ``K``."""
    if Mq.size != K.size:
        raise MatroidError(f"ground sets differ: {Mq.size} vs {K.size}")
    n = K.size
    tq = Mq.rank_table()
    tk = K.rank_table()
    idx = np.arange(1 << n)
    best = None
    for e in range(n):
        bit = 1 << e
        lack = idx[(idx & bit) == 0]
        in_k = tk[lack | bit] == tk[lack]
        in_q = tq[lack | bit] == tq[lack]
        bad = np.nonzero(in_k & ~in_q)[0]
        if len(bad):
            cand = (int(lack[bad[0]]), e)
            if best is None or cand < best:
                best = cand
    if best is not None:
        X, e = best
        return Verdict(False, f"{e} is in cl_K({fmt(X)}) but not in cl_Mq({fmt(X)})", witness=best)
    return Verdict(True, "closure containment holds on every subset")


def is_lift_of(K: Matroid, M: Matroid) -> Verdict:
    return is_quotient(M, K)


def _element_signatures(M: Matroid) -> list[tuple]:
    n = M.size
    circ = M.circuits()
    loops, coloops = M.loops(), M.coloops()
    sig = []
    for e in range(n):
        sizes = sorted(c.bit_count() for c in circ if (c >> e) & 1)
        parallel = sum(1 for c in circ if c.bit_count() == 2 and (c >> e) & 1)
        sig.append(((loops >> e) & 1, (coloops >> e) & 1, parallel, tuple(sizes)))
    return sig


def isomorphic(M1: Matroid, M2: Matroid, limit: int = DEFAULT_MAX_ISO) -> list[int] | None:
    """A permutation ``perm`` with ``r2(perm(X)) == r1(X)`` for all ``X``, or ``None``.

    Backtracking over element images, pruned by per-element circuit signatures
    and by checking every subset of the assigned elements as the assignment grows.
    """
    if M1.size != M2.size:
        return None
    n = M1.size
    require_capacity(n, limit, "isomorphism ground set")
    t1, t2 = M1.rank_table(), M2.rank_table()
    if M1.full_rank != M2.full_rank:
        return None
    pc = popcount_table(n)
    for k in range(n + 1):
        if sorted(t1[pc == k].tolist()) != sorted(t2[pc == k].tolist()):
            return None
    s1, s2 = _element_signatures(M1), _element_signatures(M2)
    if sorted(s1) != sorted(s2):
        return None
    r1, r2 = t1.tolist(), t2.tolist()
    # most constrained elements first
    counts = {}
    for s in s1:
        counts[s] = counts.get(s, 0) + 1
    order = sorted(range(n), key=lambda e: (counts[s1[e]], e))
    perm = [-1] * n
    used = [False] * n

    def extend(depth: int, pairs: list[tuple[int, int]]) -> bool:
        if depth == n:
            return True
        e = order[depth]
        for f in range(n):
            if used[f] or s2[f] != s1[e]:
                continue
            be, bf = 1 << e, 1 << f
            new = []
            ok = True
            for a, b in pairs:
                if r1[a | be] != r2[b | bf]:
                    ok = False
                    break
                new.append((a | be, b | bf))
            if not ok:
                continue
            perm[e] = f
            used[f] = True
            if extend(depth + 1, pairs + new):
                return True
            used[f] = False
            perm[e] = -1
        return False

    if not extend(0, [(0, 0)]):
        return None
    assert same_table(relabel(M1, perm), M2), "isomorphism failed re-verification"
    return perm
