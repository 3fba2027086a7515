"""Fully group-labeled complete graphs and the lifts that respect their labeling.

``K_n^Γ`` has vertices ``0..n-1`` and one edge ``(i, j, α)`` for every pair
``i < j`` and every ``α ∈ Γ``, oriented from ``i`` to ``j``. Edge index is
``pair_index * |Γ| + α`` with pairs in lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations, permutations, product

import numpy as np

from .bitsets import elements_of, fmt, iter_bits, mask_of, popcount_table, subset_max, superset_or
from .core import (CapacityError, ExplicitMatroid, GraphicMatroid, Matroid, MatroidError, OracleMatroid,
                   Verdict, VerificationError, is_quotient, same_table, first_table_difference, truncate,
                   LinearMatroid)
from .fields import galois_field, point_index, projective_points
from .groups import AbelianGroup, FiniteGroup, elementary_abelian
from .lift import (CircuitSpaceMatroid, LiftedMatroid, linear_class_lift, lift)

MAX_CYCLE_N = 5
MAX_CYCLE_GROUP = 8
STAR_CIRCUIT_LIMIT = 512


class GainGraph:
    def __init__(self, n: int, group: FiniteGroup):
        if n < 3:
            raise MatroidError(f"K_n^Γ needs n >= 3, got {n}")
        self.n = n
        self.group = group
        self.pairs = list(combinations(range(n), 2))
        self._pair_index = {p: k for k, p in enumerate(self.pairs)}
        m = group.order
        self.edges = [(i, j, a) for (i, j) in self.pairs for a in range(m)]
        self.matroid = GraphicMatroid(n, [(i, j) for i, j, _ in self.edges],
                                      name=f"M(K_{n}^{group.name})")
        self._cycles: list[Cycle] | None = None

    def __repr__(self) -> str:
        return f"GainGraph(K_{self.n}^{self.group.name}, {len(self.edges)} edges)"

    @property
    def size(self) -> int:
        return len(self.edges)

    def edge_index(self, i: int, j: int, a: int) -> int:
        if i > j:
            raise ValueError("edges are named with i < j")
        return self._pair_index[(i, j)] * self.group.order + a

    def edge_label(self, e: int) -> str:
        i, j, a = self.edges[e]
        return f"{self.group.label(a)}_{i + 1}{j + 1}"

    def cycles(self, max_n: int = MAX_CYCLE_N, max_group: int = MAX_CYCLE_GROUP) -> list["Cycle"]:
        """All cycles, including digons, as sorted edge bitsets in ascending order."""
        if self._cycles is None:
            if self.n > max_n or self.group.order > max_group:
                raise CapacityError(f"cycle enumeration capped at n <= {max_n}, |Γ| <= {max_group}")
            m = self.group.order
            found = set()
            for (i, j) in self.pairs:
                for a, b in combinations(range(m), 2):
                    found.add(mask_of((self.edge_index(i, j, a), self.edge_index(i, j, b))))
            for k in range(3, self.n + 1):
                for verts in combinations(range(self.n), k):
                    first, rest = verts[0], verts[1:]
                    for order in permutations(rest):
                        if order[0] > order[-1]:
                            continue  # each cyclic order once up to reflection
                        seq = (first,) + order
                        hops = [tuple(sorted((seq[t], seq[(t + 1) % k]))) for t in range(k)]
                        for labels in product(range(m), repeat=k):
                            found.add(mask_of(self.edge_index(u, v, a) for (u, v), a in zip(hops, labels)))
            self._cycles = [Cycle(self, c) for c in sorted(found)]
        return self._cycles


@dataclass(frozen=True)
class Cycle:
    graph: GainGraph = dc_field(repr=False, compare=False)
    edges: int

    def __len__(self) -> int:
        return self.edges.bit_count()

    def walk_order(self) -> tuple[list[int], list[int]]:
        """Vertices ``v_0..v_{k-1}`` and edges ``e_t`` joining ``v_t`` to ``v_{t+1}`` around the cycle."""
        G = self.graph
        es = elements_of(self.edges)
        start = es[0]
        i, j, _ = G.edges[start]
        verts, order = [i], [start]
        cur = j
        remaining = set(es[1:])
        while remaining:
            nxt = next(e for e in sorted(remaining) if cur in G.edges[e][:2])
            remaining.discard(nxt)
            a, b, _ = G.edges[nxt]
            verts.append(cur)
            order.append(nxt)
            cur = b if a == cur else a
        if cur != i:
            raise MatroidError(f"edge set {fmt(self.edges)} is not a cycle")
        return verts, order

    def label(self) -> str:
        return "{" + ",".join(self.graph.edge_label(e) for e in elements_of(self.edges)) + "}"


def _traverse(G: GainGraph, e: int, frm: int) -> int:
    i, j, a = G.edges[e]
    return a if frm == i else G.group.inverse(a)


def phi(C: Cycle) -> frozenset[int]:
    """Group values of all ``2|C|`` simple closed walks around ``C`` (each start, both directions)."""
    G = C.graph
    grp = G.group
    verts, es = C.walk_order()
    k = len(es)
    values = set()
    for s in range(k):
        val = 0
        for t in range(k):
            pos = (s + t) % k
            val = grp.compose(val, _traverse(G, es[pos], verts[pos]))
        values.add(val)
        val = 0
        for t in range(k):
            pos = (s - 1 - t) % k
            # backwards along e_pos means leaving v_{pos+1}
            val = grp.compose(val, _traverse(G, es[pos], verts[(pos + 1) % k]))
        values.add(val)
    return frozenset(values)


def is_balanced(C: Cycle) -> bool:
    return C.graph.group.identity in phi(C)


def build_gain_graph(n: int, group: FiniteGroup) -> GainGraph:
    return GainGraph(n, group)


def enumerate_cycles(G: GainGraph) -> list[Cycle]:
    return G.cycles()


def balanced_mask(G: GainGraph) -> int:
    """Circuit-index bitset (indices into ``G.matroid.circuits()``) of the balanced cycles."""
    fam = G.matroid.circuits()
    out = 0
    for C in G.cycles():
        if is_balanced(C):
            out |= 1 << fam.index(C.edges)
    return out


def edge_subset(G: GainGraph, A) -> int:
    """``E_A``: all edges whose label is in ``A``."""
    A = set(A)
    return mask_of(e for e, (_, _, a) in enumerate(G.edges) if a in A)


# ---------------------------------------------------------------------------
# The lift matroid of the balanced cycles


def lift_matroid_direct(G: GainGraph) -> ExplicitMatroid:
    """Independent iff the edge set has at most one cycle and no balanced cycle."""
    n = G.size
    tM = G.matroid.rank_table()
    pc = popcount_table(n)
    flags = np.zeros(1 << n, dtype=bool)
    for C in G.cycles():
        if is_balanced(C):
            flags[C.edges] = True
    has_balanced = superset_or(flags, n)
    indep = ((pc - tM) <= 1) & ~has_balanced
    table = subset_max(np.where(indep, pc, 0).astype(np.int16), n)
    return ExplicitMatroid(n, table, name=f"LG({G.n},{G.group.name})")


def balanced_lift(n: int, group: FiniteGroup) -> LiftedMatroid:
    """LG(n, Γ) via the rank-1 construction on the balanced class, cross-checked against the direct definition."""
    G = GainGraph(n, group)
    direct = lift_matroid_direct(G)
    LG = linear_class_lift(G.matroid, balanced_mask(G))
    LG.name = f"LG({n},{group.name})"
    if not same_table(direct, LG):
        X = first_table_difference(direct, LG)
        raise VerificationError(f"LG constructions disagree on {fmt(X)}", witness=X)
    LG.gain_graph = G
    return LG


def theta_check(G: GainGraph) -> Verdict:
    """No theta subgraph contains exactly two balanced cycles."""
    M = G.matroid
    cycles = [C.edges for C in G.cycles()]
    is_cycle = set(cycles)
    balanced = {C.edges for C in G.cycles() if is_balanced(C)}
    seen = set()
    for a, b in combinations(cycles, 2):
        U = a | b
        if U in seen:
            continue
        if U.bit_count() - M.rank(U) != 2:
            continue
        c = a ^ b
        if c not in is_cycle:
            continue
        seen.add(U)
        nb = (a in balanced) + (b in balanced) + (c in balanced)
        if nb == 2:
            return Verdict(False, f"theta {fmt(U)} has exactly two balanced cycles", witness=(a, b, c))
    return Verdict(True, f"{len(seen)} theta subgraphs, none with exactly two balanced cycles")


# ---------------------------------------------------------------------------
# Projective labels for Z_p^j


class LabelProjection:
    """Reads ``α ∈ Z_p^j`` as a vector of ``GF(p^i)^{j/i}`` by consecutive blocks of ``i`` coordinates."""

    def __init__(self, p: int, j: int, i: int):
        if i < 1 or j % i:
            raise MatroidError(f"{i} does not divide {j}")
        self.p, self.j, self.i = p, j, i
        self.field = galois_field(p, i)
        self.dim = j // i
        self.points = projective_points(self.dim, self.field)

    @property
    def num_points(self) -> int:
        return self.points.ncols

    def vector(self, coords) -> tuple[int, ...]:
        coords = list(coords)
        if len(coords) != self.j:
            raise MatroidError(f"expected {self.j} coordinates, got {len(coords)}")
        return tuple(self.field.from_coeffs(coords[b * self.i:(b + 1) * self.i]) for b in range(self.dim))

    def point(self, coords) -> int:
        return point_index(self.dim, self.field, self.vector(coords))


def label_projection(p: int, j: int, i: int) -> LabelProjection:
    return LabelProjection(p, j, i)


def g_map(C: Cycle, proj: LabelProjection) -> int:
    """Projective point of an unbalanced cycle; both values in ``φ(C)`` must agree."""
    grp = C.graph.group
    if not isinstance(grp, AbelianGroup) or grp.orders != (proj.p,) * proj.j:
        raise MatroidError(f"labels must come from Z_{proj.p}^{proj.j}")
    vals = phi(C)
    if grp.identity in vals:
        raise MatroidError(f"cycle {C.label()} is balanced")
    pts = {proj.point(grp.coordinates(v)) for v in vals}
    if len(pts) != 1:
        raise VerificationError(f"φ({C.label()}) meets several projective points {sorted(pts)}")
    return pts.pop()


def build_N(n: int, j: int, p: int, K: Matroid, i: int = 1) -> CircuitSpaceMatroid:
    """The matroid on cycles of ``K_n^{Z_p^j}`` with ``r_N(S) = r_K(g_i(unbalanced members of S))``."""
    return cycle_space_N(GainGraph(n, elementary_abelian(p, j)), K, i)


def cycle_space_N(G: GainGraph, K: Matroid, i: int = 1) -> CircuitSpaceMatroid:
    grp = G.group
    if not isinstance(grp, AbelianGroup) or len(set(grp.orders)) != 1:
        raise MatroidError("build_N needs an elementary abelian label group")
    p, j = grp.orders[0], len(grp.orders)
    proj = LabelProjection(p, j, i)
    if K.size != proj.num_points:
        raise MatroidError(f"K has {K.size} elements but PG({proj.dim - 1},{p}^{i}) has {proj.num_points} points")
    fam = G.matroid.circuits()
    point = [-1] * len(fam)
    for C in G.cycles():
        if not is_balanced(C):
            point[fam.index(C.edges)] = g_map(C, proj)
    point_bits = [0 if q < 0 else 1 << q for q in point]

    def r(S: int) -> int:
        pts = 0
        for c in iter_bits(S):
            pts |= point_bits[c]
        return K.rank(pts)

    N = OracleMatroid(len(fam), r, name=f"N({G.n},{j},{p},{K.name})")
    return CircuitSpaceMatroid(fam, N)


def projective_geometry(dim: int, F) -> Matroid:
    """PG(dim-1, q) as a linear matroid."""
    return LinearMatroid(projective_points(dim, F), name=f"PG({dim - 1},{F.q})")


def projective_lift(n: int, p: int, j: int, i: int) -> LiftedMatroid:
    """Rank-``i`` lift of ``M(K_n^{Z_p^j})`` whose cycle-circuits are exactly the balanced cycles."""
    if not 1 <= i <= j:
        raise MatroidError(f"need 1 <= i <= j, got i={i}, j={j}")
    G = GainGraph(n, elementary_abelian(p, j))
    PG = projective_geometry(j, galois_field(p, 1))
    K = truncate(PG, j - i)
    N = cycle_space_N(G, K, 1)
    L = lift(G.matroid, N, check=True, max_circuits=STAR_CIRCUIT_LIMIT)
    L.name = f"PGlift({n},{p},{j},{i})"
    L.gain_graph = G
    L.K = K
    if L.full_rank != n - 1 + i:
        raise VerificationError(f"lift has rank {L.full_rank}, expected {n - 1 + i}")
    v = cycle_circuit_trace(L, G)
    if not v:
        raise VerificationError(v.message, witness=v.witness)
    return L


# ---------------------------------------------------------------------------
# Class M_{n,Γ} diagnostics


def is_circuit(M: Matroid, X: int) -> bool:
    k = X.bit_count()
    if M.rank(X) != k - 1:
        return False
    return all(M.rank(X ^ (1 << e)) == k - 1 for e in iter_bits(X))


def cycle_circuit_trace(M: Matroid, G: GainGraph) -> Verdict:
    """A cycle is a circuit of ``M`` iff it is balanced."""
    for C in G.cycles():
        b = is_balanced(C)
        c = is_circuit(M, C.edges)
        if b != c:
            what = "balanced but not a circuit" if b else "an unbalanced circuit"
            return Verdict(False, f"cycle {C.label()} is {what}", witness=C.edges)
    return Verdict(True, "cycle-circuits are exactly the balanced cycles")


def class_membership(M: Matroid, G: GainGraph) -> Verdict:
    if M.size != G.size:
        raise MatroidError(f"ground sets differ: {M.size} vs {G.size}")
    q = is_quotient(G.matroid, M)
    if not q:
        return Verdict(False, f"not a lift of M(G): {q.message}", witness=q.witness)
    return cycle_circuit_trace(M, G)


@dataclass
class TildeReport:
    classes: list[frozenset[int]]
    edge_ranks: Verdict
    subgroup_closure: Verdict
    equivalence: Verdict
    class_rank: Verdict
    subgroups: Verdict

    @property
    def ok(self) -> bool:
        return all((self.edge_ranks, self.subgroup_closure, self.equivalence, self.class_rank, self.subgroups))

    def lines(self, G: GainGraph) -> list[str]:
        cls = ["{" + ",".join(G.group.label(a) for a in sorted(c)) + "}" for c in self.classes]
        return [f"classes: {' '.join(cls)}",
                f"r(E_{{α,ε}}) = n and E_α misses cl(E_ε): {self.edge_ranks}",
                f"E_<A> inside cl(E_A ∪ E_ε) for |A| <= 2: {self.subgroup_closure}",
                f"relation is an equivalence: {self.equivalence}",
                f"each class has rank n: {self.class_rank}",
                f"each class with ε is a subgroup: {self.subgroups}"]


def tilde_relation(M: Matroid, G: GainGraph) -> TildeReport:
    """The relation ``α ~ β`` iff ``r_M(E_{α,β,ε}) = n`` together with the rank and closure checks on ``E_A`` that surround it."""
    v = class_membership(M, G)
    if not v:
        raise MatroidError(f"matroid is not in the class M_(n,Γ): {v.message}", witness=v.witness)
    grp = G.group
    n = G.n
    eps = grp.identity
    others = [a for a in grp.elements() if a != eps]
    E = lambda A: edge_subset(G, A)  # noqa: E731

    edge_ranks = Verdict(True, f"holds for all {len(others)} non-identity elements")
    cl_eps = M.closure(E([eps]))
    for a in others:
        if M.rank(E([a, eps])) != n:
            edge_ranks = Verdict(False, f"r(E_{{{grp.label(a)},ε}}) = {M.rank(E([a, eps]))} != {n}", witness=a)
            break
        if E([a]) & cl_eps:
            edge_ranks = Verdict(False, f"E_{grp.label(a)} meets cl(E_ε)", witness=a)
            break

    subgroup_closure = Verdict(True, "holds for all generating sets of size <= 2")
    for k in (0, 1, 2):
        bad = None
        for A in combinations(grp.elements(), k):
            gen = grp.generated_subgroup(A)
            cl = M.closure(E(set(A) | {eps}))
            if E(gen) & ~cl:
                bad = A
                break
        if bad is not None:
            subgroup_closure = Verdict(False, f"E_<{bad}> not inside cl(E_A ∪ E_ε)", witness=bad)
            break

    rel = {(a, b): M.rank(E([a, b, eps])) == n for a in others for b in others}
    equivalence = Verdict(True, "reflexive, symmetric, transitive")
    for a in others:
        if not rel[(a, a)]:
            equivalence = Verdict(False, f"not reflexive at {grp.label(a)}", witness=(a,))
            break
    if equivalence:
        for a, b in product(others, repeat=2):
            if rel[(a, b)] != rel[(b, a)]:
                equivalence = Verdict(False, "not symmetric", witness=(a, b))
                break
    if equivalence:
        for a, b, c in product(others, repeat=3):
            if rel[(a, b)] and rel[(b, c)] and not rel[(a, c)]:
                equivalence = Verdict(False, "not transitive", witness=(a, b, c))
                break

    classes: list[frozenset[int]] = []
    placed = set()
    for a in others:
        if a in placed:
            continue
        cls = frozenset(b for b in others if rel[(a, b)] or b == a)
        placed |= cls
        classes.append(cls)

    class_rank = Verdict(True, f"{len(classes)} classes, each of rank {n}")
    subgroups = Verdict(True, "every class with the identity is a subgroup")
    for cls in classes:
        r = M.rank(E(cls | {eps}))
        if r != n:
            class_rank = Verdict(False, f"class rank {r} != {n}", witness=sorted(cls))
            break
    for cls in classes:
        if not grp.is_subgroup(cls | {eps}):
            subgroups = Verdict(False, "class plus identity is not a subgroup", witness=sorted(cls))
            break
    return TildeReport(classes, edge_ranks, subgroup_closure, equivalence, class_rank, subgroups)
