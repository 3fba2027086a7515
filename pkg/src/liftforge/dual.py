"""Projections of a matroid ``K`` built from a matroid ``N`` on its hyperplanes.

``K_N`` has rank ``r_K(X) - r(N) + r_N({H : X <= H})``. Hyperplane ``H``
corresponds to the circuit ``E - H`` of the dual, which turns everything here
into the lift construction on ``K*``; ``duality_bridge`` checks that route
against the direct formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bitsets import contained_family_masks, elements_of, fmt, iter_bits
from .core import Matroid, MatroidError, OracleMatroid, Verdict, dual, first_table_difference, same_table
from .lift import CircuitSpaceMatroid, lift, perfect_collections, satisfies_star


@dataclass(frozen=True)
class HyperplaneFamily:
    """Hyperplanes of ``base`` in ascending bitset order."""

    base: Matroid = field(repr=False, compare=False)
    hyperplanes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.hyperplanes)

    def __getitem__(self, i: int) -> int:
        return self.hyperplanes[i]

    def __iter__(self):
        return iter(self.hyperplanes)

    def index(self, H: int) -> int:
        return self.hyperplanes.index(H)

    def containing(self, X: int) -> int:
        """Bitset of hyperplane indices ``i`` with ``X <= H_i``."""
        out = 0
        for i, H in enumerate(self.hyperplanes):
            if X & ~H == 0:
                out |= 1 << i
        return out

    def intersection(self, members: int) -> int:
        out = self.base.ground
        for i in iter_bits(members):
            out &= self.hyperplanes[i]
        return out

    def to_dual_circuits(self) -> list[int]:
        """``perm[i]`` = index among the dual's circuits of ``E - H_i``."""
        fam = dual(self.base).circuits()
        E = self.base.ground
        return [fam.index(E ^ H) for H in self.hyperplanes]


def hyperplanes(K: Matroid) -> HyperplaneFamily:
    hs = tuple(K.hyperplanes())
    E = K.ground
    comp = sorted(E ^ D for D in dual(K).circuits())
    if list(hs) != comp:
        raise MatroidError(f"hyperplanes of {K.name} disagree with cocircuit complements")
    return HyperplaneFamily(K, hs)


@dataclass
class HyperplaneSpaceMatroid:
    family: HyperplaneFamily
    N: Matroid

    def __post_init__(self):
        if self.N.size != len(self.family):
            raise MatroidError(f"N has {self.N.size} elements but K has {len(self.family)} hyperplanes")

    @property
    def base(self) -> Matroid:
        return self.family.base


def on_hyperplanes(K: Matroid, N: Matroid) -> HyperplaneSpaceMatroid:
    return HyperplaneSpaceMatroid(hyperplanes(K), N)


def is_perfect_hyperplanes(K: Matroid, members: int, family: HyperplaneFamily | None = None) -> bool:
    fam = family or hyperplanes(K)
    k = members.bit_count()
    if K.rank(fam.intersection(members)) != K.full_rank - k:
        return False
    for i in iter_bits(members):
        others = fam.intersection(members & ~(1 << i))
        if others & ~fam[i] == 0:
            return False
    return True


def perfect_hyperplane_collections(K: Matroid, family: HyperplaneFamily | None = None,
                                   max_circuits: int | None = None) -> list[int]:
    """Perfect hyperplane collections, found as perfect circuit collections of the dual."""
    fam = family or hyperplanes(K)
    perm = fam.to_dual_circuits()
    back = {d: i for i, d in enumerate(perm)}
    members, _ = perfect_collections(dual(K), max_circuits=max_circuits)
    out = []
    for m in members:
        h = 0
        for d in iter_bits(m):
            h |= 1 << back[d]
        out.append(h)
    return sorted(out)


def satisfies_dual_star(K: Matroid, N: HyperplaneSpaceMatroid | Matroid,
                        max_circuits: int | None = None) -> Verdict:
    """Every hyperplane containing the intersection of a perfect collection is in its N-closure."""
    hsm = N if isinstance(N, HyperplaneSpaceMatroid) else on_hyperplanes(K, N)
    fam = hsm.family
    Nm = hsm.N
    cols = perfect_hyperplane_collections(K, fam, max_circuits)
    for m in cols:
        I = fam.intersection(m)
        rc = Nm.rank(m)
        for i in iter_bits(fam.containing(I) & ~m):
            if Nm.rank(m | (1 << i)) != rc:
                return Verdict(False, f"hyperplane {fmt(fam[i])} contains the intersection of perfect collection "
                                      f"{[fmt(fam[j]) for j in iter_bits(m)]} but is not in its N-closure",
                               witness=(m, i))
    return Verdict(True, f"dual star condition holds over {len(cols)} perfect hyperplane collections")


class ProjectedMatroid(Matroid):
    """``K_N``: rank ``r_K(X) - r(N) + r_N(hyperplanes containing X)``."""

    def __init__(self, K: Matroid, N: HyperplaneSpaceMatroid, name: str | None = None):
        super().__init__(K.size, name or f"{K.name}_{N.N.name}")
        self.K = K
        self.N = N

    def _rank(self, X: int) -> int:
        N = self.N.N
        return self.K.rank(X) - N.full_rank + N.rank(self.N.family.containing(X))

    def _build_table(self):
        # H contains X iff E - H is inside E - X
        E = self.K.ground
        masks = contained_family_masks(self.size, [E ^ H for H in self.N.family])
        N = self.N.N
        rN = np.fromiter((N.rank(masks[E ^ X]) for X in range(1 << self.size)), dtype=np.int16,
                         count=1 << self.size)
        return self.K.rank_table() - N.full_rank + rN


def project(K: Matroid, N: HyperplaneSpaceMatroid | Matroid, check: bool = True) -> ProjectedMatroid:
    hsm = N if isinstance(N, HyperplaneSpaceMatroid) else on_hyperplanes(K, N)
    if check:
        v = satisfies_dual_star(K, hsm)
        if not v:
            raise MatroidError(f"dual star condition fails: {v.message}", witness=v.witness)
    return ProjectedMatroid(K, hsm)


def dual_circuit_N(K: Matroid, N: HyperplaneSpaceMatroid) -> CircuitSpaceMatroid:
    """``N`` carried to the circuits of ``K*`` through ``H -> E - H``."""
    perm = N.family.to_dual_circuits()
    back = [0] * len(perm)
    for i, d in enumerate(perm):
        back[d] = i
    Nm = N.N

    def r(S: int) -> int:
        m = 0
        for d in iter_bits(S):
            m |= 1 << back[d]
        return Nm.rank(m)

    Kd = dual(K)
    return CircuitSpaceMatroid(Kd.circuits(), OracleMatroid(len(perm), r, name=f"{Nm.name}'"))


def duality_bridge(K: Matroid, N: HyperplaneSpaceMatroid | Matroid) -> Verdict:
    """Compare ``K_N`` with the dual of the lift of ``K*`` by the transported ``N``."""
    hsm = N if isinstance(N, HyperplaneSpaceMatroid) else on_hyperplanes(K, N)
    direct = project(K, hsm, check=False)
    Kd = dual(K)
    via = dual(lift(Kd, dual_circuit_N(K, hsm), check=False))
    if not same_table(direct, via):
        X = first_table_difference(direct, via)
        return Verdict(False, f"ranks differ on {fmt(X)}: {direct.rank(X)} vs {via.rank(X)}", witness=X)
    return Verdict(True, f"direct and dualized constructions agree on all {1 << K.size} subsets")


def star_correspondence(K: Matroid, N: HyperplaneSpaceMatroid | Matroid) -> Verdict:
    """The dual star condition for ``(K, N)`` and the star condition for the transported pair agree."""
    hsm = N if isinstance(N, HyperplaneSpaceMatroid) else on_hyperplanes(K, N)
    a = satisfies_dual_star(K, hsm)
    b = satisfies_star(dual(K), dual_circuit_N(K, hsm), max_circuits=None)
    if bool(a) != bool(b):
        return Verdict(False, f"dual star {'holds' if a else 'fails'} but transported star "
                              f"{'holds' if b else 'fails'}")
    return Verdict(True, f"both conditions {'hold' if a else 'fail'}")


# ---------------------------------------------------------------------------
# Rank-1 case: linear subclasses


def is_linear_subclass(K: Matroid, members: int, family: HyperplaneFamily | None = None) -> Verdict:
    fam = family or hyperplanes(K)
    idx = elements_of(members)
    target = K.full_rank - 2
    for a_pos, a in enumerate(idx):
        for b in idx[a_pos + 1:]:
            I = fam[a] & fam[b]
            if K.rank(I) != target:
                continue
            missing = fam.containing(I) & ~members
            if missing:
                c = (missing & -missing).bit_length() - 1
                return Verdict(False, f"{fmt(fam[a])} and {fmt(fam[b])} are in the subclass "
                                      f"but {fmt(fam[c])} is not", witness=(a, b, c))
    return Verdict(True, f"linear subclass of {len(idx)} hyperplanes")


def rank1_hyperplane_N(family: HyperplaneFamily, loops: int) -> HyperplaneSpaceMatroid:
    nh = len(family)
    non_loops = ((1 << nh) - 1) & ~loops
    return HyperplaneSpaceMatroid(family, OracleMatroid(nh, lambda S: 1 if S & non_loops else 0, name="rank1"))


def linear_subclass_projection(K: Matroid, subclass: int) -> Matroid:
    """The two-case elementary projection: drop the rank by one exactly when every hyperplane
    containing ``X`` is in the subclass."""
    fam = hyperplanes(K)
    v = is_linear_subclass(K, subclass, fam)
    if not v:
        raise MatroidError(f"not a linear subclass: {v.message}", witness=v.witness)

    def r(X: int) -> int:
        return K.rank(X) - (1 if fam.containing(X) & ~subclass == 0 else 0)

    return OracleMatroid(K.size, r, name=f"linear_subclass_projection({K.name})")
