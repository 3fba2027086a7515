"""Derived matroids of represented matroids.

For a representation ``A`` of ``M`` over a finite field, each circuit ``C``
has a kernel vector of ``A`` supported exactly on ``C``, unique up to scalar.
The linear matroid of those vectors, indexed by the circuits of ``M``, is a
matroid ``N`` on the circuits that is always star-satisfying, and ``M^N`` is
free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bitsets import elements_of, fmt
from .core import (LinearMatroid, Matroid, MatroidError, VerificationError, first_table_difference, linear,
                   same_table, truncate)
from .fields import FieldMatrix, nullspace_vector
from .lift import CircuitSpaceMatroid, LiftedMatroid, lift, satisfies_star


@dataclass
class Representation:
    matrix: FieldMatrix
    matroid: Matroid = field(default=None)

    def __post_init__(self):
        own = linear(self.matrix)
        if self.matroid is None:
            self.matroid = own
        elif self.matroid.size != own.size:
            raise MatroidError(f"matrix has {own.size} columns but the matroid has {self.matroid.size} elements")
        elif not same_table(self.matroid, own):
            X = first_table_difference(self.matroid, own)
            raise MatroidError(f"matrix does not represent {self.matroid.name}: ranks differ on {fmt(X)}",
                               witness=X)


def as_representation(A) -> Representation:
    return A if isinstance(A, Representation) else Representation(A)


@dataclass
class DerivedMatroid:
    representation: Representation
    vectors: list[tuple[int, ...]]
    space: CircuitSpaceMatroid

    @property
    def N(self) -> Matroid:
        return self.space.N

    @property
    def rank(self) -> int:
        return self.space.N.full_rank


def derived_matroid(A) -> DerivedMatroid:
    rep = as_representation(A)
    M = rep.matroid
    F = rep.matrix.field
    fam = M.circuits()
    vectors = []
    for C in fam:
        v = nullspace_vector(rep.matrix, elements_of(C))
        if v is None:
            raise VerificationError(f"no kernel vector supported on circuit {fmt(C)}", witness=C)
        vectors.append(v)
    Ap = FieldMatrix.from_columns(F, vectors, nrows=M.size)
    N = LinearMatroid(Ap, name=f"derived({M.name})")
    if N.full_rank != M.corank:
        raise VerificationError(f"derived rank {N.full_rank} differs from corank {M.corank}")
    if N.loops():
        raise VerificationError("derived matroid has a loop")
    return DerivedMatroid(rep, vectors, CircuitSpaceMatroid(fam, N))


def free_lift_from_derived(A) -> LiftedMatroid:
    """Lift by the derived matroid; the result is checked to be free."""
    D = derived_matroid(A)
    M = D.representation.matroid
    v = satisfies_star(M, D.space, max_circuits=None)
    if not v:
        raise VerificationError(f"derived matroid is not star-satisfying: {v.message}", witness=v.witness)
    L = lift(M, D.space, check=False)
    if L.full_rank != M.size:
        raise VerificationError(f"lift has rank {L.full_rank}, not {M.size}")
    for X in range(1 << M.size):
        if L.rank(X) != X.bit_count():
            raise VerificationError(f"lift is not free: {fmt(X)} is dependent", witness=X)
    return L


def representable_rank_k_N(A, k: int) -> CircuitSpaceMatroid:
    """A star-satisfying rank-``k`` matroid on the circuits: a truncation of the derived matroid."""
    D = derived_matroid(A)
    M = D.representation.matroid
    if not 1 <= k <= M.corank:
        raise MatroidError(f"k must lie in 1..{M.corank}, got {k}")
    N = truncate(D.N, M.corank - k)
    space = CircuitSpaceMatroid(D.space.family, N)
    v = satisfies_star(M, space, max_circuits=None)
    if not v:
        raise VerificationError(f"truncated derived matroid fails the star condition: {v.message}",
                                witness=v.witness)
    return space
