"""Finite fields GF(p^k), matrices over them, and projective point sets.

Field elements are plain ints in ``range(q)``; the base-``p`` digits of an
element are its polynomial coefficients, least significant digit first.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

_TABLE_LIMIT = 256


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m`` (coefficients low to high)."""
    a = list(a)
    dm = len(m) - 1
    for top in range(len(a) - 1, dm - 1, -1):
        c = a[top] % p
        if c:
            shift = top - dm
            for t in range(dm + 1):
                a[shift + t] = (a[shift + t] - c * m[t]) % p
    out = [x % p for x in a[:dm]]
    return out + [0] * (dm - len(out))


def _monic_polys(p: int, d: int):
    """Monic polynomials of degree ``d`` ordered by the integer of their lower coefficients."""
    for code in range(p ** d):
        coeffs = []
        for _ in range(d):
            coeffs.append(code % p)
            code //= p
        yield coeffs + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree at most ``deg/2``."""
    k = len(poly) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    for d in range(1, k // 2 + 1):
        for f in _monic_polys(p, d):
            if not any(_poly_mod(list(poly), f, p)):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Least monic irreducible of degree ``k`` over GF(p), ordered as ``sum c_t p**t`` over lower coefficients."""
    for f in _monic_polys(p, k):
        if is_irreducible(f, p):
            return tuple(f)
    raise ValueError(f"no irreducible polynomial of degree {k} over GF({p})")


class GF:
    """The field GF(p^k) realised as GF(p)[x] / (modulus)."""

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be at least 1")
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = least_irreducible(p, k)
        self._add = self._mul = None
        if self.q <= _TABLE_LIMIT:
            q = self.q
            self._add = [[self._add_raw(a, b) for b in range(q)] for a in range(q)]
            self._mul = [[self._mul_raw(a, b) for b in range(q)] for a in range(q)]
        self._inv = {}

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self) -> int:
        return hash((self.p, self.k))

    def to_coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        a = 0
        for c in reversed(list(coeffs)):
            a = a * self.p + (c % self.p)
        return a

    def _add_raw(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return self.from_coeffs([x + y for x, y in zip(self.to_coeffs(a), self.to_coeffs(b))])

    def _mul_raw(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        return self.from_coeffs(_poly_mod(prod, list(self.modulus), self.p))

    def _check(self, a: int) -> None:
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of {self!r}")

    def add(self, a: int, b: int) -> int:
        if self._add is not None:
            return self._add[a][b]
        self._check(a)
        self._check(b)
        return self._add_raw(a, b)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self.from_coeffs([-c for c in self.to_coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._mul is not None:
            return self._mul[a][b]
        self._check(a)
        self._check(b)
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self!r}")
        if a not in self._inv:
            # a^(q-2) by square-and-multiply
            result, base, e = 1, a, self.q - 2
            while e:
                if e & 1:
                    result = self.mul(result, base)
                base = self.mul(base, base)
                e >>= 1
            self._inv[a] = result
        return self._inv[a]

    def elements(self) -> range:
        return range(self.q)


@lru_cache(maxsize=None)
def galois_field(p: int, k: int = 1) -> GF:
    return GF(p, k)


class FieldMatrix:
    """A dense matrix over a finite field, stored as a tuple of row tuples."""

    def __init__(self, F: GF, rows: Iterable[Iterable[int]]):
        self.field = F
        self.rows = tuple(tuple(int(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")
            for x in r:
                if not 0 <= x < F.q:
                    raise ValueError(f"entry {x} is not an element of {F!r}")

    @classmethod
    def from_columns(cls, F: GF, cols: Sequence[Sequence[int]], nrows: int | None = None) -> "FieldMatrix":
        if nrows is None:
            nrows = len(cols[0]) if cols else 0
        return cls(F, [[c[i] for c in cols] for i in range(nrows)])

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def __repr__(self) -> str:
        return f"FieldMatrix({self.field!r}, {self.nrows}x{self.ncols})"


def row_reduce(F: GF, rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and the pivot columns."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        s = F.inv(rows[r][c])
        rows[r] = [F.mul(s, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def matrix_rank(A: FieldMatrix, cols: Iterable[int] | None = None) -> int:
    """Rank of the selected columns of ``A`` (all columns by default)."""
    sel = list(range(A.ncols)) if cols is None else list(cols)
    for j in sel:
        if not 0 <= j < A.ncols:
            raise IndexError(f"column {j} out of range")
    if not sel or A.nrows == 0:
        return 0
    sub = [[row[j] for j in sel] for row in A.rows]
    return len(row_reduce(A.field, sub)[1])


def kernel_basis(F: GF, rows: list[list[int]], ncols: int) -> list[list[int]]:
    red, pivots = row_reduce(F, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, pc in zip(red, pivots):
            v[pc] = F.neg(r[f])
        basis.append(v)
    return basis


def normalize_projective(F: GF, v: Sequence[int]) -> tuple[int, ...]:
    """Scale ``v`` so its lowest-index nonzero coordinate is 1."""
    lead = next((x for x in v if x), None)
    if lead is None:
        raise ValueError("the zero vector has no projective point")
    s = F.inv(lead)
    return tuple(F.mul(s, x) for x in v)


def nullspace_vector(A: FieldMatrix, support: Iterable[int]) -> tuple[int, ...] | None:
    """A kernel vector of ``A`` whose nonzero entries are exactly ``support``.

    The result is scaled so its lowest-index nonzero entry is 1. When several
    such vectors exist, the first in the enumeration order of kernel coordinates
    is returned. ``None`` when no kernel vector has exactly that support.
    """
    sup = sorted(set(support))
    if not sup:
        raise ValueError("support must be nonempty")
    for j in sup:
        if not 0 <= j < A.ncols:
            raise IndexError(f"column {j} out of range for {A!r}")
    F = A.field
    sub = [[row[j] for j in sup] for row in A.rows]
    if not sub:
        sub = [[0] * len(sup)]
    basis = kernel_basis(F, sub, len(sup))
    if not basis:
        return None
    found = None
    for coeffs in product(range(F.q), repeat=len(basis)):
        lead = next((c for c in coeffs if c), None)
        if lead != 1:
            continue
        v = [0] * len(sup)
        for c, b in zip(coeffs, basis):
            if c:
                v = [F.add(x, F.mul(c, y)) for x, y in zip(v, b)]
        if all(v):
            found = v
            break
    if found is None:
        return None
    found = normalize_projective(F, found)
    out = [0] * A.ncols
    for j, x in zip(sup, found):
        out[j] = x
    for row in A.rows:
        acc = 0
        for a, x in zip(row, out):
            acc = F.add(acc, F.mul(a, x))
        assert acc == 0, "nullspace vector failed re-verification"
    return tuple(out)


def _vector_code(v: Sequence[int], q: int) -> int:
    code = 0
    for x in reversed(v):
        code = code * q + x
    return code


@lru_cache(maxsize=None)
def projective_points(m: int, F: GF) -> FieldMatrix:
    """Columns are canonical representatives of the points of PG(m-1, q).

    Each column has lowest-index nonzero coordinate 1. Columns are ordered by
    the integer ``sum v_t q**t`` (first coordinate least significant), so
    PG(1,2) comes out as (1,0), (0,1), (1,1).
    """
    if m < 1:
        raise ValueError("dimension must be at least 1")
    pts = []
    for v in product(range(F.q), repeat=m):
        lead = next((x for x in v if x), None)
        if lead == 1:
            pts.append(v)
    pts.sort(key=lambda v: _vector_code(v, F.q))
    return FieldMatrix.from_columns(F, pts, nrows=m)


def point_index(m: int, F: GF, v: Sequence[int]) -> int:
    return _point_lookup(m, F)[normalize_projective(F, v)]


@lru_cache(maxsize=None)
def _point_lookup(m: int, F: GF) -> dict:
    return {c: i for i, c in enumerate(projective_points(m, F).columns())}
