"""Finite groups addressed by element index, identity at index 0.

Abelian groups are direct sums of cyclic groups with elements as coordinate
tuples; anything else comes in as a Cayley table.
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Iterable, Sequence


class GroupError(ValueError):
    pass


class FiniteGroup:
    """Index-addressed group given by a multiplication table."""

    name = "group"

    def __init__(self, table: Sequence[Sequence[int]], name: str | None = None, labels=None):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        if name is not None:
            self.name = name
        self.labels = list(labels) if labels is not None else list(range(self.order))
        self._validate()
        self.identity = 0
        self._inverse = tuple(next(b for b in range(self.order) if self.table[a][b] == 0)
                              for a in range(self.order))

    def _validate(self) -> None:
        m = self.order
        if m == 0:
            raise GroupError("a group must be nonempty")
        full = set(range(m))
        for i, row in enumerate(self.table):
            if len(row) != m or set(row) != full:
                raise GroupError(f"row {i} is not a permutation of the elements")
        for j in range(m):
            if {self.table[i][j] for i in range(m)} != full:
                raise GroupError(f"column {j} is not a permutation of the elements")
        for a in range(m):
            if self.table[0][a] != a or self.table[a][0] != a:
                raise GroupError("index 0 must be the identity")
        for a, b, c in product(range(m), repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise GroupError(f"associativity fails for ({a}, {b}, {c})")

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def compose(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self._inverse[a]

    def power(self, a: int, t: int) -> int:
        if t < 0:
            a, t = self.inverse(a), -t
        out = 0
        for _ in range(t):
            out = self.table[out][a]
        return out

    def element_order(self, a: int) -> int:
        t, x = 1, a
        while x != 0:
            x = self.table[x][a]
            t += 1
        return t

    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a]
                   for a in range(self.order) for b in range(a))

    def generated_subgroup(self, gens: Iterable[int]) -> frozenset[int]:
        """Saturate ``gens`` together with the identity under products and inverses."""
        seen = {0}
        frontier = [0]
        gens = list(gens)
        gens += [self.inverse(g) for g in gens]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return frozenset(seen)

    def is_subgroup(self, subset: Iterable[int]) -> bool:
        s = set(subset)
        if 0 not in s:
            return False
        return all(self.table[a][self.inverse(b)] in s for a in s for b in s)

    def label(self, a: int) -> str:
        return str(self.labels[a])


class AbelianGroup(FiniteGroup):
    """Z_{d_1} + ... + Z_{d_k}; element index is the mixed-radix code, first coordinate most significant."""

    def __init__(self, orders: Sequence[int], name: str | None = None):
        orders = tuple(int(d) for d in orders)
        if any(d < 2 for d in orders):
            raise GroupError("cyclic factors must have order at least 2")
        self.orders = orders
        self.coords = list(product(*(range(d) for d in orders)))
        index = {c: i for i, c in enumerate(self.coords)}
        table = [[index[tuple((x + y) % d for x, y, d in zip(a, b, orders))] for b in self.coords]
                 for a in self.coords]
        if name is None:
            name = "x".join(f"Z{d}" for d in orders) if orders else "Z1"
        self._index = index
        super().__init__(table, name=name, labels=[str(c[0]) if len(c) == 1 else "(" + ",".join(map(str, c)) + ")"
                                              for c in self.coords])

    def _validate(self) -> None:
        # constructed from modular addition; only the identity convention needs checking
        if self.table[0][0] != 0:
            raise GroupError("index 0 must be the identity")

    def coordinates(self, a: int) -> tuple[int, ...]:
        return self.coords[a]

    def index_of(self, coords: Sequence[int]) -> int:
        return self._index[tuple(int(c) % d for c, d in zip(coords, self.orders))]


def elementary_abelian(p: int, j: int) -> AbelianGroup:
    return AbelianGroup([p] * j, name=f"Z{p}^{j}")


def symmetric_group(k: int) -> FiniteGroup:
    """S_k as a Cayley table; permutations listed lexicographically so the identity is first."""
    perms = list(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    # (a*b)(x) = a(b(x))
    table = [[index[tuple(a[b[x]] for x in range(k))] for b in perms] for a in perms]
    return FiniteGroup(table, name=f"S{k}", labels=["".join(map(str, p)) for p in perms])


def parse_group_name(name: str) -> FiniteGroup:
    """Inline names: ``Z4``, ``Z2xZ2``, ``Z2^2``, ``Z2xZ4``, ``S3``, ``trivial``."""
    s = name.strip()
    if s.lower() in ("trivial", "z1", "1"):
        return FiniteGroup([[0]], name="trivial")
    if s.upper().startswith("S") and s[1:].isdigit():
        return symmetric_group(int(s[1:]))
    orders = []
    for part in s.split("x"):
        part = part.strip()
        if not part.upper().startswith("Z"):
            raise GroupError(f"cannot parse group name {name!r}")
        body = part[1:]
        if "^" in body:
            base, exp = body.split("^")
            orders += [int(base)] * int(exp)
        else:
            orders.append(int(body))
    if len(orders) == 1 and orders[0] == 1:
        return FiniteGroup([[0]], name="trivial")
    return AbelianGroup(orders, name=s)


def parse_cayley(text: str) -> FiniteGroup:
    """Parse ``group <name>`` / ``order m`` / ``table`` followed by ``m`` rows of indices."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    name, order, rows = None, None, []
    in_table = False
    for line in lines:
        if in_table:
            rows.append([int(x) for x in line.split()])
            continue
        head, _, rest = line.partition(" ")
        if head == "group":
            name = rest.strip()
        elif head == "order":
            order = int(rest)
        elif head == "table":
            in_table = True
        else:
            raise GroupError(f"unexpected line {line!r}")
    if order is None or len(rows) != order:
        raise GroupError(f"expected {order} table rows, got {len(rows)}")
    return FiniteGroup(rows, name=name or "group")
