"""Text formats for matroids and groups, and the ``show`` rendering.

A matroid file is line oriented with ``#`` comments::

    matroid U24
    uniform r=2 n=4

The header line is optional, so a single line works inline on the command
line. Supported bodies: ``uniform``, ``free``, ``zero``, ``graphic`` (1-based
vertices), ``linear`` and ``bases``.
"""

from __future__ import annotations

import hashlib
import os
import re

from .bitsets import elements_of, fmt, mask_of
from .core import (Matroid, MatroidError, explicit, free, graphic, linear, rank_zero, uniform)
from .fields import FieldMatrix, galois_field, is_prime
from .groups import FiniteGroup, GroupError, parse_cayley, parse_group_name

SHOW_TABLE_LIMIT = 12


class SpecError(ValueError):
    """Malformed input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _read(source: str) -> str:
    if "\n" not in source and os.path.isfile(source):
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    return source


def _lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


_KV = re.compile(r"(\w+)=(\S+)")


def _params(body: str, lineno: int, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> dict[str, str]:
    # sets={0,1},{0,2} contains no spaces, so whitespace splitting is safe
    out = {}
    for tok in body.split():
        m = _KV.fullmatch(tok)
        if not m:
            raise SpecError(f"expected key=value, got {tok!r}", lineno)
        key, val = m.groups()
        if key not in required and key not in optional:
            raise SpecError(f"unknown parameter {key!r}", lineno)
        if key in out:
            raise SpecError(f"repeated parameter {key!r}", lineno)
        out[key] = val
    missing = [k for k in required if k not in out]
    if missing:
        raise SpecError(f"missing parameter(s) {', '.join(missing)}", lineno)
    return out


def _int(params: dict[str, str], key: str, lineno: int, minimum: int = 0) -> int:
    try:
        v = int(params[key])
    except ValueError:
        raise SpecError(f"{key} must be an integer, got {params[key]!r}", lineno) from None
    if v < minimum:
        raise SpecError(f"{key} must be at least {minimum}", lineno)
    return v


def _parse_body(kind: str, body: str, lineno: int, name: str | None) -> Matroid:
    if kind == "uniform":
        p = _params(body, lineno, ("r", "n"))
        r, n = _int(p, "r", lineno), _int(p, "n", lineno)
        if r > n:
            raise SpecError(f"r > n ({r} > {n})", lineno)
        M = uniform(r, n)
    elif kind == "free":
        M = free(_int(_params(body, lineno, ("n",)), "n", lineno))
    elif kind == "zero":
        M = rank_zero(_int(_params(body, lineno, ("n",)), "n", lineno))
    elif kind == "graphic":
        p = _params(body, lineno, ("n",), ("edges",))
        nv = _int(p, "n", lineno, 1)
        edges = []
        for part in filter(None, p.get("edges", "").split(",")):
            m = re.fullmatch(r"(\d+)-(\d+)", part)
            if not m:
                raise SpecError(f"bad edge {part!r}; expected u-v", lineno)
            u, v = int(m.group(1)), int(m.group(2))
            if not (1 <= u <= nv and 1 <= v <= nv):
                raise SpecError(f"edge {part} uses a vertex outside 1..{nv}", lineno)
            edges.append((u - 1, v - 1))
        M = graphic(edges, nv=nv)
    elif kind == "linear":
        p = _params(body, lineno, ("p", "rows", "cols", "data"), ("k",))
        prime = _int(p, "p", lineno, 2)
        if not is_prime(prime):
            raise SpecError(f"p={prime} is not prime", lineno)
        k = _int(p, "k", lineno, 1) if "k" in p else 1
        rows, cols = _int(p, "rows", lineno, 0), _int(p, "cols", lineno, 0)
        try:
            data = [int(x) for x in p["data"].split(",") if x != ""]
        except ValueError:
            raise SpecError("data must be comma-separated integers", lineno) from None
        if len(data) != rows * cols:
            raise SpecError(f"data has {len(data)} entries, expected rows*cols = {rows * cols}", lineno)
        F = galois_field(prime, k)
        bad = [x for x in data if not 0 <= x < F.q]
        if bad:
            raise SpecError(f"entry {bad[0]} is not an element of GF({F.q})", lineno)
        A = FieldMatrix(F, [data[i * cols:(i + 1) * cols] for i in range(rows)]) if rows else \
            FieldMatrix.from_columns(F, [()] * cols, nrows=0)
        M = linear(A)
    elif kind == "bases":
        p = _params(body, lineno, ("rank", "sets"), ("n",))
        r = _int(p, "rank", lineno)
        if not re.fullmatch(r"\{[^{}]*\}(,\{[^{}]*\})*", p["sets"]):
            raise SpecError("sets must look like {0,1},{0,2}", lineno)
        sets = re.findall(r"\{([^{}]*)\}", p["sets"])
        bases = []
        for s in sets:
            try:
                els = [int(x) for x in s.split(",") if x != ""]
            except ValueError:
                raise SpecError(f"bad set {{{s}}}", lineno) from None
            if len(els) != r or len(set(els)) != r:
                raise SpecError(f"set {{{s}}} does not have {r} distinct elements", lineno)
            bases.append(mask_of(els))
        n = _int(p, "n", lineno) if "n" in p else None
        try:
            M = explicit(bases, n=n)
        except MatroidError as exc:
            raise SpecError(str(exc), lineno) from exc
    else:
        raise SpecError(f"unknown matroid kind {kind!r}", lineno)
    if name:
        M.name = name
    return M


def parse_matroid(source: str) -> Matroid:
    """Parse a matroid from a file path or inline text."""
    lines = _lines(_read(source))
    if not lines:
        raise SpecError("empty matroid description")
    name = None
    if lines[0][1].split()[0] == "matroid":
        parts = lines[0][1].split(None, 1)
        name = parts[1].strip() if len(parts) > 1 else None
        lines = lines[1:]
        if not lines:
            raise SpecError("missing matroid body after header", 1)
    if len(lines) > 1:
        raise SpecError("unexpected extra line", lines[1][0])
    lineno, text = lines[0]
    kind, _, body = text.partition(" ")
    return _parse_body(kind, body.strip(), lineno, name)


def parse_group(source: str) -> FiniteGroup:
    """A group name like ``Z2^2`` or ``S3``, or a Cayley-table file."""
    try:
        if os.path.isfile(source):
            with open(source, encoding="utf-8") as fh:
                return parse_cayley(fh.read())
        if "\n" in source:
            return parse_cayley(source)
        return parse_group_name(source)
    except (GroupError, ValueError) as exc:
        raise SpecError(f"group {source!r}: {exc}") from exc


def table_hash(M: Matroid) -> str:
    """sha256 of the rank table written as comma-separated decimals."""
    t = M.rank_table()
    return hashlib.sha256(",".join(map(str, t.tolist())).encode()).hexdigest()


def show_lines(M: Matroid) -> list[str]:
    out = [f"matroid {M.name}", f"ground size: {M.size}", f"rank: {M.full_rank}"]
    fam = M.circuits()
    out.append(f"circuits ({len(fam)}):")
    out.extend(f"  {fmt(c)}" for c in fam)
    if M.size <= SHOW_TABLE_LIMIT:
        out.append(f"rank table sha256: {table_hash(M)}")
    return out


def show_dict(M: Matroid) -> dict:
    d = {"name": M.name, "size": M.size, "rank": M.full_rank,
         "circuits": [elements_of(c) for c in M.circuits()]}
    if M.size <= SHOW_TABLE_LIMIT:
        d["rank_table_sha256"] = table_hash(M)
    return d
