"""Bitset helpers. A subset of ``{0, ..., n-1}`` is an ``int`` whose bit ``i`` marks element ``i``."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator

import numpy as np


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def elements_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, in decreasing integer order, ending with 0."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def masks_of_size(n: int, k: int) -> list[int]:
    return sorted(mask_of(c) for c in combinations(range(n), k))


def fmt(mask: int) -> str:
    return "{" + ",".join(str(e) for e in elements_of(mask)) + "}"


def popcount_table(n: int) -> np.ndarray:
    """``pc[X] = |X|`` for every ``X`` below ``2**n``."""
    pc = np.zeros(1 << n, dtype=np.int16)
    for b in range(n):
        step = 1 << b
        view = pc.reshape(-1, 2, step)
        view[:, 1, :] += 1
    return pc


def superset_or(flags: np.ndarray, n: int) -> np.ndarray:
    """Propagate boolean flags upward: ``out[X]`` is true iff some ``Y <= X`` is flagged."""
    out = flags.copy()
    for b in range(n):
        step = 1 << b
        view = out.reshape(-1, 2, step)
        view[:, 1, :] |= view[:, 0, :]
    return out


def subset_or(flags: np.ndarray, n: int) -> np.ndarray:
    """Propagate boolean flags downward: ``out[X]`` is true iff some ``Y >= X`` is flagged."""
    out = flags.copy()
    for b in range(n):
        step = 1 << b
        view = out.reshape(-1, 2, step)
        view[:, 0, :] |= view[:, 1, :]
    return out


def subset_max(values: np.ndarray, n: int) -> np.ndarray:
    """``out[X] = max(values[Y] for Y <= X)``."""
    out = values.copy()
    for b in range(n):
        step = 1 << b
        view = out.reshape(-1, 2, step)
        np.maximum(view[:, 1, :], view[:, 0, :], out=view[:, 1, :])
    return out


def contained_family_masks(n: int, members: list[int]) -> list[int]:
    """For every ``X`` below ``2**n``, the bitset of indices ``i`` with ``members[i] <= X``.

    Uses a word-packed subset-sum transform; suitable up to ``n`` around 20.
    """
    size = 1 << n
    words = max(1, (len(members) + 63) // 64)
    table = np.zeros((size, words), dtype=np.uint64)
    for i, m in enumerate(members):
        table[m, i // 64] |= np.uint64(1) << np.uint64(i % 64)
    for b in range(n):
        step = 1 << b
        view = table.reshape(-1, 2, step, words)
        view[:, 1] |= view[:, 0]
    raw = table.tobytes()
    stride = 8 * words
    return [int.from_bytes(raw[i * stride:(i + 1) * stride], "little") for i in range(size)]
