"""Dynamic 64-entry S-box built from chaotic output.

Construction stages: collect the first 64 distinct 6-bit values from the
chaotic stream (first occurrence wins), scramble them with a 64-entry
position sequence, then read the result through the standard 8x8 zigzag
traversal (top-left start, first step to the right).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chaos import to_integer_sequence
from .errors import BadPermutationLength, SequenceExhausted, ValueOutOfRange


def _zigzag_order() -> tuple[int, ...]:
    # Visit order of an 8x8 row-major grid along anti-diagonals, alternating
    # direction, starting top-left and moving right first.
    order = []
    for s in range(15):
        cells = [(r, s - r) for r in range(8) if 0 <= s - r < 8]
        cells.sort(key=lambda rc: -rc[0] if s % 2 == 0 else rc[0])
        order.extend(r * 8 + c for r, c in cells)
    return tuple(order)


ZIGZAG_ORDER = _zigzag_order()


@dataclass(frozen=True)
class SBox64:
    """A bijective substitution table on 6-bit values."""

    table: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.table) != list(range(64)):
            raise ValueError("S-box table must be a permutation of 0..63")


def collect_unique_mod64(values, start: int = 0) -> tuple[SBox64, int]:
    """Scan reals from ``start``, mapping each to a 6-bit integer, and keep
    first occurrences until 64 distinct values are found.

    Returns the resulting table and how many inputs were consumed, so the
    caller can advance its stream cursor.
    """
    tail = np.asarray(values, dtype=np.float64)[start:]
    ints = to_integer_sequence(tail, 64)
    seen = [False] * 64
    table = []
    for idx, v in enumerate(ints.tolist()):
        if not seen[v]:
            seen[v] = True
            table.append(v)
            if len(table) == 64:
                return SBox64(tuple(table)), idx + 1
    raise SequenceExhausted(
        f"stream ended after {ints.size} values with only {len(table)} distinct entries"
    )


def scramble(s1: SBox64, t1) -> SBox64:
    """Reorder the table through a position sequence: out[i] = in[t1[i]]."""
    perm = np.asarray(t1, dtype=np.int64)
    if perm.size != 64 or sorted(perm.tolist()) != list(range(64)):
        raise BadPermutationLength("scramble requires a permutation of 0..63")
    return SBox64(tuple(s1.table[i] for i in perm.tolist()))


def zigzag_scan(s2: SBox64) -> SBox64:
    """Read the table as an 8x8 row-major grid in zigzag order."""
    return SBox64(tuple(s2.table[i] for i in ZIGZAG_ORDER))


def substitute(s: SBox64, v: int) -> int:
    """Look up one 6-bit value."""
    if not 0 <= v < 64:
        raise ValueOutOfRange(f"substitution input must be in 0..63, got {v}")
    return s.table[v]


def build_sbox(values, start: int, t1) -> tuple[SBox64, int]:
    """Full construction: dedup scan, position scramble, zigzag traversal."""
    s1, consumed = collect_unique_mod64(values, start)
    return zigzag_scan(scramble(s1, t1)), consumed


def format_table(s: SBox64) -> str:
    """Render the table as 8 rows of 8 decimal values (debug aid)."""
    rows = [s.table[r * 8 : r * 8 + 8] for r in range(8)]
    return "\n".join(" ".join(f"{v:2d}" for v in row) for row in rows)
