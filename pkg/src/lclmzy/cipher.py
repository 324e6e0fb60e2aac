"""48-bit four-quarter Feistel block cipher with CBC chaining.

A block is four 12-bit quarters (l1, l2, r1, r2); the wire order is
l1 || l2 || r1 || r2 with bit 0 being the most significant bit of l1.
Each round applies the round function F twice, in parallel branches:

    (l1, l2, r1, r2) -> (r1, r2, l1 ^ F(r1, k), l2 ^ F(r2, k'))

and after the final round the quarters are rotated one position left.
F itself need not be injective (the trigram stage is 2-to-1); the Feistel
structure guarantees invertibility regardless.
"""

from __future__ import annotations

from typing import Callable, Iterable, NamedTuple, Sequence

from .errors import BadScheduleLength
from .sbox import SBox64
from .trigram import ZY_TABLE

# Fixed 12-position bit transposition used inside F: output bit i is input
# bit QF_MAP[i], positions counted from the most significant bit.
QF_MAP = (5, 2, 10, 6, 7, 4, 0, 1, 3, 8, 9, 11)

_QF_TABLE = tuple(
    sum(((w >> (11 - src)) & 1) << (11 - i) for i, src in enumerate(QF_MAP))
    for w in range(4096)
)


class Block48(NamedTuple):
    l1: int
    l2: int
    r1: int
    r2: int

    @classmethod
    def from_int(cls, v: int) -> "Block48":
        if not 0 <= v < 1 << 48:
            raise ValueError(f"block value must fit in 48 bits, got {v:#x}")
        return cls(v >> 36, (v >> 24) & 0xFFF, (v >> 12) & 0xFFF, v & 0xFFF)

    def to_int(self) -> int:
        return (self.l1 << 36) | (self.l2 << 24) | (self.r1 << 12) | self.r2


def qf_permute(w: int) -> int:
    """Apply the fixed 12-bit transposition."""
    if not 0 <= w < 4096:
        raise ValueError(f"input must fit in 12 bits, got {w}")
    return _QF_TABLE[w]


def round_function_f(w: int, subkey: int, s: SBox64, zy_enabled: bool = True) -> int:
    """Round function: key XOR, split substitution, bit transposition,
    trigram rule on both 6-bit halves (skipped when zy_enabled is false)."""
    t = (w ^ subkey) & 0xFFF
    table = s.table
    u = _QF_TABLE[(table[t >> 6] << 6) | table[t & 63]]
    if zy_enabled:
        u = (ZY_TABLE[u >> 6] << 6) | ZY_TABLE[u & 63]
    return u


def _check_schedule(schedule: Sequence[int]):
    if len(schedule) % 2 != 0:
        raise BadScheduleLength(f"schedule must hold two subkeys per round, got {len(schedule)}")


def feistel_encrypt_block(
    block: Block48, schedule: Sequence[int], s: SBox64, zy_enabled: bool = True
) -> Block48:
    """Run all rounds and the final-round quarter rotation."""
    _check_schedule(schedule)
    l1, l2, r1, r2 = block
    for j in range(0, len(schedule), 2):
        k1, k2 = schedule[j], schedule[j + 1]
        l1, l2, r1, r2 = (
            r1,
            r2,
            l1 ^ round_function_f(r1, k1, s, zy_enabled),
            l2 ^ round_function_f(r2, k2, s, zy_enabled),
        )
    if schedule:
        l1, l2, r1, r2 = l2, r1, r2, l1
    return Block48(l1, l2, r1, r2)


def feistel_decrypt_block(
    block: Block48, schedule: Sequence[int], s: SBox64, zy_enabled: bool = True
) -> Block48:
    """Exact inverse: undo the rotation, then unwind rounds in reverse order."""
    _check_schedule(schedule)
    l1, l2, r1, r2 = block
    if schedule:
        l1, l2, r1, r2 = r2, l1, l2, r1
    for j in range(len(schedule) - 2, -1, -2):
        k1, k2 = schedule[j], schedule[j + 1]
        l1, l2, r1, r2 = (
            r1 ^ round_function_f(l1, k1, s, zy_enabled),
            r2 ^ round_function_f(l2, k2, s, zy_enabled),
            l1,
            l2,
        )
    return Block48(l1, l2, r1, r2)


def as_bit_permutation(perm) -> tuple[int, ...]:
    """Validate a 48-entry bit permutation."""
    p = tuple(int(i) for i in perm)
    if len(p) != 48 or sorted(p) != list(range(48)):
        raise ValueError("outer permutation must be a permutation of 0..47")
    return p


def outer_permutation(block: Block48, perm, inverse: bool = False) -> Block48:
    """Keyed 48-bit permutation: forward output bit i = input bit perm[i]."""
    p = as_bit_permutation(perm)
    v = block.to_int()
    out = 0
    if inverse:
        for i, src in enumerate(p):
            out |= ((v >> (47 - i)) & 1) << (47 - src)
    else:
        for i, src in enumerate(p):
            out |= ((v >> (47 - src)) & 1) << (47 - i)
    return Block48.from_int(out)


def cbc_encrypt(
    blocks: Iterable[Block48], iv: int, encrypt_one: Callable[[Block48], Block48]
) -> list[Block48]:
    """Chain blocks: C0 = E(P0 ^ IV), Ci = E(Pi ^ C(i-1))."""
    prev = Block48.from_int(iv)
    out = []
    for p in blocks:
        mixed = Block48(p.l1 ^ prev.l1, p.l2 ^ prev.l2, p.r1 ^ prev.r1, p.r2 ^ prev.r2)
        prev = encrypt_one(mixed)
        out.append(prev)
    return out


def cbc_decrypt(
    blocks: Iterable[Block48], iv: int, decrypt_one: Callable[[Block48], Block48]
) -> list[Block48]:
    """Inverse chain: Pi = D(Ci) ^ C(i-1) with C(-1) = IV."""
    prev = Block48.from_int(iv)
    out = []
    for c in blocks:
        d = decrypt_one(c)
        out.append(Block48(d.l1 ^ prev.l1, d.l2 ^ prev.l2, d.r1 ^ prev.r1, d.r2 ^ prev.r2))
        prev = c
    return out
