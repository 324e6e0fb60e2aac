"""Eight-trigrams hexagram algebra and the derived bit obfuscation.

A hexagram is a 6-bit word whose most significant bit is the top line
(1 = yang, 0 = yin).  Three derived hexagrams exist for a base ("ben")
hexagram:

* ``zong``: the hexagram turned upside down (bit reversal),
* ``cuo``:  every line flipped (bitwise complement),
* ``hu``:   lines 5,4,3 stacked as the upper trigram over lines 4,3,2.

The encryption rule combines two of them: ``zy_encrypt(h) = hu(h) XOR cuo(h)``.
It is a 2-to-1 map (h and its complement share an image), so it is only used
where invertibility is not needed: inside the Feistel round function and the
round-key schedule.

The obfuscation layer works on 3-bit groups: each group is XORed with a key
digit (0..7) and the result is replaced by its complementary trigram, which
collapses to ``NOT(data3 XOR key3)``.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidKeyDigit, LengthNotDivisibleBy3

# Trigram names and their 3-bit codes, top line first.
TRIGRAMS = {
    "Qian": 0b111,
    "Xun": 0b110,
    "Li": 0b101,
    "Gen": 0b100,
    "Dui": 0b011,
    "Kan": 0b010,
    "Zhen": 0b001,
    "Kun": 0b000,
}
TRIGRAM_NAMES = {bits: name for name, bits in TRIGRAMS.items()}


def hu(h: int) -> int:
    """Mutual hexagram: lines (6..1) = (l6 l5 l4 l3 l2 l1) -> (l5 l4 l3 l4 l3 l2)."""
    return (((h >> 2) & 0b111) << 3) | ((h >> 1) & 0b111)


def zong(h: int) -> int:
    """Reversed hexagram: the 6-bit pattern read bottom line first."""
    r = 0
    for _ in range(6):
        r = (r << 1) | (h & 1)
        h >>= 1
    return r


def cuo(h: int) -> int:
    """Complementary hexagram: every yin line becomes yang and vice versa."""
    return h ^ 0b111111


def zy_encrypt(h: int) -> int:
    """Eight-trigrams encryption rule: hu(h) XOR cuo(h)."""
    return hu(h) ^ cuo(h)


# zy_encrypt as a lookup table for the cipher hot path.
ZY_TABLE = tuple(zy_encrypt(h) for h in range(64))


def _key_values(key_digits: str) -> np.ndarray:
    if not key_digits:
        raise InvalidKeyDigit("obfuscation key must not be empty")
    if any(c not in "01234567" for c in key_digits):
        raise InvalidKeyDigit(f"obfuscation key digits must be 0..7, got {key_digits!r}")
    return np.frombuffer(key_digits.encode("ascii"), dtype=np.uint8) - ord("0")


def _group_values(data) -> np.ndarray:
    bits = np.asarray(data, dtype=np.uint8)
    if bits.ndim != 1 or bits.size % 3 != 0:
        raise LengthNotDivisibleBy3(f"bit count {bits.size} is not a multiple of 3")
    groups = bits.reshape(-1, 3)
    return groups[:, 0] * 4 + groups[:, 1] * 2 + groups[:, 2]


def _values_to_bits(values: np.ndarray) -> np.ndarray:
    out = np.empty((values.size, 3), dtype=np.uint8)
    out[:, 0] = (values >> 2) & 1
    out[:, 1] = (values >> 1) & 1
    out[:, 2] = values & 1
    return out.reshape(-1)


def obfuscate_bits(data, key_digits: str) -> np.ndarray:
    """Obfuscate a bit stream: per 3-bit group, NOT(data3 XOR key3).

    ``data`` is a sequence of 0/1 values whose length is a multiple of 3;
    ``key_digits`` is a nonempty string of digits 0..7, cycled over the groups.
    """
    values = _group_values(data)
    keys = np.resize(_key_values(key_digits), values.size)
    return _values_to_bits((values ^ keys) ^ 7)


def deobfuscate_bits(data, key_digits: str) -> np.ndarray:
    """Exact inverse of :func:`obfuscate_bits`: per group, (NOT data3) XOR key3."""
    values = _group_values(data)
    keys = np.resize(_key_values(key_digits), values.size)
    return _values_to_bits((values ^ 7) ^ keys)
