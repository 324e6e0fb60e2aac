"""Key material: digest-derived initial values, round-key schedule, IV.

The cryptosystem is plaintext-keyed: the obfuscated channel data is summed,
the decimal sum is hashed with SHA-256, and the 32 digest bytes perturb the
base initial values of the chaotic map.  A receiver therefore needs the
digest (carried in the key bundle) to regenerate the keystream.

The round-key schedule turns a hexadecimal master key into 12-bit subkeys:
hex digits become bits (MSB first), the bits are scrambled by a chaotic
position sequence, every 6-bit group passes through the eight-trigrams rule,
and the stream is cut into 12-bit words.  Each round consumes two subkeys,
and each subkey supplies 6 hex digits of master key, so the key length is
6 hex digits per round (48 for the default 8 rounds).
"""

from __future__ import annotations

import hashlib
import math
import secrets
from dataclasses import dataclass, replace

import numpy as np

from . import trigram
from .chaos import ChaosParams
from .errors import (
    BadKeyLength,
    BadPermutationLength,
    InsufficientSequence,
    InvalidHexKey,
    InvalidKeyDigit,
)

HEX_DIGITS_PER_ROUND = 6
SUBKEY_BITS = 12
ZERO_DIGEST = bytes(32)

_ZY = np.asarray(trigram.ZY_TABLE, dtype=np.int64)


def initial_values_from_digest(
    digest: bytes, base: tuple[float, float, float]
) -> tuple[float, float, float]:
    """Perturb base initial values with a 32-byte digest.

    Component i uses the XOR fold of digest bytes 8i..8i+7 plus the mean of
    all 32 bytes, scaled into [0, 1); the sum is reduced mod 1 so the result
    stays in a uniform, documented domain.
    """
    if len(digest) != 32:
        raise ValueError(f"digest must be 32 bytes, got {len(digest)}")
    mean = sum(digest) / 32.0
    out = []
    for i, base_value in enumerate(base):
        fold = 0
        for b in digest[8 * i : 8 * i + 8]:
            fold ^= b
        perturbation = math.fmod((fold + mean) / 256.0, 1.0)
        out.append((base_value + perturbation) % 1.0)
    return tuple(out)


def derive_initial_values(
    total: int, base: tuple[float, float, float]
) -> tuple[float, float, float, bytes]:
    """Hash a nonnegative decimal sum (as its ASCII digits) and perturb ``base``.

    Returns the three perturbed initial values and the digest itself.
    """
    if total < 0:
        raise ValueError(f"plaintext sum must be nonnegative, got {total}")
    digest = hashlib.sha256(str(total).encode("ascii")).digest()
    return (*initial_values_from_digest(digest, base), digest)


def build_round_keys(hex_key: str, t2, rounds: int, zy_enabled: bool = True) -> tuple[int, ...]:
    """Expand a hex master key into 2*rounds 12-bit subkeys.

    ``t2`` must be a permutation of the key's bit positions (4 bits per hex
    digit); it scrambles the bit stream before the 6-bit trigram stage.
    """
    if rounds < 1:
        raise BadKeyLength(f"round count must be >= 1, got {rounds}")
    if len(hex_key) != HEX_DIGITS_PER_ROUND * rounds:
        raise BadKeyLength(
            f"hex key must have {HEX_DIGITS_PER_ROUND * rounds} digits for "
            f"{rounds} rounds, got {len(hex_key)}"
        )
    try:
        nibbles = [int(c, 16) for c in hex_key]
    except ValueError:
        raise InvalidHexKey(f"key contains a non-hexadecimal character: {hex_key!r}") from None

    bits = np.empty(4 * len(nibbles), dtype=np.int64)
    for i, n in enumerate(nibbles):
        bits[4 * i] = (n >> 3) & 1
        bits[4 * i + 1] = (n >> 2) & 1
        bits[4 * i + 2] = (n >> 1) & 1
        bits[4 * i + 3] = n & 1

    perm = np.asarray(t2, dtype=np.int64)
    if perm.size != bits.size:
        raise BadPermutationLength(
            f"key scramble needs a permutation of length {bits.size}, got {perm.size}"
        )
    if not np.array_equal(np.sort(perm), np.arange(bits.size)):
        raise BadPermutationLength("key scramble sequence is not a permutation")
    scrambled = bits[perm]

    groups = scrambled.reshape(-1, 6)
    values = (
        groups[:, 0] * 32 + groups[:, 1] * 16 + groups[:, 2] * 8
        + groups[:, 3] * 4 + groups[:, 4] * 2 + groups[:, 5]
    )
    if zy_enabled:
        values = _ZY[values]
    pairs = values.reshape(-1, 2)
    subkeys = pairs[:, 0] * 64 + pairs[:, 1]
    return tuple(int(k) for k in subkeys)


def derive_iv(z_values, offset: int = 0) -> int:
    """Big-endian 48-bit IV from six consecutive mod-256 integers."""
    arr = np.asarray(z_values, dtype=np.int64)
    if offset < 0 or offset + 6 > arr.size:
        raise InsufficientSequence(
            f"need 6 integers at offset {offset}, sequence has {arr.size}"
        )
    iv = 0
    for v in arr[offset : offset + 6].tolist():
        if not 0 <= v < 256:
            raise ValueError(f"IV source values must be bytes, got {v}")
        iv = (iv << 8) | v
    return iv


@dataclass(frozen=True)
class KeyBundle:
    """Everything a receiver needs to decrypt one image.

    The per-channel digests are filled in during encryption; all-zero
    digests mark a bundle that has not encrypted anything yet.
    """

    hex_key: str
    digit_key: str
    a: float = 1.0
    b: float = 1.99
    x1: float = 0.2
    x2: float = 0.4
    x3: float = 0.1
    rounds: int = 8
    width: int = 240
    height: int = 240
    zy_enabled: bool = True
    digest_r: bytes = ZERO_DIGEST
    digest_g: bytes = ZERO_DIGEST
    digest_b: bytes = ZERO_DIGEST

    def __post_init__(self):
        if self.rounds < 1:
            raise BadKeyLength(f"round count must be >= 1, got {self.rounds}")
        if len(self.hex_key) != HEX_DIGITS_PER_ROUND * self.rounds:
            raise BadKeyLength(
                f"hex key must have {HEX_DIGITS_PER_ROUND * self.rounds} digits "
                f"for {self.rounds} rounds, got {len(self.hex_key)}"
            )
        if any(c not in "0123456789abcdefABCDEF" for c in self.hex_key):
            raise InvalidHexKey(f"non-hexadecimal character in key: {self.hex_key!r}")
        if not self.digit_key or any(c not in "01234567" for c in self.digit_key):
            raise InvalidKeyDigit(f"digit key must be nonempty digits 0..7: {self.digit_key!r}")
        if self.width < 1 or self.height < 1:
            raise ValueError(f"dimensions must be positive, got {self.width}x{self.height}")
        for name in ("digest_r", "digest_g", "digest_b"):
            if len(getattr(self, name)) != 32:
                raise ValueError(f"{name} must be 32 bytes")

    @property
    def params(self) -> ChaosParams:
        return ChaosParams(self.a, self.b)

    @property
    def base(self) -> tuple[float, float, float]:
        return (self.x1, self.x2, self.x3)

    @property
    def has_digests(self) -> bool:
        return ZERO_DIGEST not in (self.digest_r, self.digest_g, self.digest_b)

    def digest_for(self, channel: str) -> bytes:
        return {"r": self.digest_r, "g": self.digest_g, "b": self.digest_b}[channel]

    def with_digests(self, digest_r: bytes, digest_g: bytes, digest_b: bytes) -> "KeyBundle":
        return replace(self, digest_r=digest_r, digest_g=digest_g, digest_b=digest_b)


def fresh_bundle(
    rounds: int = 8,
    zy_enabled: bool = True,
    digit_key_length: int = 16,
    width: int = 240,
    height: int = 240,
) -> KeyBundle:
    """Random hex and digit keys from the OS entropy source, default map setup."""
    hex_key = "".join(secrets.choice("0123456789abcdef") for _ in range(HEX_DIGITS_PER_ROUND * rounds))
    digit_key = "".join(secrets.choice("01234567") for _ in range(digit_key_length))
    return KeyBundle(
        hex_key=hex_key,
        digit_key=digit_key,
        rounds=rounds,
        zy_enabled=zy_enabled,
        width=width,
        height=height,
    )
