"""On-disk formats: PPM images, raw RGB, cipher images, key bundles.

The key-bundle file is line-oriented UTF-8: a magic first line ``LCLMZY 1``
followed by one ``key = value`` pair per line.  Floats are written in
shortest round-trip decimal so parse(serialize(b)) reproduces the exact
binary64 values.  The cipher-image file is binary: an 8-byte magic, two
big-endian 32-bit dimensions, then the R, G and B payloads back to back.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import BadLength, ParseError
from .keymat import KeyBundle
from .pipeline import CipherImage, Raster

BUNDLE_MAGIC = "LCLMZY 1"
CIPHER_MAGIC = b"LCLMZY\x00\x01"

_BUNDLE_KEYS = (
    "a", "b", "x1", "x2", "x3", "rounds", "zy", "width", "height",
    "hexkey", "digitkey", "digest_r", "digest_g", "digest_b",
)


# PPM (P6, maxval 255) --------------------------------------------------------

def read_ppm(path) -> Raster:
    data = Path(path).read_bytes()
    tokens = []
    i = 0
    while len(tokens) < 4:
        if i >= len(data):
            raise ParseError("PPM header truncated")
        c = data[i : i + 1]
        if c.isspace():
            i += 1
        elif c == b"#":
            while i < len(data) and data[i : i + 1] != b"\n":
                i += 1
        else:
            start = i
            while i < len(data) and not data[i : i + 1].isspace():
                i += 1
            tokens.append(data[start:i])
    if tokens[0] != b"P6":
        raise ParseError(f"not a binary PPM file: magic {tokens[0]!r}")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise ParseError("PPM header fields must be integers") from None
    if maxval != 255:
        raise ParseError(f"only maxval 255 is supported, got {maxval}")
    i += 1  # single whitespace byte after maxval
    payload = data[i : i + width * height * 3]
    if len(payload) != width * height * 3:
        raise BadLength(
            f"PPM payload holds {len(payload)} bytes, need {width * height * 3}"
        )
    rgb = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
    return Raster.from_array(rgb)


def write_ppm(path, img: Raster):
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + img.to_array().tobytes())


# Raw interleaved RGB ---------------------------------------------------------

def read_raw_rgb(path, width: int, height: int) -> Raster:
    data = Path(path).read_bytes()
    if len(data) != width * height * 3:
        raise BadLength(f"raw RGB file holds {len(data)} bytes, need {width * height * 3}")
    return Raster.from_array(np.frombuffer(data, dtype=np.uint8).reshape(height, width, 3))


def write_raw_rgb(path, img: Raster):
    Path(path).write_bytes(img.to_array().tobytes())


# Cipher image ----------------------------------------------------------------

def cipher_image_to_bytes(cipher: CipherImage) -> bytes:
    head = CIPHER_MAGIC + struct.pack(">II", cipher.width, cipher.height)
    return head + b"".join(cipher.channels)


def cipher_image_from_bytes(data: bytes) -> CipherImage:
    if data[: len(CIPHER_MAGIC)] != CIPHER_MAGIC:
        raise ParseError("not a cipher-image file (bad magic)")
    if len(data) < len(CIPHER_MAGIC) + 8:
        raise BadLength("cipher-image header truncated")
    width, height = struct.unpack_from(">II", data, len(CIPHER_MAGIC))
    n = width * height
    body = data[len(CIPHER_MAGIC) + 8 :]
    if len(body) != 3 * n:
        raise BadLength(f"cipher payload holds {len(body)} bytes, need {3 * n}")
    return CipherImage(width, height, (body[:n], body[n : 2 * n], body[2 * n :]))


def read_cipher_image(path) -> CipherImage:
    return cipher_image_from_bytes(Path(path).read_bytes())


def write_cipher_image(path, cipher: CipherImage):
    Path(path).write_bytes(cipher_image_to_bytes(cipher))


# Key bundle ------------------------------------------------------------------

def serialize_bundle(bundle: KeyBundle) -> str:
    lines = [
        BUNDLE_MAGIC,
        f"a = {bundle.a!r}",
        f"b = {bundle.b!r}",
        f"x1 = {bundle.x1!r}",
        f"x2 = {bundle.x2!r}",
        f"x3 = {bundle.x3!r}",
        f"rounds = {bundle.rounds}",
        f"zy = {1 if bundle.zy_enabled else 0}",
        f"width = {bundle.width}",
        f"height = {bundle.height}",
        f"hexkey = {bundle.hex_key}",
        f"digitkey = {bundle.digit_key}",
        f"digest_r = {bundle.digest_r.hex()}",
        f"digest_g = {bundle.digest_g.hex()}",
        f"digest_b = {bundle.digest_b.hex()}",
    ]
    return "\n".join(lines) + "\n"


def _parse_float(key, value, line):
    try:
        return float(value)
    except ValueError:
        raise ParseError(f"{key} must be a decimal number, got {value!r}", line) from None


def _parse_int(key, value, line):
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"{key} must be an integer, got {value!r}", line) from None


def _parse_digest(key, value, line):
    if len(value) != 64 or any(c not in "0123456789abcdef" for c in value):
        raise ParseError(f"{key} must be 64 lowercase hex characters", line)
    return bytes.fromhex(value)


def parse_bundle(text: str) -> KeyBundle:
    lines = text.splitlines()
    if not lines or lines[0] != BUNDLE_MAGIC:
        raise ParseError(f"bad magic, expected {BUNDLE_MAGIC!r}", 1)
    fields = {}
    where = {}
    for number, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        key, sep, value = raw.partition(" = ")
        if not sep or not key or " " in key:
            raise ParseError(f"malformed line {raw!r}", number)
        if key not in _BUNDLE_KEYS:
            raise ParseError(f"unknown key {key!r}", number)
        if key in fields:
            raise ParseError(f"duplicate key {key!r}", number)
        fields[key] = value
        where[key] = number
    for key in _BUNDLE_KEYS:
        if key not in fields:
            raise ParseError(f"missing key {key!r}")
    zy = _parse_int("zy", fields["zy"], where["zy"])
    if zy not in (0, 1):
        raise ParseError("zy must be 0 or 1", where["zy"])
    return KeyBundle(
        a=_parse_float("a", fields["a"], where["a"]),
        b=_parse_float("b", fields["b"], where["b"]),
        x1=_parse_float("x1", fields["x1"], where["x1"]),
        x2=_parse_float("x2", fields["x2"], where["x2"]),
        x3=_parse_float("x3", fields["x3"], where["x3"]),
        rounds=_parse_int("rounds", fields["rounds"], where["rounds"]),
        zy_enabled=bool(zy),
        width=_parse_int("width", fields["width"], where["width"]),
        height=_parse_int("height", fields["height"], where["height"]),
        hex_key=fields["hexkey"],
        digit_key=fields["digitkey"],
        digest_r=_parse_digest("digest_r", fields["digest_r"], where["digest_r"]),
        digest_g=_parse_digest("digest_g", fields["digest_g"], where["digest_g"]),
        digest_b=_parse_digest("digest_b", fields["digest_b"], where["digest_b"]),
    )


def read_bundle(path) -> KeyBundle:
    return parse_bundle(Path(path).read_text(encoding="utf-8"))


def write_bundle(path, bundle: KeyBundle):
    Path(path).write_text(serialize_bundle(bundle), encoding="utf-8")
