"""Chaos-based image cryptosystem built on a lag-complex logistic map,
an eight-trigrams transform rule and a 48-bit Feistel core, together with
the security-metrics harness used to evaluate it."""

from .analysis import (
    MetricReport,
    add_noise,
    adjacent_correlation,
    crop_attack,
    entropy,
    histogram,
    npcr_uaci,
    psnr,
    psnr_planes,
)
from .errors import LclmzyError
from .formats import (
    parse_bundle,
    read_bundle,
    read_cipher_image,
    read_ppm,
    serialize_bundle,
    write_bundle,
    write_cipher_image,
    write_ppm,
)
from .keymat import KeyBundle, fresh_bundle
from .pipeline import (
    CipherImage,
    Raster,
    compress_image,
    decrypt_image,
    encrypt_image,
)

__version__ = "0.1.0"

__all__ = [
    "CipherImage",
    "KeyBundle",
    "LclmzyError",
    "MetricReport",
    "Raster",
    "add_noise",
    "adjacent_correlation",
    "compress_image",
    "crop_attack",
    "decrypt_image",
    "encrypt_image",
    "entropy",
    "fresh_bundle",
    "histogram",
    "npcr_uaci",
    "parse_bundle",
    "psnr",
    "psnr_planes",
    "read_bundle",
    "read_cipher_image",
    "read_ppm",
    "serialize_bundle",
    "write_bundle",
    "write_cipher_image",
    "write_ppm",
    "__version__",
]
