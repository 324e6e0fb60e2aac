"""Security metrics and attack simulations.

Entropy, adjacent-pixel correlation, NPCR/UACI and PSNR follow the usual
image-encryption definitions (correlation moments use 1/N normalization).
Noise parameters follow imaging-toolbox conventions: a flip density for
salt and pepper, a variance on the normalized [0, 1] intensity scale for
Gaussian and speckle noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyPlane,
    PlaneTooSmall,
    RegionOutOfBounds,
    ZeroVariance,
)

DIRECTIONS = ("horizontal", "vertical", "diagonal")
_OFFSETS = {"horizontal": (0, 1), "vertical": (1, 0), "diagonal": (1, 1)}


def histogram(plane: np.ndarray) -> np.ndarray:
    """Counts of each gray level 0..255."""
    return np.bincount(np.asarray(plane, dtype=np.uint8).reshape(-1), minlength=256)


def entropy(plane: np.ndarray) -> float:
    """Shannon entropy in bits over the 256 gray levels."""
    counts = histogram(plane)
    total = counts.sum()
    if total == 0:
        raise EmptyPlane("entropy of an empty plane is undefined")
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def adjacent_correlation(
    plane: np.ndarray, direction: str, n: int = 8000, seed: int = 0
) -> float:
    """Correlation coefficient of n randomly sampled adjacent-pixel pairs."""
    if direction not in _OFFSETS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    arr = np.asarray(plane)
    dr, dc = _OFFSETS[direction]
    max_r, max_c = arr.shape[0] - dr, arr.shape[1] - dc
    if max_r < 1 or max_c < 1:
        raise PlaneTooSmall(f"no valid {direction} pairs in a {arr.shape} plane")
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, max_r, size=n)
    cols = rng.integers(0, max_c, size=n)
    u = arr[rows, cols].astype(np.float64)
    v = arr[rows + dr, cols + dc].astype(np.float64)
    du = ((u - u.mean()) ** 2).mean()
    dv = ((v - v.mean()) ** 2).mean()
    if du == 0.0 or dv == 0.0:
        raise ZeroVariance(f"{direction} correlation undefined: constant samples")
    cov = ((u - u.mean()) * (v - v.mean())).mean()
    return float(cov / (math.sqrt(du) * math.sqrt(dv)))


def npcr_uaci(c1: np.ndarray, c2: np.ndarray) -> tuple[float, float]:
    """Pixel change rate and average changing intensity, both in percent."""
    a = np.asarray(c1)
    b = np.asarray(c2)
    if a.shape != b.shape:
        raise DimensionMismatch(f"plane shapes differ: {a.shape} vs {b.shape}")
    npcr = float((a != b).mean() * 100.0)
    uaci = float(np.abs(a.astype(np.float64) - b.astype(np.float64)).mean() / 255.0 * 100.0)
    return npcr, uaci


def psnr(reference: np.ndarray, test: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB; +inf for identical planes."""
    a = np.asarray(reference, dtype=np.float64)
    b = np.asarray(test, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"plane shapes differ: {a.shape} vs {b.shape}")
    mse = float(((a - b) ** 2).mean())
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 ** 2 / mse)


def psnr_planes(reference_planes, test_planes) -> float:
    """PSNR with the squared error pooled over several planes (color PSNR)."""
    sq = 0.0
    count = 0
    for a, b in zip(reference_planes, test_planes):
        a = np.asarray(a, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        if a.shape != b.shape:
            raise DimensionMismatch(f"plane shapes differ: {a.shape} vs {b.shape}")
        sq += float(((a - b) ** 2).sum())
        count += a.size
    mse = sq / count
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 ** 2 / mse)


def add_noise(plane: np.ndarray, kind: str, level: float, seed: int = 0) -> np.ndarray:
    """Seeded noise: salt_pepper flip density, or gaussian/speckle variance."""
    if level < 0:
        raise ValueError(f"noise level must be >= 0, got {level}")
    arr = np.asarray(plane, dtype=np.uint8)
    rng = np.random.default_rng(seed)
    if kind == "salt_pepper":
        out = arr.copy()
        hit = rng.random(arr.shape) < level
        grains = rng.integers(0, 2, size=arr.shape, dtype=np.uint8) * np.uint8(255)
        out[hit] = grains[hit]
        return out
    if kind == "gaussian":
        noise = rng.normal(0.0, math.sqrt(level) * 255.0, size=arr.shape)
        return np.clip(np.rint(arr + noise), 0, 255).astype(np.uint8)
    if kind == "speckle":
        factor = 1.0 + rng.normal(0.0, math.sqrt(level), size=arr.shape)
        return np.clip(np.rint(arr * factor), 0, 255).astype(np.uint8)
    raise ValueError(f"unknown noise kind {kind!r}")


def crop_attack(plane: np.ndarray, x: int, y: int, w: int, h: int) -> np.ndarray:
    """Zero a w x h region whose top-left corner is (x, y) in (col, row) terms."""
    arr = np.asarray(plane, dtype=np.uint8)
    rows, cols = arr.shape
    if x < 0 or y < 0 or w < 0 or h < 0 or x + w > cols or y + h > rows:
        raise RegionOutOfBounds(
            f"region {w}x{h} at ({x}, {y}) outside a {cols}x{rows} plane"
        )
    out = arr.copy()
    out[y : y + h, x : x + w] = 0
    return out


@dataclass
class MetricReport:
    """Per-channel statistics of one image, formatted as `metric.channel[.direction] = value`."""

    entropy: dict[str, float] = field(default_factory=dict)
    correlation: dict[tuple[str, str], float | None] = field(default_factory=dict)
    npcr: dict[str, float] = field(default_factory=dict)
    uaci: dict[str, float] = field(default_factory=dict)
    psnr: dict[str, float] = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = []
        for ch, v in self.entropy.items():
            out.append(f"entropy.{ch} = {v:.6f}")
        for (ch, direction), v in self.correlation.items():
            value = "undefined" if v is None else f"{v:.6f}"
            out.append(f"correlation.{ch}.{direction} = {value}")
        for ch, v in self.npcr.items():
            out.append(f"npcr.{ch} = {v:.6f}")
        for ch, v in self.uaci.items():
            out.append(f"uaci.{ch} = {v:.6f}")
        for ch, v in self.psnr.items():
            out.append(f"psnr.{ch} = {'inf' if math.isinf(v) else f'{v:.4f}'}")
        return out


def evaluate_planes(planes, channel_names=("r", "g", "b"), n: int = 8000, seed: int = 0) -> MetricReport:
    """Entropy and three-direction correlation for each plane."""
    report = MetricReport()
    for name, plane in zip(channel_names, planes):
        report.entropy[name] = entropy(plane)
        for direction in DIRECTIONS:
            try:
                r = adjacent_correlation(plane, direction, n=n, seed=seed)
            except ZeroVariance:
                r = None
            report.correlation[(name, direction)] = r
    return report
