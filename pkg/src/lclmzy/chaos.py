"""Two-dimensional lag-complex logistic map and the derived key sequences.

The map iterates three coupled real coordinates:

    x' = b * x * (1 - z)
    y' = b * y * (1 - z)
    z' = a * x^2 + y^2

With a = 1 and b in [1.69, 2) the system is chaotic.  All arithmetic is
binary64, evaluated in the literal order above, so that trajectories are
bit-reproducible across implementations.

The recorded trajectories feed three kinds of key material:

* position sequences (stable argsort of a window) used as permutations,
* integer sequences (a fractional-part digit extraction mod 256 or 64),
* the raw reals consumed by the S-box builder.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import InvalidLength, NonFiniteState, WindowOutOfRange


class ChaosParams(NamedTuple):
    a: float = 1.0
    b: float = 1.99


class ChaosState(NamedTuple):
    x: float
    y: float
    z: float


class ChaosSequences(NamedTuple):
    """Recorded trajectories: x1 tracks x, x2 tracks y, x3 tracks z."""

    x1: np.ndarray
    x2: np.ndarray
    x3: np.ndarray


def step(state: ChaosState, params: ChaosParams) -> ChaosState:
    """Advance the map by one iteration."""
    x, y, z = state
    a, b = params
    nx = b * x * (1.0 - z)
    ny = b * y * (1.0 - z)
    nz = a * (x * x) + y * y
    if not (math.isfinite(nx) and math.isfinite(ny) and math.isfinite(nz)):
        raise NonFiniteState(f"map diverged from state {tuple(state)!r}")
    return ChaosState(nx, ny, nz)


def generate_sequences(
    init: ChaosState, params: ChaosParams, burn_in: int, length: int
) -> ChaosSequences:
    """Iterate the map, discard ``burn_in`` steps, then record ``length`` more."""
    if length < 1:
        raise InvalidLength(f"sequence length must be >= 1, got {length}")
    if burn_in < 0:
        raise InvalidLength(f"burn-in must be >= 0, got {burn_in}")
    state = init
    for _ in range(burn_in):
        state = step(state, params)
    xs = np.empty(length, dtype=np.float64)
    ys = np.empty(length, dtype=np.float64)
    zs = np.empty(length, dtype=np.float64)
    for i in range(length):
        state = step(state, params)
        xs[i], ys[i], zs[i] = state
    return ChaosSequences(xs, ys, zs)


def to_integer_sequence(values, modulus: int) -> np.ndarray:
    """Map reals to integers in [0, modulus): floor(frac(X*1e3)*1e3) mod modulus."""
    if modulus not in (256, 64):
        raise ValueError(f"modulus must be 256 or 64, got {modulus}")
    v = np.asarray(values, dtype=np.float64)
    if not np.isfinite(v).all():
        raise NonFiniteState("integer sequence requested from non-finite reals")
    scaled = v * 1e3
    frac = scaled - np.floor(scaled)
    return np.floor(frac * 1e3).astype(np.int64) % modulus


def to_position_sequence(values, window_start: int, window_len: int) -> np.ndarray:
    """Permutation sorting a window ascending: perm[k] is the in-window index
    of the k-th smallest value, ties broken by lower original index."""
    arr = np.asarray(values, dtype=np.float64)
    if window_start < 0 or window_len < 0 or window_start + window_len > arr.size:
        raise WindowOutOfRange(
            f"window [{window_start}, {window_start + window_len}) "
            f"outside sequence of length {arr.size}"
        )
    window = arr[window_start : window_start + window_len]
    return np.argsort(window, kind="stable").astype(np.int64)
