"""Keystream and key-matrix derivation from pseudo-orbits.

A sample x in [-1, 1] becomes a byte through y = x/2 + 1, dropping the
first three decimal places (keep the fractional part of 1000*y), then
floor(255 * frac). The fractional part lies in [0, 1), so bytes span
[0, 254] and the value 255 is never produced.

Two keystream modes exist. Single-orbit: one long undamped orbit, bytes
taken from iterate 1 onward (the seed itself is shared knowledge, not
chaotic output). Multi-seed: equispaced seeds i/(seed_count+1) inside
(0, 1), each iterated a short, damped run; short runs limit how far
rounding differences can grow before the next seed resets the orbit,
which is the whole point of the mitigation.
"""

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from cubicrypt import _backend
from cubicrypt.maps import EvaluationScheme, MapConfig, iterate_orbit

SINGLE_ORBIT_ITERATIONS = 70_000
MULTI_SEED_COUNT = 70
MULTI_SEED_ITERATIONS = 1024
MULTI_SEED_R = 3.61
MITIGATION_DAMPING = 0.89

KEY_BYTE_MAX = 254


@dataclass(frozen=True)
class KeystreamConfig:
    """Deterministic recipe for a byte keystream.

    Equal configs always produce bit-identical keystreams; this is the
    key-agreement contract two parties must share.
    """

    mode: Literal["single", "multiseed"]
    scheme: EvaluationScheme = EvaluationScheme.E1
    r: float = 3.6
    damping: float | None = None
    x0: float | None = None
    iterations: int | None = None
    seed_count: int | None = None
    iterations_per_seed: int | None = None

    @classmethod
    def single_orbit(
        cls,
        scheme: EvaluationScheme = EvaluationScheme.E1,
        x0: float = 0.1,
        r: float = 3.6,
        damping: float | None = None,
        iterations: int = SINGLE_ORBIT_ITERATIONS,
    ) -> "KeystreamConfig":
        return cls(
            mode="single", scheme=scheme, r=r, damping=damping, x0=x0, iterations=iterations
        )

    @classmethod
    def multi_seed(
        cls,
        scheme: EvaluationScheme = EvaluationScheme.E1,
        r: float = MULTI_SEED_R,
        damping: float | None = MITIGATION_DAMPING,
        seed_count: int = MULTI_SEED_COUNT,
        iterations_per_seed: int = MULTI_SEED_ITERATIONS,
    ) -> "KeystreamConfig":
        return cls(
            mode="multiseed",
            scheme=scheme,
            r=r,
            damping=damping,
            seed_count=seed_count,
            iterations_per_seed=iterations_per_seed,
        )

    def __post_init__(self):
        object.__setattr__(self, "scheme", EvaluationScheme(self.scheme))
        if self.mode == "single":
            if self.x0 is None or self.iterations is None:
                raise ValueError("single-orbit config needs x0 and iterations")
            if self.iterations < 0:
                raise ValueError("iterations must be >= 0")
        elif self.mode == "multiseed":
            if self.seed_count is None or self.iterations_per_seed is None:
                raise ValueError("multi-seed config needs seed_count and iterations_per_seed")
            if self.seed_count < 1 or self.iterations_per_seed < 1:
                raise ValueError("seed_count and iterations_per_seed must be >= 1")
        else:
            raise ValueError(f"unknown keystream mode {self.mode!r}")

    @property
    def available_samples(self) -> int:
        if self.mode == "single":
            return self.iterations
        return self.seed_count * self.iterations_per_seed

    def seeds(self) -> list[float]:
        """Multi-seed initial conditions: i/(seed_count+1), i = 1..seed_count.

        Strictly inside (0, 1), so the fixed points 0 and 1 are never used
        as seeds.
        """
        if self.mode != "multiseed":
            raise ValueError("seeds() only applies to multi-seed configs")
        return [i / (self.seed_count + 1) for i in range(1, self.seed_count + 1)]


@dataclass(frozen=True)
class KeyMatrix:
    """Image-shaped keystream: height x width bytes, each in [0, 254]."""

    cells: np.ndarray = field(repr=False)

    def __post_init__(self):
        cells = np.ascontiguousarray(self.cells, dtype=np.uint8)
        if cells.ndim != 2:
            raise ValueError(f"key matrix must be 2-D, got shape {cells.shape}")
        if cells.size and int(cells.max()) > KEY_BYTE_MAX:
            raise ValueError(f"key bytes must lie in [0, {KEY_BYTE_MAX}]")
        cells.flags.writeable = False
        object.__setattr__(self, "cells", cells)

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    @property
    def height(self) -> int:
        return self.cells.shape[0]


def normalize_sample(x: float) -> int:
    """Byte value of one orbit sample; raises if x is outside [-1, 1]."""
    out = np.empty(1, dtype=np.uint8)
    bad = _backend.normalize_block(np.array([x], dtype=np.float64), out)
    if bad >= 0:
        raise ValueError(f"sample {x!r} outside [-1, 1] cannot be normalized")
    return int(out[0])


def _normalized(samples: np.ndarray) -> np.ndarray:
    out = np.empty(len(samples), dtype=np.uint8)
    bad = _backend.normalize_block(np.ascontiguousarray(samples), out)
    if bad >= 0:
        raise ValueError(
            f"orbit sample at index {bad} ({samples[bad]!r}) outside [-1, 1]"
        )
    return out


def generate_keystream(config: KeystreamConfig, count: int) -> np.ndarray:
    """First ``count`` bytes of the keystream described by ``config``.

    Single-orbit mode normalizes iterates 1..count. Multi-seed mode
    concatenates each seed's normalized iterates in seed order (seed
    ascending, iterate ascending) and truncates; the order is part of the
    key-agreement contract, since any reorder breaks decryption.
    """
    if count < 0:
        raise ValueError(f"sample count must be >= 0, got {count}")
    if count > config.available_samples:
        raise ValueError(
            f"keystream needs {count} samples but the config provides only "
            f"{config.available_samples}"
        )
    if config.mode == "single":
        orbit = iterate_orbit(
            MapConfig(r=config.r, x0=config.x0, damping=config.damping, scheme=config.scheme),
            count,
        )
        return _normalized(orbit.samples[1:])
    parts = []
    remaining = count
    for x0 in config.seeds():
        if remaining <= 0:
            break
        orbit = iterate_orbit(
            MapConfig(r=config.r, x0=x0, damping=config.damping, scheme=config.scheme),
            config.iterations_per_seed,
        )
        block = _normalized(orbit.samples[1:])
        parts.append(block[:remaining])
        remaining -= len(parts[-1])
    if parts:
        return np.concatenate(parts)
    return np.empty(0, dtype=np.uint8)


def build_key_matrix(stream, width: int, height: int) -> KeyMatrix:
    """Fill a height x width matrix from a byte stream, top to bottom then
    left to right (column-major): stream[0] lands at (row 0, col 0),
    stream[1] at (row 1, col 0). Excess stream bytes are ignored.
    """
    if width < 1 or height < 1:
        raise ValueError(f"matrix dimensions must be positive, got {width}x{height}")
    flat = np.frombuffer(bytes(stream), dtype=np.uint8) if isinstance(
        stream, (bytes, bytearray)
    ) else np.asarray(stream, dtype=np.uint8).ravel()
    needed = width * height
    if len(flat) < needed:
        raise ValueError(f"stream has {len(flat)} bytes; {needed} needed for {width}x{height}")
    return KeyMatrix(cells=flat[:needed].reshape((height, width), order="F"))


def key_matrix_for(config: KeystreamConfig, width: int, height: int) -> KeyMatrix:
    """Keystream generation and matrix fill in one step."""
    return build_key_matrix(generate_keystream(config, width * height), width, height)
