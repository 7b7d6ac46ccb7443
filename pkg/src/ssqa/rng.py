"""Counter-addressed random streams.

Every draw used by an annealer is a pure function of
``(seed, stream, cycle, position)``, so a sweep can be evaluated in any
order or split across workers without changing a single bit. The
underlying generator is numpy's Philox4x64 used in counter mode: the
stream's 64-bit words are laid out cycle after cycle and the Philox counter
is positioned directly at the first word that is needed.
"""

from __future__ import annotations

import numpy as np
from numpy.random import Philox

__all__ = [
    "CounterStream",
    "STREAM_STOCHASTIC",
    "STREAM_METROPOLIS",
    "LANE_INIT",
    "LANE_CYCLE",
]

# SSA is the single-replica case of the SSQA lattice, so both share a stream.
STREAM_STOCHASTIC = 0
STREAM_METROPOLIS = 1

LANE_INIT = 0
LANE_CYCLE = 1

_MASK64 = (1 << 64) - 1
_WORDS_PER_BLOCK = 4  # Philox4x64 emits four words per counter value


class CounterStream:
    """Random words and bits addressed by cycle.

    Parameters
    ----------
    seed : int
        Non-negative run seed.
    stream : int
        Engine stream id; different ids give unrelated streams.
    width : int
        Number of random bits consumed per cycle.
    lane : int
        Sub-stream within an engine (e.g. initial state vs per-cycle noise).
    """

    def __init__(self, seed: int, stream: int, width: int, lane: int = 0):
        if seed < 0:
            raise ValueError("seed must be non-negative")
        if width < 1:
            raise ValueError("width must be positive")
        self.seed = int(seed)
        self.stream = int(stream)
        self.lane = int(lane)
        self.width = int(width)
        self.words_per_cycle = -(-self.width // 64)
        self._key = np.array(
            [self.seed & _MASK64, ((self.stream << 32) | self.lane) & _MASK64], dtype=np.uint64
        )

    def words(self, start_cycle: int, n_cycles: int = 1) -> np.ndarray:
        """Raw words for cycles ``[start_cycle, start_cycle + n_cycles)``.

        Returns an array of shape ``(n_cycles, words_per_cycle)``.
        """
        if start_cycle < 0 or n_cycles < 0:
            raise ValueError("cycle range must be non-negative")
        wpc = self.words_per_cycle
        first = start_cycle * wpc
        block, skip = divmod(first, _WORDS_PER_BLOCK)
        gen = Philox(key=self._key, counter=block)
        raw = gen.random_raw(skip + n_cycles * wpc)[skip:]
        return raw.reshape(n_cycles, wpc)

    def bits(self, start_cycle: int, n_cycles: int = 1) -> np.ndarray:
        """Bits for a cycle range as a ``(n_cycles, width)`` uint8 array.

        Bit ``p`` of a cycle is bit ``p % 64`` (LSB first) of word ``p // 64``.
        """
        w = self.words(start_cycle, n_cycles).astype("<u8", copy=False)
        b = np.unpackbits(w.view(np.uint8), axis=1, bitorder="little")
        return b[:, : self.width]

    def signs(self, start_cycle: int, n_cycles: int = 1) -> np.ndarray:
        """Fair +-1 draws, ``(n_cycles, width)`` as int8."""
        return (2 * self.bits(start_cycle, n_cycles).astype(np.int8) - 1).astype(np.int8)

    def uniforms(self, start_cycle: int, n_cycles: int = 1) -> np.ndarray:
        """Uniforms in [0, 1) with 53-bit resolution, one per word."""
        w = self.words(start_cycle, n_cycles)
        return (w >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))
