"""Reproducible random number streams.

Streams are counter-based: stream (seed, index) produces the fixed sequence

    u_j = ((philox4x64_10((j//4, 0, 0, 0), key=(seed, index))[j % 4] >> 11) + 0.5) * 2^-53

of uniforms on (0, 1).  Because u_j is a pure function of (seed, index, j),
results are bit-identical regardless of how work is chunked or spread over
workers, and independent streams are derived by index rather than by
splitting state.  A stream object is a cursor over this sequence and is
meant to have a single logical owner at a time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._philox import uniform_block, uniform_run

__all__ = ["RNGStream"]

_MASK64 = (1 << 64) - 1


def _as_u64(value: int) -> int:
    return int(value) & _MASK64


@dataclass
class RNGStream:
    """Cursor over the uniform sequence of stream ``(seed, stream)``."""

    seed: int
    stream: int = 0
    cursor: int = 0

    def uniforms(self, count: int) -> np.ndarray:
        """Draw ``count`` uniforms on (0, 1), advancing the cursor."""
        if count < 0:
            raise ValueError("count must be >= 0")
        u = uniform_run(_as_u64(self.seed), _as_u64(self.stream), self.cursor, count)
        self.cursor += count
        return u

    def spawn(self, stream: int) -> "RNGStream":
        """Fresh stream with the same seed and the given stream index."""
        return RNGStream(self.seed, stream)


def path_uniform_block(seed: int, path_ids: np.ndarray, block: int) -> np.ndarray:
    """Uniform lanes of one counter block for many streams at once.

    Returns shape ``(len(path_ids), 4)``: row i holds draws 4*block .. 4*block+3
    of stream (seed, path_ids[i]).  Used by the simulation engine, which walks
    streams in step with each other.
    """
    return uniform_block(np.uint64(block), np.uint64(_as_u64(seed)),
                         path_ids.astype(np.uint64))
