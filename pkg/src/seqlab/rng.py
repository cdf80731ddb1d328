"""Counter-based uniform random numbers.

Draw ``i`` of a stream is a pure function of ``(seed, i)``: a Philox
generator is keyed by the seed and positioned by counter arithmetic, so any
sub-range of a stream can be produced in isolation and results never depend
on chunking, thread layout, or the order in which ranges are generated.
"""

from __future__ import annotations

import numpy as np

# Philox4x64 emits 4 words per counter tick; word w of the stream is output
# (w % 4) of counter block (w // 4).
_WORDS_PER_BLOCK = 4
_SHIFT = np.uint64(11)
_INV_2_53 = 2.0**-53

MAX_SEED = 2**64 - 1


def raw_words(seed: int, start: int, count: int) -> np.ndarray:
    """64-bit words ``[start, start + count)`` of the stream keyed by ``seed``."""
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    if start < 0 or count < 0:
        raise ValueError("start and count must be non-negative")
    block, rem = divmod(start, _WORDS_PER_BLOCK)
    gen = np.random.Philox(counter=[block, 0, 0, 0], key=seed)
    return gen.random_raw(rem + count)[rem:]


def uniform_stream(seed: int, start: int, count: int) -> np.ndarray:
    """Uniform draws on the open interval (0, 1), one per word index.

    The offset by half an ulp keeps every draw strictly inside (0, 1) so
    inverse-CDF transforms never hit an endpoint singularity.
    """
    words = raw_words(seed, start, count)
    return ((words >> _SHIFT).astype(np.float64) + 0.5) * _INV_2_53
