"""Counter-based uniform randomness built on Philox 4x32-10.

Every uniform is a pure function of (seed, stream tag, a, b, c): there is
no generator state, so draws can be evaluated in any order, on any worker,
and always agree bit for bit.  The 64-bit seed forms the Philox key; the
128-bit counter packs (a >> 1, b, c, tag) and the low bit of `a` selects
one of the two 53-bit doubles carved from the 128-bit output block, so
consecutive `a` values share a block evaluation.

Stream tags keep the per-dyad streams of the different samplers disjoint:
EDGE for the affine-model dyad draws, BASE/HUB/PATH for the event model's
base and per-parent triggers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit, uint32, uint64, float64

# stream tags
TAG_EDGE = 0
TAG_BASE = 1
TAG_HUB = 2
TAG_PATH = 3

# Philox 4x32 round and Weyl constants
_M0 = 0xD2511F53
_M1 = 0xCD9E8D57
_W0 = 0x9E3779B9
_W1 = 0xBB67AE85

_INV53 = 1.0 / 9007199254740992.0  # 2**-53


@njit(inline="always")
def _philox4x32(c0, c1, c2, c3, k0, k1):
    """One 128-bit Philox 4x32-10 block: counter words, key words -> 4 words."""
    for _ in range(10):
        p0 = uint64(_M0) * uint64(c0)
        p1 = uint64(_M1) * uint64(c2)
        c0 = uint32(uint32(p1 >> 32) ^ c1 ^ k0)
        c1 = uint32(p1)
        c2 = uint32(uint32(p0 >> 32) ^ c3 ^ k1)
        c3 = uint32(p0)
        k0 = uint32(k0 + _W0)
        k1 = uint32(k1 + _W1)
    return c0, c1, c2, c3


@njit(inline="always")
def _u53(w_hi, w_lo):
    """Combine two 32-bit words into a double in [0, 1) with 53 random bits."""
    return float64((uint64(w_hi) << 21) | (uint64(w_lo) >> 11)) * _INV53


@njit(inline="always")
def _pair_uniform(a, b, c, tag, k0, k1):
    """uniform(seed, tag, a, b, c); low bit of `a` picks the word pair."""
    w0, w1, w2, w3 = _philox4x32(
        uint32(a >> 1), uint32(b), uint32(c), uint32(tag), k0, k1
    )
    if a & 1:
        return _u53(w2, w3)
    return _u53(w0, w1)


@njit(cache=True, nogil=True)
def _uniform_scalar(k0, k1, tag, a, b, c):
    return _pair_uniform(a, b, c, tag, k0, k1)


@njit(cache=True, nogil=True)
def _fill_uniforms(out, lo, hi, b, c, tag, k0, k1):
    """out[a] = uniform(tag, a, b, c) for a in [lo, hi]; shares blocks in pairs."""
    a = lo
    while a <= hi:
        w0, w1, w2, w3 = _philox4x32(
            uint32(a >> 1), uint32(b), uint32(c), uint32(tag), k0, k1
        )
        if a & 1:
            out[a] = _u53(w2, w3)
            a += 1
        else:
            out[a] = _u53(w0, w1)
            if a + 1 <= hi:
                out[a + 1] = _u53(w2, w3)
            a += 2


@njit(inline="always")
def _fill_pairs(out, lo, hi, b, c, tag, k0, k1):
    """Same uniforms as _fill_uniforms over [lo, hi], written block-pair-wise.

    Writes the full pair (2t, 2t+1) for every touched block with no
    per-element branching (hot-loop form); `out` must extend one slot past
    an even `hi`.
    """
    for t in range(lo >> 1, (hi >> 1) + 1):
        w0, w1, w2, w3 = _philox4x32(uint32(t), uint32(b), uint32(c), uint32(tag), k0, k1)
        a = 2 * t
        out[a] = _u53(w0, w1)
        out[a + 1] = _u53(w2, w3)


def split_seed(seed: int) -> tuple[int, int]:
    """64-bit seed -> two 32-bit Philox key words (low word first)."""
    s = seed & 0xFFFFFFFFFFFFFFFF
    return s & 0xFFFFFFFF, s >> 32


@dataclass(frozen=True)
class RandomSource:
    """Stateless random source: uniforms keyed by (seed, tag, a, b, c)."""

    seed: int

    def uniform(self, tag: int, a: int, b: int, c: int = 0) -> float:
        """Deterministic uniform in [0, 1) for this key."""
        if a < 0 or b < 0 or c < 0:
            raise ValueError("key indices must be non-negative")
        k0, k1 = split_seed(self.seed)
        return float(_uniform_scalar(uint32(k0), uint32(k1), tag, a, b, c))

    def uniforms(self, tag: int, a_values, b: int, c: int = 0) -> np.ndarray:
        """Vector of uniforms over consecutive `a` values [a_lo, a_hi]."""
        a_lo, a_hi = int(a_values[0]), int(a_values[-1])
        if list(a_values) != list(range(a_lo, a_hi + 1)):
            raise ValueError("a_values must be a consecutive ascending range")
        k0, k1 = split_seed(self.seed)
        out = np.empty(a_hi + 1, dtype=np.float64)
        _fill_uniforms(out, a_lo, a_hi, b, c, tag, uint32(k0), uint32(k1))
        return out[a_lo : a_hi + 1]


def as_random_source(rng) -> RandomSource:
    """Accept a RandomSource or a bare integer seed."""
    if isinstance(rng, RandomSource):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RandomSource(int(rng))
    raise TypeError(f"expected RandomSource or int seed, got {type(rng)!r}")
