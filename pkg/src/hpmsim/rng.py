"""Counter-based random streams (Philox4x32-10), vectorised with numpy.

Every uniform variate is a pure function of ``(seed, trial_index, slot,
attempt)``:

* key     = (seed low 32 bits, seed high 32 bits)
* counter = (trial low 32 bits, trial high 32 bits, slot, attempt)

One Philox block yields four 32-bit words, which are folded into two
53-bit doubles on the open interval (0, 1). Because nothing is carried
between trials, any partition of the trial indices across workers
reproduces the serial stream exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PHILOX_M0 = np.uint64(0xD2511F53)
PHILOX_M1 = np.uint64(0xCD9E8D57)
PHILOX_W0 = np.uint64(0x9E3779B9)
PHILOX_W1 = np.uint64(0xBB67AE85)
ROUNDS = 10

_MASK32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)
_MAX_U64 = (1 << 64) - 1


def philox4x32(counter, key) -> np.ndarray:
    """Philox4x32-10 block function.

    Args:
        counter: integer array of shape ``(..., 4)``, each word < 2**32.
        key: two 32-bit key words.

    Returns:
        uint64 array of shape ``(..., 4)`` holding the 32-bit output words.
    """
    ctr = np.asarray(counter, dtype=np.uint64)
    c0, c1, c2, c3 = (ctr[..., i] & _MASK32 for i in range(4))
    k0 = np.uint64(int(key[0]) & 0xFFFFFFFF)
    k1 = np.uint64(int(key[1]) & 0xFFFFFFFF)
    for _ in range(ROUNDS):
        p0 = c0 * PHILOX_M0
        p1 = c2 * PHILOX_M1
        c0, c1, c2, c3 = (
            (p1 >> _SHIFT32) ^ c1 ^ k0,
            p1 & _MASK32,
            (p0 >> _SHIFT32) ^ c3 ^ k1,
            p0 & _MASK32,
        )
        k0 = (k0 + PHILOX_W0) & _MASK32
        k1 = (k1 + PHILOX_W1) & _MASK32
    return np.stack([c0, c1, c2, c3], axis=-1)


def _seed_key(seed: int) -> tuple[int, int]:
    if not 0 <= int(seed) <= _MAX_U64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    seed = int(seed)
    return seed & 0xFFFFFFFF, seed >> 32


def _to_unit(hi: np.ndarray, lo: np.ndarray) -> np.ndarray:
    # 27 + 26 bits -> 53-bit mantissa, offset by half an ulp to exclude 0 and 1.
    a = (hi >> np.uint64(5)).astype(np.float64)
    b = (lo >> np.uint64(6)).astype(np.float64)
    return (a * 67108864.0 + b + 0.5) / 9007199254740992.0


def uniform_pair(seed: int, trial_index, slot: int, attempt=0) -> tuple[np.ndarray, np.ndarray]:
    """Two independent U(0, 1) arrays for the given trials, slot and attempt."""
    idx = np.atleast_1d(np.asarray(trial_index, dtype=np.uint64))
    att = np.broadcast_to(np.asarray(attempt, dtype=np.uint64), idx.shape)
    counter = np.stack(
        [
            idx & _MASK32,
            idx >> _SHIFT32,
            np.full(idx.shape, slot, dtype=np.uint64),
            att,
        ],
        axis=-1,
    )
    w = philox4x32(counter, _seed_key(seed))
    return _to_unit(w[..., 0], w[..., 1]), _to_unit(w[..., 2], w[..., 3])


@dataclass(frozen=True)
class TrialStream:
    """The random stream owned by one trial of one campaign."""

    seed: int
    trial_index: int

    def uniform_pair(self, slot: int, attempt: int = 0) -> tuple[float, float]:
        u1, u2 = uniform_pair(self.seed, self.trial_index, slot, attempt)
        return float(u1[0]), float(u2[0])
