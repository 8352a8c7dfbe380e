"""Keyed randomness.

Every random decision in the package is a hash of ``(seed, purpose, ...,
object identity)``.  Nothing draws from a shared stream, so results do not depend
on the order objects are visited in or on how work is split between workers.
"""
import numpy as np

from . import _kernels

SEED_MAX = 2**64 - 1

# purpose tags; values are part of the output contract, never renumber
GRAPH = 1
STEP_A = 2
STEP_B = 3
REPLICATE = 4
SAMPLING = 5


def check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def key(seed: int, purpose: int, index: int = 0) -> np.uint64:
    return np.uint64(_kernels.derive_key(np.uint64(check_seed(seed)), purpose, index))


def subseed(seed: int, replicate: int) -> int:
    """Independent seed for replicate ``replicate`` of an experiment."""
    return int(key(seed, REPLICATE, replicate))


def pair_uniforms(k: np.uint64, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """Uniforms in [0, 1), one per vertex pair, keyed by ``(k, u, v)``."""
    us = np.ascontiguousarray(us, dtype=np.int64)
    vs = np.ascontiguousarray(vs, dtype=np.int64)
    return _kernels.pair_uniforms(np.uint64(k), us, vs)


def generator(seed: int, purpose: int = SAMPLING) -> np.random.Generator:
    """numpy Generator for bulk sampling that needs no per-object keying."""
    return np.random.default_rng(int(key(seed, purpose)))
