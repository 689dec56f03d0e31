"""Seeded Brownian drivers and deterministic block-parallel dispatch.

Every Monte Carlo sample owns one stream, identified by the pair
``(master_seed, stream_index)``.  A stream is a PCG64 generator seeded through
:class:`numpy.random.SeedSequence` with ``spawn_key=(stream_index,)``, so
streams are statistically independent and each one is reproducible on its own,
whatever batch it happens to be simulated in.

Batches are cut into blocks of fixed size :data:`BLOCK_SIZE` before they are
handed to workers.  The block layout depends only on the sample indices, never
on the worker count, which is what makes results independent of
``HARDEDGE_THREADS``.
"""
from __future__ import annotations

import os
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

BLOCK_SIZE = 2048
CHUNK_STEPS = 512
THREADS_ENV = "HARDEDGE_THREADS"


def derive_seed(master_seed: int, label: str) -> int:
    """Return a 64-bit seed for a labelled sub-experiment of ``master_seed``."""
    ss = np.random.SeedSequence([int(master_seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(label.encode())])
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


@dataclass(frozen=True)
class NoiseDriver:
    """One standard Brownian path, addressed by ``(master_seed, stream_index)``.

    Two diffusions that are coupled through their noise term must be integrated
    against the same driver; the integrators in :mod:`hardedge.sde` do this by
    advancing both states with the same increments.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if self.stream_index < 0:
            raise ValueError("stream_index must be nonnegative")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.master_seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=(int(self.stream_index),))
        return np.random.Generator(np.random.PCG64(ss))

    def normals(self, n_steps: int, width: int = 1) -> np.ndarray:
        """First ``n_steps`` standard normal vectors of this stream, shape ``(n_steps, width)``."""
        return self.generator().standard_normal((n_steps, width))


class StreamBlock:
    """Sequential normal draws for a block of streams sharing one master seed.

    ``draw(n)`` returns an array of shape ``(n, width, B)``; column ``b`` is the
    continuation of stream ``indices[b]`` exactly as :meth:`NoiseDriver.normals`
    would produce it.
    """

    def __init__(self, master_seed: int, indices, width: int = 1):
        self.indices = np.asarray(indices, dtype=np.int64)
        self.width = width
        self._gens = [NoiseDriver(master_seed, int(i)).generator() for i in self.indices]

    def __len__(self):
        return len(self._gens)

    def draw(self, n_steps: int) -> np.ndarray:
        out = np.empty((len(self._gens), n_steps, self.width))
        for b, g in enumerate(self._gens):
            g.standard_normal((n_steps, self.width), out=out[b])
        return np.ascontiguousarray(out.transpose(1, 2, 0))


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def split_blocks(indices, block_size: int = BLOCK_SIZE):
    indices = np.asarray(indices, dtype=np.int64)
    return [indices[i:i + block_size] for i in range(0, len(indices), block_size)]


def map_blocks(func, indices, *, block_size: int = BLOCK_SIZE):
    """Apply ``func(block_indices)`` to fixed-size blocks, possibly in parallel.

    Returns the list of per-block results in block order.  ``func`` must be
    picklable when more than one worker is configured.
    """
    blocks = split_blocks(indices, block_size)
    workers = min(worker_count(), len(blocks))
    if workers <= 1:
        return [func(b) for b in blocks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, blocks))
