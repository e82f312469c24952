"""Order-preserving parallel map over grid chunks.

Chunk boundaries depend only on the input size and ``chunk``, never on the
worker count, so the concatenated result is bit-identical for any number
of workers.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

DEFAULT_CHUNK = 512


def chunked(values: np.ndarray, chunk: int = DEFAULT_CHUNK) -> list[np.ndarray]:
    values = np.asarray(values)
    return [values[s:s + chunk] for s in range(0, values.size, chunk)] or [values[:0]]


def grid_map(fn, values, workers: int = 1, chunk: int = DEFAULT_CHUNK) -> np.ndarray:
    """``fn`` applied chunk-wise to a 1-d array; results concatenated in grid order.

    ``fn`` must map an array to an array of the same length and be picklable
    when ``workers > 1`` (a module-level function or a functools.partial).
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    parts = chunked(np.asarray(values).ravel(), chunk)
    if workers == 1 or len(parts) == 1:
        out = [fn(p) for p in parts]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(fn, parts))
    return np.concatenate([np.asarray(o) for o in out])
