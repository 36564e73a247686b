"""
Seeded random streams for reproducible runs.

Every stochastic operation takes a ``seed`` that may be an int, a
``numpy.random.SeedSequence`` or an existing ``numpy.random.Generator``.
Independent sub-streams are derived with ``SeedSequence.spawn`` so that
results do not depend on evaluation order or thread count.
"""

from __future__ import annotations

from typing import Union

import numpy as np

Seed = Union[int, np.random.SeedSequence, np.random.Generator, None]


def make_rng(seed: Seed) -> np.random.Generator:
    """Return a Generator for any accepted seed form."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def seed_sequence(seed: Seed, *keys: int) -> np.random.SeedSequence:
    """
    Derive a SeedSequence from a base seed and integer keys.

    The same (seed, keys) always yields the same stream, which lets the
    simulator hand each step, location or population member its own
    reproducible generator.
    """
    if isinstance(seed, np.random.Generator):
        base = int(seed.integers(0, 2**63 - 1))
    elif isinstance(seed, np.random.SeedSequence):
        base = int(seed.generate_state(1, dtype=np.uint64)[0])
    else:
        base = 0 if seed is None else int(seed)
    return np.random.SeedSequence([base, *[int(k) for k in keys]])


def spawn(seed: Seed, n: int) -> list[np.random.SeedSequence]:
    """Split a seed into ``n`` independent child sequences."""
    if isinstance(seed, np.random.SeedSequence):
        return seed.spawn(n)
    return seed_sequence(seed).spawn(n)
