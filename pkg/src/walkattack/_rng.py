import numpy as np


def derive_rng(seed, *stream):
    """Generator for an independent stream keyed by ``(seed, *stream)``.

    Streams with different indices are statistically independent, so per-trial
    results do not depend on how trials are scheduled.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [int(s) for s in stream]
    return np.random.default_rng(np.random.SeedSequence(entropy))
