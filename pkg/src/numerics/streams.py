"""
Counter-Based Random Streams

Every chunk of a stochastic pipeline draws from its own Philox stream keyed
by (seed, stream id), so results do not depend on how chunks are scheduled.
"""
import numpy as np


def stream(seed: int, stream_id: int) -> np.random.Generator:
    """
    Independent generator for one chunk

    Args:
        seed: Pipeline seed (64-bit unsigned)
        stream_id: Chunk index, or any stable identifier

    Returns:
        numpy Generator over a Philox bit generator
    """
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream_id),))
    return np.random.Generator(np.random.Philox(sequence))


def substream(seed: int, *path: int) -> np.random.Generator:
    """Generator keyed by a hierarchical path, e.g. (record, chunk)"""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(sequence))


def derive_seed(seed: int, *path: int) -> int:
    """64-bit seed for a nested pipeline, e.g. the Monte Carlo label of one record"""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(p) for p in path))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])
