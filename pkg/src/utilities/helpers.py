"""
Helper Utility Functions
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def db_to_linear(value_db: float) -> float:
    """
    Convert a power ratio from dB to linear scale

    Args:
        value_db: Ratio in dB

    Returns:
        Linear ratio
    """
    return 10.0 ** (value_db / 10.0)


def chunk_sizes(total: int, chunk_size: int) -> List[int]:
    """
    Split a sample count into fixed-size chunks

    The last chunk carries the remainder; the layout depends only on
    (total, chunk_size), never on the worker count.

    Args:
        total: Number of samples
        chunk_size: Samples per chunk

    Returns:
        List of chunk lengths
    """
    full, rest = divmod(total, chunk_size)
    sizes = [chunk_size] * full
    if rest:
        sizes.append(rest)
    return sizes


def chunk_list(lst: Sequence[T], chunk_size: int) -> List[Sequence[T]]:
    """
    Split list into chunks

    Args:
        lst: List to chunk
        chunk_size: Size of each chunk

    Returns:
        List of chunks
    """
    return [lst[i:i + chunk_size] for i in range(0, len(lst), chunk_size)]


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """
    Apply fn to every item on a thread pool, keeping input order

    Args:
        fn: Function to apply
        items: Inputs
        workers: Pool size (1 runs inline)

    Returns:
        Results in the order of items
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def parse_csv_list(raw: str) -> List[str]:
    """Split a comma separated flag value, dropping blanks"""
    return [part.strip() for part in raw.split(",") if part.strip()]
