"""Small shared helpers: log-domain powers and deterministic parallel mapping."""

import math
from concurrent.futures import ThreadPoolExecutor

from .errors import DomainError


def kpow(k, t):
    """k**t for real t, computed as exp(t*ln k) so large exponents stay finite
    for as long as the float range allows."""
    if k <= 0:
        raise DomainError(f"base must be positive, got {k}")
    return math.exp(t * math.log(k))


def klog(k, x):
    """log base k of x."""
    if x <= 0:
        raise DomainError(f"log argument must be positive, got {x}")
    return math.log(x) / math.log(k)


def ordered_parallel_map(fn, items, threads=1):
    """Map fn over items, preserving input order in the result.

    Results are identical for any thread count: each call is pure and the
    reduction order is the input order, never the completion order.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
