"""Order-preserving process-pool map shared by the scans."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from .stieltjes import default_moments, install_moments

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(func: Callable[[T], R], items: Iterable[T], parallelism: int = 1) -> List[R]:
    """``[func(x) for x in items]``, optionally spread over processes.

    Results come back in input order and each item is computed by the same
    deterministic code path, so the output does not depend on
    ``parallelism``.  Workers receive the parent's moment table instead of
    rebuilding it.
    """
    items = list(items)
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    if parallelism == 1 or len(items) <= 1:
        return [func(x) for x in items]
    mom = default_moments()
    with ProcessPoolExecutor(max_workers=parallelism, initializer=install_moments, initargs=(mom,)) as ex:
        return list(ex.map(func, items, chunksize=1))
