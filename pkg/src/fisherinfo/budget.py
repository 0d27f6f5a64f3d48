"""Memory cap for grid allocations.

Arrays over ``m**(d*N)`` nodes grow very quickly, so every builder asks
:func:`check_budget` before allocating. The cap defaults to 2 GiB and can be
changed globally or temporarily with :func:`memory_cap`.
"""
from __future__ import annotations

import contextlib
from typing import Iterator

from .errors import BudgetError

DEFAULT_MEM_CAP_BYTES = 2 * 1024**3

_mem_cap = DEFAULT_MEM_CAP_BYTES


def get_mem_cap() -> int:
    return _mem_cap


def set_mem_cap(nbytes: int) -> None:
    global _mem_cap
    if nbytes <= 0:
        raise ValueError("memory cap must be positive")
    _mem_cap = int(nbytes)


@contextlib.contextmanager
def memory_cap(nbytes: int) -> Iterator[None]:
    """Temporarily replace the memory cap."""
    previous = get_mem_cap()
    set_mem_cap(nbytes)
    try:
        yield
    finally:
        set_mem_cap(previous)


def check_budget(n_elements: int, itemsize: int = 8, what: str = "array") -> None:
    nbytes = int(n_elements) * int(itemsize)
    if nbytes > _mem_cap:
        raise BudgetError(
            f"{what} needs {nbytes} bytes, above the memory cap of {_mem_cap} bytes"
        )
