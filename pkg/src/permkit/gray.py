"""Gray-code subset iteration and block partitioning for permanent kernels.

The Ryser and Glynn expansions both walk an index range [0, 2^m) in
reflected-binary Gray order so that consecutive subsets (or sign vectors)
differ in exactly one bit.  A block that starts at an arbitrary index can
rebuild the walker's running state in O(n^2), which is what makes
deterministic block parallelism possible: every block is independent, and
partial sums are combined in ascending block order.
"""

from dataclasses import dataclass

import numpy as np

RYSER = "ryser"
GLYNN = "glynn"


def gray_code(index: int) -> int:
    """Reflected-binary Gray code of ``index``."""
    return index ^ (index >> 1)


def gray_flip_bit(index: int) -> int:
    """Bit position that flips between gray_code(index-1) and gray_code(index).

    Equals the number of trailing zeros of ``index``; requires index >= 1.
    """
    if index <= 0:
        raise ValueError("flip bit is defined for index >= 1")
    return (index & -index).bit_length() - 1


def iteration_exponent(n: int, algorithm: str) -> int:
    """Number of Gray-iterated bits: n for Ryser, n-1 for Glynn."""
    if algorithm == RYSER:
        return n
    if algorithm == GLYNN:
        return n - 1
    raise ValueError(f"unknown algorithm {algorithm!r}")


@dataclass(frozen=True)
class GrayBlock:
    start: int
    length: int


@dataclass(frozen=True)
class BlockPlan:
    n: int
    algorithm: str
    blocks: tuple

    @property
    def total(self) -> int:
        return sum(b.length for b in self.blocks)


def make_block_plan(n: int, algorithm: str, block_count: int) -> BlockPlan:
    """Partition [0, 2^m) into ``block_count`` contiguous near-equal blocks.

    Sizes differ by at most one; blocks are ordered ascending by start and
    cover the range exactly.
    """
    m = iteration_exponent(n, algorithm)
    total = 1 << m
    if block_count < 1:
        raise ValueError("block_count must be >= 1")
    if block_count > total:
        raise ValueError(f"too many blocks: {block_count} > 2^{m}")
    base, extra = divmod(total, block_count)
    blocks = []
    start = 0
    for k in range(block_count):
        length = base + (1 if k < extra else 0)
        blocks.append(GrayBlock(start, length))
        start += length
    return BlockPlan(n=n, algorithm=algorithm, blocks=tuple(blocks))


def default_block_count(n: int, algorithm: str, worker_count: int) -> int:
    """64 blocks per worker, clamped to the iteration range."""
    m = iteration_exponent(n, algorithm)
    return max(1, min(64 * worker_count, 1 << m))


def block_start_state(a: np.ndarray, block: GrayBlock, algorithm: str) -> np.ndarray:
    """State vector the sequential Gray walk holds on arriving at block.start.

    Ryser: per-row sums over the column subset encoded by gray(start).
    Glynn: per-column sums with row signs from gray(start) (row 0 fixed +1;
    bit k set means row k+1 carries sign -1).

    Cost is O(n^2) regardless of block.start.
    """
    n = a.shape[0]
    m = iteration_exponent(n, algorithm)
    if not 0 <= block.start < (1 << m):
        raise ValueError("block start outside iteration range")
    code = gray_code(block.start)
    if algorithm == RYSER:
        state = np.zeros(n, dtype=a.dtype)
        for j in range(n):
            if (code >> j) & 1:
                state = state + a[:, j]
        return state
    state = a[0].copy()
    for i in range(1, n):
        if (code >> (i - 1)) & 1:
            state = state - a[i]
        else:
            state = state + a[i]
    return state
