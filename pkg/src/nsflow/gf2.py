"""Saddle-label arithmetic: nonnegative integer matrices and their mod-2 kernels.

A basic set of a nonsingular Smale flow is labelled by a nonnegative integer
irreducible matrix ``A``.  The only numerical invariant the realizability
conditions need is ``k = dim ker(I - B)`` over F_2, where ``B = A mod 2``.
Rank over F_2 is computed by row elimination on int bitsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.sparse.csgraph import connected_components

__all__ = [
    "IntMatrix",
    "Gf2Matrix",
    "mod2_reduce",
    "gf2_rank",
    "kernel_dim",
    "ssft_k",
    "is_irreducible",
    "find_matrix_with_k",
    "MAX_SEARCH_DIM",
]

# size cap for any exhaustive search or enumeration over matrices
MAX_SEARCH_DIM = 12


@dataclass(frozen=True)
class IntMatrix:
    """Square matrix of nonnegative integers, stored row-major as nested tuples."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        m = len(self.rows)
        if m == 0:
            raise ValueError("matrix must have dimension >= 1")
        for r in self.rows:
            if len(r) != m:
                raise ValueError(f"matrix is not square: row of length {len(r)} in a {m}-row matrix")
            for x in r:
                if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
                    raise ValueError(f"matrix entry {x!r} is not an integer")
                if x < 0:
                    raise ValueError(f"matrix entry {x} is negative")

    @classmethod
    def of(cls, data: Union["IntMatrix", Sequence[Sequence[int]], np.ndarray]) -> "IntMatrix":
        if isinstance(data, IntMatrix):
            return data
        arr = np.asarray(data)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
        if arr.size and not np.issubdtype(arr.dtype, np.integer):
            if not np.all(np.equal(np.mod(arr, 1), 0)):
                raise ValueError("matrix entries must be integers")
        return cls(tuple(tuple(int(x) for x in row) for row in arr.tolist()))

    @property
    def m(self) -> int:
        return len(self.rows)

    def to_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class Gf2Matrix:
    """Square bit matrix; ``rows[i]`` has bit ``j`` set iff entry (i, j) is 1."""

    m: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.m < 1 or len(self.rows) != self.m:
            raise ValueError("Gf2Matrix needs m >= 1 rows")
        limit = 1 << self.m
        for r in self.rows:
            if not 0 <= r < limit:
                raise ValueError(f"row bitset {r} out of range for m={self.m}")

    @classmethod
    def of(cls, data: Union["Gf2Matrix", Sequence[Sequence[int]], np.ndarray]) -> "Gf2Matrix":
        if isinstance(data, Gf2Matrix):
            return data
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if np.any((arr != 0) & (arr != 1)):
            raise ValueError("Gf2Matrix entries must be 0 or 1")
        return cls(arr.shape[0], tuple(_pack_row(row) for row in arr.tolist()))

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def to_array(self) -> np.ndarray:
        return np.array([[self.entry(i, j) for j in range(self.m)] for i in range(self.m)], dtype=np.uint8)


def _pack_row(bits: Iterable[int]) -> int:
    out = 0
    for j, b in enumerate(bits):
        if b & 1:
            out |= 1 << j
    return out


def mod2_reduce(A) -> Gf2Matrix:
    A = IntMatrix.of(A)
    return Gf2Matrix(A.m, tuple(_pack_row(x & 1 for x in row) for row in A.rows))


def gf2_rank(rows: Sequence[int]) -> int:
    """Rank over F_2 of a list of int-bitset rows."""
    work = [r for r in rows if r]
    rank = 0
    while work:
        pivot = work.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        work = [r ^ pivot if r & low else r for r in work]
        work = [r for r in work if r]
    return rank


def kernel_dim(Bmat) -> int:
    """``dim ker(I - B)`` over F_2.  Note ``I - B = I + B`` in characteristic 2."""
    B = Gf2Matrix.of(Bmat)
    shifted = [row ^ (1 << i) for i, row in enumerate(B.rows)]
    return B.m - gf2_rank(shifted)


def ssft_k(A) -> int:
    return kernel_dim(mod2_reduce(A))


def is_irreducible(A) -> bool:
    """True iff the support digraph (arc i->j when a_ij > 0) is strongly connected."""
    arr = IntMatrix.of(A).to_array()
    if arr.shape[0] == 1:
        return True
    n, _ = connected_components(arr > 0, directed=True, connection="strong")
    return n == 1


def find_matrix_with_k(k_target: int) -> IntMatrix:
    """Deterministic irreducible matrix whose mod-2 kernel invariant equals ``k_target``.

    For k >= 1 this is the k x k matrix with 1 on the diagonal and 2 elsewhere:
    its reduction is the identity, so ``I - B`` vanishes.  For k = 0 it is [[2]].
    """
    if k_target < 0:
        raise ValueError("k_target must be >= 0")
    if k_target == 0:
        return IntMatrix(((2,),))
    k = k_target
    return IntMatrix(tuple(tuple(1 if i == j else 2 for j in range(k)) for i in range(k)))
