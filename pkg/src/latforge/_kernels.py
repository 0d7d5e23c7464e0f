"""Vectorised relation batches for the closure engine.

Two layouts share one interface:

* ``WordKernel`` (n <= 8): each relation is one ``uint64`` with the same bit
  layout as :class:`latforge.relation.Relation`.
* ``RowKernel`` (n <= 64): each relation is ``n`` ``uint64`` rows.

Join is Warshall's closure applied to the union, run over the whole batch at
once.
"""

from __future__ import annotations

import numpy as np

from .relation import LatticeError, Relation

WORD_MAX_N = 8
ROW_MAX_N = 64


class WordKernel:
    def __init__(self, n: int):
        self.n = n
        self.row_mask = np.uint64((1 << n) - 1)
        self.col0_mask = np.uint64(sum(1 << (i * n) for i in range(n)))
        self._shift = [np.uint64(k) for k in range(n * n)]

    def encode(self, rels) -> np.ndarray:
        return np.array([r.bits for r in rels], dtype=np.uint64).reshape(-1)

    def decode_bits(self, arr: np.ndarray) -> list[int]:
        return [int(v) for v in arr.tolist()]

    def meet_outer(self, X, Q):
        return (X[:, None] & Q[None, :]).reshape(-1)

    def join_outer(self, X, Q):
        return self.closure((X[:, None] | Q[None, :]).reshape(-1))

    def closure(self, u: np.ndarray) -> np.ndarray:
        n, s = self.n, self._shift
        u = u.copy()
        for k in range(n):
            col = (u >> s[k]) & self.col0_mask
            row = (u >> s[k * n]) & self.row_mask
            # rows selected by col receive row k; the product never overlaps
            u |= col * row
        return u

    def transpose(self, u: np.ndarray) -> np.ndarray:
        n, s = self.n, self._shift
        out = np.zeros_like(u)
        one = np.uint64(1)
        for i in range(n):
            for j in range(n):
                out |= ((u >> s[i * n + j]) & one) << s[j * n + i]
        return out

    def keys(self, u: np.ndarray) -> np.ndarray:
        return u

    def key_list(self, u: np.ndarray) -> list:
        return u.tolist()

    def popcount(self, u: np.ndarray) -> np.ndarray:
        return np.bitwise_count(u).astype(np.int64)

    def take(self, u, idx):
        return u[idx]

    def concat(self, parts):
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint64)

    def empty(self):
        return np.zeros(0, dtype=np.uint64)


class RowKernel:
    def __init__(self, n: int):
        if n > ROW_MAX_N:
            raise LatticeError(f"closure engine supports ground sets up to {ROW_MAX_N} points")
        self.n = n
        self._shift = np.arange(n, dtype=np.uint64)
        self._void = np.dtype((np.void, 8 * n))

    def encode(self, rels) -> np.ndarray:
        return np.array([r.rows() for r in rels], dtype=np.uint64).reshape(-1, self.n)

    def decode_bits(self, arr: np.ndarray) -> list[int]:
        n = self.n
        out = []
        for rows in arr.tolist():
            bits = 0
            for i, r in enumerate(rows):
                bits |= r << (i * n)
            out.append(bits)
        return out

    def meet_outer(self, X, Q):
        return (X[:, None, :] & Q[None, :, :]).reshape(-1, self.n)

    def join_outer(self, X, Q):
        return self.closure((X[:, None, :] | Q[None, :, :]).reshape(-1, self.n))

    def closure(self, u: np.ndarray) -> np.ndarray:
        u = u.copy()
        one = np.uint64(1)
        for k in range(self.n):
            has = (u >> self._shift[k]) & one
            u |= has * u[:, k : k + 1]
        return u

    def transpose(self, u: np.ndarray) -> np.ndarray:
        one = np.uint64(1)
        bits = (u[:, :, None] >> self._shift[None, None, :]) & one  # (m, i, j)
        bits = bits.transpose(0, 2, 1)
        return np.bitwise_or.reduce(bits << self._shift[None, None, :], axis=2)

    def keys(self, u: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(u).view(self._void).reshape(-1)

    def key_list(self, u: np.ndarray) -> list:
        return [bytes(k) for k in self.keys(u)]

    def popcount(self, u: np.ndarray) -> np.ndarray:
        return np.bitwise_count(u).sum(axis=1).astype(np.int64)

    def take(self, u, idx):
        return u[idx]

    def concat(self, parts):
        return np.concatenate(parts) if parts else np.zeros((0, self.n), dtype=np.uint64)

    def empty(self):
        return np.zeros((0, self.n), dtype=np.uint64)


def make_kernel(n: int):
    return WordKernel(n) if n <= WORD_MAX_N else RowKernel(n)


def key_of(kernel, r: Relation):
    return kernel.key_list(kernel.encode([r]))[0]
