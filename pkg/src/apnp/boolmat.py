"""Counting products of 0/1 matrices.

``C[i, j]`` is the number of witnesses ``k`` with ``A[i, k] = B[k, j] = 1``.
Rectangular products are cut into square blocks and handed to a square
kernel: a word-packed popcount kernel (cubic) or Strassen over integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

WORD = 64

# configured, not measured
KERNEL_OMEGA = {"packed": 3.0, "strassen": math.log2(7)}


def default_t(omega_eff: float) -> float:
    """Balance exponent ``t = (3 - omega) / 2``."""
    return (3.0 - omega_eff) / 2.0


@dataclass(frozen=True)
class BitMatrix:
    """Row-major bit matrix; each row is packed into ``uint64`` words."""

    rows: int
    cols: int
    words: np.ndarray  # (rows, ceil(cols / 64)) uint64

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> BitMatrix:
        dense = np.asarray(dense)
        if dense.ndim != 2:
            raise ValueError("expected a 2-d array")
        r, c = dense.shape
        nwords = -(-c // WORD)
        padded = np.zeros((r, nwords * WORD), dtype=bool)
        padded[:, :c] = dense != 0
        packed = np.packbits(padded, axis=1, bitorder="little")
        return cls(r, c, np.ascontiguousarray(packed).view(np.uint64).reshape(r, nwords))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols, np.zeros((rows, -(-cols // WORD)), dtype=np.uint64))

    def to_dense(self) -> np.ndarray:
        raw = self.words.view(np.uint8).reshape(self.rows, -1)
        return np.unpackbits(raw, axis=1, count=self.cols, bitorder="little").astype(bool)

    def transpose(self) -> BitMatrix:
        return BitMatrix.from_dense(self.to_dense().T)


def _packed_kernel(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    s = a.shape[0]
    pa = BitMatrix.from_dense(a).words
    pbt = BitMatrix.from_dense(b.T).words
    out = np.empty((s, s), dtype=np.uint32)
    # bound the temporary to about 8 MB
    step = max(1, (1 << 20) // max(1, s * pa.shape[1]))
    for r0 in range(0, s, step):
        both = pa[r0:r0 + step, None, :] & pbt[None, :, :]
        out[r0:r0 + step] = np.bitwise_count(both).sum(axis=2, dtype=np.uint32)
    return out


def _strassen(a: np.ndarray, b: np.ndarray, cutoff: int) -> np.ndarray:
    s = a.shape[0]
    if s <= cutoff or s % 2:
        return a @ b
    h = s // 2
    a11, a12, a21, a22 = a[:h, :h], a[:h, h:], a[h:, :h], a[h:, h:]
    b11, b12, b21, b22 = b[:h, :h], b[:h, h:], b[h:, :h], b[h:, h:]
    m1 = _strassen(a11 + a22, b11 + b22, cutoff)
    m2 = _strassen(a21 + a22, b11, cutoff)
    m3 = _strassen(a11, b12 - b22, cutoff)
    m4 = _strassen(a22, b21 - b11, cutoff)
    m5 = _strassen(a11 + a12, b22, cutoff)
    m6 = _strassen(a21 - a11, b11 + b12, cutoff)
    m7 = _strassen(a12 - a22, b21 + b22, cutoff)
    out = np.empty((s, s), dtype=np.int64)
    out[:h, :h] = m1 + m4 - m5 + m7
    out[:h, h:] = m3 + m5
    out[h:, :h] = m2 + m4
    out[h:, h:] = m1 - m2 + m3 + m6
    return out


def _strassen_kernel(a: np.ndarray, b: np.ndarray, cutoff: int = 64) -> np.ndarray:
    return _strassen(a.astype(np.int64), b.astype(np.int64), cutoff).astype(np.uint32)


_KERNELS: dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "packed": _packed_kernel,
    "strassen": _strassen_kernel,
}


def square_kernel(a: np.ndarray, b: np.ndarray, kernel: str = "packed") -> np.ndarray:
    """Counting product of two equal square 0/1 blocks (dense bool input)."""
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError("square_kernel needs two equal square blocks")
    try:
        fn = _KERNELS[kernel]
    except KeyError:
        raise ValueError(f"unknown kernel {kernel!r}") from None
    return fn(a, b)


def block_side(r: int, k: int, c: int) -> int:
    """Square block side: the smallest dimension, clamped to [64, 512] in steps of 64."""
    s = min(max(min(r, k, c), WORD), 512)
    return -(-s // WORD) * WORD


@dataclass
class MulStats:
    calls: int = 0
    cell_ops: int = 0
    blocks: int = 0


def mul_count(
    a: BitMatrix | np.ndarray,
    b: BitMatrix | np.ndarray,
    kernel: str = "packed",
    block: Optional[int] = None,
    stats: Optional[MulStats] = None,
) -> np.ndarray:
    """Witness counts of ``a @ b`` as a ``uint32`` array."""
    da = a.to_dense() if isinstance(a, BitMatrix) else np.asarray(a, dtype=bool)
    db = b.to_dense() if isinstance(b, BitMatrix) else np.asarray(b, dtype=bool)
    r, k = da.shape
    k2, c = db.shape
    if k != k2:
        raise ValueError(f"dimension mismatch: {r}x{k} times {k2}x{c}")
    out = np.zeros((r, c), dtype=np.uint32)
    if stats is not None:
        stats.calls += 1
        stats.cell_ops += r * k * c
    if r == 0 or k == 0 or c == 0:
        return out
    s = block if block is not None else block_side(r, k, c)
    if s < 1:
        raise ValueError("block side must be positive")
    # skip all-zero blocks; sparse indicator matrices are common
    for i0 in range(0, r, s):
        for j0 in range(0, c, s):
            acc = np.zeros((s, s), dtype=np.uint32)
            hit = False
            for k0 in range(0, k, s):
                ablk = da[i0:i0 + s, k0:k0 + s]
                bblk = db[k0:k0 + s, j0:j0 + s]
                if not ablk.any() or not bblk.any():
                    continue
                pa = np.zeros((s, s), dtype=bool)
                pb = np.zeros((s, s), dtype=bool)
                pa[:ablk.shape[0], :ablk.shape[1]] = ablk
                pb[:bblk.shape[0], :bblk.shape[1]] = bblk
                acc += square_kernel(pa, pb, kernel)
                hit = True
                if stats is not None:
                    stats.blocks += 1
            if hit:
                out[i0:i0 + s, j0:j0 + s] = acc[:min(s, r - i0), :min(s, c - j0)]
    return out


def naive_count(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Reference product: loop over the witness index, adding one outer product each."""
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    if a.shape[1] != b.shape[0]:
        raise ValueError("dimension mismatch")
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint32)
    for w in range(a.shape[1]):
        out += np.outer(a[:, w], b[w, :])
    return out
