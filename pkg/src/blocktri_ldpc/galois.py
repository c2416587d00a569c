"""Arithmetic over GF(2^p), 1 <= p <= 8.

Elements are plain integers in ``[0, q)`` whose bits are the coefficients of a
polynomial over GF(2). Addition is XOR; multiplication goes through exp/log
tables built from a fixed primitive polynomial per extension degree.

A few dense helpers (matrix product, inverse) live here as well because both the
gap inversion of the triangulation encoder and the cycle-block tests need them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

#: Reduction polynomial used for each extension degree, as a bitmask.
PRIMITIVE_POLYS = {
    1: 0b11,  # x + 1
    2: 0b111,  # x^2 + x + 1
    3: 0b1011,  # x^3 + x + 1
    4: 0b10011,  # x^4 + x + 1
    5: 0b100101,  # x^5 + x^2 + 1
    6: 0b1000011,  # x^6 + x + 1
    7: 0b10001001,  # x^7 + x^3 + 1
    8: 0b100011101,  # x^8 + x^4 + x^3 + x^2 + 1
}


class SingularError(ArithmeticError):
    """A pivot, diagonal entry or matrix that must be invertible is not."""


@dataclass(frozen=True, eq=False)
class FieldTable:
    """Lookup tables for GF(2^p).

    ``exp`` has ``q - 1`` entries, ``log`` and ``inv`` have ``q`` (the zero slot
    of both is unused and set to 0). ``mul_table`` is the full ``q x q``
    product table as a numpy array, ``mul_rows`` the same as nested lists for
    fast scalar loops.
    """

    p: int
    primitive_poly: int
    exp: tuple
    log: tuple
    inv_table: tuple
    mul_table: np.ndarray = field(repr=False)
    mul_rows: tuple = field(repr=False)

    @property
    def q(self) -> int:
        return 1 << self.p

    @property
    def is_binary(self) -> bool:
        return self.p == 1

    def add(self, a: int, b: int) -> int:
        return a ^ b

    sub = add

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise SingularError("zero has no multiplicative inverse")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def __eq__(self, other):
        return isinstance(other, FieldTable) and other.p == self.p

    def __hash__(self):
        return hash(("GF2p", self.p))

    def __repr__(self):
        return f"FieldTable(q={self.q}, primitive_poly={self.primitive_poly:#b})"


@lru_cache(maxsize=None)
def build_field(p: int) -> FieldTable:
    """Build (and cache) the tables of GF(2^p)."""
    if not isinstance(p, (int, np.integer)) or not 1 <= p <= 8:
        raise ValueError(f"extension degree must be in 1..8, got {p!r}")
    p = int(p)
    q = 1 << p
    poly = PRIMITIVE_POLYS[p]
    exp = [0] * (q - 1)
    log = [0] * q
    x = 1
    for i in range(q - 1):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & q:
            x ^= poly
    if sorted(exp) != list(range(1, q)):
        raise AssertionError(f"polynomial {poly:#b} is not primitive")
    inv = [0] * q
    for a in range(1, q):
        inv[a] = exp[(-log[a]) % (q - 1)]

    table = np.zeros((q, q), dtype=np.uint8)
    nz = np.arange(1, q)
    lg = np.array(log)
    ex = np.array(exp)
    table[1:, 1:] = ex[(lg[nz][:, None] + lg[nz][None, :]) % (q - 1)]
    table.setflags(write=False)
    return FieldTable(
        p=p,
        primitive_poly=poly,
        exp=tuple(exp),
        log=tuple(log),
        inv_table=tuple(inv),
        mul_table=table,
        mul_rows=tuple(tuple(int(v) for v in row) for row in table),
    )


def field_for_order(q: int) -> FieldTable:
    """Field of order ``q``; ``q`` must be a power of two between 2 and 256."""
    if q < 2 or q & (q - 1):
        raise ValueError(f"field order must be a power of two, got {q}")
    return build_field(q.bit_length() - 1)


def gf_add(a: int, b: int) -> int:
    return a ^ b


def gf_mul(gf: FieldTable, a: int, b: int) -> int:
    return gf.mul(a, b)


def gf_inv(gf: FieldTable, a: int) -> int:
    return gf.inv(a)


# ---------------------------------------------------------------------------
# dense helpers (numpy uint8 arrays)
# ---------------------------------------------------------------------------

def dense_matmul(gf: FieldTable, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two dense matrices over the field."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    mt = gf.mul_table
    for k in range(a.shape[1]):
        col = a[:, k]
        row = b[k]
        if col.any() and row.any():
            out ^= mt[col[:, None], row[None, :]]
    return out


def dense_matvec(gf: FieldTable, a: np.ndarray, v: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint8)
    v = np.asarray(v, dtype=np.uint8)
    if a.shape[0] == 0:
        return np.zeros(0, dtype=np.uint8)
    return np.bitwise_xor.reduce(gf.mul_table[a, v[None, :]], axis=1).astype(np.uint8)


def dense_inverse(gf: FieldTable, a: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse; raises :class:`SingularError` if ``a`` is singular."""
    a = np.array(a, dtype=np.uint8)
    k = a.shape[0]
    if a.shape != (k, k):
        raise ValueError("matrix must be square")
    aug = np.concatenate([a, np.eye(k, dtype=np.uint8)], axis=1)
    mt = gf.mul_table
    for col in range(k):
        nz = np.flatnonzero(aug[col:, col])
        if nz.size == 0:
            raise SingularError("matrix is singular")
        piv = col + int(nz[0])
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        aug[col] = mt[gf.inv(int(aug[col, col])), aug[col]]
        factors = aug[:, col].copy()
        factors[col] = 0
        rows = np.flatnonzero(factors)
        if rows.size:
            aug[rows] ^= mt[factors[rows][:, None], aug[col][None, :]]
    return aug[:, k:]
